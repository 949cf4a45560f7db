#pragma once

// The bridge between Bloch functions on the half-plane and dyadic
// martingales: hyperbolic boxes, interval-average martingales, Green's
// identity box averages, complexification defects, adjacency constants and
// the transmutation embedding of abstract dyadic martingales.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "blochlab/bloch.hpp"
#include "blochlab/padic.hpp"

namespace blochlab {

double chi(int p);  // log p, the per-generation hyperbolic step

// 1-box and n-box of a dyadic interval I = [j 2^-k, (j+1) 2^-k]
struct HyperbolicBox {
    PAdicIndex interval;  // base 2
    int order = 1;        // n >= 1

    HyperbolicBox(PAdicIndex I, int n);

    // 1-box of I: Re in I, Im in [|I|/2, |I|]
    double im_top() const { return interval.length(); }
    double im_bottom() const { return interval.length() * std::pow(2.0, -order); }
    cplx apex() const {  // midpoint of the top edge of the 1-box
        return cplx(0.5 * (interval.left() + interval.right()), interval.length());
    }
    // hyperbolic mass of the n-box: int dA/y = n log2 |I|
    double mass() const { return order * chi(2) * interval.length(); }
};

struct BoxQuadrature {
    int order_x = 6;
    int order_y = 6;
};

// average of |2 b'/rho|^2 with respect to dA/y over the n-box of I,
// tensor Gauss-Legendre per 1-box of the dyadic decomposition
double box_average(const BlochEvaluator& b, const PAdicIndex& I, int n,
                   const BoxQuadrature& q = {});
// same nodes applied to the constant 1 (must reproduce the box mass)
double box_mass_quadrature(const PAdicIndex& I, int n, const BoxQuadrature& q = {});

// dyadic martingale of a Bloch function --------------------------------------
struct BlochMartingale {
    PAdicMartingale martingale;           // base 2
    double bridge_fidelity = 0.0;         // max |b(z_I) - B_I| over sampled nodes
    double adjacency = 0.0;               // measured max |B_I - B_J|, adjacent same-size
};

// Node value at I is the average of b over I at height 2^-(depth+2); the tree
// is then re-averaged bottom-up, so it is an exact martingale and all
// approximation error sits in the fidelity diagnostic.  When `antiderivative`
// is supplied (A' = b along horizontals; height <= 0 means the boundary
// limit), leaf averages are exact A-differences instead.
struct BridgeOptions {
    int leaf_quadrature = 8;
    std::function<cplx(double x, double y)> antiderivative;  // optional
    double antiderivative_height = 0.0;
};

BlochMartingale martingale_from_bloch(const BlochEvaluator& b, int depth,
                                      const BridgeOptions& opt = {});

// |(1/log2) var_I^n B - box average| (Green's identity defect)
double greens_discrepancy(const BlochMartingale& B, const BlochEvaluator& b,
                          const PAdicIndex& I, int n, const BoxQuadrature& q = {});

// (|var_I^n(Re B) - var_I^n(B)/2|, |var_I^n(Re B, Im B)|)
std::pair<double, double> complexification_defects(const PAdicMartingale& B,
                                                   const PAdicIndex& I, int n);

// max |B_I - B_J| over all adjacent same-length dyadic pairs up to `depth`
double adjacency_constant(const PAdicMartingale& B, int depth);

// Embeds an abstract bounded-increment dyadic martingale into [0,1] as a
// Bloch martingale: each generation expands to two dyadic generations, the
// children values sit on the middle two quarters and the parent value is
// kept on the outer quarters; adjacency <= 4 * jump bound.
BlochMartingale transmutate(const PAdicMartingale& M);

// real-part local variance over n generations (used by complexification)
double local_variance_real_n(const PAdicMartingale& B, const PAdicIndex& I, int n);
double local_covariance_re_im_n(const PAdicMartingale& B, const PAdicIndex& I, int n);

}  // namespace blochlab

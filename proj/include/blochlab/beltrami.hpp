#pragma once

// Beltrami coefficients on the strip {-1 < Im w < 0} and the disk, the
// periodicity machinery, and the Bergman projection / modified Beurling
// transform.
//
// Periodic strip coefficients are piecewise constant on scaled copies of a
// single tile, so every kernel integral reduces to closed-form antiderivative
// differences at cell corners:
//
//   derivative kernel  sum (u+n)^-3 : corner fn  pi*i*m/(1-m)
//   value kernel  (1/2)sum (u+n)^-2 : corner fn  -(1/2)Log(1-m)
//   primitive kernel (1/2)sum(u+n)^-1: corner fn  -(i/(4 pi)) Li2(m)
//
// with m = exp(-2 pi i u), |m| < 1 below the real axis.  No quadrature error
// enters these transforms at all; only row truncation at machine precision.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "blochlab/bloch.hpp"

namespace blochlab {

// values on [0,1] x [-1, -1/p]; row-major bottom-up, 2^g columns
struct StripTile {
    int scale_base = 2;  // p
    int depth_g = 3;
    std::vector<cplx> cells;

    int nx() const { return 1 << depth_g; }
    int ny() const { return 1 << (depth_g - 1); }
    double band_height() const { return 1.0 - 1.0 / scale_base; }
    cplx at(int col, int row) const { return cells.at(static_cast<std::size_t>(row) * nx() + col); }
    void validate() const;
};

StripTile constant_tile(cplx c, int g = 3, int p = 2);
StripTile checkerboard_tile(int g = 3, int p = 2);
StripTile random_unimodular_tile(std::uint64_t seed, int g = 3, int p = 2);

struct BeltramiCoefficient {
    enum class Support { Strip, Disk };
    Support domain = Support::Strip;
    StripTile tile;
    bool periodic = true;
    int invariant_degree = 0;  // Disk form: eventually invariant under z -> z^degree

    // strip field value, -1 < Im zeta < 0 (one period is [0,1) in Re)
    cplx value_strip(cplx zeta) const;
    // disk field value on the annulus image exp(-2 pi) < |z| < 1
    cplx value_disk(cplx z) const;
    void validate() const;
};

// wraps a tile as a periodic strip coefficient
BeltramiCoefficient make_periodic(StripTile tile);
// pullback along z = exp(-2 pi i zeta); |values| preserved, eventually
// invariant under z -> z^p
BeltramiCoefficient descend_to_disk(const BeltramiCoefficient& strip);

// exact equality of mu on all dyadic boxes against the affine pullback of the
// base box (true by construction; exercised by tests on sampled cells)
bool check_periodicity(const BeltramiCoefficient& mu, int scales = 4, int samples = 64);

std::string coefficient_to_json(const BeltramiCoefficient& mu);
BeltramiCoefficient coefficient_from_json(const std::string& text);

// periodized cubic kernel ------------------------------------------------------
cplx periodized_cubic_kernel(cplx w);                    // pi^3 cos(pi w)/sin^3(pi w)
cplx truncated_cubic_lattice_sum(cplx w, int n_terms);   // symmetric partial sums (oracle)

// the modified Beurling transform of a periodic strip coefficient ---------------
class StripField {
public:
    explicit StripField(BeltramiCoefficient mu);

    const BeltramiCoefficient& coefficient() const { return mu_; }

    cplx derivative(cplx z) const;  // -(2/pi) int mu(zeta) (zeta-z)^-3 dA
    cplx value(cplx z) const;       // primitive of the derivative (fixed normalization)
    // A(x+iy) with dA/dx = value; y = 0 gives the boundary limit
    cplx interval_primitive(double x, double y) const;

    // per-cell derivative basis: derivative(z) = sum_c tile[c] * out[c]
    void derivative_basis(cplx z, std::span<cplx> out) const;

    BlochEvaluator evaluator(double norm_bound_hint = 0.0) const;

private:
    template <int Level, typename CellSink>
    void accumulate(cplx z, CellSink&& sink) const;

    BeltramiCoefficient mu_;
    int nx_, ny_, p_;
    std::vector<cplx> corner_x_;   // e^{-2 pi i x_a}
    std::vector<double> corner_y_; // e^{2 pi y_b}
};

// Bergman projection --------------------------------------------------------

struct DiskField {
    std::function<cplx(cplx)> f;
    double support_radius = 1.0;
    std::string name;
};

struct DiskQuadrature {
    int radial_splits = 9;   // dyadic breaks 1 - 2^-s
    int angular_panels = 128;
    int order = 8;
};

// (1/pi) int_D mu(w) (1 - z conj(w))^-2 dA(w), |z| < 1
cplx bergman_projection(const DiskField& mu, cplx z, const DiskQuadrature& q = {});
// d/dz of the above: (1/pi) int mu(w) 2 conj(w) (1 - z conj(w))^-3 dA(w)
cplx bergman_derivative(const DiskField& mu, cplx z, const DiskQuadrature& q = {});

// cell-backed coefficient on the disk (descended form); accurate for |z| <= 0.95,
// degrading beyond (reported by the error estimate, not asserted)
cplx bergman_projection(const BeltramiCoefficient& disk_mu, cplx z);
cplx bergman_derivative(const BeltramiCoefficient& disk_mu, cplx z);

BlochEvaluator bergman_evaluator(const BeltramiCoefficient& disk_mu, double norm_bound_hint = 0.0);
BlochEvaluator bergman_evaluator(const DiskField& mu, double norm_bound_hint = 0.0,
                                 const DiskQuadrature& q = {});

// Beurling transform on |z| > 1 via the reflection identity
//   S mu(z) = -(1/z^2) conj(P[conj mu](1/conj z))
// (the form that matches the defining kernel integral; checked against direct
// quadrature in the tests)
cplx beurling_disk(const DiskField& mu, cplx z, const DiskQuadrature& q = {});
// direct kernel quadrature of -(1/pi) int mu(w) (z-w)^-2 dA(w) (oracle)
cplx beurling_disk_direct(const DiskField& mu, cplx z, const DiskQuadrature& q = {});

}  // namespace blochlab

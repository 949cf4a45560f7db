#pragma once

// Bloch-function evaluators on the upper half-plane, unit disk and exterior
// disk, explicit families (constants, linear, lacunary series) and the radial
// definitions of asymptotic variance, LIL constant and integral means.

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "blochlab/spectrum.hpp"

namespace blochlab {

using cplx = std::complex<double>;

enum class Domain { UpperHalfPlane, UnitDisk, ExteriorDisk };

std::string domain_name(Domain d);

// hyperbolic density: 1/y on H, 2/(1-|z|^2) on D, 2/(|z|^2-1) on D*
double hyperbolic_density(Domain d, cplx z);

struct BlochEvaluator {
    Domain domain = Domain::UnitDisk;
    std::function<cplx(cplx)> value;
    std::function<cplx(cplx)> derivative;
    // declared bound on (1/2) sup |b'|/rho over the experiment window
    double norm_bound = 0.0;
    std::string name;
    // set for half-plane evaluators with b(x+1+iy) = b(x+iy)
    bool periodic_in_x = false;
};

// (1/2)|b'(z)|/rho(z); the quantity whose sup is the Bloch norm used here
double bloch_density(const BlochEvaluator& b, cplx z);

// max of bloch_density over an nr x ntheta hyperbolic-uniform grid of the
// standard experiment window (r_j = 1-2^-j on the disk, y = 2^-j on H)
double sampled_bloch_norm(const BlochEvaluator& b, int nscales = 64, int nangles = 64);

// families ---------------------------------------------------------------
BlochEvaluator constant_bloch(cplx c, Domain d = Domain::UnitDisk);
BlochEvaluator linear_halfplane();  // b(z) = z; Bloch only on bounded windows

struct LacunarySeries {
    std::vector<cplx> coefficients;  // a_k, k = 0..K
    int gap_base = 2;                // terms z^(q^k)

    cplx value(cplx z) const;
    cplx derivative(cplx z) const;
    // exact x-antiderivative of the boundary series (uniformly convergent)
    cplx antiderivative_boundary(double x) const;
    // Parseval circle mean of |b|^2 at radius r (exact for the truncation)
    double parseval_mean(double r) const;
    double tail_bound(double r) const;
};

// unit coefficients, truncation chosen so q^K > 8/(1-r_max)
LacunarySeries lacunary_for_radius(double r_max, int gap_base = 2);
BlochEvaluator lacunary_evaluator(const LacunarySeries& s);

// conformal transport between the three domains; Bloch bound preserved
// (the identifications are hyperbolic isometries)
BlochEvaluator cayley_transport(const BlochEvaluator& b, Domain target);

// periodic transplants along exp(2*pi*i*w): disk <-> half-plane
BlochEvaluator transplant_disk_to_halfplane(const BlochEvaluator& b);
BlochEvaluator transplant_halfplane_to_disk(const BlochEvaluator& b);

// estimators ---------------------------------------------------------------
// circle mean of |b|^2 at radius r divided by |log(1-r)| (uniform-theta
// trapezoid, N a power of two)
double sigma2_radial(const BlochEvaluator& b, double r, int n_theta);

// ladder over r_j = 1-2^-j, j in [j_min, j_max]; error by Richardson halving
SpectrumEstimate sigma2_radial_ladder(const BlochEvaluator& b, int j_min, int j_max,
                                      int n_theta);

// (1/|log h|) int_h^1 int_0^1 |2 b'/rho|^2 dA / y on the half-plane
double sigma2_area(const BlochEvaluator& b, double h, int panel_order = 8);

// per-radius log circle-mean of |exp(tau b)| divided by |log(1-r)|;
// limit = least-squares slope of log-integral against |log(1-r)|
SpectrumEstimate beta_integral_means(const BlochEvaluator& b, cplx tau,
                                     const std::vector<int>& ladder_j, int n_theta);

// max over the theta grid of |b|/sqrt(log(1/(1-r)) logloglog(1/(1-r)))
SpectrumEstimate lil_estimate(const BlochEvaluator& b, int n_theta,
                              const std::vector<int>& ladder_j);

// b(r e^{i theta_k})/sqrt(|log(1-r)|) on a grid (random = true draws seeded
// uniform angles instead of the midpoint grid; use for distribution sampling,
// where a dyadic grid aliases the top octaves of dyadic-lacunary series)
std::vector<cplx> rescaled_boundary_samples(const BlochEvaluator& b, double r, int n,
                                            bool random = false, std::uint64_t seed = 0);

std::vector<int> default_ladder(int j_min, int j_max);

}  // namespace blochlab

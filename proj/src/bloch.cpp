#include "blochlab/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blochlab/parallel.hpp"
#include "blochlab/quadrature.hpp"
#include "blochlab/rng.hpp"

namespace blochlab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::string domain_name(Domain d) {
    switch (d) {
        case Domain::UpperHalfPlane: return "halfplane";
        case Domain::UnitDisk: return "disk";
        case Domain::ExteriorDisk: return "exterior";
    }
    return "?";
}

double hyperbolic_density(Domain d, cplx z) {
    switch (d) {
        case Domain::UpperHalfPlane: return 1.0 / z.imag();
        case Domain::UnitDisk: return 2.0 / (1.0 - std::norm(z));
        case Domain::ExteriorDisk: return 2.0 / (std::norm(z) - 1.0);
    }
    return 0.0;
}

double bloch_density(const BlochEvaluator& b, cplx z) {
    return 0.5 * std::abs(b.derivative(z)) / hyperbolic_density(b.domain, z);
}

double sampled_bloch_norm(const BlochEvaluator& b, int nscales, int nangles) {
    double worst = 0.0;
    for (int j = 1; j <= nscales; ++j) {
        for (int a = 0; a < nangles; ++a) {
            const double frac = (a + 0.5) / nangles;
            cplx z;
            switch (b.domain) {
                case Domain::UpperHalfPlane:
                    z = cplx(frac, std::pow(2.0, -j * 24.0 / nscales));
                    break;
                case Domain::UnitDisk: {
                    const double r = 1.0 - std::pow(2.0, -j * 24.0 / nscales);
                    z = std::polar(r, kTwoPi * frac);
                    break;
                }
                case Domain::ExteriorDisk: {
                    const double r = 1.0 + std::pow(2.0, -j * 24.0 / nscales);
                    z = std::polar(r, kTwoPi * frac);
                    break;
                }
            }
            worst = std::max(worst, bloch_density(b, z));
        }
    }
    return worst;
}

// families -------------------------------------------------------------------

BlochEvaluator constant_bloch(cplx c, Domain d) {
    BlochEvaluator b;
    b.domain = d;
    b.value = [c](cplx) { return c; };
    b.derivative = [](cplx) { return cplx(0.0); };
    b.norm_bound = 0.0;
    b.name = "constant";
    b.periodic_in_x = (d == Domain::UpperHalfPlane);
    return b;
}

BlochEvaluator linear_halfplane() {
    BlochEvaluator b;
    b.domain = Domain::UpperHalfPlane;
    b.value = [](cplx z) { return z; };
    b.derivative = [](cplx) { return cplx(1.0); };
    b.norm_bound = 0.5;  // (1/2) y |b'| <= 1/2 on the window y <= 1
    b.name = "linear";
    return b;
}

cplx LacunarySeries::value(cplx z) const {
    cplx acc = 0.0;
    cplx w = z;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        acc += coefficients[k] * w;
        cplx next = w;
        for (int m = 1; m < gap_base; ++m) next *= w;
        w = next;
    }
    return acc;
}

cplx LacunarySeries::derivative(cplx z) const {
    // d/dz sum a_k z^{q^k} = sum a_k q^k z^{q^k - 1}
    if (std::abs(z) < 1e-300) {
        // only the q^0 = 1 term has a nonzero derivative at 0
        return coefficients.empty() ? cplx(0.0) : coefficients[0];
    }
    cplx acc = 0.0;
    cplx w = z;
    double qk = 1.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        acc += coefficients[k] * qk * w / z;
        cplx next = w;
        for (int m = 1; m < gap_base; ++m) next *= w;
        w = next;
        qk *= gap_base;
    }
    return acc;
}

cplx LacunarySeries::antiderivative_boundary(double x) const {
    // int of sum a_k e^{2 pi i q^k x}: coefficients 1/q^k make this uniformly
    // convergent, which is what makes the exact y->0 martingale possible
    cplx acc = 0.0;
    double qk = 1.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        const double f = qk;
        const double a = kTwoPi * f * x;
        acc += coefficients[k] * cplx(std::cos(a), std::sin(a)) / cplx(0.0, kTwoPi * f);
        qk *= gap_base;
    }
    return acc;
}

double LacunarySeries::parseval_mean(double r) const {
    double acc = 0.0;
    double qk = 1.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        acc += std::norm(coefficients[k]) * std::pow(r, 2.0 * qk);
        qk *= gap_base;
    }
    return acc;
}

double LacunarySeries::tail_bound(double r) const {
    // tail of sum |a_k| r^{q^k} beyond the stored truncation (unit-coefficient bound)
    double qk = 1.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) qk *= gap_base;
    double acc = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double term = std::pow(r, qk);
        acc += term;
        if (term < 1e-18) break;
        qk *= gap_base;
    }
    return acc;
}

LacunarySeries lacunary_for_radius(double r_max, int gap_base) {
    if (!(r_max > 0.0 && r_max < 1.0)) throw std::invalid_argument("lacunary: bad radius");
    if (gap_base < 2) throw std::invalid_argument("lacunary: gap base must be >= 2");
    LacunarySeries s;
    s.gap_base = gap_base;
    double qk = 1.0;
    const double need = 8.0 / (1.0 - r_max);
    int K = 0;
    while (qk <= need && K < 60) {
        qk *= gap_base;
        ++K;
    }
    s.coefficients.assign(K + 1, cplx(1.0));
    return s;
}

BlochEvaluator lacunary_evaluator(const LacunarySeries& s) {
    BlochEvaluator b;
    b.domain = Domain::UnitDisk;
    auto sp = std::make_shared<LacunarySeries>(s);
    b.value = [sp](cplx z) { return sp->value(z); };
    b.derivative = [sp](cplx z) { return sp->derivative(z); };
    b.name = "lacunary-q" + std::to_string(s.gap_base);
    b.norm_bound = 0.0;  // callers may fill via sampled_bloch_norm
    return b;
}

// transports -------------------------------------------------------------------

namespace {
// H -> D: C(w) = (w - i)/(w + i);  D -> H: w = i(1+z)/(1-z);  D* <-> D: 1/z
struct Mobius {
    std::function<cplx(cplx)> map;       // target -> source
    std::function<cplx(cplx)> dmap;      // derivative of the above
};

Mobius identification(Domain source, Domain target) {
    // returns the map phi: target-domain -> source-domain with derivative
    auto h_to_d_inv = [](cplx z) { return cplx(0, 1) * (1.0 + z) / (1.0 - z); };
    auto h_to_d_inv_d = [](cplx z) {
        const cplx den = (1.0 - z);
        return cplx(0, 2) / (den * den);
    };
    auto d_to_h_inv = [](cplx w) { return (w - cplx(0, 1)) / (w + cplx(0, 1)); };
    auto d_to_h_inv_d = [](cplx w) {
        const cplx den = w + cplx(0, 1);
        return cplx(0, 2) / (den * den);
    };
    auto inv = [](cplx z) { return 1.0 / z; };
    auto inv_d = [](cplx z) { return -1.0 / (z * z); };

    Mobius m;
    if (source == target) {
        m.map = [](cplx z) { return z; };
        m.dmap = [](cplx) { return cplx(1.0); };
        return m;
    }
    if (source == Domain::UpperHalfPlane && target == Domain::UnitDisk) {
        m.map = h_to_d_inv;
        m.dmap = h_to_d_inv_d;
    } else if (source == Domain::UnitDisk && target == Domain::UpperHalfPlane) {
        m.map = d_to_h_inv;
        m.dmap = d_to_h_inv_d;
    } else if (source == Domain::UnitDisk && target == Domain::ExteriorDisk) {
        m.map = inv;
        m.dmap = inv_d;
    } else if (source == Domain::ExteriorDisk && target == Domain::UnitDisk) {
        m.map = inv;
        m.dmap = inv_d;
    } else if (source == Domain::UpperHalfPlane && target == Domain::ExteriorDisk) {
        m.map = [h_to_d_inv, inv](cplx z) { return h_to_d_inv(inv(z)); };
        m.dmap = [h_to_d_inv_d, inv, inv_d](cplx z) { return h_to_d_inv_d(inv(z)) * inv_d(z); };
    } else {  // exterior -> halfplane target
        m.map = [d_to_h_inv, inv](cplx w) { return inv(d_to_h_inv(w)); };
        m.dmap = [d_to_h_inv, d_to_h_inv_d, inv_d](cplx w) {
            return inv_d(d_to_h_inv(w)) * d_to_h_inv_d(w);
        };
    }
    return m;
}
}  // namespace

BlochEvaluator cayley_transport(const BlochEvaluator& b, Domain target) {
    if (b.domain == target) return b;
    const Mobius m = identification(b.domain, target);
    BlochEvaluator out;
    out.domain = target;
    auto val = b.value;
    auto der = b.derivative;
    out.value = [val, m](cplx z) { return val(m.map(z)); };
    out.derivative = [der, m](cplx z) { return der(m.map(z)) * m.dmap(z); };
    out.norm_bound = b.norm_bound;  // the identifications are hyperbolic isometries
    out.name = b.name + "@" + domain_name(target);
    return out;
}

BlochEvaluator transplant_disk_to_halfplane(const BlochEvaluator& b) {
    if (b.domain != Domain::UnitDisk)
        throw std::invalid_argument("transplant: disk evaluator required");
    BlochEvaluator out;
    out.domain = Domain::UpperHalfPlane;
    auto val = b.value;
    auto der = b.derivative;
    out.value = [val](cplx w) { return val(std::exp(cplx(0, kTwoPi) * w)); };
    out.derivative = [der](cplx w) {
        const cplx xi = std::exp(cplx(0, kTwoPi) * w);
        return der(xi) * cplx(0, kTwoPi) * xi;
    };
    out.norm_bound = b.norm_bound;
    out.name = b.name + "@periodic";
    out.periodic_in_x = true;
    return out;
}

BlochEvaluator transplant_halfplane_to_disk(const BlochEvaluator& b) {
    if (b.domain != Domain::UpperHalfPlane || !b.periodic_in_x)
        throw std::invalid_argument("transplant: 1-periodic half-plane evaluator required");
    BlochEvaluator out;
    out.domain = Domain::UnitDisk;
    auto val = b.value;
    auto der = b.derivative;
    auto lift = [](cplx z) {
        // w = log z / (2 pi i); well defined for periodic b
        const double th = std::arg(z);
        const double y = -std::log(std::abs(z)) / kTwoPi;
        return cplx(th / kTwoPi, y);
    };
    out.value = [val, lift](cplx z) { return val(lift(z)); };
    out.derivative = [der, lift](cplx z) { return der(lift(z)) / (cplx(0, kTwoPi) * z); };
    out.norm_bound = b.norm_bound;
    out.name = b.name + "@disk";
    return out;
}

// estimators -------------------------------------------------------------------

namespace {
void require_power_of_two(int n) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("N_theta must be a power of two");
}

double circle_mean_abs2(const BlochEvaluator& b, double r, int n) {
    // midpoint rule (= trapezoid for periodic integrands)
    const double sum = chunked_sum(static_cast<std::size_t>(n), [&](std::size_t k) {
        const double th = kTwoPi * (static_cast<double>(k) + 0.5) / n;
        return std::norm(b.value(std::polar(r, th)));
    });
    return sum / n;
}
}  // namespace

double sigma2_radial(const BlochEvaluator& b, double r, int n_theta) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("sigma2_radial: need 0 < r < 1");
    require_power_of_two(n_theta);
    const BlochEvaluator* eff = &b;
    BlochEvaluator transported;
    if (b.domain != Domain::UnitDisk) {
        transported = b.domain == Domain::UpperHalfPlane && b.periodic_in_x
                          ? transplant_halfplane_to_disk(b)
                          : cayley_transport(b, Domain::UnitDisk);
        eff = &transported;
    }
    return circle_mean_abs2(*eff, r, n_theta) / std::abs(std::log(1.0 - r));
}

SpectrumEstimate sigma2_radial_ladder(const BlochEvaluator& b, int j_min, int j_max,
                                      int n_theta) {
    if (j_min < 1 || j_max < j_min) throw std::invalid_argument("sigma2_radial_ladder: bad range");
    SpectrumEstimate est;
    est.method = "sigma2-radial";
    for (int j = j_min; j <= j_max; ++j) {
        const double r = 1.0 - std::pow(2.0, -j);
        est.scales.push_back(j);
        est.values.push_back(sigma2_radial(b, r, n_theta));
    }
    est.limit = est.values.back();
    // Richardson halving at the deepest radius
    const double rdeep = 1.0 - std::pow(2.0, -j_max);
    const double coarse = sigma2_radial(b, rdeep, std::max(2, n_theta / 2));
    est.error = std::abs(est.limit - coarse);
    return est;
}

double sigma2_area(const BlochEvaluator& b, double h, int panel_order) {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("sigma2_area: need 0 < h < 1");
    if (b.domain != Domain::UpperHalfPlane)
        throw std::invalid_argument("sigma2_area: half-plane evaluator required");
    // rows y in [2^-l-1, 2^-l] down to h; the integrand is 4|b'|^2 y
    const int rows = std::max(1, static_cast<int>(std::ceil(-std::log2(h))));
    const GaussRule& rule = gauss_legendre(panel_order);
    double total = 0.0;
    for (int l = 0; l < rows; ++l) {
        const double ytop = std::pow(2.0, -l);
        const double ybot = std::max(h, ytop / 2.0);
        const int nx = panel_order * (1 << std::min(l, 12));
        std::vector<double> ys, wy;
        map_panel(rule, ybot, ytop, ys, wy);
        const double row = chunked_sum(static_cast<std::size_t>(nx), [&](std::size_t ix) {
            const double x0 = static_cast<double>(ix) / nx;
            const double x1 = static_cast<double>(ix + 1) / nx;
            std::vector<double> xs, wx;
            map_panel(rule, x0, x1, xs, wx);
            double acc = 0.0;
            for (std::size_t iy = 0; iy < ys.size(); ++iy)
                for (std::size_t jx = 0; jx < xs.size(); ++jx) {
                    const cplx z(xs[jx], ys[iy]);
                    acc += wx[jx] * wy[iy] * 4.0 * std::norm(b.derivative(z)) * ys[iy];
                }
            return acc;
        });
        total += row;
        if (ybot <= h) break;
    }
    return total / std::abs(std::log(h));
}

SpectrumEstimate beta_integral_means(const BlochEvaluator& b, cplx tau,
                                     const std::vector<int>& ladder_j, int n_theta) {
    require_power_of_two(n_theta);
    if (ladder_j.empty()) throw std::invalid_argument("beta_integral_means: empty ladder");
    const BlochEvaluator* eff = &b;
    BlochEvaluator transported;
    if (b.domain != Domain::UnitDisk) {
        transported = b.domain == Domain::UpperHalfPlane && b.periodic_in_x
                          ? transplant_halfplane_to_disk(b)
                          : cayley_transport(b, Domain::UnitDisk);
        eff = &transported;
    }
    SpectrumEstimate est;
    est.method = "integral-means";
    std::vector<double> logint;
    std::vector<double> absl;
    for (int j : ladder_j) {
        const double r = 1.0 - std::pow(2.0, -j);
        // max-shifted log of the circle mean of exp(Re(tau b))
        std::vector<double> ex(n_theta);
        parallel_blocks(static_cast<std::size_t>(n_theta), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t k = lo; k < hi; ++k) {
                const double th = kTwoPi * (static_cast<double>(k) + 0.5) / n_theta;
                ex[k] = (tau * eff->value(std::polar(r, th))).real();
            }
        });
        const double mx = *std::max_element(ex.begin(), ex.end());
        double acc = 0.0;
        for (double e : ex) acc += std::exp(e - mx);
        const double li = mx + std::log(acc / n_theta);
        const double L = std::abs(std::log(1.0 - r));
        est.scales.push_back(j);
        est.values.push_back(li / L);
        logint.push_back(li);
        absl.push_back(L);
    }
    if (logint.size() >= 2) {
        const LineFit f = fit_line(absl, logint);
        est.limit = f.slope;
        est.error = f.rms;
    } else {
        est.limit = est.values.back();
    }
    return est;
}

SpectrumEstimate lil_estimate(const BlochEvaluator& b, int n_theta,
                              const std::vector<int>& ladder_j) {
    require_power_of_two(n_theta);
    SpectrumEstimate est;
    est.method = "lil-radial";
    const BlochEvaluator* eff = &b;
    BlochEvaluator transported;
    if (b.domain != Domain::UnitDisk) {
        transported = b.domain == Domain::UpperHalfPlane && b.periodic_in_x
                          ? transplant_halfplane_to_disk(b)
                          : cayley_transport(b, Domain::UnitDisk);
        eff = &transported;
    }
    for (int j : ladder_j) {
        const double r = 1.0 - std::pow(2.0, -j);
        const double L = std::log(1.0 / (1.0 - r));
        const double lll = std::log(std::log(L));
        if (!(lll > 0.0))
            throw std::invalid_argument("lil_estimate: radius too shallow (logloglog <= 0)");
        double worst = 0.0;
        for (int k = 0; k < n_theta; ++k) {
            const double th = kTwoPi * (k + 0.5) / n_theta;
            worst = std::max(worst, std::abs(eff->value(std::polar(r, th))));
        }
        est.scales.push_back(j);
        est.values.push_back(worst / std::sqrt(L * lll));
    }
    est.limit = est.values.empty() ? 0.0 : *std::max_element(est.values.begin(), est.values.end());
    return est;
}

std::vector<cplx> rescaled_boundary_samples(const BlochEvaluator& b, double r, int n,
                                            bool random, std::uint64_t seed) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("boundary samples: need 0 < r < 1");
    const BlochEvaluator* eff = &b;
    BlochEvaluator transported;
    if (b.domain != Domain::UnitDisk) {
        transported = b.domain == Domain::UpperHalfPlane && b.periodic_in_x
                          ? transplant_halfplane_to_disk(b)
                          : cayley_transport(b, Domain::UnitDisk);
        eff = &transported;
    }
    std::vector<double> angles(static_cast<std::size_t>(n));
    if (random) {
        Rng rng(seed);
        for (auto& a : angles) a = kTwoPi * rng.uniform();
    } else {
        for (std::size_t k = 0; k < angles.size(); ++k)
            angles[k] = kTwoPi * (static_cast<double>(k) + 0.5) / n;
    }
    const double scale = 1.0 / std::sqrt(std::abs(std::log(1.0 - r)));
    std::vector<cplx> out(angles.size());
    parallel_blocks(angles.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k)
            out[k] = eff->value(std::polar(r, angles[k])) * scale;
    });
    return out;
}

std::vector<int> default_ladder(int j_min, int j_max) {
    std::vector<int> v;
    for (int j = j_min; j <= j_max; ++j) v.push_back(j);
    return v;
}

}  // namespace blochlab

#include "blochlab/beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blochlab/parallel.hpp"
#include "blochlab/quadrature.hpp"
#include "blochlab/rng.hpp"
#include "json.hpp"

namespace blochlab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;
}  // namespace

// --- tiles -------------------------------------------------------------------

void StripTile::validate() const {
    if (scale_base < 2) throw std::invalid_argument("StripTile: scale base must be >= 2");
    if (depth_g < 1 || depth_g > 8) throw std::invalid_argument("StripTile: bad depth");
    if (cells.size() != static_cast<std::size_t>(nx()) * ny())
        throw std::invalid_argument("StripTile: cell count mismatch");
    for (cplx v : cells)
        if (std::abs(v) > 1.0 + 1e-12)
            throw std::invalid_argument("StripTile: |value| must be <= 1");
}

StripTile constant_tile(cplx c, int g, int p) {
    StripTile t;
    t.scale_base = p;
    t.depth_g = g;
    t.cells.assign(static_cast<std::size_t>(t.nx()) * t.ny(), c);
    t.validate();
    return t;
}

StripTile checkerboard_tile(int g, int p) {
    StripTile t;
    t.scale_base = p;
    t.depth_g = g;
    t.cells.resize(static_cast<std::size_t>(t.nx()) * t.ny());
    for (int b = 0; b < t.ny(); ++b)
        for (int a = 0; a < t.nx(); ++a)
            t.cells[static_cast<std::size_t>(b) * t.nx() + a] = ((a + b) % 2 == 0) ? 1.0 : -1.0;
    return t;
}

StripTile random_unimodular_tile(std::uint64_t seed, int g, int p) {
    StripTile t;
    t.scale_base = p;
    t.depth_g = g;
    Rng rng(seed);
    t.cells.resize(static_cast<std::size_t>(t.nx()) * t.ny());
    for (auto& c : t.cells) {
        const double phi = kTwoPi * rng.uniform();
        c = cplx(std::cos(phi), std::sin(phi));
    }
    return t;
}

// --- coefficients ------------------------------------------------------------

void BeltramiCoefficient::validate() const {
    tile.validate();
    if (domain == Support::Disk && invariant_degree < 2)
        throw std::invalid_argument("BeltramiCoefficient: disk form needs invariant degree");
}

cplx BeltramiCoefficient::value_strip(cplx zeta) const {
    if (domain != Support::Strip) throw std::invalid_argument("value_strip: strip form required");
    const double t = -zeta.imag();
    if (!(t > 0.0 && t < 1.0)) return 0.0;
    const double p = tile.scale_base;
    // row s: t in (p^-s-1, p^-s]
    int s = static_cast<int>(std::floor(-std::log(t) / std::log(p) + 1e-12));
    s = std::max(0, s);
    const double ps = std::pow(p, s);
    double xs = zeta.real() * ps;
    xs -= std::floor(xs);
    const double eta = std::clamp(zeta.imag() * ps, -1.0, -1.0 / p);
    const int a = std::min(tile.nx() - 1, static_cast<int>(xs * tile.nx()));
    const double band0 = -1.0;
    const int b = std::clamp(static_cast<int>((eta - band0) / tile.band_height() * tile.ny()), 0,
                             tile.ny() - 1);
    return tile.at(a, b);
}

cplx BeltramiCoefficient::value_disk(cplx z) const {
    if (domain != Support::Disk) throw std::invalid_argument("value_disk: disk form required");
    const double r = std::abs(z);
    if (!(r > 0.0 && r < 1.0)) return 0.0;
    // zeta = i log z / (2 pi): strip preimage under z = exp(-2 pi i zeta)
    const cplx zeta(-std::arg(z) / kTwoPi, std::log(r) / kTwoPi);
    BeltramiCoefficient strip{Support::Strip, tile, periodic, 0};
    const cplx mu = strip.value_strip(zeta);
    if (mu == cplx(0.0)) return 0.0;
    return -(z / std::conj(z)) * mu;
}

BeltramiCoefficient make_periodic(StripTile tile) {
    tile.validate();
    BeltramiCoefficient mu;
    mu.domain = BeltramiCoefficient::Support::Strip;
    mu.tile = std::move(tile);
    mu.periodic = true;
    mu.invariant_degree = 0;
    return mu;
}

BeltramiCoefficient descend_to_disk(const BeltramiCoefficient& strip) {
    if (strip.domain != BeltramiCoefficient::Support::Strip || !strip.periodic)
        throw std::invalid_argument("descend_to_disk: periodic strip coefficient required");
    BeltramiCoefficient out = strip;
    out.domain = BeltramiCoefficient::Support::Disk;
    out.invariant_degree = strip.tile.scale_base;
    return out;
}

bool check_periodicity(const BeltramiCoefficient& mu, int scales, int samples) {
    if (mu.domain != BeltramiCoefficient::Support::Strip) return false;
    Rng rng(271828);
    const int p = mu.tile.scale_base;
    for (int s = 0; s < scales; ++s) {
        const double ps = std::pow(p, s);
        for (int i = 0; i < samples; ++i) {
            // sample a point of the base box and its affine image in box (s, k)
            const cplx base(rng.uniform(), -1.0 + mu.tile.band_height() * rng.uniform());
            const double k = std::floor(rng.uniform() * ps);
            const cplx image((base.real() + k) / ps, base.imag() / ps);
            if (mu.value_strip(base) != mu.value_strip(image)) return false;
        }
    }
    return true;
}

std::string coefficient_to_json(const BeltramiCoefficient& mu) {
    nlohmann::json j;
    j["format"] = "blochlab-beltrami-1";
    j["domain"] = mu.domain == BeltramiCoefficient::Support::Strip ? "strip" : "disk";
    j["scale_base"] = mu.tile.scale_base;
    j["grid_depth"] = mu.tile.depth_g;
    j["periodic"] = mu.periodic;
    j["invariant_degree"] = mu.invariant_degree;
    nlohmann::json cells = nlohmann::json::array();
    for (cplx v : mu.tile.cells) cells.push_back({v.real(), v.imag()});
    j["cells"] = std::move(cells);
    return j.dump();
}

BeltramiCoefficient coefficient_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "blochlab-beltrami-1")
        throw std::invalid_argument("unknown coefficient format");
    BeltramiCoefficient mu;
    mu.domain = j.at("domain").get<std::string>() == "strip"
                    ? BeltramiCoefficient::Support::Strip
                    : BeltramiCoefficient::Support::Disk;
    mu.tile.scale_base = j.value("scale_base", 2);
    mu.tile.depth_g = j.at("grid_depth").get<int>();
    mu.periodic = j.value("periodic", true);
    mu.invariant_degree = j.value("invariant_degree", 0);
    for (const auto& e : j.at("cells"))
        mu.tile.cells.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    mu.tile.validate();
    return mu;
}

// --- periodized kernel ---------------------------------------------------------

cplx periodized_cubic_kernel(cplx w) {
    const cplx s = std::sin(kPi * w);
    return kPi * kPi * kPi * std::cos(kPi * w) / (s * s * s);
}

cplx truncated_cubic_lattice_sum(cplx w, int n_terms) {
    // symmetric pairs, summed small-to-large magnitude for accuracy
    cplx acc = 0.0;
    for (int n = n_terms; n >= 1; --n) {
        const cplx a = w + static_cast<double>(n);
        const cplx b = w - static_cast<double>(n);
        acc += 1.0 / (a * a * a) + 1.0 / (b * b * b);
    }
    acc += 1.0 / (w * w * w);
    return acc;
}

// --- StripField ----------------------------------------------------------------

namespace {

inline cplx dilog_small(cplx m) {
    // |m| <= exp(-2 pi / p) < 0.21 for p <= 4; plain series
    cplx acc = 0.0;
    cplx pw = m;
    for (int k = 1; k <= 28; ++k) {
        acc += pw / static_cast<double>(k * k);
        if (std::norm(pw) < 1e-36) break;
        pw *= m;
    }
    return acc;
}

// corner functions per kernel level; constants that cancel in 4-corner
// alternating sums are dropped
inline cplx corner_l3(cplx m) { return cplx(0.0, kPi) * m / (1.0 - m); }
inline cplx corner_l2(cplx m) { return -0.5 * std::log(1.0 - m); }
inline cplx corner_l1(cplx m) { return cplx(0.0, -0.25 / kPi) * dilog_small(m); }

}  // namespace

StripField::StripField(BeltramiCoefficient mu) : mu_(std::move(mu)) {
    if (mu_.domain != BeltramiCoefficient::Support::Strip || !mu_.periodic)
        throw std::invalid_argument("StripField: periodic strip coefficient required");
    mu_.validate();
    nx_ = mu_.tile.nx();
    ny_ = mu_.tile.ny();
    p_ = mu_.tile.scale_base;
    corner_x_.resize(nx_ + 1);
    corner_y_.resize(ny_ + 1);
    for (int a = 0; a <= nx_; ++a) {
        const double x = static_cast<double>(a) / nx_;
        corner_x_[a] = std::polar(1.0, -kTwoPi * x);
    }
    for (int b = 0; b <= ny_; ++b) {
        const double y = -1.0 + mu_.tile.band_height() * static_cast<double>(b) / ny_;
        corner_y_[b] = std::exp(kTwoPi * y);
    }
}

template <int Level, typename CellSink>
void StripField::accumulate(cplx z, CellSink&& sink) const {
    if (!(z.imag() >= 0.0))
        throw std::invalid_argument("StripField: evaluation needs Im z >= 0");
    thread_local std::vector<cplx> corner;
    corner.resize(static_cast<std::size_t>(nx_ + 1) * (ny_ + 1));

    // W = exp(2 pi i p^s z), chained as W <- W^p to keep phases coherent
    cplx W = std::exp(cplx(0.0, kTwoPi) * z);
    double factor = 1.0;
    double total_mag = 0.0;
    int quiet_rows = 0;
    for (int s = 0; s <= 64; ++s) {
        if (std::abs(W) < 1e-280) break;
        for (int b = 0; b <= ny_; ++b) {
            const cplx wy = corner_y_[b] * W;
            for (int a = 0; a <= nx_; ++a) {
                const cplx m = corner_x_[a] * wy;
                cplx h;
                if constexpr (Level == 3) h = corner_l3(m);
                else if constexpr (Level == 2) h = corner_l2(m);
                else h = corner_l1(m);
                corner[static_cast<std::size_t>(b) * (nx_ + 1) + a] = h;
            }
        }
        double row_mag = 0.0;
        for (int b = 0; b < ny_; ++b) {
            const std::size_t r0 = static_cast<std::size_t>(b) * (nx_ + 1);
            const std::size_t r1 = static_cast<std::size_t>(b + 1) * (nx_ + 1);
            for (int a = 0; a < nx_; ++a) {
                const cplx combo =
                    corner[r1 + a + 1] - corner[r1 + a] - corner[r0 + a + 1] + corner[r0 + a];
                // cell integral = (1/i) * combo
                const cplx v = factor * cplx(0.0, -1.0) * combo;
                row_mag += std::abs(v);
                sink(static_cast<std::size_t>(b) * nx_ + a, v);
            }
        }
        total_mag += row_mag;
        if (row_mag < 3e-17 * (1.0 + total_mag)) {
            if (++quiet_rows >= 2) break;
        } else {
            quiet_rows = 0;
        }
        // next row: scale z by p
        cplx Wn = W;
        for (int m = 1; m < p_; ++m) Wn *= W;
        W = Wn;
        if constexpr (Level == 3) factor *= p_;
        else if constexpr (Level == 1) factor /= p_;
    }
}

cplx StripField::derivative(cplx z) const {
    cplx total = 0.0;
    const auto& cells = mu_.tile.cells;
    accumulate<3>(z, [&](std::size_t c, cplx v) { total += cells[c] * v; });
    return -(2.0 / kPi) * total;
}

cplx StripField::value(cplx z) const {
    cplx total = 0.0;
    const auto& cells = mu_.tile.cells;
    accumulate<2>(z, [&](std::size_t c, cplx v) { total += cells[c] * v; });
    return -(2.0 / kPi) * total;
}

cplx StripField::interval_primitive(double x, double y) const {
    cplx total = 0.0;
    const auto& cells = mu_.tile.cells;
    accumulate<1>(cplx(x, y), [&](std::size_t c, cplx v) { total += cells[c] * v; });
    return -(2.0 / kPi) * total;
}

void StripField::derivative_basis(cplx z, std::span<cplx> out) const {
    if (out.size() != mu_.tile.cells.size())
        throw std::invalid_argument("derivative_basis: bad output size");
    for (auto& v : out) v = 0.0;
    accumulate<3>(z, [&](std::size_t c, cplx v) { out[c] += v; });
    const double scale = -(2.0 / kPi);
    for (auto& v : out) v *= scale;
}

BlochEvaluator StripField::evaluator(double norm_bound_hint) const {
    auto self = std::make_shared<StripField>(*this);
    BlochEvaluator b;
    b.domain = Domain::UpperHalfPlane;
    b.value = [self](cplx z) { return self->value(z); };
    b.derivative = [self](cplx z) { return self->derivative(z); };
    b.norm_bound = norm_bound_hint;
    b.name = "beurling-strip-g" + std::to_string(mu_.tile.depth_g);
    b.periodic_in_x = true;
    return b;
}

// --- Bergman projection ----------------------------------------------------------

namespace {

struct PolarGrid {
    std::vector<double> radial_breaks;
    int angular_panels;
    int order;
};

PolarGrid polar_grid(const DiskQuadrature& q, double support_radius) {
    PolarGrid g;
    g.radial_breaks.push_back(0.0);
    for (int s = 1; s <= q.radial_splits; ++s) {
        const double r = 1.0 - std::pow(2.0, -s);
        if (r < support_radius) g.radial_breaks.push_back(r);
    }
    g.radial_breaks.push_back(support_radius);
    g.angular_panels = q.angular_panels;
    g.order = q.order;
    return g;
}

// integral of mu(w) * kernel(w) over the disk in polar panels
cplx polar_integral(const DiskField& mu, const PolarGrid& g,
                    const std::function<cplx(cplx)>& kernel) {
    const GaussRule& rule = gauss_legendre(g.order);
    const std::size_t radial_panels = g.radial_breaks.size() - 1;
    const std::size_t total = radial_panels * static_cast<std::size_t>(g.angular_panels);
    return chunked_sum_complex(total, [&](std::size_t idx) {
        const std::size_t ri = idx / g.angular_panels;
        const std::size_t ai = idx % g.angular_panels;
        std::vector<double> rs, wr, ts, wt;
        map_panel(rule, g.radial_breaks[ri], g.radial_breaks[ri + 1], rs, wr);
        const double t0 = kTwoPi * static_cast<double>(ai) / g.angular_panels;
        const double t1 = kTwoPi * static_cast<double>(ai + 1) / g.angular_panels;
        map_panel(rule, t0, t1, ts, wt);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < ts.size(); ++j) {
                const cplx w = std::polar(rs[i], ts[j]);
                acc += wr[i] * wt[j] * rs[i] * mu.f(w) * kernel(w);
            }
        return acc;
    });
}

}  // namespace

cplx bergman_projection(const DiskField& mu, cplx z, const DiskQuadrature& q) {
    if (std::abs(z) >= 1.0) throw std::invalid_argument("bergman_projection: need |z| < 1");
    const PolarGrid g = polar_grid(q, mu.support_radius);
    const cplx v = polar_integral(mu, g, [z](cplx w) {
        const cplx d = 1.0 - z * std::conj(w);
        return 1.0 / (d * d);
    });
    return v / kPi;
}

cplx bergman_derivative(const DiskField& mu, cplx z, const DiskQuadrature& q) {
    if (std::abs(z) >= 1.0) throw std::invalid_argument("bergman_derivative: need |z| < 1");
    const PolarGrid g = polar_grid(q, mu.support_radius);
    const cplx v = polar_integral(mu, g, [z](cplx w) {
        const cplx d = 1.0 - z * std::conj(w);
        return 2.0 * std::conj(w) / (d * d * d);
    });
    return v / kPi;
}

// cell-backed disk coefficient: integration in strip coordinates ---------------

namespace {

// recursive tensor Gauss panel over a strip-coordinate cell with splitting
// near the kernel's resolution scale
void cell_panel(const std::function<cplx(cplx)>& kernel_weight, cplx z, double x0, double x1,
                double y0, double y1, cplx value, int depth, cplx& acc) {
    const cplx zc(0.5 * (x0 + x1), 0.5 * (y0 + y1));
    const cplx wc = std::exp(cplx(0.0, -kTwoPi) * zc);
    const double diam = kTwoPi * std::abs(wc) * ((x1 - x0) + (y1 - y0));
    const double res = std::abs(1.0 - z * std::conj(wc)) / std::max(0.05, std::abs(z));
    if (depth < 6 && diam > 0.6 * res) {
        const double xm = 0.5 * (x0 + x1);
        const double ym = 0.5 * (y0 + y1);
        cell_panel(kernel_weight, z, x0, xm, y0, ym, value, depth + 1, acc);
        cell_panel(kernel_weight, z, xm, x1, y0, ym, value, depth + 1, acc);
        cell_panel(kernel_weight, z, x0, xm, ym, y1, value, depth + 1, acc);
        cell_panel(kernel_weight, z, xm, x1, ym, y1, value, depth + 1, acc);
        return;
    }
    const GaussRule& rule = gauss_legendre(4);
    std::vector<double> xs, wx, ys, wy;
    map_panel(rule, x0, x1, xs, wx);
    map_panel(rule, y0, y1, ys, wy);
    cplx s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j)
            s += wx[i] * wy[j] * kernel_weight(cplx(xs[i], ys[j]));
    acc += value * s;
}

// integral over the annulus image of the descended coefficient of
// nu(w) * kernel(w); kernels must be smooth on |w| < 1
cplx annulus_cell_integral(const BeltramiCoefficient& disk_mu, cplx z,
                           const std::function<cplx(cplx, cplx)>& kernel) {
    const StripTile& tile = disk_mu.tile;
    const int p = tile.scale_base;
    const int nx = tile.nx(), ny = tile.ny();
    const double dist = std::max(1e-6, 1.0 - std::abs(z));

    // nu(w) * jacobian in strip coordinates: w = exp(-2 pi i zeta)
    auto weight = [&](cplx zeta, cplx cell_value) -> cplx {
        const cplx w = std::exp(cplx(0.0, -kTwoPi) * zeta);
        const cplx nu = -(w / std::conj(w)) * cell_value;
        const double jac = kTwoPi * kTwoPi * std::norm(w);
        return nu * jac * kernel(w, z);
    };

    const int s_near = std::min(22, static_cast<int>(std::ceil(std::log2(30.0 / dist))));
    const int s_far_end =
        std::min(60, static_cast<int>(std::ceil(std::log2(1.0 / (dist * dist * 1e-13)))));

    // near rows: full cell structure
    struct Job {
        double x0, x1, y0, y1;
        cplx value;
    };
    std::vector<Job> jobs;
    for (int s = 0; s <= s_near; ++s) {
        const double ps = std::pow(static_cast<double>(p), s);
        const std::int64_t boxes = static_cast<std::int64_t>(ps + 0.5);
        for (std::int64_t k = 0; k < boxes; ++k)
            for (int b = 0; b < ny; ++b)
                for (int a = 0; a < nx; ++a) {
                    const double x0 = (static_cast<double>(k) + static_cast<double>(a) / nx) / ps;
                    const double x1 =
                        (static_cast<double>(k) + static_cast<double>(a + 1) / nx) / ps;
                    const double band = tile.band_height();
                    const double y0 = (-1.0 + band * b / ny) / ps;
                    const double y1 = (-1.0 + band * (b + 1) / ny) / ps;
                    jobs.push_back({x0, x1, y0, y1, tile.at(a, b)});
                }
    }
    std::vector<cplx> partial(jobs.size());
    parallel_blocks(jobs.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            cplx acc = 0.0;
            cell_panel([&](cplx zeta) { return weight(zeta, 1.0); }, z, jobs[i].x0, jobs[i].x1,
                       jobs[i].y0, jobs[i].y1, 1.0, 0, acc);
            partial[i] = jobs[i].value * acc;
        }
    });
    cplx total = 0.0;
    for (cplx v : partial) total += v;

    // far rows: the tile's fine x-structure is below the kernel's resolution;
    // use per-band x-means with angular panels sized by the resolution
    if (s_near < s_far_end) {
        std::vector<cplx> band_mean(ny, 0.0);
        for (int b = 0; b < ny; ++b) {
            cplx m = 0.0;
            for (int a = 0; a < nx; ++a) m += tile.at(a, b);
            band_mean[b] = m / static_cast<double>(nx);
        }
        int na = 32;
        while (na < 8.0 / dist && na < 4096) na *= 2;
        const GaussRule& rule = gauss_legendre(4);
        for (int s = s_near + 1; s <= s_far_end; ++s) {
            const double ps = std::pow(static_cast<double>(p), s);
            cplx row = 0.0;
            for (int b = 0; b < ny; ++b) {
                const double band = tile.band_height();
                const double y0 = (-1.0 + band * b / ny) / ps;
                const double y1 = (-1.0 + band * (b + 1) / ny) / ps;
                std::vector<double> ys, wy;
                map_panel(rule, y0, y1, ys, wy);
                cplx acc = 0.0;
                for (int ai = 0; ai < na; ++ai) {
                    std::vector<double> xs, wx;
                    map_panel(rule, static_cast<double>(ai) / na,
                              static_cast<double>(ai + 1) / na, xs, wx);
                    for (std::size_t i = 0; i < xs.size(); ++i)
                        for (std::size_t j = 0; j < ys.size(); ++j)
                            acc += wx[i] * wy[j] * weight(cplx(xs[i], ys[j]), 1.0);
                }
                row += band_mean[b] * acc;
            }
            total += row;
            if (std::abs(row) < 1e-15 * (1.0 + std::abs(total)) && s > s_near + 4) break;
        }
    }
    return total;
}

}  // namespace

cplx bergman_projection(const BeltramiCoefficient& disk_mu, cplx z) {
    if (disk_mu.domain != BeltramiCoefficient::Support::Disk)
        throw std::invalid_argument("bergman_projection: disk coefficient required");
    if (std::abs(z) >= 1.0) throw std::invalid_argument("bergman_projection: need |z| < 1");
    const cplx v = annulus_cell_integral(disk_mu, z, [](cplx w, cplx zz) {
        const cplx d = 1.0 - zz * std::conj(w);
        return 1.0 / (d * d);
    });
    return v / kPi;
}

cplx bergman_derivative(const BeltramiCoefficient& disk_mu, cplx z) {
    if (disk_mu.domain != BeltramiCoefficient::Support::Disk)
        throw std::invalid_argument("bergman_derivative: disk coefficient required");
    if (std::abs(z) >= 1.0) throw std::invalid_argument("bergman_derivative: need |z| < 1");
    const cplx v = annulus_cell_integral(disk_mu, z, [](cplx w, cplx zz) {
        const cplx d = 1.0 - zz * std::conj(w);
        return 2.0 * std::conj(w) / (d * d * d);
    });
    return v / kPi;
}

BlochEvaluator bergman_evaluator(const BeltramiCoefficient& disk_mu, double norm_bound_hint) {
    auto mu = std::make_shared<BeltramiCoefficient>(disk_mu);
    BlochEvaluator b;
    b.domain = Domain::UnitDisk;
    b.value = [mu](cplx z) { return bergman_projection(*mu, z); };
    b.derivative = [mu](cplx z) { return bergman_derivative(*mu, z); };
    b.norm_bound = norm_bound_hint;
    b.name = "bergman-cells-g" + std::to_string(disk_mu.tile.depth_g);
    return b;
}

BlochEvaluator bergman_evaluator(const DiskField& mu, double norm_bound_hint,
                                 const DiskQuadrature& q) {
    auto f = std::make_shared<DiskField>(mu);
    auto qq = std::make_shared<DiskQuadrature>(q);
    BlochEvaluator b;
    b.domain = Domain::UnitDisk;
    b.value = [f, qq](cplx z) { return bergman_projection(*f, z, *qq); };
    b.derivative = [f, qq](cplx z) { return bergman_derivative(*f, z, *qq); };
    b.norm_bound = norm_bound_hint;
    b.name = "bergman-" + (mu.name.empty() ? std::string("field") : mu.name);
    return b;
}

cplx beurling_disk(const DiskField& mu, cplx z, const DiskQuadrature& q) {
    if (std::abs(z) <= 1.0) throw std::invalid_argument("beurling_disk: need |z| > 1");
    DiskField conj_mu{[f = mu.f](cplx w) { return std::conj(f(w)); }, mu.support_radius,
                      mu.name};
    const cplx zr = 1.0 / std::conj(z);
    return -(1.0 / (z * z)) * std::conj(bergman_projection(conj_mu, zr, q));
}

cplx beurling_disk_direct(const DiskField& mu, cplx z, const DiskQuadrature& q) {
    if (std::abs(z) <= 1.0) throw std::invalid_argument("beurling_disk_direct: need |z| > 1");
    const PolarGrid g = polar_grid(q, mu.support_radius);
    const cplx v = polar_integral(mu, g, [z](cplx w) {
        const cplx d = z - w;
        return 1.0 / (d * d);
    });
    return -v / kPi;
}

}  // namespace blochlab

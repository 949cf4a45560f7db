#include "blochlab/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blochlab/parallel.hpp"
#include "blochlab/quadrature.hpp"

namespace blochlab {

double chi(int p) {
    if (p < 2) throw std::invalid_argument("chi: integer base >= 2 required");
    return std::log(static_cast<double>(p));
}

HyperbolicBox::HyperbolicBox(PAdicIndex I, int n) : interval(I), order(n) {
    if (I.base != 2) throw std::invalid_argument("HyperbolicBox: dyadic interval required");
    if (n < 1) throw std::invalid_argument("HyperbolicBox: order must be >= 1");
}

namespace {

// iterate the 1-boxes of the n-box of I: level l in [0, n), 2^l boxes of the
// descendants of I at that level
template <typename F>
void for_each_sub_box(const PAdicIndex& I, int n, F&& f) {
    for (int l = 0; l < n; ++l) {
        const std::int64_t count = std::int64_t(1) << l;
        const double width = I.length() / static_cast<double>(count);
        for (std::int64_t j = 0; j < count; ++j) {
            const double x0 = I.left() + static_cast<double>(j) * width;
            f(l, x0, width);
        }
    }
}

}  // namespace

double box_average(const BlochEvaluator& b, const PAdicIndex& I, int n, const BoxQuadrature& q) {
    if (b.domain != Domain::UpperHalfPlane)
        throw std::invalid_argument("box_average: half-plane evaluator required");
    if (n < 1) throw std::invalid_argument("box_average: order must be >= 1");
    const GaussRule& rx = gauss_legendre(q.order_x);
    const GaussRule& ry = gauss_legendre(q.order_y);

    struct Cell {
        double x0, width;
    };
    std::vector<Cell> cells;
    for_each_sub_box(I, n, [&](int, double x0, double width) { cells.push_back({x0, width}); });

    const double integral = chunked_sum(cells.size(), [&](std::size_t ci) {
        const auto [x0, w] = cells[ci];
        std::vector<double> xs, wx, ys, wy;
        map_panel(rx, x0, x0 + w, xs, wx);
        map_panel(ry, w / 2.0, w, ys, wy);
        double acc = 0.0;
        for (std::size_t iy = 0; iy < ys.size(); ++iy) {
            for (std::size_t ix = 0; ix < xs.size(); ++ix) {
                const cplx z(xs[ix], ys[iy]);
                // |2 b'/rho|^2 dA/y = 4 |b'|^2 y dA
                acc += wx[ix] * wy[iy] * 4.0 * std::norm(b.derivative(z)) * ys[iy];
            }
        }
        return acc;
    });
    return integral / (n * chi(2) * I.length());
}

double box_mass_quadrature(const PAdicIndex& I, int n, const BoxQuadrature& q) {
    const GaussRule& rx = gauss_legendre(q.order_x);
    const GaussRule& ry = gauss_legendre(q.order_y);
    double integral = 0.0;
    for_each_sub_box(I, n, [&](int, double x0, double w) {
        std::vector<double> xs, wx, ys, wy;
        map_panel(rx, x0, x0 + w, xs, wx);
        map_panel(ry, w / 2.0, w, ys, wy);
        for (std::size_t iy = 0; iy < ys.size(); ++iy)
            for (std::size_t ix = 0; ix < xs.size(); ++ix)
                integral += wx[ix] * wy[iy] / ys[iy];
    });
    return integral;
}

BlochMartingale martingale_from_bloch(const BlochEvaluator& b, int depth,
                                      const BridgeOptions& opt) {
    if (b.domain != Domain::UpperHalfPlane)
        throw std::invalid_argument("martingale_from_bloch: half-plane evaluator required");
    if (depth < 1 || depth > 26) throw std::invalid_argument("martingale_from_bloch: bad depth");

    const std::int64_t leaves = std::int64_t(1) << depth;
    std::vector<cplx> leaf(leaves);

    if (opt.antiderivative) {
        // exact interval means from the antiderivative (at the boundary when
        // height <= 0); averaging holds by telescoping
        const double y = opt.antiderivative_height;
        std::vector<cplx> endpoints(leaves + 1);
        parallel_blocks(static_cast<std::size_t>(leaves + 1), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                endpoints[i] = opt.antiderivative(static_cast<double>(i) / leaves, y);
        });
        for (std::int64_t i = 0; i < leaves; ++i)
            leaf[i] = (endpoints[i + 1] - endpoints[i]) * static_cast<double>(leaves);
    } else {
        const double y = std::pow(2.0, -(depth + 2));
        const GaussRule& rule = gauss_legendre(opt.leaf_quadrature);
        parallel_blocks(static_cast<std::size_t>(leaves), [&](std::size_t lo, std::size_t hi) {
            std::vector<double> xs, wx;
            for (std::size_t i = lo; i < hi; ++i) {
                const double x0 = static_cast<double>(i) / leaves;
                const double x1 = static_cast<double>(i + 1) / leaves;
                map_panel(rule, x0, x1, xs, wx);
                cplx acc = 0.0;
                for (std::size_t k = 0; k < xs.size(); ++k) acc += wx[k] * b.value(cplx(xs[k], y));
                leaf[i] = acc * static_cast<double>(leaves);
            }
        });
    }

    std::vector<std::vector<cplx>> levels(depth + 1);
    levels[depth] = std::move(leaf);
    for (int k = depth - 1; k >= 0; --k) {
        const auto& ch = levels[k + 1];
        levels[k].resize(ch.size() / 2);
        for (std::size_t i = 0; i < levels[k].size(); ++i)
            levels[k][i] = 0.5 * (ch[2 * i] + ch[2 * i + 1]);
    }

    BlochMartingale out{PAdicMartingale(2, depth, std::move(levels), 0.0,
                                        b.name + " bridge depth=" + std::to_string(depth)),
                        0.0, 0.0};
    // rebuild with the measured jump bound
    const double jb = out.martingale.max_jump();
    std::vector<std::vector<cplx>> lv(depth + 1);
    for (int k = 0; k <= depth; ++k) lv[k] = out.martingale.level(k);
    out.martingale = PAdicMartingale(2, depth, std::move(lv), jb,
                                     b.name + " bridge depth=" + std::to_string(depth));

    // fidelity diagnostic |b(z_I) - B_I| on a subsample of nodes
    double fid = 0.0;
    for (int k = 0; k <= depth; ++k) {
        const auto& lvl = out.martingale.level(k);
        const std::int64_t count = static_cast<std::int64_t>(lvl.size());
        const std::int64_t step = std::max<std::int64_t>(1, count / 256);
        const double len = std::pow(2.0, -k);
        for (std::int64_t i = 0; i < count; i += step) {
            const cplx apex((static_cast<double>(i) + 0.5) * len, len);
            fid = std::max(fid, std::abs(b.value(apex) - lvl[static_cast<std::size_t>(i)]));
        }
    }
    out.bridge_fidelity = fid;
    out.adjacency = adjacency_constant(out.martingale, std::min(depth, 14));
    return out;
}

double greens_discrepancy(const BlochMartingale& B, const BlochEvaluator& b,
                          const PAdicIndex& I, int n, const BoxQuadrature& q) {
    const double lhs = B.martingale.local_variance_n(I, n) / chi(2);
    const double rhs = box_average(b, I, n, q);
    return std::abs(lhs - rhs);
}

double local_variance_real_n(const PAdicMartingale& B, const PAdicIndex& I, int n) {
    if (n < 1 || I.level + n > B.depth())
        throw std::invalid_argument("local_variance_real_n: insufficient depth");
    const double px = B.value(I).real();
    const auto& lvl = B.level(I.level + n);
    const std::int64_t count = ipow(B.base(), n);
    const std::size_t base = static_cast<std::size_t>(I.offset * count);
    double acc = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
        const double d = lvl[base + i].real() - px;
        acc += d * d;
    }
    return acc / static_cast<double>(count) / n;
}

double local_covariance_re_im_n(const PAdicMartingale& B, const PAdicIndex& I, int n) {
    if (n < 1 || I.level + n > B.depth())
        throw std::invalid_argument("local_covariance_re_im_n: insufficient depth");
    const cplx p = B.value(I);
    const auto& lvl = B.level(I.level + n);
    const std::int64_t count = ipow(B.base(), n);
    const std::size_t base = static_cast<std::size_t>(I.offset * count);
    double acc = 0.0;
    for (std::int64_t i = 0; i < count; ++i)
        acc += (lvl[base + i].real() - p.real()) * (lvl[base + i].imag() - p.imag());
    return acc / static_cast<double>(count) / n;
}

std::pair<double, double> complexification_defects(const PAdicMartingale& B, const PAdicIndex& I,
                                                   int n) {
    const double vre = local_variance_real_n(B, I, n);
    const double vfull = B.local_variance_n(I, n);
    const double cov = local_covariance_re_im_n(B, I, n);
    return {std::abs(vre - vfull / 2.0), std::abs(cov)};
}

double adjacency_constant(const PAdicMartingale& B, int depth) {
    if (B.base() != 2) throw std::invalid_argument("adjacency_constant: dyadic martingale required");
    if (depth > B.depth()) throw std::invalid_argument("adjacency_constant: depth exceeds storage");
    double worst = 0.0;
    for (int k = 1; k <= depth; ++k) {
        const auto& lvl = B.level(k);
        for (std::size_t i = 0; i + 1 < lvl.size(); ++i)
            worst = std::max(worst, std::abs(lvl[i + 1] - lvl[i]));
    }
    return worst;
}

BlochMartingale transmutate(const PAdicMartingale& M) {
    if (M.base() != 2) throw std::invalid_argument("transmutate: dyadic martingale required");
    if (!(M.jump_bound() < std::numeric_limits<double>::infinity()))
        throw std::invalid_argument("transmutate: bounded increments required");
    const int depth = M.depth();
    const int edepth = 2 * depth;
    if (edepth > 26) throw std::invalid_argument("transmutate: embedded depth too large");

    // Embedded nodes at even levels carry original-node labels:
    // live node w -> grandchildren [frozen(w), live(w1), live(w2), frozen(w)];
    // frozen values propagate unchanged.  Odd levels are the forced means.
    std::vector<std::vector<cplx>> lv(edepth + 1);
    lv[0] = {M.root()};
    struct Tag {
        int level;             // original level, -1 for frozen
        std::int64_t offset;   // original offset when live
        cplx value;
    };
    std::vector<Tag> tags = {{0, 0, M.root()}};
    for (int g = 0; g < depth; ++g) {
        const auto& parents = lv[2 * g];
        std::vector<cplx> mid(parents.size() * 2);
        std::vector<cplx> next(parents.size() * 4);
        std::vector<Tag> ntags(tags.size() * 4);
        for (std::size_t i = 0; i < parents.size(); ++i) {
            const Tag& t = tags[i];
            cplx v = t.value, c1 = t.value, c2 = t.value;
            bool live = t.level >= 0;
            if (live) {
                c1 = M.level(t.level + 1)[static_cast<std::size_t>(2 * t.offset)];
                c2 = M.level(t.level + 1)[static_cast<std::size_t>(2 * t.offset + 1)];
            }
            next[4 * i + 0] = v;
            next[4 * i + 1] = c1;
            next[4 * i + 2] = c2;
            next[4 * i + 3] = v;
            ntags[4 * i + 0] = {-1, 0, v};
            ntags[4 * i + 1] = live ? Tag{t.level + 1, 2 * t.offset, c1} : Tag{-1, 0, v};
            ntags[4 * i + 2] = live ? Tag{t.level + 1, 2 * t.offset + 1, c2} : Tag{-1, 0, v};
            ntags[4 * i + 3] = {-1, 0, v};
            mid[2 * i] = 0.5 * (v + c1);
            mid[2 * i + 1] = 0.5 * (c2 + v);
        }
        lv[2 * g + 1] = std::move(mid);
        lv[2 * g + 2] = std::move(next);
        tags = std::move(ntags);
    }
    PAdicMartingale em(2, edepth, std::move(lv), M.jump_bound(),
                       M.provenance() + " transmutated");
    BlochMartingale out{std::move(em), 0.0, 0.0};
    out.adjacency = adjacency_constant(out.martingale, edepth);
    return out;
}

}  // namespace blochlab

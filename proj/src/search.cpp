#include "blochlab/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "blochlab/parallel.hpp"
#include "blochlab/quadrature.hpp"
#include "blochlab/rng.hpp"
#include "json.hpp"

namespace blochlab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;
}  // namespace

void SearchConfig::validate() const {
    if (box_order < 2) throw std::invalid_argument("SearchConfig: box order must be >= 2");
    if (tile_depth < 1 || tile_depth > 6) throw std::invalid_argument("SearchConfig: bad tile depth");
    if (scale_base < 2 || scale_base > 4) throw std::invalid_argument("SearchConfig: bad scale base");
    if (iterations < 0) throw std::invalid_argument("SearchConfig: negative iterations");
    if (optimizer != "coordinate" && optimizer != "annealing")
        throw std::invalid_argument("SearchConfig: unknown optimizer");
    if (init != "random" && init != "eig")
        throw std::invalid_argument("SearchConfig: unknown init");
}

double objective_value(const BeltramiCoefficient& mu, int n, const BoxQuadrature& q) {
    const StripField field(mu);
    return box_average(field.evaluator(), PAdicIndex(2, 0, 0), n, q);
}

ObjectiveForm::ObjectiveForm(int box_order, int tile_depth, int scale_base, int quad_order) {
    // Q_{cd} = weighted sum over box nodes of conj(Phi_c) Phi_d with the
    // |2 b'/rho|^2 dA/y weights, normalized by the box mass
    StripTile probe = constant_tile(0.0, tile_depth, scale_base);
    const StripField field(make_periodic(probe));
    dim_ = probe.cells.size();
    q_.assign(dim_ * dim_, cplx(0.0));

    struct Node {
        cplx z;
        double w;
    };
    std::vector<Node> nodes;
    const GaussRule& rule = gauss_legendre(quad_order);
    for (int l = 0; l < box_order; ++l) {
        const std::int64_t count = std::int64_t(1) << l;
        const double width = 1.0 / static_cast<double>(count);
        std::vector<double> ys, wy;
        map_panel(rule, width / 2.0, width, ys, wy);
        for (std::int64_t j = 0; j < count; ++j) {
            std::vector<double> xs, wx;
            map_panel(rule, j * width, (j + 1) * width, xs, wx);
            for (std::size_t iy = 0; iy < ys.size(); ++iy)
                for (std::size_t ix = 0; ix < xs.size(); ++ix)
                    nodes.push_back({cplx(xs[ix], ys[iy]), wx[ix] * wy[iy] * 4.0 * ys[iy]});
        }
    }
    const double mass = box_order * std::log(2.0);

    const std::size_t chunks = std::min<std::size_t>(32, nodes.size());
    std::vector<std::vector<cplx>> partial(chunks);
    run_chunks(chunks, [&](std::size_t c) {
        auto& acc = partial[c];
        acc.assign(dim_ * dim_, cplx(0.0));
        std::vector<cplx> phi(dim_);
        const std::size_t b = nodes.size() * c / chunks;
        const std::size_t e = nodes.size() * (c + 1) / chunks;
        for (std::size_t k = b; k < e; ++k) {
            field.derivative_basis(nodes[k].z, phi);
            const double w = nodes[k].w / mass;
            for (std::size_t r = 0; r < dim_; ++r) {
                const cplx wr = w * std::conj(phi[r]);
                for (std::size_t s = 0; s < dim_; ++s) acc[r * dim_ + s] += wr * phi[s];
            }
        }
    });
    for (std::size_t c = 0; c < chunks; ++c)
        for (std::size_t i = 0; i < q_.size(); ++i) q_[i] += partial[c][i];
}

double ObjectiveForm::value(std::span<const cplx> tile) const {
    if (tile.size() != dim_) throw std::invalid_argument("ObjectiveForm: size mismatch");
    cplx acc = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        cplx row = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) row += q_[r * dim_ + c] * tile[c];
        acc += std::conj(tile[r]) * row;
    }
    return acc.real();
}

void ObjectiveForm::mult(std::span<const cplx> tile, std::span<cplx> out) const {
    if (tile.size() != dim_ || out.size() != dim_)
        throw std::invalid_argument("ObjectiveForm: size mismatch");
    for (std::size_t r = 0; r < dim_; ++r) {
        cplx row = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) row += q_[r * dim_ + c] * tile[c];
        out[r] = row;
    }
}

namespace {

std::vector<cplx> random_unimodular(Rng& rng, std::size_t n) {
    std::vector<cplx> v(n);
    for (auto& c : v) {
        const double phi = kTwoPi * rng.uniform();
        c = cplx(std::cos(phi), std::sin(phi));
    }
    return v;
}

std::vector<cplx> eig_init(const ObjectiveForm& form, Rng& rng) {
    // power iteration, then round to phases
    std::vector<cplx> v = random_unimodular(rng, form.size());
    std::vector<cplx> w(form.size());
    for (int it = 0; it < 60; ++it) {
        form.mult(v, w);
        double norm = 0.0;
        for (cplx x : w) norm += std::norm(x);
        norm = std::sqrt(norm);
        if (norm == 0.0) break;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / norm;
    }
    for (auto& c : v) {
        const double a = std::abs(c);
        c = (a > 1e-14) ? c / a : cplx(1.0);
    }
    return v;
}

// golden-section maximization of f on [lo, hi] (unimodal bracket)
template <typename F>
double golden_max(F&& f, double lo, double hi, int iters = 48) {
    const double gr = 0.61803398874989484820458683436564;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return (f1 > f2) ? x1 : x2;
}

struct Workspace {
    std::vector<cplx> qmu;  // Q * current
};

double full_value(const ObjectiveForm& form, const std::vector<cplx>& mu,
                  std::vector<cplx>& qmu) {
    form.mult(mu, qmu);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) acc += std::conj(mu[i]) * qmu[i];
    return acc.real();
}

// The sweep order is derived from (seed, sweep number) rather than the main
// rng stream, so a resumed run replays the identical cell sequence from any
// checkpoint position.
std::size_t sweep_cell(const SearchConfig& cfg, std::size_t n, int iteration) {
    const std::size_t sweep = static_cast<std::size_t>(iteration) / n;
    const std::size_t pos = static_cast<std::size_t>(iteration) % n;
    Rng order_rng(cfg.seed ^ (0x5851f42d4c957f2dULL + 0x9e3779b97f4a7c15ULL * sweep));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    order_rng.shuffle(std::span<std::size_t>(order));
    return order[pos];
}

void coordinate_step(SearchState& st, const ObjectiveForm& form, Workspace& ws) {
    const std::size_t n = form.size();
    const std::size_t c = sweep_cell(st.config, n, st.iterations_done);

    // local form in cell c (hermitian Q): O = const + 2 Re(conj(mu_c) g) + Q_cc |mu_c|^2
    cplx g = 0.0;
    for (std::size_t d = 0; d < n; ++d)
        if (d != c) g += form.entry(c, d) * st.current[d];
    const double qcc = form.entry(c, c).real();

    auto eval_cell = [&](cplx v) { return 2.0 * (std::conj(v) * g).real() + qcc * std::norm(v); };

    const cplx old = st.current[c];
    double base = eval_cell(old);
    cplx cand = old;

    // coarse phase scan, then golden-section refinement around the best slot
    const int K = 16;
    int best_k = 0;
    double best_f = -1e300;
    for (int k = 0; k < K; ++k) {
        const double phi = kTwoPi * k / K;
        const double f = eval_cell(std::polar(1.0, phi));
        if (f > best_f) {
            best_f = f;
            best_k = k;
        }
    }
    const double lo = kTwoPi * (best_k - 1) / K;
    const double hi = kTwoPi * (best_k + 1) / K;
    double phi_hat = golden_max([&](double phi) { return eval_cell(std::polar(1.0, phi)); }, lo, hi);
    cplx v = std::polar(1.0, phi_hat);

    if (!st.config.unimodular) {
        // optimize the magnitude along the chosen phase as well
        const double m_hat = golden_max(
            [&](double m) { return eval_cell(std::polar(std::min(1.0, std::max(0.0, m)), phi_hat)); },
            0.0, 1.0);
        v = std::polar(std::min(1.0, std::max(0.0, m_hat)), phi_hat);
    }
    if (eval_cell(v) > base + 1e-15) cand = v;

    if (cand != old) {
        st.current[c] = cand;
        const double val = full_value(form, st.current, ws.qmu);
        if (val > st.best_value) {
            st.best_value = val;
            st.best = st.current;
        }
    }
}

void annealing_step(SearchState& st, const ObjectiveForm& form, Rng& rng, Workspace& ws,
                    int iter, int total) {
    const std::size_t n = form.size();
    const std::size_t c = static_cast<std::size_t>(rng.below(n));
    const double t0 = 0.2, t1 = 1e-3;
    const double frac = total > 1 ? static_cast<double>(iter) / (total - 1) : 1.0;
    const double T = t0 * std::pow(t1 / t0, frac);

    const cplx old = st.current[c];
    const double cur = full_value(form, st.current, ws.qmu);
    const double dphi = rng.gaussian() * (0.2 + 2.0 * T);
    cplx v = old * std::polar(1.0, dphi);
    if (!st.config.unimodular) {
        double m = std::abs(v) + 0.1 * T * rng.gaussian();
        m = std::min(1.0, std::max(0.0, m));
        v = std::polar(m, std::arg(v));
    } else {
        v /= std::abs(v);
    }
    st.current[c] = v;
    const double prop = full_value(form, st.current, ws.qmu);
    const double dE = prop - cur;
    if (dE >= 0.0 || rng.uniform() < std::exp(dE / std::max(T, 1e-12))) {
        if (prop > st.best_value) {
            st.best_value = prop;
            st.best = st.current;
        }
    } else {
        st.current[c] = old;
    }
}

}  // namespace

SearchState init_search(const SearchConfig& cfg, const ObjectiveForm& form) {
    cfg.validate();
    SearchState st;
    st.config = cfg;
    Rng rng(cfg.seed);
    st.current = cfg.init == "eig" ? eig_init(form, rng) : random_unimodular(rng, form.size());
    st.best = st.current;
    std::vector<cplx> qmu(form.size());
    st.best_value = full_value(form, st.current, qmu);
    st.rng_state = rng.state();
    return st;
}

void run_search(SearchState& st, const ObjectiveForm& form, int iterations) {
    Rng rng(0);
    rng.set_state(st.rng_state);
    Workspace ws;
    ws.qmu.resize(form.size());
    for (int i = 0; i < iterations; ++i) {
        if (st.config.optimizer == "coordinate")
            coordinate_step(st, form, ws);
        else
            annealing_step(st, form, rng, ws, st.iterations_done,
                           std::max(st.config.iterations, st.iterations_done + iterations));
        ++st.iterations_done;
        st.history.push_back(st.best_value);
    }
    st.rng_state = rng.state();
}

SearchResult finalize_search(const SearchState& st) {
    SearchResult res;
    res.config = st.config;
    res.state = st;
    res.history = st.history;
    StripTile tile;
    tile.scale_base = st.config.scale_base;
    tile.depth_g = st.config.tile_depth;
    tile.cells = st.best;
    res.best_mu = make_periodic(tile);
    const BoxQuadrature q{st.config.quad_order, st.config.quad_order};
    const BoxQuadrature qfine{st.config.quad_order + 4, st.config.quad_order + 4};
    const double v1 = objective_value(res.best_mu, st.config.box_order, q);
    const double v2 = objective_value(res.best_mu, st.config.box_order, qfine);
    res.objective = v1;
    res.quad_error = std::max(1e-9, 2.0 * std::abs(v1 - v2));
    if (res.objective > 1.0 + 0.02)
        throw invariant_error("search objective exceeded the universal ceiling: " +
                              std::to_string(res.objective));
    return res;
}

SearchResult optimize(const SearchConfig& cfg) {
    cfg.validate();
    const ObjectiveForm form(cfg.box_order, cfg.tile_depth, cfg.scale_base, cfg.quad_order);
    SearchState st = init_search(cfg, form);
    run_search(st, form, cfg.iterations);
    return finalize_search(st);
}

namespace {
std::string u64_hex(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}
std::uint64_t hex_u64(const std::string& s) {
    return std::stoull(s, nullptr, 16);
}
nlohmann::json tile_json(const std::vector<cplx>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (cplx c : v) a.push_back({c.real(), c.imag()});
    return a;
}
std::vector<cplx> tile_from_json(const nlohmann::json& a) {
    std::vector<cplx> v;
    v.reserve(a.size());
    for (const auto& e : a) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return v;
}
}  // namespace

std::string checkpoint_to_json(const SearchState& st) {
    nlohmann::json j;
    j["format"] = "blochlab-search-checkpoint-1";
    j["config"] = {{"box_order", st.config.box_order},
                   {"tile_depth", st.config.tile_depth},
                   {"scale_base", st.config.scale_base},
                   {"unimodular", st.config.unimodular},
                   {"optimizer", st.config.optimizer},
                   {"iterations", st.config.iterations},
                   {"seed", st.config.seed},
                   {"quad_order", st.config.quad_order},
                   {"init", st.config.init}};
    j["iterations_done"] = st.iterations_done;
    j["rng_state"] = {u64_hex(st.rng_state[0]), u64_hex(st.rng_state[1]),
                      u64_hex(st.rng_state[2]), u64_hex(st.rng_state[3])};
    j["current"] = tile_json(st.current);
    j["best"] = tile_json(st.best);
    j["best_value"] = st.best_value;
    j["history"] = st.history;
    return j.dump(2);
}

SearchState checkpoint_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw corrupt_state_error(std::string("checkpoint parse failure: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "blochlab-search-checkpoint-1")
            throw corrupt_state_error("unknown checkpoint format");
        SearchState st;
        const auto& c = j.at("config");
        st.config.box_order = c.at("box_order").get<int>();
        st.config.tile_depth = c.at("tile_depth").get<int>();
        st.config.scale_base = c.at("scale_base").get<int>();
        st.config.unimodular = c.at("unimodular").get<bool>();
        st.config.optimizer = c.at("optimizer").get<std::string>();
        st.config.iterations = c.at("iterations").get<int>();
        st.config.seed = c.at("seed").get<std::uint64_t>();
        st.config.quad_order = c.at("quad_order").get<int>();
        st.config.init = c.at("init").get<std::string>();
        st.iterations_done = j.at("iterations_done").get<int>();
        const auto& rs = j.at("rng_state");
        for (int i = 0; i < 4; ++i) st.rng_state[i] = hex_u64(rs.at(i).get<std::string>());
        st.current = tile_from_json(j.at("current"));
        st.best = tile_from_json(j.at("best"));
        st.best_value = j.at("best_value").get<double>();
        st.history = j.at("history").get<std::vector<double>>();
        if (st.current.size() != st.best.size() || st.current.empty())
            throw corrupt_state_error("checkpoint tile arrays inconsistent");
        st.config.validate();
        return st;
    } catch (const corrupt_state_error&) {
        throw;
    } catch (const std::exception& e) {
        throw corrupt_state_error(std::string("checkpoint field failure: ") + e.what());
    }
}

double b0_curvature(const BeltramiCoefficient& mu, double t, const std::vector<int>& ladder_j,
                    int n_theta) {
    if (!(t > 0.0 && t <= 0.3)) throw std::invalid_argument("b0_curvature: need 0 < t <= 0.3");
    const StripField field(mu);
    const auto est = beta_integral_means(field.evaluator(), cplx(t, 0.0), ladder_j, n_theta);
    return est.limit / (t * t / 4.0);
}

}  // namespace blochlab

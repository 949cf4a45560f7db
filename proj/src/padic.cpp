#include "blochlab/padic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "json.hpp"

namespace blochlab {

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > (std::int64_t(1) << 60) / b) throw std::overflow_error("ipow: overflow");
        r *= b;
    }
    return r;
}

PAdicIndex::PAdicIndex(int p, int k, std::int64_t j) : base(p), level(k), offset(j) {
    if (p < 2) throw std::invalid_argument("PAdicIndex: base must be >= 2");
    if (k < 0) throw std::invalid_argument("PAdicIndex: negative level");
    if (j < 0 || j >= ipow(p, k)) throw std::invalid_argument("PAdicIndex: offset out of range");
}

double PAdicIndex::length() const { return std::pow(static_cast<double>(base), -level); }
double PAdicIndex::left() const { return static_cast<double>(offset) * length(); }
double PAdicIndex::right() const { return static_cast<double>(offset + 1) * length(); }

PAdicMartingale::PAdicMartingale(int base, cplx root)
    : base_(base), depth_(0), jump_bound_(0.0), provenance_("constant") {
    if (base < 2) throw std::invalid_argument("PAdicMartingale: base must be >= 2");
    levels_ = {{root}};
}

PAdicMartingale::PAdicMartingale(int base, int depth, std::vector<std::vector<cplx>> levels,
                                 double jump_bound, std::string provenance)
    : base_(base),
      depth_(depth),
      jump_bound_(jump_bound),
      provenance_(std::move(provenance)),
      levels_(std::move(levels)) {
    if (base < 2) throw std::invalid_argument("PAdicMartingale: base must be >= 2");
    if (depth < 0 || levels_.size() != static_cast<std::size_t>(depth) + 1)
        throw std::invalid_argument("PAdicMartingale: level count mismatch");
    for (int k = 0; k <= depth; ++k)
        if (levels_[k].size() != static_cast<std::size_t>(ipow(base, k)))
            throw std::invalid_argument("PAdicMartingale: bad level size");
}

const std::vector<cplx>& PAdicMartingale::level(int k) const {
    if (k < 0 || k > depth_) throw std::invalid_argument("level out of range");
    return levels_[k];
}

cplx PAdicMartingale::value(const PAdicIndex& I) const {
    if (I.base != base_) throw std::invalid_argument("value: base mismatch");
    return level(I.level).at(static_cast<std::size_t>(I.offset));
}

std::int64_t PAdicMartingale::node_index(double x, int lvl) const {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("node_index: x outside [0,1]");
    const std::int64_t count = ipow(base_, lvl);
    auto j = static_cast<std::int64_t>(std::floor(x * static_cast<double>(count)));
    return std::clamp<std::int64_t>(j, 0, count - 1);
}

double PAdicMartingale::averaging_defect() const {
    double worst = 0.0;
    for (int k = 0; k < depth_; ++k) {
        const auto& parents = levels_[k];
        const auto& children = levels_[k + 1];
        for (std::size_t i = 0; i < parents.size(); ++i) {
            cplx mean = 0.0;
            for (int c = 0; c < base_; ++c) mean += children[i * base_ + c];
            mean /= static_cast<double>(base_);
            worst = std::max(worst, std::abs(mean - parents[i]));
        }
    }
    return worst;
}

void PAdicMartingale::require_martingale(double tol) const {
    double scale = 1.0;
    for (const auto& lvl : levels_)
        for (cplx v : lvl) scale = std::max(scale, std::abs(v));
    const double defect = averaging_defect();
    if (defect > tol * scale)
        throw invariant_error("averaging property violated: defect " + std::to_string(defect));
}

double PAdicMartingale::max_jump() const {
    double worst = 0.0;
    for (int k = 1; k <= depth_; ++k) {
        const auto& parents = levels_[k - 1];
        const auto& children = levels_[k];
        for (std::size_t i = 0; i < children.size(); ++i)
            worst = std::max(worst, std::abs(children[i] - parents[i / base_]));
    }
    return worst;
}

cplx PAdicMartingale::jump(double x, int j) const {
    if (j < 1 || j > depth_) throw std::invalid_argument("jump: level out of range");
    const std::int64_t cj = node_index(x, j);
    return levels_[j][static_cast<std::size_t>(cj)] -
           levels_[j - 1][static_cast<std::size_t>(cj / base_)];
}

double PAdicMartingale::square_function(double x, int n) const {
    if (n < 0 || n > depth_) throw std::invalid_argument("square_function: level out of range");
    double acc = 0.0;
    std::int64_t idx = node_index(x, n);
    for (int j = n; j >= 1; --j) {
        const cplx d = levels_[j][static_cast<std::size_t>(idx)] -
                       levels_[j - 1][static_cast<std::size_t>(idx / base_)];
        acc += std::norm(d);
        idx /= base_;
    }
    return acc;
}

double PAdicMartingale::local_variance(const PAdicIndex& I) const {
    if (I.level >= depth_) throw std::invalid_argument("local_variance: leaf interval");
    const cplx parent = value(I);
    double acc = 0.0;
    for (int c = 0; c < base_; ++c)
        acc += std::norm(levels_[I.level + 1][static_cast<std::size_t>(I.offset) * base_ + c] -
                         parent);
    return acc / static_cast<double>(base_);
}

double PAdicMartingale::local_variance_n(const PAdicIndex& I, int n) const {
    if (n < 1) throw std::invalid_argument("local_variance_n: n must be >= 1");
    if (I.level + n > depth_) throw std::invalid_argument("local_variance_n: insufficient depth");
    const cplx parent = value(I);
    const std::int64_t count = ipow(base_, n);
    const auto& lvl = levels_[I.level + n];
    double acc = 0.0;
    const std::size_t b = static_cast<std::size_t>(I.offset * count);
    for (std::int64_t i = 0; i < count; ++i) acc += std::norm(lvl[b + i] - parent);
    return acc / static_cast<double>(count) / n;
}

cplx PAdicMartingale::local_covariance_n(const PAdicMartingale& other, const PAdicIndex& I,
                                         int n) const {
    if (other.base_ != base_ || other.depth_ != depth_)
        throw std::invalid_argument("local_covariance_n: base/depth mismatch");
    if (n < 1 || I.level + n > depth_)
        throw std::invalid_argument("local_covariance_n: insufficient depth");
    const cplx px = value(I);
    const cplx py = other.value(I);
    const std::int64_t count = ipow(base_, n);
    const std::size_t b = static_cast<std::size_t>(I.offset * count);
    cplx acc = 0.0;
    for (std::int64_t i = 0; i < count; ++i)
        acc += (levels_[I.level + n][b + i] - px) *
               std::conj(other.levels_[I.level + n][b + i] - py);
    return acc / static_cast<double>(count) / static_cast<double>(n);
}

PAdicMartingale::VarianceEstimate PAdicMartingale::asymptotic_variance() const {
    VarianceEstimate out;
    if (depth_ < 1) {
        out.summary.method = "asymptotic-variance";
        return out;
    }
    std::vector<double> cumulative(depth_ + 1, 0.0);
    for (int j = 1; j <= depth_; ++j) {
        const auto& parents = levels_[j - 1];
        const auto& children = levels_[j];
        double acc = 0.0;
        for (std::size_t i = 0; i < children.size(); ++i)
            acc += std::norm(children[i] - parents[i / base_]);
        cumulative[j] = cumulative[j - 1] + acc / static_cast<double>(children.size());
    }
    out.direct.resize(depth_);
    out.square_form.resize(depth_);
    std::vector<double> scales(depth_);
    for (int n = 1; n <= depth_; ++n) {
        const auto& lvl = levels_[n];
        double acc = 0.0;
        for (cplx v : lvl) acc += std::norm(v);
        out.direct[n - 1] = acc / static_cast<double>(lvl.size()) / n;
        out.square_form[n - 1] = cumulative[n] / n;
        scales[n - 1] = n;
    }
    out.summary.scales = scales;
    out.summary.values = out.square_form;
    out.summary.method = "asymptotic-variance";
    if (depth_ >= 4) {
        std::vector<double> cum(cumulative.begin() + 1, cumulative.end());
        const LineFit f = tail_slope(scales, cum);
        out.summary.limit = f.slope;
        out.summary.error = f.rms;
    } else {
        out.summary.limit = out.square_form.back();
        out.summary.error = 0.0;
    }
    return out;
}

std::pair<double, double> PAdicMartingale::sandwich_bounds() const {
    if (depth_ < 1) return {0.0, 0.0};
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int k = 0; k < depth_; ++k) {
        const auto& parents = levels_[k];
        const auto& children = levels_[k + 1];
        for (std::size_t i = 0; i < parents.size(); ++i) {
            double acc = 0.0;
            for (int c = 0; c < base_; ++c) acc += std::norm(children[i * base_ + c] - parents[i]);
            acc /= static_cast<double>(base_);
            lo = std::min(lo, acc);
            hi = std::max(hi, acc);
        }
    }
    return {lo, hi};
}

double PAdicMartingale::integral_means(double t, int n) const {
    if (n < 0 || n > depth_) throw std::invalid_argument("integral_means: level out of range");
    if (n == 0 || t == 0.0) return 0.0;
    const auto& lvl = levels_[n];
    // max-shifted log-mean-exp over leaves
    double mx = -std::numeric_limits<double>::infinity();
    for (cplx v : lvl) mx = std::max(mx, t * v.real());
    double acc = 0.0;
    for (cplx v : lvl) acc += std::exp(t * v.real() - mx);
    return (mx + std::log(acc / static_cast<double>(lvl.size()))) / n;
}

double PAdicMartingale::lil_ratio(double x, int n) const {
    if (n < 16) throw std::invalid_argument("lil_ratio: need n >= 16");
    if (n > depth_) throw std::invalid_argument("lil_ratio: level out of range");
    const std::int64_t idx = node_index(x, n);
    const double num = std::abs(levels_[n][static_cast<std::size_t>(idx)]);
    return num / std::sqrt(n * std::log(std::log(static_cast<double>(n))));
}

SpectrumEstimate PAdicMartingale::lil_constant_estimate() const {
    SpectrumEstimate est;
    est.method = "lil-envelope-quantile";
    if (depth_ < 16) return est;
    for (int n = 16; n <= depth_; ++n) {
        std::vector<double> mags(levels_[n].size());
        for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(levels_[n][i]);
        std::sort(mags.begin(), mags.end());
        const double q = 1.0 - 1.0 / (2.0 * std::log(static_cast<double>(n)));
        const double pos = q * (static_cast<double>(mags.size()) - 1.0);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, mags.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        const double quant = mags[lo] * (1.0 - frac) + mags[hi] * frac;
        est.scales.push_back(n);
        est.values.push_back(quant / std::sqrt(n * std::log(std::log(static_cast<double>(n)))));
    }
    est.limit = *std::max_element(est.values.begin(), est.values.end());
    est.error = 0.0;
    return est;
}

PAdicMartingale PAdicMartingale::reblock(int n) const {
    if (n < 1) throw std::invalid_argument("reblock: n must be >= 1");
    if (n == 1) return *this;
    if (depth_ % n != 0) throw std::invalid_argument("reblock: n must divide depth");
    const std::int64_t newbase64 = ipow(base_, n);
    if (newbase64 > (1 << 30)) throw std::invalid_argument("reblock: base too large");
    const int newbase = static_cast<int>(newbase64);
    const int newdepth = depth_ / n;
    std::vector<std::vector<cplx>> lv(newdepth + 1);
    for (int k = 0; k <= newdepth; ++k) lv[k] = levels_[k * n];
    return PAdicMartingale(newbase, newdepth, std::move(lv), jump_bound_ * n,
                           provenance_ + " reblock(" + std::to_string(n) + ")");
}

double PAdicMartingale::moment(int n, int p) const {
    if (n < 0 || n > depth_) throw std::invalid_argument("moment: level out of range");
    if (p < 1) throw std::invalid_argument("moment: p must be >= 1");
    const auto& lvl = levels_[n];
    double acc = 0.0;
    for (cplx v : lvl) acc += std::pow(std::norm(v), p);
    return acc / static_cast<double>(lvl.size());
}

// ---------------------------------------------------------------------------

JumpLawSpec zero_law() {
    JumpLawSpec s;
    s.jump_bound = 0.0;
    s.name = "zero";
    s.fill = [](Rng&, std::span<cplx> out) {
        for (auto& v : out) v = 0.0;
    };
    return s;
}

JumpLawSpec rademacher_law(double scale) {
    JumpLawSpec s;
    s.jump_bound = scale;
    s.name = "rademacher";
    s.fill = [scale](Rng& rng, std::span<cplx> out) {
        const std::size_t p = out.size();
        if (p % 2 == 0) {
            for (std::size_t i = 0; i < p; ++i) out[i] = (i < p / 2) ? scale : -scale;
            rng.shuffle(out);
        } else {
            // mean-zero cosine pattern with unit per-node variance, random offset
            const std::size_t shift = static_cast<std::size_t>(rng.below(p));
            for (std::size_t i = 0; i < p; ++i)
                out[i] = scale * std::sqrt(2.0) *
                         std::cos(2.0 * M_PI * static_cast<double>((i + shift) % p) /
                                  static_cast<double>(p));
        }
    };
    return s;
}

JumpLawSpec mixed_variance_law(std::vector<double> variances) {
    if (variances.empty()) throw std::invalid_argument("mixed_variance_law: empty set");
    double vmax = 0.0;
    for (double v : variances) {
        if (v < 0.0) throw std::invalid_argument("mixed_variance_law: negative variance");
        vmax = std::max(vmax, v);
    }
    JumpLawSpec s;
    s.jump_bound = std::sqrt(vmax) * std::sqrt(2.0);
    s.name = "mixed-variance";
    s.fill = [vs = std::move(variances)](Rng& rng, std::span<cplx> out) {
        const double v = vs[static_cast<std::size_t>(rng.below(vs.size()))];
        const double a = std::sqrt(v);
        const std::size_t p = out.size();
        if (p % 2 == 0) {
            for (std::size_t i = 0; i < p; ++i) out[i] = (i < p / 2) ? a : -a;
            rng.shuffle(out);
        } else {
            const std::size_t shift = static_cast<std::size_t>(rng.below(p));
            for (std::size_t i = 0; i < p; ++i)
                out[i] = a * std::sqrt(2.0) *
                         std::cos(2.0 * M_PI * static_cast<double>((i + shift) % p) /
                                  static_cast<double>(p));
        }
    };
    return s;
}

JumpLawSpec complex_disk_law(double jump_bound) {
    JumpLawSpec s;
    s.jump_bound = jump_bound;
    s.name = "complex-disk";
    s.fill = [jump_bound](Rng& rng, std::span<cplx> out) {
        // uniform in a disk of half the bound, then recentre; the recentred
        // offsets stay within the bound
        for (auto& v : out) {
            const double r = 0.5 * jump_bound * std::sqrt(rng.uniform());
            const double a = 2.0 * M_PI * rng.uniform();
            v = cplx(r * std::cos(a), r * std::sin(a));
        }
        cplx mean = 0.0;
        for (auto v : out) mean += v;
        mean /= static_cast<double>(out.size());
        for (auto& v : out) v -= mean;
    };
    return s;
}

PAdicMartingale random_martingale(std::uint64_t seed, int p, int depth, const JumpLawSpec& law,
                                  cplx root) {
    if (p < 2) throw std::invalid_argument("random_martingale: base must be >= 2");
    if (depth < 0) throw std::invalid_argument("random_martingale: negative depth");
    Rng rng(seed);
    std::vector<std::vector<cplx>> levels(depth + 1);
    levels[0] = {root};
    std::vector<cplx> offs(p);
    for (int k = 0; k < depth; ++k) {
        const auto& parents = levels[k];
        auto& children = levels[k + 1];
        children.resize(parents.size() * p);
        for (std::size_t i = 0; i < parents.size(); ++i) {
            law.fill(rng, offs);
            cplx head = 0.0;
            for (int c = 0; c + 1 < p; ++c) head += offs[c];
            offs[p - 1] = -head;  // exact zero-sum
            for (int c = 0; c < p; ++c) {
                if (std::abs(offs[c]) > law.jump_bound * (1.0 + 1e-9) + 1e-300)
                    throw std::invalid_argument("random_martingale: law exceeded jump bound");
                children[i * p + c] = parents[i] + offs[c];
            }
        }
    }
    return PAdicMartingale(p, depth, std::move(levels), law.jump_bound,
                           law.name + " seed=" + std::to_string(seed));
}

void MartingaleStats::validate() const {
    if (local_var_min > local_var_max)
        throw invariant_error("MartingaleStats: min > max local variance");
    if (sigma2 < 0.0) throw invariant_error("MartingaleStats: negative sigma2");
}

MartingaleStats martingale_stats(const PAdicMartingale& M, const std::vector<double>& beta_ts) {
    MartingaleStats st;
    const auto var = M.asymptotic_variance();
    st.sigma2 = var.summary.empty() ? 0.0 : var.summary.limit;
    if (st.sigma2 < 0.0 && st.sigma2 > -1e-12) st.sigma2 = 0.0;
    const auto lil = M.lil_constant_estimate();
    st.lil_estimate = lil.limit;
    auto [m, Mx] = M.sandwich_bounds();
    st.local_var_min = m;
    st.local_var_max = Mx;
    for (double t : beta_ts) st.beta[t] = M.integral_means(t, M.depth());
    st.validate();
    return st;
}

// ---------------------------------------------------------------------------

namespace {
constexpr char kMagic[8] = {'B', 'L', 'P', 'A', 'D', 'M', '0', '1'};

template <typename T>
void put(std::vector<std::uint8_t>& out, const T& v) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T get(const std::vector<std::uint8_t>& in, std::size_t& pos) {
    if (pos + sizeof(T) > in.size()) throw std::invalid_argument("binary record truncated");
    T v;
    std::memcpy(&v, in.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}
}  // namespace

std::vector<std::uint8_t> to_binary(const PAdicMartingale& M) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 8);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(M.base()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(M.depth()));
    put<double>(out, M.jump_bound());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(M.provenance().size()));
    out.insert(out.end(), M.provenance().begin(), M.provenance().end());
    for (int k = 0; k <= M.depth(); ++k)
        for (cplx v : M.level(k)) {
            put<double>(out, v.real());
            put<double>(out, v.imag());
        }
    return out;
}

PAdicMartingale from_binary(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0)
        throw std::invalid_argument("not a martingale binary record");
    std::size_t pos = 8;
    const auto p = static_cast<int>(get<std::uint32_t>(bytes, pos));
    const auto depth = static_cast<int>(get<std::uint32_t>(bytes, pos));
    const double jb = get<double>(bytes, pos);
    const auto plen = get<std::uint32_t>(bytes, pos);
    if (pos + plen > bytes.size()) throw std::invalid_argument("binary record truncated");
    std::string prov(bytes.begin() + pos, bytes.begin() + pos + plen);
    pos += plen;
    std::vector<std::vector<cplx>> levels(depth + 1);
    for (int k = 0; k <= depth; ++k) {
        const std::int64_t count = ipow(p, k);
        levels[k].resize(count);
        for (std::int64_t i = 0; i < count; ++i) {
            const double re = get<double>(bytes, pos);
            const double im = get<double>(bytes, pos);
            levels[k][i] = cplx(re, im);
        }
    }
    return PAdicMartingale(p, depth, std::move(levels), jb, std::move(prov));
}

std::string to_json(const PAdicMartingale& M) {
    nlohmann::json j;
    j["format"] = "blochlab-martingale-1";
    j["p"] = M.base();
    j["depth"] = M.depth();
    j["jump_bound"] = M.jump_bound();
    j["provenance"] = M.provenance();
    auto& lv = j["levels"];
    for (int k = 0; k <= M.depth(); ++k) {
        nlohmann::json arr = nlohmann::json::array();
        for (cplx v : M.level(k)) arr.push_back({v.real(), v.imag()});
        lv.push_back(std::move(arr));
    }
    return j.dump();
}

PAdicMartingale martingale_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "blochlab-martingale-1")
        throw std::invalid_argument("unknown martingale json format");
    const int p = j.at("p").get<int>();
    const int depth = j.at("depth").get<int>();
    std::vector<std::vector<cplx>> levels(depth + 1);
    const auto& lv = j.at("levels");
    for (int k = 0; k <= depth; ++k) {
        const auto& arr = lv.at(k);
        levels[k].reserve(arr.size());
        for (const auto& e : arr) levels[k].emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return PAdicMartingale(p, depth, std::move(levels), j.at("jump_bound").get<double>(),
                           j.value("provenance", ""));
}

}  // namespace blochlab

#include "blochlab/clt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blochlab/bridge.hpp"
#include "json.hpp"

namespace blochlab {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> raw) : samples(std::move(raw)) {
    if (samples.size() < 100)
        throw std::invalid_argument("EmpiricalDistribution: need at least 100 samples");
    std::sort(samples.begin(), samples.end());
}

double GaussianReference::cdf(double t) const {
    if (!(variance > 0.0)) throw std::invalid_argument("GaussianReference: variance must be > 0");
    return 0.5 * std::erfc(-t / std::sqrt(2.0 * variance));
}

double ks_distance(const EmpiricalDistribution& emp, const GaussianReference& ref) {
    const std::size_t n = emp.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double F = ref.cdf(emp.samples[i]);
        worst = std::max(worst, std::abs(F - static_cast<double>(i) / n));
        worst = std::max(worst, std::abs(F - static_cast<double>(i + 1) / n));
        if (i + 1 < n) {
            const double mid = ref.cdf(0.5 * (emp.samples[i] + emp.samples[i + 1]));
            worst = std::max(worst, std::abs(mid - static_cast<double>(i + 1) / n));
        }
    }
    return worst;
}

cplx char_function_2d(const std::vector<cplx>& samples, double s, double t) {
    if (samples.empty()) throw std::invalid_argument("char_function_2d: empty sample set");
    cplx acc = 0.0;
    for (cplx x : samples) {
        const double a = s * x.real() + t * x.imag();
        acc += cplx(std::cos(a), std::sin(a));
    }
    return acc / static_cast<double>(samples.size());
}

GoodBadPartition good_bad_partition(const PAdicMartingale& B, int n, double delta2,
                                    double sigma2_hat) {
    if (n < 1 || n > B.depth()) throw std::invalid_argument("good_bad_partition: bad order");
    GoodBadPartition part;
    part.order = n;
    part.sigma2_hat = sigma2_hat;
    part.delta2 = delta2;
    const double x = chi(B.base());
    const double lo = sigma2_hat / 2.0 - delta2;
    const double hi = sigma2_hat / 2.0 + delta2;
    part.good.resize(n);
    double bad = 0.0;
    for (int k = 0; k < n; ++k) {
        const std::int64_t count = ipow(B.base(), k);
        part.good[k].resize(count);
        const double len = 1.0 / static_cast<double>(count);
        for (std::int64_t j = 0; j < count; ++j) {
            const double v = B.local_variance(PAdicIndex(B.base(), k, j)) / x;
            const bool ok = (v >= lo && v <= hi);
            part.good[k][j] = ok;
            if (!ok) bad += len;
        }
    }
    part.bad_mass = bad / n;
    return part;
}

SplitMartingales split_good_bad(const PAdicMartingale& S, const GoodBadPartition& part) {
    const int p = S.base();
    const int n = part.order;
    const double x = chi(p);
    const double amp = std::sqrt(x * part.sigma2_hat / 2.0);

    // deterministic zero-mean pattern with per-node variance amp^2
    std::vector<double> pattern(p);
    if (p % 2 == 0) {
        for (int c = 0; c < p; ++c) pattern[c] = (c % 2 == 0) ? amp : -amp;
    } else {
        for (int c = 0; c < p; ++c)
            pattern[c] = amp * std::sqrt(2.0) * std::cos(2.0 * M_PI * c / p);
    }

    std::vector<std::vector<cplx>> good(S.depth() + 1), bad(S.depth() + 1);
    good[0] = {S.root()};
    bad[0] = {cplx(0.0)};
    for (int k = 0; k < S.depth(); ++k) {
        const auto& schild = S.level(k + 1);
        const auto& sparent = S.level(k);
        good[k + 1].resize(schild.size());
        bad[k + 1].resize(schild.size());
        const bool classified = k < n;
        for (std::size_t i = 0; i < sparent.size(); ++i) {
            const bool is_good = !classified || part.good[k][i];
            for (int c = 0; c < p; ++c) {
                const std::size_t ci = i * p + c;
                const cplx ds = schild[ci] - sparent[i];
                const cplx dg = is_good ? ds : cplx(pattern[c]);
                good[k + 1][ci] = good[k][i] + dg;
                bad[k + 1][ci] = bad[k][i] + (ds - dg);
            }
        }
    }
    const double jb = S.jump_bound();
    SplitMartingales out{
        PAdicMartingale(p, S.depth(), std::move(good), std::max(jb, amp),
                        S.provenance() + " good-part"),
        PAdicMartingale(p, S.depth(), std::move(bad), jb + amp, S.provenance() + " bad-part")};
    return out;
}

CltReport clt_check(const BlochEvaluator& b, double r, int sample_count, double sigma2_hat,
                    std::uint64_t seed) {
    if (sample_count < 100) throw std::invalid_argument("clt_check: need at least 100 samples");
    CltReport rep;
    rep.r = r;
    rep.sample_count = sample_count;
    rep.sigma2_hat = sigma2_hat;
    rep.family = b.name;

    // random angles: a dyadic grid would alias the top octaves of dyadic
    // series into a spurious mean shift
    const auto samples = rescaled_boundary_samples(b, r, sample_count, /*random=*/true, seed);

    std::vector<double> re(samples.size()), im(samples.size());
    double mre = 0.0, mim = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        re[i] = samples[i].real();
        im[i] = samples[i].imag();
        mre += re[i];
        mim += im[i];
    }
    mre /= samples.size();
    mim /= samples.size();
    double vre = 0.0, vim = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        vre += (re[i] - mre) * (re[i] - mre);
        vim += (im[i] - mim) * (im[i] - mim);
        cov += (re[i] - mre) * (im[i] - mim);
    }
    vre /= samples.size();
    vim /= samples.size();
    cov /= samples.size();

    rep.degenerate = !(sigma2_hat > 1e-12);
    if (!rep.degenerate) {
        const GaussianReference ref{sigma2_hat / 2.0, false};
        rep.ks_re = ks_distance(EmpiricalDistribution(re), ref);
        rep.ks_im = ks_distance(EmpiricalDistribution(im), ref);
        const double denom = std::sqrt(vre * vim);
        rep.corr_re_im = denom > 0.0 ? cov / denom : 0.0;
    } else {
        rep.ks_re = rep.ks_im = 0.5;  // flagged, not meaningful
        rep.corr_re_im = 0.0;
    }

    // A_delta truncation with delta = 0.1: -10 < Re < 10
    const double cap = 10.0;
    double mass_out = 0.0, m2_in = 0.0;
    for (double v : re) {
        if (std::abs(v) >= cap)
            mass_out += 1.0;
        else
            m2_in += v * v;
    }
    rep.truncation_mass = mass_out / re.size();
    rep.truncated_second_moment = m2_in / re.size();
    return rep;
}

std::string clt_report_json(const CltReport& rep) {
    nlohmann::json j;
    j["format"] = "blochlab-clt-report-1";
    j["family"] = rep.family;
    j["r"] = rep.r;
    j["N"] = rep.sample_count;
    j["sigma2_hat"] = rep.sigma2_hat;
    j["ks_re"] = rep.ks_re;
    j["ks_im"] = rep.ks_im;
    j["corr_re_im"] = rep.corr_re_im;
    j["truncation_mass"] = rep.truncation_mass;
    j["truncated_second_moment"] = rep.truncated_second_moment;
    j["degenerate"] = rep.degenerate;
    nlohmann::json arr = nlohmann::json::array();
    for (auto [d2, mass] : rep.bad_mass_by_delta2) arr.push_back({d2, mass});
    j["bad_mass_by_delta2"] = std::move(arr);
    return j.dump(2);
}

std::string histogram_csv(const std::vector<double>& samples, int bins) {
    if (samples.empty() || bins < 1) throw std::invalid_argument("histogram_csv: bad input");
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *mn, hi = std::max(*mx, *mn + 1e-12);
    std::vector<std::int64_t> counts(bins, 0);
    for (double v : samples) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++counts[b];
    }
    std::string out = "bin_left,bin_right,count\n";
    char buf[128];
    for (int b = 0; b < bins; ++b) {
        const double l = lo + (hi - lo) * b / bins;
        const double r = lo + (hi - lo) * (b + 1) / bins;
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%lld\n", l, r,
                      static_cast<long long>(counts[b]));
        out += buf;
    }
    return out;
}

}  // namespace blochlab

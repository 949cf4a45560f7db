#pragma once

// Empirical central-limit testing for rescaled Bloch boundary values:
// KS distances against Gaussian references, two-variable characteristic
// functions, and the good/bad box decomposition of a martingale.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "blochlab/bloch.hpp"
#include "blochlab/padic.hpp"

namespace blochlab {

struct EmpiricalDistribution {
    std::vector<double> samples;  // sorted
    explicit EmpiricalDistribution(std::vector<double> raw);
    std::size_t size() const { return samples.size(); }
};

struct GaussianReference {
    double variance = 1.0;  // mean 0
    bool complex_parts = false;  // Re/Im independent, each variance/2

    double cdf(double t) const;  // Phi(t/sqrt(variance))
};

// sup over sample points (left/right limits and midpoints) of |F_emp - F_ref|
double ks_distance(const EmpiricalDistribution& emp, const GaussianReference& ref);

// empirical mean of exp(i (s Re x + t Im x))
cplx char_function_2d(const std::vector<cplx>& samples, double s, double t);

// good/bad decomposition -----------------------------------------------------
struct GoodBadPartition {
    // per level 0..n-1, one flag per node: true = good (local variance pinched)
    std::vector<std::vector<bool>> good;
    double bad_mass = 0.0;  // hyperbolically weighted: (1/n) sum over bad I of |I|
    int order = 0;
    double sigma2_hat = 0.0;
    double delta2 = 0.0;
};

// classifies boxes by var_I/chi in [sigma2/2 - delta2, sigma2/2 + delta2]
GoodBadPartition good_bad_partition(const PAdicMartingale& B, int n, double delta2,
                                    double sigma2_hat);

// S = S_good + S_bad exactly; on bad boxes the good part gets deterministic
// zero-mean jumps with local variance chi * sigma2/2 (the good-band midpoint)
struct SplitMartingales {
    PAdicMartingale good;
    PAdicMartingale bad;
};
SplitMartingales split_good_bad(const PAdicMartingale& S, const GoodBadPartition& part);

// full report ------------------------------------------------------------------
struct CltReport {
    double r = 0.0;
    int sample_count = 0;
    double sigma2_hat = 0.0;
    double ks_re = 0.0;
    double ks_im = 0.0;
    double corr_re_im = 0.0;
    double truncation_mass = 0.0;  // measure outside A_delta, delta = 0.1
    double truncated_second_moment = 0.0;
    bool degenerate = false;       // sigma2_hat ~ 0; KS vs Gaussian meaningless
    std::vector<std::pair<double, double>> bad_mass_by_delta2;
    std::string family;
};

CltReport clt_check(const BlochEvaluator& b, double r, int sample_count, double sigma2_hat,
                    std::uint64_t seed = 20240101);

std::string clt_report_json(const CltReport& rep);
// histogram CSV: bin edges and counts for Re samples
std::string histogram_csv(const std::vector<double>& samples, int bins);

}  // namespace blochlab

#pragma once

// Finite-depth p-adic martingales on [0,1]: full per-level value storage,
// jumps, square functions, local variance/covariance and the three
// martingale characteristics (asymptotic variance, LIL constant, integral
// means spectrum).

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "blochlab/rng.hpp"
#include "blochlab/spectrum.hpp"

namespace blochlab {

using cplx = std::complex<double>;

struct invariant_error : std::runtime_error {
    explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

// Names the p-adic interval [j*p^-k, (j+1)*p^-k].
struct PAdicIndex {
    int base = 2;
    int level = 0;
    std::int64_t offset = 0;

    PAdicIndex() = default;
    PAdicIndex(int p, int k, std::int64_t j);
    double left() const;
    double right() const;
    double length() const;
};

std::int64_t ipow(std::int64_t b, int e);

// A jump law fills `out` (size p) with child offsets; the generator then
// forces an exactly zero sum and checks magnitudes against the declared
// jump bound.
using JumpLaw = std::function<void(Rng&, std::span<cplx> out)>;

struct JumpLawSpec {
    JumpLaw fill;
    double jump_bound = 1.0;
    std::string name;
};

JumpLawSpec zero_law();
JumpLawSpec rademacher_law(double scale = 1.0);
// per-node variance drawn uniformly from the given set; real +-sqrt(v) jumps (p even)
JumpLawSpec mixed_variance_law(std::vector<double> variances);
// complex offsets, uniform in a disk, recentred to mean zero
JumpLawSpec complex_disk_law(double jump_bound = 1.0);

class PAdicMartingale {
public:
    // depth 0 constant martingale
    explicit PAdicMartingale(int base = 2, cplx root = 0.0);
    PAdicMartingale(int base, int depth, std::vector<std::vector<cplx>> levels,
                    double jump_bound, std::string provenance);

    int base() const { return base_; }
    int depth() const { return depth_; }
    double jump_bound() const { return jump_bound_; }
    const std::string& provenance() const { return provenance_; }

    const std::vector<cplx>& level(int k) const;
    cplx value(const PAdicIndex& I) const;
    cplx root() const { return levels_[0][0]; }

    std::int64_t node_index(double x, int level) const;

    // exact checks -----------------------------------------------------------
    // max |parent - mean(children)| over all internal nodes
    double averaging_defect() const;
    void require_martingale(double tol = 1e-11) const;
    double max_jump() const;

    // operations --------------------------------------------------------------
    cplx jump(double x, int j) const;                    // X_{I_j(x)} - X_{I_{j-1}(x)}
    double square_function(double x, int n) const;       // sum of |jump|^2
    double local_variance(const PAdicIndex& I) const;
    double local_variance_n(const PAdicIndex& I, int n) const;
    cplx local_covariance_n(const PAdicMartingale& other, const PAdicIndex& I, int n) const;

    // per-level (1/n) * leaf means of |X_n|^2 and of <X>_n; both in the result
    struct VarianceEstimate {
        std::vector<double> direct;        // (1/n) int |X_n|^2
        std::vector<double> square_form;   // (1/n) int <X>_n
        SpectrumEstimate summary;          // square-function form + tail slope limit
    };
    VarianceEstimate asymptotic_variance() const;

    std::pair<double, double> sandwich_bounds() const;   // (inf, sup) of local variance

    double integral_means(double t, int n) const;        // (1/n) log int exp(t Re X_n)

    double lil_ratio(double x, int n) const;
    // Desk-scale LIL estimate: per level n >= 16 the interpolated
    // (1 - 1/(2 ln n))-quantile of |X_n| over leaves divided by
    // sqrt(n log log n); limit = max over levels.  (A plain max over leaves is
    // useless at finite depth: for unit jumps it grows like sqrt(n/loglog n).)
    SpectrumEstimate lil_constant_estimate() const;

    PAdicMartingale reblock(int n) const;

    // mean over leaves of |X_n|^{2p} (exact leaf enumeration)
    double moment(int n, int p) const;

private:
    int base_;
    int depth_;
    double jump_bound_;
    std::string provenance_;
    std::vector<std::vector<cplx>> levels_;
};

PAdicMartingale random_martingale(std::uint64_t seed, int p, int depth, const JumpLawSpec& law,
                                  cplx root = 0.0);

struct MartingaleStats {
    double sigma2 = 0.0;
    double lil_estimate = 0.0;
    std::map<double, double> beta;   // t -> beta(t) at the deepest level
    double local_var_min = 0.0;
    double local_var_max = 0.0;

    void validate() const;
};

MartingaleStats martingale_stats(const PAdicMartingale& M,
                                 const std::vector<double>& beta_ts = {0.1, 0.2, 0.4});

// serialization ---------------------------------------------------------------
// Flat binary record: magic, p, depth, jump bound, provenance, level-major
// complex arrays.  Round-trips bit-exactly.
std::vector<std::uint8_t> to_binary(const PAdicMartingale& M);
PAdicMartingale from_binary(const std::vector<std::uint8_t>& bytes);
std::string to_json(const PAdicMartingale& M);
PAdicMartingale martingale_from_json(const std::string& text);

}  // namespace blochlab

#pragma once

// Stochastic search over periodic unimodular Beltrami tiles maximizing the
// n-box average of |2 (S mu)'/rho|^2 — a desk-scale lower-bound hunt for the
// universal variance constant.  The objective is a hermitian quadratic form
// in the tile values (the transform is linear in mu), precomputed once per
// (n, g, quadrature); optimizer moves then cost O(cells).

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blochlab/beltrami.hpp"
#include "blochlab/bridge.hpp"

namespace blochlab {

struct SearchConfig {
    int box_order = 8;        // n
    int tile_depth = 3;       // g
    int scale_base = 2;       // p
    bool unimodular = true;   // |cell| = 1 exactly (extreme points); magnitudes < 1 behind flag
    std::string optimizer = "coordinate";  // "coordinate" | "annealing"
    int iterations = 200;
    std::uint64_t seed = 1;
    int quad_order = 6;
    std::string init = "random";  // "random" | "eig"

    void validate() const;
};

// objective of a periodic strip coefficient: box average over the top n-box
// (periodicity makes one box represent all)
double objective_value(const BeltramiCoefficient& mu, int n, const BoxQuadrature& q = {});

class ObjectiveForm {
public:
    ObjectiveForm(int box_order, int tile_depth, int scale_base, int quad_order);

    std::size_t size() const { return dim_; }
    double value(std::span<const cplx> tile) const;
    // out = Q * tile
    void mult(std::span<const cplx> tile, std::span<cplx> out) const;
    cplx entry(std::size_t r, std::size_t c) const { return q_[r * dim_ + c]; }

private:
    std::size_t dim_;
    std::vector<cplx> q_;
};

struct SearchState {
    SearchConfig config;
    int iterations_done = 0;
    std::array<std::uint64_t, 4> rng_state{};
    std::vector<cplx> current;
    std::vector<cplx> best;
    double best_value = 0.0;
    std::vector<double> history;  // best-so-far per iteration (monotone)
};

struct SearchResult {
    BeltramiCoefficient best_mu;
    double objective = 0.0;          // certified via the evaluator route
    double quad_error = 0.0;         // declared quadrature slack
    std::vector<double> history;
    SearchConfig config;
    SearchState state;               // resumable
};

SearchState init_search(const SearchConfig& cfg, const ObjectiveForm& form);
void run_search(SearchState& st, const ObjectiveForm& form, int iterations);
SearchResult finalize_search(const SearchState& st);

// one-call driver
SearchResult optimize(const SearchConfig& cfg);

std::string checkpoint_to_json(const SearchState& st);
SearchState checkpoint_from_json(const std::string& text);  // throws corrupt_state_error

struct corrupt_state_error : std::runtime_error {
    explicit corrupt_state_error(const std::string& w) : std::runtime_error(w) {}
};

// beta_{S mu}(t)/(t^2/4) on the radii ladder (small-t curvature estimate)
double b0_curvature(const BeltramiCoefficient& mu, double t,
                    const std::vector<int>& ladder_j = {6, 7, 8, 9, 10, 11}, int n_theta = 65536);

}  // namespace blochlab

#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rcplan/rng.hpp"
#include "rcplan/world.hpp"

namespace rcplan {

// Finite MDP with sparse transition rows.  Row (s, u) entries are kept
// sorted by successor index; inverse-CDF sampling over that fixed ordering
// is the determinism contract.
struct FiniteMdp {
    int num_states = 0;
    int num_inputs = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;  // [s * num_inputs + u]

    const std::vector<std::pair<int, double>>& row(int s, int u) const {
        return rows[static_cast<std::size_t>(s) * num_inputs + u];
    }
    std::vector<std::pair<int, double>>& row(int s, int u) {
        return rows[static_cast<std::size_t>(s) * num_inputs + u];
    }
    void init(int states, int inputs) {
        num_states = states;
        num_inputs = inputs;
        rows.assign(static_cast<std::size_t>(states) * inputs, {});
    }

    // max |row sum - 1| over all (s, u); rows must be within 1e-9.
    double max_row_sum_error() const;
};

// Row-stochastic chain stored column-major: column s holds the distribution
// out of state s, so a distribution pushes forward as b' = A b.
struct MarkovChain {
    Eigen::SparseMatrix<double> transition;  // (m x m), col s = p(.|s)
    Eigen::VectorXd initial;
};

// Grid motion: {stay, up, down, left, right}; the intended cell gets
// p_succ, the rest is split equally over the intended cell's in-bounds
// 8-neighbors.  Moving off-grid leaves the intended cell at the current one.
inline constexpr int kInputStay = 0;
inline constexpr int kInputUp = 1;
inline constexpr int kInputDown = 2;
inline constexpr int kInputLeft = 3;
inline constexpr int kInputRight = 4;
inline constexpr int kNumGridInputs = 5;

FiniteMdp build_grid_mdp(const GridWorld& world, double p_succ);

int sample_transition(const FiniteMdp& mdp, int s, int u, Rng& rng);

struct ValueIterationResult {
    Eigen::VectorXd value;
    std::vector<int> policy;
    int sweeps = 0;
    bool converged = false;
};

struct ValueIterationOptions {
    int horizon = -1;         // >= 0: run exactly this many sweeps
    double tolerance = 1e-9;  // fixed-point mode stopping threshold
    int sweep_cap = -1;       // fixed-point mode; default 10 * num_states
};

// Maximal-reachability Bellman iteration toward `target`.
// V0 = indicator; V_{l+1}(s) = max_u max(1_target(s), E[V_l]).  Greedy
// policy with lowest-input-index tie-breaking.
ValueIterationResult reachability_value_iteration(const FiniteMdp& mdp,
                                                  const std::vector<char>& target,
                                                  const ValueIterationOptions& opts = {});

// Reachability value of a fixed policy (same backup without the max over
// inputs); used to score one product's policy on another product.
Eigen::VectorXd policy_reachability_value(const FiniteMdp& mdp,
                                          const std::vector<char>& target,
                                          const std::vector<int>& policy,
                                          double tolerance = 1e-12, int sweep_cap = -1);

MarkovChain induce_chain(const FiniteMdp& mdp, const std::vector<int>& policy,
                         int initial_state);

Eigen::VectorXd chain_step(const MarkovChain& chain, const Eigen::VectorXd& b);

}  // namespace rcplan

#pragma once

#include <vector>

#include "rcplan/fsa.hpp"
#include "rcplan/mdp.hpp"
#include "rcplan/world.hpp"

namespace rcplan {

// Composition of the rover motion MDP and the FSA, with transitions
// weighted by the current beliefs.  State index = x * |Q| + q.  The state
// space involves only X and Q; beliefs enter through the transition
// weights, not as extra states.
struct ProductBeliefMdp {
    FiniteMdp mdp;
    int num_cells = 0;
    int num_fsa_states = 0;
    int initial = 0;               // (x_r, q0)
    std::vector<char> accepting;   // X x Q_f

    int state(int cell, int q) const { return cell * num_fsa_states + q; }
    int cell_of(int s) const { return s / num_fsa_states; }
    int fsa_state_of(int s) const { return s % num_fsa_states; }
};

// Product of beliefs that exactly the props in sigma hold at `cell`.
double joint_belief_alph(const BeliefMap& beliefs, int cell, std::uint32_t sigma);

// Belief mass on the FSA edge q -> q2 contributed by cell's props.
double belief_en(const BeliefMap& beliefs, const Fsa& fsa, int cell, int q, int q2);

ProductBeliefMdp build_product(const FiniteMdp& rover_mdp, const Fsa& fsa,
                               const BeliefMap& beliefs, int rover_cell);

struct PolicySynthesisResult {
    std::vector<int> policy;  // per product state
    Eigen::VectorXd value;
    int sweeps = 0;
};

// Reachability value iteration toward the accepting set.  horizon < 0 runs
// to the fixed point.
PolicySynthesisResult synthesize_policy(const ProductBeliefMdp& product,
                                        int horizon = -1, int sweep_cap = -1);

// Per-cell input map for a tracked automaton state.
std::vector<int> induce_rover_policy(const ProductBeliefMdp& product,
                                     const std::vector<int>& policy, int q);

// Per-cell maximum, over steps 0..T_r-1, of the belief of being at that
// cell when following `policy` from (rover_cell, q0); automaton state
// marginalized out.
std::vector<double> compute_b_max(const ProductBeliefMdp& product,
                                  const std::vector<int>& policy, int rover_cell,
                                  int t_r);

}  // namespace rcplan

#pragma once

#include <vector>

#include "rcplan/mdp.hpp"
#include "rcplan/world.hpp"

namespace rcplan {

// Binary entropy, log base 2, with 0 log 0 := 0.
double entropy(double b);

// W(x) = sum over copter-observable props of H(B(x |= ap)) + alpha * b_max(x).
double acquisition(const BeliefMap& beliefs, const std::vector<double>& b_max,
                   const SensorModel& copter_sensor, double alpha, int cell);

struct ExplorationStep {
    int step = 0;            // index within the phase
    int cell = 0;            // position after the motion
    int target = -1;         // selected goal cell (global mode only)
    std::vector<Observation> observations;
};

struct ExplorationOutcome {
    int final_cell = 0;
    int steps = 0;     // always equals T_c
    int n_succ = 0;    // global mode: targets reached
    std::vector<ExplorationStep> log;
};

// One-step greedy policy: at each of the T_c steps pick the input whose
// expected next-state acquisition is largest (exact expectation over the
// motion row; ties -> lowest input index), move, then sweep the sensors.
ExplorationOutcome local_explore(const FiniteMdp& copter_mdp,
                                 const SensorModel& copter_sensor, Rng& rng,
                                 BeliefMap& beliefs, const std::vector<double>& b_max,
                                 double alpha, const GridWorld& world, Cell start,
                                 int t_c);

// Global policy: repeatedly pick the cell with the highest acquisition
// (ties -> row-major first), steer toward it with a maximal-reachability
// policy, sweeping at every visited cell, until the step budget runs out.
ExplorationOutcome global_explore(const FiniteMdp& copter_mdp,
                                  const SensorModel& copter_sensor, Rng& rng,
                                  BeliefMap& beliefs, const std::vector<double>& b_max,
                                  double alpha, const GridWorld& world, Cell start,
                                  int t_c);

}  // namespace rcplan

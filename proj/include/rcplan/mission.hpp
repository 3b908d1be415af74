#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcplan/exploration.hpp"
#include "rcplan/fsa.hpp"
#include "rcplan/product.hpp"
#include "rcplan/world.hpp"

namespace rcplan {

enum class AutomatonUpdateMode {
    GroundTruth,    // q advances by the true labels of the visited cells
    BeliefSampled,  // (x, q) sampled jointly from the product rows
};

enum class ExplorationMode { Local, Global };

struct MissionConfig {
    int t_c = 5;
    int t_r = 3;
    double alpha = 1.5;
    double completion_threshold = 0.98;
    int k_max = 300;
    int value_iteration_horizon = -1;  // < 0: fixed point; else >= t_r
    AutomatonUpdateMode automaton_mode = AutomatonUpdateMode::GroundTruth;
    ExplorationMode exploration_mode = ExplorationMode::Global;
    std::uint64_t seed = 0;
    double p_succ_rover = 0.95;
    double p_succ_copter = 0.90;
    double initial_belief = 0.5;
    bool record_snapshots = true;
    int snapshot_every = 1;  // record every n-th round

    void validate() const;
};

struct MissionStep {
    int step = 0;  // index within the phase
    int cell = 0;
    int fsa_state = 0;
    std::vector<Observation> observations;
};

struct MissionPhaseResult {
    int rover_cell = 0;
    int fsa_state = 0;
    std::vector<double> b_max;
    bool complete = false;
    double value_at_current = 0.0;  // V at (rover_cell, fsa_state) after re-solve
    std::vector<MissionStep> log;
};

enum class RunStatus { Complete, BudgetExhausted };

struct PhaseRecord {
    int round = 0;
    int k_after = 0;
    bool is_exploration = false;
    ExplorationOutcome exploration;  // valid when is_exploration
    MissionPhaseResult mission;      // valid otherwise
};

struct BeliefSnapshot {
    int round = 0;
    int k = 0;
    std::vector<double> values;  // BeliefMap layout: cell * num_aps + ap
};

struct RunTrace {
    RunStatus status = RunStatus::BudgetExhausted;
    int k_final = 0;
    int rounds = 0;
    int rover_cell_final = 0;
    int copter_cell_final = 0;
    bool ground_truth_satisfied = false;
    std::vector<int> rover_cells;     // executed cell sequence, start included
    std::vector<PhaseRecord> phases;
    std::vector<BeliefSnapshot> snapshots;
    std::vector<long> visit_counts;   // sweep events per cell (rover + copter)
    long degenerate_events = 0;
    double final_value = 0.0;
    double wall_clock_planning_s = 0.0;
    double wall_clock_exploration_s = 0.0;
};

struct ExperimentSetup {
    GridWorld world;
    std::string formula_text;
    SensorModel rover_sensor;
    SensorModel copter_sensor;
    MissionConfig config;
};

// One T_r mission-execution window: synthesize the policy from the current
// beliefs, walk T_r steps while sweeping the rover sensors, then re-solve
// on the updated beliefs and recompute b_max.
MissionPhaseResult mission_execution(const FiniteMdp& rover_mdp, const Fsa& fsa,
                                     const SensorModel& rover_sensor,
                                     BeliefMap& beliefs, const GridWorld& world,
                                     int rover_cell, int fsa_state,
                                     const MissionConfig& config, Rng& rng,
                                     std::vector<long>* visit_counts = nullptr);

// Full alternating exploration / mission-execution loop.
RunTrace run(const ExperimentSetup& setup);

// Exact product using the true labels: mass p_r(x'|x,u) goes to
// (x', delta(q, L(x))).  The optimum on this product is the known-labels
// reference value.
ProductBeliefMdp ground_truth_product(const FiniteMdp& rover_mdp, const Fsa& fsa,
                                      const GridWorld& world, int rover_cell);

struct ConvergenceMetrics {
    int round = 0;
    int k = 0;
    double theorem_gap = 0.0;       // max |B - indicator(L)|
    double row_tv_gap = 0.0;        // max TV distance, belief vs true product rows
    double value_gap = 0.0;         // max_s |V_greedy-on-truth - V_hat|
    double entropy_sum = 0.0;
    long min_visit_count = 0;
};

// Per-snapshot diagnostics of the belief-convergence claims; visit counts
// come from the trace and refer to the end of the run.
std::vector<ConvergenceMetrics> convergence_report(const RunTrace& trace,
                                                   const GridWorld& world,
                                                   const Fsa& fsa,
                                                   const MissionConfig& config);

}  // namespace rcplan

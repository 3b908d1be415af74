#include "rcplan/exploration.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace rcplan {

double entropy(double b) {
    if (b < 0.0 || b > 1.0) throw std::domain_error("entropy argument outside [0,1]");
    if (b == 0.0 || b == 1.0) return 0.0;
    return -b * std::log2(b) - (1.0 - b) * std::log2(1.0 - b);
}

double acquisition(const BeliefMap& beliefs, const std::vector<double>& b_max,
                   const SensorModel& copter_sensor, double alpha, int cell) {
    double w = 0.0;
    for (const auto& p : copter_sensor.props) w += entropy(beliefs.get(cell, p.ap));
    return w + alpha * b_max[cell];
}

namespace {

std::vector<double> acquisition_field(const BeliefMap& beliefs,
                                      const std::vector<double>& b_max,
                                      const SensorModel& sensor, double alpha) {
    std::vector<double> w(beliefs.num_cells());
    for (int x = 0; x < beliefs.num_cells(); ++x)
        w[x] = acquisition(beliefs, b_max, sensor, alpha, x);
    return w;
}

}  // namespace

ExplorationOutcome local_explore(const FiniteMdp& copter_mdp,
                                 const SensorModel& copter_sensor, Rng& rng,
                                 BeliefMap& beliefs, const std::vector<double>& b_max,
                                 double alpha, const GridWorld& world, Cell start,
                                 int t_c) {
    if (t_c < 1) throw std::invalid_argument("t_c must be >= 1");
    ExplorationOutcome out;
    int x = world.index(start);
    for (int step = 0; step < t_c; ++step) {
        const auto w = acquisition_field(beliefs, b_max, copter_sensor, alpha);
        int best_u = 0;
        double best_ev = -1.0;
        for (int u = 0; u < copter_mdp.num_inputs; ++u) {
            double ev = 0.0;
            for (const auto& [x2, p] : copter_mdp.row(x, u)) ev += p * w[x2];
            if (ev > best_ev) {
                best_ev = ev;
                best_u = u;
            }
        }
        x = sample_transition(copter_mdp, x, best_u, rng);
        ExplorationStep ev{step, x, -1, {}};
        sweep_and_update(copter_sensor, rng, beliefs, world, world.cell(x),
                         &ev.observations);
        out.log.push_back(std::move(ev));
    }
    out.final_cell = x;
    out.steps = t_c;
    return out;
}

ExplorationOutcome global_explore(const FiniteMdp& copter_mdp,
                                  const SensorModel& copter_sensor, Rng& rng,
                                  BeliefMap& beliefs, const std::vector<double>& b_max,
                                  double alpha, const GridWorld& world, Cell start,
                                  int t_c) {
    if (t_c < 1) throw std::invalid_argument("t_c must be >= 1");
    ExplorationOutcome out;
    int x = world.index(start);
    int steps = 0;
    std::map<int, std::vector<int>> policy_cache;  // target cell -> policy

    while (steps < t_c) {
        const auto w = acquisition_field(beliefs, b_max, copter_sensor, alpha);
        int target = 0;
        for (int c = 1; c < world.num_cells(); ++c)
            if (w[c] > w[target]) target = c;  // row-major first on ties

        auto it = policy_cache.find(target);
        if (it == policy_cache.end()) {
            std::vector<char> goal(world.num_cells(), 0);
            goal[target] = 1;
            auto vi = reachability_value_iteration(copter_mdp, goal);
            it = policy_cache.emplace(target, std::move(vi.policy)).first;
        }
        const auto& policy = it->second;

        bool moved = false;
        while (x != target && steps < t_c) {
            x = sample_transition(copter_mdp, x, policy[x], rng);
            ExplorationStep ev{steps, x, target, {}};
            sweep_and_update(copter_sensor, rng, beliefs, world, world.cell(x),
                             &ev.observations);
            out.log.push_back(std::move(ev));
            ++steps;
            moved = true;
        }
        if (x == target) {
            ++out.n_succ;
            if (!moved && steps < t_c) {
                // already at the selected cell: consume one stay step and
                // sweep there, so the selection cannot spin without progress
                x = sample_transition(copter_mdp, x, kInputStay, rng);
                ExplorationStep ev{steps, x, target, {}};
                sweep_and_update(copter_sensor, rng, beliefs, world, world.cell(x),
                                 &ev.observations);
                out.log.push_back(std::move(ev));
                ++steps;
            }
        }
    }
    out.final_cell = x;
    out.steps = steps;
    return out;
}

}  // namespace rcplan

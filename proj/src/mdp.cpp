#include "rcplan/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcplan {

double FiniteMdp::max_row_sum_error() const {
    double worst = 0.0;
    for (const auto& row : rows) {
        double sum = 0.0;
        for (const auto& [s, p] : row) sum += p;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

namespace {

Cell neighbor(Cell c, int input) {
    switch (input) {
        case kInputUp:    return {c.i, c.j + 1};
        case kInputDown:  return {c.i, c.j - 1};
        case kInputLeft:  return {c.i - 1, c.j};
        case kInputRight: return {c.i + 1, c.j};
        default:          return c;
    }
}

}  // namespace

FiniteMdp build_grid_mdp(const GridWorld& world, double p_succ) {
    if (p_succ <= 0.0 || p_succ > 1.0)
        throw std::invalid_argument("p_succ must be in (0, 1]");
    FiniteMdp mdp;
    mdp.init(world.num_cells(), kNumGridInputs);
    for (int idx = 0; idx < world.num_cells(); ++idx) {
        const Cell cur = world.cell(idx);
        for (int u = 0; u < kNumGridInputs; ++u) {
            Cell intended = neighbor(cur, u);
            if (!world.in_bounds(intended)) intended = cur;
            std::vector<std::pair<int, double>> row;
            row.emplace_back(world.index(intended), p_succ);
            if (p_succ < 1.0) {
                std::vector<int> spread;
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        if (di == 0 && dj == 0) continue;
                        Cell n{intended.i + di, intended.j + dj};
                        if (world.in_bounds(n)) spread.push_back(world.index(n));
                    }
                const double each = (1.0 - p_succ) / spread.size();
                for (int s : spread) row.emplace_back(s, each);
            }
            std::sort(row.begin(), row.end());
            // merge duplicates (intended can coincide with a spread cell only
            // via clipping, but keep the row well formed regardless)
            std::vector<std::pair<int, double>> merged;
            for (auto& [s, p] : row) {
                if (!merged.empty() && merged.back().first == s)
                    merged.back().second += p;
                else
                    merged.emplace_back(s, p);
            }
            mdp.row(idx, u) = std::move(merged);
        }
    }
    return mdp;
}

int sample_transition(const FiniteMdp& mdp, int s, int u, Rng& rng) {
    const auto& row = mdp.row(s, u);
    const double r = rng.uniform();
    double acc = 0.0;
    for (const auto& [s2, p] : row) {
        acc += p;
        if (r < acc) return s2;
    }
    return row.back().first;  // guard against rounding at r ~ 1
}

ValueIterationResult reachability_value_iteration(const FiniteMdp& mdp,
                                                  const std::vector<char>& target,
                                                  const ValueIterationOptions& opts) {
    const int m = mdp.num_states;
    ValueIterationResult res;
    res.value = Eigen::VectorXd::Zero(m);
    for (int s = 0; s < m; ++s)
        if (target[s]) res.value[s] = 1.0;
    res.policy.assign(m, 0);

    const bool horizon_mode = opts.horizon >= 0;
    const int cap = horizon_mode ? opts.horizon
                                 : (opts.sweep_cap > 0 ? opts.sweep_cap : 10 * std::max(m, 1));
    Eigen::VectorXd next(m);
    for (int sweep = 0; sweep < cap; ++sweep) {
        double max_delta = 0.0;
        for (int s = 0; s < m; ++s) {
            double best = -1.0;
            int best_u = 0;
            for (int u = 0; u < mdp.num_inputs; ++u) {
                // inside the target the outer max clamps every input to 1,
                // so all inputs tie and the tie rule picks input 0
                double ev = 0.0;
                if (target[s]) {
                    ev = 1.0;
                } else {
                    for (const auto& [s2, p] : mdp.row(s, u)) ev += p * res.value[s2];
                }
                if (ev > best) {
                    best = ev;
                    best_u = u;
                }
            }
            double v = target[s] ? 1.0 : best;
            if (v > 1.0) v = 1.0;
            next[s] = v;
            // record the argmax only on strict improvement: once the iterates
            // saturate (e.g. V = 1 everywhere on a sink-free grid) every input
            // ties and a plain argmax would erase the steering information
            if (v > res.value[s] + 1e-15) res.policy[s] = best_u;
            max_delta = std::max(max_delta, std::abs(v - res.value[s]));
        }
        res.value.swap(next);
        ++res.sweeps;
        if (!horizon_mode && max_delta < opts.tolerance) {
            res.converged = true;
            break;
        }
    }
    if (horizon_mode) res.converged = true;
    return res;
}

Eigen::VectorXd policy_reachability_value(const FiniteMdp& mdp,
                                          const std::vector<char>& target,
                                          const std::vector<int>& policy,
                                          double tolerance, int sweep_cap) {
    const int m = mdp.num_states;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    for (int s = 0; s < m; ++s)
        if (target[s]) v[s] = 1.0;
    const int cap = sweep_cap > 0 ? sweep_cap : 100 * std::max(m, 1);
    Eigen::VectorXd next(m);
    for (int sweep = 0; sweep < cap; ++sweep) {
        double max_delta = 0.0;
        for (int s = 0; s < m; ++s) {
            if (target[s]) {
                next[s] = 1.0;
            } else {
                double ev = 0.0;
                for (const auto& [s2, p] : mdp.row(s, policy[s])) ev += p * v[s2];
                next[s] = ev;
            }
            max_delta = std::max(max_delta, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (max_delta < tolerance) break;
    }
    return v;
}

MarkovChain induce_chain(const FiniteMdp& mdp, const std::vector<int>& policy,
                         int initial_state) {
    const int m = mdp.num_states;
    MarkovChain chain;
    std::vector<Eigen::Triplet<double>> trip;
    for (int s = 0; s < m; ++s)
        for (const auto& [s2, p] : mdp.row(s, policy[s]))
            trip.emplace_back(s2, s, p);  // column s = distribution out of s
    chain.transition.resize(m, m);
    chain.transition.setFromTriplets(trip.begin(), trip.end());
    chain.initial = Eigen::VectorXd::Zero(m);
    chain.initial[initial_state] = 1.0;
    return chain;
}

Eigen::VectorXd chain_step(const MarkovChain& chain, const Eigen::VectorXd& b) {
    if (b.size() != chain.transition.cols())
        throw std::invalid_argument("chain_step: distribution dimension mismatch");
    return chain.transition * b;
}

}  // namespace rcplan

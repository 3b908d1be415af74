#include "rcplan/mission.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rcplan {

void MissionConfig::validate() const {
    if (t_c < 1 || t_r < 1) throw ConfigError("t_c and t_r must be >= 1");
    if (alpha < 0.0) throw ConfigError("alpha must be >= 0");
    if (completion_threshold <= 0.0 || completion_threshold > 1.0)
        throw ConfigError("completion threshold must be in (0, 1]");
    if (k_max < 0) throw ConfigError("k_max must be >= 0");
    if (value_iteration_horizon >= 0 && value_iteration_horizon < t_r)
        throw ConfigError("value-iteration horizon must be >= t_r");
    if (initial_belief <= 0.0 || initial_belief >= 1.0)
        throw ConfigError("initial belief must lie strictly inside (0, 1)");
    if (snapshot_every < 1) throw ConfigError("snapshot_every must be >= 1");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

MissionPhaseResult mission_execution(const FiniteMdp& rover_mdp, const Fsa& fsa,
                                     const SensorModel& rover_sensor,
                                     BeliefMap& beliefs, const GridWorld& world,
                                     int rover_cell, int fsa_state,
                                     const MissionConfig& config, Rng& rng,
                                     std::vector<long>* visit_counts) {
    MissionPhaseResult res;
    const int horizon = config.value_iteration_horizon;

    ProductBeliefMdp product = build_product(rover_mdp, fsa, beliefs, rover_cell);
    PolicySynthesisResult plan = synthesize_policy(product, horizon);

    int x = rover_cell;
    int q = fsa_state;
    for (int step = 0; step < config.t_r; ++step) {
        const int u = plan.policy[product.state(x, q)];
        if (config.automaton_mode == AutomatonUpdateMode::BeliefSampled) {
            const int s2 = sample_transition(product.mdp, product.state(x, q), u, rng);
            x = product.cell_of(s2);
            q = product.fsa_state_of(s2);
        } else {
            x = sample_transition(rover_mdp, x, u, rng);
            q = fsa.step(q, world.label(world.cell(x)));
        }
        MissionStep ms{step, x, q, {}};
        sweep_and_update(rover_sensor, rng, beliefs, world, world.cell(x),
                         &ms.observations);
        if (visit_counts) ++(*visit_counts)[x];
        res.log.push_back(std::move(ms));
    }

    // re-solve on the updated beliefs and publish the new reachability map
    ProductBeliefMdp product2 = build_product(rover_mdp, fsa, beliefs, x);
    PolicySynthesisResult plan2 = synthesize_policy(product2, horizon);
    res.rover_cell = x;
    res.fsa_state = q;
    res.b_max = compute_b_max(product2, plan2.policy, x, config.t_r);
    res.value_at_current = plan2.value[product2.state(x, q)];
    res.complete = res.value_at_current > config.completion_threshold;
    return res;
}

RunTrace run(const ExperimentSetup& setup) {
    const GridWorld& world = setup.world;
    const MissionConfig& config = setup.config;
    config.validate();
    validate_sensor_coverage(setup.rover_sensor, setup.copter_sensor, world.num_aps());

    const ApSet aps = world.ap_set();
    const FormulaPtr formula = parse_formula(setup.formula_text, aps);
    const Fsa fsa = compile(formula, aps);

    const FiniteMdp rover_mdp = build_grid_mdp(world, config.p_succ_rover);
    const FiniteMdp copter_mdp = build_grid_mdp(world, config.p_succ_copter);

    BeliefMap beliefs = BeliefMap::from_world(world, config.initial_belief);
    Rng rng(config.seed);

    RunTrace trace;
    trace.visit_counts.assign(world.num_cells(), 0);
    int x_r = world.index(world.rover_start);
    int x_c = world.index(world.copter_start);
    trace.rover_cells.push_back(x_r);

    int q = fsa.initial;
    if (config.automaton_mode == AutomatonUpdateMode::GroundTruth)
        q = fsa.step(q, world.label(world.rover_start));  // word starts at L(x(0))

    // initial policy solve and reachability map
    auto t0 = Clock::now();
    ProductBeliefMdp product = build_product(rover_mdp, fsa, beliefs, x_r);
    PolicySynthesisResult plan = synthesize_policy(product, config.value_iteration_horizon);
    std::vector<double> b_max = compute_b_max(product, plan.policy, x_r, config.t_r);
    trace.wall_clock_planning_s += seconds_since(t0);

    double value = plan.value[product.state(x_r, q)];
    bool complete = value > config.completion_threshold;

    int k = 0;
    int round = 0;
    auto snapshot = [&]() {
        if (!config.record_snapshots || round % config.snapshot_every != 0) return;
        trace.snapshots.push_back({round, k, beliefs.raw()});
    };
    snapshot();

    while (!complete && k < config.k_max) {
        ++round;

        auto te = Clock::now();
        ExplorationOutcome exp =
            config.exploration_mode == ExplorationMode::Local
                ? local_explore(copter_mdp, setup.copter_sensor, rng, beliefs, b_max,
                                config.alpha, world, world.cell(x_c), config.t_c)
                : global_explore(copter_mdp, setup.copter_sensor, rng, beliefs, b_max,
                                 config.alpha, world, world.cell(x_c), config.t_c);
        trace.wall_clock_exploration_s += seconds_since(te);
        x_c = exp.final_cell;
        k += config.t_c;
        for (const auto& st : exp.log) ++trace.visit_counts[st.cell];
        trace.phases.push_back({round, k, true, std::move(exp), {}});

        auto tm = Clock::now();
        MissionPhaseResult mis =
            mission_execution(rover_mdp, fsa, setup.rover_sensor, beliefs, world, x_r, q,
                              config, rng, &trace.visit_counts);
        trace.wall_clock_planning_s += seconds_since(tm);
        x_r = mis.rover_cell;
        q = mis.fsa_state;
        b_max = mis.b_max;
        value = mis.value_at_current;
        complete = mis.complete;
        k += config.t_r;
        for (const auto& st : mis.log) trace.rover_cells.push_back(st.cell);
        trace.phases.push_back({round, k, false, {}, std::move(mis)});

        snapshot();
    }

    trace.status = complete ? RunStatus::Complete : RunStatus::BudgetExhausted;
    trace.k_final = k;
    trace.rounds = round;
    trace.rover_cell_final = x_r;
    trace.copter_cell_final = x_c;
    trace.final_value = value;
    trace.degenerate_events = beliefs.degenerate_events();

    std::vector<std::uint32_t> word;
    word.reserve(trace.rover_cells.size());
    for (int cell : trace.rover_cells) word.push_back(world.labels[cell]);
    // the run itself consumed L(x(0)) already, so feed the full word from an
    // untouched initial state
    int qq = fsa.initial;
    bool sat = fsa.accepting[qq];
    for (std::uint32_t sigma : word) {
        qq = fsa.step(qq, sigma);
        sat = sat || fsa.accepting[qq];
    }
    trace.ground_truth_satisfied = sat;
    return trace;
}

ProductBeliefMdp ground_truth_product(const FiniteMdp& rover_mdp, const Fsa& fsa,
                                      const GridWorld& world, int rover_cell) {
    const int nx = rover_mdp.num_states;
    const int nq = fsa.num_states;
    ProductBeliefMdp prod;
    prod.num_cells = nx;
    prod.num_fsa_states = nq;
    prod.initial = rover_cell * nq + fsa.initial;
    prod.mdp.init(nx * nq, rover_mdp.num_inputs);
    prod.accepting.assign(static_cast<std::size_t>(nx) * nq, 0);
    for (int x = 0; x < nx; ++x)
        for (int q = 0; q < nq; ++q)
            if (fsa.accepting[q]) prod.accepting[prod.state(x, q)] = 1;

    for (int x = 0; x < nx; ++x) {
        const std::uint32_t sigma = world.labels[x];
        for (int q = 0; q < nq; ++q) {
            const int q2 = fsa.delta[q][sigma];
            for (int u = 0; u < rover_mdp.num_inputs; ++u) {
                auto& out = prod.mdp.row(prod.state(x, q), u);
                for (const auto& [x2, p] : rover_mdp.row(x, u))
                    out.emplace_back(prod.state(x2, q2), p);
                std::sort(out.begin(), out.end());
            }
        }
    }
    return prod;
}

std::vector<ConvergenceMetrics> convergence_report(const RunTrace& trace,
                                                   const GridWorld& world,
                                                   const Fsa& fsa,
                                                   const MissionConfig& config) {
    const FiniteMdp rover_mdp = build_grid_mdp(world, config.p_succ_rover);
    const ProductBeliefMdp truth = ground_truth_product(rover_mdp, fsa, world, 0);
    ValueIterationOptions tight;  // match policy_reachability_value's precision
    tight.tolerance = 1e-12;
    tight.sweep_cap = 100 * std::max(truth.mdp.num_states, 1);
    const auto vi_truth = reachability_value_iteration(truth.mdp, truth.accepting, tight);

    long min_visits = 0;
    if (!trace.visit_counts.empty())
        min_visits = *std::min_element(trace.visit_counts.begin(),
                                       trace.visit_counts.end());

    std::vector<ConvergenceMetrics> out;
    for (const auto& snap : trace.snapshots) {
        ConvergenceMetrics m;
        m.round = snap.round;
        m.k = snap.k;
        m.min_visit_count = min_visits;

        BeliefMap beliefs(world.num_cells(), world.num_aps());
        for (int c = 0; c < world.num_cells(); ++c)
            for (int ap = 0; ap < world.num_aps(); ++ap) {
                const double b = snap.values[c * world.num_aps() + ap];
                beliefs.set(c, ap, b);
                const double target = world.has_label(world.cell(c), ap) ? 1.0 : 0.0;
                m.theorem_gap = std::max(m.theorem_gap, std::abs(b - target));
                m.entropy_sum += entropy(b);
            }

        const ProductBeliefMdp belief_prod = build_product(rover_mdp, fsa, beliefs, 0);
        for (int s = 0; s < belief_prod.mdp.num_states; ++s) {
            for (int u = 0; u < belief_prod.mdp.num_inputs; ++u) {
                // total-variation distance between sparse rows
                double tv = 0.0;
                const auto& ra = belief_prod.mdp.row(s, u);
                const auto& rb = truth.mdp.row(s, u);
                std::size_t ia = 0, ib = 0;
                while (ia < ra.size() || ib < rb.size()) {
                    if (ib >= rb.size() || (ia < ra.size() && ra[ia].first < rb[ib].first)) {
                        tv += ra[ia++].second;
                    } else if (ia >= ra.size() || rb[ib].first < ra[ia].first) {
                        tv += rb[ib++].second;
                    } else {
                        tv += std::abs(ra[ia].second - rb[ib].second);
                        ++ia;
                        ++ib;
                    }
                }
                m.row_tv_gap = std::max(m.row_tv_gap, 0.5 * tv);
            }
        }

        const auto greedy = synthesize_policy(belief_prod);
        const Eigen::VectorXd v_greedy = policy_reachability_value(
            truth.mdp, truth.accepting, greedy.policy);
        m.value_gap = (v_greedy - vi_truth.value).cwiseAbs().maxCoeff();

        out.push_back(m);
    }
    return out;
}

}  // namespace rcplan

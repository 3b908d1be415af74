// rcplan — mission compilation, single runs, Monte Carlo comparisons and
// value-iteration scaling benchmarks for the rover/copter planner.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcplan/mission.hpp"
#include "rcplan/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rcplan;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string default_out_dir() {
    const char* env = std::getenv("RCPLAN_OUT_DIR");
    return env ? env : "out";
}

SensorModel parse_sensor(const json& j, const std::string& owner, const ApSet& aps) {
    SensorModel s;
    s.owner = owner;
    for (const auto& jp : j.at("props")) {
        SensorModel::Prop p;
        p.ap = aps.index(jp.at("prop").get<std::string>());
        if (p.ap < 0) throw ConfigError("sensor prop not in atomic_props");
        p.range = jp.at("range").get<double>();
        p.magnitude = jp.at("magnitude").get<double>();
        if (p.range < 0.0) throw ConfigError("sensor range must be >= 0");
        if (p.magnitude <= 0.0 || p.magnitude > 0.5)
            throw ConfigError("sensor magnitude must be in (0, 0.5]");
        s.props.push_back(p);
    }
    std::sort(s.props.begin(), s.props.end(),
              [](const auto& a, const auto& b) { return a.ap < b.ap; });
    return s;
}

ExperimentSetup load_setup(const std::string& config_path) {
    std::ifstream is(config_path);
    if (!is) throw ConfigError("cannot open config file: " + config_path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ExperimentSetup setup;
    fs::path base = fs::path(config_path).parent_path();
    fs::path map_path = j.at("map").get<std::string>();
    if (map_path.is_relative()) map_path = base / map_path;
    setup.world = load_world_file(map_path.string());
    setup.formula_text = j.at("formula").get<std::string>();

    MissionConfig& c = setup.config;
    c.t_c = j.value("t_c", c.t_c);
    c.t_r = j.value("t_r", c.t_r);
    c.alpha = j.value("alpha", c.alpha);
    c.completion_threshold = j.value("threshold", c.completion_threshold);
    c.k_max = j.value("k_max", c.k_max);
    c.value_iteration_horizon = j.value("vi_horizon", c.value_iteration_horizon);
    c.seed = j.value("seed", c.seed);
    c.p_succ_rover = j.value("p_succ_rover", c.p_succ_rover);
    c.p_succ_copter = j.value("p_succ_copter", c.p_succ_copter);
    c.initial_belief = j.value("initial_belief", c.initial_belief);
    c.record_snapshots = j.value("record_snapshots", c.record_snapshots);
    c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
    const std::string amode = j.value("automaton_mode", std::string("ground_truth"));
    if (amode == "ground_truth")
        c.automaton_mode = AutomatonUpdateMode::GroundTruth;
    else if (amode == "belief_sampled")
        c.automaton_mode = AutomatonUpdateMode::BeliefSampled;
    else
        throw ConfigError("automaton_mode must be ground_truth or belief_sampled");
    const std::string emode = j.value("exploration_mode", std::string("global"));
    if (emode == "local")
        c.exploration_mode = ExplorationMode::Local;
    else if (emode == "global")
        c.exploration_mode = ExplorationMode::Global;
    else
        throw ConfigError("exploration_mode must be local or global");

    const ApSet aps = setup.world.ap_set();
    setup.rover_sensor = parse_sensor(j.at("rover_sensor"), "rover", aps);
    setup.copter_sensor = parse_sensor(j.at("copter_sensor"), "copter", aps);
    validate_sensor_coverage(setup.rover_sensor, setup.copter_sensor, aps.size());
    return setup;
}

// ---------------------------------------------------------------------------

int cmd_compile(const std::string& formula_text, const std::string& ap_csv,
                const std::string& dot_path, const std::string& json_path) {
    ApSet aps(split_csv(ap_csv));
    FormulaPtr f = parse_formula(formula_text, aps);
    Fsa fsa = compile(f, aps);
    int nf = 0;
    for (int q = 0; q < fsa.num_states; ++q)
        if (fsa.accepting[q]) ++nf;
    std::cout << "states: " << fsa.num_states << "\naccepting: " << nf << "\n";
    if (!dot_path.empty()) {
        std::ofstream os(dot_path);
        write_dot(fsa, os);
    }
    if (!json_path.empty()) {
        std::ofstream os(json_path);
        write_json(fsa, os);
    }
    return 0;
}

int cmd_run(ExperimentSetup setup, const std::string& out_dir) {
    fs::create_directories(out_dir);
    RunTrace trace = run(setup);

    {
        std::ofstream os(fs::path(out_dir) / "trace.jsonl");
        write_trace_jsonl(trace, setup.world, os);
    }
    {
        std::ofstream os(fs::path(out_dir) / "summary.json");
        write_summary_json(trace, os);
    }
    if (!trace.snapshots.empty()) {
        std::ofstream os(fs::path(out_dir) / "snapshots.jsonl");
        write_snapshots_jsonl(trace, os);
        for (int ap = 0; ap < setup.world.num_aps(); ++ap) {
            std::ofstream cs(fs::path(out_dir) /
                             ("belief_" + setup.world.ap_names[ap] + ".csv"));
            write_belief_csv(trace.snapshots.back().values, setup.world, ap, cs);
        }
    }
    std::cout << (trace.status == RunStatus::Complete ? "complete" : "budget_exhausted")
              << " k=" << trace.k_final << " value=" << trace.final_value << "\n";
    return 0;
}

struct TrialResult {
    int trial = 0;
    Cell start_r, start_c;
    bool local_complete = false, global_complete = false;
    double local_explore_s = 0.0, global_explore_s = 0.0;
};

int cmd_montecarlo(const ExperimentSetup& base, int trials, bool random_starts,
                   int threads, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const GridWorld& world = base.world;
    const int obst = world.ap_set().index("O");

    std::vector<TrialResult> results(trials);
    std::mutex mu;
    int next_trial = 0;

    auto worker = [&]() {
        for (;;) {
            int t;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next_trial >= trials) return;
                t = next_trial++;
            }
            ExperimentSetup setup = base;
            setup.config.seed = base.config.seed + static_cast<std::uint64_t>(t);
            if (random_starts) {
                // start draws come from a dedicated stream so both arms see
                // identical positions
                Rng srng(setup.config.seed ^ 0x9e3779b97f4a7c15ull);
                auto draw = [&](bool avoid_obstacles) {
                    for (;;) {
                        int c = srng.uniform_int(world.num_cells());
                        if (avoid_obstacles && obst >= 0 &&
                            world.has_label(world.cell(c), obst))
                            continue;
                        return world.cell(c);
                    }
                };
                setup.world.rover_start = draw(true);
                setup.world.copter_start = draw(false);
            }
            setup.config.record_snapshots = false;

            TrialResult r;
            r.trial = t;
            r.start_r = setup.world.rover_start;
            r.start_c = setup.world.copter_start;

            setup.config.exploration_mode = ExplorationMode::Local;
            RunTrace local = run(setup);
            r.local_complete = local.status == RunStatus::Complete;
            r.local_explore_s = local.wall_clock_exploration_s;

            setup.config.exploration_mode = ExplorationMode::Global;
            RunTrace global = run(setup);
            r.global_complete = global.status == RunStatus::Complete;
            r.global_explore_s = global.wall_clock_exploration_s;

            {
                std::lock_guard<std::mutex> lock(mu);
                results[t] = r;
                std::cerr << "trial " << t << ": local="
                          << (r.local_complete ? "complete" : "timeout")
                          << " global=" << (r.global_complete ? "complete" : "timeout")
                          << "\n";
            }
        }
    };

    std::vector<std::thread> pool;
    const int nthreads = std::max(1, threads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    int local_n = 0, global_n = 0;
    double local_s = 0.0, global_s = 0.0;
    std::ofstream os(fs::path(out_dir) / "montecarlo.csv");
    os << "trial,start_r_i,start_r_j,start_c_i,start_c_j,local_complete,global_complete,"
          "local_explore_s,global_explore_s\n";
    for (const auto& r : results) {
        os << r.trial << "," << r.start_r.i << "," << r.start_r.j << "," << r.start_c.i
           << "," << r.start_c.j << "," << r.local_complete << "," << r.global_complete
           << "," << r.local_explore_s << "," << r.global_explore_s << "\n";
        local_n += r.local_complete;
        global_n += r.global_complete;
        local_s += r.local_explore_s;
        global_s += r.global_explore_s;
    }
    std::ofstream agg(fs::path(out_dir) / "montecarlo_summary.json");
    json j{{"trials", trials},
           {"local_completions", local_n},
           {"global_completions", global_n},
           {"mean_local_explore_s", local_s / trials},
           {"mean_global_explore_s", global_s / trials}};
    agg << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\n";
    return 0;
}

GridWorld benchmark_world(int n) {
    int h = static_cast<int>(std::sqrt(static_cast<double>(n)));
    while (n % h != 0) --h;
    GridWorld w;
    w.width = n / h;
    w.height = h;
    w.ap_names = {"A", "O"};
    w.labels.assign(n, 0);
    w.labels[n - 1] = 1u;  // one target, no obstacles; beliefs are random anyway
    w.rover_start = {0, 0};
    w.copter_start = {0, 0};
    return w;
}

int cmd_benchmark(const std::string& sizes_csv, std::uint64_t seed,
                  const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / "benchmark.csv");
    os << "n,seconds\n";
    for (const std::string& tok : split_csv(sizes_csv)) {
        const int n = std::stoi(tok);
        if (n < 1) throw ConfigError("grid sizes must be >= 1");
        GridWorld world = benchmark_world(n);
        const ApSet aps = world.ap_set();
        const Fsa fsa = compile(parse_formula("!O U (!O & A)", aps), aps);
        const FiniteMdp mdp = build_grid_mdp(world, 0.95);
        BeliefMap beliefs(n, aps.size());
        Rng rng(seed);
        for (int c = 0; c < n; ++c)
            for (int ap = 0; ap < aps.size(); ++ap) {
                double b;
                do {
                    b = rng.uniform();
                } while (b == 0.0);
                beliefs.set(c, ap, b);
            }
        const auto t0 = std::chrono::steady_clock::now();
        const ProductBeliefMdp prod = build_product(mdp, fsa, beliefs, 0);
        const auto plan = synthesize_policy(prod);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        os << n << "," << secs << "\n";
        std::cout << "n=" << n << " " << secs << " s (sweeps=" << plan.sweeps << ")\n";
    }
    return 0;
}

int cmd_report(const ExperimentSetup& setup, const std::string& snapshots_path,
               const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ifstream is(snapshots_path);
    if (!is) throw ConfigError("cannot open snapshots file: " + snapshots_path);
    RunTrace trace;
    trace.visit_counts.assign(setup.world.num_cells(), 0);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        BeliefSnapshot snap;
        snap.round = j.at("round").get<int>();
        snap.k = j.at("k").get<int>();
        snap.values = j.at("beliefs").get<std::vector<double>>();
        trace.snapshots.push_back(std::move(snap));
    }
    const ApSet aps = setup.world.ap_set();
    const Fsa fsa = compile(parse_formula(setup.formula_text, aps), aps);
    const auto metrics = convergence_report(trace, setup.world, fsa, setup.config);
    std::ofstream os(fs::path(out_dir) / "convergence.csv");
    write_convergence_csv(metrics, os);
    std::cout << "wrote " << metrics.size() << " snapshot metric rows\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"collaborative rover/copter planning under uncertain environments"};
    app.require_subcommand(1);

    std::string out_dir = default_out_dir();
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--seed", seed_override, "override the base RNG seed")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--threads", threads, "worker threads for Monte Carlo trials");

    auto* compile_cmd = app.add_subcommand("compile", "translate a formula to its automaton");
    std::string formula_text, ap_csv, dot_path, json_path;
    compile_cmd->add_option("--formula", formula_text)->required();
    compile_cmd->add_option("--ap", ap_csv, "comma-separated atomic propositions")->required();
    compile_cmd->add_option("--dot", dot_path);
    compile_cmd->add_option("--json", json_path);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "execute one mission");
    run_cmd->add_option("--config", config_path)->required();

    auto* mc_cmd = app.add_subcommand("montecarlo", "paired local/global comparison");
    int trials = 100;
    bool fixed_starts = false;
    mc_cmd->add_option("--config", config_path)->required();
    mc_cmd->add_option("--trials", trials);
    mc_cmd->add_flag("--fixed-starts", fixed_starts, "use the map's start positions");

    auto* bench_cmd = app.add_subcommand("benchmark", "policy-synthesis scaling");
    std::string sizes_csv = "6,9,12,15,50,100";
    bench_cmd->add_option("--sizes", sizes_csv, "comma-separated cell counts");

    auto* report_cmd = app.add_subcommand("report", "convergence diagnostics from snapshots");
    std::string snapshots_path;
    report_cmd->add_option("--config", config_path)->required();
    report_cmd->add_option("--snapshots", snapshots_path)->required();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (compile_cmd->parsed())
            return cmd_compile(formula_text, ap_csv, dot_path, json_path);

        ExperimentSetup setup;
        if (!bench_cmd->parsed()) {
            setup = load_setup(config_path);
            if (seed_set) setup.config.seed = seed_override;
        }
        if (run_cmd->parsed()) return cmd_run(std::move(setup), out_dir);
        if (mc_cmd->parsed())
            return cmd_montecarlo(setup, trials, !fixed_starts, threads, out_dir);
        if (bench_cmd->parsed())
            return cmd_benchmark(sizes_csv, seed_set ? seed_override : 0, out_dir);
        if (report_cmd->parsed()) return cmd_report(setup, snapshots_path, out_dir);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}

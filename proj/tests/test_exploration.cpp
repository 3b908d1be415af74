#include <doctest.h>

#include <cmath>

#include "rcplan/exploration.hpp"

using namespace rcplan;

namespace {

GridWorld strip(int n, std::vector<std::uint32_t> labels = {}) {
    GridWorld w;
    w.width = n;
    w.height = 1;
    w.ap_names = {"p"};
    w.labels = labels.empty() ? std::vector<std::uint32_t>(n, 0) : std::move(labels);
    return w;
}

SensorModel own_cell_sensor(double magnitude = 0.5) {
    SensorModel s;
    s.owner = "copter";
    s.props = {{0, 0.0, magnitude}};
    return s;
}

}  // namespace

TEST_CASE("binary entropy values") {
    CHECK(entropy(0.5) == 1.0);
    CHECK(entropy(0.0) == 0.0);
    CHECK(entropy(1.0) == 0.0);
    CHECK(entropy(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
    CHECK(entropy(0.25) == entropy(0.75));
    CHECK_THROWS_AS(entropy(-0.1), std::domain_error);
    CHECK_THROWS_AS(entropy(1.1), std::domain_error);
}

TEST_CASE("acquisition arithmetic") {
    BeliefMap half(1, 1, 0.5);
    const SensorModel s = own_cell_sensor();
    CHECK(acquisition(half, {0.0}, s, 0.0, 0) == 1.0);
    BeliefMap sure(1, 1, 1.0);
    CHECK(acquisition(sure, {1.0}, s, 1.5, 0) == 1.5);
    BeliefMap quarter(1, 1, 0.25);
    CHECK(acquisition(quarter, {0.4}, s, 1.5, 0) ==
          doctest::Approx(0.8112781244591328 + 0.6).epsilon(1e-12));
}

TEST_CASE("greedy move targets the higher-acquisition neighbor") {
    GridWorld world = strip(3);
    FiniteMdp mdp = build_grid_mdp(world, 1.0);
    BeliefMap beliefs(3, 1, 1.0);
    beliefs.set(0, 0, 1.0);   // W = 0 behind
    beliefs.set(2, 0, 0.5);   // W = 1 ahead
    Rng rng(1);
    auto out = local_explore(mdp, own_cell_sensor(), rng, beliefs,
                             std::vector<double>(3, 0.0), 0.0, world, {1, 0}, 1);
    CHECK(out.final_cell == 2);
}

TEST_CASE("uniform acquisition keeps the copter in place") {
    GridWorld world = strip(4);
    FiniteMdp mdp = build_grid_mdp(world, 1.0);
    BeliefMap beliefs(4, 1, 1.0);  // all certain: W = 0 everywhere, stays 0
    Rng rng(2);
    auto out = local_explore(mdp, own_cell_sensor(), rng, beliefs,
                             std::vector<double>(4, 0.0), 0.0, world, {2, 0}, 3);
    CHECK(out.final_cell == 2);
    CHECK(out.steps == 3);
    for (const auto& st : out.log) CHECK(st.cell == 2);
}

TEST_CASE("greedy walk follows an entropy gradient rightward") {
    // certain at the start cell, uncertain ahead: two right steps
    GridWorld world = strip(3, {0u, 1u, 1u});
    FiniteMdp mdp = build_grid_mdp(world, 1.0);
    BeliefMap beliefs(3, 1, 0.5);
    beliefs.set(0, 0, 0.0);
    Rng rng(3);
    auto out = local_explore(mdp, own_cell_sensor(), rng, beliefs,
                             std::vector<double>(3, 0.0), 0.0, world, {0, 0}, 2);
    REQUIRE(out.log.size() == 2);
    CHECK(out.log[0].cell == 1);
    CHECK(out.log[1].cell == 2);
    // noiseless own-cell sweeps resolve the visited cells
    CHECK(beliefs.get(1, 0) == 1.0);
    CHECK(beliefs.get(2, 0) == 1.0);
}

TEST_CASE("weighting by b_max redirects the greedy move") {
    GridWorld world = strip(3);
    FiniteMdp mdp = build_grid_mdp(world, 1.0);
    BeliefMap beliefs(3, 1, 1.0);  // no entropy anywhere
    std::vector<double> b_max = {0.0, 0.0, 0.8};
    Rng rng(4);
    auto out = local_explore(mdp, own_cell_sensor(), rng, beliefs, b_max, 1.5, world,
                             {1, 0}, 1);
    CHECK(out.final_cell == 2);
}

TEST_CASE("global exploration reaches a distant uncertain cell") {
    GridWorld world = strip(5, {0u, 0u, 1u, 0u, 0u});
    FiniteMdp mdp = build_grid_mdp(world, 1.0);
    BeliefMap beliefs(5, 1, 1.0);
    beliefs.set(2, 0, 0.5);
    for (int c = 0; c < 5; ++c)
        if (c != 2) beliefs.set(c, 0, world.has_label(world.cell(c), 0) ? 1.0 : 0.0);
    const double h_before = entropy(beliefs.get(2, 0));
    Rng rng(5);
    auto out = global_explore(mdp, own_cell_sensor(), rng, beliefs,
                              std::vector<double>(5, 0.0), 0.0, world, {0, 0}, 5);
    CHECK(out.n_succ >= 1);
    CHECK(out.steps == 5);
    CHECK(entropy(beliefs.get(2, 0)) < h_before);
    CHECK(out.log.front().target == 2);
}

TEST_CASE("budget below the distance yields no success") {
    GridWorld world = strip(6);
    FiniteMdp mdp = build_grid_mdp(world, 1.0);
    BeliefMap beliefs(6, 1, 1.0);
    beliefs.set(5, 0, 0.5);  // distance 5 from the start
    Rng rng(6);
    auto out = global_explore(mdp, own_cell_sensor(), rng, beliefs,
                              std::vector<double>(6, 0.0), 0.0, world, {0, 0}, 2);
    CHECK(out.n_succ == 0);
    CHECK(out.steps == 2);
}

TEST_CASE("starting on the argmax cell still consumes the budget") {
    GridWorld world = strip(3, {1u, 0u, 0u});
    FiniteMdp mdp = build_grid_mdp(world, 1.0);
    BeliefMap beliefs(3, 1, 1.0);
    beliefs.set(0, 0, 0.5);
    Rng rng(7);
    auto out = global_explore(mdp, own_cell_sensor(), rng, beliefs,
                              std::vector<double>(3, 0.0), 0.0, world, {0, 0}, 4);
    CHECK(out.n_succ >= 1);
    CHECK(out.steps == 4);
}

TEST_CASE("observation reduces expected posterior entropy") {
    const double prior = 0.3;
    const double prec = 0.8;
    GridWorld world = strip(1, {1u});
    const SensorModel s = own_cell_sensor(0.3);  // beta = 0.8 at d = 0
    double total = 0.0;
    const int n = 10000;
    for (int trial = 0; trial < n; ++trial) {
        BeliefMap b(1, 1, prior);
        Rng rng(1000 + trial);
        sweep_and_update(s, rng, b, world, {0, 0});
        total += entropy(b.get(0, 0));
    }
    CHECK(total / n < entropy(prior));
    (void)prec;
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rcplan/world.hpp"

using namespace rcplan;

namespace {

GridWorld make_world(int w, int h, std::vector<std::string> aps,
                     std::vector<std::uint32_t> labels = {}) {
    GridWorld world;
    world.width = w;
    world.height = h;
    world.ap_names = std::move(aps);
    world.labels = labels.empty() ? std::vector<std::uint32_t>(w * h, 0)
                                  : std::move(labels);
    return world;
}

SensorModel make_sensor(double range, double magnitude, std::vector<int> aps = {0}) {
    SensorModel s;
    s.owner = "test";
    for (int ap : aps) s.props.push_back({ap, range, magnitude});
    return s;
}

}  // namespace

TEST_CASE("precision constants") {
    const Cell o{5, 5};
    CHECK(beta(make_sensor(2.0, 0.5), o, o, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(beta(make_sensor(4.0, 0.4), o, o, 0) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(beta(make_sensor(2.0, 0.5), o, {5, 7}, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(beta(make_sensor(2.0, 0.5), o, {9, 9}, 0) == 0.5);
    // zero range: own cell only
    CHECK(beta(make_sensor(0.0, 0.3), o, o, 0) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(beta(make_sensor(0.0, 0.3), o, {5, 6}, 0) == 0.5);
}

TEST_CASE("degenerate sensor is noiseless") {
    GridWorld world = make_world(2, 1, {"A"}, {1u, 0u});
    const SensorModel s = make_sensor(0.0, 0.5);  // beta = 1 at the own cell
    Rng rng(1);
    for (int n = 0; n < 100; ++n) {
        CHECK(observe(s, rng, {0, 0}, {0, 0}, 0, world) == 1);
        CHECK(observe(s, rng, {1, 0}, {1, 0}, 0, world) == 0);
    }
}

TEST_CASE("observation frequency matches the precision") {
    GridWorld world = make_world(1, 1, {"A"}, {1u});
    const SensorModel s = make_sensor(0.0, 0.4);  // beta = 0.9 at d = 0
    Rng rng(42);
    long ones = 0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) ones += observe(s, rng, {0, 0}, {0, 0}, 0, world);
    CHECK(std::abs(static_cast<double>(ones) / n - 0.9) < 0.01);
}

TEST_CASE("observing outside the range is an error") {
    GridWorld world = make_world(4, 1, {"A"});
    const SensorModel s = make_sensor(1.0, 0.4);
    Rng rng(0);
    CHECK_THROWS_AS(observe(s, rng, {0, 0}, {3, 0}, 0, world), std::out_of_range);
}

TEST_CASE("single Bayes quotient step") {
    BeliefMap b(1, 1, 0.5);
    CHECK(bayes_update(b, 0, 0, 1, 0.9) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("uninformative precision leaves the belief unchanged") {
    BeliefMap b(1, 1, 0.37);
    bayes_update(b, 0, 0, 1, 0.5);
    CHECK(b.get(0, 0) == doctest::Approx(0.37).epsilon(1e-12));
    bayes_update(b, 0, 0, 0, 0.5);
    CHECK(b.get(0, 0) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("certain prior is absorbing") {
    BeliefMap b(1, 1, 1.0);
    bayes_update(b, 0, 0, 0, 0.9);
    CHECK(b.get(0, 0) == 1.0);
    CHECK(b.degenerate_events() == 0);
}

TEST_CASE("contradicting noise-free evidence is counted, prior kept") {
    BeliefMap b(1, 1, 1.0);
    bayes_update(b, 0, 0, 0, 1.0);
    CHECK(b.get(0, 0) == 1.0);
    CHECK(b.degenerate_events() == 1);
}

TEST_CASE("sequential updates equal the closed-form odds product") {
    // posterior odds = prior odds * prod_k (beta_k/(1-beta_k))^(+/-1)
    const double prior = 0.3;
    const std::vector<std::pair<int, double>> obs = {
        {1, 0.9}, {0, 0.8}, {1, 0.7}, {1, 0.9}, {0, 0.6}, {1, 0.8}};
    BeliefMap b(1, 1, prior);
    double odds = prior / (1.0 - prior);
    for (auto [z, prec] : obs) {
        bayes_update(b, 0, 0, z, prec);
        odds *= z ? prec / (1.0 - prec) : (1.0 - prec) / prec;
    }
    CHECK(b.get(0, 0) == doctest::Approx(odds / (1.0 + odds)).epsilon(1e-12));
}

TEST_CASE("evidence order does not matter") {
    std::vector<std::pair<int, double>> obs = {
        {1, 0.9}, {0, 0.8}, {1, 0.7}, {0, 0.9}, {1, 0.6}};
    BeliefMap fwd(1, 1, 0.4), rev(1, 1, 0.4);
    for (auto [z, p] : obs) bayes_update(fwd, 0, 0, z, p);
    std::reverse(obs.begin(), obs.end());
    for (auto [z, p] : obs) bayes_update(rev, 0, 0, z, p);
    CHECK(fwd.get(0, 0) == doctest::Approx(rev.get(0, 0)).epsilon(1e-12));
}

TEST_CASE("sweep visits exactly the lattice points in range") {
    GridWorld world = make_world(10, 10, {"A"});
    BeliefMap b(100, 1, 0.5);
    Rng rng(3);
    // interior: 13 cells with i^2 + j^2 <= 4
    CHECK(sweep_and_update(make_sensor(2.0, 0.4), rng, b, world, {5, 5}) == 13);
    // corner: clipped to 6
    CHECK(sweep_and_update(make_sensor(2.0, 0.4), rng, b, world, {0, 0}) == 6);
    // zero range, two props: own cell only
    CHECK(sweep_and_update(make_sensor(0.0, 0.4), rng, b, world, {4, 4}) == 1);
    GridWorld world2 = make_world(10, 10, {"A", "B"});
    BeliefMap b2(100, 2, 0.5);
    CHECK(sweep_and_update(make_sensor(0.0, 0.4, {0, 1}), rng, b2, world2, {4, 4}) == 2);
}

TEST_CASE("repeated noisy observation concentrates the belief") {
    GridWorld world = make_world(1, 1, {"A"}, {1u});
    BeliefMap b(1, 1, 0.5);
    Rng rng(11);
    const SensorModel s = make_sensor(0.0, 0.4);
    for (int k = 0; k < 200; ++k) sweep_and_update(s, rng, b, world, {0, 0});
    CHECK(b.get(0, 0) > 0.999);
}

TEST_CASE("sweep is deterministic under a fixed seed") {
    GridWorld world = make_world(5, 5, {"A", "B"});
    const SensorModel s = make_sensor(2.0, 0.3, {0, 1});
    BeliefMap b1(25, 2, 0.5), b2(25, 2, 0.5);
    Rng r1(99), r2(99);
    std::vector<Observation> o1, o2;
    sweep_and_update(s, r1, b1, world, {2, 2}, &o1);
    sweep_and_update(s, r2, b2, world, {2, 2}, &o2);
    REQUIRE(o1.size() == o2.size());
    for (std::size_t k = 0; k < o1.size(); ++k) {
        CHECK(o1[k].cell == o2[k].cell);
        CHECK(o1[k].ap == o2[k].ap);
        CHECK(o1[k].z == o2[k].z);
        CHECK(o1[k].belief_after == o2[k].belief_after);
    }
}

TEST_CASE("map loader round-trips the example schema") {
    std::istringstream is(R"({
        "width": 3, "height": 2, "atomic_props": ["A", "O"],
        "cells": [{"pos": [2, 1], "labels": ["A"]}, {"pos": [1, 0], "labels": ["O"]}],
        "rover_start": [0, 0], "copter_start": [2, 1],
        "priors": [{"pos": [1, 1], "prop": "O", "value": 0.2}]
    })");
    GridWorld w = load_world(is);
    CHECK(w.num_cells() == 6);
    CHECK(w.has_label({2, 1}, 0));
    CHECK(w.has_label({1, 0}, 1));
    CHECK_FALSE(w.has_label({0, 0}, 0));
    BeliefMap b = BeliefMap::from_world(w);
    CHECK(b.get(w.index({1, 1}), 1) == 0.2);
    CHECK(b.get(w.index({0, 1}), 1) == 0.5);
}

TEST_CASE("loader rejects out-of-bounds and unknown labels") {
    std::istringstream bad1(R"({"width": 2, "height": 2, "atomic_props": ["A"],
        "cells": [{"pos": [5, 0], "labels": ["A"]}],
        "rover_start": [0,0], "copter_start": [0,0]})");
    CHECK_THROWS_AS(load_world(bad1), ConfigError);
    std::istringstream bad2(R"({"width": 2, "height": 2, "atomic_props": ["A"],
        "cells": [{"pos": [0, 0], "labels": ["Z"]}],
        "rover_start": [0,0], "copter_start": [0,0]})");
    CHECK_THROWS_AS(load_world(bad2), ConfigError);
}

TEST_CASE("sensor coverage must span the proposition set") {
    SensorModel r = make_sensor(2.0, 0.5, {0});
    SensorModel c = make_sensor(4.0, 0.4, {1});
    CHECK_NOTHROW(validate_sensor_coverage(r, c, 2));
    CHECK_THROWS_AS(validate_sensor_coverage(r, c, 3), ConfigError);
}

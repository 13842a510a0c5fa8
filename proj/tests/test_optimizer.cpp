#include <doctest.h>

#include <cmath>

#include "privshare/optimizer.hpp"
#include "test_helpers.hpp"

using namespace privshare;
namespace th = privshare::testing;
using th::P;

namespace {

MixingMatrix demo_mixing() {
    Eigen::MatrixXd m(3, 3);
    m << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
    return validated_mixing(m, th::k3());
}

Scenario single_agent_descent() {
    Scenario sc;
    sc.name = "single";
    sc.topology = Topology(1, {});
    sc.objectives = {P({0, 0, 1})};
    sc.share_mode = Scenario::ShareMode::Zero;
    sc.feasible = {-2.0, 2.0};
    sc.init_mode = Scenario::InitMode::Explicit;
    sc.initial_states = {1.5};
    sc.iterations = 100;
    sc.seed = 3;
    return sc;
}

}  // namespace

TEST_CASE("fusion") {
    MixingMatrix w = demo_mixing();
    std::vector<double> consensus{1.0, 1.0, 1.0};
    for (int j = 0; j < 3; ++j) CHECK(fuse(consensus, w, j) == 1.0);

    std::vector<double> spiked{4.0, 0.0, 0.0};
    CHECK(fuse(spiked, w, 0) == 2.0);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        Topology g = th::random_connected_topology(2, 8, rng);
        MixingMatrix mix = metropolis_mixing(g);
        std::vector<double> states(static_cast<std::size_t>(g.node_count()));
        for (double& x : states) x = dist(rng);
        double before = 0.0, after = 0.0;
        for (int j = 0; j < g.node_count(); ++j) {
            before += states[static_cast<std::size_t>(j)];
            after += fuse(states, mix, j);
        }
        CHECK(after / g.node_count() == doctest::Approx(before / g.node_count()).epsilon(1e-12));
    }
}

TEST_CASE("projection") {
    FeasibleSet box{-2.0, 2.0};
    CHECK(project(5.0, box) == 2.0);
    CHECK(project(0.3, box) == 0.3);
    CHECK(project(project(5.0, box), box) == 2.0);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        double x = dist(rng), y = dist(rng);
        CHECK(std::abs(project(x, box) - project(y, box)) <= std::abs(x - y));
    }
}

TEST_CASE("projected gradient step") {
    FeasibleSet box{-2.0, 2.0};
    CHECK(descent_step(1.0, P({0, 0, 1}), 0.25, box) == 0.5);
    CHECK(descent_step(1.0, P({1, -2, 1}), 0.5, box) == 1.0);  // gradient vanishes at the minimizer
    CHECK_THROWS_AS((void)descent_step(1.0, P({0, 0, 1}), 0.0, box), std::invalid_argument);
}

TEST_CASE("gradients agree with centered finite differences") {
    std::vector<Polynomial> objectives = th::attack_demo_objectives();
    ObjectiveVector demo = th::consensus_demo_scenario().objectives;
    objectives.insert(objectives.end(), demo.begin(), demo.end());
    const double h = 1e-5;
    for (const auto& f : objectives) {
        Polynomial grad = f.derivative();
        for (int i = 0; i <= 100; ++i) {
            double v = -2.0 + 0.04 * i;
            double fd = (f(v + h) - f(v - h)) / (2.0 * h);
            CHECK(std::abs(grad(v) - fd) <= 1e-6);
        }
    }
}

TEST_CASE("single agent runs classical projected gradient descent") {
    ExecutionTrace trace = run(single_agent_descent());
    CHECK(std::abs(trace.rounds.back().states[0]) <= 1e-6);
    // with no neighbors, fusion passes the previous iterate through
    for (std::size_t k = 0; k < trace.rounds.size(); ++k)
        CHECK(trace.rounds[k].fused[0] == trace.states_before(static_cast<int>(k) + 1)[0]);
}

TEST_CASE("runs are deterministic for a fixed seed") {
    Scenario sc = th::consensus_demo_scenario();
    sc.share_mode = Scenario::ShareMode::Random;
    sc.share_degree = 4;
    ExecutionTrace a = run(sc);
    ExecutionTrace b = run(sc);
    REQUIRE(a.rounds.size() == b.rounds.size());
    CHECK(a.initial_states == b.initial_states);
    for (std::size_t k = 0; k < a.rounds.size(); ++k) {
        CHECK(a.rounds[k].states == b.rounds[k].states);
        CHECK(a.rounds[k].fused == b.rounds[k].fused);
    }
}

TEST_CASE("iterates never leave the feasible set") {
    std::mt19937_64 seeds(7);
    for (int trial = 0; trial < 5; ++trial) {
        Scenario sc;
        sc.topology = th::random_connected_topology(2, 6, seeds);
        sc.objectives = th::random_objectives(sc.topology.node_count(), 4, seeds);
        sc.share_mode = Scenario::ShareMode::Random;
        sc.iterations = 50;
        sc.seed = seeds();
        ExecutionTrace trace = run(sc);
        for (const auto& round : trace.rounds)
            for (double x : round.states) CHECK(sc.feasible.contains(x));
    }
}

TEST_CASE("constant objectives from consensus stay at consensus") {
    Scenario sc;
    sc.topology = th::k3();
    sc.objectives = {P({3}), P({-1}), P({4})};
    sc.share_mode = Scenario::ShareMode::Zero;
    sc.init_mode = Scenario::InitMode::Explicit;
    sc.initial_states = {0.5, 0.5, 0.5};
    sc.iterations = 25;
    ExecutionTrace trace = run(sc);
    for (const auto& round : trace.rounds)
        for (double x : round.states) CHECK(x == 0.5);
}

TEST_CASE("scenario validation aggregates every violation") {
    Scenario sc;
    sc.topology = Topology(4, {{0, 1}, {2, 3}});  // disconnected
    sc.objectives = {P({0, 0, 1})};               // wrong length
    sc.feasible = {2.0, -2.0};                    // empty interval
    sc.step = {-1.0, 1e-4};                       // bad schedule
    sc.coalition = {9};                           // unknown node
    try {
        (void)resolve(sc);
        FAIL("expected InvalidScenario");
    } catch (const InvalidScenario& e) {
        CHECK(e.issues.size() >= 5);
    }
}

TEST_CASE("initial iterates outside the feasible set are rejected") {
    Scenario sc = single_agent_descent();
    sc.initial_states = {5.0};
    CHECK_THROWS_AS((void)resolve(sc), InvalidScenario);
}

TEST_CASE("consensus metrics") {
    Scenario sc;
    sc.topology = th::k3();
    sc.objectives = {P({1}), P({1}), P({1})};
    sc.share_mode = Scenario::ShareMode::Zero;
    sc.init_mode = Scenario::InitMode::Explicit;
    sc.initial_states = {1.0, 1.0, 1.0};
    sc.iterations = 3;
    std::vector<MetricsRow> rows = metrics(run(sc), aggregate(sc.objectives));
    CHECK(rows.size() == 3);
    CHECK(rows.back().max_deviation == 0.0);
    CHECK(rows.back().rms_sq == 0.0);
    CHECK(rows.back().f_of_mean == 3.0);

    ExecutionTrace synthetic;
    synthetic.agent_count = 3;
    synthetic.initial_states = {0, 0, 0};
    IterationRecord round;
    round.alpha = 1.0;
    round.fused = {0, 0, 0};
    round.states = {1.0, 2.0, 3.0};
    round.mixing = Eigen::MatrixXd::Identity(3, 3);
    synthetic.rounds.push_back(round);
    MetricsRow row = metrics(synthetic, Polynomial{}).front();
    CHECK(row.mean == 2.0);
    CHECK(row.max_deviation == 1.0);
    CHECK(row.rms_sq == 2.0);

    ExecutionTrace empty;
    CHECK_THROWS_AS((void)metrics(empty, Polynomial{}), std::invalid_argument);
}

TEST_CASE("demo scenario converges and matches its unobfuscated twin") {
    Scenario sc = th::consensus_demo_scenario();
    ExecutionTrace obfuscated = run(sc);
    std::vector<MetricsRow> rows = metrics(obfuscated, aggregate(sc.objectives));
    const MetricsRow& last = rows.back();
    CHECK(std::abs(last.mean) <= 1e-2);
    CHECK(last.max_deviation <= 1e-3);
    CHECK(last.rms_sq <= 1e-3);

    Scenario plain = sc;
    plain.share_mode = Scenario::ShareMode::Zero;
    plain.shares = ShareAssignment{};
    std::vector<MetricsRow> plain_rows = metrics(run(plain), aggregate(sc.objectives));
    CHECK(std::abs(last.mean - plain_rows.back().mean) <= 2e-2);

    // deviation dies down after the aggressive early steps
    CHECK(rows[499].max_deviation < rows[99].max_deviation);
    CHECK(rows[499].rms_sq < rows[99].rms_sq);
}

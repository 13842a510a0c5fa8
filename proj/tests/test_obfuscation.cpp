#include <doctest.h>

#include "privshare/obfuscation.hpp"
#include "test_helpers.hpp"

using namespace privshare;
namespace th = privshare::testing;
using th::P;

namespace {

// Independent route: obfuscation through the signed incidence matrix, one
// column per directed link.
ObjectiveVector obfuscate_via_incidence(const ObjectiveVector& f, const ShareAssignment& shares, const Topology& g) {
    IncidenceMatrix inc = incidence_matrix(g);
    ObjectiveVector out = f;
    for (std::size_t c = 0; c < inc.columns.size(); ++c) {
        const Polynomial& share = shares.shares.at(inc.columns[c]);
        for (int row = 0; row < g.node_count(); ++row) {
            double sign = inc.matrix(row, static_cast<Eigen::Index>(c));
            if (sign == 1.0) out[static_cast<std::size_t>(row)] = out[static_cast<std::size_t>(row)] + share;
            if (sign == -1.0) out[static_cast<std::size_t>(row)] = out[static_cast<std::size_t>(row)] - share;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("share generation") {
    std::mt19937_64 rng(3), rng2(3);
    ShareAssignment a = generate_shares(th::k3(), 4, 10.0, rng);
    CHECK(a.shares.size() == 6);
    ShareAssignment b = generate_shares(th::k3(), 4, 10.0, rng2);
    for (const auto& [link, share] : a.shares) {
        CHECK(b.shares.at(link) == share);
        CHECK(share(0.0) == 0.0);
    }
    CHECK_FALSE(a.at(0, 1) == a.at(1, 0));
}

TEST_CASE("reference obfuscation values") {
    th::DualProblem p1 = th::dual_problem_one();
    ObjectiveVector fhat = obfuscate(p1.objectives, p1.shares, th::k3());
    ObjectiveVector expected = th::dual_expected_obfuscated();
    REQUIRE(fhat.size() == 3);
    CHECK(fhat[0] == expected[0]);
    CHECK(fhat[1] == expected[1]);
    CHECK(fhat[2] == expected[2]);
}

TEST_CASE("zero shares leave objectives untouched") {
    ObjectiveVector f = th::attack_demo_objectives();
    CHECK(obfuscate(f, zero_shares(th::k3()), th::k3()) == f);
}

TEST_CASE("direct summation equals the incidence-matrix product") {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 50; ++trial) {
        Topology g = th::random_connected_topology(2, 7, rng);
        ObjectiveVector f = th::random_objectives(g.node_count(), 4, rng);
        ShareAssignment r = generate_shares(g, 4, 10.0, rng);
        CHECK(obfuscate(f, r, g) == obfuscate_via_incidence(f, r, g));
    }
}

TEST_CASE("aggregate") {
    CHECK(aggregate({P({0, 0, 1}), P({0, 0, 1, 0, 1}), P({0, 0, 0, 0, 1})}) == P({0, 0, 2, 0, 2}));
    CHECK(aggregate(th::dual_problem_two().objectives) == P({0, 0, 2, 0, 2}));
    CHECK(aggregate({P({1, 2})}) == P({1, 2}));
}

TEST_CASE("aggregate invariance") {
    th::DualProblem p1 = th::dual_problem_one();
    CHECK(check_invariant(p1.objectives, obfuscate(p1.objectives, p1.shares, th::k3())));

    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 100; ++trial) {
        Topology g = th::random_connected_topology(2, 8, rng);
        ObjectiveVector f = th::random_objectives(g.node_count(), 4, rng);
        ShareAssignment r = generate_shares(g, 4, 10.0, rng);
        CHECK(check_invariant(f, obfuscate(f, r, g)));
    }

    ObjectiveVector tweaked = obfuscate(p1.objectives, p1.shares, th::k3());
    tweaked[1] = tweaked[1] + P({0, 0, 1e-9});
    CHECK_FALSE(check_invariant(p1.objectives, tweaked));
}

TEST_CASE("obfuscation changes every connected agent's function") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        Topology g = th::random_connected_topology(2, 6, rng);
        ObjectiveVector f = th::random_objectives(g.node_count(), 3, rng);
        ObjectiveVector fhat = obfuscate(f, generate_shares(g, 4, 10.0, rng), g);
        for (int v = 0; v < g.node_count(); ++v)
            if (g.degree(v) > 0) CHECK_FALSE(fhat[static_cast<std::size_t>(v)] == f[static_cast<std::size_t>(v)]);
    }
}

TEST_CASE("assumption bounds over the feasible interval") {
    AssumptionReport report = validate_assumptions({P({0, 0, 1, 0, 1})}, FeasibleSet{-2.0, 2.0});
    CHECK(report.agents[0].gradient_bound == doctest::Approx(36.0));
    CHECK(report.agents[0].gradient_lipschitz == doctest::Approx(50.0));
    CHECK(report.aggregate_convex);

    AssumptionReport flat = validate_assumptions({P({5})}, FeasibleSet{-1.0, 1.0});
    CHECK(flat.agents[0].gradient_bound == 0.0);
    CHECK(flat.agents[0].gradient_lipschitz == 0.0);

    AssumptionReport nonconvex = validate_assumptions({P({0, 0, -1})}, FeasibleSet{-1.0, 1.0});
    CHECK_FALSE(nonconvex.aggregate_convex);
}

TEST_CASE("share validation") {
    ShareAssignment missing;
    missing.shares.emplace(DirectedEdge{0, 1}, P({0, 1}));
    CHECK_THROWS_AS(validate_shares(missing, th::k3()), std::invalid_argument);
}

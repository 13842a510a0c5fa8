#include <doctest.h>

#include "privshare/topology.hpp"
#include "test_helpers.hpp"

using namespace privshare;
namespace th = privshare::testing;

TEST_CASE("topology validation") {
    CHECK_THROWS_AS(Topology(3, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Topology(3, {{0, 3}}), std::invalid_argument);
    CHECK_THROWS_AS(Topology(3, {{0, 1}, {1, 0}}), std::invalid_argument);
    Topology g = th::k3();
    CHECK(g.directed_edges().size() == 6);
    CHECK(g.has_edge(2, 0));
    CHECK(g.neighbors(1) == std::vector<int>{0, 2});
}

TEST_CASE("vertex connectivity") {
    CHECK(vertex_connectivity(th::k3()) == 2);
    CHECK(vertex_connectivity(th::path3()) == 1);
    CHECK(vertex_connectivity(th::wheel7()) == 3);
    CHECK(vertex_connectivity(Topology(2, {{0, 1}})) == 1);
    CHECK_THROWS_AS((void)vertex_connectivity(Topology(4, {{0, 1}, {2, 3}})), Disconnected);
}

TEST_CASE("admissibility") {
    CHECK(is_f_admissible(th::k3(), 1));
    CHECK_FALSE(is_f_admissible(th::path3(), 1));
    CHECK_FALSE(is_f_admissible(th::failure_graph_a(), 1));
    CHECK(is_f_admissible(th::wheel7(), 2));
}

TEST_CASE("minimum degree") {
    CHECK(min_degree(th::k3()) == 2);
    CHECK(min_degree(Topology(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})) == 1);
}

TEST_CASE("vertex connectivity matches brute force and Whitney ordering holds") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 40; ++trial) {
        Topology g = th::random_connected_topology(2, 8, rng);
        int kappa = vertex_connectivity(g);
        CHECK(kappa == th::brute_force_vertex_connectivity(g));
        int lambda = edge_connectivity(g);
        CHECK(kappa <= lambda);
        CHECK(lambda <= min_degree(g));
    }
}

TEST_CASE("incidence matrix structure") {
    IncidenceMatrix inc = incidence_matrix(th::k3());
    CHECK(inc.matrix.rows() == 3);
    CHECK(inc.matrix.cols() == 6);
    for (Eigen::Index c = 0; c < inc.matrix.cols(); ++c) CHECK(inc.matrix.col(c).sum() == 0.0);
    // oriented columns first, then their reversals
    CHECK(inc.columns[0] == DirectedEdge{0, 1});
    CHECK(inc.columns[3] == DirectedEdge{1, 0});
    CHECK(inc.matrix(1, inc.column_of({0, 1})) == 1.0);
    CHECK(inc.matrix(0, inc.column_of({0, 1})) == -1.0);

    IncidenceMatrix single = incidence_matrix(Topology(2, {{0, 1}}));
    CHECK(single.matrix(0, 0) == -1.0);
    CHECK(single.matrix(1, 0) == 1.0);
    CHECK(single.matrix(0, 1) == 1.0);
    CHECK(single.matrix(1, 1) == -1.0);
}

TEST_CASE("deleting adversary edges") {
    Topology g = delete_adversary_edges(th::k3(), {0});
    CHECK(g.edges() == std::vector<std::pair<int, int>>{{1, 2}});

    Topology stripped = delete_adversary_edges(th::wheel7(), {5, 6});
    std::set<int> good{0, 1, 2, 3, 4};
    CHECK_NOTHROW((void)spanning_tree(stripped, good));
}

TEST_CASE("admissible graphs keep good agents connected for every small coalition") {
    auto good_nodes_stay_connected = [](const Topology& g, const std::set<int>& coalition) {
        std::set<int> good;
        for (int v = 0; v < g.node_count(); ++v)
            if (!coalition.contains(v)) good.insert(v);
        if (good.empty()) return true;
        try {
            (void)spanning_tree(delete_adversary_edges(g, coalition), good);
            return true;
        } catch (const NotConnected&) {
            return false;
        }
    };

    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        Topology g = th::random_connected_topology(3, 7, rng);
        int f = std::min(vertex_connectivity(g) - 1, 2);
        for (int a = 0; a < g.node_count() && f >= 1; ++a) {
            CHECK(good_nodes_stay_connected(g, {a}));
            for (int b = a + 1; b < g.node_count() && f >= 2; ++b) CHECK(good_nodes_stay_connected(g, {a, b}));
        }
    }
}

TEST_CASE("spanning tree") {
    auto tree = spanning_tree(th::k3(), {0, 1, 2});
    CHECK(tree.size() == 2);

    Topology stripped = delete_adversary_edges(th::wheel7(), {5, 6});
    auto star = spanning_tree(stripped, {0, 1, 2, 3, 4});
    CHECK(star == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}, {0, 4}});

    CHECK_THROWS_AS((void)spanning_tree(Topology(3, {{0, 1}}), std::set<int>{0, 1, 2}), NotConnected);
}

TEST_CASE("spanning trees of random graphs have tree shape") {
    std::mt19937_64 rng(909);
    for (int trial = 0; trial < 30; ++trial) {
        Topology g = th::random_connected_topology(2, 8, rng);
        std::set<int> all;
        for (int v = 0; v < g.node_count(); ++v) all.insert(v);
        auto tree = spanning_tree(g, all);
        CHECK(static_cast<int>(tree.size()) == g.node_count() - 1);
        Topology as_graph(g.node_count(), tree);  // rejects duplicates
        CHECK(as_graph.is_connected());           // connected + S-1 edges = acyclic
    }
}

TEST_CASE("privacy failure detection") {
    PrivacyFailureReport a = detect_privacy_failures(th::failure_graph_a(), {2});
    CHECK(a.individual == std::vector<int>{3});
    REQUIRE(a.groups.size() == 2);
    CHECK(a.groups[0] == std::vector<int>{0, 1, 4});
    CHECK(a.groups[1] == std::vector<int>{3});

    PrivacyFailureReport b = detect_privacy_failures(th::failure_graph_b(), {2});
    CHECK(b.individual.empty());
    REQUIRE(b.groups.size() == 2);
    CHECK(b.groups[0] == std::vector<int>{0, 1});
    CHECK(b.groups[1] == std::vector<int>{3, 4, 5});

    CHECK(detect_privacy_failures(th::k3(), {0}).empty());
}

TEST_CASE("metropolis mixing") {
    MixingMatrix k3w = metropolis_mixing(th::k3());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(k3w.entries(i, j) == doctest::Approx(1.0 / 3.0));

    MixingMatrix pair = metropolis_mixing(Topology(2, {{0, 1}}));
    CHECK(pair.entries(0, 0) == 0.5);
    CHECK(pair.entries(0, 1) == 0.5);
    CHECK(pair.eta == 0.5);

    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        Topology g = th::random_connected_topology(2, 9, rng);
        MixingMatrix w = metropolis_mixing(g);
        for (int i = 0; i < g.node_count(); ++i) {
            CHECK(std::abs(w.entries.row(i).sum() - 1.0) <= 1e-12);
            CHECK(std::abs(w.entries.col(i).sum() - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("explicit mixing validation") {
    Eigen::MatrixXd good(3, 3);
    good << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
    MixingMatrix w = validated_mixing(good, th::k3());
    CHECK(w.eta == 0.25);

    Eigen::MatrixXd unbalanced = good;
    unbalanced(0, 0) = 0.6;
    CHECK_THROWS_WITH_AS((void)validated_mixing(unbalanced, th::k3()), doctest::Contains("sum to 1"),
                         std::invalid_argument);

    Eigen::MatrixXd sparse_violation = good;
    CHECK_THROWS_AS((void)validated_mixing(sparse_violation, th::path3()), std::invalid_argument);
}

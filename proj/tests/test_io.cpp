#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "privshare/io.hpp"
#include "test_helpers.hpp"

using namespace privshare;
namespace th = privshare::testing;
using th::P;

namespace {

std::filesystem::path scenario_dir() {
    if (const char* env = std::getenv("PRIVSHARE_SCENARIOS")) return env;
    return "scenarios";
}

}  // namespace

TEST_CASE("polynomial JSON round trip") {
    Polynomial f2 = P({0, 0, 1, 0, 1});
    json j = to_json(f2);
    CHECK(j == json::array({0, 0, 1, 0, 1}));
    CHECK(polynomial_from_json(j) == f2);
    CHECK(polynomial_from_json(json::array()).is_zero());
}

TEST_CASE("topology JSON round trip") {
    Topology g = th::wheel7();
    CHECK(topology_from_json(to_json(g)).edges() == g.edges());
    CHECK(topology_from_json(to_json(g)).node_count() == 7);
}

TEST_CASE("scenario JSON round trip preserves the execution") {
    Scenario sc = th::consensus_demo_scenario();
    Scenario reloaded = scenario_from_json(to_json(sc));
    ExecutionTrace a = run(sc);
    ExecutionTrace b = run(reloaded);
    REQUIRE(a.rounds.size() == b.rounds.size());
    for (std::size_t k = 0; k < a.rounds.size(); ++k) CHECK(a.rounds[k].states == b.rounds[k].states);
}

TEST_CASE("shipped scenario files parse and resolve") {
    for (const char* name : {"example1.json", "sec6.json", "table2_p1.json", "table2_p2.json", "fig3.json",
                             "fig4a.json", "fig4b.json"}) {
        CAPTURE(name);
        Scenario sc = load_scenario(scenario_dir() / name);
        CHECK_NOTHROW((void)resolve(sc));
    }
}

TEST_CASE("trace CSV is deterministic and well formed") {
    Scenario sc = th::consensus_demo_scenario();
    sc.iterations = 5;
    std::string a = trace_csv(run(sc));
    std::string b = trace_csv(run(sc));
    CHECK(a == b);
    CHECK(a.starts_with("iteration,agent,v,x_next,alpha\n"));
    CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 5 * 3);
}

TEST_CASE("metrics CSV shape") {
    Scenario sc = th::consensus_demo_scenario();
    sc.iterations = 4;
    std::string csv = metrics_csv(metrics(run(sc), aggregate(sc.objectives)));
    CHECK(csv.starts_with("iteration,mean,max_dev,rms_sq,f_of_mean\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4);
}

TEST_CASE("config hash is stable and input sensitive") {
    json a = to_json(th::consensus_demo_scenario());
    json b = a;
    b["seed"] = 43;
    CHECK(config_hash(a) == config_hash(a));
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("atomic writes land complete") {
    auto path = std::filesystem::temp_directory_path() / "privshare_io_test.txt";
    write_file_atomic(path, "alpha\nbeta\n");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "alpha\nbeta\n");
    std::filesystem::remove(path);
}

TEST_CASE("topology input accepts both bare and scenario documents") {
    TopologyInput from_scenario = load_topology_input(scenario_dir() / "fig4a.json");
    CHECK(from_scenario.has_coalition);
    CHECK(from_scenario.coalition == std::set<int>{2});

    auto tmp = std::filesystem::temp_directory_path() / "privshare_topology_test.json";
    write_file_atomic(tmp, to_json(th::k3()).dump());
    TopologyInput plain = load_topology_input(tmp);
    CHECK_FALSE(plain.has_coalition);
    CHECK(plain.topology.node_count() == 3);
    std::filesystem::remove(tmp);
}

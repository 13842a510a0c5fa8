// privshare - simulator and analysis toolkit for privacy-preserving
// distributed optimization by function sharing.
//
// Subcommands: simulate, attack, verify-privacy, check-topology, demo.
// Exit codes: 0 success, 1 runtime failure, 2 validation failure,
// 3 topology not admissible, 4 topology check failed.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "privshare/adversary.hpp"
#include "privshare/io.hpp"
#include "privshare/optimizer.hpp"
#include "privshare/verifier.hpp"

namespace fs = std::filesystem;
using namespace privshare;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNotAdmissible = 3;
constexpr int kExitTopologyCheck = 4;

struct CommonOptions {
    std::string scenario_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

std::optional<std::uint64_t> env_seed() {
    if (const char* raw = std::getenv("PRIVSHARE_SEED")) return std::strtoull(raw, nullptr, 10);
    return std::nullopt;
}

Scenario load_with_overrides(const CommonOptions& options) {
    Scenario scenario = load_scenario(options.scenario_path);
    if (auto seed = env_seed()) scenario.seed = *seed;
    if (options.seed) scenario.seed = *options.seed;
    return scenario;
}

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return buffer;
}

std::string poly_text(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
        double c = p.coeff(i);
        if (c == 0.0) continue;
        if (!out.empty()) out += c < 0 ? " - " : " + ";
        else if (c < 0) out += "-";
        double mag = std::abs(c);
        if (mag != 1.0 || i == 0) out += fmt(mag);
        if (i >= 1) out += "x";
        if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
}

json topology_report(const Topology& g, int f) {
    json report;
    report["nodes"] = g.node_count();
    report["edge_count"] = g.edges().size();
    report["min_degree"] = min_degree(g);
    report["connected"] = g.is_connected();
    if (g.node_count() >= 2 && g.is_connected()) {
        report["vertex_connectivity"] = vertex_connectivity(g);
        report["edge_connectivity"] = edge_connectivity(g);
        report["admissible"] = is_f_admissible(g, f);
    } else {
        report["admissible"] = g.node_count() < 2;
    }
    report["f"] = f;
    return report;
}

struct SimulationArtifacts {
    ResolvedScenario resolved;
    ExecutionTrace trace;
    std::vector<MetricsRow> series;
    json report;
};

SimulationArtifacts simulate_scenario(const Scenario& scenario) {
    double start = now_seconds();
    SimulationArtifacts out;
    out.resolved = resolve(scenario);
    out.trace = run(out.resolved);
    out.series = metrics(out.trace, aggregate(scenario.objectives));

    json scenario_echo = to_json(out.resolved.scenario);
    out.report["scenario"] = scenario_echo;
    out.report["seed"] = out.resolved.scenario.seed;
    out.report["config_hash"] = config_hash(scenario_echo);
    out.report["topology"] =
        topology_report(scenario.topology, static_cast<int>(scenario.coalition.size()));
    out.report["iterations"] = scenario.iterations;

    // advisory only: bounds the descent actually relies on
    AssumptionReport assumptions = validate_assumptions(out.resolved.obfuscated, scenario.feasible);
    json per_agent = json::array();
    for (const auto& agent : assumptions.agents)
        per_agent.push_back({{"gradient_bound", agent.gradient_bound},
                             {"gradient_lipschitz", agent.gradient_lipschitz}});
    out.report["assumptions"] = {{"agents", per_agent}, {"aggregate_convex", assumptions.aggregate_convex}};
    if (!assumptions.aggregate_convex)
        std::cerr << "warning: sampled aggregate objective is not convex on the feasible interval\n";
    if (!out.series.empty()) {
        const MetricsRow& last = out.series.back();
        out.report["final"] = {{"mean", last.mean},
                               {"max_deviation", last.max_deviation},
                               {"rms_sq", last.rms_sq},
                               {"f_of_mean", last.f_of_mean}};
    }
    out.report["duration_seconds"] = now_seconds() - start;
    return out;
}

void write_simulation_outputs(const fs::path& out_dir, const SimulationArtifacts& artifacts) {
    fs::create_directories(out_dir);
    write_file_atomic(out_dir / "trace.csv", trace_csv(artifacts.trace));
    write_file_atomic(out_dir / "metrics.csv", metrics_csv(artifacts.series));
    write_file_atomic(out_dir / "report.json", artifacts.report.dump(2) + "\n");
}

int cmd_simulate(const CommonOptions& options) {
    SimulationArtifacts artifacts = simulate_scenario(load_with_overrides(options));
    json report = artifacts.report;
    report["command"] = "simulate";
    artifacts.report = report;
    write_simulation_outputs(options.out_dir, artifacts);
    if (report.contains("final"))
        std::cout << "final mean " << fmt(report["final"]["mean"].get<double>()) << ", max deviation "
                  << fmt(report["final"]["max_deviation"].get<double>()) << ", rms_sq "
                  << fmt(report["final"]["rms_sq"].get<double>()) << "\n";
    std::cout << "wrote " << (fs::path(options.out_dir) / "report.json").string() << "\n";
    return 0;
}

int cmd_attack(const CommonOptions& options, const std::vector<int>& coalition_override, int degree_override) {
    Scenario scenario = load_with_overrides(options);
    if (!coalition_override.empty())
        scenario.coalition = std::set<int>(coalition_override.begin(), coalition_override.end());

    SimulationArtifacts artifacts = simulate_scenario(scenario);
    int degree = degree_override > 0 ? degree_override : std::max(1, scenario.max_objective_degree() - 1);

    AdversaryView view = make_adversary_view(artifacts.resolved, artifacts.trace);
    AttackResult result = attack(view, degree);

    json report = attack_report_json(result, artifacts.resolved);
    report["gradient_degree"] = degree;
    report["seed"] = artifacts.resolved.scenario.seed;
    report["config_hash"] = artifacts.report["config_hash"];
    if (result.failures.empty() && !result.recovered.empty()) {
        AggregateRecovery agg = recover_aggregate(view, result.recovered);
        report["aggregate"] = {{"total", to_json(agg.total)}, {"good_agents", to_json(agg.good_agents)}};
    }

    artifacts.report["command"] = "attack";
    artifacts.report["attack"] = report;
    write_simulation_outputs(options.out_dir, artifacts);
    write_file_atomic(fs::path(options.out_dir) / "attack_report.json", report.dump(2) + "\n");

    for (const auto& entry : report["agents"])
        std::cout << "agent " << entry["agent"] << ": " << entry["verdict"].get<std::string>()
                  << " (distance to original " << fmt(entry["distance_to_original"].get<double>())
                  << ", to obfuscated " << fmt(entry["distance_to_obfuscated"].get<double>()) << ")\n";
    return 0;
}

int cmd_verify_privacy(const CommonOptions& options, int trials) {
    Scenario scenario = load_with_overrides(options);
    ResolvedScenario resolved = resolve(scenario);
    const int f = static_cast<int>(scenario.coalition.size());
    const Topology& g = scenario.topology;

    json scenario_echo = to_json(resolved.scenario);
    json report;
    report["coalition"] = std::vector<int>(scenario.coalition.begin(), scenario.coalition.end());
    report["topology"] = topology_report(g, f);
    report["seed"] = scenario.seed;
    report["config_hash"] = config_hash(scenario_echo);
    report["scenario"] = scenario_echo;

    bool admissible = g.node_count() < 2 || is_f_admissible(g, f);
    if (!admissible) {
        PrivacyFailureReport failures = detect_privacy_failures(g, scenario.coalition);
        report["admissible"] = false;
        report["failures"] = to_json(failures);
        fs::create_directories(options.out_dir);
        write_file_atomic(fs::path(options.out_dir) / "verifier_report.json", report.dump(2) + "\n");
        std::cerr << "topology is not " << f << "-admissible: vertex connectivity "
                  << vertex_connectivity(g) << " must exceed the coalition size " << f << "\n";
        if (!failures.individual.empty()) {
            std::cerr << "individual privacy loss at agents:";
            for (int v : failures.individual) std::cerr << ' ' << v;
            std::cerr << "\n";
        }
        for (const auto& group : failures.groups) {
            std::cerr << "group aggregate exposed for agents:";
            for (int v : group) std::cerr << ' ' << v;
            std::cerr << "\n";
        }
        return kExitNotAdmissible;
    }
    report["admissible"] = true;

    std::mt19937_64 rng(scenario.seed);
    int degree = std::max(1, scenario.resolved_share_degree());
    json trial_reports = json::array();
    bool all_verified = true;
    for (int t = 0; t < trials; ++t) {
        ObjectiveVector alternative = sample_alternative_objectives(scenario.objectives, scenario.coalition, rng, degree);
        ConstructionResult construction = construct_alternative_shares(
            scenario.objectives, resolved.shares, alternative, g, scenario.coalition, rng);
        ObservableComparison observables = compare_observables(scenario.objectives, resolved.shares, alternative,
                                                               construction.shares, g, scenario.coalition);
        bool identical = end_to_end_indistinguishable(resolved.scenario,
                                                      with_alternative(resolved, alternative, construction.shares));
        all_verified = all_verified && construction.verified && identical;
        trial_reports.push_back(verifier_trial_json(t, construction, observables, identical));
    }
    report["trials"] = trial_reports;
    report["all_verified"] = all_verified;

    fs::create_directories(options.out_dir);
    write_file_atomic(fs::path(options.out_dir) / "verifier_report.json", report.dump(2) + "\n");
    std::cout << trials << " trials, all verified: " << (all_verified ? "yes" : "no") << "\n";
    return all_verified ? 0 : kExitRuntime;
}

int cmd_check_topology(const std::string& path, std::optional<int> f_flag) {
    TopologyInput input = load_topology_input(path);
    const Topology& g = input.topology;
    int f = f_flag ? *f_flag : (input.has_coalition ? static_cast<int>(input.coalition.size()) : 1);

    std::cout << "nodes: " << g.node_count() << ", edges: " << g.edges().size() << "\n";
    if (!g.is_connected()) {
        std::cout << "graph is not connected; not admissible for any f\n";
        return kExitTopologyCheck;
    }
    if (g.node_count() < 2) {
        std::cout << "single agent, nothing to check\n";
        return 0;
    }

    int kappa = vertex_connectivity(g);
    int lambda = edge_connectivity(g);
    int delta = min_degree(g);
    std::cout << "vertex connectivity (kappa): " << kappa << "\n";
    std::cout << "edge connectivity (lambda):  " << lambda << "\n";
    std::cout << "minimum degree (delta):      " << delta << "\n";
    std::cout << "chain kappa <= lambda <= delta: " << kappa << " <= " << lambda << " <= " << delta
              << (kappa <= lambda && lambda <= delta ? " (holds)" : " (violated)") << "\n";

    bool admissible = kappa > f;
    std::cout << "f = " << f << ": " << (admissible ? "admissible" : "not admissible (needs kappa > f)") << "\n";

    if (input.has_coalition) {
        PrivacyFailureReport failures = detect_privacy_failures(g, input.coalition);
        if (!failures.individual.empty()) {
            std::cout << "individual privacy loss at agents:";
            for (int v : failures.individual) std::cout << ' ' << v;
            std::cout << "\n";
        }
        for (const auto& group : failures.groups) {
            std::cout << "group aggregate exposed for agents:";
            for (int v : group) std::cout << ' ' << v;
            std::cout << "\n";
        }
    } else {
        bool flagged = false;
        for (int v = 0; v < g.node_count(); ++v) {
            if (g.degree(v) < f + 1) {
                std::cout << "agent " << v << " has degree " << g.degree(v) << " < f+1 = " << f + 1 << "\n";
                flagged = true;
            }
        }
        if (!flagged && !admissible) std::cout << "no degree deficiency; connectivity is the binding constraint\n";
    }
    return admissible ? 0 : kExitTopologyCheck;
}

fs::path scenario_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PRIVSHARE_SCENARIOS")) return env;
    return "scenarios";
}

bool print_check(const std::string& label, double got, double bound) {
    bool ok = got <= bound;
    std::cout << "  " << label << ": " << fmt(got) << " (bound " << fmt(bound) << ") " << (ok ? "ok" : "FAIL")
              << "\n";
    return ok;
}

int demo_example1(const fs::path& dir) {
    Scenario scenario = load_scenario(dir / "example1.json");
    double start = now_seconds();
    ResolvedScenario resolved = resolve(scenario);
    ExecutionTrace trace = run(resolved);
    AttackResult result = attack(make_adversary_view(resolved, trace), 3);
    double elapsed = now_seconds() - start;

    const std::map<int, Polynomial> expected{{1, Polynomial({0, -36, 25, -8, 1})},
                                             {2, Polynomial({0, -108, 54, -12, 1})}};
    bool ok = result.failures.empty();
    std::cout << "reconstruction attack on the unobfuscated protocol (" << fmt(elapsed) << " s)\n";
    for (const auto& [agent, reference] : expected) {
        if (!result.recovered.contains(agent)) {
            std::cout << "  agent " << agent << ": no recovery\n";
            ok = false;
            continue;
        }
        const Polynomial got = result.recovered.at(agent).objective.nonconstant_part();
        double err = coefficient_distance(got, reference);
        std::cout << "  agent " << agent << "\n";
        std::cout << "    reference: " << poly_text(reference) << " (+ constant)\n";
        std::cout << "    recovered: " << poly_text(got) << "\n";
        ok = print_check("coefficient error", err, 1e-2) && ok;
    }
    return ok ? 0 : kExitRuntime;
}

int demo_table2(const fs::path& dir) {
    Scenario p1 = load_scenario(dir / "table2_p1.json");
    Scenario p2 = load_scenario(dir / "table2_p2.json");
    const ObjectiveVector expected{Polynomial({0, -3, -4, -4, 2}), Polynomial({0, 10, 4, -7, -4}),
                                   Polynomial({0, -7, 2, 11, 4})};

    ObjectiveVector fhat1 = obfuscate(p1.objectives, p1.shares, p1.topology);
    ObjectiveVector fhat2 = obfuscate(p2.objectives, p2.shares, p2.topology);

    bool ok = true;
    std::cout << "two problems, one obfuscated objective vector\n";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        bool match = fhat1[i] == expected[i] && fhat2[i] == expected[i];
        std::cout << "  agent " << i << "\n";
        std::cout << "    problem 1: " << poly_text(fhat1[i]) << "\n";
        std::cout << "    problem 2: " << poly_text(fhat2[i]) << "\n";
        std::cout << "    reference: " << poly_text(expected[i]) << (match ? "  ok" : "  FAIL") << "\n";
        ok = ok && match;
    }

    bool observables = verify_indistinguishable(p1.objectives, p1.shares, p2.objectives, p2.shares, p1.topology,
                                                p1.coalition);
    bool identical = end_to_end_indistinguishable(p1, p2);
    std::cout << "  coalition observables coincide: " << (observables ? "yes" : "NO") << "\n";
    std::cout << "  executions bitwise identical:   " << (identical ? "yes" : "NO") << "\n";
    return ok && observables && identical ? 0 : kExitRuntime;
}

int demo_sec6(const fs::path& dir) {
    Scenario scenario = load_scenario(dir / "sec6.json");
    double start = now_seconds();
    SimulationArtifacts obfuscated = simulate_scenario(scenario);

    Scenario plain = scenario;
    plain.share_mode = Scenario::ShareMode::Zero;
    plain.shares = ShareAssignment{};
    SimulationArtifacts reference = simulate_scenario(plain);
    double elapsed = now_seconds() - start;

    const MetricsRow& last = obfuscated.series.back();
    const MetricsRow& plain_last = reference.series.back();
    std::cout << "obfuscated consensus run, " << scenario.iterations << " iterations (" << fmt(elapsed) << " s)\n";
    bool ok = print_check("|final mean - optimum|", std::abs(last.mean), 1e-2);
    ok = print_check("final max deviation", last.max_deviation, 1e-3) && ok;
    ok = print_check("final rms_sq", last.rms_sq, 1e-3) && ok;
    ok = print_check("|obfuscated - plain| final mean", std::abs(last.mean - plain_last.mean), 2e-2) && ok;

    AttackResult attacked = attack(make_adversary_view(obfuscated.resolved, obfuscated.trace), 3);
    for (const auto& [agent, recovered] : attacked.recovered) {
        RecoveryAssessment assessment =
            assess_recovery(recovered, scenario.objectives[static_cast<std::size_t>(agent)],
                            obfuscated.resolved.obfuscated[static_cast<std::size_t>(agent)]);
        std::cout << "  attack on agent " << agent << ": " << verdict_name(assessment.verdict) << "\n";
        ok = ok && assessment.verdict == RecoveryVerdict::RecoveredObfuscatedOnly;
    }
    return ok ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Function-sharing distributed optimization: simulator, attack and privacy verifier"};
    app.require_subcommand(1);

    CommonOptions simulate_opts;
    CLI::App* simulate = app.add_subcommand("simulate", "run a scenario and write trace, metrics and report");
    simulate->add_option("scenario", simulate_opts.scenario_path, "scenario JSON file")->required();
    simulate->add_option("--out", simulate_opts.out_dir, "output directory");
    simulate->add_option("--seed", simulate_opts.seed, "override the scenario seed");

    CommonOptions attack_opts;
    std::vector<int> coalition_override;
    int degree_override = -1;
    CLI::App* attack_cmd = app.add_subcommand("attack", "simulate, then mount the gradient reconstruction attack");
    attack_cmd->add_option("scenario", attack_opts.scenario_path, "scenario JSON file")->required();
    attack_cmd->add_option("--out", attack_opts.out_dir, "output directory");
    attack_cmd->add_option("--seed", attack_opts.seed, "override the scenario seed");
    attack_cmd->add_option("--coalition", coalition_override, "override the coalition node set");
    attack_cmd->add_option("--degree", degree_override, "gradient fit degree");

    CommonOptions verify_opts;
    int trials = 100;
    CLI::App* verify = app.add_subcommand("verify-privacy", "construct indistinguishable alternatives");
    verify->add_option("scenario", verify_opts.scenario_path, "scenario JSON file")->required();
    verify->add_option("--out", verify_opts.out_dir, "output directory");
    verify->add_option("--seed", verify_opts.seed, "override the scenario seed");
    verify->add_option("--trials", trials, "number of sampled alternatives");

    std::string topology_path;
    std::optional<int> f_flag;
    CLI::App* check = app.add_subcommand("check-topology", "connectivity numbers and admissibility verdict");
    check->add_option("topology", topology_path, "topology or scenario JSON file")->required();
    check->add_option("--f", f_flag, "coalition size to check against");

    std::string demo_name;
    std::string demo_dir_flag;
    CLI::App* demo = app.add_subcommand("demo", "reproduce a bundled reference result");
    demo->add_option("name", demo_name, "one of: example1, table2, sec6")
        ->required()
        ->check(CLI::IsMember({"example1", "table2", "sec6"}));
    demo->add_option("--scenarios", demo_dir_flag, "directory holding the bundled scenario files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*simulate) return cmd_simulate(simulate_opts);
        if (*attack_cmd) return cmd_attack(attack_opts, coalition_override, degree_override);
        if (*verify) return cmd_verify_privacy(verify_opts, trials);
        if (*check) return cmd_check_topology(topology_path, f_flag);
        if (*demo) {
            fs::path dir = scenario_dir(demo_dir_flag);
            if (demo_name == "example1") return demo_example1(dir);
            if (demo_name == "table2") return demo_table2(dir);
            return demo_sec6(dir);
        }
    } catch (const InvalidScenario& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const NotAdmissible& e) {
        std::cerr << e.what() << "\n";
        return kExitNotAdmissible;
    } catch (const json::exception& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}

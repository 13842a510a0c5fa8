#include "privshare/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace privshare {
namespace {

std::string format_double(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

json require(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

}  // namespace

json to_json(const Polynomial& p) {
    return json(p.coeffs());
}

Polynomial polynomial_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("polynomial: expected an array of coefficients");
    return Polynomial(j.get<std::vector<double>>());
}

json to_json(const Topology& g) {
    json edges = json::array();
    for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
    return json{{"nodes", g.node_count()}, {"edges", edges}};
}

Topology topology_from_json(const json& j) {
    int nodes = require(j, "nodes").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : require(j, "edges")) {
        if (!e.is_array() || e.size() != 2) throw std::invalid_argument("topology: edges must be [a,b] pairs");
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    return Topology(nodes, edges);
}

json to_json(const ShareAssignment& shares) {
    json entries = json::array();
    for (const auto& [link, share] : shares.shares)
        entries.push_back({{"from", link.from}, {"to", link.to}, {"coeffs", to_json(share)}});
    return json{{"shares", entries}};
}

ShareAssignment shares_from_json(const json& j) {
    ShareAssignment out;
    for (const auto& entry : require(j, "shares")) {
        DirectedEdge link{require(entry, "from").get<int>(), require(entry, "to").get<int>()};
        if (!out.shares.emplace(link, polynomial_from_json(require(entry, "coeffs"))).second)
            throw std::invalid_argument("shares: duplicate entry for link (" + std::to_string(link.from) + "," +
                                        std::to_string(link.to) + ")");
    }
    return out;
}

json to_json(const PrivacyFailureReport& report) {
    return json{{"individual", report.individual}, {"groups", report.groups}};
}

json to_json(const Scenario& scenario) {
    json j;
    j["name"] = scenario.name;
    j["seed"] = scenario.seed;
    j["iterations"] = scenario.iterations;
    j["topology"] = to_json(scenario.topology);
    json objectives = json::array();
    for (const auto& f : scenario.objectives) objectives.push_back(to_json(f));
    j["objectives"] = objectives;

    switch (scenario.share_mode) {
        case Scenario::ShareMode::Explicit: {
            json s = to_json(scenario.shares);
            s["mode"] = "explicit";
            j["shares"] = s;
            break;
        }
        case Scenario::ShareMode::Random:
            j["shares"] = {{"mode", "random"},
                           {"degree", scenario.resolved_share_degree()},
                           {"coeff_bound", scenario.share_bound}};
            break;
        case Scenario::ShareMode::Zero:
            j["shares"] = {{"mode", "zero"}};
            break;
    }

    if (scenario.mixing_mode == Scenario::MixingMode::Explicit) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < scenario.mixing.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < scenario.mixing.cols(); ++c) row.push_back(scenario.mixing(r, c));
            rows.push_back(row);
        }
        j["mixing"] = {{"mode", "explicit"}, {"matrix", rows}};
    } else {
        j["mixing"] = {{"mode", "metropolis"}};
    }

    j["step"] = {{"a", scenario.step.numerator}, {"b", scenario.step.offset}};
    j["feasible"] = {{"lower", scenario.feasible.lower}, {"upper", scenario.feasible.upper}};
    if (scenario.init_mode == Scenario::InitMode::Explicit)
        j["init"] = {{"mode", "explicit"}, {"values", scenario.initial_states}};
    else
        j["init"] = {{"mode", "random"}};
    j["coalition"] = std::vector<int>(scenario.coalition.begin(), scenario.coalition.end());
    return j;
}

Scenario scenario_from_json(const json& j) {
    Scenario scenario;
    scenario.name = j.value("name", std::string{});
    scenario.seed = j.value("seed", std::uint64_t{1});
    scenario.iterations = j.value("iterations", 500);
    scenario.topology = topology_from_json(require(j, "topology"));
    for (const auto& f : require(j, "objectives")) scenario.objectives.push_back(polynomial_from_json(f));

    if (j.contains("shares")) {
        const json& s = j.at("shares");
        std::string mode = s.value("mode", "random");
        if (mode == "explicit") {
            scenario.share_mode = Scenario::ShareMode::Explicit;
            scenario.shares = shares_from_json(s);
        } else if (mode == "zero") {
            scenario.share_mode = Scenario::ShareMode::Zero;
        } else if (mode == "random") {
            scenario.share_mode = Scenario::ShareMode::Random;
            scenario.share_degree = s.value("degree", -1);
            scenario.share_bound = s.value("coeff_bound", 10.0);
        } else {
            throw std::invalid_argument("shares: unknown mode \"" + mode + "\"");
        }
    }

    if (j.contains("mixing")) {
        const json& m = j.at("mixing");
        std::string mode = m.value("mode", "metropolis");
        if (mode == "explicit") {
            scenario.mixing_mode = Scenario::MixingMode::Explicit;
            auto rows = require(m, "matrix");
            auto S = static_cast<Eigen::Index>(rows.size());
            scenario.mixing.resize(S, S);
            for (Eigen::Index r = 0; r < S; ++r) {
                if (static_cast<Eigen::Index>(rows.at(r).size()) != S)
                    throw std::invalid_argument("mixing: matrix must be square");
                for (Eigen::Index c = 0; c < S; ++c) scenario.mixing(r, c) = rows.at(r).at(c).get<double>();
            }
        } else if (mode == "metropolis") {
            scenario.mixing_mode = Scenario::MixingMode::Metropolis;
        } else {
            throw std::invalid_argument("mixing: unknown mode \"" + mode + "\"");
        }
    }

    if (j.contains("step")) {
        scenario.step.numerator = j.at("step").value("a", 1.0);
        scenario.step.offset = j.at("step").value("b", 1e-4);
    }
    if (j.contains("feasible")) {
        scenario.feasible.lower = j.at("feasible").value("lower", -2.0);
        scenario.feasible.upper = j.at("feasible").value("upper", 2.0);
    }
    if (j.contains("init")) {
        const json& init = j.at("init");
        std::string mode = init.value("mode", "random");
        if (mode == "explicit") {
            scenario.init_mode = Scenario::InitMode::Explicit;
            scenario.initial_states = require(init, "values").get<std::vector<double>>();
        } else if (mode == "random") {
            scenario.init_mode = Scenario::InitMode::Random;
        } else {
            throw std::invalid_argument("init: unknown mode \"" + mode + "\"");
        }
    }
    if (j.contains("coalition"))
        for (const auto& member : j.at("coalition")) scenario.coalition.insert(member.get<int>());
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file " + path.string());
    json j;
    in >> j;
    return scenario_from_json(j);
}

TopologyInput load_topology_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open topology file " + path.string());
    json j;
    in >> j;

    TopologyInput out;
    if (j.contains("topology")) {
        Scenario scenario = scenario_from_json(j);
        out.topology = scenario.topology;
        out.coalition = scenario.coalition;
        out.has_coalition = !scenario.coalition.empty();
    } else {
        out.topology = topology_from_json(j);
    }
    return out;
}

std::string trace_csv(const ExecutionTrace& trace) {
    std::ostringstream out;
    out << "iteration,agent,v,x_next,alpha\n";
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
        const auto& round = trace.rounds[k];
        for (int agent = 0; agent < trace.agent_count; ++agent)
            out << (k + 1) << ',' << agent << ',' << format_double(round.fused[static_cast<std::size_t>(agent)]) << ','
                << format_double(round.states[static_cast<std::size_t>(agent)]) << ',' << format_double(round.alpha)
                << '\n';
    }
    return out.str();
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
    std::ostringstream out;
    out << "iteration,mean,max_dev,rms_sq,f_of_mean\n";
    for (const auto& row : rows)
        out << row.iteration << ',' << format_double(row.mean) << ',' << format_double(row.max_deviation) << ','
            << format_double(row.rms_sq) << ',' << format_double(row.f_of_mean) << '\n';
    return out.str();
}

json attack_report_json(const AttackResult& result, const ResolvedScenario& resolved) {
    json agents = json::array();
    for (const auto& [agent, recovered] : result.recovered) {
        RecoveryAssessment assessment =
            assess_recovery(recovered, resolved.scenario.objectives[static_cast<std::size_t>(agent)],
                            resolved.obfuscated[static_cast<std::size_t>(agent)]);
        agents.push_back({{"agent", agent},
                          {"gradient_coeffs", to_json(recovered.gradient)},
                          {"objective_coeffs", to_json(recovered.objective)},
                          {"samples", recovered.sample_count},
                          {"fit_residual", recovered.fit_residual},
                          {"distance_to_original", assessment.distance_to_original},
                          {"distance_to_obfuscated", assessment.distance_to_obfuscated},
                          {"verdict", verdict_name(assessment.verdict)}});
    }
    json failures = json::array();
    for (const auto& [agent, reason] : result.failures) failures.push_back({{"agent", agent}, {"reason", reason}});
    return json{{"agents", agents}, {"errors", failures}};
}

json verifier_trial_json(int trial, const ConstructionResult& construction, const ObservableComparison& observables,
                         bool end_to_end) {
    return json{{"trial", trial},
                {"residual", construction.residual},
                {"observables",
                 {{"obfuscated_gap", observables.obfuscated_gap},
                  {"incident_shares_equal", observables.incident_shares_equal},
                  {"coalition_objectives_equal", observables.coalition_objectives_equal}}},
                {"observables_match", construction.verified},
                {"identical_execution", end_to_end},
                {"constructed_shares", to_json(construction.shares)}};
}

std::string config_hash(const json& scenario_json) {
    const std::string canonical = scenario_json.dump();
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%016" PRIx64, hash);
    return buffer;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace privshare

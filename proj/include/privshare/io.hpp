#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "privshare/adversary.hpp"
#include "privshare/optimizer.hpp"
#include "privshare/topology.hpp"
#include "privshare/verifier.hpp"

namespace privshare {

using json = nlohmann::json;

json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const json& j);

json to_json(const Topology& g);
Topology topology_from_json(const json& j);

json to_json(const ShareAssignment& shares);
ShareAssignment shares_from_json(const json& j);

json to_json(const PrivacyFailureReport& report);

json to_json(const Scenario& scenario);
Scenario scenario_from_json(const json& j);
Scenario load_scenario(const std::filesystem::path& path);

/// Reads either a bare topology document or a full scenario and returns its
/// topology (plus the coalition when one is present).
struct TopologyInput {
    Topology topology;
    std::set<int> coalition;
    bool has_coalition = false;
};
TopologyInput load_topology_input(const std::filesystem::path& path);

/// One row per (iteration, agent): iteration, agent, v, x_next, alpha.
std::string trace_csv(const ExecutionTrace& trace);

/// iteration, mean, max_dev, rms_sq, f_of_mean.
std::string metrics_csv(const std::vector<MetricsRow>& rows);

json attack_report_json(const AttackResult& result, const ResolvedScenario& resolved);
json verifier_trial_json(int trial, const ConstructionResult& construction, const ObservableComparison& observables,
                         bool end_to_end);

/// FNV-1a hash of the canonical serialized scenario, hex encoded.
std::string config_hash(const json& scenario_json);

/// Writes through a temporary file in the same directory plus a rename, so
/// readers never observe partial content.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace privshare

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "privshare/feasible.hpp"
#include "privshare/obfuscation.hpp"
#include "privshare/polynomial.hpp"
#include "privshare/topology.hpp"

namespace privshare {

/// Scenario validation failure; the message aggregates every violated
/// precondition, one per line.
struct InvalidScenario : std::runtime_error {
    explicit InvalidScenario(const std::vector<std::string>& issues);
    std::vector<std::string> issues;
};

/// Full experiment description; a single scenario determines an execution
/// bit for bit (shares, initial iterates and mixing are either explicit or
/// derived deterministically from the seed).
struct Scenario {
    enum class ShareMode { Explicit, Random, Zero };
    enum class MixingMode { Metropolis, Explicit };
    enum class InitMode { Random, Explicit };

    std::string name;
    Topology topology;
    ObjectiveVector objectives;

    ShareMode share_mode = ShareMode::Random;
    ShareAssignment shares;   // used when share_mode == Explicit
    int share_degree = -1;    // Random mode; -1 means max objective degree
    double share_bound = 10.0;

    MixingMode mixing_mode = MixingMode::Metropolis;
    Eigen::MatrixXd mixing;  // used when mixing_mode == Explicit

    StepSchedule step;
    FeasibleSet feasible;

    InitMode init_mode = InitMode::Random;
    std::vector<double> initial_states;  // used when init_mode == Explicit

    int iterations = 500;
    std::set<int> coalition;
    std::uint64_t seed = 1;

    int max_objective_degree() const;
    int resolved_share_degree() const;
};

/// Scenario with every derived quantity materialized: explicit shares,
/// mixing weights, initial iterates and the obfuscated objectives the agents
/// actually descend on.
struct ResolvedScenario {
    Scenario scenario;  // share/init/mixing modes rewritten to Explicit
    ShareAssignment shares;
    MixingMatrix mixing;
    std::vector<double> initial_states;
    ObjectiveVector obfuscated;
};

/// Validates the scenario (throwing InvalidScenario with all violations) and
/// materializes shares, mixing and initial iterates.
ResolvedScenario resolve(const Scenario& scenario);

/// One synchronous round: the fused estimates, the resulting iterates, the
/// step size and the mixing weights in force.
struct IterationRecord {
    double alpha = 0.0;
    std::vector<double> fused;
    std::vector<double> states;
    Eigen::MatrixXd mixing;
};

/// Everything observable about an execution: initial iterates plus every
/// round's fused estimates and iterates. Objectives and shares are not part
/// of the trace.
struct ExecutionTrace {
    int agent_count = 0;
    FeasibleSet feasible;
    Topology topology;
    std::vector<double> initial_states;
    std::vector<IterationRecord> rounds;

    /// Iterates entering round k (1-based): the initial states for k=1,
    /// otherwise the previous round's result.
    const std::vector<double>& states_before(int k) const {
        return k <= 1 ? initial_states : rounds[static_cast<std::size_t>(k) - 2].states;
    }
};

/// Information fusion: inner product of the agent's mixing row with the
/// current states.
double fuse(std::span<const double> states, const MixingMatrix& mixing, int agent);

/// Projection onto the feasible interval.
double project(double x, const FeasibleSet& feasible);

/// Projected gradient step from the fused estimate.
double descent_step(double fused, const Polynomial& objective, double alpha, const FeasibleSet& feasible);

/// Runs share generation, obfuscation and the synchronous fuse/step rounds.
ExecutionTrace run(const ResolvedScenario& resolved);
ExecutionTrace run(const Scenario& scenario);

struct MetricsRow {
    int iteration = 0;
    double mean = 0.0;
    double max_deviation = 0.0;
    double rms_sq = 0.0;
    double f_of_mean = 0.0;
};

/// Per-round consensus metrics: iterate average, worst deviation from it,
/// the squared-deviation sum and the aggregate objective at the average.
std::vector<MetricsRow> metrics(const ExecutionTrace& trace, const Polynomial& aggregate_objective);

}  // namespace privshare

#include "privshare/optimizer.hpp"

#include <numeric>
#include <sstream>

namespace privshare {
namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::ostringstream out;
    out << "invalid scenario:";
    for (const auto& issue : issues) out << "\n  - " << issue;
    return out.str();
}

}  // namespace

InvalidScenario::InvalidScenario(const std::vector<std::string>& all) : std::runtime_error(join_issues(all)), issues(all) {}

int Scenario::max_objective_degree() const {
    int best = 0;
    for (const auto& f : objectives) best = std::max(best, static_cast<int>(f.degree()));
    return best;
}

int Scenario::resolved_share_degree() const {
    return share_degree > 0 ? share_degree : std::max(1, max_objective_degree());
}

ResolvedScenario resolve(const Scenario& scenario) {
    std::vector<std::string> issues;
    const int S = scenario.topology.node_count();

    if (S < 1) issues.push_back("topology must have at least one agent");
    if (!scenario.topology.is_connected()) issues.push_back("topology must be connected");
    if (static_cast<int>(scenario.objectives.size()) != S)
        issues.push_back("expected " + std::to_string(S) + " objectives, got " +
                         std::to_string(scenario.objectives.size()));
    if (!(scenario.feasible.lower < scenario.feasible.upper))
        issues.push_back("feasible set: lower bound must be below upper bound");
    if (!(scenario.step.numerator > 0.0)) issues.push_back("step schedule: numerator must be positive");
    if (scenario.step.offset < 0.0) issues.push_back("step schedule: offset must be non-negative");
    if (scenario.iterations < 0) issues.push_back("iteration count must be non-negative");
    for (int a : scenario.coalition)
        if (a < 0 || a >= S) issues.push_back("coalition member " + std::to_string(a) + " is not a node");

    if (scenario.share_mode == Scenario::ShareMode::Explicit) {
        try {
            validate_shares(scenario.shares, scenario.topology);
        } catch (const std::invalid_argument& e) {
            issues.push_back(e.what());
        }
    } else if (scenario.share_mode == Scenario::ShareMode::Random) {
        if (!(scenario.share_bound > 0.0)) issues.push_back("share coefficient bound must be positive");
    }

    MixingMatrix mixing;
    if (issues.empty()) {
        try {
            mixing = scenario.mixing_mode == Scenario::MixingMode::Explicit
                         ? validated_mixing(scenario.mixing, scenario.topology)
                         : metropolis_mixing(scenario.topology);
        } catch (const std::invalid_argument& e) {
            issues.push_back(e.what());
        }
    }

    if (scenario.init_mode == Scenario::InitMode::Explicit) {
        if (static_cast<int>(scenario.initial_states.size()) != S)
            issues.push_back("expected " + std::to_string(S) + " initial iterates, got " +
                             std::to_string(scenario.initial_states.size()));
        for (double x : scenario.initial_states)
            if (!scenario.feasible.contains(x))
                issues.push_back("initial iterate " + std::to_string(x) + " lies outside the feasible set");
    }

    if (!issues.empty()) throw InvalidScenario(issues);

    // Shares are drawn before initial iterates; both come from one stream
    // seeded by the scenario, so a seed pins the entire execution.
    std::mt19937_64 rng(scenario.seed);
    ResolvedScenario resolved;
    resolved.scenario = scenario;
    resolved.mixing = std::move(mixing);

    switch (scenario.share_mode) {
        case Scenario::ShareMode::Explicit:
            resolved.shares = scenario.shares;
            break;
        case Scenario::ShareMode::Random:
            resolved.shares =
                generate_shares(scenario.topology, scenario.resolved_share_degree(), scenario.share_bound, rng);
            break;
        case Scenario::ShareMode::Zero:
            resolved.shares = zero_shares(scenario.topology);
            break;
    }

    if (scenario.init_mode == Scenario::InitMode::Explicit) {
        resolved.initial_states = scenario.initial_states;
    } else {
        std::uniform_real_distribution<double> dist(scenario.feasible.lower, scenario.feasible.upper);
        resolved.initial_states.resize(static_cast<std::size_t>(S));
        for (double& x : resolved.initial_states) x = dist(rng);
    }

    resolved.obfuscated = obfuscate(scenario.objectives, resolved.shares, scenario.topology);

    resolved.scenario.share_mode = Scenario::ShareMode::Explicit;
    resolved.scenario.shares = resolved.shares;
    resolved.scenario.mixing_mode = Scenario::MixingMode::Explicit;
    resolved.scenario.mixing = resolved.mixing.entries;
    resolved.scenario.init_mode = Scenario::InitMode::Explicit;
    resolved.scenario.initial_states = resolved.initial_states;
    return resolved;
}

double fuse(std::span<const double> states, const MixingMatrix& mixing, int agent) {
    if (static_cast<Eigen::Index>(states.size()) != mixing.entries.cols())
        throw std::invalid_argument("fuse: state count does not match mixing matrix");
    double acc = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) acc += mixing.entries(agent, static_cast<Eigen::Index>(i)) * states[i];
    return acc;
}

double project(double x, const FeasibleSet& feasible) {
    return feasible.project(x);
}

double descent_step(double fused, const Polynomial& objective, double alpha, const FeasibleSet& feasible) {
    if (!(alpha > 0.0)) throw std::invalid_argument("descent_step: alpha must be positive");
    return feasible.project(fused - alpha * objective.derivative()(fused));
}

ExecutionTrace run(const ResolvedScenario& resolved) {
    const Scenario& sc = resolved.scenario;
    const int S = sc.topology.node_count();

    std::vector<Polynomial> gradients;
    gradients.reserve(resolved.obfuscated.size());
    for (const auto& f : resolved.obfuscated) gradients.push_back(f.derivative());

    ExecutionTrace trace;
    trace.agent_count = S;
    trace.feasible = sc.feasible;
    trace.topology = sc.topology;
    trace.initial_states = resolved.initial_states;
    trace.rounds.reserve(static_cast<std::size_t>(sc.iterations));

    std::vector<double> states = resolved.initial_states;
    for (int k = 1; k <= sc.iterations; ++k) {
        IterationRecord record;
        record.alpha = sc.step.alpha(k);
        record.mixing = resolved.mixing.entries;
        record.fused.resize(static_cast<std::size_t>(S));
        record.states.resize(static_cast<std::size_t>(S));
        // Every agent reads the same snapshot of round-k states; the per-agent
        // updates are independent of evaluation order.
        for (int j = 0; j < S; ++j) {
            double v = fuse(states, resolved.mixing, j);
            record.fused[static_cast<std::size_t>(j)] = v;
            record.states[static_cast<std::size_t>(j)] =
                sc.feasible.project(v - record.alpha * gradients[static_cast<std::size_t>(j)](v));
        }
        states = record.states;
        trace.rounds.push_back(std::move(record));
    }
    return trace;
}

ExecutionTrace run(const Scenario& scenario) {
    return run(resolve(scenario));
}

std::vector<MetricsRow> metrics(const ExecutionTrace& trace, const Polynomial& aggregate_objective) {
    if (trace.rounds.empty()) throw std::invalid_argument("metrics: trace has no rounds");
    std::vector<MetricsRow> rows;
    rows.reserve(trace.rounds.size());
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
        const auto& states = trace.rounds[k].states;
        MetricsRow row;
        row.iteration = static_cast<int>(k) + 1;
        row.mean = std::accumulate(states.begin(), states.end(), 0.0) / static_cast<double>(states.size());
        for (double x : states) {
            double dev = x - row.mean;
            row.max_deviation = std::max(row.max_deviation, std::abs(dev));
            row.rms_sq += dev * dev;
        }
        row.f_of_mean = aggregate_objective(row.mean);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace privshare

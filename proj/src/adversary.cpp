#include "privshare/adversary.hpp"

#include <cmath>

namespace privshare {
namespace {

constexpr double kBoundaryTolerance = 1e-9;

Polynomial own_obfuscated(const AdversaryView& view, int member) {
    Polynomial out = view.own_objectives.at(member);
    for (const auto& [link, share] : view.incident_shares) {
        if (link.to == member) out = out + share;
        if (link.from == member) out = out - share;
    }
    return out;
}

}  // namespace

AdversaryView make_adversary_view(const ResolvedScenario& resolved, const ExecutionTrace& trace) {
    AdversaryView view;
    view.trace = trace;
    view.coalition = resolved.scenario.coalition;
    for (int member : view.coalition)
        view.own_objectives.emplace(member, resolved.scenario.objectives.at(static_cast<std::size_t>(member)));
    for (const auto& [link, share] : resolved.shares.shares)
        if (view.coalition.contains(link.from) || view.coalition.contains(link.to))
            view.incident_shares.emplace(link, share);
    return view;
}

std::vector<GradientSample> estimate_gradient_samples(const AdversaryView& view, int target) {
    if (view.coalition.contains(target))
        throw std::invalid_argument("estimate_gradient_samples: target is a coalition member");
    if (target < 0 || target >= view.trace.agent_count)
        throw std::invalid_argument("estimate_gradient_samples: no such agent");

    const auto& trace = view.trace;
    std::vector<GradientSample> samples;
    samples.reserve(trace.rounds.size());
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
        const auto& round = trace.rounds[k];
        const auto& before = trace.states_before(static_cast<int>(k) + 1);
        double fused = 0.0;
        for (std::size_t i = 0; i < before.size(); ++i)
            fused += round.mixing(target, static_cast<Eigen::Index>(i)) * before[i];
        double next = round.states[static_cast<std::size_t>(target)];
        if (std::abs(next - trace.feasible.lower) <= kBoundaryTolerance ||
            std::abs(next - trace.feasible.upper) <= kBoundaryTolerance)
            continue;
        samples.push_back({fused, (fused - next) / round.alpha});
    }
    if (samples.empty()) throw NoInteriorSamples("every round was clipped at the feasible boundary");
    return samples;
}

RecoveredFunction recover_objective(std::span<const GradientSample> samples, int degree) {
    std::vector<FitPoint> points;
    points.reserve(samples.size());
    for (const auto& s : samples) points.push_back({s.state, s.gradient});

    Polynomial fitted = least_squares_fit(points, degree);
    RecoveredFunction out;
    out.objective = fitted.antiderivative();
    out.gradient = out.objective.derivative();
    out.sample_count = samples.size();

    double sq = 0.0;
    for (const auto& s : samples) {
        double r = fitted(s.state) - s.gradient;
        sq += r * r;
    }
    out.fit_residual = std::sqrt(sq / static_cast<double>(samples.size()));
    return out;
}

AttackResult attack(const AdversaryView& view, int gradient_degree) {
    AttackResult result;
    for (int agent = 0; agent < view.trace.agent_count; ++agent) {
        if (view.coalition.contains(agent)) continue;
        try {
            auto samples = estimate_gradient_samples(view, agent);
            RecoveredFunction recovered = recover_objective(samples, gradient_degree);
            recovered.agent = agent;
            result.recovered.emplace(agent, std::move(recovered));
        } catch (const std::exception& e) {
            result.failures.emplace(agent, e.what());
        }
    }
    return result;
}

RecoveryAssessment assess_recovery(const RecoveredFunction& recovered, const Polynomial& original,
                                   const Polynomial& obfuscated, double fit_tol) {
    RecoveryAssessment out;
    Polynomial guess = recovered.objective.nonconstant_part();
    out.distance_to_original = coefficient_distance(guess, original.nonconstant_part());
    out.distance_to_obfuscated = coefficient_distance(guess, obfuscated.nonconstant_part());
    if (out.distance_to_original <= fit_tol)
        out.verdict = RecoveryVerdict::RecoveredOriginal;
    else if (out.distance_to_obfuscated <= fit_tol)
        out.verdict = RecoveryVerdict::RecoveredObfuscatedOnly;
    else
        out.verdict = RecoveryVerdict::Failed;
    return out;
}

const char* verdict_name(RecoveryVerdict verdict) {
    switch (verdict) {
        case RecoveryVerdict::RecoveredOriginal: return "recovered_original";
        case RecoveryVerdict::RecoveredObfuscatedOnly: return "recovered_obfuscated_only";
        case RecoveryVerdict::Failed: return "failed";
    }
    return "failed";
}

AggregateRecovery recover_aggregate(const AdversaryView& view, const std::map<int, RecoveredFunction>& recovered) {
    for (int agent = 0; agent < view.trace.agent_count; ++agent)
        if (!view.coalition.contains(agent) && !recovered.contains(agent))
            throw std::invalid_argument("recover_aggregate: missing recovery for agent " + std::to_string(agent));

    Polynomial total;
    for (const auto& [agent, rec] : recovered) total = total + rec.objective;
    for (int member : view.coalition) total = total + own_obfuscated(view, member);

    Polynomial good = total;
    for (const auto& [member, objective] : view.own_objectives) good = good - objective;

    return {total.nonconstant_part(), good.nonconstant_part()};
}

}  // namespace privshare

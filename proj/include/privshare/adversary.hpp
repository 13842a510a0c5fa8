#pragma once

#include <map>
#include <set>
#include <string>

#include "privshare/obfuscation.hpp"
#include "privshare/optimizer.hpp"

namespace privshare {

/// Everything a passive-curious coalition can observe: the full public
/// execution, the network, the coalition's own objectives and the shares on
/// links touching a coalition member. Shares between two good agents never
/// appear here.
struct AdversaryView {
    ExecutionTrace trace;
    std::set<int> coalition;
    std::map<int, Polynomial> own_objectives;
    std::map<DirectedEdge, Polynomial> incident_shares;
};

/// Projects a resolved scenario and its trace down to the coalition's
/// observables.
AdversaryView make_adversary_view(const ResolvedScenario& resolved, const ExecutionTrace& trace);

/// Every round of the trace had the target pinned to the feasible boundary,
/// so no gradient can be inverted.
struct NoInteriorSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GradientSample {
    double state = 0.0;     // fused estimate the gradient was taken at
    double gradient = 0.0;  // inverted gradient value
};

/// Re-derives the target's fused estimates from public states and inverts the
/// update x_next = v - alpha*g. Rounds whose result sits on the feasible
/// boundary (within 1e-9) are discarded because clipping destroys the
/// inversion. Throws NoInteriorSamples when nothing survives the filter.
std::vector<GradientSample> estimate_gradient_samples(const AdversaryView& view, int target);

/// A gradient fit and its integral, the integration constant fixed to zero.
struct RecoveredFunction {
    int agent = -1;
    Polynomial gradient;   // derivative of `objective`, exactly
    Polynomial objective;
    std::size_t sample_count = 0;
    double fit_residual = 0.0;  // RMS misfit of the gradient samples
};

RecoveredFunction recover_objective(std::span<const GradientSample> samples, int degree);

/// Reconstruction attempt against every good agent. Per-agent failures are
/// recorded, not fatal.
struct AttackResult {
    std::map<int, RecoveredFunction> recovered;
    std::map<int, std::string> failures;
};

AttackResult attack(const AdversaryView& view, int gradient_degree);

/// What a recovery attempt actually uncovered, judged against ground truth.
enum class RecoveryVerdict { RecoveredOriginal, RecoveredObfuscatedOnly, Failed };

struct RecoveryAssessment {
    RecoveryVerdict verdict = RecoveryVerdict::Failed;
    double distance_to_original = 0.0;
    double distance_to_obfuscated = 0.0;
};

/// Compares the recovered objective's non-constant part against the agent's
/// true and obfuscated functions at the given fit tolerance.
RecoveryAssessment assess_recovery(const RecoveredFunction& recovered, const Polynomial& original,
                                   const Polynomial& obfuscated, double fit_tol = 1e-2);

const char* verdict_name(RecoveryVerdict verdict);

/// Aggregate estimates available to the coalition: the network-wide objective
/// (sum of recovered and own obfuscated functions) and the good agents'
/// aggregate after subtracting the coalition's own objectives. Both carry the
/// usual constant-term ambiguity and are returned with constant zero.
struct AggregateRecovery {
    Polynomial total;
    Polynomial good_agents;
};

AggregateRecovery recover_aggregate(const AdversaryView& view, const std::map<int, RecoveredFunction>& recovered);

}  // namespace privshare

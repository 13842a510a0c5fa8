#pragma once

#include <random>
#include <set>

#include "privshare/obfuscation.hpp"
#include "privshare/optimizer.hpp"

namespace privshare {

/// The good-agent subgraph falls apart after removing coalition-incident
/// edges, so no consistent alternative shares exist.
struct NotAdmissible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The alternative objectives violate the coalition or aggregate constraints,
/// detected by a nonzero residual in the share reconstruction.
struct InconsistentAlternative : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Alternative objective vector that is observation-compatible: coalition
/// entries are copied verbatim, good agents receive random zero-sum
/// perturbations, so the aggregate matches exactly. With fewer than two good
/// agents there is no perturbation partner and the input is returned as is.
ObjectiveVector sample_alternative_objectives(const ObjectiveVector& objectives, const std::set<int>& coalition,
                                              std::mt19937_64& rng, int degree);

struct ConstructionResult {
    ShareAssignment shares;
    double residual = 0.0;  // largest coefficient misfit after substitution
    bool verified = false;
};

/// The three-step construction of alternative shares giving the alternative
/// objectives an identical execution: shares on coalition-incident links are
/// pinned to the originals, non-tree good-good links get random polynomials,
/// and the spanning-tree shares solve the remaining incidence system. The
/// tree system has one unknown per tree edge and unit pivots, so it is
/// eliminated leaf by leaf exactly; the reported residual comes from
/// substituting the result back. Throws NotAdmissible when the good agents
/// disconnect and InconsistentAlternative when the residual exceeds 1e-8.
ConstructionResult construct_alternative_shares(const ObjectiveVector& objectives, const ShareAssignment& shares,
                                                const ObjectiveVector& alternative, const Topology& g,
                                                const std::set<int>& coalition, std::mt19937_64& rng,
                                                int ee_degree = -1, double ee_bound = 10.0);

/// Side-by-side comparison of everything the coalition can observe across
/// the two candidate executions.
struct ObservableComparison {
    double obfuscated_gap = 0.0;  // largest coefficient distance between the obfuscated vectors
    bool incident_shares_equal = false;
    bool coalition_objectives_equal = false;

    bool indistinguishable() const {
        return obfuscated_gap <= 1e-8 && incident_shares_equal && coalition_objectives_equal;
    }
};

ObservableComparison compare_observables(const ObjectiveVector& objectives, const ShareAssignment& shares,
                                         const ObjectiveVector& alternative, const ShareAssignment& alt_shares,
                                         const Topology& g, const std::set<int>& coalition);

/// True when both executions present identical observables to the coalition:
/// equal obfuscated objectives (within 1e-8 per coefficient), exactly equal
/// shares on every coalition-incident link, and exactly equal coalition
/// objectives.
bool verify_indistinguishable(const ObjectiveVector& objectives, const ShareAssignment& shares,
                              const ObjectiveVector& alternative, const ShareAssignment& alt_shares,
                              const Topology& g, const std::set<int>& coalition);

/// Copy of a resolved scenario with the objectives and shares swapped for an
/// alternative pair.
Scenario with_alternative(const ResolvedScenario& resolved, const ObjectiveVector& alternative,
                          const ShareAssignment& alt_shares);

/// Runs both scenarios and compares the full public traces bit for bit; this
/// is the operational meaning of two executions being identical. Both
/// scenarios must share topology, mixing, schedule, initial iterates and
/// iteration count.
bool end_to_end_indistinguishable(const Scenario& a, const Scenario& b);

}  // namespace privshare

#pragma once

#include <map>
#include <random>
#include <vector>

#include "privshare/feasible.hpp"
#include "privshare/polynomial.hpp"
#include "privshare/topology.hpp"

namespace privshare {

/// One private objective per agent, indexed by agent id.
using ObjectiveVector = std::vector<Polynomial>;

/// Arbitrary functions exchanged over directed links; the map's domain is
/// exactly the directed edge set of the topology it was built for.
struct ShareAssignment {
    std::map<DirectedEdge, Polynomial> shares;

    const Polynomial& at(int from, int to) const { return shares.at({from, to}); }
};

/// One independent random polynomial with zero constant term per directed
/// edge, drawn in directed-edge order so the result is seed-deterministic.
ShareAssignment generate_shares(const Topology& g, int degree, double coeff_bound, std::mt19937_64& rng);

/// All-zero shares (the unobfuscated protocol).
ShareAssignment zero_shares(const Topology& g);

/// Checks that the assignment covers exactly the directed edges of g.
void validate_shares(const ShareAssignment& shares, const Topology& g);

/// Function-sharing transformation: each agent adds every received share and
/// subtracts every transmitted one. Equals the incidence-matrix form f + B*R.
ObjectiveVector obfuscate(const ObjectiveVector& objectives, const ShareAssignment& shares, const Topology& g);

/// Network-wide sum of the objectives.
Polynomial aggregate(const ObjectiveVector& objectives);

/// True when both objective vectors have exactly the same aggregate.
bool check_invariant(const ObjectiveVector& objectives, const ObjectiveVector& obfuscated);

/// Gradient bound, gradient Lipschitz constant and aggregate convexity over
/// the feasible interval, estimated by dense sampling including endpoints.
struct AssumptionReport {
    struct AgentBounds {
        double gradient_bound = 0.0;
        double gradient_lipschitz = 0.0;
    };
    std::vector<AgentBounds> agents;
    bool aggregate_convex = true;
};

AssumptionReport validate_assumptions(const ObjectiveVector& objectives, const FeasibleSet& feasible,
                                      int samples = 10000);

}  // namespace privshare

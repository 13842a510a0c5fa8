#include "privshare/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace privshare {
namespace {

constexpr double kResidualBound = 1e-8;

int default_degree(const ObjectiveVector& objectives, const ObjectiveVector& alternative,
                   const ShareAssignment& shares) {
    std::size_t best = 1;
    for (const auto& f : objectives) best = std::max(best, f.degree());
    for (const auto& f : alternative) best = std::max(best, f.degree());
    for (const auto& [link, share] : shares.shares) best = std::max(best, share.degree());
    return static_cast<int>(best);
}

double max_coefficient(const Polynomial& p) {
    double worst = 0.0;
    for (double c : p.coeffs()) worst = std::max(worst, std::abs(c));
    return worst;
}

bool exactly_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

}  // namespace

ObjectiveVector sample_alternative_objectives(const ObjectiveVector& objectives, const std::set<int>& coalition,
                                              std::mt19937_64& rng, int degree) {
    std::vector<int> good;
    for (int v = 0; v < static_cast<int>(objectives.size()); ++v)
        if (!coalition.contains(v)) good.push_back(v);
    if (good.size() < 2) return objectives;

    while (true) {
        std::vector<Polynomial> perturbations;
        perturbations.reserve(good.size());
        Polynomial balance;
        for (std::size_t i = 0; i + 1 < good.size(); ++i) {
            Polynomial q = random_polynomial(degree, 10.0, /*zero_constant=*/false, rng);
            balance = balance + q;
            perturbations.push_back(std::move(q));
        }
        perturbations.push_back(-balance);

        bool nontrivial = false;
        for (const auto& q : perturbations) nontrivial = nontrivial || !q.is_zero();
        if (!nontrivial) continue;

        ObjectiveVector alternative = objectives;
        for (std::size_t i = 0; i < good.size(); ++i) {
            auto agent = static_cast<std::size_t>(good[i]);
            alternative[agent] = alternative[agent] + perturbations[i];
        }
        return alternative;
    }
}

ConstructionResult construct_alternative_shares(const ObjectiveVector& objectives, const ShareAssignment& shares,
                                                const ObjectiveVector& alternative, const Topology& g,
                                                const std::set<int>& coalition, std::mt19937_64& rng, int ee_degree,
                                                double ee_bound) {
    const int S = g.node_count();
    if (static_cast<int>(objectives.size()) != S || static_cast<int>(alternative.size()) != S)
        throw std::invalid_argument("construct_alternative_shares: objective length does not match node count");
    validate_shares(shares, g);

    std::set<int> good;
    for (int v = 0; v < S; ++v)
        if (!coalition.contains(v)) good.insert(v);

    // Step 1: links touching the coalition are observable, so the alternative
    // execution must reuse the original shares there.
    ShareAssignment constructed;
    for (const auto& [link, share] : shares.shares)
        if (coalition.contains(link.from) || coalition.contains(link.to)) constructed.shares.emplace(link, share);

    // Step 2: spanning tree over the good agents; every other good-good link
    // gets an arbitrary polynomial.
    Topology stripped = delete_adversary_edges(g, coalition);
    std::vector<std::pair<int, int>> tree;
    try {
        tree = spanning_tree(stripped, good);
    } catch (const NotConnected&) {
        throw NotAdmissible(
            "good agents disconnect once coalition-incident links are removed; "
            "the topology's vertex connectivity must exceed the coalition size");
    }
    std::set<std::pair<int, int>> tree_set(tree.begin(), tree.end());

    const int degree = ee_degree > 0 ? ee_degree : default_degree(objectives, alternative, shares);
    for (const auto& link : g.directed_edges()) {
        if (constructed.shares.contains(link)) continue;
        // The low-to-high orientation of each tree edge stays unknown for the
        // solve below; everything else is free.
        if (link.from < link.to && tree_set.contains({link.from, link.to})) continue;
        constructed.shares.emplace(link, random_polynomial(degree, ee_bound, /*zero_constant=*/true, rng));
    }

    // Step 3: solve the tree incidence system for the remaining shares. The
    // right-hand side is the objective difference minus all fixed shares.
    ObjectiveVector obfuscated = obfuscate(objectives, shares, g);
    std::vector<Polynomial> rhs(static_cast<std::size_t>(S));
    for (int v = 0; v < S; ++v)
        rhs[static_cast<std::size_t>(v)] = obfuscated[static_cast<std::size_t>(v)] - alternative[static_cast<std::size_t>(v)];
    for (const auto& [link, share] : constructed.shares) {
        rhs[static_cast<std::size_t>(link.to)] = rhs[static_cast<std::size_t>(link.to)] - share;
        rhs[static_cast<std::size_t>(link.from)] = rhs[static_cast<std::size_t>(link.from)] + share;
    }

    // Coalition rows are fully pinned already and must vanish.
    for (int member : coalition)
        if (max_coefficient(rhs[static_cast<std::size_t>(member)]) > kResidualBound)
            throw InconsistentAlternative("alternative objectives disagree with the coalition's own functions");

    // Unit pivots: peel leaves toward the root. Parents in breadth-first
    // order from the smallest good agent, children eliminated first.
    std::vector<std::vector<int>> tree_adjacency(static_cast<std::size_t>(S));
    for (const auto& [a, b] : tree) {
        tree_adjacency[static_cast<std::size_t>(a)].push_back(b);
        tree_adjacency[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<int> order, parent(static_cast<std::size_t>(S), -1);
    if (!good.empty()) {
        std::vector<bool> visited(static_cast<std::size_t>(S), false);
        std::queue<int> frontier;
        frontier.push(*good.begin());
        visited[static_cast<std::size_t>(*good.begin())] = true;
        while (!frontier.empty()) {
            int u = frontier.front();
            frontier.pop();
            order.push_back(u);
            for (int v : tree_adjacency[static_cast<std::size_t>(u)]) {
                if (visited[static_cast<std::size_t>(v)]) continue;
                visited[static_cast<std::size_t>(v)] = true;
                parent[static_cast<std::size_t>(v)] = u;
                frontier.push(v);
            }
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        int u = parent[static_cast<std::size_t>(v)];
        if (u < 0) continue;  // root
        DirectedEdge unknown{std::min(u, v), std::max(u, v)};
        // Column sign at the eliminated row: +1 when v receives the link.
        Polynomial value = v == unknown.to ? rhs[static_cast<std::size_t>(v)] : -rhs[static_cast<std::size_t>(v)];
        rhs[static_cast<std::size_t>(u)] =
            u == unknown.to ? rhs[static_cast<std::size_t>(u)] - value : rhs[static_cast<std::size_t>(u)] + value;
        constructed.shares.emplace(unknown, std::move(value));
    }

    ConstructionResult result;
    result.shares = std::move(constructed);

    ObjectiveVector alt_obfuscated = obfuscate(alternative, result.shares, g);
    for (int v = 0; v < S; ++v)
        result.residual = std::max(result.residual, coefficient_distance(alt_obfuscated[static_cast<std::size_t>(v)],
                                                                         obfuscated[static_cast<std::size_t>(v)]));
    if (result.residual > kResidualBound)
        throw InconsistentAlternative("share reconstruction residual " + std::to_string(result.residual) +
                                      " exceeds " + std::to_string(kResidualBound) +
                                      "; the alternative objectives are not observation-compatible");

    result.verified = verify_indistinguishable(objectives, shares, alternative, result.shares, g, coalition);
    return result;
}

ObservableComparison compare_observables(const ObjectiveVector& objectives, const ShareAssignment& shares,
                                         const ObjectiveVector& alternative, const ShareAssignment& alt_shares,
                                         const Topology& g, const std::set<int>& coalition) {
    ObservableComparison comparison;
    ObjectiveVector lhs = obfuscate(objectives, shares, g);
    ObjectiveVector rhs = obfuscate(alternative, alt_shares, g);
    for (std::size_t v = 0; v < lhs.size(); ++v)
        comparison.obfuscated_gap = std::max(comparison.obfuscated_gap, coefficient_distance(lhs[v], rhs[v]));

    comparison.incident_shares_equal = true;
    for (const auto& [link, share] : shares.shares) {
        if (!coalition.contains(link.from) && !coalition.contains(link.to)) continue;
        if (!(alt_shares.shares.at(link) == share)) comparison.incident_shares_equal = false;
    }

    comparison.coalition_objectives_equal = true;
    for (int member : coalition)
        if (!(objectives[static_cast<std::size_t>(member)] == alternative[static_cast<std::size_t>(member)]))
            comparison.coalition_objectives_equal = false;
    return comparison;
}

bool verify_indistinguishable(const ObjectiveVector& objectives, const ShareAssignment& shares,
                              const ObjectiveVector& alternative, const ShareAssignment& alt_shares,
                              const Topology& g, const std::set<int>& coalition) {
    return compare_observables(objectives, shares, alternative, alt_shares, g, coalition).indistinguishable();
}

Scenario with_alternative(const ResolvedScenario& resolved, const ObjectiveVector& alternative,
                          const ShareAssignment& alt_shares) {
    Scenario scenario = resolved.scenario;
    scenario.objectives = alternative;
    scenario.shares = alt_shares;
    scenario.share_mode = Scenario::ShareMode::Explicit;
    if (!scenario.name.empty()) scenario.name += "-alternative";
    return scenario;
}

bool end_to_end_indistinguishable(const Scenario& a, const Scenario& b) {
    ResolvedScenario ra = resolve(a);
    ResolvedScenario rb = resolve(b);

    if (ra.scenario.topology.node_count() != rb.scenario.topology.node_count() ||
        ra.scenario.topology.edges() != rb.scenario.topology.edges())
        throw std::invalid_argument("end_to_end_indistinguishable: scenarios use different topologies");
    if (!exactly_equal(ra.mixing.entries, rb.mixing.entries))
        throw std::invalid_argument("end_to_end_indistinguishable: scenarios use different mixing weights");
    if (ra.scenario.step.numerator != rb.scenario.step.numerator ||
        ra.scenario.step.offset != rb.scenario.step.offset)
        throw std::invalid_argument("end_to_end_indistinguishable: scenarios use different step schedules");
    if (ra.scenario.iterations != rb.scenario.iterations)
        throw std::invalid_argument("end_to_end_indistinguishable: scenarios use different iteration counts");
    if (ra.initial_states != rb.initial_states)
        throw std::invalid_argument("end_to_end_indistinguishable: scenarios use different initial iterates");

    ExecutionTrace ta = run(ra);
    ExecutionTrace tb = run(rb);
    if (ta.rounds.size() != tb.rounds.size()) return false;
    for (std::size_t k = 0; k < ta.rounds.size(); ++k) {
        if (ta.rounds[k].fused != tb.rounds[k].fused) return false;
        if (ta.rounds[k].states != tb.rounds[k].states) return false;
    }
    return true;
}

}  // namespace privshare

#include "privshare/obfuscation.hpp"

#include <cmath>

namespace privshare {

ShareAssignment generate_shares(const Topology& g, int degree, double coeff_bound, std::mt19937_64& rng) {
    if (degree < 1) throw std::invalid_argument("generate_shares: degree must be at least 1");
    ShareAssignment assignment;
    auto links = g.directed_edges();
    std::sort(links.begin(), links.end());
    for (const auto& link : links)
        assignment.shares.emplace(link, random_polynomial(degree, coeff_bound, /*zero_constant=*/true, rng));
    return assignment;
}

ShareAssignment zero_shares(const Topology& g) {
    ShareAssignment assignment;
    for (const auto& link : g.directed_edges()) assignment.shares.emplace(link, Polynomial{});
    return assignment;
}

void validate_shares(const ShareAssignment& shares, const Topology& g) {
    auto links = g.directed_edges();
    if (shares.shares.size() != links.size())
        throw std::invalid_argument("shares: expected " + std::to_string(links.size()) + " directed-edge entries, got " +
                                    std::to_string(shares.shares.size()));
    for (const auto& link : links)
        if (!shares.shares.contains(link))
            throw std::invalid_argument("shares: missing entry for link (" + std::to_string(link.from) + "," +
                                        std::to_string(link.to) + ")");
}

ObjectiveVector obfuscate(const ObjectiveVector& objectives, const ShareAssignment& shares, const Topology& g) {
    if (static_cast<int>(objectives.size()) != g.node_count())
        throw std::invalid_argument("obfuscate: objective count does not match node count");
    validate_shares(shares, g);

    ObjectiveVector out = objectives;
    // Map iteration is ordered by (from, to), so the summation order is fixed.
    for (const auto& [link, share] : shares.shares) {
        out[static_cast<std::size_t>(link.to)] = out[static_cast<std::size_t>(link.to)] + share;
        out[static_cast<std::size_t>(link.from)] = out[static_cast<std::size_t>(link.from)] - share;
    }
    return out;
}

Polynomial aggregate(const ObjectiveVector& objectives) {
    Polynomial total;
    for (const auto& f : objectives) total = total + f;
    return total;
}

bool check_invariant(const ObjectiveVector& objectives, const ObjectiveVector& obfuscated) {
    if (objectives.size() != obfuscated.size())
        throw std::invalid_argument("check_invariant: objective vectors differ in length");
    return aggregate(objectives) == aggregate(obfuscated);
}

AssumptionReport validate_assumptions(const ObjectiveVector& objectives, const FeasibleSet& feasible, int samples) {
    feasible.validate();
    if (samples < 2) throw std::invalid_argument("validate_assumptions: need at least two samples");

    AssumptionReport report;
    report.agents.resize(objectives.size());
    Polynomial total = aggregate(objectives);
    Polynomial total_curvature = total.derivative().derivative();

    std::vector<Polynomial> gradients, curvatures;
    gradients.reserve(objectives.size());
    curvatures.reserve(objectives.size());
    for (const auto& f : objectives) {
        gradients.push_back(f.derivative());
        curvatures.push_back(gradients.back().derivative());
    }

    for (int i = 0; i < samples; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(samples - 1);
        double x = feasible.lower + t * feasible.width();
        for (std::size_t a = 0; a < objectives.size(); ++a) {
            report.agents[a].gradient_bound = std::max(report.agents[a].gradient_bound, std::abs(gradients[a](x)));
            report.agents[a].gradient_lipschitz =
                std::max(report.agents[a].gradient_lipschitz, std::abs(curvatures[a](x)));
        }
        if (total_curvature(x) < 0.0) report.aggregate_convex = false;
    }
    return report;
}

}  // namespace privshare

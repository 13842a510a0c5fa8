#include "privshare/topology.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace privshare {
namespace {

// Unit-capacity max-flow (Edmonds-Karp). Small graphs only.
class FlowNetwork {
public:
    explicit FlowNetwork(int nodes) : head_(nodes, -1) {}

    void add_arc(int from, int to, int capacity) {
        arcs_.push_back({to, head_[from], capacity});
        head_[from] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({from, head_[to], 0});
        head_[to] = static_cast<int>(arcs_.size()) - 1;
    }

    int max_flow(int source, int sink) {
        int total = 0;
        while (true) {
            std::vector<int> via(head_.size(), -1);
            std::queue<int> frontier;
            frontier.push(source);
            std::vector<bool> seen(head_.size(), false);
            seen[source] = true;
            while (!frontier.empty() && !seen[sink]) {
                int u = frontier.front();
                frontier.pop();
                for (int a = head_[u]; a != -1; a = arcs_[a].next) {
                    if (arcs_[a].capacity <= 0 || seen[arcs_[a].to]) continue;
                    seen[arcs_[a].to] = true;
                    via[arcs_[a].to] = a;
                    frontier.push(arcs_[a].to);
                }
            }
            if (!seen[sink]) return total;
            int bottleneck = std::numeric_limits<int>::max();
            for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to)
                bottleneck = std::min(bottleneck, arcs_[via[v]].capacity);
            for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
                arcs_[via[v]].capacity -= bottleneck;
                arcs_[via[v] ^ 1].capacity += bottleneck;
            }
            total += bottleneck;
        }
    }

private:
    struct Arc {
        int to;
        int next;
        int capacity;
    };
    std::vector<int> head_;
    std::vector<Arc> arcs_;
};

// Minimum vertex cut between non-adjacent s and t: split every vertex into
// in/out halves joined by a unit arc and run max-flow from s_out to t_in.
int vertex_cut(const Topology& g, int s, int t) {
    const int S = g.node_count();
    const int big = S + 1;
    FlowNetwork net(2 * S);
    for (int v = 0; v < S; ++v) net.add_arc(2 * v, 2 * v + 1, v == s || v == t ? big : 1);
    for (const auto& [a, b] : g.edges()) {
        net.add_arc(2 * a + 1, 2 * b, big);
        net.add_arc(2 * b + 1, 2 * a, big);
    }
    return net.max_flow(2 * s + 1, 2 * t);
}

std::vector<std::vector<int>> connected_components(const Topology& g, const std::set<int>& over) {
    std::vector<std::vector<int>> components;
    std::set<int> pending = over;
    while (!pending.empty()) {
        std::vector<int> component;
        std::queue<int> frontier;
        frontier.push(*pending.begin());
        pending.erase(pending.begin());
        while (!frontier.empty()) {
            int u = frontier.front();
            frontier.pop();
            component.push_back(u);
            for (int v : g.neighbors(u)) {
                auto it = pending.find(v);
                if (it == pending.end()) continue;
                pending.erase(it);
                frontier.push(v);
            }
        }
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
    }
    return components;
}

}  // namespace

Topology::Topology(int node_count, const std::vector<std::pair<int, int>>& edges) : node_count_(node_count) {
    if (node_count < 0) throw std::invalid_argument("topology: negative node count");
    adjacency_.resize(static_cast<std::size_t>(node_count));
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : edges) {
        if (a == b) throw std::invalid_argument("topology: self-loop at node " + std::to_string(a));
        if (a < 0 || b < 0 || a >= node_count || b >= node_count)
            throw std::invalid_argument("topology: edge endpoint out of range");
        auto e = std::minmax(a, b);
        if (!seen.insert({e.first, e.second}).second)
            throw std::invalid_argument("topology: duplicate edge {" + std::to_string(e.first) + "," +
                                        std::to_string(e.second) + "}");
    }
    edges_.assign(seen.begin(), seen.end());
    for (const auto& [a, b] : edges_) {
        adjacency_[static_cast<std::size_t>(a)].push_back(b);
        adjacency_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

std::vector<DirectedEdge> Topology::directed_edges() const {
    std::vector<DirectedEdge> out;
    out.reserve(edges_.size() * 2);
    for (const auto& [a, b] : edges_) out.push_back({a, b});
    for (const auto& [a, b] : edges_) out.push_back({b, a});
    return out;
}

bool Topology::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges_.begin(), edges_.end(), std::pair{a, b});
}

const std::vector<int>& Topology::neighbors(int v) const {
    return adjacency_.at(static_cast<std::size_t>(v));
}

bool Topology::is_connected() const {
    if (node_count_ <= 1) return true;
    std::set<int> all;
    for (int v = 0; v < node_count_; ++v) all.insert(v);
    return connected_components(*this, all).size() == 1;
}

int min_degree(const Topology& g) {
    if (g.node_count() == 0) return 0;
    int best = std::numeric_limits<int>::max();
    for (int v = 0; v < g.node_count(); ++v) best = std::min(best, g.degree(v));
    return best;
}

int vertex_connectivity(const Topology& g) {
    const int S = g.node_count();
    if (S < 2) throw std::invalid_argument("vertex_connectivity: need at least two nodes");
    if (!g.is_connected()) throw Disconnected("vertex_connectivity: graph is not connected");
    const auto edge_count = static_cast<long long>(g.edges().size());
    if (edge_count == static_cast<long long>(S) * (S - 1) / 2) return S - 1;

    int best = std::numeric_limits<int>::max();
    for (int s = 0; s < S; ++s)
        for (int t = s + 1; t < S; ++t)
            if (!g.has_edge(s, t)) best = std::min(best, vertex_cut(g, s, t));
    return best;
}

int edge_connectivity(const Topology& g) {
    const int S = g.node_count();
    if (S < 2) throw std::invalid_argument("edge_connectivity: need at least two nodes");
    if (!g.is_connected()) throw Disconnected("edge_connectivity: graph is not connected");
    int best = std::numeric_limits<int>::max();
    for (int t = 1; t < S; ++t) {
        FlowNetwork net(S);
        for (const auto& [a, b] : g.edges()) {
            net.add_arc(a, b, 1);
            net.add_arc(b, a, 1);
        }
        best = std::min(best, net.max_flow(0, t));
    }
    return best;
}

bool is_f_admissible(const Topology& g, int f) {
    return vertex_connectivity(g) > f;
}

Topology delete_adversary_edges(const Topology& g, const std::set<int>& coalition) {
    std::vector<std::pair<int, int>> kept;
    for (const auto& [a, b] : g.edges())
        if (!coalition.contains(a) && !coalition.contains(b)) kept.push_back({a, b});
    return Topology(g.node_count(), kept);
}

std::vector<std::pair<int, int>> spanning_tree(const Topology& g, const std::set<int>& over) {
    std::vector<std::pair<int, int>> tree;
    if (over.empty()) return tree;
    std::set<int> pending = over;
    std::queue<int> frontier;
    frontier.push(*pending.begin());
    pending.erase(pending.begin());
    while (!frontier.empty()) {
        int u = frontier.front();
        frontier.pop();
        for (int v : g.neighbors(u)) {
            auto it = pending.find(v);
            if (it == pending.end()) continue;
            pending.erase(it);
            tree.push_back(std::minmax(u, v));
            frontier.push(v);
        }
    }
    if (!pending.empty()) throw NotConnected("spanning_tree: induced subgraph is not connected");
    std::sort(tree.begin(), tree.end());
    return tree;
}

IncidenceMatrix incidence_matrix(const Topology& g) {
    IncidenceMatrix inc;
    inc.columns = g.directed_edges();
    inc.matrix = Eigen::MatrixXd::Zero(g.node_count(), static_cast<Eigen::Index>(inc.columns.size()));
    for (std::size_t c = 0; c < inc.columns.size(); ++c) {
        const auto& e = inc.columns[c];
        inc.matrix(e.to, static_cast<Eigen::Index>(c)) = 1.0;
        inc.matrix(e.from, static_cast<Eigen::Index>(c)) = -1.0;
        inc.column_index[e] = static_cast<int>(c);
    }
    return inc;
}

MixingMatrix metropolis_mixing(const Topology& g) {
    if (!g.is_connected()) throw Disconnected("metropolis_mixing: graph is not connected");
    const int S = g.node_count();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(S, S);
    for (const auto& [a, b] : g.edges()) {
        double entry = 1.0 / (1.0 + std::max(g.degree(a), g.degree(b)));
        w(a, b) = entry;
        w(b, a) = entry;
    }
    for (int v = 0; v < S; ++v) w(v, v) = 1.0 - w.row(v).sum();

    MixingMatrix mix{std::move(w), std::numeric_limits<double>::infinity()};
    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
            if (mix.entries(i, j) > 0.0) mix.eta = std::min(mix.eta, mix.entries(i, j));
    return mix;
}

MixingMatrix validated_mixing(const Eigen::MatrixXd& entries, const Topology& g) {
    const int S = g.node_count();
    if (entries.rows() != S || entries.cols() != S)
        throw std::invalid_argument("mixing: matrix must be " + std::to_string(S) + "x" + std::to_string(S));
    double eta = std::numeric_limits<double>::infinity();
    for (int i = 0; i < S; ++i) {
        for (int j = 0; j < S; ++j) {
            double v = entries(i, j);
            if (v < 0.0)
                throw std::invalid_argument("mixing: negative entry at (" + std::to_string(i) + "," +
                                            std::to_string(j) + ")");
            bool allowed = i == j || g.has_edge(i, j);
            if (v > 0.0 && !allowed)
                throw std::invalid_argument("mixing: positive entry at (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") without a communication link");
            if (v == 0.0 && allowed)
                throw std::invalid_argument("mixing: zero entry at (" + std::to_string(i) + "," + std::to_string(j) +
                                            ") despite a communication link");
            if (v > 0.0) eta = std::min(eta, v);
        }
        if (std::abs(entries.row(i).sum() - 1.0) > 1e-12)
            throw std::invalid_argument("mixing: row " + std::to_string(i) + " does not sum to 1");
        if (std::abs(entries.col(i).sum() - 1.0) > 1e-12)
            throw std::invalid_argument("mixing: column " + std::to_string(i) + " does not sum to 1");
    }
    return MixingMatrix{entries, eta};
}

PrivacyFailureReport detect_privacy_failures(const Topology& g, const std::set<int>& coalition) {
    PrivacyFailureReport report;
    const int f = static_cast<int>(coalition.size());
    std::set<int> good;
    for (int v = 0; v < g.node_count(); ++v)
        if (!coalition.contains(v)) good.insert(v);

    for (int v : good)
        if (g.degree(v) < f + 1) report.individual.push_back(v);

    Topology stripped = delete_adversary_edges(g, coalition);
    auto components = connected_components(stripped, good);
    if (components.size() > 1) report.groups = std::move(components);
    return report;
}

}  // namespace privshare

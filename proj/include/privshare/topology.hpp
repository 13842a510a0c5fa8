#pragma once

#include <Eigen/Dense>
#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace privshare {

/// Directed communication link from one agent to another.
struct DirectedEdge {
    int from = 0;
    int to = 0;
    auto operator<=>(const DirectedEdge&) const = default;
};

struct Disconnected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotConnected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Undirected agent graph. Edges are stored normalized (low id, high id) and
/// sorted; self-loops and duplicates are rejected. Immutable after
/// construction.
class Topology {
public:
    Topology() = default;
    Topology(int node_count, const std::vector<std::pair<int, int>>& edges);

    int node_count() const { return node_count_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    /// Both directions of every undirected edge, in incidence-matrix column
    /// order: all low-to-high orientations first, then their reversals.
    std::vector<DirectedEdge> directed_edges() const;

    bool has_edge(int a, int b) const;
    const std::vector<int>& neighbors(int v) const;
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
    bool is_connected() const;

private:
    int node_count_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
};

int min_degree(const Topology& g);

/// Vertex connectivity of a connected graph, computed as the minimum over
/// non-adjacent node pairs of the node-split max-flow; a complete graph on S
/// nodes yields S-1. Throws Disconnected when the graph is not connected.
int vertex_connectivity(const Topology& g);

/// Edge connectivity via unit-capacity max-flow from node 0 to every other
/// node. Throws Disconnected when the graph is not connected.
int edge_connectivity(const Topology& g);

/// True when vertex connectivity exceeds f.
bool is_f_admissible(const Topology& g, int f);

/// Subgraph on the same node ids with every edge touching a coalition node
/// removed; coalition nodes become isolated.
Topology delete_adversary_edges(const Topology& g, const std::set<int>& coalition);

/// Deterministic spanning tree of the subgraph induced by `over`, built by
/// breadth-first search from the smallest node id. Throws NotConnected when
/// the induced subgraph is not connected.
std::vector<std::pair<int, int>> spanning_tree(const Topology& g, const std::set<int>& over);

/// Signed incidence matrix of the bidirected graph. Columns follow
/// Topology::directed_edges(): for the column of link (I,J) the receiver row
/// J holds +1 and the sender row I holds -1.
struct IncidenceMatrix {
    Eigen::MatrixXd matrix;
    std::vector<DirectedEdge> columns;
    std::map<DirectedEdge, int> column_index;

    int column_of(const DirectedEdge& e) const { return column_index.at(e); }
};

IncidenceMatrix incidence_matrix(const Topology& g);

/// Doubly stochastic consensus weights. eta is the smallest nonzero entry.
struct MixingMatrix {
    Eigen::MatrixXd entries;
    double eta = 0.0;

    double weight(int row, int col) const { return entries(row, col); }
};

/// Metropolis-Hastings weights: for edge {I,J} the off-diagonal entry is
/// 1/(1+max(deg I, deg J)), diagonals absorb the remainder.
MixingMatrix metropolis_mixing(const Topology& g);

/// Wraps an explicit matrix after checking the mixing invariants: square of
/// size S, entries nonnegative, rows and columns summing to 1 within 1e-12,
/// and positivity exactly on the diagonal and the topology's edges. Throws
/// std::invalid_argument naming the violated invariant.
MixingMatrix validated_mixing(const Eigen::MatrixXd& entries, const Topology& g);

/// Topology findings for a coalition of passive-curious agents: good nodes
/// whose degree is below |coalition|+1 lose individual privacy; when removing
/// coalition-incident edges splits the good nodes, each connected component's
/// aggregate objective leaks.
struct PrivacyFailureReport {
    std::vector<int> individual;
    std::vector<std::vector<int>> groups;

    bool empty() const { return individual.empty() && groups.empty(); }
};

PrivacyFailureReport detect_privacy_failures(const Topology& g, const std::set<int>& coalition);

}  // namespace privshare

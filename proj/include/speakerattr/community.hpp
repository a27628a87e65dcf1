#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "speakerattr/annotation.hpp"
#include "speakerattr/graph.hpp"

namespace speakerattr {

// Weighted undirected graph as a symmetric adjacency list. A self-loop (u, u, w)
// is stored once in adj[u] and counts once toward u's degree.
struct UndirectedGraph {
  std::size_t node_count = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;

  static UndirectedGraph from_edges(std::size_t node_count,
                                    std::span<const std::tuple<std::size_t, std::size_t, double>> edges);
  double degree(std::size_t node) const;
  double total_degree() const;  // 2m
};

// Both directions of the mention counts summed into one undirected weight.
UndirectedGraph symmetrize(const MentionGraph& graph);

// Q = (1/2m) sum_ij [A_ij - gamma k_i k_j / 2m] delta(c_i, c_j).
double modularity(const UndirectedGraph& graph, std::span<const std::size_t> community, double resolution = 1.0);

struct Partition {
  std::vector<std::size_t> community;  // per node, labels 0.. in order of first appearance
  std::size_t community_count = 0;
  double modularity = 0.0;

  std::vector<std::size_t> sizes() const;
};

// Multilevel local moving with aggregation. Node visit order within each level is
// a seeded shuffle, so the result is a function of (graph, seed). Throws on a graph
// without edges.
Partition louvain(const UndirectedGraph& graph, std::uint64_t seed = 0, double resolution = 1.0);

// Plot-ready view of the mention graph: the `top_n` partners with most messages
// (plus the author), edges with at least `edge_threshold` mentions between them.
// Cluster ids come from a partition of the full graph computed beforehand.
struct DisplayNode {
  std::string id;
  std::size_t cluster = 0;
  std::string shape;      // circle: family, rectangle: school, triangle: work, ellipse: other
  double recency = 0.0;   // 0 = earliest first contact among shown partners, 1 = latest
  std::size_t messages = 0;
};

struct DisplayEdge {
  std::string source;
  std::string target;
  std::size_t count = 0;
  double weight = 0.0;
};

struct GraphExport {
  std::vector<DisplayNode> nodes;
  std::vector<DisplayEdge> edges;
  std::size_t community_count = 0;
  double modularity = 0.0;
};

inline constexpr std::size_t kDisplayTopN = 20;
inline constexpr std::size_t kDisplayEdgeThreshold = 25;

GraphExport display_subgraph(const MentionGraph& graph, const Partition& partition, const Corpus& corpus,
                             const AnnotationSet* annotations, WeightMode mode, std::size_t top_n = kDisplayTopN,
                             std::size_t edge_threshold = kDisplayEdgeThreshold);

// Tab-separated records, see docs/formats.md:
//   node <id> <cluster> <shape> <recency> <messages>
//   edge <src> <dst> <count> <weight>
void write_graph_export(std::ostream& out, const GraphExport& view);
// Full directed edge list "src dst count weight".
void write_edge_list(std::ostream& out, const MentionGraph& graph, WeightMode mode);

}  // namespace speakerattr

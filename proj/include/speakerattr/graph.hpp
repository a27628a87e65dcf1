#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "speakerattr/corpus.hpp"

namespace speakerattr {

// speaker id -> lowercase name tokens that count as a mention of that speaker.
// File: one line per speaker, "speaker_id<TAB>alias[,alias...]"; '#' comments.
struct AliasTable {
  std::map<std::string, std::vector<std::string>> aliases;
};

AliasTable read_aliases(std::istream& in, const std::string& source_name);
AliasTable load_aliases(const std::filesystem::path& path);
void write_aliases(std::ostream& out, const AliasTable& table);

// Node order used everywhere a node index appears: author first, then partners
// in corpus order.
std::vector<std::string> graph_nodes(const Corpus& corpus);

struct MentionGraph {
  std::vector<std::string> nodes;
  // (i, j) -> number of messages sent by i that mention j. Only positive counts stored.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> counts;
  std::size_t w_max = 0;
  std::size_t w_min = 0;
  std::vector<std::string> warnings;

  std::optional<std::size_t> index_of(std::string_view id) const;
  std::size_t count(std::size_t from, std::size_t to) const;
  // True when the node has at least one stored edge in either direction.
  bool touches_edge(std::size_t node) const;
};

// Counts, once per message, every alias of a speaker j in a message sent by i,
// skipping j == i and j == the other participant of that conversation. Only the
// given conversations contribute; the node set is graph_nodes(corpus).
MentionGraph build_mention_graph(const Corpus& corpus, std::span<const Conversation* const> conversations,
                                 const AliasTable& aliases);
MentionGraph build_mention_graph(const Corpus& corpus, const AliasTable& aliases);

// `inverted` gives (w_max - M) / (w_max - w_min): more mentions, cheaper edge.
// `paper_formula` gives 1 - (w_max - M) / (w_max - w_min). With w_max == w_min
// every stored edge weighs 1 in both modes.
enum class WeightMode { inverted, paper_formula };

WeightMode parse_weight_mode(std::string_view name);
double mention_weight(std::size_t mentions, std::size_t w_min, std::size_t w_max, WeightMode mode);

struct WeightedGraph {
  std::size_t node_count = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> out;  // sorted by target
};

WeightedGraph edge_weights(const MentionGraph& graph, WeightMode mode);

// Same edges pointing the other way.
WeightedGraph reversed(const WeightedGraph& graph);

// Which distances describe a partner: `outgoing` is the partner's row of the
// distance matrix (paths from the partner), `incoming` the paths to the partner
// (the row of the reversed graph). A partner's incoming mentions never come
// from its own conversation, so incoming rows stay informative when that
// conversation is held out.
enum class GraphOrientation { incoming, outgoing };
GraphOrientation parse_graph_orientation(std::string_view name);
std::string_view graph_orientation_name(GraphOrientation o);
// Edge weights in the requested orientation.
WeightedGraph oriented_weights(const MentionGraph& graph, WeightMode mode, GraphOrientation orientation);

// All-pairs shortest path costs. Unreachable pairs hold `sentinel`, which is one
// more than the largest finite distance in the matrix.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> reachable;
  double sentinel = 1.0;

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  bool is_reachable(std::size_t i, std::size_t j) const { return reachable[i * n + j] != 0; }
  std::span<const double> row(std::size_t i) const { return std::span<const double>(values).subspan(i * n, n); }
  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;
};

// Dijkstra from every source; sources run in parallel under OpenMP.
DistanceMatrix shortest_paths(const WeightedGraph& graph);
// Reference implementation with the same output, one source after another.
DistanceMatrix shortest_paths_serial(const WeightedGraph& graph);

}  // namespace speakerattr

#include "speakerattr/graph.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <unordered_map>

#include "speakerattr/common.hpp"

namespace speakerattr {

AliasTable read_aliases(std::istream& in, const std::string& source_name) {
  AliasTable table;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto tab = raw.find('\t');
    if (tab == std::string::npos) throw ParseError(source_name, line_no, "expected 'speaker_id<TAB>alias[,alias...]'");
    std::string id = trim(std::string_view(raw).substr(0, tab));
    if (id.empty()) throw ParseError(source_name, line_no, "empty speaker id");
    auto& list = table.aliases[id];
    for (const auto& a : split(std::string_view(raw).substr(tab + 1), ',')) {
      std::string alias = to_lower_ascii(trim(a));
      if (!alias.empty() && std::find(list.begin(), list.end(), alias) == list.end()) list.push_back(alias);
    }
  }
  return table;
}

AliasTable load_aliases(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open alias file " + path.string());
  return read_aliases(in, path.string());
}

void write_aliases(std::ostream& out, const AliasTable& table) {
  out << "# speaker_id<TAB>aliases\n";
  for (const auto& [id, list] : table.aliases) {
    out << id << '\t';
    for (std::size_t i = 0; i < list.size(); ++i) out << (i ? "," : "") << list[i];
    out << '\n';
  }
}

std::vector<std::string> graph_nodes(const Corpus& corpus) {
  std::vector<std::string> nodes{corpus.author_id};
  for (const auto& c : corpus.conversations) nodes.push_back(c.partner_id);
  return nodes;
}

std::optional<std::size_t> MentionGraph::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == id) return i;
  }
  return std::nullopt;
}

std::size_t MentionGraph::count(std::size_t from, std::size_t to) const {
  auto it = counts.find({from, to});
  return it == counts.end() ? 0 : it->second;
}

bool MentionGraph::touches_edge(std::size_t node) const {
  for (const auto& [edge, c] : counts) {
    if (edge.first == node || edge.second == node) return true;
  }
  return false;
}

MentionGraph build_mention_graph(const Corpus& corpus, std::span<const Conversation* const> conversations,
                                 const AliasTable& aliases) {
  MentionGraph g;
  g.nodes = graph_nodes(corpus);
  std::unordered_map<std::string, std::size_t> node_index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) node_index[g.nodes[i]] = i;

  std::unordered_map<std::string, std::vector<std::size_t>> alias_owner;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    auto it = aliases.aliases.find(g.nodes[i]);
    if (it == aliases.aliases.end() || it->second.empty()) {
      g.warnings.push_back("speaker '" + g.nodes[i] + "' has no aliases and cannot be mentioned");
      continue;
    }
    for (const auto& a : it->second) alias_owner[a].push_back(i);
  }

  std::vector<std::size_t> mentioned;
  for (const Conversation* conv : conversations) {
    const std::size_t partner = node_index.at(conv->partner_id);
    for (const Message& m : conv->messages) {
      const std::size_t sender = m.is_author ? 0 : partner;
      const std::size_t recipient = m.is_author ? partner : 0;
      mentioned.clear();
      for (const auto& tok : m.tokens) {
        auto it = alias_owner.find(tok);
        if (it == alias_owner.end()) continue;
        for (std::size_t j : it->second) {
          if (j != sender && j != recipient) mentioned.push_back(j);
        }
      }
      std::sort(mentioned.begin(), mentioned.end());
      mentioned.erase(std::unique(mentioned.begin(), mentioned.end()), mentioned.end());
      for (std::size_t j : mentioned) ++g.counts[{sender, j}];
    }
  }
  if (!g.counts.empty()) {
    g.w_min = std::numeric_limits<std::size_t>::max();
    for (const auto& [edge, c] : g.counts) {
      g.w_max = std::max(g.w_max, c);
      g.w_min = std::min(g.w_min, c);
    }
  }
  return g;
}

MentionGraph build_mention_graph(const Corpus& corpus, const AliasTable& aliases) {
  std::vector<const Conversation*> all;
  for (const auto& c : corpus.conversations) all.push_back(&c);
  return build_mention_graph(corpus, all, aliases);
}

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "inverted") return WeightMode::inverted;
  if (name == "paper_formula" || name == "formula") return WeightMode::paper_formula;
  throw Error("unknown weight mode '" + std::string(name) + "' (expected inverted or paper_formula)");
}

double mention_weight(std::size_t mentions, std::size_t w_min, std::size_t w_max, WeightMode mode) {
  if (w_max <= w_min) return 1.0;
  double frac = static_cast<double>(w_max - mentions) / static_cast<double>(w_max - w_min);
  return mode == WeightMode::inverted ? frac : 1.0 - frac;
}

WeightedGraph edge_weights(const MentionGraph& graph, WeightMode mode) {
  WeightedGraph w;
  w.node_count = graph.nodes.size();
  w.out.resize(w.node_count);
  for (const auto& [edge, c] : graph.counts) {
    w.out[edge.first].emplace_back(edge.second, mention_weight(c, graph.w_min, graph.w_max, mode));
  }
  return w;
}

WeightedGraph reversed(const WeightedGraph& graph) {
  WeightedGraph r;
  r.node_count = graph.node_count;
  r.out.resize(graph.node_count);
  for (std::size_t u = 0; u < graph.out.size(); ++u) {
    for (const auto& [v, w] : graph.out[u]) r.out[v].emplace_back(u, w);
  }
  for (auto& edges : r.out) std::sort(edges.begin(), edges.end());
  return r;
}

GraphOrientation parse_graph_orientation(std::string_view name) {
  const std::string n = to_lower_ascii(trim(name));
  if (n == "incoming") return GraphOrientation::incoming;
  if (n == "outgoing") return GraphOrientation::outgoing;
  throw Error("unknown graph orientation '" + std::string(name) + "' (expected incoming or outgoing)");
}

std::string_view graph_orientation_name(GraphOrientation o) {
  return o == GraphOrientation::incoming ? "incoming" : "outgoing";
}

WeightedGraph oriented_weights(const MentionGraph& graph, WeightMode mode, GraphOrientation orientation) {
  WeightedGraph w = edge_weights(graph, mode);
  return orientation == GraphOrientation::incoming ? reversed(w) : w;
}

namespace {

void check_weights(const WeightedGraph& graph) {
  for (const auto& edges : graph.out) {
    for (const auto& [to, w] : edges) {
      if (w < 0.0 || std::isnan(w)) throw Error("shortest paths need non-negative edge weights");
      if (to >= graph.node_count) throw Error("edge target out of range");
    }
  }
}

void dijkstra_row(const WeightedGraph& graph, std::size_t source, double* dist, std::uint8_t* seen) {
  const double inf = std::numeric_limits<double>::infinity();
  std::fill(dist, dist + graph.node_count, inf);
  std::fill(seen, seen + graph.node_count, std::uint8_t{0});
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (seen[u]) continue;
    seen[u] = 1;
    for (const auto& [v, w] : graph.out[u]) {
      double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
}

void apply_sentinel(DistanceMatrix& m) {
  double max_finite = 0.0;
  for (std::size_t k = 0; k < m.values.size(); ++k) {
    if (m.reachable[k]) max_finite = std::max(max_finite, m.values[k]);
  }
  m.sentinel = 1.0 + max_finite;
  for (std::size_t k = 0; k < m.values.size(); ++k) {
    if (!m.reachable[k]) m.values[k] = m.sentinel;
  }
}

DistanceMatrix allocate(const WeightedGraph& graph) {
  DistanceMatrix m;
  m.n = graph.node_count;
  m.values.assign(m.n * m.n, 0.0);
  m.reachable.assign(m.n * m.n, 0);
  return m;
}

}  // namespace

DistanceMatrix shortest_paths_serial(const WeightedGraph& graph) {
  check_weights(graph);
  DistanceMatrix m = allocate(graph);
  for (std::size_t s = 0; s < m.n; ++s) dijkstra_row(graph, s, m.values.data() + s * m.n, m.reachable.data() + s * m.n);
  apply_sentinel(m);
  return m;
}

DistanceMatrix shortest_paths(const WeightedGraph& graph) {
  check_weights(graph);
  DistanceMatrix m = allocate(graph);
  const auto n = static_cast<std::ptrdiff_t>(m.n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    const auto row = static_cast<std::size_t>(s) * m.n;
    dijkstra_row(graph, static_cast<std::size_t>(s), m.values.data() + row, m.reachable.data() + row);
  }
  apply_sentinel(m);
  return m;
}

}  // namespace speakerattr

#include "speakerattr/community.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

#include "speakerattr/common.hpp"

namespace speakerattr {

UndirectedGraph UndirectedGraph::from_edges(std::size_t node_count,
                                            std::span<const std::tuple<std::size_t, std::size_t, double>> edges) {
  UndirectedGraph g;
  g.node_count = node_count;
  g.adj.resize(node_count);
  for (const auto& [u, v, w] : edges) {
    if (u >= node_count || v >= node_count) throw Error("edge endpoint out of range");
    if (w < 0.0) throw Error("modularity needs non-negative edge weights");
    g.adj[u].emplace_back(v, w);
    if (u != v) g.adj[v].emplace_back(u, w);
  }
  return g;
}

double UndirectedGraph::degree(std::size_t node) const {
  double k = 0.0;
  for (const auto& [v, w] : adj[node]) k += w;
  return k;
}

double UndirectedGraph::total_degree() const {
  double m2 = 0.0;
  for (std::size_t i = 0; i < node_count; ++i) m2 += degree(i);
  return m2;
}

UndirectedGraph symmetrize(const MentionGraph& graph) {
  std::map<std::pair<std::size_t, std::size_t>, double> merged;
  for (const auto& [edge, c] : graph.counts) {
    auto key = std::minmax(edge.first, edge.second);
    merged[{key.first, key.second}] += static_cast<double>(c);
  }
  std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
  for (const auto& [e, w] : merged) edges.emplace_back(e.first, e.second, w);
  return UndirectedGraph::from_edges(graph.nodes.size(), edges);
}

double modularity(const UndirectedGraph& graph, std::span<const std::size_t> community, double resolution) {
  if (community.size() != graph.node_count) throw Error("partition size does not match node count");
  const double m2 = graph.total_degree();
  if (m2 <= 0.0) throw Error("modularity of a graph without edges");
  std::size_t labels = 0;
  for (std::size_t c : community) labels = std::max(labels, c + 1);
  std::vector<double> inside(labels, 0.0), total(labels, 0.0);
  for (std::size_t u = 0; u < graph.node_count; ++u) {
    for (const auto& [v, w] : graph.adj[u]) {
      total[community[u]] += w;
      if (community[u] == community[v]) inside[community[u]] += w;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < labels; ++c) q += inside[c] / m2 - resolution * (total[c] / m2) * (total[c] / m2);
  return q;
}

std::vector<std::size_t> Partition::sizes() const {
  std::vector<std::size_t> out(community_count, 0);
  for (std::size_t c : community) ++out[c];
  return out;
}

namespace {

// One level of local moving. Returns the community of each node, relabelled densely.
std::vector<std::size_t> local_moving(const UndirectedGraph& g, double m2, double resolution, Rng& rng, bool& improved) {
  const std::size_t n = g.node_count;
  std::vector<std::size_t> comm(n);
  std::vector<double> k(n), tot(n);
  for (std::size_t i = 0; i < n; ++i) {
    comm[i] = i;
    k[i] = g.degree(i);
    tot[i] = k[i];
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);

  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  improved = false;
  for (int pass = 0; pass < 1000; ++pass) {
    bool moved = false;
    for (std::size_t i : order) {
      touched.clear();
      for (const auto& [v, w] : g.adj[i]) {
        if (v == i) continue;
        std::size_t c = comm[v];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      const std::size_t old = comm[i];
      tot[old] -= k[i];
      std::size_t best = old;
      double best_gain = link[old] - resolution * tot[old] * k[i] / m2;
      for (std::size_t c : touched) {
        double gain = link[c] - resolution * tot[c] * k[i] / m2;
        if (gain > best_gain + 1e-12) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += k[i];
      comm[i] = best;
      if (best != old) moved = improved = true;
      for (std::size_t c : touched) link[c] = 0.0;
      link[old] = 0.0;
    }
    if (!moved) break;
  }
  std::vector<std::size_t> relabel(n, n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (relabel[comm[i]] == n) relabel[comm[i]] = next++;
    comm[i] = relabel[comm[i]];
  }
  return comm;
}

UndirectedGraph aggregate(const UndirectedGraph& g, const std::vector<std::size_t>& comm, std::size_t count) {
  std::vector<std::map<std::size_t, double>> rows(count);
  for (std::size_t u = 0; u < g.node_count; ++u) {
    for (const auto& [v, w] : g.adj[u]) rows[comm[u]][comm[v]] += w;
  }
  UndirectedGraph out;
  out.node_count = count;
  out.adj.resize(count);
  for (std::size_t c = 0; c < count; ++c) {
    for (const auto& [d, w] : rows[c]) out.adj[c].emplace_back(d, w);
  }
  return out;
}

}  // namespace

Partition louvain(const UndirectedGraph& graph, std::uint64_t seed, double resolution) {
  const double m2 = graph.total_degree();
  if (graph.node_count == 0 || m2 <= 0.0) throw Error("louvain needs a graph with at least one edge");
  Rng rng(derive_seed(seed, "louvain"));
  std::vector<std::size_t> membership(graph.node_count);
  for (std::size_t i = 0; i < graph.node_count; ++i) membership[i] = i;

  UndirectedGraph level = graph;
  while (true) {
    bool improved = false;
    auto comm = local_moving(level, m2, resolution, rng, improved);
    if (!improved) break;
    std::size_t count = *std::max_element(comm.begin(), comm.end()) + 1;
    for (auto& m : membership) m = comm[m];
    if (count == level.node_count) break;
    level = aggregate(level, comm, count);
  }

  Partition p;
  p.community.resize(graph.node_count);
  std::vector<std::size_t> relabel(graph.node_count, graph.node_count);
  for (std::size_t i = 0; i < graph.node_count; ++i) {
    if (relabel[membership[i]] == graph.node_count) relabel[membership[i]] = p.community_count++;
    p.community[i] = relabel[membership[i]];
  }
  p.modularity = modularity(graph, p.community, resolution);
  return p;
}

GraphExport display_subgraph(const MentionGraph& graph, const Partition& partition, const Corpus& corpus,
                             const AnnotationSet* annotations, WeightMode mode, std::size_t top_n,
                             std::size_t edge_threshold) {
  if (partition.community.size() != graph.nodes.size()) throw Error("partition does not cover the mention graph");
  GraphExport view;
  view.community_count = partition.community_count;
  view.modularity = partition.modularity;

  std::vector<const Conversation*> partners;
  for (const auto& c : corpus.conversations) partners.push_back(&c);
  std::stable_sort(partners.begin(), partners.end(), [](const Conversation* a, const Conversation* b) {
    if (a->messages.size() != b->messages.size()) return a->messages.size() > b->messages.size();
    return a->partner_id < b->partner_id;
  });
  if (partners.size() > top_n) partners.resize(top_n);

  Timestamp first_min = 0, first_max = 0;
  bool any = false;
  for (const auto* c : partners) {
    if (c->messages.empty()) continue;
    Timestamp t = c->messages.front().timestamp;
    first_min = any ? std::min(first_min, t) : t;
    first_max = any ? std::max(first_max, t) : t;
    any = true;
  }

  std::vector<std::size_t> kept;
  auto node_of = [&](const std::string& id) {
    auto idx = graph.index_of(id);
    if (!idx) throw Error("speaker '" + id + "' is not in the mention graph");
    return *idx;
  };
  {
    std::size_t a = node_of(corpus.author_id);
    kept.push_back(a);
    view.nodes.push_back({corpus.author_id, partition.community[a], "author", 0.0, corpus.message_count()});
  }
  for (const auto* c : partners) {
    std::size_t idx = node_of(c->partner_id);
    kept.push_back(idx);
    DisplayNode node;
    node.id = c->partner_id;
    node.cluster = partition.community[idx];
    node.messages = c->messages.size();
    node.shape = "ellipse";
    if (annotations) {
      if (const AttributeProfile* p = annotations->find(c->partner_id)) {
        if (p->get(Attribute::family) == 0) node.shape = "circle";
        else if (p->get(Attribute::school) == 0) node.shape = "rectangle";
        else if (p->get(Attribute::work) == 0) node.shape = "triangle";
      }
    }
    if (!c->messages.empty() && first_max > first_min) {
      node.recency = static_cast<double>(c->messages.front().timestamp - first_min) /
                     static_cast<double>(first_max - first_min);
    }
    view.nodes.push_back(std::move(node));
  }

  std::vector<std::uint8_t> shown(graph.nodes.size(), 0);
  for (std::size_t k : kept) shown[k] = 1;
  for (const auto& [edge, c] : graph.counts) {
    if (c < edge_threshold || !shown[edge.first] || !shown[edge.second]) continue;
    view.edges.push_back({graph.nodes[edge.first], graph.nodes[edge.second], c,
                          mention_weight(c, graph.w_min, graph.w_max, mode)});
  }
  return view;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void write_graph_export(std::ostream& out, const GraphExport& view) {
  out << "# speakerattr graph export v1\n";
  out << "# communities\t" << view.community_count << "\tmodularity\t" << fmt(view.modularity) << "\n";
  out << "# node\tid\tcluster\tshape\trecency\tmessages\n";
  for (const auto& n : view.nodes) {
    out << "node\t" << n.id << '\t' << n.cluster << '\t' << n.shape << '\t' << fmt(n.recency) << '\t' << n.messages
        << '\n';
  }
  out << "# edge\tsource\ttarget\tcount\tweight\n";
  for (const auto& e : view.edges) {
    out << "edge\t" << e.source << '\t' << e.target << '\t' << e.count << '\t' << fmt(e.weight) << '\n';
  }
}

void write_edge_list(std::ostream& out, const MentionGraph& graph, WeightMode mode) {
  out << "# source\ttarget\tcount\tweight\n";
  for (const auto& [edge, c] : graph.counts) {
    out << graph.nodes[edge.first] << '\t' << graph.nodes[edge.second] << '\t' << c << '\t'
        << fmt(mention_weight(c, graph.w_min, graph.w_max, mode)) << '\n';
  }
}

}  // namespace speakerattr

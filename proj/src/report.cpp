#include "speakerattr/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "speakerattr/common.hpp"

namespace speakerattr {

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string group_name(Attribute a, int value) {
  return std::string(attribute_name(a)) + "=" + std::string(value_name(a, value));
}

}  // namespace

std::vector<SpeakerGroup> attribute_groups(const AnnotationSet& annotations, const Corpus& corpus) {
  std::vector<SpeakerGroup> groups;
  SpeakerGroup all;
  all.name = kAllGroup;
  for (const auto& [id, p] : annotations.profiles) {
    if (corpus.find(id)) all.members.push_back(id);
  }
  for (Attribute a : kAttributes) {
    for (int v = 0; v < value_count(a); ++v) {
      SpeakerGroup g;
      g.name = group_name(a, v);
      g.attribute = a;
      g.value = v;
      for (const auto& id : all.members) {
        if (annotations.find(id)->get(a) == v) g.members.push_back(id);
      }
      groups.push_back(std::move(g));
    }
  }
  groups.insert(groups.begin(), std::move(all));
  return groups;
}

// ------------------------------------------------------------------ dominance

std::vector<DominanceRow> dominance_report(const Corpus& corpus, const AnnotationSet& annotations,
                                           const CategoryLexicon& lexicon, std::size_t top_k) {
  // One tally per annotated conversation, merged per group.
  std::vector<std::pair<const AttributeProfile*, CategoryTally>> per_partner;
  for (const auto& conv : corpus.conversations) {
    const AttributeProfile* p = annotations.find(conv.partner_id);
    if (!p) continue;
    CategoryTally t(lexicon.size());
    for (const auto& m : conv.messages) t.add(m.tokens, lexicon);
    per_partner.emplace_back(p, std::move(t));
  }
  std::vector<DominanceRow> rows;
  for (Attribute a : kAttributes) {
    for (int v = 0; v < value_count(a); ++v) {
      CategoryTally group(lexicon.size()), rest(lexicon.size());
      for (const auto& [p, t] : per_partner) (p->get(a) == v ? group : rest).merge(t);
      if (group.tokens == 0 || rest.tokens == 0) continue;
      DominanceRow row;
      row.attribute = a;
      row.value = v;
      row.top = dominance(group, rest);
      if (row.top.size() > top_k) row.top.resize(top_k);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_dominance_csv(std::ostream& out, const std::vector<DominanceRow>& rows, const CategoryLexicon& lexicon) {
  out << "attribute,value,rank,category,score,group_coverage,complement_coverage\n";
  for (const auto& row : rows) {
    for (std::size_t r = 0; r < row.top.size(); ++r) {
      const auto& s = row.top[r];
      out << attribute_name(row.attribute) << ',' << value_name(row.attribute, row.value) << ',' << r + 1 << ','
          << lexicon.categories()[s.category] << ',' << fixed(s.score) << ',' << fixed(s.group_coverage, 8) << ','
          << fixed(s.complement_coverage, 8) << '\n';
    }
  }
}

// ------------------------------------------------------------------ time

std::vector<TimeSeries> time_distribution(const Corpus& corpus, const std::vector<SpeakerGroup>& groups) {
  std::vector<TimeSeries> out;
  for (const auto& g : groups) {
    TimeSeries s;
    s.group = g.name;
    for (const auto& id : g.members) {
      const Conversation* c = corpus.find(id);
      if (!c) continue;
      for (const auto& m : c->messages) {
        const CivilTime t = to_civil(m.timestamp);
        s.day[t.weekday] += 1.0;
        s.hour[t.hour] += 1.0;
        ++s.messages;
      }
    }
    if (s.messages == 0) continue;
    const double n = static_cast<double>(s.messages);
    for (double& d : s.day) d /= n;
    for (double& h : s.hour) h /= n;
    out.push_back(std::move(s));
  }
  auto all = std::find_if(out.begin(), out.end(), [](const TimeSeries& s) { return s.group == kAllGroup; });
  if (all == out.end()) throw Error("time distribution needs a non-empty \"All\" group");
  std::rotate(out.begin(), all, all + 1);
  const TimeSeries& ref = out.front();
  for (auto& s : out) {
    for (std::size_t i = 0; i < 7; ++i) s.day_divergence += std::abs(s.day[i] - ref.day[i]);
    for (std::size_t i = 0; i < 24; ++i) s.hour_divergence += std::abs(s.hour[i] - ref.hour[i]);
  }
  std::stable_sort(out.begin() + 1, out.end(), [](const TimeSeries& a, const TimeSeries& b) {
    if (a.divergence() != b.divergence()) return a.divergence() > b.divergence();
    return a.group < b.group;
  });
  return out;
}

void write_time_csv(std::ostream& out, const std::vector<TimeSeries>& series) {
  out << "group,messages,day_divergence,hour_divergence";
  for (const char* d : {"mon", "tue", "wed", "thu", "fri", "sat", "sun"}) out << ",day_" << d;
  for (int h = 0; h < 24; ++h) out << ",hour_" << h;
  out << '\n';
  for (const auto& s : series) {
    out << s.group << ',' << s.messages << ',' << fixed(s.day_divergence) << ',' << fixed(s.hour_divergence);
    for (double d : s.day) out << ',' << fixed(d, 8);
    for (double h : s.hour) out << ',' << fixed(h, 8);
    out << '\n';
  }
}

// ------------------------------------------------------------------ mirroring

std::vector<std::optional<double>> conversation_mirroring(const Conversation& conv, const FunctionWordMap& words,
                                                          std::span<const std::size_t> checkpoints) {
  std::vector<std::optional<double>> out(checkpoints.size());
  std::vector<std::size_t> order(checkpoints.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return checkpoints[a] < checkpoints[b]; });
  FunctionWordCounts author, partner;
  std::size_t used = 0;
  for (std::size_t k : order) {
    const std::size_t m = checkpoints[k];
    if (m > conv.messages.size()) break;
    for (; used < m; ++used) {
      const Message& msg = conv.messages[used];
      (msg.is_author ? author : partner) += words.count(msg.tokens);
    }
    out[k] = lsm(author.profile(), partner.profile());
  }
  return out;
}

std::vector<MirroringSeries> mirroring_curve(const Corpus& corpus, const std::vector<SpeakerGroup>& groups,
                                             const CategoryLexicon& lexicon, std::span<const std::size_t> checkpoints) {
  const FunctionWordMap words(lexicon);
  std::vector<MirroringSeries> out;
  for (const auto& g : groups) {
    MirroringSeries s;
    s.group = g.name;
    s.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    std::vector<double> sum(checkpoints.size(), 0.0);
    s.people.assign(checkpoints.size(), 0);
    for (const auto& id : g.members) {
      const Conversation* c = corpus.find(id);
      if (!c) continue;
      const auto values = conversation_mirroring(*c, words, checkpoints);
      for (std::size_t k = 0; k < values.size(); ++k) {
        if (!values[k]) continue;
        sum[k] += *values[k];
        ++s.people[k];
      }
    }
    s.mean.resize(checkpoints.size());
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
      if (s.people[k] > 0) s.mean[k] = sum[k] / static_cast<double>(s.people[k]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_mirroring_csv(std::ostream& out, const std::vector<MirroringSeries>& series) {
  out << "group,messages,people,lsm\n";
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.checkpoints.size(); ++k) {
      out << s.group << ',' << s.checkpoints[k] << ',' << s.people[k] << ','
          << (s.mean[k] ? fixed(*s.mean[k]) : std::string()) << '\n';
    }
  }
}

// ------------------------------------------------------------------ clusters

ClusterReport cluster_report(const MentionGraph& graph, const Corpus& corpus, const AnnotationSet* annotations,
                             WeightMode mode, std::uint64_t seed, std::size_t top_n, std::size_t edge_threshold) {
  ClusterReport r;
  r.node_order = graph.nodes;
  const UndirectedGraph g = symmetrize(graph);
  if (g.total_degree() > 0.0) {
    r.partition = louvain(g, seed);
  } else {
    r.partition.community.resize(graph.nodes.size());
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) r.partition.community[i] = i;
    r.partition.community_count = graph.nodes.size();
  }
  r.sizes = r.partition.sizes();
  r.display = display_subgraph(graph, r.partition, corpus, annotations, mode, top_n, edge_threshold);
  return r;
}

void write_cluster_csv(std::ostream& out, const ClusterReport& report) {
  out << "# communities " << report.partition.community_count << " modularity " << fixed(report.partition.modularity)
      << '\n';
  out << "speaker,community,community_size\n";
  for (std::size_t i = 0; i < report.node_order.size(); ++i) {
    const std::size_t c = report.partition.community[i];
    out << report.node_order[i] << ',' << c << ',' << report.sizes[c] << '\n';
  }
}

}  // namespace speakerattr

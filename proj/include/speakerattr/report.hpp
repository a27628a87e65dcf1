#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "speakerattr/annotation.hpp"
#include "speakerattr/community.hpp"
#include "speakerattr/corpus.hpp"
#include "speakerattr/graph.hpp"
#include "speakerattr/lexicon.hpp"

namespace speakerattr {

// A named set of partners. Attribute groups are named "family=yes",
// "relative_age=older" and so on; the aggregate group is "All".
struct SpeakerGroup {
  std::string name;
  std::optional<Attribute> attribute;  // empty for "All"
  int value = 0;
  std::vector<std::string> members;  // sorted partner ids
};

inline constexpr const char* kAllGroup = "All";

// "All" (every annotated partner with a conversation) followed by one group per
// attribute value in attribute order. Empty groups are kept.
std::vector<SpeakerGroup> attribute_groups(const AnnotationSet& annotations, const Corpus& corpus);

// ------------------------------------------------------------------ dominance

// Tokens of both sides of the conversations with group members against the
// conversations with every other annotated partner.
struct DominanceRow {
  Attribute attribute{};
  int value = 0;
  std::vector<DominanceScore> top;  // at most top_k, descending
};

// One row per attribute value whose group and complement both have tokens.
std::vector<DominanceRow> dominance_report(const Corpus& corpus, const AnnotationSet& annotations,
                                           const CategoryLexicon& lexicon, std::size_t top_k = 10);
void write_dominance_csv(std::ostream& out, const std::vector<DominanceRow>& rows, const CategoryLexicon& lexicon);

// ------------------------------------------------------------------ time

struct TimeSeries {
  std::string group;
  std::size_t messages = 0;
  std::array<double, 7> day{};    // Monday first, UTC
  std::array<double, 24> hour{};  // UTC
  double day_divergence = 0.0;    // sum |group - All| over the 7 bins
  double hour_divergence = 0.0;   // over the 24 bins
  double divergence() const { return day_divergence + hour_divergence; }
};

// Message fractions for "All" and every non-empty group, ranked by descending
// total divergence (ties by name); "All" comes first with divergence 0.
std::vector<TimeSeries> time_distribution(const Corpus& corpus, const std::vector<SpeakerGroup>& groups);
void write_time_csv(std::ostream& out, const std::vector<TimeSeries>& series);

// ------------------------------------------------------------------ mirroring

inline constexpr std::array<std::size_t, 6> kMirroringCheckpoints = {100, 500, 1000, 2000, 3000, 5000};

// LSM between the author's and the partner's pooled function-word profiles over
// the first m messages of one conversation, per checkpoint; empty entries where
// the conversation has fewer than m messages.
std::vector<std::optional<double>> conversation_mirroring(const Conversation& conv, const FunctionWordMap& words,
                                                          std::span<const std::size_t> checkpoints);

struct MirroringSeries {
  std::string group;
  std::vector<std::size_t> checkpoints;
  std::vector<std::optional<double>> mean;  // empty where no member qualifies
  std::vector<std::size_t> people;          // members counted per checkpoint
};

std::vector<MirroringSeries> mirroring_curve(const Corpus& corpus, const std::vector<SpeakerGroup>& groups,
                                             const CategoryLexicon& lexicon,
                                             std::span<const std::size_t> checkpoints = kMirroringCheckpoints);
void write_mirroring_csv(std::ostream& out, const std::vector<MirroringSeries>& series);

// ------------------------------------------------------------------ clusters

struct ClusterReport {
  Partition partition;
  std::vector<std::size_t> sizes;  // per community
  std::vector<std::string> node_order;
  GraphExport display;
};

// Louvain over the symmetrized mention graph plus the filtered display view. A
// graph without edges yields one community per node.
ClusterReport cluster_report(const MentionGraph& graph, const Corpus& corpus, const AnnotationSet* annotations,
                             WeightMode mode, std::uint64_t seed, std::size_t top_n = kDisplayTopN,
                             std::size_t edge_threshold = kDisplayEdgeThreshold);
void write_cluster_csv(std::ostream& out, const ClusterReport& report);

}  // namespace speakerattr

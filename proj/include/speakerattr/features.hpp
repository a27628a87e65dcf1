#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "speakerattr/annotation.hpp"
#include "speakerattr/attributes.hpp"
#include "speakerattr/corpus.hpp"
#include "speakerattr/graph.hpp"
#include "speakerattr/lexicon.hpp"

namespace speakerattr {

enum class FeatureKind : std::uint8_t { liwc, time, frequency, style, graph, attributes };
inline constexpr std::size_t kFeatureKindCount = 6;
inline constexpr std::array<FeatureKind, kFeatureKindCount> kFeatureKinds = {
    FeatureKind::liwc, FeatureKind::time, FeatureKind::frequency,
    FeatureKind::style, FeatureKind::graph, FeatureKind::attributes,
};
constexpr std::size_t index_of(FeatureKind k) { return static_cast<std::size_t>(k); }
std::string_view feature_kind_name(FeatureKind k);
// Accepts the names above, case-insensitively.
std::optional<FeatureKind> parse_feature_kind(std::string_view name);

// Set of enabled feature kinds.
struct FeatureMask {
  std::array<bool, kFeatureKindCount> on{};
  bool has(FeatureKind k) const { return on[index_of(k)]; }
  void set(FeatureKind k, bool value = true) { on[index_of(k)] = value; }
  bool any() const;
  static FeatureMask none() { return {}; }
  // Every kind except attributes.
  static FeatureMask all_text();
  friend bool operator==(const FeatureMask&, const FeatureMask&) = default;
};

// Dimensions of each kind.
std::size_t liwc_dim(std::size_t categories);                // 3C + 1
std::size_t time_dim(std::size_t window_size);               // W + 19
std::size_t frequency_dim(std::size_t window_size);          // 4 + W
inline constexpr std::size_t kStyleDim = 2;
std::size_t attribute_dim(Attribute target);                 // 8, or 6 for relative_age

// [author vector (C), partner vector (C), cosine (1), sum (C)]. A zero vector has
// cosine 0 with anything.
std::vector<double> liwc_features(std::span<const Message> window, const CategoryLexicon& lexicon);

inline constexpr int kTimeEpochYear = 2000;
inline constexpr double kTimeYearScale = 10.0;

// [elapsed, gaps (W-1), day-of-month/31, month one-hot (12), (year-2000)/10,
//  season one-hot (winter, spring, summer, fall), hour/23], calendar fields of
// the last message in UTC. Throws on decreasing timestamps.
std::vector<double> time_features(std::span<const Message> window);

// [log1p of messages in the past 24 h, 7 d, 30 d and all history before the
// window's first message] + one author bit per window message.
std::vector<double> frequency_features(std::span<const Message> window, std::span<const Message> history);

inline constexpr std::size_t kStyleHistory = 100;

// [LSM of author vs partner over the last 100 history messages,
//  LSM over the last 100 messages ending with the window minus that value].
std::vector<double> style_features(std::span<const Message> window, std::span<const Message> history,
                                   const FunctionWordMap& function_words);

// The partner's row of the distance matrix in `node_order`. A partner with no
// edge in the graph the matrix was built from gets a row of sentinels.
std::vector<double> graph_features(const std::string& partner_id, const MentionGraph& graph,
                                   const DistanceMatrix& distances);

// One bit per binary attribute other than the target (1 for its first value:
// yes / same), then relative_age one-hot (younger, older, same) unless it is the
// target. Attribute order follows kAttributes.
std::vector<double> attribute_features(const AttributeProfile& profile, Attribute target);

// Z-score per dimension, fitted on training rows. Population standard deviation,
// floored at 1e-8; applied values are clamped to [-6, 6].
class Normalizer {
 public:
  static constexpr double kSigmaFloor = 1e-8;
  static constexpr double kClamp = 6.0;

  Normalizer() = default;
  Normalizer(Eigen::VectorXd mean, Eigen::VectorXd sigma);
  static Normalizer fit(const Eigen::MatrixXd& rows);

  bool fitted() const { return fitted_; }
  std::size_t dim() const { return static_cast<std::size_t>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& sigma() const { return sigma_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& rows) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd sigma_;
  bool fitted_ = false;
};

// Per-message lexicon tallies of one corpus, computed once and shared by every
// window of every fold.
class MessageCache {
 public:
  MessageCache(const Corpus& corpus, const CategoryLexicon& lexicon);

  const CategoryLexicon& lexicon() const { return *lexicon_; }
  const FunctionWordMap& function_words() const { return function_words_; }
  // Category hits of message `index` in `conv`.
  const CategoryTally& tally(const Conversation& conv, std::size_t index) const;
  const FunctionWordCounts& function_counts(const Conversation& conv, std::size_t index) const;

 private:
  const CategoryLexicon* lexicon_;
  FunctionWordMap function_words_;
  std::unordered_map<const Conversation*, std::vector<CategoryTally>> tallies_;
  std::unordered_map<const Conversation*, std::vector<FunctionWordCounts>> function_;
};

// Same results as liwc_features / style_features, from cached tallies.
std::vector<double> liwc_features(const ContextWindow& window, const MessageCache& cache);
std::vector<double> style_features(const ContextWindow& window, const MessageCache& cache);

// Raw (unnormalized) feature rows for a list of windows, one matrix per enabled
// kind. Graph rows need `graph` and `distances`; attribute rows need `annotations`
// and `target`.
struct FeatureInputs {
  const MessageCache* cache = nullptr;
  const MentionGraph* graph = nullptr;
  const DistanceMatrix* distances = nullptr;
  const AnnotationSet* annotations = nullptr;
  Attribute target = Attribute::family;
};

struct FeatureMatrices {
  std::array<Eigen::MatrixXd, kFeatureKindCount> kind;  // rows = windows; empty when not computed
  FeatureMask mask;
};

// Windows are processed in parallel under OpenMP.
FeatureMatrices featurize(std::span<const ContextWindow> windows, FeatureMask mask, const FeatureInputs& inputs);
// Reference implementation, one window after another.
FeatureMatrices featurize_serial(std::span<const ContextWindow> windows, FeatureMask mask,
                                 const FeatureInputs& inputs);

// Feature-matrix cache file: "SAFEAT01", a JSON header line naming kinds, dims,
// row count and a fingerprint, then little-endian doubles row-major per kind.
void write_feature_cache(std::ostream& out, const FeatureMatrices& m, const std::string& fingerprint);
FeatureMatrices read_feature_cache(std::istream& in, const std::string& source_name, std::string* fingerprint);
void save_feature_cache(const std::filesystem::path& path, const FeatureMatrices& m, const std::string& fingerprint);
std::optional<FeatureMatrices> load_feature_cache(const std::filesystem::path& path, const std::string& fingerprint);

}  // namespace speakerattr

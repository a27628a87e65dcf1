#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "speakerattr/corpus.hpp"

namespace speakerattr {

// Word vectors indexed by integer id. Ids 0..2 are reserved: 0 is the unknown
// token (zero vector), 1 marks the start of an author message, 2 the start of a
// partner message. Marker vectors are small deterministic random vectors.
class EmbeddingTable {
 public:
  static constexpr std::int32_t kUnknown = 0;
  static constexpr std::int32_t kAuthorMarker = 1;
  static constexpr std::int32_t kOtherMarker = 2;
  static constexpr std::size_t kReserved = 3;

  EmbeddingTable() = default;
  // Empty table of dimension `dim` holding only the reserved rows.
  EmbeddingTable(std::size_t dim, std::uint64_t marker_seed);

  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(vectors_.rows()); }
  std::size_t word_count() const { return size() - kReserved; }

  std::int32_t id(std::string_view token) const;
  bool contains(std::string_view token) const { return id(token) != kUnknown; }
  const std::string& token(std::int32_t id) const { return tokens_[static_cast<std::size_t>(id)]; }
  Eigen::Ref<const Eigen::RowVectorXd> vector(std::int32_t id) const { return vectors_.row(id); }
  Eigen::Ref<const Eigen::RowVectorXd> lookup(std::string_view token) const { return vectors_.row(id(token)); }
  const Eigen::MatrixXd& matrix() const { return vectors_; }

  // Adds a word; a repeated word keeps its first vector.
  void add(const std::string& token, const Eigen::RowVectorXd& vec);
  // Copy keeping only words in `vocab` (reserved rows always kept, ids renumbered).
  EmbeddingTable restricted(const std::unordered_set<std::string>& vocab) const;

 private:
  Eigen::MatrixXd vectors_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> index_;
};

// Text table, one line per word: the token then d numbers, whitespace separated.
// d is taken from the first data line. A leading "<count> <dim>" line is skipped.
// With a filter, words outside it are not stored.
EmbeddingTable read_embeddings(std::istream& in, const std::string& source_name,
                               const std::unordered_set<std::string>* vocab, std::uint64_t marker_seed);
EmbeddingTable load_embeddings(const std::filesystem::path& path, const std::unordered_set<std::string>* vocab,
                               std::uint64_t marker_seed);
void write_embeddings(std::ostream& out, const EmbeddingTable& table);

// Every token of every message.
std::unordered_set<std::string> corpus_vocabulary(const Corpus& corpus);
std::unordered_set<std::string> corpus_vocabulary(std::span<const Conversation* const> conversations);

struct Coverage {
  std::size_t covered_tokens = 0;
  std::size_t total_tokens = 0;
  double rate() const { return total_tokens == 0 ? 0.0 : static_cast<double>(covered_tokens) / total_tokens; }
};

// Share of corpus token occurrences that have a vector.
Coverage token_coverage(const Corpus& corpus, const EmbeddingTable& table);

inline constexpr std::size_t kDefaultMaxTokens = 256;

struct TokenSequence {
  std::vector<std::int32_t> ids;
  bool truncated = false;
};

// [marker, tokens...] per message in time order; sequences longer than
// `max_tokens` lose their tail. Throws on an empty window.
TokenSequence window_token_ids(std::span<const Message> messages, const EmbeddingTable& table,
                               std::size_t max_tokens = kDefaultMaxTokens);
Eigen::MatrixXd encode_window_tokens(std::span<const Message> messages, const EmbeddingTable& table,
                                     std::size_t max_tokens = kDefaultMaxTokens);

}  // namespace speakerattr

#include "speakerattr/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "speakerattr/common.hpp"

namespace speakerattr {

EmbeddingTable::EmbeddingTable(std::size_t dim, std::uint64_t marker_seed) {
  if (dim == 0) throw Error("embedding dimension must be positive");
  vectors_ = Eigen::MatrixXd::Zero(kReserved, static_cast<Eigen::Index>(dim));
  tokens_ = {"<unk>", "<author>", "<other>"};
  Rng rng(derive_seed(marker_seed, "markers"));
  for (Eigen::Index r = 1; r < 3; ++r) {
    for (Eigen::Index c = 0; c < vectors_.cols(); ++c) vectors_(r, c) = rng.uniform(-0.1, 0.1);
  }
}

std::int32_t EmbeddingTable::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnknown : it->second;
}

void EmbeddingTable::add(const std::string& token, const Eigen::RowVectorXd& vec) {
  if (static_cast<std::size_t>(vec.size()) != dim()) throw Error("embedding for '" + token + "' has the wrong dimension");
  if (index_.count(token)) return;
  const auto row = vectors_.rows();
  vectors_.conservativeResize(row + 1, Eigen::NoChange);
  vectors_.row(row) = vec;
  index_.emplace(token, static_cast<std::int32_t>(row));
  tokens_.push_back(token);
}

EmbeddingTable EmbeddingTable::restricted(const std::unordered_set<std::string>& vocab) const {
  EmbeddingTable out;
  std::vector<Eigen::Index> rows = {0, 1, 2};
  for (std::size_t i = kReserved; i < tokens_.size(); ++i) {
    if (vocab.count(tokens_[i])) rows.push_back(static_cast<Eigen::Index>(i));
  }
  out.vectors_.resize(static_cast<Eigen::Index>(rows.size()), vectors_.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.vectors_.row(static_cast<Eigen::Index>(r)) = vectors_.row(rows[r]);
    out.tokens_.push_back(tokens_[static_cast<std::size_t>(rows[r])]);
    if (r >= kReserved) out.index_.emplace(out.tokens_.back(), static_cast<std::int32_t>(r));
  }
  return out;
}

namespace {

bool parse_double(std::string_view s, double& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

EmbeddingTable read_embeddings(std::istream& in, const std::string& source_name,
                               const std::unordered_set<std::string>* vocab, std::uint64_t marker_seed) {
  EmbeddingTable table;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  Eigen::RowVectorXd vec;
  while (std::getline(in, line)) {
    ++line_no;
    auto parts = words(line);
    if (parts.empty()) continue;
    if (dim == 0) {
      double a = 0, b = 0;
      if (line_no == 1 && parts.size() == 2 && parse_double(parts[0], a) && parse_double(parts[1], b)) continue;
      if (parts.size() < 2) throw ParseError(source_name, line_no, "expected a token followed by numbers");
      dim = parts.size() - 1;
      table = EmbeddingTable(dim, marker_seed);
      vec.resize(static_cast<Eigen::Index>(dim));
    }
    if (parts.size() != dim + 1) {
      throw ParseError(source_name, line_no,
                       "expected " + std::to_string(dim) + " values, found " + std::to_string(parts.size() - 1));
    }
    std::string token(parts[0]);
    if (vocab && !vocab->count(token)) continue;
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_double(parts[k + 1], vec[static_cast<Eigen::Index>(k)])) {
        throw ParseError(source_name, line_no, "bad number '" + std::string(parts[k + 1]) + "'");
      }
    }
    table.add(token, vec);
  }
  if (dim == 0) throw ParseError(source_name, line_no, "embedding file has no vectors");
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, const std::unordered_set<std::string>* vocab,
                               std::uint64_t marker_seed) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding file " + path.string());
  return read_embeddings(in, path.string(), vocab, marker_seed);
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
  std::ostringstream row;
  row.precision(17);
  for (std::size_t i = EmbeddingTable::kReserved; i < table.size(); ++i) {
    row.str("");
    row << table.token(static_cast<std::int32_t>(i));
    for (Eigen::Index c = 0; c < table.matrix().cols(); ++c) row << ' ' << table.matrix()(static_cast<Eigen::Index>(i), c);
    out << row.str() << '\n';
  }
}

std::unordered_set<std::string> corpus_vocabulary(std::span<const Conversation* const> conversations) {
  std::unordered_set<std::string> vocab;
  for (const auto* c : conversations) {
    for (const auto& m : c->messages) vocab.insert(m.tokens.begin(), m.tokens.end());
  }
  return vocab;
}

std::unordered_set<std::string> corpus_vocabulary(const Corpus& corpus) {
  std::vector<const Conversation*> all;
  for (const auto& c : corpus.conversations) all.push_back(&c);
  return corpus_vocabulary(all);
}

Coverage token_coverage(const Corpus& corpus, const EmbeddingTable& table) {
  Coverage cov;
  for (const auto& c : corpus.conversations) {
    for (const auto& m : c.messages) {
      for (const auto& t : m.tokens) {
        ++cov.total_tokens;
        if (table.contains(t)) ++cov.covered_tokens;
      }
    }
  }
  return cov;
}

TokenSequence window_token_ids(std::span<const Message> messages, const EmbeddingTable& table,
                               std::size_t max_tokens) {
  if (messages.empty()) throw Error("cannot encode an empty window");
  TokenSequence seq;
  for (const auto& m : messages) {
    seq.ids.push_back(m.is_author ? EmbeddingTable::kAuthorMarker : EmbeddingTable::kOtherMarker);
    for (const auto& t : m.tokens) seq.ids.push_back(table.id(t));
  }
  if (max_tokens > 0 && seq.ids.size() > max_tokens) {
    seq.ids.resize(max_tokens);
    seq.truncated = true;
  }
  return seq;
}

Eigen::MatrixXd encode_window_tokens(std::span<const Message> messages, const EmbeddingTable& table,
                                     std::size_t max_tokens) {
  auto seq = window_token_ids(messages, table, max_tokens);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(seq.ids.size()), static_cast<Eigen::Index>(table.dim()));
  for (std::size_t i = 0; i < seq.ids.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = table.vector(seq.ids[i]);
  return out;
}

}  // namespace speakerattr

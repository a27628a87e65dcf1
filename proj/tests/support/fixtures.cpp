#include "support/fixtures.hpp"

#include <fstream>
#include <sstream>

#include "speakerattr/time_util.hpp"

namespace fixtures {

GradProblem grad_problem(std::uint64_t seed, std::size_t width, bool joint, bool fine_tune) {
  Rng rng(seed);
  GradProblem p;
  p.table = EmbeddingTable(width, seed);
  for (int w = 0; w < 10; ++w) {
    Eigen::RowVectorXd v(static_cast<Eigen::Index>(width));
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    p.table.add("w" + std::to_string(w), v);
  }
  p.config.embedding_dim = width;
  p.config.lstm_hidden = width;
  p.config.encoder_hidden = width;
  p.config.decoder_hidden = width;
  p.config.joint = joint;
  p.config.target = Attribute::relative_age;
  p.config.seed = seed;
  p.config.train_markers = true;
  p.config.fine_tune_embeddings = fine_tune;
  const std::array<std::size_t, kFeatureKindCount> dims = {7, 5, 4, 2, 6, 6};
  for (FeatureKind k : kFeatureKinds) {
    if (joint && k == FeatureKind::attributes) continue;
    p.config.feature_dims[index_of(k)] = dims[index_of(k)];
  }
  const std::size_t n = 3;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::int32_t> ids;
    const std::size_t len = 3 + rng.below(6);
    for (std::size_t t = 0; t < len; ++t) {
      if (t == 0 || rng.bernoulli(0.2)) {
        ids.push_back(rng.bernoulli(0.5) ? EmbeddingTable::kAuthorMarker : EmbeddingTable::kOtherMarker);
      } else {
        ids.push_back(static_cast<std::int32_t>(rng.below(p.table.size())));
      }
    }
    p.data.tokens.push_back(ids);
    std::array<std::int8_t, kAttributeCount> labels{};
    for (Attribute a : kAttributes) labels[index_of(a)] = static_cast<std::int8_t>(rng.below(static_cast<std::size_t>(value_count(a))));
    p.data.labels.push_back(labels);
    p.data.speakers.push_back("s" + std::to_string(i));
  }
  for (FeatureKind k : kFeatureKinds) {
    const std::size_t t = p.config.feature_dims[index_of(k)];
    if (t == 0) continue;
    auto& m = p.data.features[index_of(k)];
    m.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.normal();
    }
  }
  return p;
}

Conversation conversation(const std::string& partner, const std::vector<std::string>& texts,
                          const std::vector<Timestamp>& times, const std::vector<bool>& author_bits) {
  Conversation c;
  c.partner_id = partner;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const bool is_author = author_bits.empty() ? (i % 2 == 1) : author_bits[i];
    c.messages.push_back(make_message(is_author ? "author" : partner, is_author, times[i], texts[i], Platform::other));
  }
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CategoryLexicon random_lexicon(Rng& rng) {
  std::ostringstream out;
  const std::size_t cats = 1 + rng.below(6);
  out << "%\n";
  for (std::size_t c = 0; c < cats; ++c) out << (c + 10) << "\tcat" << c << "\n";
  out << "%\n";
  const std::size_t patterns = 1 + rng.below(12);
  for (std::size_t p = 0; p < patterns; ++p) {
    std::string word;
    const std::size_t len = 1 + rng.below(4);
    for (std::size_t i = 0; i < len; ++i) word.push_back(static_cast<char>('a' + rng.below(3)));
    if (rng.bernoulli(0.5)) word.push_back('*');
    out << word << "\t" << (10 + rng.below(cats));
    if (rng.bernoulli(0.3)) out << "," << (10 + rng.below(cats));
    out << "\n";
  }
  std::istringstream in(out.str());
  return CategoryLexicon::parse(in, "random");
}

std::vector<std::string> random_tokens(Rng& rng, std::size_t n) {
  std::vector<std::string> tokens;
  for (std::size_t t = 0; t < n; ++t) {
    std::string tok;
    const std::size_t len = 1 + rng.below(5);
    for (std::size_t i = 0; i < len; ++i) tok.push_back(static_cast<char>('a' + rng.below(4)));
    tokens.push_back(tok);
  }
  return tokens;
}

FunctionWordProfile random_profile(Rng& rng) {
  FunctionWordProfile p{};
  for (auto& x : p) x = rng.bernoulli(0.15) ? 0.0 : rng.uniform(0.0, 0.3);
  return p;
}

namespace {

const std::vector<std::string> kWords = {"the", "a", "and", "not", "i", "you", "love", "mom", "work", "happy",
                                         "sad", "very", "some", "in", "is", "was", "lol", "!", "?", "school"};

}  // namespace

std::string random_text(Rng& rng) {
  std::string text;
  const std::size_t n = 1 + rng.below(8);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) text += ' ';
    text += kWords[rng.below(kWords.size())];
  }
  return text;
}

Conversation random_conversation(Rng& rng, const std::string& partner, std::size_t n) {
  std::vector<std::string> texts;
  std::vector<Timestamp> times;
  std::vector<bool> bits;
  Timestamp t = from_civil(2015, 1, 1) + static_cast<Timestamp>(rng.below(86400 * 365));
  for (std::size_t i = 0; i < n; ++i) {
    t += static_cast<Timestamp>(rng.below(rng.bernoulli(0.1) ? 86400 * 20 : 600));
    texts.push_back(random_text(rng));
    times.push_back(t);
    bits.push_back(rng.bernoulli(0.5));
  }
  return conversation(partner, texts, times, bits);
}

std::vector<double> row_of(const FeatureMatrices& m, std::size_t r) {
  std::vector<double> out;
  for (FeatureKind k : kFeatureKinds) {
    const auto& mat = m.kind[index_of(k)];
    if (mat.size() == 0) continue;
    for (Eigen::Index c = 0; c < mat.cols(); ++c) out.push_back(mat(static_cast<Eigen::Index>(r), c));
  }
  return out;
}

WeightedGraph random_graph(Rng& rng) {
  WeightedGraph g;
  g.node_count = 1 + rng.below(12);
  g.out.resize(g.node_count);
  const double density = rng.uniform(0.05, 0.6);
  for (std::size_t u = 0; u < g.node_count; ++u) {
    for (std::size_t v = 0; v < g.node_count; ++v) {
      if (u != v && rng.bernoulli(density)) g.out[u].emplace_back(v, static_cast<double>(rng.below(17)) / 16.0);
    }
  }
  return g;
}

UndirectedGraph two_triangles() {
  std::vector<std::tuple<std::size_t, std::size_t, double>> e = {{0, 1, 1}, {1, 2, 1}, {0, 2, 1},
                                                                 {3, 4, 1}, {4, 5, 1}, {3, 5, 1}};
  return UndirectedGraph::from_edges(6, e);
}

UndirectedGraph k4() {
  std::vector<std::tuple<std::size_t, std::size_t, double>> e;
  for (std::size_t u = 0; u < 4; ++u) {
    for (std::size_t v = u + 1; v < 4; ++v) e.emplace_back(u, v, 1.0);
  }
  return UndirectedGraph::from_edges(4, e);
}

bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    }
  }
  return true;
}

}  // namespace fixtures

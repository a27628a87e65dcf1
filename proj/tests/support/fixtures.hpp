#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "speakerattr/corpus.hpp"
#include "speakerattr/common.hpp"
#include "speakerattr/community.hpp"
#include "speakerattr/embeddings.hpp"
#include "speakerattr/features.hpp"
#include "speakerattr/graph.hpp"
#include "speakerattr/lexicon.hpp"
#include "speakerattr/model.hpp"
#include "speakerattr/train.hpp"

namespace fixtures {

using namespace speakerattr;

// Small random model problem for gradient checks: d = H = s = `width`, every
// feature encoder enabled with a few inputs, random token sequences over a
// vocabulary of ten words.
struct GradProblem {
  EmbeddingTable table;
  ModelConfig config;
  Dataset data;
};

GradProblem grad_problem(std::uint64_t seed, std::size_t width, bool joint, bool fine_tune);

// Conversation between "author" and `partner` with messages at the given times;
// odd indices are sent by the author unless `author_bits` is supplied.
Conversation conversation(const std::string& partner, const std::vector<std::string>& texts,
                          const std::vector<Timestamp>& times, const std::vector<bool>& author_bits = {});

std::string read_file(const std::string& path);

// Random lexicon over a three-letter alphabet so prefixes collide often.
CategoryLexicon random_lexicon(Rng& rng);
std::vector<std::string> random_tokens(Rng& rng, std::size_t n);
FunctionWordProfile random_profile(Rng& rng);

// Short messages over a fixed word list, and a conversation of `n` of them
// with irregular gaps and random senders.
std::string random_text(Rng& rng);
Conversation random_conversation(Rng& rng, const std::string& partner, std::size_t n);
// Row `r` of every non-empty feature block, concatenated.
std::vector<double> row_of(const FeatureMatrices& m, std::size_t r);

// Up to 12 nodes; dyadic weights keep every path sum exact, so equality can be bitwise.
WeightedGraph random_graph(Rng& rng);
UndirectedGraph two_triangles();
UndirectedGraph k4();
// Same-community relation, independent of label names.
bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

}  // namespace fixtures

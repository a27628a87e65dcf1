#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "speakerattr/annotation.hpp"
#include "speakerattr/corpus.hpp"
#include "speakerattr/embeddings.hpp"
#include "speakerattr/graph.hpp"
#include "speakerattr/lexicon.hpp"

namespace speakerattr {

// Synthetic corpus parameters. Signal strengths are in [0, 1]; zero makes every
// attribute-conditioned distribution equal to the base distribution.
struct SynthSpec {
  std::size_t speakers = 104;
  // Per attribute, the share of speakers taking each value (value index order),
  // by default the reference distribution of 104 speakers. Exact counts come from
  // largest-remainder rounding of share * speakers.
  std::array<std::vector<double>, kAttributeCount> value_shares;
  // Messages per conversation: log-normal around the median, clamped.
  double messages_median = 300.0;
  double messages_sigma = 0.8;
  std::size_t messages_min = 30;
  std::size_t messages_max = 3000;
  double tokens_mean = 6.0;  // mean tokens per message (geometric, at least 1)

  double vocabulary_bias = 0.0;
  double hour_bias = 0.0;
  double mention_bias = 0.0;
  double style_rate = 0.0;

  double planted_rate = 0.25;      // share of tokens drawn from planted categories at full strength
  double mention_rate = 0.25;      // per-message chance of a community mention at full strength
  double base_mention_rate = 0.02; // per-message chance of a random mention at full variation
  // Attribute-independent idiosyncrasy in [0, 1]: partner function-word style,
  // active date range and random mentions. At zero, speakers differ only in
  // their attributes and message counts, so a zero-signal corpus carries no
  // per-speaker fingerprint a model could memorize.
  double speaker_variation = 0.0;
  std::size_t neutral_words = 300;
  std::size_t embedding_dim = 16;
  std::size_t span_days = 730;
  Timestamp start = 1420070400;  // 2015-01-01T00:00:00Z
  std::uint64_t seed = 0;

  SynthSpec();
  void validate() const;
  // Sets all four signal strengths.
  void set_signal(double strength);
};

// 104 speakers with shares equal to the reference integer counts (family 6/98 and so on).
SynthSpec default_spec_table2();

// Value counts for `speakers` from shares (largest remainder, ties to the lower value).
std::vector<std::size_t> value_counts(const std::vector<double>& shares, std::size_t speakers);

// Key-value spec file (see docs/formats.md), e.g.
//   speakers = 40          seed = 7
//   family = 0.3, 0.7      relative_age = 0.2, 0.3, 0.5
//   signal = 1             (sets the four biases; individual keys override)
//   vocabulary_bias = 1    hour_bias = 1    mention_bias = 1    style_rate = 1
SynthSpec parse_synth_spec(std::istream& in, const std::string& source_name);
SynthSpec load_synth_spec(const std::filesystem::path& path);
void write_synth_spec(std::ostream& out, const SynthSpec& spec);

// Category planted for an attribute value, if any.
std::optional<std::string_view> planted_category(Attribute a, int value);
// Preferred hours [first, first + 3) for an attribute value, if any.
std::optional<unsigned> planted_hours(Attribute a, int value);

struct SynthOutput {
  Corpus corpus;
  AnnotationSet annotations;
  AliasTable aliases;
  EmbeddingTable embeddings;
  std::string lexicon_text;
  std::string manifest_json;  // planted configuration and measured effect sizes
};

SynthOutput generate(const SynthSpec& spec);

// Writes corpus.jsonl, annotations.txt, aliases.tsv, embeddings.txt,
// lexicon.dic, manifest.json and synth.spec into `dir`.
void save_synth(const std::filesystem::path& dir, const SynthOutput& out, const SynthSpec& spec);

}  // namespace speakerattr

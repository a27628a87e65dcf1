#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "speakerattr/common.hpp"
#include "speakerattr/synth.hpp"

using namespace speakerattr;

namespace {

SynthSpec small(double signal, std::uint64_t seed = 1) {
  SynthSpec s;
  s.speakers = 24;
  s.seed = seed;
  s.messages_median = 150;
  s.messages_min = 100;
  s.messages_max = 200;
  s.set_signal(signal);
  return s;
}

std::string corpus_text(const SynthOutput& out) {
  std::ostringstream ss;
  write_canonical(ss, out.corpus);
  return ss.str();
}

// Planted category coverage for family=yes minus its complement, from the manifest.
double family_gap(const SynthOutput& out) {
  auto man = nlohmann::json::parse(out.manifest_json);
  for (const auto& e : man["planted"]) {
    if (e["attribute"] == "family" && e["value"] == "yes") {
      return e["group_coverage"].get<double>() - e["complement_coverage"].get<double>();
    }
  }
  return -1.0;
}

}  // namespace

TEST(Synth, SameSpecSameBytes) {
  SynthOutput a = generate(small(0.5)), b = generate(small(0.5));
  EXPECT_EQ(corpus_text(a), corpus_text(b));
  EXPECT_EQ(a.annotations, b.annotations);
  EXPECT_EQ(a.manifest_json, b.manifest_json);
  EXPECT_EQ(a.embeddings.matrix(), b.embeddings.matrix());
  EXPECT_NE(corpus_text(a), corpus_text(generate(small(0.5, 2))));
}

TEST(Synth, ValueCountsUseLargestRemainder) {
  EXPECT_EQ(value_counts({0.3, 0.7}, 10), (std::vector<std::size_t>{3, 7}));
  EXPECT_EQ(value_counts({0.5, 0.5}, 7), (std::vector<std::size_t>{4, 3}));
  EXPECT_EQ(value_counts({1.0 / 3, 1.0 / 3, 1.0 / 3}, 10), (std::vector<std::size_t>{4, 3, 3}));
  EXPECT_EQ(value_counts({0.2, 0.3, 0.5}, 40), (std::vector<std::size_t>{8, 12, 20}));
}

TEST(Synth, DefaultSpecReproducesReferenceCounts) {
  SynthSpec s = default_spec_table2();
  EXPECT_EQ(s.speakers, 104u);
  const std::array<std::vector<std::size_t>, kAttributeCount> expected = {
      std::vector<std::size_t>{6, 98}, {9, 95}, {27, 31, 46}, {81, 23}, {53, 51}, {64, 40}, {34, 70}};
  for (Attribute a : kAttributes) {
    EXPECT_EQ(value_counts(s.value_shares[index_of(a)], s.speakers), expected[index_of(a)]) << attribute_name(a);
  }
}

TEST(Synth, AnnotationsMatchCountsAndCorpusIsValid) {
  SynthSpec s = small(1.0);
  SynthOutput out = generate(s);
  EXPECT_EQ(out.corpus.conversations.size(), s.speakers);
  EXPECT_EQ(out.annotations.profiles.size(), s.speakers);
  check_annotation_keys(out.annotations, out.corpus);
  auto dist = distribution(out.annotations, out.corpus);
  for (Attribute a : kAttributes) {
    EXPECT_EQ(dist[index_of(a)].speaker_counts, value_counts(s.value_shares[index_of(a)], s.speakers));
  }
  for (const auto& c : out.corpus.conversations) {
    EXPECT_GE(c.messages.size(), s.messages_min);
    EXPECT_LE(c.messages.size(), s.messages_max);
    for (std::size_t i = 1; i < c.messages.size(); ++i) EXPECT_LE(c.messages[i - 1].timestamp, c.messages[i].timestamp);
  }
  EXPECT_GT(token_coverage(out.corpus, out.embeddings).rate(), 0.99);
  MentionGraph g = build_mention_graph(out.corpus, out.aliases);
  EXPECT_FALSE(g.counts.empty());
}

TEST(Synth, PlantedEffectGrowsWithStrength) {
  const double zero = family_gap(generate(small(0.0)));
  const double half = family_gap(generate(small(0.5)));
  const double full = family_gap(generate(small(1.0)));
  EXPECT_NEAR(zero, 0.0, 0.01);
  EXPECT_GT(half, zero);
  EXPECT_GT(full, half);
}

TEST(Synth, VariationControlsSpeakerFingerprints) {
  SynthSpec flat = small(0.0);
  SynthOutput a = generate(flat);
  EXPECT_TRUE(build_mention_graph(a.corpus, a.aliases).counts.empty());
  SynthSpec varied = flat;
  varied.speaker_variation = 1.0;
  SynthOutput b = generate(varied);
  EXPECT_FALSE(build_mention_graph(b.corpus, b.aliases).counts.empty());
  // Without variation every conversation spans nearly the whole date range.
  auto first_day = [](const Conversation& c) { return c.messages.front().timestamp / 86400; };
  Timestamp latest_a = 0, latest_b = 0;
  for (const auto& c : a.corpus.conversations) latest_a = std::max(latest_a, first_day(c));
  for (const auto& c : b.corpus.conversations) latest_b = std::max(latest_b, first_day(c));
  EXPECT_LT(latest_a, flat.start / 86400 + 30);
  EXPECT_GT(latest_b, latest_a);
}

TEST(Synth, PlantedTables) {
  EXPECT_EQ(planted_category(Attribute::family, 0), "family");
  EXPECT_FALSE(planted_category(Attribute::family, 1));
  EXPECT_EQ(planted_hours(Attribute::work, 0), 9u);
  EXPECT_FALSE(planted_hours(Attribute::work, 1));
}

TEST(Synth, SpecFileRoundTripAndValidation) {
  SynthSpec s = small(0.7);
  s.value_shares[index_of(Attribute::relative_age)] = {0.2, 0.3, 0.5};
  std::ostringstream out;
  write_synth_spec(out, s);
  std::istringstream in(out.str());
  SynthSpec back = parse_synth_spec(in, "spec");
  EXPECT_EQ(back.speakers, s.speakers);
  EXPECT_EQ(back.vocabulary_bias, 0.7);
  EXPECT_EQ(back.value_shares, s.value_shares);
  std::ostringstream again;
  write_synth_spec(again, back);
  EXPECT_EQ(again.str(), out.str());

  std::istringstream signal_then_override("signal = 1\nhour_bias = 0\n");
  SynthSpec o = parse_synth_spec(signal_then_override, "spec");
  EXPECT_EQ(o.vocabulary_bias, 1.0);
  EXPECT_EQ(o.hour_bias, 0.0);

  SynthSpec zero = small(1.0);
  zero.speakers = 0;
  EXPECT_THROW(zero.validate(), Error);
  EXPECT_THROW(generate(zero), Error);
  SynthSpec bad = small(1.0);
  bad.vocabulary_bias = 1.5;
  EXPECT_THROW(bad.validate(), Error);
  SynthSpec shares = small(1.0);
  shares.value_shares[0] = {0.5, 0.4};
  EXPECT_THROW(shares.validate(), Error);
}

TEST(Synth, SaveWritesEveryFile) {
  auto dir = std::filesystem::temp_directory_path() / "speakerattr_synth_test";
  std::filesystem::remove_all(dir);
  SynthSpec s = small(1.0);
  save_synth(dir, generate(s), s);
  for (const char* f : {"corpus.jsonl", "annotations.txt", "aliases.tsv", "embeddings.txt", "lexicon.dic",
                        "manifest.json", "synth.spec"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  Corpus back = ingest(dir / "corpus.jsonl", InputFormat::canonical);
  EXPECT_EQ(back.message_count(), generate(s).corpus.message_count());
  EXPECT_EQ(load_annotations(dir / "annotations.txt"), generate(s).annotations);
  std::filesystem::remove_all(dir);
}

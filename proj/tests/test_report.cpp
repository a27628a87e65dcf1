#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "speakerattr/report.hpp"
#include "speakerattr/time_util.hpp"
#include "support/fixtures.hpp"

using namespace speakerattr;

namespace {

AttributeProfile profile(std::array<std::uint8_t, kAttributeCount> v) { return AttributeProfile(v); }

// Four partners: "fam" is family, the rest are not; each conversation has a
// distinct vocabulary so dominance has an obvious winner.
struct ReportFixture {
  Corpus corpus;
  AnnotationSet annotations;
};

ReportFixture fixture() {
  ReportFixture f;
  f.corpus.author_id = "author";
  const Timestamp monday = from_civil(2018, 1, 1, 9);  // a Monday
  f.corpus.conversations.push_back(
      fixtures::conversation("fam", {"mom dad", "mother family", "sister mom"}, {monday, monday + 60, monday + 120}));
  f.corpus.conversations.push_back(fixtures::conversation(
      "joe", {"meeting work", "office job", "the boss"}, {monday + 86400 + 3600, monday + 86400 + 7200, monday + 2 * 86400}));
  f.corpus.conversations.push_back(fixtures::conversation("kim", {"hello there", "ok"}, {monday + 3 * 86400, monday + 3 * 86400 + 5}));
  f.corpus.conversations.push_back(fixtures::conversation("zed", {"unannotated"}, {monday}));
  f.annotations.profiles["fam"] = profile({0, 1, 1, 0, 0, 1, 1});
  f.annotations.profiles["joe"] = profile({1, 1, 0, 0, 1, 1, 0});
  f.annotations.profiles["kim"] = profile({1, 1, 2, 1, 0, 0, 1});
  return f;
}

}  // namespace

TEST(Groups, AllThenOnePerValue) {
  auto f = fixture();
  auto groups = attribute_groups(f.annotations, f.corpus);
  ASSERT_EQ(groups.size(), 1u + 2 + 2 + 3 + 2 + 2 + 2 + 2);
  EXPECT_EQ(groups[0].name, kAllGroup);
  EXPECT_EQ(groups[0].members, (std::vector<std::string>{"fam", "joe", "kim"}));
  EXPECT_EQ(groups[1].name, "family=yes");
  EXPECT_EQ(groups[1].members, std::vector<std::string>{"fam"});
}

TEST(Dominance, FamilyCategoryLeadsForFamilyGroup) {
  auto f = fixture();
  CategoryLexicon lex = standin_lexicon();
  auto rows = dominance_report(f.corpus, f.annotations, lex, 3);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0].attribute, Attribute::family);
  EXPECT_EQ(rows[0].value, 0);
  ASSERT_FALSE(rows[0].top.empty());
  EXPECT_EQ(lex.categories()[rows[0].top[0].category], "family");
  EXPECT_LE(rows[0].top.size(), 3u);
  // The work=yes group (joe) ranks the work category first.
  for (const auto& r : rows) {
    if (r.attribute == Attribute::work && r.value == 0) EXPECT_EQ(lex.categories()[r.top[0].category], "work");
  }
  // romantic=yes has no members, so no row.
  for (const auto& r : rows) EXPECT_FALSE(r.attribute == Attribute::romantic && r.value == 0);
  std::ostringstream out;
  write_dominance_csv(out, rows, lex);
  EXPECT_NE(out.str().find("family,yes,1,family,"), std::string::npos);
}

TEST(TimeDistribution, MondayOnlyGroupAndHandDivergence) {
  auto f = fixture();
  auto groups = attribute_groups(f.annotations, f.corpus);
  auto series = time_distribution(f.corpus, groups);
  ASSERT_EQ(series[0].group, kAllGroup);
  EXPECT_EQ(series[0].messages, 8u);
  const TimeSeries* fam = nullptr;
  for (const auto& s : series) {
    if (s.group == "family=yes") fam = &s;
  }
  ASSERT_NE(fam, nullptr);
  EXPECT_EQ(fam->day, (std::array<double, 7>{1, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(fam->hour[9], 1.0);
  // All: Monday 3/8, Tuesday 2/8, Wednesday 1/8, Thursday 2/8.
  const double day_div = (1.0 - 3.0 / 8) + 2.0 / 8 + 1.0 / 8 + 2.0 / 8;
  EXPECT_NEAR(fam->day_divergence, day_div, 1e-12);
  EXPECT_EQ(series[0].divergence(), 0.0);
  for (std::size_t i = 2; i < series.size(); ++i) EXPECT_GE(series[i - 1].divergence(), series[i].divergence());
  std::ostringstream out;
  write_time_csv(out, series);
  EXPECT_FALSE(out.str().empty());
}

TEST(Mirroring, IdenticalSidesGiveFlatOne) {
  Conversation c;
  c.partner_id = "p";
  for (int i = 0; i < 240; ++i) {
    const bool author = i % 2 == 1;
    c.messages.push_back(make_message(author ? "author" : "p", author, i + 1, "the cat and i", Platform::other));
  }
  CategoryLexicon lex = standin_lexicon();
  FunctionWordMap words(lex);
  std::vector<std::size_t> checkpoints = {100, 200, 500};
  auto v = conversation_mirroring(c, words, checkpoints);
  ASSERT_TRUE(v[0] && v[1]);
  EXPECT_NEAR(*v[0], 1.0, 1e-3);
  EXPECT_NEAR(*v[1], 1.0, 1e-3);
  EXPECT_FALSE(v[2]);
}

TEST(Mirroring, GroupOfOneAndMissingCheckpoints) {
  Corpus corpus;
  corpus.author_id = "author";
  Conversation c;
  c.partner_id = "p";
  for (int i = 0; i < 120; ++i) {
    const bool author = i % 2 == 1;
    c.messages.push_back(make_message(author ? "author" : "p", author, i + 1, author ? "the the" : "and i",
                                      Platform::other));
  }
  corpus.conversations.push_back(c);
  SpeakerGroup g{"solo", std::nullopt, 0, {"p"}};
  CategoryLexicon lex = standin_lexicon();
  auto series = mirroring_curve(corpus, {g}, lex);
  ASSERT_EQ(series.size(), 1u);
  EXPECT_EQ(series[0].people[0], 1u);
  ASSERT_TRUE(series[0].mean[0]);
  FunctionWordMap words(lex);
  EXPECT_EQ(*series[0].mean[0], *conversation_mirroring(c, words, std::vector<std::size_t>{100})[0]);
  // Disjoint sides: article, conj and ppron score about 0, the six unused categories 1.
  EXPECT_NEAR(*series[0].mean[0], 6.0 / 9.0, 1e-3);
  EXPECT_EQ(series[0].people[1], 0u);
  EXPECT_FALSE(series[0].mean[1]);
  std::ostringstream out;
  write_mirroring_csv(out, series);
  EXPECT_NE(out.str().find("solo,500,0,\n"), std::string::npos);
}

TEST(Clusters, TwoTrianglesOfMentions) {
  // Partners a,b,c mention each other; d,e,f likewise; the author mentions no one.
  Corpus corpus;
  corpus.author_id = "author";
  AliasTable aliases;
  aliases.aliases["author"] = {"me"};
  const std::vector<std::vector<std::string>> groups = {{"a", "b", "c"}, {"d", "e", "f"}};
  for (const auto& g : groups) {
    for (const auto& id : g) {
      aliases.aliases[id] = {id + "name"};
      std::vector<std::string> texts;
      std::vector<Timestamp> times;
      for (const auto& other : g) {
        if (other == id) continue;
        texts.push_back("saw " + other + "name");
        times.push_back(static_cast<Timestamp>(times.size() + 1));
      }
      corpus.conversations.push_back(fixtures::conversation(id, texts, times, std::vector<bool>(texts.size(), false)));
    }
  }
  MentionGraph graph = build_mention_graph(corpus, aliases);
  ClusterReport r = cluster_report(graph, corpus, nullptr, WeightMode::inverted, 1);
  // The isolated author is its own community.
  EXPECT_EQ(r.partition.community_count, 3u);
  const auto& c = r.partition.community;
  EXPECT_EQ(c[1], c[2]);
  EXPECT_EQ(c[2], c[3]);
  EXPECT_EQ(c[4], c[5]);
  EXPECT_NE(c[1], c[4]);
  EXPECT_NE(c[0], c[1]);
  EXPECT_NEAR(r.partition.modularity, 0.5, 1e-12);
  std::ostringstream out;
  write_cluster_csv(out, r);
  EXPECT_NE(out.str().find("a,"), std::string::npos);

  Corpus lonely;
  lonely.author_id = "author";
  lonely.conversations.push_back(fixtures::conversation("x", {"hi"}, {1}));
  MentionGraph empty = build_mention_graph(lonely, aliases);
  ClusterReport solo = cluster_report(empty, lonely, nullptr, WeightMode::inverted, 1);
  EXPECT_EQ(solo.partition.community_count, 2u);
}

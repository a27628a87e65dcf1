#include <gtest/gtest.h>

#include <sstream>

#include "speakerattr/common.hpp"
#include "speakerattr/lexicon.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace speakerattr;

namespace {

CategoryLexicon parse(const std::string& text) {
  std::istringstream in(text);
  return CategoryLexicon::parse(in, "inline");
}

const char* kSmall =
    "%\n1\tposemo\n2\tnegemo\n3\tfamily\n%\n"
    "happ*\t1\nhappy\t1\nsad\t2\nworr*\t2,1\nmom\t3\nmo*\t3,2\n";

}  // namespace

TEST(Lexicon, ParsesCategoriesAndMergesRepeatedPatterns) {
  CategoryLexicon lex = parse(kSmall);
  EXPECT_EQ(lex.categories(), (std::vector<std::string>{"posemo", "negemo", "family"}));
  EXPECT_EQ(lex.category_index("family"), 2u);
  std::vector<std::size_t> hit;
  lex.match("happy", hit);
  EXPECT_EQ(hit, (std::vector<std::size_t>{0}));
  lex.match("worried", hit);
  EXPECT_EQ(hit, (std::vector<std::size_t>{0, 1}));
  lex.match("mom", hit);
  EXPECT_EQ(hit, (std::vector<std::size_t>{1, 2}));
  lex.match("xyz", hit);
  EXPECT_TRUE(hit.empty());
}

TEST(Lexicon, RejectsMalformedFiles) {
  EXPECT_THROW(parse("1\tposemo\n"), ParseError);
  EXPECT_THROW(parse("%\n1\tposemo\n"), ParseError);
  EXPECT_THROW(parse("%\n1\tposemo\n%\nhap*py\t1\n"), ParseError);
  EXPECT_THROW(parse("%\n1\tposemo\n%\nhappy\t7\n"), ParseError);
  EXPECT_THROW(parse("%\n1\ta\n1\tb\n%\n"), ParseError);
}

TEST(Lexicon, MatchesBruteForceScan) {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    CategoryLexicon lex = fixtures::random_lexicon(rng);
    auto tokens = fixtures::random_tokens(rng, 1 + rng.below(30));
    auto expected = oracles::naive_category_counts(tokens, lex);
    auto got = category_counts(tokens, lex);
    ASSERT_EQ(got, expected) << "trial " << trial;
  }
}

TEST(Lexicon, CategoryCountsAreScaleInvariant) {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    CategoryLexicon lex = fixtures::random_lexicon(rng);
    auto tokens = fixtures::random_tokens(rng, 1 + rng.below(20));
    std::vector<std::string> repeated;
    const std::size_t k = 2 + rng.below(5);
    for (std::size_t r = 0; r < k; ++r) repeated.insert(repeated.end(), tokens.begin(), tokens.end());
    auto a = category_counts(tokens, lex);
    auto b = category_counts(repeated, lex);
    for (std::size_t c = 0; c < a.size(); ++c) ASSERT_NEAR(a[c], b[c], 1e-12) << "trial " << trial;
  }
}

TEST(Lexicon, TalliesMergeLikeConcatenation) {
  CategoryLexicon lex = parse(kSmall);
  std::vector<std::string> x = {"happy", "sad", "mom"}, y = {"worry", "tree"};
  CategoryTally a(lex.size()), b(lex.size());
  a.add(x, lex);
  b.add(y, lex);
  a.merge(b);
  std::vector<std::string> xy = {"happy", "sad", "mom", "worry", "tree"};
  EXPECT_EQ(a.normalized(), category_counts(xy, lex));
}

TEST(Lsm, SymmetricOnRandomProfiles) {
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    auto a = fixtures::random_profile(rng), b = fixtures::random_profile(rng);
    ASSERT_EQ(lsm(a, b), lsm(b, a)) << "trial " << trial;
    const double v = lsm(a, b);
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(Lsm, SelfMatchIsNearOne) {
  Rng rng(10);
  for (int trial = 0; trial < 1000; ++trial) {
    auto a = fixtures::random_profile(rng);
    ASSERT_GE(lsm(a, a), 1.0 - 9 * kLsmEpsilon) << "trial " << trial;
  }
  FunctionWordProfile zero{};
  EXPECT_DOUBLE_EQ(lsm(zero, zero), 1.0);
}

TEST(Lsm, HandComputedValue) {
  FunctionWordProfile a{}, b{};
  a[0] = 0.2;
  b[0] = 0.1;
  a[1] = 0.1;  // b[1] = 0 scores 1 - 0.1 / (0.1 + eps)
  const double eps = kLsmEpsilon;
  const double expected = (1.0 - 0.1 / (0.3 + eps) + 1.0 - 0.1 / (0.1 + eps) + 7.0) / 9.0;
  EXPECT_NEAR(lsm(a, b), expected, 1e-15);
}

TEST(Dominance, RanksByCoverageRatio) {
  CategoryLexicon lex = parse(kSmall);
  std::vector<std::string> group = {"mom", "mom", "happy", "x"};
  std::vector<std::string> rest = {"happy", "sad", "x", "x"};
  auto scores = dominance(group, rest, lex);
  ASSERT_EQ(scores.size(), 3u);
  EXPECT_EQ(lex.categories()[scores[0].category], "family");
  const double eps = kDominanceSmoothing;
  EXPECT_NEAR(scores[0].score, (0.5 + eps) / (0.0 + eps), 1e-6);
  EXPECT_NEAR(scores[0].group_coverage, 0.5, 1e-15);
  std::vector<std::string> empty;
  EXPECT_THROW(dominance(empty, rest, lex), Error);
}

TEST(FunctionWords, StandInLexiconHasAllNineCategories) {
  CategoryLexicon lex = standin_lexicon();
  FunctionWordMap map(lex);
  std::vector<std::string> tokens = {"the", "and", "not", "zzzz"};
  FunctionWordCounts c = map.count(tokens);
  EXPECT_EQ(c.tokens, 4.0);
  auto p = c.profile();
  EXPECT_GT(p[2], 0.0);  // article
  EXPECT_GT(p[3], 0.0);  // conj
  EXPECT_GT(p[7], 0.0);  // negate
  EXPECT_THROW(FunctionWordMap(parse(kSmall)), Error);
}

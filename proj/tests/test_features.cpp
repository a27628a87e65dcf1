#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "speakerattr/common.hpp"
#include "speakerattr/features.hpp"
#include "speakerattr/time_util.hpp"
#include "support/fixtures.hpp"

using namespace speakerattr;

namespace {

FeatureMask text_kinds() {
  FeatureMask m;
  for (FeatureKind k : {FeatureKind::liwc, FeatureKind::time, FeatureKind::frequency, FeatureKind::style}) m.set(k);
  return m;
}

}  // namespace

TEST(TimeFeatures, ConversationTableFixture) {
  const Timestamp day = from_civil(2016, 3, 14);
  auto at = [&](unsigned h, unsigned m, unsigned s) { return day + h * 3600 + m * 60 + s; };
  Conversation c = fixtures::conversation(
      "p", {"is it possible to move it back?", "sure", "ok thanks", "see you then", "bye"},
      {at(15, 45, 6), at(15, 45, 20), at(15, 45, 25), at(15, 45, 29), at(15, 45, 52)},
      {false, true, false, false, true});
  auto w = build_windows(c);
  ASSERT_EQ(w.size(), 1u);
  auto t = time_features(w[0].messages());
  ASSERT_EQ(t.size(), time_dim(5));
  EXPECT_EQ(t[0], 46.0);
  EXPECT_EQ(std::vector<double>(t.begin() + 1, t.begin() + 5), (std::vector<double>{14, 5, 4, 23}));
  EXPECT_DOUBLE_EQ(t[5], 14.0 / 31.0);
  for (int m = 0; m < 12; ++m) EXPECT_EQ(t[6 + m], m == 2 ? 1.0 : 0.0);
  EXPECT_DOUBLE_EQ(t[18], 1.6);
  EXPECT_EQ(std::vector<double>(t.begin() + 19, t.begin() + 23), (std::vector<double>{0, 1, 0, 0}));
  EXPECT_DOUBLE_EQ(t[23], 15.0 / 23.0);

  auto f = frequency_features(w[0].messages(), w[0].history());
  ASSERT_EQ(f.size(), frequency_dim(5));
  EXPECT_EQ(std::vector<double>(f.begin(), f.begin() + 4), (std::vector<double>{0, 0, 0, 0}));
  EXPECT_EQ(std::vector<double>(f.begin() + 4, f.end()), (std::vector<double>{0, 1, 0, 0, 1}));
}

TEST(TimeFeatures, SeasonsAndOrderCheck) {
  auto one = [](Timestamp t) {
    std::vector<Message> m = {make_message("p", false, t, "x", Platform::other)};
    return time_features(m);
  };
  // One message: elapsed, day, 12 months, year, then the four seasons from index 15.
  EXPECT_EQ(one(from_civil(2019, 12, 31))[15], 1.0);  // December is winter
  EXPECT_EQ(one(from_civil(2019, 9, 1))[18], 1.0);    // September is fall
  EXPECT_EQ(one(from_civil(2019, 6, 1))[17], 1.0);
  std::vector<Message> bad = {make_message("p", false, 10, "x", Platform::other),
                              make_message("p", false, 5, "y", Platform::other)};
  EXPECT_THROW(time_features(bad), Error);
}

TEST(FrequencyFeatures, CountsHistoryHorizons) {
  const Timestamp t0 = from_civil(2020, 6, 1);
  std::vector<Message> history = {make_message("p", false, t0 - 40 * 86400, "a", Platform::other),
                                  make_message("p", false, t0 - 10 * 86400, "b", Platform::other),
                                  make_message("p", true, t0 - 3 * 86400, "c", Platform::other),
                                  make_message("p", false, t0 - 3600, "d", Platform::other)};
  std::vector<Message> window = {make_message("p", true, t0, "e", Platform::other),
                                 make_message("p", false, t0 + 1, "f", Platform::other)};
  auto f = frequency_features(window, history);
  EXPECT_DOUBLE_EQ(f[0], std::log1p(1.0));
  EXPECT_DOUBLE_EQ(f[1], std::log1p(2.0));
  EXPECT_DOUBLE_EQ(f[2], std::log1p(3.0));
  EXPECT_DOUBLE_EQ(f[3], std::log1p(4.0));
  EXPECT_EQ(f[4], 1.0);
  EXPECT_EQ(f[5], 0.0);
}

TEST(LiwcFeatures, LayoutAndCosine) {
  CategoryLexicon lex = standin_lexicon();
  std::vector<Message> w = {make_message("p", false, 1, "the mom", Platform::other),
                            make_message("a", true, 2, "the mom", Platform::other)};
  auto f = liwc_features(w, lex);
  const std::size_t c = lex.size();
  ASSERT_EQ(f.size(), liwc_dim(c));
  EXPECT_NEAR(f[2 * c], 1.0, 1e-12);  // identical sides
  for (std::size_t i = 0; i < c; ++i) {
    EXPECT_EQ(f[i], f[c + i]);
    EXPECT_EQ(f[2 * c + 1 + i], f[i] + f[c + i]);
  }
  std::vector<Message> one_side = {make_message("p", false, 1, "the mom", Platform::other)};
  EXPECT_EQ(liwc_features(one_side, lex)[2 * c], 0.0);
}

TEST(AttributeFeatures, BitsAndOneHot) {
  AttributeProfile p(std::array<std::uint8_t, kAttributeCount>{0, 1, 1, 0, 1, 0, 1});
  EXPECT_EQ(attribute_features(p, Attribute::family), (std::vector<double>{0, 1, 0, 1, 0, 0, 1, 0}));
  EXPECT_EQ(attribute_features(p, Attribute::relative_age), (std::vector<double>{1, 0, 1, 0, 1, 0}));
}

TEST(Normalizer, ZScoreFloorAndClamp) {
  Eigen::MatrixXd rows(4, 2);
  rows << 1, 5, 2, 5, 3, 5, 4, 5;
  Normalizer n = Normalizer::fit(rows);
  EXPECT_DOUBLE_EQ(n.mean()(0), 2.5);
  EXPECT_DOUBLE_EQ(n.sigma()(0), std::sqrt(1.25));
  EXPECT_DOUBLE_EQ(n.sigma()(1), Normalizer::kSigmaFloor);
  Eigen::VectorXd v(2);
  v << 2.5 + std::sqrt(1.25), 6.0;
  Eigen::VectorXd z = n.apply(v);
  EXPECT_NEAR(z(0), 1.0, 1e-12);
  EXPECT_EQ(z(1), Normalizer::kClamp);
  v << -1e9, 5.0;
  z = n.apply(v);
  EXPECT_EQ(z(0), -Normalizer::kClamp);
  EXPECT_EQ(z(1), 0.0);
  EXPECT_THROW(Normalizer::fit(rows.topRows(1)), Error);
}

TEST(Featurize, LaterMessagesNeverChangeAWindow) {
  CategoryLexicon lex = standin_lexicon();
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    Corpus a;
    a.author_id = "author";
    a.conversations.push_back(fixtures::random_conversation(rng, "p", 8 + rng.below(150)));
    const Conversation& conv = a.conversations[0];
    auto windows = build_windows(conv);
    const std::size_t pick = rng.below(windows.size());
    const std::size_t end = windows[pick].start + windows[pick].size;

    Corpus b = a;
    Conversation& mod = b.conversations[0];
    Timestamp t = mod.messages[end - 1].timestamp;
    std::vector<Message> tail;
    const std::size_t extra = rng.below(20);
    for (std::size_t i = 0; i < extra; ++i) {
      t += static_cast<Timestamp>(rng.below(100000));
      const bool by_author = rng.bernoulli(0.5);
      tail.push_back(make_message(by_author ? "author" : "p", by_author, t, fixtures::random_text(rng), Platform::other));
    }
    mod.messages.resize(end);
    mod.messages.insert(mod.messages.end(), tail.begin(), tail.end());

    MessageCache ca(a, lex), cb(b, lex);
    auto wa = build_windows(a.conversations[0]);
    auto wb = build_windows(b.conversations[0]);
    FeatureInputs ia, ib;
    ia.cache = &ca;
    ib.cache = &cb;
    std::vector<ContextWindow> one_a = {wa[pick]}, one_b = {wb[pick]};
    auto fa = featurize(one_a, text_kinds(), ia);
    auto fb = featurize(one_b, text_kinds(), ib);
    ASSERT_EQ(fixtures::row_of(fa, 0), fixtures::row_of(fb, 0)) << "trial " << trial;
  }
}

TEST(Featurize, CachedMatchesDirectAndParallelMatchesSerial) {
  CategoryLexicon lex = standin_lexicon();
  Rng rng(3);
  Corpus c;
  c.author_id = "author";
  for (int i = 0; i < 4; ++i) c.conversations.push_back(fixtures::random_conversation(rng, "p" + std::to_string(i), 40 + rng.below(200)));
  MessageCache cache(c, lex);
  FunctionWordMap fw(lex);
  std::vector<ContextWindow> windows;
  for (const auto& conv : c.conversations) {
    auto w = build_windows(conv);
    windows.insert(windows.end(), w.begin(), w.end());
  }
  for (std::size_t i = 0; i < windows.size(); i += 7) {
    EXPECT_EQ(liwc_features(windows[i], cache), liwc_features(windows[i].messages(), lex));
    auto direct = style_features(windows[i].messages(), windows[i].history(), fw);
    auto cached = style_features(windows[i], cache);
    EXPECT_NEAR(direct[0], cached[0], 1e-12);
    EXPECT_NEAR(direct[1], cached[1], 1e-12);
  }
  FeatureInputs in;
  in.cache = &cache;
  auto par = featurize(windows, text_kinds(), in);
  auto ser = featurize_serial(windows, text_kinds(), in);
  for (FeatureKind k : kFeatureKinds) EXPECT_EQ(par.kind[index_of(k)], ser.kind[index_of(k)]);
}

TEST(Featurize, GraphRowsAndSentinelForIsolatedPartners) {
  Corpus c;
  c.author_id = "author";
  c.conversations.push_back(fixtures::conversation("bo", {"cy is here", "ok", "x", "y", "z"}, {1, 2, 3, 4, 5}));
  c.conversations.push_back(fixtures::conversation("cy", {"a", "b", "c", "d", "e"}, {1, 2, 3, 4, 5}));
  c.conversations.push_back(fixtures::conversation("dee", {"a", "b", "c", "d", "e"}, {1, 2, 3, 4, 5}));
  AliasTable aliases;
  aliases.aliases = {{"author", {"me"}}, {"bo", {"bo"}}, {"cy", {"cy"}}, {"dee", {"dee"}}};
  MentionGraph g = build_mention_graph(c, aliases);
  DistanceMatrix d = shortest_paths(edge_weights(g, WeightMode::inverted));
  auto bo = graph_features("bo", g, d);
  EXPECT_EQ(bo, (std::vector<double>{d.sentinel, 0.0, 1.0, d.sentinel}));
  EXPECT_EQ(graph_features("dee", g, d), std::vector<double>(4, d.sentinel));
}

TEST(FeatureCache, RoundTripAndFingerprintMismatch) {
  FeatureMatrices m;
  m.mask.set(FeatureKind::time);
  m.mask.set(FeatureKind::style);
  m.kind[index_of(FeatureKind::time)] = Eigen::MatrixXd::Random(3, 24);
  m.kind[index_of(FeatureKind::style)] = Eigen::MatrixXd::Random(3, 2);
  std::stringstream buf;
  write_feature_cache(buf, m, "abc");
  std::string fp;
  FeatureMatrices back = read_feature_cache(buf, "cache", &fp);
  EXPECT_EQ(fp, "abc");
  EXPECT_EQ(back.mask, m.mask);
  EXPECT_EQ(back.kind[index_of(FeatureKind::time)], m.kind[index_of(FeatureKind::time)]);
  auto path = std::filesystem::temp_directory_path() / "speakerattr_feature_cache.bin";
  save_feature_cache(path, m, "abc");
  EXPECT_TRUE(load_feature_cache(path, "abc").has_value());
  EXPECT_FALSE(load_feature_cache(path, "other").has_value());
  std::filesystem::remove(path);
}

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace speakerattr;

namespace {

Model make_model(const fixtures::GradProblem& p) { return Model(p.config, init_parameters(p.config, p.table), &p.table); }

}  // namespace

TEST(ModelGradient, JointModelMatchesFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto p = fixtures::grad_problem(seed, 8, true, false);
    Model m = make_model(p);
    for (const auto& [name, err] : oracles::gradient_errors(m, p.data)) EXPECT_LE(err, 1e-4) << name << " seed " << seed;
  }
}

TEST(ModelGradient, SingleDecoderWithAttributesAndFineTuning) {
  auto p = fixtures::grad_problem(11, 8, false, true);
  Model m = make_model(p);
  auto errors = oracles::gradient_errors(m, p.data);
  EXPECT_TRUE(errors.count("embeddings"));
  EXPECT_TRUE(errors.count("encoder.attributes.w1"));
  for (const auto& [name, err] : errors) EXPECT_LE(err, 1e-4) << name;
}

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& v) { return (1.0 + (-v.array()).exp()).inverse().matrix(); }

// Straight-line LSTM over columns of x, returning the final hidden state.
Eigen::VectorXd hand_lstm(const LstmWeights& w, const Eigen::MatrixXd& x, bool reverse) {
  const Eigen::Index h = w.wh.cols();
  Eigen::VectorXd hp = Eigen::VectorXd::Zero(h), cp = Eigen::VectorXd::Zero(h);
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const Eigen::Index col = reverse ? x.cols() - 1 - k : k;
    Eigen::VectorXd a = w.wx * x.col(col) + w.wh * hp + w.b.col(0);
    Eigen::VectorXd i = sigmoid(a.segment(0, h)), f = sigmoid(a.segment(h, h));
    Eigen::VectorXd g = a.segment(2 * h, h).array().tanh(), o = sigmoid(a.segment(3 * h, h));
    cp = f.cwiseProduct(cp) + i.cwiseProduct(g);
    hp = o.cwiseProduct(Eigen::VectorXd(cp.array().tanh()));
  }
  return hp;
}

// Feature-only task: the label is the sign of the first feature.
struct Separable {
  EmbeddingTable table{4, 1};
  ModelConfig config;
  Dataset train, val;
};

Dataset separable_set(Rng& rng, std::size_t n) {
  Dataset d;
  d.features[index_of(FeatureKind::time)].resize(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (Eigen::Index c = 0; c < 3; ++c) d.features[index_of(FeatureKind::time)](r, c) = rng.normal();
    std::array<std::int8_t, kAttributeCount> y{};
    y[index_of(Attribute::family)] = d.features[index_of(FeatureKind::time)](r, 0) > 0 ? 0 : 1;
    d.labels.push_back(y);
    d.tokens.push_back({EmbeddingTable::kOtherMarker, 0});
    d.speakers.push_back("s" + std::to_string(i % 5));
  }
  return d;
}

Separable separable(std::uint64_t seed) {
  Separable s;
  Rng rng(seed);
  s.config.embedding_dim = 4;
  s.config.lstm_hidden = 4;
  s.config.encoder_hidden = 8;
  s.config.decoder_hidden = 8;
  s.config.feature_dims[index_of(FeatureKind::time)] = 3;
  s.config.learning_rate = 0.01;
  s.config.epochs = 30;
  s.config.patience = 30;
  s.config.batch_size = 16;
  s.config.seed = seed;
  s.train = separable_set(rng, 400);
  s.val = separable_set(rng, 200);
  return s;
}

}  // namespace

TEST(ModelForward, ContextEncoderMatchesHandUnroll) {
  auto p = fixtures::grad_problem(5, 6, false, false);
  Model m = make_model(p);
  Rng rng(1);
  Eigen::MatrixXd rows(7, 6);
  for (auto& x : rows.reshaped()) x = rng.normal();
  Eigen::VectorXd rho = m.encode_context(rows);
  Eigen::MatrixXd x = rows.transpose();
  Eigen::VectorXd expected(12);
  expected << hand_lstm(m.params().forward, x, false), hand_lstm(m.params().backward, x, true);
  EXPECT_LE((rho - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ModelForward, SoftmaxIsStableAndNormalized) {
  Eigen::VectorXd z(3);
  z << 1000.0, 1000.0, -1000.0;
  Eigen::VectorXd p = softmax(z);
  EXPECT_NEAR(p(0), 0.5, 1e-15);
  EXPECT_NEAR(p(2), 0.0, 1e-15);
  z << 1.0, 2.0, 3.0;
  p = softmax(z);
  const double s = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  EXPECT_NEAR(p(2), std::exp(3.0) / s, 1e-15);
  EXPECT_NEAR(p.sum(), 1.0, 1e-15);
}

TEST(ModelForward, ProbabilitiesPerDecoder) {
  auto p = fixtures::grad_problem(6, 5, true, false);
  Model m = make_model(p);
  Prediction pr = m.predict(p.data.view(0));
  for (Attribute a : kAttributes) {
    ASSERT_EQ(pr.probs[index_of(a)].size(), value_count(a));
    EXPECT_NEAR(pr.probs[index_of(a)].sum(), 1.0, 1e-12);
  }
  const double ce = cross_entropy(pr, p.data.labels[0], p.config.decoders());
  EXPECT_NEAR(ce, m.loss(p.data.view(0), p.data.labels[0]), 1e-12);
}

TEST(Training, ZeroEpochsReturnsInitialParameters) {
  auto s = separable(3);
  s.config.epochs = 0;
  TrainResult r = train_model(s.config, s.table, s.train, s.val);
  EXPECT_EQ(r.params, init_parameters(s.config, s.table));
  EXPECT_EQ(r.best_epoch, 0u);
  EXPECT_TRUE(r.curve.empty());
}

TEST(Training, SeparableTaskReachesHighAccuracy) {
  auto s = separable(4);
  TrainResult r = train_model(s.config, s.table, s.train, s.val);
  Model m(s.config, r.params, &s.table);
  EXPECT_GT(evaluate_dataset(m, s.val).accuracy, 95.0);
}

TEST(Training, SameSeedGivesIdenticalParameters) {
  auto s = separable(5);
  s.config.epochs = 3;
  TrainResult a = train_model(s.config, s.table, s.train, s.val);
  TrainResult b = train_model(s.config, s.table, s.train, s.val);
  EXPECT_EQ(a.params, b.params);
  ASSERT_EQ(a.curve.size(), b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) EXPECT_EQ(a.curve[i].val_loss, b.curve[i].val_loss);
  s.config.seed = 6;
  TrainResult c = train_model(s.config, s.table, s.train, s.val);
  EXPECT_NE(a.params, c.params);
}

TEST(Training, EarlyStoppingKeepsBestEpoch) {
  auto s = separable(7);
  s.config.epochs = 12;
  s.config.patience = 1;
  s.config.learning_rate = 0.2;
  TrainResult r = train_model(s.config, s.table, s.train, s.val);
  ASSERT_FALSE(r.curve.empty());
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0;
  for (const auto& e : r.curve) {
    if (e.val_loss < best) {
      best = e.val_loss;
      best_epoch = e.epoch;
    }
  }
  EXPECT_EQ(r.best_epoch, best_epoch);
}

TEST(Training, ParallelPredictionsMatchSerial) {
  auto p = fixtures::grad_problem(8, 6, true, false);
  Model m = make_model(p);
  auto a = predict_all(m, p.data);
  auto b = predict_all_serial(m, p.data);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (Attribute at : kAttributes) EXPECT_EQ(a[i].probs[index_of(at)], b[i].probs[index_of(at)]);
  }
}

TEST(Checkpoint, RoundTripIsExact) {
  auto p = fixtures::grad_problem(9, 5, false, true);
  Checkpoint ck;
  ck.config = p.config;
  ck.params = init_parameters(p.config, p.table);
  ck.node_order = {"author", "a", "b"};
  Eigen::VectorXd mean(2), sigma(2);
  mean << 0.1, -3.0;
  sigma << 1.0 / 3.0, 2.0;
  ck.normalizers[index_of(FeatureKind::style)] = Normalizer(mean, sigma);
  ck.metadata["row"] = "All";
  std::stringstream buf;
  write_checkpoint(buf, ck);
  const std::string bytes = buf.str();
  Checkpoint back = read_checkpoint(buf, "ck");
  EXPECT_EQ(back.config, ck.config);
  EXPECT_EQ(back.params, ck.params);
  EXPECT_EQ(back.node_order, ck.node_order);
  EXPECT_EQ(back.metadata, ck.metadata);
  ASSERT_TRUE(back.normalizers[index_of(FeatureKind::style)]);
  EXPECT_EQ(back.normalizers[index_of(FeatureKind::style)]->sigma(), sigma);
  std::ostringstream again;
  write_checkpoint(again, back);
  EXPECT_EQ(again.str(), bytes);
  std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(read_checkpoint(truncated, "ck"), ParseError);
}

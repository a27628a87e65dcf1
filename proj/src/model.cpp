#include "speakerattr/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "speakerattr/common.hpp"

namespace speakerattr {

using json = nlohmann::ordered_json;

std::vector<Attribute> ModelConfig::decoders() const {
  if (joint) return {kAttributes.begin(), kAttributes.end()};
  return {target};
}

std::size_t ModelConfig::encoding_dim() const {
  std::size_t dim = 2 * lstm_hidden;
  for (FeatureKind k : kFeatureKinds) {
    if (enabled(k)) dim += encoder_hidden;
  }
  return dim;
}

void ModelConfig::validate() const {
  if (embedding_dim == 0 || lstm_hidden == 0 || encoder_hidden == 0 || decoder_hidden == 0) {
    throw Error("model sizes must be positive");
  }
  if (batch_size == 0) throw Error("batch size must be positive");
  if (!(learning_rate > 0.0)) throw Error("learning rate must be positive");
  if (joint && enabled(FeatureKind::attributes)) {
    throw Error("attribute features depend on the target and cannot be combined with joint decoding");
  }
}

namespace {

template <class Fn>
void each_tensor(auto& p, Fn&& fn) {
  auto lstm = [&](const char* prefix, auto& l) {
    fn(std::string(prefix) + ".wx", l.wx);
    fn(std::string(prefix) + ".wh", l.wh);
    fn(std::string(prefix) + ".b", l.b);
  };
  auto dense = [&](const std::string& prefix, auto& d) {
    fn(prefix + ".w1", d.w1);
    fn(prefix + ".b1", d.b1);
    fn(prefix + ".w2", d.w2);
    fn(prefix + ".b2", d.b2);
  };
  lstm("lstm.forward", p.forward);
  lstm("lstm.backward", p.backward);
  for (FeatureKind k : kFeatureKinds) {
    if (p.encoders[index_of(k)]) dense("encoder." + std::string(feature_kind_name(k)), *p.encoders[index_of(k)]);
  }
  for (Attribute a : kAttributes) {
    if (p.decoders[index_of(a)]) dense("decoder." + std::string(attribute_name(a)), *p.decoders[index_of(a)]);
  }
  fn(std::string("markers"), p.markers);
  if (p.embeddings.size() > 0) fn(std::string("embeddings"), p.embeddings);
}

}  // namespace

ModelParameters ModelParameters::zeros_like() const {
  ModelParameters z = *this;
  each_tensor(z, [](const std::string&, Eigen::MatrixXd& m) { m.setZero(); });
  return z;
}

std::vector<std::pair<std::string, Eigen::MatrixXd*>> ModelParameters::tensors() {
  std::vector<std::pair<std::string, Eigen::MatrixXd*>> out;
  each_tensor(*this, [&](const std::string& name, Eigen::MatrixXd& m) { out.emplace_back(name, &m); });
  return out;
}

std::vector<std::pair<std::string, const Eigen::MatrixXd*>> ModelParameters::tensors() const {
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> out;
  each_tensor(*this, [&](const std::string& name, const Eigen::MatrixXd& m) { out.emplace_back(name, &m); });
  return out;
}

std::size_t ModelParameters::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, m] : tensors()) n += static_cast<std::size_t>(m->size());
  return n;
}

bool ModelParameters::all_finite() const {
  for (const auto& [name, m] : tensors()) {
    if (!m->allFinite()) return false;
  }
  return true;
}

bool operator==(const ModelParameters& a, const ModelParameters& b) {
  const auto ta = a.tensors(), tb = b.tensors();
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    const Eigen::MatrixXd& x = *ta[i].second;
    const Eigen::MatrixXd& y = *tb[i].second;
    if (ta[i].first != tb[i].first || x.rows() != y.rows() || x.cols() != y.cols()) return false;
    if (x.size() > 0 && x != y) return false;
  }
  return true;
}

namespace {

// Allocates every tensor a config implies, with zero contents.
ModelParameters shaped_parameters(const ModelConfig& config, Eigen::Index vocab) {
  const auto d = static_cast<Eigen::Index>(config.embedding_dim);
  const auto h = static_cast<Eigen::Index>(config.lstm_hidden);
  const auto s = static_cast<Eigen::Index>(config.encoder_hidden);
  const auto sd = static_cast<Eigen::Index>(config.decoder_hidden);
  ModelParameters p;
  for (LstmWeights* l : {&p.forward, &p.backward}) {
    l->wx = Eigen::MatrixXd::Zero(4 * h, d);
    l->wh = Eigen::MatrixXd::Zero(4 * h, h);
    l->b = Eigen::MatrixXd::Zero(4 * h, 1);
  }
  for (FeatureKind k : kFeatureKinds) {
    if (!config.enabled(k)) continue;
    const auto t = static_cast<Eigen::Index>(config.feature_dims[index_of(k)]);
    p.encoders[index_of(k)] = DenseLayers{Eigen::MatrixXd::Zero(s, t), Eigen::MatrixXd::Zero(s, 1),
                                          Eigen::MatrixXd::Zero(s, s), Eigen::MatrixXd::Zero(s, 1)};
  }
  const auto r = static_cast<Eigen::Index>(config.encoding_dim());
  for (Attribute a : config.decoders()) {
    p.decoders[index_of(a)] = DenseLayers{Eigen::MatrixXd::Zero(sd, r), Eigen::MatrixXd::Zero(sd, 1),
                                          Eigen::MatrixXd::Zero(value_count(a), sd),
                                          Eigen::MatrixXd::Zero(value_count(a), 1)};
  }
  p.markers = Eigen::MatrixXd::Zero(2, d);
  if (config.fine_tune_embeddings) p.embeddings = Eigen::MatrixXd::Zero(vocab, d);
  return p;
}

}  // namespace

ModelParameters init_parameters(const ModelConfig& config, const EmbeddingTable& table) {
  config.validate();
  if (table.dim() != config.embedding_dim) throw Error("embedding table dimension does not match the model config");
  const auto h = static_cast<Eigen::Index>(config.lstm_hidden);
  ModelParameters p = shaped_parameters(config, static_cast<Eigen::Index>(table.size()));
  p.markers.row(0) = table.vector(EmbeddingTable::kAuthorMarker);
  p.markers.row(1) = table.vector(EmbeddingTable::kOtherMarker);
  if (config.fine_tune_embeddings) p.embeddings = table.matrix();

  Rng rng(derive_seed(config.seed, "init"));
  for (auto& [name, m] : p.tensors()) {
    if (name == "markers" || name == "embeddings" || m->cols() == 1) continue;
    const double bound = std::sqrt(6.0 / static_cast<double>(m->rows() + m->cols()));
    for (Eigen::Index c = 0; c < m->cols(); ++c) {
      for (Eigen::Index i = 0; i < m->rows(); ++i) (*m)(i, c) = rng.uniform(-bound, bound);
    }
  }
  p.forward.b.block(h, 0, h, 1).setOnes();
  p.backward.b.block(h, 0, h, 1).setOnes();
  return p;
}

int Prediction::argmax(Attribute a) const {
  const auto& v = probs[index_of(a)];
  if (v.size() == 0) throw Error("no prediction for attribute " + std::string(attribute_name(a)));
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return static_cast<int>(best);
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Activations of one LSTM direction, stored in processing order.
struct LstmTrace {
  Eigen::MatrixXd gates;  // 4H x n, post-activation
  Eigen::MatrixXd c;      // H x n
  Eigen::MatrixXd h;      // H x n
};

void lstm_run(const LstmWeights& w, const Eigen::MatrixXd& x, bool reverse, LstmTrace& t) {
  const Eigen::Index n = x.cols();
  const Eigen::Index h = w.wh.cols();
  Eigen::MatrixXd pre = w.wx * x;
  pre.colwise() += w.b.col(0);
  t.gates.resize(4 * h, n);
  t.c.resize(h, n);
  t.h.resize(h, n);
  Eigen::VectorXd hp = Eigen::VectorXd::Zero(h), cp = Eigen::VectorXd::Zero(h), a(4 * h);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index col = reverse ? n - 1 - k : k;
    a.noalias() = pre.col(col) + w.wh * hp;
    for (Eigen::Index i = 0; i < h; ++i) {
      const double ig = sigmoid(a[i]);
      const double fg = sigmoid(a[h + i]);
      const double gg = std::tanh(a[2 * h + i]);
      const double og = sigmoid(a[3 * h + i]);
      const double c = fg * cp[i] + ig * gg;
      t.gates(i, k) = ig;
      t.gates(h + i, k) = fg;
      t.gates(2 * h + i, k) = gg;
      t.gates(3 * h + i, k) = og;
      t.c(i, k) = c;
      t.h(i, k) = og * std::tanh(c);
    }
    hp = t.h.col(k);
    cp = t.c.col(k);
  }
}

// Backpropagation through time from a gradient on the final hidden state.
void lstm_backward(const LstmWeights& w, const Eigen::MatrixXd& x, const LstmTrace& t, bool reverse,
                   const Eigen::VectorXd& dh_last, LstmWeights& g, Eigen::MatrixXd& dx) {
  const Eigen::Index n = x.cols();
  const Eigen::Index h = w.wh.cols();
  Eigen::MatrixXd da(4 * h, n);
  Eigen::VectorXd dh = dh_last, dc = Eigen::VectorXd::Zero(h), dcol(4 * h);
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    const Eigen::Index col = reverse ? n - 1 - k : k;
    for (Eigen::Index i = 0; i < h; ++i) {
      const double ig = t.gates(i, k), fg = t.gates(h + i, k), gg = t.gates(2 * h + i, k), og = t.gates(3 * h + i, k);
      const double tc = std::tanh(t.c(i, k));
      const double cprev = k > 0 ? t.c(i, k - 1) : 0.0;
      const double d_o = dh[i] * tc;
      dc[i] += dh[i] * og * (1.0 - tc * tc);
      dcol[i] = dc[i] * gg * ig * (1.0 - ig);
      dcol[h + i] = dc[i] * cprev * fg * (1.0 - fg);
      dcol[2 * h + i] = dc[i] * ig * (1.0 - gg * gg);
      dcol[3 * h + i] = d_o * og * (1.0 - og);
      dc[i] *= fg;
    }
    da.col(col) = dcol;
    if (k > 0) g.wh.noalias() += dcol * t.h.col(k - 1).transpose();
    dh.noalias() = w.wh.transpose() * dcol;
  }
  g.wx.noalias() += da * x.transpose();
  g.b.col(0) += da.rowwise().sum();
  dx.noalias() += w.wx.transpose() * da;
}

}  // namespace

struct Forward {
  std::vector<std::int32_t> ids;
  Eigen::MatrixXd x;  // d x n
  LstmTrace fwd, bwd;
  Eigen::VectorXd encoding;
  std::array<Eigen::VectorXd, kFeatureKindCount> enc_hidden, enc_out;
  std::array<Eigen::VectorXd, kAttributeCount> dec_hidden;
  std::array<Eigen::VectorXd, kAttributeCount> logits;
};

Model::Model(ModelConfig config, ModelParameters params, const EmbeddingTable* table)
    : config_(std::move(config)), params_(std::move(params)), table_(table) {
  config_.validate();
  if (!table_) throw Error("model needs an embedding table");
  if (table_->dim() != config_.embedding_dim) throw Error("embedding table dimension does not match the model config");
  if (config_.fine_tune_embeddings && static_cast<std::size_t>(params_.embeddings.rows()) != table_->size()) {
    throw Error("fine-tuned embedding matrix does not match the table");
  }
}

Eigen::VectorXd Model::input_vector(std::int32_t id) const {
  if (id == EmbeddingTable::kAuthorMarker) return params_.markers.row(0).transpose();
  if (id == EmbeddingTable::kOtherMarker) return params_.markers.row(1).transpose();
  if (id == EmbeddingTable::kUnknown) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(config_.embedding_dim));
  if (config_.fine_tune_embeddings) return params_.embeddings.row(id).transpose();
  return table_->vector(id).transpose();
}

Eigen::VectorXd Model::encode_context(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() == 0) throw Error("context encoder needs at least one token");
  if (static_cast<std::size_t>(inputs.cols()) != config_.embedding_dim) throw Error("input width does not match d");
  Eigen::MatrixXd x = inputs.transpose();
  LstmTrace f, b;
  lstm_run(params_.forward, x, false, f);
  lstm_run(params_.backward, x, true, b);
  const Eigen::Index h = static_cast<Eigen::Index>(config_.lstm_hidden);
  Eigen::VectorXd rho(2 * h);
  rho << f.h.col(x.cols() - 1), b.h.col(x.cols() - 1);
  return rho;
}

Eigen::VectorXd Model::encode_context(const std::vector<std::int32_t>& ids) const {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(config_.embedding_dim));
  for (std::size_t i = 0; i < ids.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = input_vector(ids[i]).transpose();
  return encode_context(rows);
}

Eigen::VectorXd Model::encode_feature(FeatureKind kind, const Eigen::VectorXd& f) const {
  const auto& enc = params_.encoders[index_of(kind)];
  if (!enc) throw Error("feature kind " + std::string(feature_kind_name(kind)) + " is not enabled in this model");
  if (f.size() != enc->w1.cols()) throw Error("feature vector dimension does not match its encoder");
  Eigen::VectorXd hidden = (enc->w1 * f + enc->b1.col(0)).array().tanh();
  return (enc->w2 * hidden + enc->b2.col(0)).array().tanh();
}

Eigen::VectorXd Model::decode(Attribute a, const Eigen::VectorXd& encoding) const {
  const auto& dec = params_.decoders[index_of(a)];
  if (!dec) throw Error("model has no decoder for " + std::string(attribute_name(a)));
  Eigen::VectorXd hidden = (dec->w1 * encoding + dec->b1.col(0)).array().tanh();
  return softmax(dec->w2 * hidden + dec->b2.col(0));
}

void Model::forward(const ExampleView& ex, Forward& f) const {
  if (!ex.tokens || ex.tokens->empty()) throw Error("example without tokens");
  const auto& ids = *ex.tokens;
  const auto n = static_cast<Eigen::Index>(ids.size());
  const auto h = static_cast<Eigen::Index>(config_.lstm_hidden);
  f.x.resize(static_cast<Eigen::Index>(config_.embedding_dim), n);
  for (Eigen::Index i = 0; i < n; ++i) f.x.col(i) = input_vector(ids[static_cast<std::size_t>(i)]);
  lstm_run(params_.forward, f.x, false, f.fwd);
  lstm_run(params_.backward, f.x, true, f.bwd);
  f.encoding.resize(static_cast<Eigen::Index>(config_.encoding_dim()));
  f.encoding.head(h) = f.fwd.h.col(n - 1);
  f.encoding.segment(h, h) = f.bwd.h.col(n - 1);
  Eigen::Index offset = 2 * h;
  const auto s = static_cast<Eigen::Index>(config_.encoder_hidden);
  for (FeatureKind k : kFeatureKinds) {
    if (!config_.enabled(k)) continue;
    const auto& enc = *params_.encoders[index_of(k)];
    if (!ex.features[index_of(k)]) throw Error("example lacks " + std::string(feature_kind_name(k)) + " features");
    Eigen::Map<const Eigen::VectorXd> in(ex.features[index_of(k)], enc.w1.cols());
    f.enc_hidden[index_of(k)] = (enc.w1 * in + enc.b1.col(0)).array().tanh();
    f.enc_out[index_of(k)] = (enc.w2 * f.enc_hidden[index_of(k)] + enc.b2.col(0)).array().tanh();
    f.encoding.segment(offset, s) = f.enc_out[index_of(k)];
    offset += s;
  }
  for (Attribute a : config_.decoders()) {
    const auto& dec = *params_.decoders[index_of(a)];
    f.dec_hidden[index_of(a)] = (dec.w1 * f.encoding + dec.b1.col(0)).array().tanh();
    f.logits[index_of(a)] = dec.w2 * f.dec_hidden[index_of(a)] + dec.b2.col(0);
  }
}

Prediction Model::predict(const ExampleView& ex) const {
  Forward f;
  forward(ex, f);
  Prediction p;
  for (Attribute a : config_.decoders()) p.probs[index_of(a)] = softmax(f.logits[index_of(a)]);
  return p;
}

namespace {

double log_softmax_at(const Eigen::VectorXd& logits, int gold) {
  const double m = logits.maxCoeff();
  return logits[gold] - m - std::log((logits.array() - m).exp().sum());
}

int checked_gold(const std::array<std::int8_t, kAttributeCount>& gold, Attribute a) {
  const int g = gold[index_of(a)];
  if (g < 0 || g >= value_count(a)) throw Error("invalid gold label for " + std::string(attribute_name(a)));
  return g;
}

}  // namespace

double Model::loss(const ExampleView& ex, const std::array<std::int8_t, kAttributeCount>& gold) const {
  Forward f;
  forward(ex, f);
  double total = 0.0;
  for (Attribute a : config_.decoders()) total -= log_softmax_at(f.logits[index_of(a)], checked_gold(gold, a));
  return total;
}

double Model::loss_and_gradient(const ExampleView& ex, const std::array<std::int8_t, kAttributeCount>& gold,
                                ModelParameters& grad, std::map<std::int32_t, Eigen::VectorXd>* embedding_grad) const {
  Forward f;
  forward(ex, f);
  const auto h = static_cast<Eigen::Index>(config_.lstm_hidden);
  const auto s = static_cast<Eigen::Index>(config_.encoder_hidden);
  double total = 0.0;
  Eigen::VectorXd d_enc = Eigen::VectorXd::Zero(f.encoding.size());
  for (Attribute a : config_.decoders()) {
    const int g = checked_gold(gold, a);
    const auto& logits = f.logits[index_of(a)];
    total -= log_softmax_at(logits, g);
    Eigen::VectorXd dlogits = softmax(logits);
    dlogits[g] -= 1.0;
    const auto& dec = *params_.decoders[index_of(a)];
    auto& gd = *grad.decoders[index_of(a)];
    const auto& hid = f.dec_hidden[index_of(a)];
    gd.w2.noalias() += dlogits * hid.transpose();
    gd.b2.col(0) += dlogits;
    Eigen::VectorXd dz = (dec.w2.transpose() * dlogits).array() * (1.0 - hid.array().square());
    gd.w1.noalias() += dz * f.encoding.transpose();
    gd.b1.col(0) += dz;
    d_enc.noalias() += dec.w1.transpose() * dz;
  }
  Eigen::Index offset = 2 * h;
  for (FeatureKind k : kFeatureKinds) {
    if (!config_.enabled(k)) continue;
    const auto& enc = *params_.encoders[index_of(k)];
    auto& ge = *grad.encoders[index_of(k)];
    Eigen::Map<const Eigen::VectorXd> in(ex.features[index_of(k)], enc.w1.cols());
    const auto& out = f.enc_out[index_of(k)];
    const auto& hid = f.enc_hidden[index_of(k)];
    Eigen::VectorXd dz2 = d_enc.segment(offset, s).array() * (1.0 - out.array().square());
    ge.w2.noalias() += dz2 * hid.transpose();
    ge.b2.col(0) += dz2;
    Eigen::VectorXd dz1 = (enc.w2.transpose() * dz2).array() * (1.0 - hid.array().square());
    ge.w1.noalias() += dz1 * in.transpose();
    ge.b1.col(0) += dz1;
    offset += s;
  }
  Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(f.x.rows(), f.x.cols());
  lstm_backward(params_.forward, f.x, f.fwd, false, d_enc.head(h), grad.forward, dx);
  lstm_backward(params_.backward, f.x, f.bwd, true, d_enc.segment(h, h), grad.backward, dx);
  const auto& ids = *ex.tokens;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::int32_t id = ids[i];
    const auto col = dx.col(static_cast<Eigen::Index>(i));
    if (id == EmbeddingTable::kAuthorMarker) {
      grad.markers.row(0) += col.transpose();
    } else if (id == EmbeddingTable::kOtherMarker) {
      grad.markers.row(1) += col.transpose();
    } else if (id != EmbeddingTable::kUnknown && config_.fine_tune_embeddings) {
      if (embedding_grad) {
        auto [it, inserted] = embedding_grad->try_emplace(id, Eigen::VectorXd::Zero(col.size()));
        it->second += col;
      } else {
        grad.embeddings.row(id) += col.transpose();
      }
    }
  }
  return total;
}

double cross_entropy(const Prediction& p, const std::array<std::int8_t, kAttributeCount>& gold,
                     const std::vector<Attribute>& attributes) {
  double total = 0.0;
  for (Attribute a : attributes) {
    const auto& v = p.probs[index_of(a)];
    const int g = checked_gold(gold, a);
    if (v.size() == 0) throw Error("no prediction for attribute " + std::string(attribute_name(a)));
    total -= std::log(std::max(v[g], 1e-300));
  }
  return total;
}

// ---------------------------------------------------------------- checkpoint

namespace {

constexpr char kMagic[8] = {'S', 'A', 'T', 'T', 'R', 'C', 'K', '1'};
constexpr int kCheckpointVersion = 1;

json config_to_json(const ModelConfig& c) {
  json j;
  j["embedding_dim"] = c.embedding_dim;
  j["lstm_hidden"] = c.lstm_hidden;
  j["encoder_hidden"] = c.encoder_hidden;
  j["decoder_hidden"] = c.decoder_hidden;
  json dims = json::object();
  for (FeatureKind k : kFeatureKinds) dims[std::string(feature_kind_name(k))] = c.feature_dims[index_of(k)];
  j["feature_dims"] = dims;
  j["joint"] = c.joint;
  j["target"] = attribute_name(c.target);
  j["seed"] = c.seed;
  j["learning_rate"] = c.learning_rate;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["patience"] = c.patience;
  j["train_markers"] = c.train_markers;
  j["fine_tune_embeddings"] = c.fine_tune_embeddings;
  j["max_tokens"] = c.max_tokens;
  return j;
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.embedding_dim = j.at("embedding_dim").get<std::size_t>();
  c.lstm_hidden = j.at("lstm_hidden").get<std::size_t>();
  c.encoder_hidden = j.at("encoder_hidden").get<std::size_t>();
  c.decoder_hidden = j.at("decoder_hidden").get<std::size_t>();
  for (FeatureKind k : kFeatureKinds) {
    c.feature_dims[index_of(k)] = j.at("feature_dims").at(std::string(feature_kind_name(k))).get<std::size_t>();
  }
  c.joint = j.at("joint").get<bool>();
  auto target = parse_attribute(j.at("target").get<std::string>());
  if (!target) throw Error("checkpoint names an unknown target attribute");
  c.target = *target;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.patience = j.at("patience").get<std::size_t>();
  c.train_markers = j.at("train_markers").get<bool>();
  c.fine_tune_embeddings = j.at("fine_tune_embeddings").get<bool>();
  c.max_tokens = j.at("max_tokens").get<std::size_t>();
  return c;
}

void write_doubles(std::ostream& out, const double* data, std::size_t n) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::istream& in, double* data, std::size_t n, const std::string& source) {
  if (!in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(double)))) {
    throw ParseError(source, 0, "checkpoint truncated");
  }
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ck) {
  json header;
  header["format"] = "speakerattr-checkpoint";
  header["version"] = kCheckpointVersion;
  header["config"] = config_to_json(ck.config);
  header["node_order"] = ck.node_order;
  json norms = json::object();
  std::vector<const Eigen::VectorXd*> norm_data;
  for (FeatureKind k : kFeatureKinds) {
    const auto& n = ck.normalizers[index_of(k)];
    if (!n) continue;
    norms[std::string(feature_kind_name(k))] = n->dim();
    norm_data.push_back(&n->mean());
    norm_data.push_back(&n->sigma());
  }
  header["normalizers"] = norms;
  json dir = json::array();
  for (const auto& [name, m] : ck.params.tensors()) dir.push_back({{"name", name}, {"rows", m->rows()}, {"cols", m->cols()}});
  header["tensors"] = dir;
  json meta = json::object();
  for (const auto& [k, v] : ck.metadata) meta[k] = v;
  header["metadata"] = meta;
  const std::string text = header.dump();
  const std::uint64_t len = text.size();
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto* v : norm_data) write_doubles(out, v->data(), static_cast<std::size_t>(v->size()));
  for (const auto& [name, m] : ck.params.tensors()) write_doubles(out, m->data(), static_cast<std::size_t>(m->size()));
  if (!out) throw Error("failed to write checkpoint");
}

Checkpoint read_checkpoint(std::istream& in, const std::string& source_name) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ParseError(source_name, 0, "not a checkpoint file");
  }
  std::uint64_t len = 0;
  if (!in.read(reinterpret_cast<char*>(&len), sizeof len) || len > (1u << 30)) {
    throw ParseError(source_name, 0, "bad checkpoint header length");
  }
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) throw ParseError(source_name, 0, "checkpoint truncated");
  json header;
  try {
    header = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(source_name, 0, std::string("bad checkpoint header: ") + e.what());
  }
  if (header.value("version", 0) != kCheckpointVersion) throw ParseError(source_name, 0, "unsupported checkpoint version");
  Checkpoint ck;
  try {
    ck.config = config_from_json(header.at("config"));
    ck.node_order = header.at("node_order").get<std::vector<std::string>>();
    for (const auto& [k, v] : header.at("metadata").items()) ck.metadata[k] = v.get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(source_name, 0, std::string("bad checkpoint header: ") + e.what());
  }
  for (FeatureKind k : kFeatureKinds) {
    auto it = header.at("normalizers").find(std::string(feature_kind_name(k)));
    if (it == header.at("normalizers").end()) continue;
    const auto dim = it->get<Eigen::Index>();
    Eigen::VectorXd mean(dim), sigma(dim);
    read_doubles(in, mean.data(), static_cast<std::size_t>(dim), source_name);
    read_doubles(in, sigma.data(), static_cast<std::size_t>(dim), source_name);
    ck.normalizers[index_of(k)] = Normalizer(mean, sigma);
  }
  Eigen::Index vocab = 0;
  for (const auto& t : header.at("tensors")) {
    if (t.at("name") == "embeddings") vocab = t.at("rows").get<Eigen::Index>();
  }
  ck.params = shaped_parameters(ck.config, vocab);
  auto tensors = ck.params.tensors();
  const auto& dir = header.at("tensors");
  if (dir.size() != tensors.size()) throw ParseError(source_name, 0, "checkpoint tensor directory does not match its config");
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    auto& [name, m] = tensors[i];
    if (dir[i].at("name").get<std::string>() != name || dir[i].at("rows").get<Eigen::Index>() != m->rows() ||
        dir[i].at("cols").get<Eigen::Index>() != m->cols()) {
      throw ParseError(source_name, 0, "checkpoint tensor '" + name + "' has an unexpected shape");
    }
    read_doubles(in, m->data(), static_cast<std::size_t>(m->size()), source_name);
  }
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  write_checkpoint(out, ck);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  return read_checkpoint(in, path.string());
}

}  // namespace speakerattr

#include "speakerattr/train.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "speakerattr/common.hpp"

namespace speakerattr {

ExampleView Dataset::view(std::size_t i) const {
  ExampleView ex;
  ex.tokens = &tokens.at(i);
  for (FeatureKind k : kFeatureKinds) {
    const auto& m = features[index_of(k)];
    if (m.rows() > 0) ex.features[index_of(k)] = m.data() + static_cast<Eigen::Index>(i) * m.cols();
  }
  return ex;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  for (std::size_t i : indices) {
    out.tokens.push_back(tokens.at(i));
    out.labels.push_back(labels.at(i));
    if (!speakers.empty()) out.speakers.push_back(speakers.at(i));
  }
  for (FeatureKind k : kFeatureKinds) {
    const auto& m = features[index_of(k)];
    if (m.rows() == 0) continue;
    auto& dst = out.features[index_of(k)];
    dst.resize(static_cast<Eigen::Index>(indices.size()), m.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) dst.row(static_cast<Eigen::Index>(r)) = m.row(static_cast<Eigen::Index>(indices[r]));
  }
  return out;
}

AdamState::AdamState(const ModelParameters& shape) : m(shape.zeros_like()), v(shape.zeros_like()) {}

void AdamState::update(ModelParameters& params, const ModelParameters& grad,
                       const std::map<std::int32_t, Eigen::VectorXd>& embedding_grad, double learning_rate,
                       bool train_markers) {
  ++step;
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
  auto p = params.tensors();
  auto g = grad.tensors();
  auto mt = m.tensors();
  auto vt = v.tensors();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::string& name = p[i].first;
    if (name == "embeddings") continue;
    if (name == "markers" && !train_markers) continue;
    auto& mm = *mt[i].second;
    auto& vv = *vt[i].second;
    const auto& gg = *g[i].second;
    mm = kBeta1 * mm + (1.0 - kBeta1) * gg;
    vv = kBeta2 * vv + (1.0 - kBeta2) * gg.cwiseProduct(gg);
    p[i].second->array() -= learning_rate * (mm.array() / c1) / ((vv.array() / c2).sqrt() + kEpsilon);
  }
  // Lazy rows: moments decay only when a row is touched, bias correction uses the global step.
  for (const auto& [id, gr] : embedding_grad) {
    const auto row = static_cast<Eigen::Index>(id);
    auto mr = m.embeddings.row(row);
    auto vr = v.embeddings.row(row);
    mr = kBeta1 * mr + (1.0 - kBeta1) * gr.transpose();
    vr = kBeta2 * vr + (1.0 - kBeta2) * gr.transpose().cwiseProduct(gr.transpose());
    params.embeddings.row(row).array() -= learning_rate * (mr.array() / c1) / ((vr.array() / c2).sqrt() + kEpsilon);
  }
}

std::vector<Prediction> predict_all(const Model& model, const Dataset& data) {
  std::vector<Prediction> out(data.size());
  const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = model.predict(data.view(static_cast<std::size_t>(i)));
  return out;
}

std::vector<Prediction> predict_all_serial(const Model& model, const Dataset& data) {
  std::vector<Prediction> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out.push_back(model.predict(data.view(i)));
  return out;
}

EvalStats evaluate_dataset(const Model& model, const Dataset& data) {
  EvalStats s;
  if (data.size() == 0) return s;
  const auto preds = predict_all(model, data);
  const auto decoders = model.config().decoders();
  double correct = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    s.loss += cross_entropy(preds[i], data.labels[i], decoders);
    for (Attribute a : decoders) {
      if (preds[i].argmax(a) == data.labels[i][index_of(a)]) correct += 1.0;
    }
  }
  s.loss /= static_cast<double>(data.size());
  s.accuracy = 100.0 * correct / static_cast<double>(data.size() * decoders.size());
  return s;
}

TrainResult train_model(const ModelConfig& config, const EmbeddingTable& table, const Dataset& train,
                        const Dataset& validation) {
  config.validate();
  TrainResult result;
  Model model(config, init_parameters(config, table), &table);
  result.params = model.params();
  if (config.epochs == 0 || train.size() == 0) return result;

  AdamState adam(model.params());
  Rng rng(derive_seed(config.seed, "batches"));
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const std::size_t batch = config.batch_size;
  const ModelParameters zero = model.params().zeros_like();
  std::vector<ModelParameters> buffers(std::min(batch, train.size()), zero);
  std::vector<std::map<std::int32_t, Eigen::VectorXd>> sparse(buffers.size());
  std::vector<double> losses(buffers.size());
  ModelParameters total = zero;

  double best_val = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0, b = 0; start < order.size(); start += batch, ++b) {
      const std::size_t count = std::min(batch, order.size() - start);
      const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
      for (std::ptrdiff_t j = 0; j < n; ++j) {
        const auto u = static_cast<std::size_t>(j);
        auto& buf = buffers[u];
        for (auto& [name, t] : buf.tensors()) t->setZero();
        sparse[u].clear();
        const std::size_t idx = order[start + u];
        losses[u] = model.loss_and_gradient(train.view(idx), train.labels[idx], buf,
                                            config.fine_tune_embeddings ? &sparse[u] : nullptr);
      }
      auto tt = total.tensors();
      for (auto& [name, t] : tt) t->setZero();
      std::map<std::int32_t, Eigen::VectorXd> sparse_total;
      double batch_loss = 0.0;
      for (std::size_t u = 0; u < count; ++u) {
        batch_loss += losses[u];
        auto bt = buffers[u].tensors();
        for (std::size_t i = 0; i < tt.size(); ++i) *tt[i].second += *bt[i].second;
        for (const auto& [id, gr] : sparse[u]) {
          auto [it, inserted] = sparse_total.try_emplace(id, Eigen::VectorXd::Zero(gr.size()));
          it->second += gr;
        }
      }
      if (!std::isfinite(batch_loss)) {
        throw TrainingDiverged("training diverged: loss is not finite at epoch " + std::to_string(epoch) + ", batch " +
                               std::to_string(b + 1) + " (learning rate " + std::to_string(config.learning_rate) + ")");
      }
      const double scale = 1.0 / static_cast<double>(count);
      for (auto& [name, t] : tt) *t *= scale;
      for (auto& [id, gr] : sparse_total) gr *= scale;
      adam.update(model.params(), total, sparse_total, config.learning_rate, config.train_markers);
      if (!model.params().all_finite()) {
        throw TrainingDiverged("training diverged: parameters are not finite after epoch " + std::to_string(epoch) +
                               ", batch " + std::to_string(b + 1));
      }
      epoch_loss += batch_loss;
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss / static_cast<double>(train.size());
    if (validation.size() > 0) {
      EvalStats v = evaluate_dataset(model, validation);
      stats.val_loss = v.loss;
      stats.val_accuracy = v.accuracy;
    }
    result.curve.push_back(stats);
    if (validation.size() == 0) {
      result.params = model.params();
      result.best_epoch = epoch;
      continue;
    }
    if (stats.val_loss < best_val) {
      best_val = stats.val_loss;
      result.params = model.params();
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      result.stopped_early = epoch < config.epochs;
      break;
    }
  }
  return result;
}

}  // namespace speakerattr

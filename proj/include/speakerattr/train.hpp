#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "speakerattr/common.hpp"
#include "speakerattr/model.hpp"

namespace speakerattr {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Model-ready examples: token ids, normalized feature rows per enabled kind, gold
// labels for all seven attributes, and the partner each example came from.
struct Dataset {
  std::vector<std::vector<std::int32_t>> tokens;
  std::array<RowMatrix, kFeatureKindCount> features;
  std::vector<std::array<std::int8_t, kAttributeCount>> labels;
  std::vector<std::string> speakers;

  std::size_t size() const { return tokens.size(); }
  ExampleView view(std::size_t i) const;
  // Rows `indices` of this dataset, in that order.
  Dataset subset(const std::vector<std::size_t>& indices) const;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;  // percent, mean over the model's decoders
};

struct TrainResult {
  ModelParameters params;  // best epoch by validation loss
  std::vector<EpochStats> curve;
  std::size_t best_epoch = 0;  // 0 = initial parameters
  bool stopped_early = false;
};

class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

struct AdamState {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  ModelParameters m, v;
  std::int64_t step = 0;

  explicit AdamState(const ModelParameters& shape);
  // One update from a mean gradient. Marker rows move only when `train_markers`.
  // Embedding rows in `embedding_grad` use lazy updates: only touched rows change.
  void update(ModelParameters& params, const ModelParameters& grad,
              const std::map<std::int32_t, Eigen::VectorXd>& embedding_grad, double learning_rate,
              bool train_markers);
};

// Mini-batch Adam with early stopping on validation loss. Within a batch,
// per-example gradients are computed in parallel and summed in example order, so
// the result does not depend on the thread count. Throws TrainingDiverged when
// the loss or parameters stop being finite.
TrainResult train_model(const ModelConfig& config, const EmbeddingTable& table, const Dataset& train,
                        const Dataset& validation);

// Predictions for every example; parallel over examples.
std::vector<Prediction> predict_all(const Model& model, const Dataset& data);
std::vector<Prediction> predict_all_serial(const Model& model, const Dataset& data);

// Mean loss and accuracy (percent, mean over the model's decoders).
struct EvalStats {
  double loss = 0.0;
  double accuracy = 0.0;
};
EvalStats evaluate_dataset(const Model& model, const Dataset& data);

}  // namespace speakerattr

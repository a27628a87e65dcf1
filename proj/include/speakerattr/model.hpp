#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speakerattr/attributes.hpp"
#include "speakerattr/embeddings.hpp"
#include "speakerattr/features.hpp"

namespace speakerattr {

struct ModelConfig {
  std::size_t embedding_dim = 300;
  std::size_t lstm_hidden = 64;     // H, per direction
  std::size_t encoder_hidden = 64;  // s, feature encoders
  std::size_t decoder_hidden = 64;  // s, attribute decoders
  // Input width t of each feature encoder; 0 disables the kind.
  std::array<std::size_t, kFeatureKindCount> feature_dims{};
  bool joint = false;               // one decoder per attribute, losses summed
  Attribute target = Attribute::family;
  std::uint64_t seed = 0;
  double learning_rate = 1e-3;
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  std::size_t patience = 2;
  bool train_markers = false;
  bool fine_tune_embeddings = false;
  std::size_t max_tokens = kDefaultMaxTokens;

  bool enabled(FeatureKind k) const { return feature_dims[index_of(k)] > 0; }
  std::vector<Attribute> decoders() const;
  // Width of the concatenated encoding R = [rho_1; rho_i...].
  std::size_t encoding_dim() const;
  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// All weights as column-major matrices; biases are n x 1. Gradients share the type.
struct LstmWeights {
  Eigen::MatrixXd wx;  // 4H x d, gate rows ordered input, forget, cell, output
  Eigen::MatrixXd wh;  // 4H x H
  Eigen::MatrixXd b;   // 4H x 1
};

struct DenseLayers {
  Eigen::MatrixXd w1, b1;  // hidden x in, hidden x 1
  Eigen::MatrixXd w2, b2;  // out x hidden, out x 1
};

struct ModelParameters {
  LstmWeights forward;
  LstmWeights backward;
  std::array<std::optional<DenseLayers>, kFeatureKindCount> encoders;
  std::array<std::optional<DenseLayers>, kAttributeCount> decoders;
  Eigen::MatrixXd markers;     // 2 x d: author, other
  Eigen::MatrixXd embeddings;  // V x d when fine-tuning, else empty

  // Zero-filled copy with the same shapes.
  ModelParameters zeros_like() const;
  // Named view of every tensor, in a fixed order.
  std::vector<std::pair<std::string, Eigen::MatrixXd*>> tensors();
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> tensors() const;
  std::size_t parameter_count() const;
  bool all_finite() const;
  // Same tensors with the same shapes and bitwise-equal values.
  friend bool operator==(const ModelParameters& a, const ModelParameters& b);
};

// Random initialization: uniform Glorot bounds for weights, zero biases except a
// forget-gate bias of 1. Markers come from the table; a fine-tuned model copies
// the table's vectors.
ModelParameters init_parameters(const ModelConfig& config, const EmbeddingTable& table);

// One classification instance: token ids and one normalized vector per enabled kind.
struct ExampleView {
  const std::vector<std::int32_t>* tokens = nullptr;
  std::array<const double*, kFeatureKindCount> features{};  // points at dims from the config
};

struct Forward;  // cached activations, defined in model.cpp

// Probability vectors per attribute (only decoders present in the model).
struct Prediction {
  std::array<Eigen::VectorXd, kAttributeCount> probs;
  int argmax(Attribute a) const;
};

class Model {
 public:
  Model(ModelConfig config, ModelParameters params, const EmbeddingTable* table);

  const ModelConfig& config() const { return config_; }
  const ModelParameters& params() const { return params_; }
  ModelParameters& params() { return params_; }
  const EmbeddingTable& table() const { return *table_; }

  // rho_1 = [F_n; B_1] for a sequence of token ids.
  Eigen::VectorXd encode_context(const std::vector<std::int32_t>& ids) const;
  // Context encoder on explicit input rows (n x d), bypassing the lookup.
  Eigen::VectorXd encode_context(const Eigen::MatrixXd& inputs) const;
  Eigen::VectorXd encode_feature(FeatureKind kind, const Eigen::VectorXd& f) const;
  Eigen::VectorXd decode(Attribute a, const Eigen::VectorXd& encoding) const;

  Prediction predict(const ExampleView& ex) const;

  // Cross-entropy summed over the model's decoders for the gold labels; the
  // gradient of that loss is added into `grad` (same shapes as params) and the
  // sparse embedding rows into `embedding_grad` when fine-tuning.
  double loss_and_gradient(const ExampleView& ex, const std::array<std::int8_t, kAttributeCount>& gold,
                           ModelParameters& grad, std::map<std::int32_t, Eigen::VectorXd>* embedding_grad) const;
  double loss(const ExampleView& ex, const std::array<std::int8_t, kAttributeCount>& gold) const;

 private:
  Eigen::VectorXd input_vector(std::int32_t id) const;
  void forward(const ExampleView& ex, Forward& f) const;

  ModelConfig config_;
  ModelParameters params_;
  const EmbeddingTable* table_;
};

// -log p[gold] summed over `attributes`.
double cross_entropy(const Prediction& p, const std::array<std::int8_t, kAttributeCount>& gold,
                     const std::vector<Attribute>& attributes);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

// Checkpoint container: "SATTRCK1", uint64 header length, JSON header (config,
// graph node order, normalizer statistics, tensor directory, metadata), then
// each tensor's doubles column-major in directory order.
struct Checkpoint {
  ModelConfig config;
  ModelParameters params;
  std::vector<std::string> node_order;
  std::array<std::optional<Normalizer>, kFeatureKindCount> normalizers;
  std::map<std::string, std::string> metadata;
};

void write_checkpoint(std::ostream& out, const Checkpoint& ck);
Checkpoint read_checkpoint(std::istream& in, const std::string& source_name);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace speakerattr

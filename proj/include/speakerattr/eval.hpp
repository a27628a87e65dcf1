#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "speakerattr/annotation.hpp"
#include "speakerattr/corpus.hpp"
#include "speakerattr/embeddings.hpp"
#include "speakerattr/features.hpp"
#include "speakerattr/graph.hpp"
#include "speakerattr/lexicon.hpp"
#include "speakerattr/model.hpp"
#include "speakerattr/train.hpp"

namespace speakerattr {

// ------------------------------------------------------------------ sampling

// Indices into `windows` of an evenly spread sample: each speaker first gets
// min(available, budget / speakers); what is left is shared out again among
// speakers that still have windows, and the final remainder goes one window per
// speaker in a seeded order. Within a speaker the chosen windows are a seeded
// random subset. The result is sorted. A budget above the window total returns
// everything and adds a warning. Throws when budget < number of speakers.
std::vector<std::size_t> sample_windows(std::span<const ContextWindow> windows, std::size_t budget, std::uint64_t seed,
                                        std::vector<std::string>* warnings = nullptr);

// ------------------------------------------------------------------ folds

// All indices are into the window list given to loso_folds.
struct Fold {
  std::string held_out;
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

inline constexpr double kValidationShare = 0.1;

// One fold per annotated speaker that has windows, in speaker id order. The
// other speakers' windows are split 90/10 into train and validation per speaker
// at window level (each speaker gives round(10%) of its windows, seeded). Needs
// at least two annotated speakers with windows.
std::vector<Fold> loso_folds(std::span<const ContextWindow> windows, const AnnotationSet& annotations,
                             std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

// ------------------------------------------------------------------ metrics

struct SpeakerPredictions {
  std::string speaker;
  int gold = 0;
  std::vector<int> predicted;  // one per test window
};

// Mean over speakers of the share of correct windows, in percent.
double context_accuracy(std::span<const SpeakerPredictions> speakers);

// Most frequent predicted value. Ties go to `tie_break` when it is among the tied
// values, otherwise to the lowest tied value.
int speaker_vote(std::span<const int> predicted, int value_count, int tie_break);

// Share of speakers whose vote equals gold, in percent. `tie_break[i]` is used
// for speaker i.
double speaker_accuracy(std::span<const SpeakerPredictions> speakers, int value_count, std::span<const int> tie_break);

// Most frequent value (lowest index on ties).
int majority_value(std::span<const std::size_t> counts);

// Accuracy of predicting the most frequent value for every annotated speaker.
std::array<double, kAttributeCount> majority_baseline(const AnnotationSet& annotations);

// ------------------------------------------------------------------ experiments

// One model variant: context encoder plus the listed feature kinds, single or joint decoding.
struct ExperimentRow {
  std::string label;
  FeatureMask features;
  bool joint = false;
};

// Labels such as "Emb", "Emb+Time", "All", "Joint+All", "All+Attributes". "All"
// means every feature kind except attributes.
ExperimentRow parse_row(std::string_view label);
// Emb; Emb+{Time, LIWC, Style, Frequency, Graph}; All; Joint+Emb; Joint+All;
// Emb+Attributes; All+Attributes.
std::vector<ExperimentRow> full_grid_rows();
std::vector<ExperimentRow> quick_grid_rows();

struct ExperimentSpec {
  std::vector<Attribute> targets{kAttributes.begin(), kAttributes.end()};
  std::vector<ExperimentRow> rows = full_grid_rows();
  std::size_t budget = 27316;
  std::size_t window_size = 5;
  std::size_t stride = 1;
  std::uint64_t seed = 0;
  WeightMode weight_mode = WeightMode::inverted;
  GraphOrientation graph_orientation = GraphOrientation::incoming;
  // Model settings; embedding_dim and feature dims are filled in from the data.
  ModelConfig model;
  // 0 = every fold.
  std::size_t max_folds = 0;
};

// Key-value experiment file (see docs/formats.md):
//   targets = family, work          rows = Emb; Emb+Time; All
//   budget = 27316                  seed = 7
//   window_size = 5                 stride = 1
//   weight_mode = inverted          graph_orientation = incoming
//   max_folds = 0
//   lstm_hidden = 64                encoder_hidden = 64     decoder_hidden = 64
//   learning_rate = 0.001           epochs = 10             batch_size = 32
//   patience = 2                    train_markers = false   fine_tune = false
//   max_tokens = 256
ExperimentSpec parse_experiment_spec(std::istream& in, const std::string& source_name);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);
void write_experiment_spec(std::ostream& out, const ExperimentSpec& spec);
// Small fast grid used by `evaluate --grid quick`.
ExperimentSpec quick_experiment_spec();

struct SpeakerResult {
  std::string speaker;
  int gold = 0;
  int vote = 0;
  std::vector<int> predicted;
};

struct AttributeResult {
  Attribute attribute{};
  double context_accuracy = 0.0;
  double speaker_accuracy = 0.0;
  std::vector<SpeakerResult> speakers;
};

struct RowReport {
  std::string label;
  std::vector<AttributeResult> attributes;  // in spec target order
};

struct FoldSummary {
  std::string held_out;
  std::size_t train_windows = 0;
  std::size_t val_windows = 0;
  std::size_t test_windows = 0;
  std::string fingerprint;  // graph, normalizer and vocabulary state of the fold
};

struct GridReport {
  std::string fingerprint;  // spec plus corpus and annotations
  std::vector<Attribute> targets;
  std::array<double, kAttributeCount> majority{};  // over evaluated speakers
  std::vector<RowReport> rows;
  std::vector<FoldSummary> folds;
  std::vector<std::string> warnings;
  std::size_t sampled_windows = 0;
};

// Everything an experiment reads.
struct ExperimentData {
  const Corpus* corpus = nullptr;
  const AnnotationSet* annotations = nullptr;
  const AliasTable* aliases = nullptr;
  const CategoryLexicon* lexicon = nullptr;
  const EmbeddingTable* embeddings = nullptr;
};

// Optional hooks for tests and progress output.
struct GridHooks {
  // Called once per fold with the fold, the window list and the raw feature
  // matrices of the fold (rows aligned with the window list).
  std::function<void(const Fold&, std::span<const ContextWindow>, const FeatureMatrices&)> on_fold;
  std::function<void(const std::string&)> progress;
  // Directory for the raw feature cache; empty disables caching.
  std::filesystem::path cache_dir;
};

// Leave-one-speaker-out evaluation of every row for every target. Graph features,
// normalizers and vocabulary are rebuilt per fold from training conversations
// only; joint rows train one model per fold for all seven attributes.
GridReport run_grid(const ExperimentSpec& spec, const ExperimentData& data, const GridHooks& hooks = {});

void write_report_csv(std::ostream& out, const GridReport& report);
// Wide view: one line per row, "context/speaker" per attribute.
void write_report_table(std::ostream& out, const GridReport& report);
void write_report_json(std::ostream& out, const GridReport& report);

// Model trained on every annotated speaker (90/10 window split), packaged with
// the graph node order and normalizers needed to featurize new windows.
struct TrainedModel {
  Checkpoint checkpoint;
  TrainResult result;
};
TrainedModel train_full(const ExperimentSpec& spec, const ExperimentRow& row, Attribute target,
                        const ExperimentData& data);

// Content hash of a corpus and its annotations, for fingerprints.
std::uint64_t corpus_hash(const Corpus& corpus);
std::uint64_t annotation_hash(const AnnotationSet& annotations);

}  // namespace speakerattr

// Serial reference against the OpenMP version of each parallel kernel.

#include <benchmark/benchmark.h>

#include "speakerattr/common.hpp"
#include "speakerattr/features.hpp"
#include "speakerattr/graph.hpp"
#include "speakerattr/lexicon.hpp"
#include "speakerattr/model.hpp"
#include "speakerattr/synth.hpp"
#include "speakerattr/train.hpp"

using namespace speakerattr;

namespace {

WeightedGraph random_graph(std::size_t n, double degree) {
  Rng rng(1);
  WeightedGraph g;
  g.node_count = n;
  g.out.resize(n);
  const double p = degree / static_cast<double>(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v && rng.bernoulli(p)) g.out[u].emplace_back(v, rng.uniform(0.1, 1.0));
    }
  }
  return g;
}

template <DistanceMatrix (*F)(const WeightedGraph&)>
void BM_ShortestPaths(benchmark::State& state) {
  const WeightedGraph g = random_graph(static_cast<std::size_t>(state.range(0)), 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(F(g));
}
BENCHMARK(BM_ShortestPaths<shortest_paths_serial>)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShortestPaths<shortest_paths>)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

struct FeatureFixture {
  SynthOutput synth;
  CategoryLexicon lex = standin_lexicon();
  std::unique_ptr<MessageCache> cache;
  std::vector<ContextWindow> windows;
  FeatureMask mask;

  FeatureFixture() {
    SynthSpec s;
    s.speakers = 30;
    s.seed = 2;
    s.messages_median = 400;
    s.set_signal(1.0);
    synth = generate(s);
    cache = std::make_unique<MessageCache>(synth.corpus, lex);
    for (const auto& c : synth.corpus.conversations) {
      auto w = build_windows(c);
      windows.insert(windows.end(), w.begin(), w.end());
    }
    for (FeatureKind k : {FeatureKind::liwc, FeatureKind::time, FeatureKind::frequency, FeatureKind::style}) mask.set(k);
  }
};

const FeatureFixture& feature_fixture() {
  static const FeatureFixture f;
  return f;
}

template <FeatureMatrices (*F)(std::span<const ContextWindow>, FeatureMask, const FeatureInputs&)>
void BM_Featurize(benchmark::State& state) {
  const FeatureFixture& f = feature_fixture();
  FeatureInputs in;
  in.cache = f.cache.get();
  for (auto _ : state) benchmark::DoNotOptimize(F(f.windows, f.mask, in));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.windows.size()));
}
BENCHMARK(BM_Featurize<featurize_serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Featurize<featurize>)->Unit(benchmark::kMillisecond);

struct ModelFixture {
  EmbeddingTable table{32, 3};
  ModelConfig config;
  Dataset data;
  std::unique_ptr<Model> model;

  ModelFixture() {
    Rng rng(3);
    for (int w = 0; w < 500; ++w) {
      Eigen::RowVectorXd v(32);
      for (auto& x : v) x = rng.normal() * 0.2;
      table.add("w" + std::to_string(w), v);
    }
    config.embedding_dim = 32;
    config.lstm_hidden = config.encoder_hidden = config.decoder_hidden = 32;
    config.joint = true;
    config.feature_dims[index_of(FeatureKind::time)] = 24;
    config.feature_dims[index_of(FeatureKind::liwc)] = 40;
    const std::size_t n = 512;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::int32_t> ids;
      for (std::size_t t = 0; t < 48; ++t) ids.push_back(static_cast<std::int32_t>(rng.below(table.size())));
      data.tokens.push_back(ids);
      data.labels.push_back({});
      data.speakers.push_back("s" + std::to_string(i % 16));
    }
    for (FeatureKind k : {FeatureKind::time, FeatureKind::liwc}) {
      auto& m = data.features[index_of(k)];
      m.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(config.feature_dims[index_of(k)]));
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.normal();
      }
    }
    model = std::make_unique<Model>(config, init_parameters(config, table), &table);
  }
};

const ModelFixture& model_fixture() {
  static const ModelFixture f;
  return f;
}

template <std::vector<Prediction> (*F)(const Model&, const Dataset&)>
void BM_PredictAll(benchmark::State& state) {
  const ModelFixture& f = model_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(F(*f.model, f.data));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.data.size()));
}
BENCHMARK(BM_PredictAll<predict_all_serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictAll<predict_all>)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

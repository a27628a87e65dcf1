#include "speakerattr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "speakerattr/common.hpp"
#include "speakerattr/kvfile.hpp"

namespace speakerattr {

using ojson = nlohmann::ordered_json;

namespace {

std::map<std::string, std::vector<std::size_t>> by_speaker(std::span<const ContextWindow> windows,
                                                           std::span<const std::size_t> indices) {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::size_t i : indices) out[windows[i].partner_id()].push_back(i);
  return out;
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

// Per speaker, round(10%) of the windows (seeded) go to validation.
void split_train_val(const std::map<std::string, std::vector<std::size_t>>& groups, Rng& rng,
                     std::vector<std::size_t>& train, std::vector<std::size_t>& val) {
  for (const auto& [speaker, idx] : groups) {
    std::vector<std::size_t> shuffled = idx;
    rng.shuffle(shuffled);
    const auto nval = static_cast<std::size_t>(std::floor(static_cast<double>(shuffled.size()) * kValidationShare + 0.5));
    val.insert(val.end(), shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(nval));
    train.insert(train.end(), shuffled.begin() + static_cast<std::ptrdiff_t>(nval), shuffled.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(val.begin(), val.end());
  if (val.empty() && train.size() >= 2) {
    val.push_back(train.back());
    train.pop_back();
  }
}

}  // namespace

std::vector<std::size_t> sample_windows(std::span<const ContextWindow> windows, std::size_t budget, std::uint64_t seed,
                                        std::vector<std::string>* warnings) {
  const auto all = iota_indices(windows.size());
  const auto groups = by_speaker(windows, all);
  if (budget < groups.size()) {
    throw Error("window budget " + std::to_string(budget) + " is smaller than the speaker count " +
                std::to_string(groups.size()));
  }
  if (budget >= windows.size()) {
    if (budget > windows.size() && warnings) {
      warnings->push_back("budget " + std::to_string(budget) + " exceeds the " + std::to_string(windows.size()) +
                          " available windows; using all of them");
    }
    return all;
  }
  std::vector<const std::vector<std::size_t>*> lists;
  for (const auto& [speaker, idx] : groups) lists.push_back(&idx);
  std::vector<std::size_t> quota(lists.size(), 0);
  std::size_t remaining = budget;
  std::vector<std::size_t> active;
  while (true) {
    active.clear();
    for (std::size_t s = 0; s < lists.size(); ++s) {
      if (quota[s] < lists[s]->size()) active.push_back(s);
    }
    if (active.empty() || remaining < active.size()) break;
    const std::size_t share = remaining / active.size();
    for (std::size_t s : active) {
      const std::size_t add = std::min(share, lists[s]->size() - quota[s]);
      quota[s] += add;
      remaining -= add;
    }
  }
  Rng rng(derive_seed(seed, "sample"));
  rng.shuffle(active);
  for (std::size_t k = 0; k < remaining && k < active.size(); ++k) ++quota[active[k]];

  std::vector<std::size_t> chosen;
  for (std::size_t s = 0; s < lists.size(); ++s) {
    std::vector<std::size_t> idx = *lists[s];
    rng.shuffle(idx);
    chosen.insert(chosen.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(quota[s]));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<Fold> loso_folds(std::span<const ContextWindow> windows, const AnnotationSet& annotations,
                             std::uint64_t seed, std::vector<std::string>* warnings) {
  std::vector<std::size_t> labelled;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (annotations.find(windows[i].partner_id())) labelled.push_back(i);
  }
  const auto groups = by_speaker(windows, labelled);
  for (const auto& [id, profile] : annotations.profiles) {
    if (!groups.count(id) && warnings) warnings->push_back("speaker '" + id + "' has no context windows; fold skipped");
  }
  if (groups.size() < 2) throw Error("leave-one-speaker-out needs at least two annotated speakers with windows");
  std::vector<Fold> folds;
  for (const auto& [held_out, test] : groups) {
    Fold f;
    f.held_out = held_out;
    f.test = test;
    auto others = groups;
    others.erase(held_out);
    Rng rng(derive_seed(seed, "fold:" + held_out));
    split_train_val(others, rng, f.train, f.val);
    folds.push_back(std::move(f));
  }
  return folds;
}

double context_accuracy(std::span<const SpeakerPredictions> speakers) {
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& s : speakers) {
    if (s.predicted.empty()) continue;
    const auto correct = std::count(s.predicted.begin(), s.predicted.end(), s.gold);
    sum += static_cast<double>(correct) / static_cast<double>(s.predicted.size());
    ++counted;
  }
  if (counted == 0) throw Error("context accuracy needs at least one speaker with predictions");
  return 100.0 * sum / static_cast<double>(counted);
}

int speaker_vote(std::span<const int> predicted, int value_count, int tie_break) {
  if (predicted.empty()) throw Error("speaker vote over no predictions");
  std::vector<std::size_t> counts(static_cast<std::size_t>(value_count), 0);
  for (int p : predicted) {
    if (p < 0 || p >= value_count) throw Error("predicted value out of range");
    ++counts[static_cast<std::size_t>(p)];
  }
  const std::size_t top = *std::max_element(counts.begin(), counts.end());
  if (tie_break >= 0 && tie_break < value_count && counts[static_cast<std::size_t>(tie_break)] == top) return tie_break;
  return static_cast<int>(std::find(counts.begin(), counts.end(), top) - counts.begin());
}

double speaker_accuracy(std::span<const SpeakerPredictions> speakers, int value_count, std::span<const int> tie_break) {
  if (speakers.empty()) throw Error("speaker accuracy over no speakers");
  if (tie_break.size() != speakers.size()) throw Error("one tie-break value per speaker is required");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < speakers.size(); ++i) {
    if (speaker_vote(speakers[i].predicted, value_count, tie_break[i]) == speakers[i].gold) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(speakers.size());
}

int majority_value(std::span<const std::size_t> counts) {
  if (counts.empty()) throw Error("majority of no values");
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

std::array<double, kAttributeCount> majority_baseline(const AnnotationSet& annotations) {
  if (annotations.profiles.empty()) throw Error("majority baseline needs annotated speakers");
  std::array<double, kAttributeCount> out{};
  for (Attribute a : kAttributes) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(value_count(a)), 0);
    for (const auto& [id, p] : annotations.profiles) ++counts[static_cast<std::size_t>(p.get(a))];
    out[index_of(a)] = 100.0 * static_cast<double>(counts[static_cast<std::size_t>(majority_value(counts))]) /
                       static_cast<double>(annotations.profiles.size());
  }
  return out;
}

// ------------------------------------------------------------------ grid

ExperimentRow parse_row(std::string_view label) {
  ExperimentRow row;
  row.label = trim(label);
  bool has_base = false;
  for (const auto& raw : split(row.label, '+')) {
    const std::string part = to_lower_ascii(trim(raw));
    if (part == "emb") {
      has_base = true;
    } else if (part == "all") {
      has_base = true;
      for (FeatureKind k : kFeatureKinds) {
        if (k != FeatureKind::attributes) row.features.set(k);
      }
    } else if (part == "joint") {
      row.joint = true;
    } else if (auto k = parse_feature_kind(part)) {
      row.features.set(*k);
    } else {
      throw Error("unknown experiment row component '" + std::string(trim(raw)) + "' in '" + row.label + "'");
    }
  }
  if (!has_base && !row.features.any() && !row.joint) throw Error("empty experiment row '" + row.label + "'");
  if (row.joint && row.features.has(FeatureKind::attributes)) {
    throw Error("row '" + row.label + "': attribute features cannot be combined with joint decoding");
  }
  return row;
}

std::vector<ExperimentRow> full_grid_rows() {
  std::vector<ExperimentRow> rows;
  for (const char* label : {"Emb", "Emb+Time", "Emb+LIWC", "Emb+Style", "Emb+Frequency", "Emb+Graph", "All", "Joint+Emb",
                            "Joint+All", "Emb+Attributes", "All+Attributes"}) {
    rows.push_back(parse_row(label));
  }
  return rows;
}

std::vector<ExperimentRow> quick_grid_rows() { return {parse_row("Emb"), parse_row("All"), parse_row("Joint+All")}; }

ExperimentSpec quick_experiment_spec() {
  ExperimentSpec spec;
  spec.rows = quick_grid_rows();
  spec.budget = 2000;
  spec.model.lstm_hidden = 16;
  spec.model.encoder_hidden = 16;
  spec.model.decoder_hidden = 16;
  spec.model.learning_rate = 1e-2;
  spec.model.epochs = 3;
  return spec;
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
  std::string s = to_lower_ascii(v);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw Error("bad boolean '" + v + "' for " + key);
}

std::size_t parse_size(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty() || v[0] == '-') throw Error("bad non-negative integer '" + v + "' for " + key);
  return static_cast<std::size_t>(n);
}

double parse_real(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw Error("bad number '" + v + "' for " + key);
  return d;
}

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::istream& in, const std::string& source_name) {
  KvDocument doc = KvDocument::parse(in, source_name);
  if (doc.sections.size() > 1) throw ParseError(source_name, doc.sections[1].line, "experiment files have no sections");
  ExperimentSpec spec;
  for (const KvEntry& e : doc.global().entries) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    try {
      if (k == "targets") {
        spec.targets.clear();
        for (const auto& t : split(v, ',')) {
          if (trim(t).empty()) continue;
          auto a = parse_attribute(trim(t));
          if (!a) throw Error("unknown attribute '" + trim(t) + "'");
          spec.targets.push_back(*a);
        }
        if (spec.targets.empty()) throw Error("no targets listed");
      } else if (k == "rows") {
        spec.rows.clear();
        for (const auto& r : split(v, ';')) {
          if (!trim(r).empty()) spec.rows.push_back(parse_row(r));
        }
        if (spec.rows.empty()) throw Error("no rows listed");
      } else if (k == "grid") {
        const std::string g = to_lower_ascii(v);
        if (g == "full") spec.rows = full_grid_rows();
        else if (g == "quick") spec.rows = quick_grid_rows();
        else throw Error("grid must be full or quick");
      } else if (k == "budget") {
        spec.budget = parse_size(v, k);
      } else if (k == "window_size") {
        spec.window_size = parse_size(v, k);
      } else if (k == "stride") {
        spec.stride = parse_size(v, k);
      } else if (k == "seed") {
        spec.seed = parse_size(v, k);
      } else if (k == "weight_mode") {
        spec.weight_mode = parse_weight_mode(v);
      } else if (k == "graph_orientation") {
        spec.graph_orientation = parse_graph_orientation(v);
      } else if (k == "max_folds") {
        spec.max_folds = parse_size(v, k);
      } else if (k == "lstm_hidden") {
        spec.model.lstm_hidden = parse_size(v, k);
      } else if (k == "encoder_hidden") {
        spec.model.encoder_hidden = parse_size(v, k);
      } else if (k == "decoder_hidden") {
        spec.model.decoder_hidden = parse_size(v, k);
      } else if (k == "learning_rate") {
        spec.model.learning_rate = parse_real(v, k);
      } else if (k == "epochs") {
        spec.model.epochs = parse_size(v, k);
      } else if (k == "batch_size") {
        spec.model.batch_size = parse_size(v, k);
      } else if (k == "patience") {
        spec.model.patience = parse_size(v, k);
      } else if (k == "train_markers") {
        spec.model.train_markers = parse_bool(v, k);
      } else if (k == "fine_tune") {
        spec.model.fine_tune_embeddings = parse_bool(v, k);
      } else if (k == "max_tokens") {
        spec.model.max_tokens = parse_size(v, k);
      } else {
        throw Error("unknown key '" + k + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(source_name, e.line, err.what());
    }
  }
  if (spec.window_size < 2) throw ParseError(source_name, 0, "window_size must be at least 2");
  if (spec.stride < 1) throw ParseError(source_name, 0, "stride must be at least 1");
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open experiment file " + path.string());
  return parse_experiment_spec(in, path.string());
}

void write_experiment_spec(std::ostream& out, const ExperimentSpec& spec) {
  out << "targets = ";
  for (std::size_t i = 0; i < spec.targets.size(); ++i) out << (i ? ", " : "") << attribute_name(spec.targets[i]);
  out << "\nrows = ";
  for (std::size_t i = 0; i < spec.rows.size(); ++i) out << (i ? "; " : "") << spec.rows[i].label;
  out << "\nbudget = " << spec.budget << "\nwindow_size = " << spec.window_size << "\nstride = " << spec.stride
      << "\nseed = " << spec.seed << "\nweight_mode = "
      << (spec.weight_mode == WeightMode::inverted ? "inverted" : "paper_formula")
      << "\ngraph_orientation = " << graph_orientation_name(spec.graph_orientation) << "\nmax_folds = " << spec.max_folds
      << "\nlstm_hidden = " << spec.model.lstm_hidden << "\nencoder_hidden = " << spec.model.encoder_hidden
      << "\ndecoder_hidden = " << spec.model.decoder_hidden << "\nlearning_rate = " << real_text(spec.model.learning_rate)
      << "\nepochs = " << spec.model.epochs << "\nbatch_size = " << spec.model.batch_size
      << "\npatience = " << spec.model.patience << "\ntrain_markers = " << (spec.model.train_markers ? "true" : "false")
      << "\nfine_tune = " << (spec.model.fine_tune_embeddings ? "true" : "false")
      << "\nmax_tokens = " << spec.model.max_tokens << "\n";
}

std::uint64_t corpus_hash(const Corpus& corpus) {
  std::uint64_t h = fnv1a(corpus.author_id);
  for (const auto& c : corpus.conversations) {
    h = fnv1a(c.partner_id, h);
    for (const auto& m : c.messages) {
      h = fnv1a(m.speaker_id, h);
      h = fnv1a(m.is_author ? "1" : "0", h);
      h = fnv1a(std::to_string(m.timestamp), h);
      h = fnv1a(platform_name(m.platform), h);
      h = fnv1a(m.text, h);
      h = fnv1a("\n", h);
    }
  }
  return h;
}

std::uint64_t annotation_hash(const AnnotationSet& annotations) {
  std::ostringstream ss;
  write_annotations(ss, annotations);
  return fnv1a(ss.str());
}

namespace {

std::uint64_t hash_doubles(const double* data, std::size_t n, std::uint64_t h) {
  return fnv1a(std::string_view(reinterpret_cast<const char*>(data), n * sizeof(double)), h);
}

std::uint64_t hash_indices(const std::vector<std::size_t>& v, std::uint64_t h) {
  for (std::size_t i : v) h = fnv1a(std::to_string(i) + ",", h);
  return h;
}

struct Prepared {
  std::vector<ContextWindow> windows;  // sampled, annotated speakers only
  FeatureMatrices text;                 // liwc, time, frequency, style as needed
};

FeatureMask text_kinds(const FeatureMask& wanted) {
  FeatureMask m;
  for (FeatureKind k : {FeatureKind::liwc, FeatureKind::time, FeatureKind::frequency, FeatureKind::style}) {
    if (wanted.has(k)) m.set(k);
  }
  return m;
}

void check_data(const ExperimentData& data) {
  if (!data.corpus || !data.annotations || !data.lexicon || !data.embeddings) {
    throw Error("experiment needs a corpus, annotations, a lexicon and embeddings");
  }
  check_annotation_keys(*data.annotations, *data.corpus);
}

Prepared prepare(const ExperimentSpec& spec, const ExperimentData& data, FeatureMask wanted,
                 const std::filesystem::path& cache_dir, std::vector<std::string>& warnings) {
  Prepared p;
  std::vector<ContextWindow> all;
  for (const auto& conv : data.corpus->conversations) {
    if (!data.annotations->find(conv.partner_id)) continue;
    auto w = build_windows(conv, spec.window_size, spec.stride);
    all.insert(all.end(), w.begin(), w.end());
  }
  if (all.empty()) throw Error("no context windows: every annotated conversation is shorter than the window size");
  for (std::size_t i : sample_windows(all, spec.budget, spec.seed, &warnings)) p.windows.push_back(all[i]);

  const FeatureMask text = text_kinds(wanted);
  if (!text.any()) return p;
  std::uint64_t key = corpus_hash(*data.corpus);
  key = fnv1a(std::to_string(spec.window_size) + "/" + std::to_string(spec.stride) + "/" + std::to_string(spec.budget) +
                  "/" + std::to_string(spec.seed),
              key);
  for (const auto& name : data.lexicon->categories()) key = fnv1a(name, key);
  for (const auto& pat : data.lexicon->patterns()) key = fnv1a(pat.text + (pat.prefix ? "*" : ""), key);
  for (FeatureKind k : kFeatureKinds) key = fnv1a(text.has(k) ? "1" : "0", key);
  const std::string fingerprint = hex64(key);
  std::filesystem::path cache_file;
  if (!cache_dir.empty()) {
    cache_file = cache_dir / ("features-" + fingerprint + ".bin");
    if (auto cached = load_feature_cache(cache_file, fingerprint)) {
      p.text = std::move(*cached);
      return p;
    }
  }
  MessageCache cache(*data.corpus, *data.lexicon);
  FeatureInputs inputs;
  inputs.cache = &cache;
  p.text = featurize(p.windows, text, inputs);
  if (!cache_file.empty()) {
    std::filesystem::create_directories(cache_dir);
    save_feature_cache(cache_file, p.text, fingerprint);
  }
  return p;
}

// Fold-specific state: graph rows, vocabulary and normalizers fit on training data.
struct FoldState {
  FeatureMatrices raw;  // text kinds plus graph, all sampled windows
  EmbeddingTable table;
  std::vector<std::vector<std::int32_t>> tokens;  // per sampled window
  std::array<std::optional<Normalizer>, kFeatureKindCount> normalizers;
  std::array<RowMatrix, kFeatureKindCount> normalized;
  std::vector<std::string> node_order;
  std::uint64_t fingerprint = 0;
};

FoldState build_fold_state(const ExperimentSpec& spec, const ExperimentData& data, const Prepared& prep,
                           const std::vector<const Conversation*>& training, const std::vector<std::size_t>& train_rows,
                           FeatureMask wanted) {
  FoldState st;
  st.raw = prep.text;
  std::uint64_t fp = hash_indices(train_rows, fnv1a("fold"));
  const AliasTable empty_aliases;
  MentionGraph graph = build_mention_graph(*data.corpus, training, data.aliases ? *data.aliases : empty_aliases);
  st.node_order = graph.nodes;
  if (wanted.has(FeatureKind::graph)) {
    DistanceMatrix dist = shortest_paths(oriented_weights(graph, spec.weight_mode, spec.graph_orientation));
    FeatureInputs in;
    in.graph = &graph;
    in.distances = &dist;
    FeatureMask gm;
    gm.set(FeatureKind::graph);
    FeatureMatrices g = featurize(prep.windows, gm, in);
    st.raw.kind[index_of(FeatureKind::graph)] = std::move(g.kind[index_of(FeatureKind::graph)]);
    st.raw.mask.set(FeatureKind::graph);
    for (const auto& [edge, c] : graph.counts) {
      fp = fnv1a(std::to_string(edge.first) + ">" + std::to_string(edge.second) + ":" + std::to_string(c) + ";", fp);
    }
  }
  st.table = data.embeddings->restricted(corpus_vocabulary(training));
  for (std::size_t i = EmbeddingTable::kReserved; i < st.table.size(); ++i) {
    fp = fnv1a(st.table.token(static_cast<std::int32_t>(i)), fp);
  }
  st.tokens.reserve(prep.windows.size());
  for (const auto& w : prep.windows) st.tokens.push_back(window_token_ids(w.messages(), st.table, spec.model.max_tokens).ids);

  for (FeatureKind k : kFeatureKinds) {
    if (k == FeatureKind::attributes || !st.raw.mask.has(k) || !wanted.has(k)) continue;
    const auto& raw = st.raw.kind[index_of(k)];
    Eigen::MatrixXd train(static_cast<Eigen::Index>(train_rows.size()), raw.cols());
    for (std::size_t r = 0; r < train_rows.size(); ++r) train.row(static_cast<Eigen::Index>(r)) = raw.row(static_cast<Eigen::Index>(train_rows[r]));
    Normalizer n = Normalizer::fit(train);
    st.normalized[index_of(k)] = n.apply_rows(raw);
    fp = hash_doubles(n.mean().data(), n.dim(), fp);
    fp = hash_doubles(n.sigma().data(), n.dim(), fp);
    st.normalizers[index_of(k)] = std::move(n);
  }
  st.fingerprint = fp;
  return st;
}

// Attribute feature rows for every sampled window, normalized on training rows.
RowMatrix attribute_rows(const Prepared& prep, const AnnotationSet& annotations, Attribute target,
                         const std::vector<std::size_t>& train_rows, std::optional<Normalizer>* fitted) {
  FeatureInputs in;
  in.annotations = &annotations;
  in.target = target;
  FeatureMask m;
  m.set(FeatureKind::attributes);
  Eigen::MatrixXd raw = featurize(prep.windows, m, in).kind[index_of(FeatureKind::attributes)];
  Eigen::MatrixXd train(static_cast<Eigen::Index>(train_rows.size()), raw.cols());
  for (std::size_t r = 0; r < train_rows.size(); ++r) train.row(static_cast<Eigen::Index>(r)) = raw.row(static_cast<Eigen::Index>(train_rows[r]));
  Normalizer n = Normalizer::fit(train);
  RowMatrix out = n.apply_rows(raw);
  if (fitted) *fitted = std::move(n);
  return out;
}

Dataset assemble(const Prepared& prep, const FoldState& st, const RowMatrix* attributes, FeatureMask mask,
                 const AnnotationSet& annotations, const std::vector<std::size_t>& rows) {
  Dataset d;
  for (std::size_t r : rows) {
    d.tokens.push_back(st.tokens[r]);
    const AttributeProfile* p = annotations.find(prep.windows[r].partner_id());
    std::array<std::int8_t, kAttributeCount> labels{};
    for (Attribute a : kAttributes) labels[index_of(a)] = static_cast<std::int8_t>(p->get(a));
    d.labels.push_back(labels);
    d.speakers.push_back(prep.windows[r].partner_id());
  }
  for (FeatureKind k : kFeatureKinds) {
    if (!mask.has(k)) continue;
    const RowMatrix& src = k == FeatureKind::attributes ? *attributes : st.normalized[index_of(k)];
    auto& dst = d.features[index_of(k)];
    dst.resize(static_cast<Eigen::Index>(rows.size()), src.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) dst.row(static_cast<Eigen::Index>(i)) = src.row(static_cast<Eigen::Index>(rows[i]));
  }
  return d;
}

ModelConfig row_config(const ExperimentSpec& spec, const ExperimentRow& row, Attribute target, const FoldState& st,
                       const RowMatrix* attributes, std::size_t table_dim, const std::string& seed_label) {
  ModelConfig c = spec.model;
  c.embedding_dim = table_dim;
  c.joint = row.joint;
  c.target = target;
  c.feature_dims = {};
  for (FeatureKind k : kFeatureKinds) {
    if (!row.features.has(k)) continue;
    c.feature_dims[index_of(k)] = static_cast<std::size_t>(
        k == FeatureKind::attributes ? attributes->cols() : st.normalized[index_of(k)].cols());
  }
  c.seed = derive_seed(spec.seed, seed_label);
  return c;
}

FeatureMask wanted_kinds(const std::vector<ExperimentRow>& rows) {
  FeatureMask m;
  for (const auto& r : rows) {
    for (FeatureKind k : kFeatureKinds) {
      if (r.features.has(k)) m.set(k);
    }
  }
  return m;
}

}  // namespace

GridReport run_grid(const ExperimentSpec& spec, const ExperimentData& data, const GridHooks& hooks) {
  check_data(data);
  if (spec.rows.empty() || spec.targets.empty()) throw Error("experiment has no rows or no targets");
  GridReport report;
  report.targets = spec.targets;
  {
    std::ostringstream ss;
    write_experiment_spec(ss, spec);
    std::uint64_t h = fnv1a(ss.str());
    h = fnv1a(hex64(corpus_hash(*data.corpus)), h);
    h = fnv1a(hex64(annotation_hash(*data.annotations)), h);
    h = fnv1a(std::to_string(data.embeddings->size()) + "x" + std::to_string(data.embeddings->dim()), h);
    h = hash_doubles(data.embeddings->matrix().data(), static_cast<std::size_t>(data.embeddings->matrix().size()), h);
    report.fingerprint = hex64(h);
  }
  const FeatureMask wanted = wanted_kinds(spec.rows);
  Prepared prep = prepare(spec, data, wanted, hooks.cache_dir, report.warnings);
  report.sampled_windows = prep.windows.size();
  auto folds = loso_folds(prep.windows, *data.annotations, spec.seed, &report.warnings);
  if (spec.max_folds > 0 && folds.size() > spec.max_folds) folds.resize(spec.max_folds);

  std::vector<std::string> evaluated;
  for (const auto& f : folds) evaluated.push_back(f.held_out);

  // predictions[row][attribute] per held-out speaker, plus tie-break values.
  std::vector<std::array<std::vector<SpeakerPredictions>, kAttributeCount>> preds(spec.rows.size());
  std::vector<std::array<std::vector<int>, kAttributeCount>> ties(spec.rows.size());

  for (std::size_t fi = 0; fi < folds.size(); ++fi) {
    const Fold& fold = folds[fi];
    if (hooks.progress) {
      hooks.progress("fold " + std::to_string(fi + 1) + "/" + std::to_string(folds.size()) + ": " + fold.held_out);
    }
    std::vector<const Conversation*> training;
    for (const auto& c : data.corpus->conversations) {
      if (c.partner_id != fold.held_out) training.push_back(&c);
    }
    FoldState st = build_fold_state(spec, data, prep, training, fold.train, wanted);
    report.folds.push_back({fold.held_out, fold.train.size(), fold.val.size(), fold.test.size(), hex64(st.fingerprint)});
    if (hooks.on_fold) hooks.on_fold(fold, prep.windows, st.raw);

    // Training-set majority per attribute, for speaker-vote ties.
    std::array<int, kAttributeCount> train_majority{};
    for (Attribute a : kAttributes) {
      std::vector<std::size_t> counts(static_cast<std::size_t>(value_count(a)), 0);
      for (const auto& s : evaluated) {
        if (s != fold.held_out) ++counts[static_cast<std::size_t>(data.annotations->find(s)->get(a))];
      }
      train_majority[index_of(a)] = majority_value(counts);
    }
    const AttributeProfile& gold = *data.annotations->find(fold.held_out);

    for (std::size_t ri = 0; ri < spec.rows.size(); ++ri) {
      const ExperimentRow& row = spec.rows[ri];
      const std::vector<Attribute> passes = row.joint ? std::vector<Attribute>{spec.targets.front()} : spec.targets;
      for (Attribute target : passes) {
        RowMatrix attrs;
        if (row.features.has(FeatureKind::attributes)) attrs = attribute_rows(prep, *data.annotations, target, fold.train, nullptr);
        const std::string label = row.label + "|" + (row.joint ? "joint" : std::string(attribute_name(target))) + "|" + fold.held_out;
        ModelConfig config = row_config(spec, row, target, st, &attrs, st.table.dim(), label);
        Dataset train = assemble(prep, st, &attrs, row.features, *data.annotations, fold.train);
        Dataset val = assemble(prep, st, &attrs, row.features, *data.annotations, fold.val);
        Dataset test = assemble(prep, st, &attrs, row.features, *data.annotations, fold.test);
        TrainResult result = train_model(config, st.table, train, val);
        Model model(config, std::move(result.params), &st.table);
        const auto p = predict_all(model, test);
        const std::vector<Attribute> scored = row.joint ? spec.targets : std::vector<Attribute>{target};
        for (Attribute a : scored) {
          SpeakerPredictions sp;
          sp.speaker = fold.held_out;
          sp.gold = gold.get(a);
          for (const auto& pr : p) sp.predicted.push_back(pr.argmax(a));
          preds[ri][index_of(a)].push_back(std::move(sp));
          ties[ri][index_of(a)].push_back(train_majority[index_of(a)]);
        }
      }
    }
  }

  AnnotationSet evaluated_set;
  for (const auto& s : evaluated) evaluated_set.profiles.emplace(s, *data.annotations->find(s));
  report.majority = majority_baseline(evaluated_set);
  for (std::size_t ri = 0; ri < spec.rows.size(); ++ri) {
    RowReport rr;
    rr.label = spec.rows[ri].label;
    for (Attribute a : spec.targets) {
      const auto& sp = preds[ri][index_of(a)];
      AttributeResult ar;
      ar.attribute = a;
      ar.context_accuracy = context_accuracy(sp);
      ar.speaker_accuracy = speaker_accuracy(sp, value_count(a), ties[ri][index_of(a)]);
      for (std::size_t i = 0; i < sp.size(); ++i) {
        ar.speakers.push_back({sp[i].speaker, sp[i].gold, speaker_vote(sp[i].predicted, value_count(a), ties[ri][index_of(a)][i]),
                               sp[i].predicted});
      }
      rr.attributes.push_back(std::move(ar));
    }
    report.rows.push_back(std::move(rr));
  }
  return report;
}

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string pct4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

void write_report_csv(std::ostream& out, const GridReport& report) {
  out << "row,attribute,context_accuracy,speaker_accuracy\n";
  for (Attribute a : report.targets) {
    out << "Majority Class," << attribute_name(a) << ',' << pct4(report.majority[index_of(a)]) << ','
        << pct4(report.majority[index_of(a)]) << '\n';
  }
  for (const auto& row : report.rows) {
    for (const auto& ar : row.attributes) {
      out << row.label << ',' << attribute_name(ar.attribute) << ',' << pct4(ar.context_accuracy) << ','
          << pct4(ar.speaker_accuracy) << '\n';
    }
  }
}

void write_report_table(std::ostream& out, const GridReport& report) {
  out << "Model";
  for (Attribute a : report.targets) out << ',' << attribute_label(a);
  out << "\nMajority Class";
  for (Attribute a : report.targets) out << ",-/" << pct(report.majority[index_of(a)]);
  out << '\n';
  for (const auto& row : report.rows) {
    out << row.label;
    for (const auto& ar : row.attributes) out << ',' << pct(ar.context_accuracy) << '/' << pct(ar.speaker_accuracy);
    out << '\n';
  }
}

void write_report_json(std::ostream& out, const GridReport& report) {
  ojson j;
  j["fingerprint"] = report.fingerprint;
  j["sampled_windows"] = report.sampled_windows;
  ojson targets = ojson::array();
  for (Attribute a : report.targets) targets.push_back(attribute_name(a));
  j["targets"] = targets;
  ojson maj = ojson::object();
  for (Attribute a : report.targets) maj[std::string(attribute_name(a))] = report.majority[index_of(a)];
  j["majority"] = maj;
  ojson rows = ojson::array();
  for (const auto& row : report.rows) {
    ojson r;
    r["label"] = row.label;
    ojson attrs = ojson::array();
    for (const auto& ar : row.attributes) {
      ojson x;
      x["attribute"] = attribute_name(ar.attribute);
      x["context_accuracy"] = ar.context_accuracy;
      x["speaker_accuracy"] = ar.speaker_accuracy;
      ojson sp = ojson::array();
      for (const auto& s : ar.speakers) {
        sp.push_back({{"speaker", s.speaker}, {"gold", value_name(ar.attribute, s.gold)},
                      {"vote", value_name(ar.attribute, s.vote)}, {"predicted", s.predicted}});
      }
      x["speakers"] = sp;
      attrs.push_back(x);
    }
    r["attributes"] = attrs;
    rows.push_back(r);
  }
  j["rows"] = rows;
  ojson folds = ojson::array();
  for (const auto& f : report.folds) {
    folds.push_back({{"held_out", f.held_out}, {"train", f.train_windows}, {"val", f.val_windows},
                     {"test", f.test_windows}, {"fingerprint", f.fingerprint}});
  }
  j["folds"] = folds;
  j["warnings"] = report.warnings;
  out << j.dump(2) << '\n';
}

TrainedModel train_full(const ExperimentSpec& spec, const ExperimentRow& row, Attribute target,
                        const ExperimentData& data) {
  check_data(data);
  std::vector<std::string> warnings;
  Prepared prep = prepare(spec, data, row.features, {}, warnings);
  const auto groups = by_speaker(prep.windows, iota_indices(prep.windows.size()));
  std::vector<std::size_t> train_rows, val_rows;
  Rng rng(derive_seed(spec.seed, "train-split"));
  split_train_val(groups, rng, train_rows, val_rows);
  std::vector<const Conversation*> training;
  for (const auto& c : data.corpus->conversations) training.push_back(&c);
  FoldState st = build_fold_state(spec, data, prep, training, train_rows, row.features);
  RowMatrix attrs;
  std::optional<Normalizer> attr_norm;
  if (row.features.has(FeatureKind::attributes)) attrs = attribute_rows(prep, *data.annotations, target, train_rows, &attr_norm);
  ModelConfig config = row_config(spec, row, target, st, &attrs, st.table.dim(), "train|" + row.label);
  Dataset train = assemble(prep, st, &attrs, row.features, *data.annotations, train_rows);
  Dataset val = assemble(prep, st, &attrs, row.features, *data.annotations, val_rows);

  TrainedModel out;
  out.result = train_model(config, st.table, train, val);
  out.checkpoint.config = config;
  out.checkpoint.params = out.result.params;
  out.checkpoint.node_order = st.node_order;
  out.checkpoint.normalizers = st.normalizers;
  if (attr_norm) out.checkpoint.normalizers[index_of(FeatureKind::attributes)] = attr_norm;
  out.checkpoint.metadata["row"] = row.label;
  out.checkpoint.metadata["graph_orientation"] = std::string(graph_orientation_name(spec.graph_orientation));
  out.checkpoint.metadata["weight_mode"] = spec.weight_mode == WeightMode::inverted ? "inverted" : "paper_formula";
  out.checkpoint.metadata["target"] = row.joint ? "joint" : std::string(attribute_name(target));
  out.checkpoint.metadata["best_epoch"] = std::to_string(out.result.best_epoch);
  out.checkpoint.metadata["train_windows"] = std::to_string(train.size());
  out.checkpoint.metadata["val_windows"] = std::to_string(val.size());
  out.checkpoint.metadata["fold_fingerprint"] = hex64(st.fingerprint);
  return out;
}

}  // namespace speakerattr

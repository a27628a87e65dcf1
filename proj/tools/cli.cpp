#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "speakerattr/annotation.hpp"
#include "speakerattr/common.hpp"
#include "speakerattr/corpus.hpp"
#include "speakerattr/embeddings.hpp"
#include "speakerattr/eval.hpp"
#include "speakerattr/features.hpp"
#include "speakerattr/graph.hpp"
#include "speakerattr/kvfile.hpp"
#include "speakerattr/lexicon.hpp"
#include "speakerattr/report.hpp"
#include "speakerattr/synth.hpp"

namespace speakerattr::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::string out_dir = "out";
  bool json = false;
};

// Input files; empty paths fall back to the standard names inside --out-dir.
struct DataPaths {
  std::string corpus, annotations, aliases, lexicon, embeddings;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--corpus", corpus, "Canonical corpus (default <out-dir>/corpus.jsonl)");
    cmd->add_option("--annotations", annotations, "Annotation file (default <out-dir>/annotations.txt)");
    cmd->add_option("--aliases", aliases, "Alias table (default <out-dir>/aliases.tsv)");
    cmd->add_option("--lexicon", lexicon, "Category lexicon (default <out-dir>/lexicon.dic, else the stand-in)");
    cmd->add_option("--embeddings", embeddings, "Word vectors (default <out-dir>/embeddings.txt)");
  }
};

struct Loaded {
  Corpus corpus;
  AnnotationSet annotations;
  AliasTable aliases;
  CategoryLexicon lexicon;
  EmbeddingTable embeddings;
  ExperimentData data() const { return {&corpus, &annotations, &aliases, &lexicon, &embeddings}; }
};

fs::path resolve(const std::string& given, const Globals& g, const char* name) {
  return given.empty() ? fs::path(g.out_dir) / name : fs::path(given);
}

fs::path require_file(const fs::path& p, const char* what) {
  if (!fs::exists(p)) throw Error(std::string(what) + " file not found: " + p.string());
  return p;
}

Corpus load_corpus(const DataPaths& d, const Globals& g) {
  return ingest(require_file(resolve(d.corpus, g, "corpus.jsonl"), "corpus"), InputFormat::canonical);
}

AnnotationSet load_annotation_file(const DataPaths& d, const Globals& g) {
  return load_annotations(require_file(resolve(d.annotations, g, "annotations.txt"), "annotations"));
}

CategoryLexicon load_lexicon_or_standin(const DataPaths& d, const Globals& g, std::ostream& err) {
  const fs::path p = resolve(d.lexicon, g, "lexicon.dic");
  if (d.lexicon.empty() && !fs::exists(p)) {
    err << "note: no lexicon at " << p.string() << ", using the stand-in lexicon\n";
    return standin_lexicon();
  }
  return load_lexicon(require_file(p, "lexicon"));
}

AliasTable load_alias_file(const DataPaths& d, const Globals& g, std::ostream& err) {
  const fs::path p = resolve(d.aliases, g, "aliases.tsv");
  if (d.aliases.empty() && !fs::exists(p)) {
    err << "note: no alias table at " << p.string() << ", the mention graph will be empty\n";
    return {};
  }
  return load_aliases(require_file(p, "aliases"));
}

Loaded load_all(const DataPaths& d, const Globals& g, std::ostream& err) {
  Loaded l;
  l.corpus = load_corpus(d, g);
  l.annotations = load_annotation_file(d, g);
  l.aliases = load_alias_file(d, g, err);
  l.lexicon = load_lexicon_or_standin(d, g, err);
  const auto vocab = corpus_vocabulary(l.corpus);
  l.embeddings = load_embeddings(require_file(resolve(d.embeddings, g, "embeddings.txt"), "embeddings"), &vocab,
                                 g.seed.value_or(0));
  return l;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

template <class F>
std::string render(F&& f) {
  std::ostringstream ss;
  f(ss);
  return ss.str();
}

// Values from --config replace whatever the command line gave: the global
// section applies to every command, a [command] section to that command only.
void apply_config(const std::string& path, CLI::App& app, CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw Error("config file not found: " + path);
  const KvDocument doc = KvDocument::parse(in, path);
  for (const auto& section : doc.sections) {
    if (!section.name.empty() && section.name != cmd.get_name()) continue;
    for (const auto& e : section.entries) {
      CLI::Option* opt = cmd.get_option_no_throw("--" + e.key);
      if (!opt) opt = app.get_option_no_throw("--" + e.key);
      if (!opt || e.key == "config") throw ParseError(path, e.line, "unknown option '" + e.key + "'");
      opt->clear();
      if (opt->get_type_size() == 0) {
        opt->add_result(e.value);
      } else {
        for (const auto& v : split(e.value, ',')) opt->add_result(trim(v));
      }
      opt->run_callback();
    }
  }
}

std::string fmt(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

ojson side_json(const SideStats& s) {
  return {{"total_messages", s.total_messages}, {"unique_messages", s.unique_messages},
          {"total_tokens", s.total_tokens}, {"unique_tokens", s.unique_tokens},
          {"avg_tokens_per_message", s.avg_tokens_per_message}};
}

void print_stats_table(std::ostream& out, const CorpusStats& st) {
  out << "statistic,author,others,all\n";
  auto row = [&](const char* name, auto get) {
    out << name << ',' << get(st.author) << ',' << get(st.others) << ',' << get(st.all) << '\n';
  };
  row("total_messages", [](const SideStats& s) { return std::to_string(s.total_messages); });
  row("unique_messages", [](const SideStats& s) { return std::to_string(s.unique_messages); });
  row("total_tokens", [](const SideStats& s) { return std::to_string(s.total_tokens); });
  row("unique_tokens", [](const SideStats& s) { return std::to_string(s.unique_tokens); });
  row("avg_tokens_per_message", [](const SideStats& s) { return fmt(s.avg_tokens_per_message, 2); });
}

ExperimentSpec experiment_from(const std::string& file, const std::string& grid) {
  if (!file.empty()) return load_experiment_spec(require_file(file, "experiment"));
  ExperimentSpec spec = quick_experiment_spec();
  if (grid == "full") spec.rows = full_grid_rows();
  else if (grid != "quick") throw Error("--grid must be quick or full");
  return spec;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Speaker attribute toolkit: corpus ingestion, annotation, features, training and evaluation",
               "speakerattr"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Key-value file whose values override command-line flags");
  app.add_option("--seed", g.seed, "Base random seed");
  app.add_option("--jobs", g.jobs, "Worker threads (0 = all available)")->check(CLI::NonNegativeNumber);
  app.add_option("--out-dir", g.out_dir, "Directory for outputs and default inputs")->capture_default_str();
  app.add_flag("--json", g.json, "Machine-readable summary on stdout");
  app.fallthrough();

  // ingest
  std::string ingest_input, ingest_format = "canonical", ingest_output;
  IngestOptions ingest_opts;
  auto* c_ingest = app.add_subcommand("ingest", "Convert an export file into the canonical corpus format");
  c_ingest->add_option("input", ingest_input, "Export file")->required();
  c_ingest->add_option("--format", ingest_format, "canonical, messenger or sms")->capture_default_str();
  c_ingest->add_option("--author-id", ingest_opts.author_id, "Author id for exports that lack one")->capture_default_str();
  c_ingest->add_option("--author-name", ingest_opts.author_name, "Author display name in Messenger exports");
  c_ingest->add_option("-o,--output", ingest_output, "Output corpus (default <out-dir>/corpus.jsonl)");

  // annotate
  DataPaths annotate_paths;
  std::string answers;
  auto* c_annotate = app.add_subcommand("annotate", "Record the seven attributes for each unannotated partner");
  annotate_paths.add_to(c_annotate);
  c_annotate->add_option("--answers", answers, "Read answers from a file instead of stdin");

  // stats
  std::string stats_corpus, stats_annotations;
  auto* c_stats = app.add_subcommand("stats", "Token and message counts, plus attribute distributions");
  c_stats->add_option("corpus", stats_corpus, "Canonical corpus (default <out-dir>/corpus.jsonl)");
  c_stats->add_option("--annotations", stats_annotations, "Also report attribute distributions");

  // featurize
  DataPaths feat_paths;
  std::string feat_kinds = "liwc,time,frequency,style,graph", feat_target = "family", feat_mode = "inverted",
              feat_orientation = "incoming";
  std::size_t feat_window = 5, feat_stride = 1;
  auto* c_feat = app.add_subcommand("featurize", "Compute raw feature matrices for every context window");
  feat_paths.add_to(c_feat);
  c_feat->add_option("--kinds", feat_kinds, "Comma-separated feature kinds")->capture_default_str();
  c_feat->add_option("--target", feat_target, "Target attribute for attribute features")->capture_default_str();
  c_feat->add_option("--window", feat_window, "Messages per window")->capture_default_str();
  c_feat->add_option("--stride", feat_stride, "Window stride")->capture_default_str();
  c_feat->add_option("--weight-mode", feat_mode, "inverted or paper_formula")->capture_default_str();
  c_feat->add_option("--graph-orientation", feat_orientation, "incoming or outgoing")->capture_default_str();

  // train
  DataPaths train_paths;
  std::string train_row = "All", train_target = "family", train_experiment, train_output;
  auto* c_train = app.add_subcommand("train", "Train one model on every annotated partner");
  train_paths.add_to(c_train);
  c_train->add_option("--row", train_row, "Model variant, e.g. Emb, All, Joint+All")->capture_default_str();
  c_train->add_option("--target", train_target, "Target attribute (ignored by joint rows)")->capture_default_str();
  c_train->add_option("--experiment", train_experiment, "Experiment file supplying model settings");
  c_train->add_option("-o,--output", train_output, "Checkpoint path (default <out-dir>/model.ckpt)");

  // evaluate
  DataPaths eval_paths;
  std::string eval_grid = "quick", eval_experiment, eval_targets, eval_rows;
  std::optional<std::size_t> eval_budget, eval_folds, eval_epochs;
  bool eval_no_cache = false;
  auto* c_eval = app.add_subcommand("evaluate", "Leave-one-speaker-out evaluation of an experiment grid");
  eval_paths.add_to(c_eval);
  c_eval->add_option("--grid", eval_grid, "quick or full")->capture_default_str();
  c_eval->add_option("--experiment", eval_experiment, "Experiment file (overrides --grid)");
  c_eval->add_option("--targets", eval_targets, "Comma-separated attributes");
  c_eval->add_option("--rows", eval_rows, "Semicolon-separated row labels");
  c_eval->add_option("--budget", eval_budget, "Window sample size");
  c_eval->add_option("--max-folds", eval_folds, "Evaluate only the first N folds");
  c_eval->add_option("--epochs", eval_epochs, "Training epochs");
  c_eval->add_flag("--no-cache", eval_no_cache, "Do not read or write the feature cache");

  // report
  DataPaths report_paths;
  std::string report_kind = "all", report_mode = "inverted";
  std::size_t report_top = 10, report_nodes = kDisplayTopN, report_threshold = kDisplayEdgeThreshold;
  auto* c_report = app.add_subcommand("report", "Corpus analyses as CSV files");
  report_paths.add_to(c_report);
  c_report->add_option("kind", report_kind, "dominance, time, mirroring, clusters or all")->capture_default_str();
  c_report->add_option("--top", report_top, "Dominant classes per attribute value")->capture_default_str();
  c_report->add_option("--nodes", report_nodes, "Partners in the graph display")->capture_default_str();
  c_report->add_option("--edge-threshold", report_threshold, "Minimum mentions per displayed edge")
      ->capture_default_str();
  c_report->add_option("--weight-mode", report_mode, "inverted or paper_formula")->capture_default_str();

  // synth
  std::string synth_spec_file;
  std::optional<std::size_t> synth_speakers;
  std::optional<double> synth_signal;
  bool synth_table2 = false;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic annotated corpus with planted signals");
  c_synth->add_option("--spec", synth_spec_file, "Synth spec file");
  c_synth->add_option("--speakers", synth_speakers, "Number of partners");
  c_synth->add_option("--signal", synth_signal, "Strength of every planted signal, 0 to 1");
  c_synth->add_flag("--table2", synth_table2, "104 partners with the reference attribute distribution");

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    if (!g.config.empty()) apply_config(g.config, app, *cmd);
#ifdef _OPENMP
    if (g.jobs > 0) omp_set_num_threads(g.jobs);
#endif
    const std::uint64_t seed = g.seed.value_or(0);
    const fs::path out_dir(g.out_dir);
    ojson summary;
    summary["command"] = cmd->get_name();

    if (cmd == c_ingest) {
      Corpus corpus = ingest(require_file(ingest_input, "input"), parse_input_format(ingest_format), ingest_opts);
      const fs::path target = ingest_output.empty() ? out_dir / "corpus.jsonl" : fs::path(ingest_output);
      write_text(target, render([&](std::ostream& s) { write_canonical(s, corpus); }));
      summary["corpus"] = target.string();
      summary["partners"] = corpus.conversations.size();
      summary["messages"] = corpus.message_count();
      if (!g.json) out << "wrote " << target.string() << ": " << corpus.message_count() << " messages, "
                       << corpus.conversations.size() << " partners\n";
    } else if (cmd == c_annotate) {
      Corpus corpus = load_corpus(annotate_paths, g);
      const fs::path path = resolve(annotate_paths.annotations, g, "annotations.txt");
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      AnnotationLock lock(path);
      AnnotationSet existing = fs::exists(path) ? load_annotations(path) : AnnotationSet{};
      std::ifstream answer_file;
      if (!answers.empty()) {
        answer_file.open(require_file(answers, "answers"));
      }
      std::istream& src = answers.empty() ? in : answer_file;
      std::ostream& prompts = g.json ? err : out;
      AnnotationSet done = annotate_interactive(corpus, std::move(existing), src, prompts,
                                                [&](const AnnotationSet& s) { save_annotations(path, s); });
      save_annotations(path, done);
      summary["annotations"] = path.string();
      summary["annotated"] = done.profiles.size();
      summary["remaining"] = annotation_queue(corpus, done).size();
    } else if (cmd == c_stats) {
      DataPaths p;
      p.corpus = stats_corpus;
      Corpus corpus = load_corpus(p, g);
      const CorpusStats st = stats(corpus);
      summary["author"] = side_json(st.author);
      summary["others"] = side_json(st.others);
      summary["all"] = side_json(st.all);
      if (!g.json) print_stats_table(out, st);
      if (!stats_annotations.empty()) {
        AnnotationSet ann = load_annotations(require_file(stats_annotations, "annotations"));
        ojson dist = ojson::array();
        if (!g.json) out << "\nattribute,value,speakers,speaker_pct,messages,message_pct\n";
        for (const auto& d : distribution(ann, corpus)) {
          for (int v = 0; v < value_count(d.attribute); ++v) {
            const auto k = static_cast<std::size_t>(v);
            dist.push_back({{"attribute", attribute_name(d.attribute)}, {"value", value_name(d.attribute, v)},
                            {"speakers", d.speaker_counts[k]}, {"speaker_pct", d.speaker_pct[k]},
                            {"messages", d.message_counts[k]}, {"message_pct", d.message_pct[k]}});
            if (!g.json) {
              out << attribute_name(d.attribute) << ',' << value_name(d.attribute, v) << ',' << d.speaker_counts[k]
                  << ',' << fmt(d.speaker_pct[k], 1) << ',' << d.message_counts[k] << ','
                  << fmt(d.message_pct[k], 1) << '\n';
            }
          }
        }
        summary["distribution"] = dist;
      }
    } else if (cmd == c_feat) {
      Corpus corpus = load_corpus(feat_paths, g);
      FeatureMask mask;
      for (const auto& k : split(feat_kinds, ',')) {
        auto kind = parse_feature_kind(trim(k));
        if (!kind) throw Error("unknown feature kind '" + trim(k) + "'");
        mask.set(*kind);
      }
      std::vector<ContextWindow> windows;
      for (const auto& conv : corpus.conversations) {
        auto w = build_windows(conv, feat_window, feat_stride);
        windows.insert(windows.end(), w.begin(), w.end());
      }
      if (windows.empty()) throw Error("no context windows: every conversation is shorter than the window size");
      std::optional<CategoryLexicon> lex;
      std::unique_ptr<MessageCache> cache;
      std::optional<AnnotationSet> ann;
      std::optional<MentionGraph> graph;
      std::optional<DistanceMatrix> dist;
      FeatureInputs inputs;
      if (mask.has(FeatureKind::liwc) || mask.has(FeatureKind::style)) {
        lex = load_lexicon_or_standin(feat_paths, g, err);
        cache = std::make_unique<MessageCache>(corpus, *lex);
        inputs.cache = cache.get();
      }
      if (mask.has(FeatureKind::graph)) {
        graph = build_mention_graph(corpus, load_alias_file(feat_paths, g, err));
        dist = shortest_paths(
            oriented_weights(*graph, parse_weight_mode(feat_mode), parse_graph_orientation(feat_orientation)));
        inputs.graph = &*graph;
        inputs.distances = &*dist;
      }
      if (mask.has(FeatureKind::attributes)) {
        ann = load_annotation_file(feat_paths, g);
        auto t = parse_attribute(feat_target);
        if (!t) throw Error("unknown attribute '" + feat_target + "'");
        inputs.annotations = &*ann;
        inputs.target = *t;
      }
      FeatureMatrices m = featurize(windows, mask, inputs);
      const std::string fingerprint = hex64(fnv1a(feat_kinds + "/" + std::to_string(feat_window) + "/" +
                                                  std::to_string(feat_stride), corpus_hash(corpus)));
      fs::create_directories(out_dir);
      save_feature_cache(out_dir / "features.bin", m, fingerprint);
      write_text(out_dir / "windows.csv", render([&](std::ostream& s) {
                   s << "row,partner,start,window_index\n";
                   for (std::size_t i = 0; i < windows.size(); ++i) {
                     s << i << ',' << windows[i].partner_id() << ',' << windows[i].start << ','
                       << windows[i].window_index << '\n';
                   }
                 }));
      summary["features"] = (out_dir / "features.bin").string();
      summary["windows"] = windows.size();
      summary["fingerprint"] = fingerprint;
      ojson dims = ojson::object();
      for (FeatureKind k : kFeatureKinds) {
        if (mask.has(k)) dims[std::string(feature_kind_name(k))] = m.kind[index_of(k)].cols();
      }
      summary["dims"] = dims;
      if (!g.json) out << "wrote " << windows.size() << " windows to " << (out_dir / "features.bin").string() << '\n';
    } else if (cmd == c_train) {
      Loaded l = load_all(train_paths, g, err);
      ExperimentSpec spec = experiment_from(train_experiment, "quick");
      if (g.seed) spec.seed = seed;
      const ExperimentRow row = parse_row(train_row);
      auto target = parse_attribute(train_target);
      if (!target) throw Error("unknown attribute '" + train_target + "'");
      TrainedModel tm = train_full(spec, row, *target, l.data());
      const fs::path target_path = train_output.empty() ? out_dir / "model.ckpt" : fs::path(train_output);
      if (target_path.has_parent_path()) fs::create_directories(target_path.parent_path());
      save_checkpoint(target_path, tm.checkpoint);
      write_text(out_dir / "training_curve.csv", render([&](std::ostream& s) {
                   s << "epoch,train_loss,val_loss,val_accuracy\n";
                   for (const auto& e : tm.result.curve) {
                     s << e.epoch << ',' << fmt(e.train_loss, 6) << ',' << fmt(e.val_loss, 6) << ','
                       << fmt(e.val_accuracy, 4) << '\n';
                   }
                 }));
      summary["checkpoint"] = target_path.string();
      summary["best_epoch"] = tm.result.best_epoch;
      summary["parameters"] = tm.checkpoint.params.parameter_count();
      if (!g.json) out << "wrote " << target_path.string() << " (best epoch " << tm.result.best_epoch << ")\n";
    } else if (cmd == c_eval) {
      Loaded l = load_all(eval_paths, g, err);
      ExperimentSpec spec = experiment_from(eval_experiment, eval_grid);
      if (g.seed) spec.seed = seed;
      if (eval_budget) spec.budget = *eval_budget;
      if (eval_folds) spec.max_folds = *eval_folds;
      if (eval_epochs) spec.model.epochs = *eval_epochs;
      if (!eval_targets.empty()) {
        spec.targets.clear();
        for (const auto& t : split(eval_targets, ',')) {
          auto a = parse_attribute(trim(t));
          if (!a) throw Error("unknown attribute '" + trim(t) + "'");
          spec.targets.push_back(*a);
        }
      }
      if (!eval_rows.empty()) {
        spec.rows.clear();
        for (const auto& r : split(eval_rows, ';')) spec.rows.push_back(parse_row(r));
      }
      GridHooks hooks;
      if (!g.json) hooks.progress = [&](const std::string& m) { err << m << '\n'; };
      if (!eval_no_cache) hooks.cache_dir = out_dir / "cache";
      GridReport report = run_grid(spec, l.data(), hooks);
      for (const auto& w : report.warnings) err << "warning: " << w << '\n';
      write_text(out_dir / "report.csv", render([&](std::ostream& s) { write_report_csv(s, report); }));
      write_text(out_dir / "report_table.csv", render([&](std::ostream& s) { write_report_table(s, report); }));
      write_text(out_dir / "report.json", render([&](std::ostream& s) { write_report_json(s, report); }));
      write_text(out_dir / "experiment.txt", render([&](std::ostream& s) { write_experiment_spec(s, spec); }));
      summary["fingerprint"] = report.fingerprint;
      summary["folds"] = report.folds.size();
      summary["report"] = (out_dir / "report.json").string();
      if (!g.json) write_report_table(out, report);
    } else if (cmd == c_report) {
      const bool all = report_kind == "all";
      if (!all && report_kind != "dominance" && report_kind != "time" && report_kind != "mirroring" &&
          report_kind != "clusters") {
        throw Error("unknown report kind '" + report_kind + "'");
      }
      Corpus corpus = load_corpus(report_paths, g);
      AnnotationSet ann = load_annotation_file(report_paths, g);
      check_annotation_keys(ann, corpus);
      ojson files = ojson::array();
      auto emit = [&](const char* name, const std::string& text) {
        write_text(out_dir / name, text);
        files.push_back((out_dir / name).string());
      };
      if (all || report_kind == "dominance" || report_kind == "mirroring") {
        const CategoryLexicon lex = load_lexicon_or_standin(report_paths, g, err);
        if (all || report_kind == "dominance") {
          const auto rows = dominance_report(corpus, ann, lex, report_top);
          emit("report_dominance.csv", render([&](std::ostream& s) { write_dominance_csv(s, rows, lex); }));
        }
        if (all || report_kind == "mirroring") {
          const auto series = mirroring_curve(corpus, attribute_groups(ann, corpus), lex);
          emit("report_mirroring.csv", render([&](std::ostream& s) { write_mirroring_csv(s, series); }));
        }
      }
      if (all || report_kind == "time") {
        const auto series = time_distribution(corpus, attribute_groups(ann, corpus));
        emit("report_time.csv", render([&](std::ostream& s) { write_time_csv(s, series); }));
      }
      if (all || report_kind == "clusters") {
        const MentionGraph graph = build_mention_graph(corpus, load_alias_file(report_paths, g, err));
        const WeightMode mode = parse_weight_mode(report_mode);
        const ClusterReport r = cluster_report(graph, corpus, &ann, mode, seed, report_nodes, report_threshold);
        emit("report_clusters.csv", render([&](std::ostream& s) { write_cluster_csv(s, r); }));
        emit("graph_export.tsv", render([&](std::ostream& s) { write_graph_export(s, r.display); }));
        emit("graph_edges.tsv", render([&](std::ostream& s) { write_edge_list(s, graph, mode); }));
        summary["communities"] = r.partition.community_count;
        summary["modularity"] = r.partition.modularity;
      }
      summary["files"] = files;
      if (!g.json) {
        for (const auto& f : files) out << "wrote " << f.get<std::string>() << '\n';
      }
    } else if (cmd == c_synth) {
      SynthSpec spec = synth_table2 ? default_spec_table2() : SynthSpec{};
      if (!synth_spec_file.empty()) spec = load_synth_spec(require_file(synth_spec_file, "synth spec"));
      if (synth_speakers) spec.speakers = *synth_speakers;
      if (synth_signal) spec.set_signal(*synth_signal);
      if (g.seed) spec.seed = seed;
      SynthOutput o = generate(spec);
      save_synth(out_dir, o, spec);
      summary["out_dir"] = out_dir.string();
      summary["speakers"] = spec.speakers;
      summary["messages"] = o.corpus.message_count();
      if (!g.json) out << "wrote synthetic corpus (" << spec.speakers << " partners, " << o.corpus.message_count()
                       << " messages) to " << out_dir.string() << '\n';
    }
    if (g.json) out << summary.dump(2) << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace speakerattr::cli

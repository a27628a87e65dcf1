#include "speakerattr/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "json.hpp"
#include "speakerattr/common.hpp"
#include "speakerattr/time_util.hpp"

namespace speakerattr {

std::string_view feature_kind_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::liwc: return "liwc";
    case FeatureKind::time: return "time";
    case FeatureKind::frequency: return "frequency";
    case FeatureKind::style: return "style";
    case FeatureKind::graph: return "graph";
    case FeatureKind::attributes: return "attributes";
  }
  return "liwc";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view name) {
  std::string lower = to_lower_ascii(trim(name));
  for (FeatureKind k : kFeatureKinds) {
    if (feature_kind_name(k) == lower) return k;
  }
  if (lower == "attribute") return FeatureKind::attributes;
  return std::nullopt;
}

bool FeatureMask::any() const { return std::any_of(on.begin(), on.end(), [](bool b) { return b; }); }

FeatureMask FeatureMask::all_text() {
  FeatureMask m;
  for (FeatureKind k : kFeatureKinds) m.set(k, k != FeatureKind::attributes);
  return m;
}

std::size_t liwc_dim(std::size_t categories) { return 3 * categories + 1; }
std::size_t time_dim(std::size_t window_size) { return window_size + 19; }
std::size_t frequency_dim(std::size_t window_size) { return 4 + window_size; }
std::size_t attribute_dim(Attribute target) { return target == Attribute::relative_age ? 6 : 8; }

namespace {

void liwc_from_tallies(const CategoryTally& author, const CategoryTally& partner, std::size_t categories,
                       double* out) {
  CategoryVector a = author.tokens ? author.normalized() : CategoryVector(categories, 0.0);
  CategoryVector p = partner.tokens ? partner.normalized() : CategoryVector(categories, 0.0);
  a.resize(categories, 0.0);
  p.resize(categories, 0.0);
  double dot = 0.0, na = 0.0, np = 0.0;
  for (std::size_t c = 0; c < categories; ++c) {
    dot += a[c] * p[c];
    na += a[c] * a[c];
    np += p[c] * p[c];
  }
  const double cosine = (na > 0.0 && np > 0.0) ? dot / (std::sqrt(na) * std::sqrt(np)) : 0.0;
  for (std::size_t c = 0; c < categories; ++c) {
    out[c] = a[c];
    out[categories + c] = p[c];
    out[2 * categories + 1 + c] = a[c] + p[c];
  }
  out[2 * categories] = cosine;
}

void time_into(std::span<const Message> window, double* out) {
  if (window.empty()) throw Error("time features of an empty window");
  const std::size_t w = window.size();
  for (std::size_t i = 1; i < w; ++i) {
    if (window[i].timestamp < window[i - 1].timestamp) throw Error("window timestamps are not in time order");
  }
  std::size_t k = 0;
  out[k++] = static_cast<double>(window.back().timestamp - window.front().timestamp);
  for (std::size_t i = 1; i < w; ++i) out[k++] = static_cast<double>(window[i].timestamp - window[i - 1].timestamp);
  CivilTime t = to_civil(window.back().timestamp);
  out[k++] = static_cast<double>(t.day) / 31.0;
  for (unsigned m = 1; m <= 12; ++m) out[k++] = t.month == m ? 1.0 : 0.0;
  out[k++] = static_cast<double>(t.year - kTimeEpochYear) / kTimeYearScale;
  // winter: Dec-Feb, spring: Mar-May, summer: Jun-Aug, fall: Sep-Nov
  const unsigned season = (t.month % 12) / 3;
  for (unsigned s = 0; s < 4; ++s) out[k++] = s == season ? 1.0 : 0.0;
  out[k++] = static_cast<double>(t.hour) / 23.0;
}

void frequency_into(std::span<const Message> window, std::span<const Message> history, double* out) {
  if (window.empty()) throw Error("frequency features of an empty window");
  const Timestamp start = window.front().timestamp;
  auto since = [&](Timestamp horizon) {
    auto it = std::lower_bound(history.begin(), history.end(), start - horizon,
                               [](const Message& m, Timestamp t) { return m.timestamp < t; });
    return static_cast<double>(history.end() - it);
  };
  out[0] = std::log1p(since(86400));
  out[1] = std::log1p(since(7 * 86400));
  out[2] = std::log1p(since(30 * 86400));
  out[3] = std::log1p(static_cast<double>(history.size()));
  for (std::size_t i = 0; i < window.size(); ++i) out[4 + i] = window[i].is_author ? 1.0 : 0.0;
}

void attributes_into(const AttributeProfile& profile, Attribute target, double* out) {
  std::size_t k = 0;
  for (Attribute a : kAttributes) {
    if (a == target || a == Attribute::relative_age) continue;
    out[k++] = profile.get(a) == 0 ? 1.0 : 0.0;
  }
  if (target != Attribute::relative_age) {
    for (int v = 0; v < 3; ++v) out[k++] = profile.get(Attribute::relative_age) == v ? 1.0 : 0.0;
  }
}

double style_lsm(std::span<const FunctionWordCounts> counts, std::span<const Message> messages) {
  FunctionWordCounts author, partner;
  for (std::size_t i = 0; i < messages.size(); ++i) (messages[i].is_author ? author : partner) += counts[i];
  return lsm(author.profile(), partner.profile());
}

}  // namespace

std::vector<double> liwc_features(std::span<const Message> window, const CategoryLexicon& lexicon) {
  CategoryTally author(lexicon.size()), partner(lexicon.size());
  for (const auto& m : window) (m.is_author ? author : partner).add(m.tokens, lexicon);
  std::vector<double> out(liwc_dim(lexicon.size()));
  liwc_from_tallies(author, partner, lexicon.size(), out.data());
  return out;
}

std::vector<double> time_features(std::span<const Message> window) {
  std::vector<double> out(time_dim(window.size()));
  time_into(window, out.data());
  return out;
}

std::vector<double> frequency_features(std::span<const Message> window, std::span<const Message> history) {
  std::vector<double> out(frequency_dim(window.size()));
  frequency_into(window, history, out.data());
  return out;
}

std::vector<double> style_features(std::span<const Message> window, std::span<const Message> history,
                                   const FunctionWordMap& function_words) {
  std::vector<Message> combined(history.begin(), history.end());
  combined.insert(combined.end(), window.begin(), window.end());
  auto last = [&](std::size_t end) {
    std::size_t begin = end > kStyleHistory ? end - kStyleHistory : 0;
    std::vector<FunctionWordCounts> counts;
    for (std::size_t i = begin; i < end; ++i) counts.push_back(function_words.count(combined[i].tokens));
    return style_lsm(counts, std::span<const Message>(combined).subspan(begin, end - begin));
  };
  const double initial = last(history.size());
  const double final_ = last(combined.size());
  return {initial, final_ - initial};
}

std::vector<double> graph_features(const std::string& partner_id, const MentionGraph& graph,
                                   const DistanceMatrix& distances) {
  if (distances.n != graph.nodes.size()) throw Error("distance matrix does not match the mention graph");
  auto idx = graph.index_of(partner_id);
  if (!idx || !graph.touches_edge(*idx)) return std::vector<double>(distances.n, distances.sentinel);
  auto row = distances.row(*idx);
  return {row.begin(), row.end()};
}

std::vector<double> attribute_features(const AttributeProfile& profile, Attribute target) {
  std::vector<double> out(attribute_dim(target));
  attributes_into(profile, target, out.data());
  return out;
}

Normalizer::Normalizer(Eigen::VectorXd mean, Eigen::VectorXd sigma)
    : mean_(std::move(mean)), sigma_(std::move(sigma)), fitted_(true) {
  if (mean_.size() != sigma_.size()) throw Error("normalizer mean and sigma differ in size");
  sigma_ = sigma_.cwiseMax(kSigmaFloor);
}

Normalizer Normalizer::fit(const Eigen::MatrixXd& rows) {
  if (rows.rows() < 2) throw Error("normalizer needs at least two training vectors");
  Eigen::VectorXd mean = rows.colwise().mean().transpose();
  Eigen::VectorXd var = (rows.rowwise() - mean.transpose()).array().square().colwise().mean().transpose();
  return Normalizer(mean, var.array().sqrt().matrix());
}

Eigen::VectorXd Normalizer::apply(const Eigen::VectorXd& v) const {
  if (!fitted_) throw Error("normalizer used before fitting");
  if (v.size() != mean_.size()) throw Error("vector dimension does not match the normalizer");
  return ((v - mean_).array() / sigma_.array()).cwiseMax(-kClamp).cwiseMin(kClamp).matrix();
}

Eigen::MatrixXd Normalizer::apply_rows(const Eigen::MatrixXd& rows) const {
  if (!fitted_) throw Error("normalizer used before fitting");
  if (rows.cols() != mean_.size()) throw Error("matrix width does not match the normalizer");
  Eigen::MatrixXd out = (rows.rowwise() - mean_.transpose()).array().rowwise() / sigma_.transpose().array();
  return out.cwiseMax(-kClamp).cwiseMin(kClamp);
}

MessageCache::MessageCache(const Corpus& corpus, const CategoryLexicon& lexicon)
    : lexicon_(&lexicon), function_words_(lexicon) {
  for (const auto& conv : corpus.conversations) {
    auto& tallies = tallies_[&conv];
    auto& fw = function_[&conv];
    tallies.reserve(conv.messages.size());
    fw.reserve(conv.messages.size());
    for (const auto& m : conv.messages) {
      CategoryTally t(lexicon.size());
      t.add(m.tokens, lexicon);
      tallies.push_back(std::move(t));
      fw.push_back(function_words_.count(m.tokens));
    }
  }
}

const CategoryTally& MessageCache::tally(const Conversation& conv, std::size_t index) const {
  auto it = tallies_.find(&conv);
  if (it == tallies_.end()) throw Error("conversation is not part of the cached corpus");
  return it->second.at(index);
}

const FunctionWordCounts& MessageCache::function_counts(const Conversation& conv, std::size_t index) const {
  auto it = function_.find(&conv);
  if (it == function_.end()) throw Error("conversation is not part of the cached corpus");
  return it->second.at(index);
}

namespace {

void liwc_into(const ContextWindow& window, const MessageCache& cache, double* out) {
  const std::size_t c = cache.lexicon().size();
  CategoryTally author(c), partner(c);
  const auto& msgs = window.conversation->messages;
  for (std::size_t i = window.start; i < window.start + window.size; ++i) {
    (msgs[i].is_author ? author : partner).merge(cache.tally(*window.conversation, i));
  }
  liwc_from_tallies(author, partner, c, out);
}

void style_into(const ContextWindow& window, const MessageCache& cache, double* out) {
  const auto& msgs = window.conversation->messages;
  auto lsm_until = [&](std::size_t end) {
    std::size_t begin = end > kStyleHistory ? end - kStyleHistory : 0;
    FunctionWordCounts author, partner;
    for (std::size_t i = begin; i < end; ++i) {
      (msgs[i].is_author ? author : partner) += cache.function_counts(*window.conversation, i);
    }
    return lsm(author.profile(), partner.profile());
  };
  const double initial = lsm_until(window.start);
  out[0] = initial;
  out[1] = lsm_until(window.start + window.size) - initial;
}

}  // namespace

std::vector<double> liwc_features(const ContextWindow& window, const MessageCache& cache) {
  std::vector<double> out(liwc_dim(cache.lexicon().size()));
  liwc_into(window, cache, out.data());
  return out;
}

std::vector<double> style_features(const ContextWindow& window, const MessageCache& cache) {
  std::vector<double> out(kStyleDim);
  style_into(window, cache, out.data());
  return out;
}

namespace {

struct Plan {
  std::array<std::size_t, kFeatureKindCount> dims{};
  std::map<std::string, std::vector<double>> graph_rows;
  std::vector<const AttributeProfile*> profiles;
};

Plan prepare(std::span<const ContextWindow> windows, FeatureMask mask, const FeatureInputs& in, FeatureMatrices& out) {
  Plan plan;
  const std::size_t w = windows.empty() ? 0 : windows.front().size;
  for (const auto& win : windows) {
    if (win.size != w) throw Error("windows of different sizes in one feature matrix");
    if (!win.conversation) throw Error("window without a conversation");
    if (win.start + win.size > win.conversation->messages.size()) throw Error("window runs past its conversation");
    if (in.cache && (mask.has(FeatureKind::liwc) || mask.has(FeatureKind::style)) && win.size > 0) {
      in.cache->tally(*win.conversation, win.start);
    }
  }
  if ((mask.has(FeatureKind::liwc) || mask.has(FeatureKind::style)) && !in.cache) {
    throw Error("liwc and style features need a message cache");
  }
  if (mask.has(FeatureKind::liwc)) plan.dims[index_of(FeatureKind::liwc)] = liwc_dim(in.cache->lexicon().size());
  if (mask.has(FeatureKind::time)) plan.dims[index_of(FeatureKind::time)] = time_dim(w);
  if (mask.has(FeatureKind::frequency)) plan.dims[index_of(FeatureKind::frequency)] = frequency_dim(w);
  if (mask.has(FeatureKind::style)) plan.dims[index_of(FeatureKind::style)] = kStyleDim;
  if (mask.has(FeatureKind::graph)) {
    if (!in.graph || !in.distances) throw Error("graph features need a mention graph and distance matrix");
    plan.dims[index_of(FeatureKind::graph)] = in.distances->n;
    for (const auto& win : windows) {
      if (!plan.graph_rows.count(win.partner_id())) {
        plan.graph_rows[win.partner_id()] = graph_features(win.partner_id(), *in.graph, *in.distances);
      }
    }
  }
  if (mask.has(FeatureKind::attributes)) {
    if (!in.annotations) throw Error("attribute features need annotations");
    plan.dims[index_of(FeatureKind::attributes)] = attribute_dim(in.target);
    for (const auto& win : windows) {
      const AttributeProfile* p = in.annotations->find(win.partner_id());
      if (!p) throw Error("partner '" + win.partner_id() + "' is not annotated");
      plan.profiles.push_back(p);
    }
  }
  for (const auto& win : windows) {
    auto msgs = win.messages();
    for (std::size_t i = 1; i < msgs.size(); ++i) {
      if (msgs[i].timestamp < msgs[i - 1].timestamp) throw Error("window timestamps are not in time order");
    }
  }
  out.mask = mask;
  for (FeatureKind k : kFeatureKinds) {
    if (mask.has(k)) {
      out.kind[index_of(k)].resize(static_cast<Eigen::Index>(windows.size()),
                                   static_cast<Eigen::Index>(plan.dims[index_of(k)]));
    }
  }
  return plan;
}

// Row-major scratch per window, copied into the column-major matrices.
void featurize_one(const ContextWindow& win, std::size_t row, const Plan& plan, FeatureMask mask,
                   const FeatureInputs& in, FeatureMatrices& out, std::vector<double>& scratch) {
  auto put = [&](FeatureKind k) {
    auto& m = out.kind[index_of(k)];
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(static_cast<Eigen::Index>(row), c) = scratch[static_cast<std::size_t>(c)];
  };
  for (FeatureKind k : kFeatureKinds) {
    if (!mask.has(k)) continue;
    scratch.assign(plan.dims[index_of(k)], 0.0);
    switch (k) {
      case FeatureKind::liwc: liwc_into(win, *in.cache, scratch.data()); break;
      case FeatureKind::time: time_into(win.messages(), scratch.data()); break;
      case FeatureKind::frequency: frequency_into(win.messages(), win.history(), scratch.data()); break;
      case FeatureKind::style: style_into(win, *in.cache, scratch.data()); break;
      case FeatureKind::graph: scratch = plan.graph_rows.at(win.partner_id()); break;
      case FeatureKind::attributes: attributes_into(*plan.profiles[row], in.target, scratch.data()); break;
    }
    put(k);
  }
}

}  // namespace

FeatureMatrices featurize(std::span<const ContextWindow> windows, FeatureMask mask, const FeatureInputs& inputs) {
  FeatureMatrices out;
  const Plan plan = prepare(windows, mask, inputs, out);
  const auto n = static_cast<std::ptrdiff_t>(windows.size());
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      featurize_one(windows[static_cast<std::size_t>(i)], static_cast<std::size_t>(i), plan, mask, inputs, out, scratch);
    }
  }
  return out;
}

FeatureMatrices featurize_serial(std::span<const ContextWindow> windows, FeatureMask mask,
                                 const FeatureInputs& inputs) {
  FeatureMatrices out;
  const Plan plan = prepare(windows, mask, inputs, out);
  std::vector<double> scratch;
  for (std::size_t i = 0; i < windows.size(); ++i) featurize_one(windows[i], i, plan, mask, inputs, out, scratch);
  return out;
}

namespace {

constexpr char kCacheMagic[8] = {'S', 'A', 'F', 'E', 'A', 'T', '0', '1'};

}  // namespace

void write_feature_cache(std::ostream& out, const FeatureMatrices& m, const std::string& fingerprint) {
  nlohmann::ordered_json header;
  header["fingerprint"] = fingerprint;
  Eigen::Index rows = -1;
  nlohmann::ordered_json kinds = nlohmann::ordered_json::array();
  for (FeatureKind k : kFeatureKinds) {
    if (!m.mask.has(k)) continue;
    const auto& mat = m.kind[index_of(k)];
    if (rows >= 0 && mat.rows() != rows) throw Error("feature matrices differ in row count");
    rows = mat.rows();
    kinds.push_back({{"kind", feature_kind_name(k)}, {"dim", mat.cols()}});
  }
  header["rows"] = rows < 0 ? 0 : rows;
  header["kinds"] = kinds;
  out.write(kCacheMagic, sizeof kCacheMagic);
  out << header.dump() << '\n';
  for (FeatureKind k : kFeatureKinds) {
    if (!m.mask.has(k)) continue;
    const auto& mat = m.kind[index_of(k)];
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      for (Eigen::Index c = 0; c < mat.cols(); ++c) {
        double v = mat(r, c);
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
    }
  }
  if (!out) throw Error("failed to write feature cache");
}

FeatureMatrices read_feature_cache(std::istream& in, const std::string& source_name, std::string* fingerprint) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kCacheMagic)) {
    throw ParseError(source_name, 0, "not a feature cache file");
  }
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source_name, 0, "feature cache header missing");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source_name, 0, std::string("bad feature cache header: ") + e.what());
  }
  if (fingerprint) *fingerprint = header.value("fingerprint", "");
  FeatureMatrices m;
  const auto rows = header.at("rows").get<Eigen::Index>();
  for (const auto& entry : header.at("kinds")) {
    auto kind = parse_feature_kind(entry.at("kind").get<std::string>());
    if (!kind) throw ParseError(source_name, 0, "unknown feature kind in cache");
    auto& mat = m.kind[index_of(*kind)];
    mat.resize(rows, entry.at("dim").get<Eigen::Index>());
    m.mask.set(*kind);
  }
  for (FeatureKind k : kFeatureKinds) {
    if (!m.mask.has(k)) continue;
    auto& mat = m.kind[index_of(k)];
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      for (Eigen::Index c = 0; c < mat.cols(); ++c) {
        double v;
        if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ParseError(source_name, 0, "feature cache truncated");
        mat(r, c) = v;
      }
    }
  }
  return m;
}

void save_feature_cache(const std::filesystem::path& path, const FeatureMatrices& m, const std::string& fingerprint) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write feature cache " + path.string());
  write_feature_cache(out, m, fingerprint);
}

std::optional<FeatureMatrices> load_feature_cache(const std::filesystem::path& path, const std::string& fingerprint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string stored;
  try {
    auto m = read_feature_cache(in, path.string(), &stored);
    if (stored != fingerprint) return std::nullopt;
    return m;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace speakerattr

#include "speakerattr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "speakerattr/common.hpp"
#include "speakerattr/kvfile.hpp"

namespace speakerattr {

using ojson = nlohmann::ordered_json;

namespace {

// Reference speaker counts out of 104.
constexpr std::array<std::initializer_list<double>, kAttributeCount> kTable2Counts = {{
    {6, 98}, {9, 95}, {27, 31, 46}, {81, 23}, {53, 51}, {64, 40}, {34, 70}}};

}  // namespace

SynthSpec::SynthSpec() {
  for (Attribute a : kAttributes) {
    for (double c : kTable2Counts[index_of(a)]) value_shares[index_of(a)].push_back(c / 104.0);
  }
}

void SynthSpec::set_signal(double strength) {
  vocabulary_bias = hour_bias = mention_bias = style_rate = strength;
}

void SynthSpec::validate() const {
  if (speakers == 0) throw Error("synthetic corpus needs at least one speaker");
  for (Attribute a : kAttributes) {
    const auto& s = value_shares[index_of(a)];
    if (s.size() != static_cast<std::size_t>(value_count(a))) {
      throw Error(std::string(attribute_name(a)) + " needs " + std::to_string(value_count(a)) + " value shares");
    }
    double sum = 0.0;
    for (double p : s) {
      if (!(p >= 0.0 && p <= 1.0)) throw Error(std::string(attribute_name(a)) + " shares must lie in [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw Error(std::string(attribute_name(a)) + " shares must sum to 1");
  }
  for (auto [name, v] : {std::pair{"vocabulary_bias", vocabulary_bias}, {"hour_bias", hour_bias},
                         {"mention_bias", mention_bias}, {"style_rate", style_rate}, {"planted_rate", planted_rate},
                         {"mention_rate", mention_rate}, {"base_mention_rate", base_mention_rate},
                         {"speaker_variation", speaker_variation}}) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(std::string(name) + " must lie in [0, 1]");
  }
  if (!(messages_median > 0.0) || !(messages_sigma >= 0.0)) throw Error("bad message count distribution");
  if (messages_min == 0 || messages_min > messages_max) throw Error("messages_min must be in [1, messages_max]");
  if (!(tokens_mean >= 1.0)) throw Error("tokens_mean must be at least 1");
  if (embedding_dim == 0 || span_days == 0 || neutral_words == 0) {
    throw Error("embedding_dim, span_days and neutral_words must be positive");
  }
}

std::vector<std::size_t> value_counts(const std::vector<double>& shares, std::size_t speakers) {
  std::vector<std::size_t> counts(shares.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t v = 0; v < shares.size(); ++v) {
    const double exact = shares[v] * static_cast<double>(speakers);
    counts[v] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    used += counts[v];
    rem.emplace_back(exact - static_cast<double>(counts[v]), v);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first + 1e-12; });
  for (std::size_t k = 0; used < speakers && !rem.empty(); k = (k + 1) % rem.size(), ++used) ++counts[rem[k].second];
  return counts;
}

SynthSpec default_spec_table2() {
  SynthSpec s;
  s.speakers = 104;
  return s;
}

std::optional<std::string_view> planted_category(Attribute a, int value) {
  switch (a) {
    case Attribute::family: return value == 0 ? std::optional<std::string_view>("family") : std::nullopt;
    case Attribute::romantic: return value == 0 ? std::optional<std::string_view>("anx") : std::nullopt;
    case Attribute::relative_age:
      return value == 0 ? "netspeak" : value == 1 ? "see" : "anger";
    case Attribute::childhood_country: return value == 1 ? std::optional<std::string_view>("focusfuture") : std::nullopt;
    case Attribute::gender_same: return value == 0 ? std::optional<std::string_view>("female") : std::nullopt;
    case Attribute::school: return value == 0 ? std::optional<std::string_view>("focuspast") : std::nullopt;
    case Attribute::work: return value == 0 ? std::optional<std::string_view>("work") : std::nullopt;
  }
  return std::nullopt;
}

std::optional<unsigned> planted_hours(Attribute a, int value) {
  switch (a) {
    case Attribute::family: return value == 0 ? std::optional<unsigned>(6) : std::nullopt;
    case Attribute::romantic: return value == 0 ? std::optional<unsigned>(0) : std::nullopt;
    case Attribute::relative_age:
      return value == 0 ? std::optional<unsigned>(21) : value == 1 ? std::optional<unsigned>(3) : std::nullopt;
    case Attribute::childhood_country: return value == 1 ? std::optional<unsigned>(12) : std::nullopt;
    case Attribute::gender_same: return value == 0 ? std::optional<unsigned>(18) : std::nullopt;
    case Attribute::school: return value == 0 ? std::optional<unsigned>(15) : std::nullopt;
    case Attribute::work: return value == 0 ? std::optional<unsigned>(9) : std::nullopt;
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ spec file

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_real(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (v.empty() || pos != v.size()) throw Error("bad number '" + v + "' for " + key);
  return d;
}

std::size_t to_count(const std::string& v, const std::string& key) {
  const double d = to_real(v, key);
  if (d < 0 || d != std::floor(d)) throw Error("bad count '" + v + "' for " + key);
  return static_cast<std::size_t>(d);
}

}  // namespace

SynthSpec parse_synth_spec(std::istream& in, const std::string& source_name) {
  const KvDocument doc = KvDocument::parse(in, source_name);
  if (doc.sections.size() > 1) throw ParseError(source_name, doc.sections[1].line, "synth specs have no sections");
  SynthSpec s;
  // "signal" first so that individual strengths override it wherever they appear.
  for (const KvEntry& e : doc.global().entries) {
    if (e.key == "signal") {
      try {
        s.set_signal(to_real(e.value, e.key));
      } catch (const Error& err) {
        throw ParseError(source_name, e.line, err.what());
      }
    }
  }
  for (const KvEntry& e : doc.global().entries) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    try {
      if (auto a = parse_attribute(k)) {
        std::vector<double> shares;
        for (const auto& part : split(v, ',')) shares.push_back(to_real(trim(part), k));
        s.value_shares[index_of(*a)] = shares;
      } else if (k == "signal") {
      } else if (k == "speakers") {
        s.speakers = to_count(v, k);
      } else if (k == "seed") {
        std::size_t pos = 0;
        try {
          s.seed = std::stoull(v, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (v.empty() || v[0] == '-' || pos != v.size()) throw Error("bad seed '" + v + "'");
      } else if (k == "messages_median") {
        s.messages_median = to_real(v, k);
      } else if (k == "messages_sigma") {
        s.messages_sigma = to_real(v, k);
      } else if (k == "messages_min") {
        s.messages_min = to_count(v, k);
      } else if (k == "messages_max") {
        s.messages_max = to_count(v, k);
      } else if (k == "tokens_mean") {
        s.tokens_mean = to_real(v, k);
      } else if (k == "vocabulary_bias") {
        s.vocabulary_bias = to_real(v, k);
      } else if (k == "hour_bias") {
        s.hour_bias = to_real(v, k);
      } else if (k == "mention_bias") {
        s.mention_bias = to_real(v, k);
      } else if (k == "style_rate") {
        s.style_rate = to_real(v, k);
      } else if (k == "planted_rate") {
        s.planted_rate = to_real(v, k);
      } else if (k == "mention_rate") {
        s.mention_rate = to_real(v, k);
      } else if (k == "base_mention_rate") {
        s.base_mention_rate = to_real(v, k);
      } else if (k == "speaker_variation") {
        s.speaker_variation = to_real(v, k);
      } else if (k == "neutral_words") {
        s.neutral_words = to_count(v, k);
      } else if (k == "embedding_dim") {
        s.embedding_dim = to_count(v, k);
      } else if (k == "span_days") {
        s.span_days = to_count(v, k);
      } else if (k == "start") {
        s.start = parse_timestamp(v);
      } else {
        throw Error("unknown key '" + k + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(source_name, e.line, err.what());
    }
  }
  try {
    s.validate();
  } catch (const Error& err) {
    throw ParseError(source_name, 0, err.what());
  }
  return s;
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open synth spec " + path.string());
  return parse_synth_spec(in, path.string());
}

void write_synth_spec(std::ostream& out, const SynthSpec& s) {
  out << "speakers = " << s.speakers << "\nseed = " << s.seed << '\n';
  for (Attribute a : kAttributes) {
    out << attribute_name(a) << " = ";
    const auto& v = s.value_shares[index_of(a)];
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << num(v[i]);
    out << '\n';
  }
  out << "messages_median = " << num(s.messages_median) << "\nmessages_sigma = " << num(s.messages_sigma)
      << "\nmessages_min = " << s.messages_min << "\nmessages_max = " << s.messages_max
      << "\ntokens_mean = " << num(s.tokens_mean) << "\nvocabulary_bias = " << num(s.vocabulary_bias)
      << "\nhour_bias = " << num(s.hour_bias) << "\nmention_bias = " << num(s.mention_bias)
      << "\nstyle_rate = " << num(s.style_rate) << "\nplanted_rate = " << num(s.planted_rate)
      << "\nmention_rate = " << num(s.mention_rate) << "\nbase_mention_rate = " << num(s.base_mention_rate)
      << "\nspeaker_variation = " << num(s.speaker_variation)
      << "\nneutral_words = " << s.neutral_words << "\nembedding_dim = " << s.embedding_dim
      << "\nspan_days = " << s.span_days << "\nstart = " << format_iso(s.start) << '\n';
}

// ------------------------------------------------------------------ generator

namespace {

constexpr std::array<double, 24> kBaseHours = {1.2, 0.6, 0.3, 0.2, 0.2, 0.2, 0.3, 0.4, 0.8, 1.0, 1.0, 1.0,
                                               1.1, 1.0, 1.0, 1.0, 1.0, 1.0, 1.2, 1.3, 1.3, 1.4, 1.4, 1.3};
constexpr double kFunctionShare = 0.4;
// Messages over which a converging partner reaches the author's style at rate 1.
constexpr double kConvergenceSpan = 1000.0;

struct Vocabulary {
  std::vector<std::string> function_words;
  std::map<std::string, std::vector<std::string>> planted;  // category -> words
  std::vector<std::string> neutral;
  std::vector<double> neutral_weights;  // Zipf
};

std::string pseudo_word(Rng& rng, std::size_t syllables) {
  static constexpr std::string_view consonants = "bdfgklmnprstvz";
  static constexpr std::string_view vowels = "aeiou";
  std::string w;
  for (std::size_t i = 0; i < syllables; ++i) {
    w += consonants[rng.below(consonants.size())];
    w += vowels[rng.below(vowels.size())];
  }
  return w;
}

Vocabulary build_vocabulary(const CategoryLexicon& lex, const SynthSpec& spec, Rng& rng,
                            std::unordered_set<std::string>& used) {
  Vocabulary v;
  std::set<std::size_t> planted_ids;
  for (Attribute a : kAttributes) {
    for (int val = 0; val < value_count(a); ++val) {
      if (auto c = planted_category(a, val)) planted_ids.insert(*lex.category_index(*c));
    }
  }
  std::set<std::size_t> function_ids;
  for (auto name : kFunctionWordNames) function_ids.insert(*lex.category_index(name));
  for (const auto& p : lex.patterns()) {
    if (p.prefix) continue;
    std::size_t planted_hits = 0, planted_cat = 0;
    bool function = false;
    for (std::size_t c : p.categories) {
      if (planted_ids.count(c)) ++planted_hits, planted_cat = c;
      if (function_ids.count(c)) function = true;
    }
    if (planted_hits == 1) {
      v.planted[lex.categories()[planted_cat]].push_back(p.text);
      used.insert(p.text);
    } else if (planted_hits == 0 && function) {
      v.function_words.push_back(p.text);
      used.insert(p.text);
    }
  }
  std::vector<std::size_t> hits;
  while (v.neutral.size() < spec.neutral_words) {
    std::string w = pseudo_word(rng, 2 + rng.below(2));
    lex.match(w, hits);
    if (!hits.empty() || !used.insert(w).second) continue;
    v.neutral.push_back(w);
    v.neutral_weights.push_back(1.0 / static_cast<double>(v.neutral.size()));
  }
  return v;
}

std::string speaker_id(std::size_t i, std::size_t n) {
  const std::size_t width = std::max<std::size_t>(3, std::to_string(n).size());
  std::string digits = std::to_string(i + 1);
  return "s" + std::string(width - digits.size(), '0') + digits;
}

// Community used for planted mentions: family, school, work, other.
std::size_t community_of(const AttributeProfile& p) {
  if (p.get(Attribute::family) == 0) return 0;
  if (p.get(Attribute::school) == 0) return 1;
  if (p.get(Attribute::work) == 0) return 2;
  return 3;
}

constexpr std::array<const char*, 4> kCommunityNames = {"family", "school", "work", "other"};

}  // namespace

SynthOutput generate(const SynthSpec& spec) {
  spec.validate();
  SynthOutput out;
  const CategoryLexicon lex = standin_lexicon();
  out.lexicon_text = std::string(standin_lexicon_text());
  const std::size_t n = spec.speakers;

  // Attribute assignment: exact counts, seeded order per attribute.
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(speaker_id(i, n));
  std::vector<AttributeProfile> profiles(n);
  for (Attribute a : kAttributes) {
    const auto counts = value_counts(spec.value_shares[index_of(a)], n);
    std::vector<int> values;
    for (std::size_t v = 0; v < counts.size(); ++v) values.insert(values.end(), counts[v], static_cast<int>(v));
    Rng rng(derive_seed(spec.seed, "values:" + std::string(attribute_name(a))));
    rng.shuffle(values);
    for (std::size_t i = 0; i < n; ++i) profiles[i].set(a, values[i]);
  }
  for (std::size_t i = 0; i < n; ++i) out.annotations.profiles.emplace(ids[i], profiles[i]);
  out.annotations.note = "synthetic corpus, seed " + std::to_string(spec.seed);

  Rng vocab_rng(derive_seed(spec.seed, "vocabulary"));
  std::unordered_set<std::string> used;
  const Vocabulary vocab = build_vocabulary(lex, spec, vocab_rng, used);

  // Aliases: one pseudo-name per speaker, the author included.
  const std::string author = "author";
  std::vector<std::string> alias(n);
  std::vector<std::size_t> hits;
  auto fresh_name = [&]() {
    while (true) {
      std::string w = pseudo_word(vocab_rng, 3) + "n";
      lex.match(w, hits);
      if (hits.empty() && used.insert(w).second) return w;
    }
  };
  out.aliases.aliases[author] = {fresh_name()};
  for (std::size_t i = 0; i < n; ++i) {
    alias[i] = fresh_name();
    out.aliases.aliases[ids[i]] = {alias[i]};
  }

  std::array<std::vector<std::size_t>, 4> communities;
  std::vector<std::size_t> community(n);
  for (std::size_t i = 0; i < n; ++i) {
    community[i] = community_of(profiles[i]);
    communities[community[i]].push_back(i);
  }

  std::vector<double> author_style(vocab.function_words.size()), partner_base(vocab.function_words.size());
  {
    Rng rng(derive_seed(spec.seed, "author-style"));
    for (double& w : author_style) w = std::exp(rng.normal());
    for (double& w : partner_base) w = rng.normal();
  }
  const double variation = spec.speaker_variation;
  const std::vector<double> base_hours(kBaseHours.begin(), kBaseHours.end());

  // Measured effects, accumulated while generating.
  std::vector<std::size_t> same_community_mentions(4, 0), all_mentions(4, 0);

  std::vector<std::pair<std::string, Message>> records;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(spec.seed, "conversation:" + ids[i]));
    const AttributeProfile& p = profiles[i];
    std::vector<const std::vector<std::string>*> planted;
    std::vector<unsigned> blocks;
    for (Attribute a : kAttributes) {
      if (auto c = planted_category(a, p.get(a))) planted.push_back(&vocab.planted.at(std::string(*c)));
      if (auto h = planted_hours(a, p.get(a))) blocks.push_back(*h);
    }
    std::vector<double> partner_style(vocab.function_words.size());
    for (std::size_t w = 0; w < partner_style.size(); ++w) {
      partner_style[w] = std::exp(partner_base[w] + variation * rng.normal());
    }
    const bool close = p.get(Attribute::family) == 0 || p.get(Attribute::romantic) == 0;
    const double rate = spec.style_rate * (close ? 1.0 : 0.25);

    const double draw = std::exp(std::log(spec.messages_median) + spec.messages_sigma * rng.normal());
    const auto count = std::clamp(static_cast<std::size_t>(std::llround(draw)), spec.messages_min, spec.messages_max);
    const auto spread = [&](double share) {
      return static_cast<std::size_t>(std::floor(variation * share * static_cast<double>(spec.span_days)));
    };
    const std::size_t start_day = rng.below(spread(0.5) + 1);
    const std::size_t duration = std::max<std::size_t>(1, spec.span_days - start_day - rng.below(spread(0.25) + 1));
    const auto& peers = communities[community[i]];

    for (std::size_t m = 0; m < count; ++m) {
      const bool from_author = rng.bernoulli(0.5);
      const auto day = static_cast<Timestamp>(start_day + rng.below(duration));
      unsigned hour = 0;
      if (!blocks.empty() && rng.bernoulli(spec.hour_bias)) {
        hour = blocks[rng.below(blocks.size())] + static_cast<unsigned>(rng.below(3));
      } else {
        hour = static_cast<unsigned>(rng.categorical(base_hours));
      }
      const Timestamp ts = spec.start + day * 86400 + hour * 3600 + static_cast<Timestamp>(rng.below(3600));

      std::size_t length = 1;
      while (length < 40 && rng.bernoulli(1.0 - 1.0 / spec.tokens_mean)) ++length;
      const double converge = std::min(1.0, rate * static_cast<double>(m) / kConvergenceSpan);
      std::vector<std::string> tokens;
      for (std::size_t k = 0; k < length; ++k) {
        if (!planted.empty() && rng.bernoulli(spec.vocabulary_bias * spec.planted_rate)) {
          const auto& words = *planted[rng.below(planted.size())];
          tokens.push_back(words[rng.below(words.size())]);
        } else if (rng.bernoulli(kFunctionShare)) {
          const bool author_like = from_author || rng.bernoulli(converge);
          tokens.push_back(vocab.function_words[rng.categorical(author_like ? author_style : partner_style)]);
        } else {
          tokens.push_back(vocab.neutral[rng.categorical(vocab.neutral_weights)]);
        }
      }
      auto mention = [&](std::size_t target) {
        tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(rng.below(tokens.size() + 1)), alias[target]);
        ++all_mentions[community[i]];
        if (community[target] == community[i]) ++same_community_mentions[community[i]];
      };
      if (peers.size() > 1 && rng.bernoulli(spec.mention_bias * spec.mention_rate)) {
        std::size_t t = peers[rng.below(peers.size() - 1)];
        if (t == i) t = peers.back();
        mention(t);
      }
      if (n > 1 && rng.bernoulli(variation * spec.base_mention_rate)) {
        std::size_t t = rng.below(n - 1);
        if (t >= i) ++t;
        mention(t);
      }
      if (rng.bernoulli(0.15)) tokens.push_back(rng.bernoulli(0.5) ? "!" : "?");
      std::string text;
      for (std::size_t k = 0; k < tokens.size(); ++k) text += (k ? " " : "") + tokens[k];
      records.emplace_back(ids[i], make_message(from_author ? author : ids[i], from_author, ts, std::move(text),
                                                Platform::synthetic));
    }
  }
  out.corpus = assemble_corpus(author, std::move(records), "synthetic");

  // Embeddings: words of one planted category share a centroid.
  {
    Rng rng(derive_seed(spec.seed, "embeddings"));
    const std::size_t d = spec.embedding_dim;
    out.embeddings = EmbeddingTable(d, derive_seed(spec.seed, "markers"));
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    auto random_vec = [&]() {
      Eigen::RowVectorXd v(static_cast<Eigen::Index>(d));
      for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = rng.normal() * scale;
      return v;
    };
    for (const auto& w : vocab.function_words) out.embeddings.add(w, random_vec());
    for (const auto& [cat, words] : vocab.planted) {
      const Eigen::RowVectorXd centroid = random_vec();
      for (const auto& w : words) out.embeddings.add(w, centroid + 0.5 * random_vec());
    }
    for (const auto& w : vocab.neutral) out.embeddings.add(w, random_vec());
    for (const auto& [id, names] : out.aliases.aliases) {
      for (const auto& w : names) out.embeddings.add(w, random_vec());
    }
    for (const char* w : {"!", "?"}) out.embeddings.add(w, random_vec());
  }

  // Manifest: configuration plus effect sizes measured on the generated corpus.
  ojson man;
  {
    std::ostringstream ss;
    write_synth_spec(ss, spec);
    man["spec"] = ss.str();
  }
  ojson counts = ojson::object();
  for (Attribute a : kAttributes) {
    ojson c = ojson::object();
    const auto vc = value_counts(spec.value_shares[index_of(a)], n);
    for (int v = 0; v < value_count(a); ++v) c[std::string(value_name(a, v))] = vc[static_cast<std::size_t>(v)];
    counts[std::string(attribute_name(a))] = c;
  }
  man["speaker_counts"] = counts;
  ojson planted = ojson::array();
  for (Attribute a : kAttributes) {
    for (int v = 0; v < value_count(a); ++v) {
      const auto cat = planted_category(a, v);
      const auto hours = planted_hours(a, v);
      if (!cat && !hours) continue;
      CategoryTally group(lex.size()), rest(lex.size());
      std::size_t group_msgs = 0, rest_msgs = 0, group_in = 0, rest_in = 0;
      for (const auto& conv : out.corpus.conversations) {
        const bool member = out.annotations.find(conv.partner_id)->get(a) == v;
        for (const auto& msg : conv.messages) {
          (member ? group : rest).add(msg.tokens, lex);
          const unsigned h = to_civil(msg.timestamp).hour;
          const bool in_block = hours && h >= *hours && h < *hours + 3;
          (member ? group_msgs : rest_msgs) += 1;
          (member ? group_in : rest_in) += in_block ? 1 : 0;
        }
      }
      ojson e;
      e["attribute"] = attribute_name(a);
      e["value"] = value_name(a, v);
      if (cat) {
        const std::size_t ci = *lex.category_index(*cat);
        e["category"] = *cat;
        e["group_coverage"] = group.tokens ? group.hits[ci] / static_cast<double>(group.tokens) : 0.0;
        e["complement_coverage"] = rest.tokens ? rest.hits[ci] / static_cast<double>(rest.tokens) : 0.0;
      }
      if (hours) {
        e["hours"] = {*hours, *hours + 3};
        e["group_hour_share"] = group_msgs ? static_cast<double>(group_in) / static_cast<double>(group_msgs) : 0.0;
        e["complement_hour_share"] = rest_msgs ? static_cast<double>(rest_in) / static_cast<double>(rest_msgs) : 0.0;
      }
      planted.push_back(e);
    }
  }
  man["planted"] = planted;
  ojson comm = ojson::array();
  for (std::size_t c = 0; c < 4; ++c) {
    ojson members = ojson::array();
    for (std::size_t i : communities[c]) members.push_back(ids[i]);
    comm.push_back({{"name", kCommunityNames[c]},
                    {"members", members},
                    {"mentions", all_mentions[c]},
                    {"same_community_share", all_mentions[c] ? static_cast<double>(same_community_mentions[c]) /
                                                                   static_cast<double>(all_mentions[c])
                                                             : 0.0}});
  }
  man["communities"] = comm;
  man["style"] = {{"rate_close", spec.style_rate}, {"rate_other", spec.style_rate * 0.25},
                  {"convergence_span", kConvergenceSpan}};
  man["messages"] = out.corpus.message_count();
  out.manifest_json = man.dump(2) + "\n";
  return out;
}

void save_synth(const std::filesystem::path& dir, const SynthOutput& out, const SynthSpec& spec) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("corpus.jsonl");
    write_canonical(f, out.corpus);
  }
  {
    auto f = open("annotations.txt");
    write_annotations(f, out.annotations);
  }
  {
    auto f = open("aliases.tsv");
    write_aliases(f, out.aliases);
  }
  {
    auto f = open("embeddings.txt");
    write_embeddings(f, out.embeddings);
  }
  {
    auto f = open("lexicon.dic");
    f << out.lexicon_text;
  }
  {
    auto f = open("manifest.json");
    f << out.manifest_json;
  }
  {
    auto f = open("synth.spec");
    write_synth_spec(f, spec);
  }
}

}  // namespace speakerattr

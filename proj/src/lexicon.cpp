#include "speakerattr/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "speakerattr/common.hpp"

namespace speakerattr {

namespace {

std::vector<std::string> fields(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

CategoryLexicon CategoryLexicon::parse(std::istream& in, const std::string& source_name) {
  CategoryLexicon lex;
  std::map<std::string, std::size_t> id_to_index;
  // pattern key -> categories; the key carries the '*' so literal and prefix differ.
  std::map<std::string, std::vector<std::size_t>> entries;
  std::vector<std::string> entry_order;
  int stage = 0;  // 0: before header, 1: in header, 2: body
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line == "%") {
      if (stage >= 2) throw ParseError(source_name, line_no, "unexpected third '%' separator");
      ++stage;
      continue;
    }
    if (stage == 0) throw ParseError(source_name, line_no, "lexicon must start with a '%' header line");
    auto parts = fields(line);
    if (stage == 1) {
      if (parts.size() != 2) throw ParseError(source_name, line_no, "expected '<id> <category name>'");
      if (id_to_index.count(parts[0])) throw ParseError(source_name, line_no, "duplicate category id " + parts[0]);
      for (const auto& n : lex.names_) {
        if (n == parts[1]) throw ParseError(source_name, line_no, "duplicate category name " + parts[1]);
      }
      id_to_index[parts[0]] = lex.names_.size();
      lex.names_.push_back(parts[1]);
      continue;
    }
    if (parts.size() < 2) throw ParseError(source_name, line_no, "expected '<pattern><TAB><id>[,<id>...]'");
    std::string pattern = to_lower_ascii(parts[0]);
    auto star = pattern.find('*');
    if (star != std::string::npos && star != pattern.size() - 1) {
      throw ParseError(source_name, line_no, "'*' is only allowed once, at the end of a pattern: " + pattern);
    }
    if (pattern == "*") throw ParseError(source_name, line_no, "empty prefix pattern");
    auto [it, inserted] = entries.try_emplace(pattern);
    if (inserted) entry_order.push_back(pattern);
    for (std::size_t i = 1; i < parts.size(); ++i) {
      auto id = id_to_index.find(parts[i]);
      if (id == id_to_index.end()) throw ParseError(source_name, line_no, "unknown category id " + parts[i]);
      it->second.push_back(id->second);
    }
  }
  if (stage < 2) throw ParseError(source_name, line_no, "lexicon header not closed with '%'");
  if (lex.names_.empty()) throw ParseError(source_name, 0, "lexicon declares no categories");
  for (const auto& key : entry_order) {
    Pattern p;
    p.prefix = key.back() == '*';
    p.text = p.prefix ? key.substr(0, key.size() - 1) : key;
    p.categories = entries[key];
    std::sort(p.categories.begin(), p.categories.end());
    p.categories.erase(std::unique(p.categories.begin(), p.categories.end()), p.categories.end());
    std::size_t index = lex.patterns_.size();
    if (p.prefix) {
      lex.prefix_[p.text] = index;
      lex.prefix_lengths_.push_back(p.text.size());
    } else {
      lex.literal_[p.text] = index;
    }
    lex.patterns_.push_back(std::move(p));
  }
  std::sort(lex.prefix_lengths_.begin(), lex.prefix_lengths_.end());
  lex.prefix_lengths_.erase(std::unique(lex.prefix_lengths_.begin(), lex.prefix_lengths_.end()), lex.prefix_lengths_.end());
  return lex;
}

std::optional<std::size_t> CategoryLexicon::category_index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

void CategoryLexicon::match(std::string_view token, std::vector<std::size_t>& out) const {
  out.clear();
  std::string key(token);
  if (auto it = literal_.find(key); it != literal_.end()) {
    const auto& cats = patterns_[it->second].categories;
    out.insert(out.end(), cats.begin(), cats.end());
  }
  for (std::size_t len : prefix_lengths_) {
    if (len > key.size()) break;
    if (auto it = prefix_.find(key.substr(0, len)); it != prefix_.end()) {
      const auto& cats = patterns_[it->second].categories;
      out.insert(out.end(), cats.begin(), cats.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

CategoryLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon " + path.string());
  return CategoryLexicon::parse(in, path.string());
}

CategoryLexicon standin_lexicon() {
  std::istringstream in{std::string(standin_lexicon_text())};
  return CategoryLexicon::parse(in, "<stand-in lexicon>");
}

void CategoryTally::add(std::span<const std::string> tokens, const CategoryLexicon& lexicon) {
  if (hits.size() != lexicon.size()) hits.assign(lexicon.size(), 0.0);
  std::vector<std::size_t> cats;
  for (const auto& t : tokens) {
    lexicon.match(t, cats);
    for (std::size_t c : cats) hits[c] += 1.0;
  }
  this->tokens += tokens.size();
}

void CategoryTally::merge(const CategoryTally& other) {
  if (hits.size() < other.hits.size()) hits.resize(other.hits.size(), 0.0);
  for (std::size_t i = 0; i < other.hits.size(); ++i) hits[i] += other.hits[i];
  tokens += other.tokens;
}

CategoryVector CategoryTally::normalized() const {
  CategoryVector v(hits.size(), 0.0);
  if (tokens == 0) return v;
  for (std::size_t i = 0; i < hits.size(); ++i) v[i] = hits[i] / static_cast<double>(tokens);
  return v;
}

CategoryVector category_counts(std::span<const std::string> tokens, const CategoryLexicon& lexicon) {
  CategoryTally tally(lexicon.size());
  tally.add(tokens, lexicon);
  return tally.normalized();
}

std::vector<DominanceScore> dominance(const CategoryTally& group, const CategoryTally& complement, double eps) {
  if (group.tokens == 0 || complement.tokens == 0) throw Error("dominance needs tokens on both sides");
  if (group.hits.size() != complement.hits.size()) throw Error("dominance tallies over different lexicons");
  CategoryVector g = group.normalized();
  CategoryVector c = complement.normalized();
  std::vector<DominanceScore> scores;
  for (std::size_t i = 0; i < g.size(); ++i) scores.push_back({i, (g[i] + eps) / (c[i] + eps), g[i], c[i]});
  std::stable_sort(scores.begin(), scores.end(),
                   [](const DominanceScore& a, const DominanceScore& b) { return a.score > b.score; });
  return scores;
}

std::vector<DominanceScore> dominance(std::span<const std::string> group_tokens,
                                      std::span<const std::string> complement_tokens, const CategoryLexicon& lexicon,
                                      double eps) {
  CategoryTally g(lexicon.size()), c(lexicon.size());
  g.add(group_tokens, lexicon);
  c.add(complement_tokens, lexicon);
  return dominance(g, c, eps);
}

FunctionWordCounts& FunctionWordCounts::operator+=(const FunctionWordCounts& o) {
  for (std::size_t i = 0; i < hits.size(); ++i) hits[i] += o.hits[i];
  tokens += o.tokens;
  return *this;
}

FunctionWordCounts& FunctionWordCounts::operator-=(const FunctionWordCounts& o) {
  for (std::size_t i = 0; i < hits.size(); ++i) hits[i] -= o.hits[i];
  tokens -= o.tokens;
  return *this;
}

FunctionWordProfile FunctionWordCounts::profile() const {
  FunctionWordProfile p{};
  if (tokens <= 0.0) return p;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = hits[i] / tokens;
  return p;
}

FunctionWordMap::FunctionWordMap(const CategoryLexicon& lexicon)
    : lexicon_(&lexicon), slot_of_category_(lexicon.size(), -1) {
  for (std::size_t s = 0; s < kFunctionWordNames.size(); ++s) {
    auto idx = lexicon.category_index(kFunctionWordNames[s]);
    if (!idx) throw Error("lexicon lacks function-word category '" + std::string(kFunctionWordNames[s]) + "'");
    slot_of_category_[*idx] = static_cast<int>(s);
  }
}

FunctionWordCounts FunctionWordMap::count(std::span<const std::string> tokens) const {
  FunctionWordCounts counts;
  std::vector<std::size_t> cats;
  for (const auto& t : tokens) {
    lexicon_->match(t, cats);
    for (std::size_t c : cats) {
      if (int slot = slot_of_category_[c]; slot >= 0) counts.hits[static_cast<std::size_t>(slot)] += 1.0;
    }
  }
  counts.tokens = static_cast<double>(tokens.size());
  return counts;
}

double lsm(const FunctionWordProfile& a, const FunctionWordProfile& b, double eps) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += 1.0 - std::abs(a[i] - b[i]) / (a[i] + b[i] + eps);
  return sum / static_cast<double>(a.size());
}

}  // namespace speakerattr

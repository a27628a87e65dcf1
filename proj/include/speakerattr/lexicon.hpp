#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace speakerattr {

// LIWC-style category dictionary. File layout (the .dic convention):
//
//   %
//   1	posemo
//   2	negemo
//   %
//   happ*	1
//   sad	2
//   worr*	2,1
//
// A pattern ending in a single '*' matches every token with that prefix; other
// patterns match the whole token. A token hits the union of the categories of
// every pattern it matches, each category at most once.
class CategoryLexicon {
 public:
  struct Pattern {
    std::string text;  // without the trailing '*'
    bool prefix = false;
    std::vector<std::size_t> categories;  // sorted, unique
  };

  static CategoryLexicon parse(std::istream& in, const std::string& source_name);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& categories() const { return names_; }
  const std::vector<Pattern>& patterns() const { return patterns_; }
  std::optional<std::size_t> category_index(std::string_view name) const;

  // Category indices hit by `token`, sorted and unique. `out` is overwritten.
  void match(std::string_view token, std::vector<std::size_t>& out) const;

 private:
  std::vector<std::string> names_;
  std::vector<Pattern> patterns_;
  std::unordered_map<std::string, std::size_t> literal_;
  std::unordered_map<std::string, std::size_t> prefix_;
  std::vector<std::size_t> prefix_lengths_;
};

CategoryLexicon load_lexicon(const std::filesystem::path& path);

// Small open lexicon carrying LIWC-2015 category names; a drop-in stand-in for
// the proprietary dictionary in tests and synthetic runs.
std::string_view standin_lexicon_text();
CategoryLexicon standin_lexicon();

// Per-category share of tokens: hits(c) / total tokens.
using CategoryVector = std::vector<double>;

// Raw per-category hit counts plus the token total, mergeable across messages.
struct CategoryTally {
  std::vector<double> hits;
  std::size_t tokens = 0;

  explicit CategoryTally(std::size_t categories = 0) : hits(categories, 0.0) {}
  void add(std::span<const std::string> tokens, const CategoryLexicon& lexicon);
  void merge(const CategoryTally& other);
  CategoryVector normalized() const;
};

CategoryVector category_counts(std::span<const std::string> tokens, const CategoryLexicon& lexicon);

struct DominanceScore {
  std::size_t category = 0;
  double score = 0.0;
  double group_coverage = 0.0;
  double complement_coverage = 0.0;
};

inline constexpr double kDominanceSmoothing = 1e-6;

// score(c) = (coverage_group(c) + eps) / (coverage_complement(c) + eps), sorted by
// descending score, ties by category order. Throws if either side has no tokens.
std::vector<DominanceScore> dominance(const CategoryTally& group, const CategoryTally& complement,
                                      double eps = kDominanceSmoothing);
std::vector<DominanceScore> dominance(std::span<const std::string> group_tokens,
                                      std::span<const std::string> complement_tokens, const CategoryLexicon& lexicon,
                                      double eps = kDominanceSmoothing);

// The nine style-matching function-word categories, by LIWC-2015 name.
inline constexpr std::size_t kFunctionWordCategories = 9;
inline constexpr std::array<std::string_view, kFunctionWordCategories> kFunctionWordNames = {
    "ppron", "ipron", "article", "conj", "prep", "auxverb", "adverb", "negate", "quant",
};

using FunctionWordProfile = std::array<double, kFunctionWordCategories>;

// Function-word hit counts and token total; profiles come from dividing.
struct FunctionWordCounts {
  std::array<double, kFunctionWordCategories> hits{};
  double tokens = 0.0;

  FunctionWordCounts& operator+=(const FunctionWordCounts& o);
  FunctionWordCounts& operator-=(const FunctionWordCounts& o);
  FunctionWordProfile profile() const;
};

// Resolves the nine function-word categories in a lexicon; throws if any is missing.
class FunctionWordMap {
 public:
  explicit FunctionWordMap(const CategoryLexicon& lexicon);
  FunctionWordCounts count(std::span<const std::string> tokens) const;
  FunctionWordProfile profile(std::span<const std::string> tokens) const { return count(tokens).profile(); }

 private:
  const CategoryLexicon* lexicon_;
  std::vector<int> slot_of_category_;  // category index -> function-word slot or -1
};

inline constexpr double kLsmEpsilon = 1e-4;

// Mean over the nine categories of 1 - |a - b| / (a + b + eps). Symmetric; two
// zero rates score 1.
double lsm(const FunctionWordProfile& a, const FunctionWordProfile& b, double eps = kLsmEpsilon);

}  // namespace speakerattr

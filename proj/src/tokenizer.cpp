#include "speakerattr/tokenizer.hpp"

#include <array>

namespace speakerattr {

namespace {

constexpr std::array<std::string_view, 26> kEmoticons = {
    ":-)", ":-(", ";-)", ":-D", ":-P", ":-p", ":'(", ":')", "^_^", "-_-", ">:(", "</3",
    ":)",  ":(",  ";)",  ":D",  ":P",  ":p",  ":/",  ":\\", ":|",  ":o",  ":O", "<3",
    ":*",  ";(",
};

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_word(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

// Length of the longest emoticon at `pos` that ends on a boundary, or 0.
std::size_t match_emoticon(std::string_view text, std::size_t pos) {
  std::size_t best = 0;
  for (std::string_view e : kEmoticons) {
    if (e.size() <= best || text.compare(pos, e.size(), e) != 0) continue;
    std::size_t end = pos + e.size();
    if (end < text.size() && is_word(static_cast<unsigned char>(text[end]))) continue;
    best = e.size();
  }
  return best;
}

}  // namespace

std::span<const std::string_view> emoticons() { return kEmoticons; }

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (is_word(c)) {
      std::string word;
      while (i < n) {
        unsigned char w = static_cast<unsigned char>(text[i]);
        if (is_word(w)) {
          word.push_back(w >= 'A' && w <= 'Z' ? static_cast<char>(w - 'A' + 'a') : static_cast<char>(w));
          ++i;
        } else if (w == '\'' && i + 1 < n && is_word(static_cast<unsigned char>(text[i + 1]))) {
          word.push_back('\'');
          ++i;
        } else {
          break;
        }
      }
      tokens.push_back(std::move(word));
      continue;
    }
    if (std::size_t len = match_emoticon(text, i); len > 0) {
      tokens.emplace_back(text.substr(i, len));
      i += len;
      continue;
    }
    std::size_t start = i;
    while (i < n) {
      unsigned char p = static_cast<unsigned char>(text[i]);
      if (is_space(p) || is_word(p)) break;
      if (i > start && match_emoticon(text, i) > 0) break;
      ++i;
    }
    tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

}  // namespace speakerattr

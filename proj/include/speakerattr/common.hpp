#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace speakerattr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that does not follow a documented file format. `line` is 1-based, 0 when
// the problem is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 14695981039346656037ull);
std::string hex64(std::uint64_t value);

std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);
std::string to_lower_ascii(std::string_view text);

// Seeded generator whose draws are bit-identical across standard libraries
// (the std distributions are implementation-defined, so we do not use them).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool bernoulli(double p) { return uniform() < p; }
  double normal();
  // Index drawn proportionally to non-negative weights.
  std::size_t categorical(const std::vector<double>& weights);

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Derive an independent stream seed from a base seed and a label.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace speakerattr

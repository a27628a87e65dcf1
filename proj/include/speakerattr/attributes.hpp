#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace speakerattr {

// The seven relationship attributes of a conversation partner. Value indices
// follow the Y/N and Y/O/S column orders: binary attributes use 0 = yes, 1 = no;
// relative_age uses 0 = younger, 1 = older, 2 = same; childhood_country uses
// 0 = same, 1 = other.
enum class Attribute : std::uint8_t {
  family,
  romantic,
  relative_age,
  childhood_country,
  gender_same,
  school,
  work,
};

inline constexpr std::size_t kAttributeCount = 7;
inline constexpr std::array<Attribute, kAttributeCount> kAttributes = {
    Attribute::family,     Attribute::romantic, Attribute::relative_age, Attribute::childhood_country,
    Attribute::gender_same, Attribute::school,  Attribute::work,
};

constexpr std::size_t index_of(Attribute a) { return static_cast<std::size_t>(a); }
constexpr int value_count(Attribute a) { return a == Attribute::relative_age ? 3 : 2; }

std::string_view attribute_name(Attribute a);
// Display label used in report tables, e.g. "Rel. Age".
std::string_view attribute_label(Attribute a);
std::optional<Attribute> parse_attribute(std::string_view name);

std::string_view value_name(Attribute a, int value);
// Accepts the value names plus short forms (y/n, y/o/s, same/other).
std::optional<int> parse_value(Attribute a, std::string_view text);

class AttributeProfile {
 public:
  AttributeProfile() { values_.fill(0); }
  explicit AttributeProfile(const std::array<std::uint8_t, kAttributeCount>& values);

  int get(Attribute a) const { return values_[index_of(a)]; }
  void set(Attribute a, int value);
  const std::array<std::uint8_t, kAttributeCount>& values() const { return values_; }

  friend bool operator==(const AttributeProfile&, const AttributeProfile&) = default;

 private:
  std::array<std::uint8_t, kAttributeCount> values_;
};

}  // namespace speakerattr

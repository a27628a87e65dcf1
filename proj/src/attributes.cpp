#include "speakerattr/attributes.hpp"

#include <string>

#include "speakerattr/common.hpp"

namespace speakerattr {

std::string_view attribute_name(Attribute a) {
  switch (a) {
    case Attribute::family: return "family";
    case Attribute::romantic: return "romantic";
    case Attribute::relative_age: return "relative_age";
    case Attribute::childhood_country: return "childhood_country";
    case Attribute::gender_same: return "gender_same";
    case Attribute::school: return "school";
    case Attribute::work: return "work";
  }
  return "?";
}

std::string_view attribute_label(Attribute a) {
  switch (a) {
    case Attribute::family: return "Family";
    case Attribute::romantic: return "Rom. Rel.";
    case Attribute::relative_age: return "Rel. Age";
    case Attribute::childhood_country: return "Child. Co.";
    case Attribute::gender_same: return "Gender";
    case Attribute::school: return "School";
    case Attribute::work: return "Work";
  }
  return "?";
}

std::optional<Attribute> parse_attribute(std::string_view name) {
  for (Attribute a : kAttributes) {
    if (attribute_name(a) == name) return a;
  }
  if (name == "gender") return Attribute::gender_same;
  return std::nullopt;
}

std::string_view value_name(Attribute a, int value) {
  if (a == Attribute::relative_age) {
    switch (value) {
      case 0: return "younger";
      case 1: return "older";
      case 2: return "same";
    }
  } else if (a == Attribute::childhood_country) {
    switch (value) {
      case 0: return "same";
      case 1: return "other";
    }
  } else {
    switch (value) {
      case 0: return "yes";
      case 1: return "no";
    }
  }
  throw Error("attribute value out of range");
}

std::optional<int> parse_value(Attribute a, std::string_view text) {
  std::string t = to_lower_ascii(trim(text));
  if (a == Attribute::relative_age) {
    if (t == "younger" || t == "y") return 0;
    if (t == "older" || t == "o") return 1;
    if (t == "same" || t == "s") return 2;
    return std::nullopt;
  }
  if (a == Attribute::childhood_country) {
    if (t == "same" || t == "y" || t == "yes" || t == "s") return 0;
    if (t == "other" || t == "n" || t == "no" || t == "o") return 1;
    return std::nullopt;
  }
  if (t == "yes" || t == "y") return 0;
  if (t == "no" || t == "n") return 1;
  return std::nullopt;
}

AttributeProfile::AttributeProfile(const std::array<std::uint8_t, kAttributeCount>& values) {
  for (Attribute a : kAttributes) set(a, values[index_of(a)]);
}

void AttributeProfile::set(Attribute a, int value) {
  if (value < 0 || value >= value_count(a)) {
    throw Error("value " + std::to_string(value) + " out of range for " + std::string(attribute_name(a)));
  }
  values_[index_of(a)] = static_cast<std::uint8_t>(value);
}

}  // namespace speakerattr

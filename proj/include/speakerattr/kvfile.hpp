#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace speakerattr {

// Human-editable key-value document:
//
//   # comment
//   key = value
//   [section]
//   key = value
//
// Keys before the first section header belong to the unnamed section "".
// Values are trimmed; everything after the first '=' is the value.
struct KvEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct KvSection {
  std::string name;
  std::size_t line = 0;
  std::vector<KvEntry> entries;

  const KvEntry* find(const std::string& key) const;
};

struct KvDocument {
  std::vector<KvSection> sections;  // sections[0] is always the unnamed section

  static KvDocument parse(std::istream& in, const std::string& source_name);
  static KvDocument load(const std::filesystem::path& path);

  const KvSection& global() const { return sections.front(); }
  std::optional<std::string> get(const std::string& key) const;
  // Flattened view of the unnamed section; later keys win.
  std::map<std::string, std::string> global_map() const;
};

}  // namespace speakerattr

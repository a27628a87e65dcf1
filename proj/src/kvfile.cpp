#include "speakerattr/kvfile.hpp"

#include <fstream>

#include "speakerattr/common.hpp"

namespace speakerattr {

const KvEntry* KvSection::find(const std::string& key) const {
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (it->key == key) return &*it;
  }
  return nullptr;
}

KvDocument KvDocument::parse(std::istream& in, const std::string& source_name) {
  KvDocument doc;
  doc.sections.emplace_back();
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ParseError(source_name, line_no, "malformed section header");
      KvSection section;
      section.name = trim(std::string_view(line).substr(1, line.size() - 2));
      section.line = line_no;
      doc.sections.push_back(std::move(section));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source_name, line_no, "expected 'key = value'");
    KvEntry entry{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), line_no};
    if (entry.key.empty()) throw ParseError(source_name, line_no, "empty key");
    doc.sections.back().entries.push_back(std::move(entry));
  }
  return doc;
}

KvDocument KvDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse(in, path.string());
}

std::optional<std::string> KvDocument::get(const std::string& key) const {
  if (const KvEntry* e = global().find(key)) return e->value;
  return std::nullopt;
}

std::map<std::string, std::string> KvDocument::global_map() const {
  std::map<std::string, std::string> out;
  for (const auto& e : global().entries) out[e.key] = e.value;
  return out;
}

}  // namespace speakerattr

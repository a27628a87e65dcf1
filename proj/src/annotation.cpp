#include "speakerattr/annotation.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "speakerattr/common.hpp"
#include "speakerattr/kvfile.hpp"

namespace speakerattr {

const AttributeProfile* AnnotationSet::find(const std::string& partner_id) const {
  auto it = profiles.find(partner_id);
  return it == profiles.end() ? nullptr : &it->second;
}

AnnotationSet read_annotations(std::istream& in, const std::string& source_name) {
  KvDocument doc = KvDocument::parse(in, source_name);
  AnnotationSet set;
  auto version = doc.get("version");
  if (!version) throw ParseError(source_name, 0, "missing 'version' key");
  if (*version != std::to_string(kAnnotationFormatVersion)) {
    throw ParseError(source_name, 0, "unsupported annotation version " + *version);
  }
  if (auto note = doc.get("note")) set.note = *note;
  for (std::size_t s = 1; s < doc.sections.size(); ++s) {
    const KvSection& section = doc.sections[s];
    if (set.profiles.count(section.name)) throw ParseError(source_name, section.line, "duplicate partner '" + section.name + "'");
    AttributeProfile profile;
    for (Attribute a : kAttributes) {
      const KvEntry* e = section.find(std::string(attribute_name(a)));
      if (!e) {
        throw ParseError(source_name, section.line,
                         "partner '" + section.name + "' lacks attribute " + std::string(attribute_name(a)));
      }
      auto value = parse_value(a, e->value);
      if (!value) throw ParseError(source_name, e->line, "bad value '" + e->value + "' for " + e->key);
      profile.set(a, *value);
    }
    for (const KvEntry& e : section.entries) {
      if (!parse_attribute(e.key)) throw ParseError(source_name, e.line, "unknown attribute '" + e.key + "'");
    }
    set.profiles.emplace(section.name, profile);
  }
  return set;
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open annotation file " + path.string());
  return read_annotations(in, path.string());
}

void write_annotations(std::ostream& out, const AnnotationSet& set) {
  out << "# speaker attribute annotations\n";
  out << "version = " << kAnnotationFormatVersion << "\n";
  std::string note = set.note;
  std::replace(note.begin(), note.end(), '\n', ' ');
  out << "note = " << note << "\n";
  for (const auto& [id, profile] : set.profiles) {
    out << "\n[" << id << "]\n";
    for (Attribute a : kAttributes) out << attribute_name(a) << " = " << value_name(a, profile.get(a)) << "\n";
  }
}

void save_annotations(const std::filesystem::path& path, const AnnotationSet& set) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    write_annotations(out, set);
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void check_annotation_keys(const AnnotationSet& set, const Corpus& corpus) {
  for (const auto& [id, profile] : set.profiles) {
    if (!corpus.find(id)) throw Error("annotated speaker '" + id + "' is not a partner in the corpus");
  }
}

AnnotationLock::AnnotationLock(std::filesystem::path annotation_path) : lock_path_(std::move(annotation_path)) {
  lock_path_ += ".lock";
  int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) throw Error("annotation file is locked by another writer (" + lock_path_.string() + ")");
  std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

AnnotationLock::~AnnotationLock() {
  std::error_code ec;
  std::filesystem::remove(lock_path_, ec);
}

std::vector<std::string> annotation_queue(const Corpus& corpus, const AnnotationSet& existing) {
  std::vector<const Conversation*> pending;
  for (const auto& c : corpus.conversations) {
    if (!existing.find(c.partner_id)) pending.push_back(&c);
  }
  std::stable_sort(pending.begin(), pending.end(), [](const Conversation* a, const Conversation* b) {
    if (a->messages.size() != b->messages.size()) return a->messages.size() > b->messages.size();
    return a->partner_id < b->partner_id;
  });
  std::vector<std::string> ids;
  for (const auto* c : pending) ids.push_back(c->partner_id);
  return ids;
}

namespace {

std::string choices(Attribute a) {
  std::string s;
  for (int v = 0; v < value_count(a); ++v) {
    if (v) s += "/";
    s += value_name(a, v);
  }
  return s;
}

}  // namespace

AnnotationSet annotate_interactive(const Corpus& corpus, AnnotationSet existing, std::istream& in, std::ostream& out,
                                   const std::function<void(const AnnotationSet&)>& persist) {
  const auto queue = annotation_queue(corpus, existing);
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const std::string& id = queue[q];
    const Conversation* conv = corpus.find(id);
    out << "\n[" << (q + 1) << "/" << queue.size() << "] " << id << " (" << conv->messages.size() << " messages)\n";
    for (std::size_t i = 0; i < conv->messages.size() && i < 3; ++i) {
      out << "  " << (conv->messages[i].is_author ? "author" : id) << ": " << conv->messages[i].text << "\n";
    }
    AttributeProfile profile;
    for (Attribute a : kAttributes) {
      while (true) {
        out << attribute_name(a) << " [" << choices(a) << "]: " << std::flush;
        std::string answer;
        if (!std::getline(in, answer)) {
          out << "\ninput closed; " << existing.profiles.size() << " profiles saved\n";
          return existing;
        }
        if (auto v = parse_value(a, answer)) {
          profile.set(a, *v);
          break;
        }
        out << "  expected one of " << choices(a) << "\n";
      }
    }
    existing.profiles.emplace(id, profile);
    if (persist) persist(existing);
  }
  return existing;
}

std::vector<AttributeDistribution> distribution(const AnnotationSet& set, const Corpus& corpus) {
  if (corpus.conversations.empty()) throw Error("distribution over an empty corpus");
  std::vector<AttributeDistribution> out;
  for (Attribute a : kAttributes) {
    AttributeDistribution d;
    d.attribute = a;
    d.speaker_counts.assign(static_cast<std::size_t>(value_count(a)), 0);
    d.message_counts.assign(static_cast<std::size_t>(value_count(a)), 0);
    out.push_back(std::move(d));
  }
  std::size_t speakers = 0, messages = 0;
  for (const auto& conv : corpus.conversations) {
    const AttributeProfile* p = set.find(conv.partner_id);
    if (!p) throw Error("partner '" + conv.partner_id + "' is not annotated");
    ++speakers;
    messages += conv.messages.size();
    for (auto& d : out) {
      auto v = static_cast<std::size_t>(p->get(d.attribute));
      ++d.speaker_counts[v];
      d.message_counts[v] += conv.messages.size();
    }
  }
  for (auto& d : out) {
    for (std::size_t v = 0; v < d.speaker_counts.size(); ++v) {
      d.speaker_pct.push_back(100.0 * static_cast<double>(d.speaker_counts[v]) / static_cast<double>(speakers));
      d.message_pct.push_back(messages == 0 ? 0.0
                                            : 100.0 * static_cast<double>(d.message_counts[v]) / static_cast<double>(messages));
    }
  }
  return out;
}

}  // namespace speakerattr

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "speakerattr/attributes.hpp"
#include "speakerattr/corpus.hpp"

namespace speakerattr {

struct AnnotationSet {
  std::map<std::string, AttributeProfile> profiles;  // partner id -> profile
  std::string note;

  const AttributeProfile* find(const std::string& partner_id) const;
  friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

// Annotation document (key-value, see docs/formats.md):
//
//   version = 1
//   note = free text
//   [partner id]
//   family = yes
//   romantic = no
//   relative_age = older
//   childhood_country = same
//   gender_same = yes
//   school = no
//   work = yes
inline constexpr int kAnnotationFormatVersion = 1;
AnnotationSet read_annotations(std::istream& in, const std::string& source_name);
AnnotationSet load_annotations(const std::filesystem::path& path);
void write_annotations(std::ostream& out, const AnnotationSet& set);
// Writes to a temporary file and renames it over `path`.
void save_annotations(const std::filesystem::path& path, const AnnotationSet& set);

// Every key must be a partner of the corpus.
void check_annotation_keys(const AnnotationSet& set, const Corpus& corpus);

// Exclusive writer lock held as `<path>.lock` for the lifetime of the object.
class AnnotationLock {
 public:
  explicit AnnotationLock(std::filesystem::path annotation_path);
  ~AnnotationLock();
  AnnotationLock(const AnnotationLock&) = delete;
  AnnotationLock& operator=(const AnnotationLock&) = delete;

 private:
  std::filesystem::path lock_path_;
};

// Partners without a profile, most messages first (ties by id).
std::vector<std::string> annotation_queue(const Corpus& corpus, const AnnotationSet& existing);

// Prompts for each queued partner's seven values on `out`, reading answers
// line by line from `in`. Invalid answers are re-prompted. `persist` is called
// after every completed profile. End of input stops early and returns the
// profiles completed so far.
AnnotationSet annotate_interactive(const Corpus& corpus, AnnotationSet existing, std::istream& in, std::ostream& out,
                                   const std::function<void(const AnnotationSet&)>& persist);

struct AttributeDistribution {
  Attribute attribute{};
  std::vector<std::size_t> speaker_counts;  // per value
  std::vector<std::size_t> message_counts;
  std::vector<double> speaker_pct;
  std::vector<double> message_pct;
};

// Per-value percentages over speakers and over messages. Throws naming the
// first corpus partner without a profile.
std::vector<AttributeDistribution> distribution(const AnnotationSet& set, const Corpus& corpus);

}  // namespace speakerattr

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "speakerattr/time_util.hpp"

namespace speakerattr {

enum class Platform { hangouts, messenger, sms, synthetic, other };

std::string_view platform_name(Platform p);
Platform parse_platform(std::string_view name);

struct Message {
  std::string speaker_id;
  bool is_author = false;
  Timestamp timestamp = 0;
  std::string text;
  Platform platform = Platform::other;
  std::vector<std::string> tokens;  // tokenize(text), filled at ingest
};

// Builds a message and tokenizes its text.
Message make_message(std::string speaker_id, bool is_author, Timestamp timestamp, std::string text,
                     Platform platform);

struct Conversation {
  std::string partner_id;
  std::vector<Message> messages;  // non-decreasing timestamps
};

// The author's full history: one conversation per partner, ordered by partner id.
struct Corpus {
  std::string author_id;
  std::vector<Conversation> conversations;

  const Conversation* find(std::string_view partner_id) const;
  std::size_t message_count() const;
  std::vector<std::string> partner_ids() const;
};

enum class InputFormat { canonical, messenger, sms };

InputFormat parse_input_format(std::string_view name);

struct IngestOptions {
  // Author identity for adapters whose exports do not carry it. The canonical
  // format records the author in its header.
  std::string author_id = "author";
  // Messenger exports name the author by display name.
  std::string author_name;
};

// Reads a file into a corpus. Timezone: ISO timestamps without an explicit zone
// use the offset in the sidecar `<path>.tz` (e.g. "+02:00"), or UTC when absent.
Corpus ingest(const std::filesystem::path& path, InputFormat format, const IngestOptions& options = {});

// Canonical line format: a JSON header line, then one JSON object per message.
// See docs/formats.md.
inline constexpr int kCorpusFormatVersion = 1;
Corpus read_canonical(std::istream& in, const std::string& source_name, int default_offset_seconds = 0);
void write_canonical(std::ostream& out, const Corpus& corpus);
void save_canonical(const std::filesystem::path& path, const Corpus& corpus);

// Adapters; each produces the same Corpus a canonical file would.
Corpus read_messenger_json(std::istream& in, const std::string& source_name, const IngestOptions& options);
Corpus read_sms_xml(std::istream& in, const std::string& source_name, const IngestOptions& options);

// Sorts messages by timestamp (stable), groups by partner, validates invariants.
Corpus assemble_corpus(std::string author_id, std::vector<std::pair<std::string, Message>> records,
                       const std::string& source_name);

struct ContextWindow {
  const Conversation* conversation = nullptr;
  std::size_t start = 0;         // index of the first message in the conversation
  std::size_t size = 0;
  std::size_t window_index = 0;  // ordinal within the conversation

  std::span<const Message> messages() const {
    return std::span<const Message>(conversation->messages).subspan(start, size);
  }
  // Every message of the conversation strictly before the window.
  std::span<const Message> history() const {
    return std::span<const Message>(conversation->messages).first(start);
  }
  const std::string& partner_id() const { return conversation->partner_id; }
};

std::size_t window_count(std::size_t length, std::size_t size, std::size_t stride);
std::vector<ContextWindow> build_windows(const Conversation& conv, std::size_t size = 5, std::size_t stride = 1);

struct SideStats {
  std::size_t total_messages = 0;
  std::size_t unique_messages = 0;
  std::size_t total_tokens = 0;
  std::size_t unique_tokens = 0;
  double avg_tokens_per_message = 0.0;
};

struct CorpusStats {
  SideStats author;
  SideStats others;
  SideStats all;
};

CorpusStats stats(const Corpus& corpus);

}  // namespace speakerattr

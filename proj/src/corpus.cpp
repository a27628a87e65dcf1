#include "speakerattr/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "speakerattr/common.hpp"
#include "speakerattr/tokenizer.hpp"

namespace speakerattr {

using ojson = nlohmann::ordered_json;

std::string_view platform_name(Platform p) {
  switch (p) {
    case Platform::hangouts: return "hangouts";
    case Platform::messenger: return "messenger";
    case Platform::sms: return "sms";
    case Platform::synthetic: return "synthetic";
    case Platform::other: return "other";
  }
  return "other";
}

Platform parse_platform(std::string_view name) {
  for (Platform p : {Platform::hangouts, Platform::messenger, Platform::sms, Platform::synthetic, Platform::other}) {
    if (platform_name(p) == name) return p;
  }
  throw Error("unknown platform '" + std::string(name) + "'");
}

InputFormat parse_input_format(std::string_view name) {
  if (name == "canonical") return InputFormat::canonical;
  if (name == "messenger") return InputFormat::messenger;
  if (name == "sms") return InputFormat::sms;
  throw Error("unknown input format '" + std::string(name) + "' (expected canonical, messenger or sms)");
}

Message make_message(std::string speaker_id, bool is_author, Timestamp timestamp, std::string text,
                     Platform platform) {
  Message m;
  m.speaker_id = std::move(speaker_id);
  m.is_author = is_author;
  m.timestamp = timestamp;
  m.tokens = tokenize(text);
  m.text = std::move(text);
  m.platform = platform;
  return m;
}

const Conversation* Corpus::find(std::string_view partner_id) const {
  auto it = std::lower_bound(conversations.begin(), conversations.end(), partner_id,
                             [](const Conversation& c, std::string_view id) { return c.partner_id < id; });
  if (it != conversations.end() && it->partner_id == partner_id) return &*it;
  // Corpora assembled by hand may not be sorted.
  for (const auto& c : conversations) {
    if (c.partner_id == partner_id) return &c;
  }
  return nullptr;
}

std::size_t Corpus::message_count() const {
  std::size_t n = 0;
  for (const auto& c : conversations) n += c.messages.size();
  return n;
}

std::vector<std::string> Corpus::partner_ids() const {
  std::vector<std::string> ids;
  ids.reserve(conversations.size());
  for (const auto& c : conversations) ids.push_back(c.partner_id);
  return ids;
}

Corpus assemble_corpus(std::string author_id, std::vector<std::pair<std::string, Message>> records,
                       const std::string& source_name) {
  if (author_id.empty()) throw ParseError(source_name, 0, "empty author id");
  std::map<std::string, Conversation> by_partner;
  for (auto& [partner, msg] : records) {
    if (partner.empty()) throw ParseError(source_name, 0, "empty partner id");
    if (partner == author_id) throw ParseError(source_name, 0, "partner id equals the author id '" + partner + "'");
    auto& conv = by_partner[partner];
    conv.partner_id = partner;
    conv.messages.push_back(std::move(msg));
  }
  Corpus corpus;
  corpus.author_id = std::move(author_id);
  for (auto& [id, conv] : by_partner) {
    std::stable_sort(conv.messages.begin(), conv.messages.end(),
                     [](const Message& a, const Message& b) { return a.timestamp < b.timestamp; });
    corpus.conversations.push_back(std::move(conv));
  }
  return corpus;
}

namespace {

int sidecar_offset(const std::filesystem::path& path) {
  std::filesystem::path tz = path;
  tz += ".tz";
  std::ifstream in(tz);
  if (!in) return 0;
  std::string line;
  std::getline(in, line);
  return parse_utc_offset(line);
}

const ojson& require(const ojson& obj, const char* key, const std::string& source, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(source, line, std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

Corpus read_canonical(std::istream& in, const std::string& source_name, int default_offset_seconds) {
  std::string line;
  std::size_t line_no = 0;
  std::string author_id;
  bool have_header = false;
  std::vector<std::pair<std::string, Message>> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ojson obj;
    try {
      obj = ojson::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source_name, line_no, std::string("malformed record: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(source_name, line_no, "record is not a JSON object");
    if (!have_header) {
      auto fmt = obj.find("format");
      if (fmt == obj.end() || *fmt != "speakerattr-corpus") {
        throw ParseError(source_name, line_no, "missing header line {\"format\":\"speakerattr-corpus\",...}");
      }
      const auto& version = require(obj, "version", source_name, line_no);
      if (!version.is_number_integer() || version.get<int>() != kCorpusFormatVersion) {
        throw ParseError(source_name, line_no, "unsupported corpus format version");
      }
      const auto& author = require(obj, "author_id", source_name, line_no);
      if (!author.is_string() || author.get<std::string>().empty()) {
        throw ParseError(source_name, line_no, "header author_id must be a non-empty string");
      }
      author_id = author.get<std::string>();
      have_header = true;
      continue;
    }
    try {
      const auto& partner = require(obj, "partner_id", source_name, line_no);
      const auto& speaker = require(obj, "speaker_id", source_name, line_no);
      const auto& is_author = require(obj, "is_author", source_name, line_no);
      const auto& ts = require(obj, "timestamp", source_name, line_no);
      const auto& platform = require(obj, "platform", source_name, line_no);
      const auto& text = require(obj, "text", source_name, line_no);
      if (!partner.is_string() || !speaker.is_string() || !platform.is_string() || !text.is_string()) {
        throw ParseError(source_name, line_no, "partner_id, speaker_id, platform and text must be strings");
      }
      int author_flag = -1;
      if (is_author.is_number_integer()) author_flag = is_author.get<int>();
      if (author_flag != 0 && author_flag != 1) throw ParseError(source_name, line_no, "is_author must be 0 or 1");
      Timestamp t = 0;
      if (ts.is_number_integer()) {
        t = ts.get<Timestamp>();
      } else if (ts.is_string()) {
        t = parse_timestamp(ts.get<std::string>(), default_offset_seconds);
      } else {
        throw ParseError(source_name, line_no, "timestamp must be epoch seconds or an ISO-8601 string");
      }
      if (t <= 0) throw ParseError(source_name, line_no, "timestamp must be positive");
      std::string speaker_id = speaker.get<std::string>();
      std::string partner_id = partner.get<std::string>();
      if (speaker_id.empty()) throw ParseError(source_name, line_no, "empty speaker_id");
      if (author_flag == 1 && speaker_id != author_id) {
        throw ParseError(source_name, line_no, "author record with speaker_id '" + speaker_id + "' != header author_id");
      }
      if (author_flag == 0 && speaker_id != partner_id) {
        throw ParseError(source_name, line_no, "partner record whose speaker_id differs from partner_id");
      }
      std::string body = text.get<std::string>();
      if (trim(body).empty()) throw ParseError(source_name, line_no, "empty message text");
      records.emplace_back(std::move(partner_id), make_message(std::move(speaker_id), author_flag == 1, t,
                                                               std::move(body), parse_platform(platform.get<std::string>())));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(source_name, line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(source_name, 0, "empty corpus file (no header line)");
  return assemble_corpus(author_id, std::move(records), source_name);
}

void write_canonical(std::ostream& out, const Corpus& corpus) {
  ojson header;
  header["format"] = "speakerattr-corpus";
  header["version"] = kCorpusFormatVersion;
  header["author_id"] = corpus.author_id;
  out << header.dump() << '\n';
  for (const auto& conv : corpus.conversations) {
    for (const auto& m : conv.messages) {
      ojson rec;
      rec["partner_id"] = conv.partner_id;
      rec["speaker_id"] = m.speaker_id;
      rec["is_author"] = m.is_author ? 1 : 0;
      rec["timestamp"] = m.timestamp;
      rec["platform"] = platform_name(m.platform);
      rec["text"] = m.text;
      out << rec.dump() << '\n';
    }
  }
}

void save_canonical(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_canonical(out, corpus);
}

Corpus read_messenger_json(std::istream& in, const std::string& source_name, const IngestOptions& options) {
  if (options.author_name.empty()) throw Error("messenger import needs the author's display name (--author-name)");
  ojson doc;
  try {
    doc = ojson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source_name, 0, std::string("malformed JSON: ") + e.what());
  }
  std::set<std::string> participants;
  for (const auto& p : doc.value("participants", ojson::array())) participants.insert(p.value("name", ""));
  participants.erase(options.author_name);
  if (participants.size() != 1) throw ParseError(source_name, 0, "only one-to-one threads are supported");
  const std::string partner = *participants.begin();
  std::vector<std::pair<std::string, Message>> records;
  std::size_t index = 0;
  for (const auto& m : doc.value("messages", ojson::array())) {
    ++index;
    if (!m.contains("content") || !m["content"].is_string()) continue;  // media, calls
    std::string text = m["content"].get<std::string>();
    if (trim(text).empty()) continue;
    if (!m.contains("timestamp_ms") || !m["timestamp_ms"].is_number_integer()) {
      throw ParseError(source_name, 0, "message " + std::to_string(index) + " has no timestamp_ms");
    }
    Timestamp t = m["timestamp_ms"].get<std::int64_t>() / 1000;
    bool by_author = m.value("sender_name", "") == options.author_name;
    records.emplace_back(partner, make_message(by_author ? options.author_id : partner, by_author, t,
                                               std::move(text), Platform::messenger));
  }
  return assemble_corpus(options.author_id, std::move(records), source_name);
}

namespace {

std::string xml_unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    std::size_t semi = s.find(';', i);
    if (semi == std::string_view::npos) {
      out.push_back('&');
      continue;
    }
    std::string_view ent = s.substr(i + 1, semi - i - 1);
    if (ent == "amp") out.push_back('&');
    else if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (!ent.empty() && ent[0] == '#') {
      unsigned long cp = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')
                             ? std::stoul(std::string(ent.substr(2)), nullptr, 16)
                             : std::stoul(std::string(ent.substr(1)));
      // UTF-8 encode
      if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
      } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      }
    } else {
      out.append(s.substr(i, semi - i + 1));
    }
    i = semi;
  }
  return out;
}

std::map<std::string, std::string> xml_attributes(std::string_view tag) {
  std::map<std::string, std::string> attrs;
  std::size_t i = 0;
  while (i < tag.size()) {
    std::size_t eq = tag.find('=', i);
    if (eq == std::string_view::npos) break;
    std::size_t name_end = eq;
    while (name_end > i && tag[name_end - 1] == ' ') --name_end;
    std::size_t name_start = name_end;
    while (name_start > i && tag[name_start - 1] != ' ' && tag[name_start - 1] != '\t' && tag[name_start - 1] != '\n') --name_start;
    std::size_t q = eq + 1;
    while (q < tag.size() && tag[q] == ' ') ++q;
    if (q >= tag.size() || (tag[q] != '"' && tag[q] != '\'')) break;
    char quote = tag[q];
    std::size_t close = tag.find(quote, q + 1);
    if (close == std::string_view::npos) break;
    attrs[std::string(tag.substr(name_start, name_end - name_start))] = xml_unescape(tag.substr(q + 1, close - q - 1));
    i = close + 1;
  }
  return attrs;
}

}  // namespace

Corpus read_sms_xml(std::istream& in, const std::string& source_name, const IngestOptions& options) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string doc = buffer.str();
  std::vector<std::pair<std::string, Message>> records;
  std::size_t pos = 0;
  while ((pos = doc.find("<sms ", pos)) != std::string::npos) {
    std::size_t end = doc.find('>', pos);
    if (end == std::string::npos) throw ParseError(source_name, 0, "unterminated <sms> element");
    std::size_t line = static_cast<std::size_t>(std::count(doc.begin(), doc.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) + 1;
    auto attrs = xml_attributes(std::string_view(doc).substr(pos + 5, end - pos - 5));
    pos = end;
    std::string body = attrs["body"];
    if (trim(body).empty()) continue;
    const std::string& address = attrs["address"];
    if (address.empty()) throw ParseError(source_name, line, "sms element without address");
    Timestamp t = 0;
    try {
      t = std::stoll(attrs["date"]) / 1000;
    } catch (const std::exception&) {
      throw ParseError(source_name, line, "sms element without a numeric date");
    }
    const std::string& type = attrs["type"];
    if (type != "1" && type != "2") continue;  // drafts, outbox, failed
    bool sent = type == "2";
    records.emplace_back(address, make_message(sent ? options.author_id : address, sent, t, std::move(body), Platform::sms));
  }
  return assemble_corpus(options.author_id, std::move(records), source_name);
}

Corpus ingest(const std::filesystem::path& path, InputFormat format, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::string name = path.string();
  switch (format) {
    case InputFormat::canonical: return read_canonical(in, name, sidecar_offset(path));
    case InputFormat::messenger: return read_messenger_json(in, name, options);
    case InputFormat::sms: return read_sms_xml(in, name, options);
  }
  throw Error("unknown input format");
}

std::size_t window_count(std::size_t length, std::size_t size, std::size_t stride) {
  if (size == 0 || stride == 0 || length < size) return 0;
  return (length - size) / stride + 1;
}

std::vector<ContextWindow> build_windows(const Conversation& conv, std::size_t size, std::size_t stride) {
  if (size < 2) throw Error("window size must be at least 2");
  if (stride < 1) throw Error("window stride must be at least 1");
  std::vector<ContextWindow> windows;
  const std::size_t n = window_count(conv.messages.size(), size, stride);
  windows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) windows.push_back(ContextWindow{&conv, i * stride, size, i});
  return windows;
}

namespace {

struct SideAccumulator {
  std::size_t messages = 0;
  std::size_t tokens = 0;
  std::unordered_set<std::string> texts;
  std::unordered_set<std::string> token_types;

  SideStats finish() const {
    SideStats s;
    s.total_messages = messages;
    s.unique_messages = texts.size();
    s.total_tokens = tokens;
    s.unique_tokens = token_types.size();
    s.avg_tokens_per_message = messages == 0 ? 0.0 : static_cast<double>(tokens) / static_cast<double>(messages);
    return s;
  }
};

}  // namespace

CorpusStats stats(const Corpus& corpus) {
  if (corpus.message_count() == 0) throw Error("stats of an empty corpus");
  SideAccumulator author, others, all;
  for (const auto& conv : corpus.conversations) {
    for (const auto& m : conv.messages) {
      for (SideAccumulator* acc : {m.is_author ? &author : &others, &all}) {
        ++acc->messages;
        acc->tokens += m.tokens.size();
        acc->texts.insert(m.text);
        acc->token_types.insert(m.tokens.begin(), m.tokens.end());
      }
    }
  }
  return CorpusStats{author.finish(), others.finish(), all.finish()};
}

}  // namespace speakerattr

#include "speakerattr/time_util.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "speakerattr/common.hpp"

namespace speakerattr {

namespace chr = std::chrono;

CivilTime to_civil(Timestamp t) {
  chr::sys_seconds tp{chr::seconds{t}};
  auto day_point = chr::floor<chr::days>(tp);
  chr::year_month_day ymd{day_point};
  chr::hh_mm_ss hms{tp - day_point};
  CivilTime c;
  c.year = static_cast<int>(ymd.year());
  c.month = static_cast<unsigned>(ymd.month());
  c.day = static_cast<unsigned>(ymd.day());
  c.hour = static_cast<unsigned>(hms.hours().count());
  c.minute = static_cast<unsigned>(hms.minutes().count());
  c.second = static_cast<unsigned>(hms.seconds().count());
  c.weekday = chr::weekday{day_point}.iso_encoding() - 1;
  return c;
}

Timestamp from_civil(int year, unsigned month, unsigned day, unsigned hour, unsigned minute,
                     unsigned second) {
  chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
  if (!ymd.ok()) throw Error("invalid calendar date");
  chr::sys_seconds tp = chr::sys_days{ymd} + chr::hours{hour} + chr::minutes{minute} +
                        chr::seconds{second};
  return tp.time_since_epoch().count();
}

namespace {

bool read_uint(std::string_view s, std::size_t& pos, std::size_t digits, unsigned& out) {
  if (pos + digits > s.size()) return false;
  unsigned v = 0;
  for (std::size_t i = 0; i < digits; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  pos += digits;
  out = v;
  return true;
}

}  // namespace

int parse_utc_offset(std::string_view text) {
  std::string t = trim(text);
  if (t == "Z" || t == "UTC" || t == "z") return 0;
  if (t.size() < 3 || (t[0] != '+' && t[0] != '-')) throw Error("bad UTC offset '" + t + "'");
  std::size_t pos = 1;
  unsigned hh = 0, mm = 0;
  if (!read_uint(t, pos, 2, hh)) throw Error("bad UTC offset '" + t + "'");
  if (pos < t.size() && t[pos] == ':') ++pos;
  if (pos < t.size() && !read_uint(t, pos, 2, mm)) throw Error("bad UTC offset '" + t + "'");
  if (pos != t.size() || hh > 23 || mm > 59) throw Error("bad UTC offset '" + t + "'");
  int sign = t[0] == '-' ? -1 : 1;
  return sign * static_cast<int>(hh * 3600 + mm * 60);
}

Timestamp parse_timestamp(std::string_view text, int default_offset_seconds) {
  std::string t = trim(text);
  if (t.empty()) throw Error("empty timestamp");
  bool all_digits = true;
  for (char c : t) all_digits = all_digits && c >= '0' && c <= '9';
  if (all_digits) {
    Timestamp v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) throw Error("bad epoch timestamp '" + t + "'");
    return v;
  }
  std::size_t pos = 0;
  unsigned y = 0, mo = 0, d = 0, hh = 0, mi = 0, ss = 0;
  auto fail = [&]() -> Timestamp { throw Error("bad ISO-8601 timestamp '" + t + "'"); };
  if (!read_uint(t, pos, 4, y) || pos >= t.size() || t[pos++] != '-') return fail();
  if (!read_uint(t, pos, 2, mo) || pos >= t.size() || t[pos++] != '-') return fail();
  if (!read_uint(t, pos, 2, d)) return fail();
  if (pos < t.size() && (t[pos] == 'T' || t[pos] == ' ')) {
    ++pos;
    if (!read_uint(t, pos, 2, hh) || pos >= t.size() || t[pos++] != ':') return fail();
    if (!read_uint(t, pos, 2, mi)) return fail();
    if (pos < t.size() && t[pos] == ':') {
      ++pos;
      if (!read_uint(t, pos, 2, ss)) return fail();
      if (pos < t.size() && t[pos] == '.') {
        ++pos;
        while (pos < t.size() && t[pos] >= '0' && t[pos] <= '9') ++pos;
      }
    }
  }
  int offset = default_offset_seconds;
  if (pos < t.size()) offset = parse_utc_offset(std::string_view(t).substr(pos));
  if (hh > 23 || mi > 59 || ss > 60) return fail();
  Timestamp local;
  try {
    local = from_civil(static_cast<int>(y), mo, d, hh, mi, ss);
  } catch (const Error&) {
    return fail();
  }
  return local - offset;
}

std::string format_iso(Timestamp t) {
  CivilTime c = to_civil(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02u:%02u:%02uZ", c.year, c.month, c.day, c.hour,
                c.minute, c.second);
  return buf;
}

}  // namespace speakerattr

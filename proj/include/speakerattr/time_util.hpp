#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace speakerattr {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

struct CivilTime {
  int year = 1970;
  unsigned month = 1;    // 1..12
  unsigned day = 1;      // 1..31
  unsigned hour = 0;     // 0..23
  unsigned minute = 0;
  unsigned second = 0;
  unsigned weekday = 3;  // 0 = Monday .. 6 = Sunday
};

CivilTime to_civil(Timestamp t);
Timestamp from_civil(int year, unsigned month, unsigned day, unsigned hour = 0, unsigned minute = 0,
                     unsigned second = 0);

// Accepts epoch seconds ("1500000000") or ISO-8601 ("2017-07-14T02:40:00Z",
// "2017-07-14 02:40:00+02:00"). ISO values without a zone are interpreted at
// `default_offset_seconds` east of UTC. Throws Error on malformed input.
Timestamp parse_timestamp(std::string_view text, int default_offset_seconds = 0);

// "+02:00", "-0530", "Z", "UTC" -> offset seconds east of UTC.
int parse_utc_offset(std::string_view text);

std::string format_iso(Timestamp t);

}  // namespace speakerattr

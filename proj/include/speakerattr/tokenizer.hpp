#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace speakerattr {

// Splits a message into tokens. Rule table (applied left to right):
//
//   whitespace        separates tokens, never emitted
//   emoticon          an entry of emoticons() starting at a non-word character and
//                     followed by whitespace, end of text or a non-word character;
//                     longest entry wins; emitted verbatim (case kept)
//   word              maximal run of word characters (ASCII letters and digits,
//                     any byte >= 0x80); an apostrophe between two word
//                     characters stays inside the word; ASCII letters lowercased
//   punctuation run   maximal run of other non-space characters, emitted as one
//                     token ("!!!!", "?!", "...")
//
// Deterministic; empty input gives an empty list.
std::vector<std::string> tokenize(std::string_view text);

std::span<const std::string_view> emoticons();

}  // namespace speakerattr

#include <gtest/gtest.h>

#include <sstream>

#include "speakerattr/common.hpp"
#include "speakerattr/corpus.hpp"
#include "speakerattr/time_util.hpp"
#include "speakerattr/tokenizer.hpp"
#include "support/fixtures.hpp"

using namespace speakerattr;

namespace {

using Tokens = std::vector<std::string>;

Corpus read_text(const std::string& text) {
  std::istringstream in(text);
  return read_canonical(in, "inline");
}

const char* kHeader = R"({"format":"speakerattr-corpus","version":1,"author_id":"me"})";

}  // namespace

TEST(Tokenizer, WordsAreLowercasedAndPunctuationRunsKept) {
  EXPECT_EQ(tokenize("Hello, World!!!"), (Tokens{"hello", ",", "world", "!!!"}));
  EXPECT_EQ(tokenize("wait?! ok..."), (Tokens{"wait", "?!", "ok", "..."}));
  EXPECT_EQ(tokenize(""), Tokens{});
  EXPECT_EQ(tokenize("   \t\n"), Tokens{});
}

TEST(Tokenizer, ApostropheInsideWordStays) {
  EXPECT_EQ(tokenize("don't 'quote'"), (Tokens{"don't", "'", "quote", "'"}));
  EXPECT_EQ(tokenize("rock'n'roll"), (Tokens{"rock'n'roll"}));
}

TEST(Tokenizer, EmoticonsKeepCaseAndNeedBoundaries) {
  EXPECT_EQ(tokenize("hi :-) bye"), (Tokens{"hi", ":-)", "bye"}));
  EXPECT_EQ(tokenize("lol :-P"), (Tokens{"lol", ":-P"}));
  EXPECT_EQ(tokenize("sad:-("), (Tokens{"sad", ":-("}));
  // Not followed by a boundary: a plain punctuation run.
  EXPECT_EQ(tokenize("x:-Dy"), (Tokens{"x", ":-", "dy"}));
}

TEST(Tokenizer, NonAsciiBytesAreWordCharacters) {
  EXPECT_EQ(tokenize("Café ÜBER"), (Tokens{"café", "Über"}));
  EXPECT_EQ(tokenize("naïve"), (Tokens{"naïve"}));
}

TEST(Tokenizer, Deterministic) {
  const std::string text = "Was it fun?? :D I think so!!! don't know...";
  EXPECT_EQ(tokenize(text), tokenize(text));
}

TEST(TimeUtil, CivilRoundTripAndWeekday) {
  const Timestamp t = from_civil(2017, 7, 14, 2, 40, 0);
  EXPECT_EQ(t, 1500000000);
  CivilTime c = to_civil(t);
  EXPECT_EQ(c.year, 2017);
  EXPECT_EQ(c.month, 7u);
  EXPECT_EQ(c.day, 14u);
  EXPECT_EQ(c.hour, 2u);
  EXPECT_EQ(c.minute, 40u);
  EXPECT_EQ(c.weekday, 4u);  // Friday
  EXPECT_EQ(to_civil(from_civil(2024, 2, 29)).weekday, 3u);
  EXPECT_EQ(to_civil(0).weekday, 3u);
}

TEST(TimeUtil, ParsesEpochAndIso) {
  EXPECT_EQ(parse_timestamp("1500000000"), 1500000000);
  EXPECT_EQ(parse_timestamp("2017-07-14T02:40:00Z"), 1500000000);
  EXPECT_EQ(parse_timestamp("2017-07-14 04:40:00+02:00"), 1500000000);
  EXPECT_EQ(parse_timestamp("2017-07-14T04:40:00", 7200), 1500000000);
  EXPECT_EQ(parse_utc_offset("-0530"), -(5 * 3600 + 30 * 60));
  EXPECT_EQ(format_iso(1500000000), "2017-07-14T02:40:00Z");
  EXPECT_THROW(parse_timestamp("2017-13-01T00:00:00Z"), Error);
  EXPECT_THROW(parse_timestamp("yesterday"), Error);
}

TEST(Canonical, RoundTripIsByteIdentical) {
  Corpus c;
  c.author_id = "me";
  c.conversations.push_back(fixtures::conversation("ann", {"hi \"there\"\n", "yo\tback", "ünïcode ok"}, {100, 200, 300}));
  c.conversations[0].messages[1].speaker_id = "me";
  std::ostringstream first;
  write_canonical(first, c);
  std::istringstream in(first.str());
  Corpus back = read_canonical(in, "round");
  ASSERT_EQ(back.conversations.size(), 1u);
  EXPECT_EQ(back.conversations[0].messages[0].text, "hi \"there\"\n");
  EXPECT_EQ(back.conversations[0].messages[1].tokens, (Tokens{"yo", "back"}));
  std::ostringstream second;
  write_canonical(second, back);
  EXPECT_EQ(first.str(), second.str());
}

TEST(Canonical, GroupsByPartnerAndSortsStably) {
  std::string text = std::string(kHeader) + "\n" +
                     R"({"partner_id":"b","speaker_id":"b","is_author":0,"timestamp":20,"platform":"sms","text":"second"})" "\n"
                     R"({"partner_id":"a","speaker_id":"me","is_author":1,"timestamp":"1970-01-01T00:00:30Z","platform":"sms","text":"x"})" "\n"
                     R"({"partner_id":"b","speaker_id":"me","is_author":1,"timestamp":10,"platform":"sms","text":"first"})" "\n"
                     R"({"partner_id":"b","speaker_id":"b","is_author":0,"timestamp":20,"platform":"sms","text":"third"})" "\n";
  Corpus c = read_text(text);
  ASSERT_EQ(c.partner_ids(), (Tokens{"a", "b"}));
  const Conversation* b = c.find("b");
  ASSERT_NE(b, nullptr);
  ASSERT_EQ(b->messages.size(), 3u);
  EXPECT_EQ(b->messages[0].text, "first");
  EXPECT_EQ(b->messages[1].text, "second");
  EXPECT_EQ(b->messages[2].text, "third");
  EXPECT_EQ(c.find("a")->messages[0].timestamp, 30);
}

TEST(Canonical, ErrorsNameTheLine) {
  const std::string bad_flag = std::string(kHeader) + "\n" +
                               R"({"partner_id":"b","speaker_id":"b","is_author":2,"timestamp":20,"platform":"sms","text":"x"})";
  try {
    read_text(bad_flag);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(read_text(""), ParseError);
  EXPECT_THROW(read_text(R"({"format":"other"})"), ParseError);
  EXPECT_THROW(read_text(std::string(kHeader) + "\n{not json"), ParseError);
  EXPECT_THROW(read_text(std::string(kHeader) + "\n" +
                         R"({"partner_id":"b","speaker_id":"c","is_author":0,"timestamp":20,"platform":"sms","text":"x"})"),
               ParseError);
  EXPECT_THROW(read_text(std::string(kHeader) + "\n" +
                         R"({"partner_id":"me","speaker_id":"me","is_author":1,"timestamp":20,"platform":"sms","text":"x"})"),
               ParseError);
}

TEST(Adapters, MessengerAndSmsGiveTheSameCorpus) {
  const std::string messenger = R"({"participants":[{"name":"Me Myself"},{"name":"Ann"}],
    "messages":[{"sender_name":"Ann","timestamp_ms":2000000,"content":"hey you"},
                {"sender_name":"Me Myself","timestamp_ms":1000000,"content":"Hello!"},
                {"sender_name":"Ann","timestamp_ms":3000000,"photos":[]}]})";
  IngestOptions opt;
  opt.author_id = "me";
  opt.author_name = "Me Myself";
  std::istringstream min(messenger);
  Corpus m = read_messenger_json(min, "m.json", opt);
  ASSERT_EQ(m.conversations.size(), 1u);
  ASSERT_EQ(m.conversations[0].messages.size(), 2u);
  EXPECT_TRUE(m.conversations[0].messages[0].is_author);
  EXPECT_EQ(m.conversations[0].messages[0].timestamp, 1000);

  const std::string sms = R"(<smses count="3">
    <sms address="Ann" date="2000000" type="1" body="hey you" />
    <sms address="Ann" date="1000000" type="2" body="Hello!" />
    <sms address="Ann" date="3000000" type="3" body="draft" />
  </smses>)";
  std::istringstream sin(sms);
  Corpus s = read_sms_xml(sin, "s.xml", opt);
  ASSERT_EQ(s.conversations.size(), 1u);
  ASSERT_EQ(s.conversations[0].messages.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(s.conversations[0].messages[i].text, m.conversations[0].messages[i].text);
    EXPECT_EQ(s.conversations[0].messages[i].timestamp, m.conversations[0].messages[i].timestamp);
    EXPECT_EQ(s.conversations[0].messages[i].is_author, m.conversations[0].messages[i].is_author);
  }
  EXPECT_EQ(s.conversations[0].messages[1].text, "hey you");
}

TEST(Windows, CountsAndSpans) {
  EXPECT_EQ(window_count(4, 5, 1), 0u);
  EXPECT_EQ(window_count(5, 5, 1), 1u);
  EXPECT_EQ(window_count(12, 5, 1), 8u);
  EXPECT_EQ(window_count(12, 5, 3), 3u);
  Conversation c = fixtures::conversation("p", {"a", "b", "c", "d", "e", "f", "g"}, {1, 2, 3, 4, 5, 6, 7});
  auto w = build_windows(c);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[2].start, 2u);
  EXPECT_EQ(w[2].window_index, 2u);
  EXPECT_EQ(w[2].messages().front().text, "c");
  EXPECT_EQ(w[2].messages().back().text, "g");
  EXPECT_EQ(w[2].history().size(), 2u);
  EXPECT_THROW(build_windows(c, 1, 1), Error);
  EXPECT_THROW(build_windows(c, 5, 0), Error);
}

TEST(Stats, HandCountedFixture) {
  // author: "hi there" (2), "hi there" (2), "ok !" (2)  -> 3 msgs, 2 unique, 6 tokens, types {hi, there, ok, !}
  // others: "hi" (1), "see you soon" (3)                 -> 2 msgs, 2 unique, 4 tokens, types {hi, see, you, soon}
  Corpus c;
  c.author_id = "author";
  c.conversations.push_back(fixtures::conversation("p1", {"hi", "hi there", "see you soon", "hi there"}, {1, 2, 3, 4}));
  c.conversations.push_back(fixtures::conversation("p2", {"ok !"}, {5}, {true}));
  CorpusStats s = stats(c);
  EXPECT_EQ(s.author.total_messages, 3u);
  EXPECT_EQ(s.author.unique_messages, 2u);
  EXPECT_EQ(s.author.total_tokens, 6u);
  EXPECT_EQ(s.author.unique_tokens, 4u);
  EXPECT_DOUBLE_EQ(s.author.avg_tokens_per_message, 2.0);
  EXPECT_EQ(s.others.total_messages, 2u);
  EXPECT_EQ(s.others.unique_messages, 2u);
  EXPECT_EQ(s.others.total_tokens, 4u);
  EXPECT_EQ(s.others.unique_tokens, 4u);
  EXPECT_EQ(s.all.total_messages, 5u);
  EXPECT_EQ(s.all.unique_messages, 4u);
  EXPECT_EQ(s.all.total_tokens, 10u);
  EXPECT_EQ(s.all.unique_tokens, 7u);
  EXPECT_DOUBLE_EQ(s.all.avg_tokens_per_message, 2.0);
  EXPECT_THROW(stats(Corpus{}), Error);
}

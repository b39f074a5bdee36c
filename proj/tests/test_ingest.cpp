#include <doctest.h>

#include <filesystem>

#include "crabot/error.hpp"
#include "crabot/ingest.hpp"
#include "crabot/synthetic.hpp"

using namespace crabot;
using ingest::CsvMapping;

namespace {

const std::filesystem::path kData = std::filesystem::path(__FILE__).parent_path() / "data";

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("labels") {
  CHECK(parse_label("bot") == UserLabel::Bot);
  CHECK(parse_label("Control") == UserLabel::Control);
  CHECK(parse_label("UNKNOWN") == UserLabel::Unknown);
  CHECK_THROWS_AS(parse_label("troll"), DataError);
  CHECK(label_name(UserLabel::Control) == "control");
}

TEST_CASE("jsonl grouping") {
  const auto corpus = ingest::load_jsonl(kData / "corpus.jsonl");
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.users[0].user_id == "a");
  CHECK(corpus.users[0].label == UserLabel::Bot);
  CHECK(corpus.users[0].texts.size() == 2);
  CHECK(corpus.users[1].label == UserLabel::Control);
  CHECK(ingest::parse_jsonl("").size() == 0);
  CHECK(ingest::parse_jsonl("\n  \n").size() == 0);
}

TEST_CASE("jsonl errors name the line") {
  const auto conflict = error_of([] {
    ingest::parse_jsonl(
        "{\"user_id\":\"a\",\"label\":\"bot\",\"text\":\"x\"}\n"
        "{\"user_id\":\"a\",\"label\":\"control\",\"text\":\"y\"}\n",
        "in.jsonl");
  });
  CHECK(conflict.find("conflicting labels") != std::string::npos);
  CHECK(conflict.find("in.jsonl:2") != std::string::npos);

  CHECK(error_of([] { ingest::parse_jsonl("{\"user_id\":\"a\"}", "f"); }).find("\"label\"") !=
        std::string::npos);
  CHECK(error_of([] { ingest::parse_jsonl("not json", "f"); }).find("f:1") != std::string::npos);
  CHECK_THROWS_AS(ingest::parse_jsonl("[1,2]"), DataError);
  CHECK_THROWS_AS(ingest::parse_jsonl("{\"user_id\":\"a\",\"label\":\"bot\",\"text\":3}"),
                  DataError);
  CHECK_THROWS_AS(ingest::parse_jsonl("{\"user_id\":\"\",\"label\":\"bot\",\"text\":\"x\"}"),
                  DataError);
  CHECK_THROWS_AS(ingest::load_jsonl(kData / "absent.jsonl"), DataError);
}

TEST_CASE("users without tweets survive a round trip") {
  const auto corpus = ingest::parse_jsonl(
      "{\"user_id\":\"quiet\",\"label\":\"control\"}\n"
      "{\"user_id\":\"loud\",\"label\":\"bot\",\"text\":null}\n"
      "{\"user_id\":\"loud\",\"label\":\"bot\",\"text\":\"hi\"}\n");
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.users[0].texts.empty());
  CHECK(corpus.users[1].texts == std::vector<std::string>{"hi"});
  CHECK(ingest::parse_jsonl(ingest::to_jsonl(corpus)) == corpus);
}

TEST_CASE("jsonl round trip through a file") {
  auto corpus = eval::generate_synthetic_corpus({});
  corpus.users[3].texts.push_back("quotes \" and \\ and\nnewlines\tand \xC3\xA9");
  const auto dir = std::filesystem::path(CRABOT_TEST_TMP);
  std::filesystem::create_directories(dir);
  ingest::write_jsonl(corpus, dir / "round.jsonl");
  CHECK(ingest::load_jsonl(dir / "round.jsonl") == corpus);
  CHECK(ingest::to_jsonl(corpus).starts_with("{\"user_id\":\"bot_00\",\"label\":\"bot\",\"text\":"));
}

TEST_CASE("csv with a fixed label") {
  const CsvMapping mapping{"author", "content", std::nullopt, UserLabel::Bot};
  const auto corpus = ingest::load_csv(kData / "trolls.csv", mapping);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.users[0].user_id == "TEN_GOP");
  CHECK(corpus.users[0].texts ==
        std::vector<std::string>{"Vote early, vote often!", "He said \"rigged\" again"});
  CHECK(corpus.users[1].texts == std::vector<std::string>{"line one\nline two"});
  for (const auto& u : corpus.users) CHECK(u.label == UserLabel::Bot);
}

TEST_CASE("csv with a label column") {
  const CsvMapping mapping{"who", "what", std::string("kind"), std::nullopt};
  const auto corpus = ingest::parse_csv("who,what,kind\r\nx,hello,bot\r\ny,bye,Control\r\n", mapping);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.users[1].label == UserLabel::Control);
  CHECK_THROWS_AS(ingest::parse_csv("who,what,kind\nx,hello,alien\n", mapping), DataError);
}

TEST_CASE("csv errors") {
  const CsvMapping handle{"handle", "content", std::nullopt, UserLabel::Bot};
  CHECK(error_of([&] { ingest::load_csv(kData / "trolls.csv", handle); })
            .find("missing column \"handle\"") != std::string::npos);
  const CsvMapping ok{"a", "b", std::nullopt, UserLabel::Control};
  CHECK_THROWS_AS(ingest::parse_csv("a,b\n1,2,3\n", ok), DataError);
  CHECK_THROWS_AS(ingest::parse_csv("", ok), DataError);
  CHECK_THROWS_AS(ingest::parse_csv("a,b\n\"open,2\n", ok), DataError);
  const CsvMapping both{"a", "b", std::string("c"), UserLabel::Bot};
  CHECK_THROWS_AS(ingest::parse_csv("a,b,c\n", both), InvalidArgument);
  const CsvMapping neither{"a", "b", std::nullopt, std::nullopt};
  CHECK_THROWS_AS(ingest::parse_csv("a,b\n", neither), InvalidArgument);
}

TEST_CASE("merge") {
  eval::SyntheticParams bots;
  bots.n_bots = 40;
  bots.n_controls = 1;
  auto a = eval::generate_synthetic_corpus(bots);
  a.users.pop_back();
  Corpus b;
  for (int i = 0; i < 40; ++i) b.users.push_back({"ctl" + std::to_string(i), UserLabel::Control, {"x"}});
  const std::vector<Corpus> both = {a, b};
  CHECK(ingest::merge(both).size() == 80);

  const std::vector<Corpus> with_empty = {Corpus{}, a};
  CHECK(ingest::merge(with_empty) == a);
  const std::vector<Corpus> twice = {a, a};
  CHECK_THROWS_AS(ingest::merge(twice), DataError);

  // Associative up to ordering on disjoint ids.
  Corpus c;
  c.users.push_back({"z", UserLabel::Unknown, {}});
  const std::vector<Corpus> ab = {a, b};
  const std::vector<Corpus> left = {ingest::merge(ab), c};
  const std::vector<Corpus> bc = {b, c};
  const std::vector<Corpus> right = {a, ingest::merge(bc)};
  CHECK(ingest::merge(left) == ingest::merge(right));
}

TEST_CASE("label map") {
  const auto corpus = ingest::load_jsonl(kData / "corpus.jsonl");
  const auto labels = labels_of(corpus);
  CHECK(labels.at("a") == UserLabel::Bot);
  CHECK(labels.at("b") == UserLabel::Control);
}

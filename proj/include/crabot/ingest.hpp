#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crabot {

enum class UserLabel { Bot, Control, Unknown };

// Case-insensitive; accepts "bot", "control" and "unknown". Anything else
// throws DataError.
UserLabel parse_label(std::string_view text);

// Lower-case canonical spelling used in every file format.
std::string_view label_name(UserLabel label);

struct UserRecord {
  std::string user_id;
  UserLabel label = UserLabel::Unknown;
  // Raw tweet strings in input order. Duplicates are kept.
  std::vector<std::string> texts;

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

struct Corpus {
  std::vector<UserRecord> users;

  std::size_t size() const { return users.size(); }
  friend bool operator==(const Corpus&, const Corpus&) = default;
};

using LabelMap = std::map<std::string, UserLabel, std::less<>>;

LabelMap labels_of(const Corpus& corpus);

namespace ingest {

// One JSON object per line with string fields user_id, label and text.
// A line without "text" (or with "text": null) declares a user with no
// tweets. Blank lines are skipped.
Corpus load_jsonl(const std::filesystem::path& path);
Corpus parse_jsonl(std::string_view content, std::string_view source = "<memory>");

// Inverse of load_jsonl: one line per tweet, plus one text-less line for each
// user without tweets.
void write_jsonl(const Corpus& corpus, const std::filesystem::path& path);
std::string to_jsonl(const Corpus& corpus);

struct CsvMapping {
  std::string user_column;
  std::string text_column;
  // Exactly one of label_column / fixed_label must be set.
  std::optional<std::string> label_column;
  std::optional<UserLabel> fixed_label;
};

// RFC 4180 CSV with a header row.
Corpus load_csv(const std::filesystem::path& path, const CsvMapping& mapping);
Corpus parse_csv(std::string_view content, const CsvMapping& mapping,
                 std::string_view source = "<memory>");

// Union of the users of every corpus in order. A user_id present in two
// corpora throws DataError.
Corpus merge(std::span<const Corpus> corpora);

}  // namespace ingest
}  // namespace crabot

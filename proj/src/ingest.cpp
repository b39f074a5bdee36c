#include "crabot/ingest.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "crabot/csv.hpp"
#include "crabot/error.hpp"

namespace crabot {

using json = nlohmann::json;

UserLabel parse_label(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "bot") return UserLabel::Bot;
  if (lower == "control") return UserLabel::Control;
  if (lower == "unknown") return UserLabel::Unknown;
  throw DataError(fmt::format("invalid label \"{}\" (expected bot, control or unknown)",
                              text));
}

std::string_view label_name(UserLabel label) {
  switch (label) {
    case UserLabel::Bot:
      return "bot";
    case UserLabel::Control:
      return "control";
    case UserLabel::Unknown:
      break;
  }
  return "unknown";
}

LabelMap labels_of(const Corpus& corpus) {
  LabelMap labels;
  for (const auto& user : corpus.users) labels.emplace(user.user_id, user.label);
  return labels;
}

namespace ingest {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

// Groups (user, label, text) observations into records, first-seen order.
class CorpusBuilder {
 public:
  explicit CorpusBuilder(std::string_view source) : source_(source) {}

  void add(std::string user_id, UserLabel label, const std::string* text,
           std::size_t line) {
    if (user_id.empty()) {
      throw DataError(fmt::format("{}:{}: empty user_id", source_, line));
    }
    auto [it, inserted] = index_.try_emplace(user_id, corpus_.users.size());
    if (inserted) {
      corpus_.users.push_back(UserRecord{std::move(user_id), label, {}});
    }
    UserRecord& record = corpus_.users[it->second];
    if (record.label != label) {
      throw DataError(fmt::format(
          "{}:{}: conflicting labels for user \"{}\" ({} vs {})", source_, line,
          record.user_id, label_name(record.label), label_name(label)));
    }
    if (text) record.texts.push_back(*text);
  }

  Corpus finish() && { return std::move(corpus_); }

 private:
  std::string source_;
  Corpus corpus_;
  std::unordered_map<std::string, std::size_t> index_;
};

const std::string& string_field(const json& object, const char* name,
                                std::string_view source, std::size_t line) {
  auto it = object.find(name);
  if (it == object.end() || !it->is_string()) {
    throw DataError(fmt::format("{}:{}: missing or non-string field \"{}\"",
                                source, line, name));
  }
  return it->get_ref<const std::string&>();
}

}  // namespace

Corpus parse_jsonl(std::string_view content, std::string_view source) {
  CorpusBuilder builder(source);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(fmt::format("{}:{}: malformed JSON: {}", source, line_no,
                                  e.what()));
    }
    if (!object.is_object()) {
      throw DataError(fmt::format("{}:{}: expected a JSON object", source, line_no));
    }
    std::string user_id = string_field(object, "user_id", source, line_no);
    UserLabel label;
    try {
      label = parse_label(string_field(object, "label", source, line_no));
    } catch (const DataError& e) {
      throw DataError(fmt::format("{}:{}: {}", source, line_no, e.what()));
    }
    const std::string* text = nullptr;
    if (auto it = object.find("text"); it != object.end() && !it->is_null()) {
      text = &string_field(object, "text", source, line_no);
    }
    builder.add(std::move(user_id), label, text, line_no);
  }
  return std::move(builder).finish();
}

Corpus load_jsonl(const std::filesystem::path& path) {
  return parse_jsonl(read_file(path), path.string());
}

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& user : corpus.users) {
    nlohmann::ordered_json line = {{"user_id", user.user_id}, {"label", label_name(user.label)}};
    if (user.texts.empty()) {
      out += line.dump();
      out.push_back('\n');
      continue;
    }
    for (const auto& text : user.texts) {
      line["text"] = text;
      out += line.dump();
      out.push_back('\n');
    }
  }
  return out;
}

void write_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out << to_jsonl(corpus);
  if (!out) throw DataError(fmt::format("failed writing {}", path.string()));
}

Corpus parse_csv(std::string_view content, const CsvMapping& mapping,
                 std::string_view source) {
  if (mapping.label_column.has_value() == mapping.fixed_label.has_value()) {
    throw InvalidArgument(
        "CSV mapping needs exactly one of a label column or a fixed label");
  }
  std::vector<csv::Row> rows;
  try {
    rows = csv::parse(content);
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", source, e.what()));
  }
  if (rows.empty()) throw DataError(fmt::format("{}: missing header row", source));

  const csv::Row& header = rows.front();
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw DataError(fmt::format("{}: missing column \"{}\"", source, name));
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t user_col = column(mapping.user_column);
  const std::size_t text_col = column(mapping.text_column);
  std::optional<std::size_t> label_col;
  if (mapping.label_column) label_col = column(*mapping.label_column);

  CorpusBuilder builder(source);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    // Record numbers count the header as record 1.
    const std::size_t record = r + 1;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      throw DataError(fmt::format("{}: record {} has {} fields, header has {}",
                                  source, record, row.size(), header.size()));
    }
    UserLabel label;
    if (label_col) {
      try {
        label = parse_label(row[*label_col]);
      } catch (const DataError& e) {
        throw DataError(fmt::format("{}: record {}: {}", source, record, e.what()));
      }
    } else {
      label = *mapping.fixed_label;
    }
    builder.add(row[user_col], label, &row[text_col], record);
  }
  return std::move(builder).finish();
}

Corpus load_csv(const std::filesystem::path& path, const CsvMapping& mapping) {
  return parse_csv(read_file(path), mapping, path.string());
}

Corpus merge(std::span<const Corpus> corpora) {
  Corpus merged;
  std::unordered_set<std::string> seen;
  for (const auto& corpus : corpora) {
    for (const auto& user : corpus.users) {
      if (!seen.insert(user.user_id).second) {
        throw DataError(
            fmt::format("duplicate user_id \"{}\" across corpora", user.user_id));
      }
      merged.users.push_back(user);
    }
  }
  return merged;
}

}  // namespace ingest
}  // namespace crabot

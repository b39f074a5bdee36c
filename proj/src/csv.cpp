#include "crabot/csv.hpp"

#include <fmt/format.h>

#include "crabot/error.hpp"

namespace crabot::csv {

std::vector<Row> parse(std::string_view text) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool field_started = false;  // anything consumed for the current record

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    field_started = false;
  };

  while (i < n) {
    const char c = text[i];
    if (c == '"' && field.empty()) {
      // Quoted field.
      const std::size_t open_line = line;
      ++i;
      for (;;) {
        if (i >= n) {
          throw DataError(
              fmt::format("line {}: unterminated quoted field", open_line));
        }
        const char q = text[i];
        if (q == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (q == '\n') ++line;
        field.push_back(q);
        ++i;
      }
      field_started = true;
      if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        throw DataError(
            fmt::format("line {}: unexpected character after closing quote",
                        line));
      }
      continue;
    }
    if (c == ',') {
      end_field();
      field_started = true;
      ++i;
      continue;
    }
    if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
      ++i;
      ++line;
      end_record();
      continue;
    }
    field.push_back(c);
    field_started = true;
    ++i;
  }
  if (field_started || !field.empty() || !row.empty()) end_record();
  return rows;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_row(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(row[i]);
  }
  return out;
}

}  // namespace crabot::csv

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crabot::csv {

using Row = std::vector<std::string>;

// Parses RFC 4180 text: comma separated, fields optionally enclosed in double
// quotes, "" as an escaped quote inside a quoted field, CRLF or LF record
// terminators, embedded newlines allowed in quoted fields. A final empty line
// does not produce a record. Throws DataError on an unterminated quote or
// stray characters after a closing quote.
std::vector<Row> parse(std::string_view text);

// Quotes the field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string format_row(const Row& row);

}  // namespace crabot::csv

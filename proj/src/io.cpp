#include "crabot/io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crabot/csv.hpp"
#include "crabot/error.hpp"

namespace crabot::io {
namespace {

double parse_double(const std::string& text, std::string_view source, std::string_view what) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError(fmt::format("{}: {}: \"{}\" is not a number", source, what, text));
  }
  return value;
}

std::uint64_t parse_count(const std::string& text, std::string_view source, std::string_view what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError(fmt::format("{}: {}: \"{}\" is not a non-negative integer", source, what, text));
  }
  return value;
}

std::vector<csv::Row> parse_csv(std::string_view text, std::string_view source) {
  try {
    return csv::parse(text);
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", source, e.what()));
  }
}

std::string fixed6(double x) { return fmt::format("{:.6f}", x); }

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError(fmt::format("failed writing {}", path.string()));
  }
  std::filesystem::rename(tmp, path);
}

std::string matrix_to_csv(const resonance::ResonanceMatrix& matrix) {
  std::string out = csv::format_row(matrix.user_ids());
  out.push_back('\n');
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out.push_back(',');
      out += fixed6(matrix.at(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

resonance::ResonanceMatrix matrix_from_csv(std::string_view text, std::string_view source) {
  auto rows = parse_csv(text, source);
  if (rows.empty()) throw DataError(fmt::format("{}: missing header row of user ids", source));
  std::vector<std::string> ids = std::move(rows.front());
  if (ids.size() == 1 && ids[0].empty()) ids.clear();
  const std::size_t n = ids.size();
  if (rows.size() - 1 != n) {
    throw DataError(fmt::format("{}: expected {} matrix rows after the header, found {}", source,
                                n, rows.size() - 1));
  }
  std::vector<double> values;
  values.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    if (row.size() != n) {
      throw DataError(fmt::format("{}: row {} (user \"{}\") has {} values, expected {}", source,
                                  i + 1, ids[i], row.size(), n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      values.push_back(parse_double(row[j], source,
                                    fmt::format("row {} column \"{}\"", i + 1, ids[j])));
    }
  }
  try {
    return resonance::ResonanceMatrix::from_values(std::move(ids), std::move(values));
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", source, e.what()));
  }
}

resonance::ResonanceMatrix quantize(const resonance::ResonanceMatrix& matrix) {
  resonance::ResonanceMatrix out(matrix.user_ids());
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.size(); ++j) {
      const std::string text = fixed6(matrix.at(i, j));
      double value = 0;
      std::from_chars(text.data(), text.data() + text.size(), value);
      out.set(i, j, value);
    }
  }
  return out;
}

std::string labels_to_csv(const Corpus& corpus) {
  std::string out = "user_id,label\n";
  for (const auto& user : corpus.users) {
    out += csv::format_row({user.user_id, std::string(label_name(user.label))});
    out.push_back('\n');
  }
  return out;
}

LabelMap labels_from_csv(std::string_view text, std::string_view source) {
  auto rows = parse_csv(text, source);
  if (rows.empty() || rows.front() != csv::Row{"user_id", "label"}) {
    throw DataError(fmt::format("{}: header must be \"user_id,label\"", source));
  }
  LabelMap labels;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 2) {
      throw DataError(fmt::format("{}: record {} needs fields user_id and label", source, r + 1));
    }
    UserLabel label;
    try {
      label = parse_label(row[1]);
    } catch (const DataError& e) {
      throw DataError(fmt::format("{}: record {}: field label: {}", source, r + 1, e.what()));
    }
    if (!labels.emplace(row[0], label).second) {
      throw DataError(fmt::format("{}: duplicate user_id \"{}\"", source, row[0]));
    }
  }
  return labels;
}

std::string sweep_to_csv(std::span<const eval::SweepPoint> points) {
  std::string out(kSweepHeader);
  out.push_back('\n');
  for (const auto& p : points) {
    out += fmt::format("{:.10g},{:.9f},{:.9f},{},{},{},{},{}\n", p.tau, p.mcc,
                       p.represented_fraction, p.confusion.tp, p.confusion.fp, p.confusion.fn,
                       p.confusion.tn, p.community_count);
  }
  return out;
}

std::vector<eval::SweepPoint> sweep_from_csv(std::string_view text, std::string_view source) {
  auto rows = parse_csv(text, source);
  static const csv::Row header = [] {
    return csv::parse(kSweepHeader).front();
  }();
  if (rows.empty()) throw DataError(fmt::format("{}: missing sweep header", source));
  const auto& got = rows.front();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c >= got.size() || got[c] != header[c]) {
      throw DataError(fmt::format("{}: header field {} must be \"{}\"", source, c + 1, header[c]));
    }
  }
  if (got.size() != header.size()) {
    throw DataError(fmt::format("{}: unexpected extra header field \"{}\"", source,
                                got[header.size()]));
  }
  std::vector<eval::SweepPoint> points;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw DataError(fmt::format("{}: record {} has {} fields, expected {}", source, r + 1,
                                  row.size(), header.size()));
    }
    auto field = [&](std::size_t c) { return fmt::format("record {} field {}", r + 1, header[c]); };
    eval::SweepPoint p;
    p.tau = parse_double(row[0], source, field(0));
    p.mcc = parse_double(row[1], source, field(1));
    p.represented_fraction = parse_double(row[2], source, field(2));
    p.confusion.tp = parse_count(row[3], source, field(3));
    p.confusion.fp = parse_count(row[4], source, field(4));
    p.confusion.fn = parse_count(row[5], source, field(5));
    p.confusion.tn = parse_count(row[6], source, field(6));
    p.community_count = parse_count(row[7], source, field(7));
    if (!points.empty() && !(p.tau > points.back().tau)) {
      throw DataError(fmt::format("{}: record {} field tau is not increasing", source, r + 1));
    }
    points.push_back(p);
  }
  if (points.empty()) throw DataError(fmt::format("{}: sweep has no records", source));
  return points;
}

std::string partition_to_json(const community::Partition& partition,
                              std::span<const std::string> user_ids, double tau) {
  nlohmann::ordered_json doc;
  doc["tau"] = tau;
  doc["modularity"] = partition.modularity;
  auto communities = nlohmann::ordered_json::array();
  for (const auto& members : partition.communities) {
    auto list = nlohmann::ordered_json::array();
    for (std::size_t v : members) list.push_back(user_ids[v]);
    communities.push_back(std::move(list));
  }
  doc["communities"] = std::move(communities);
  return doc.dump(2) + "\n";
}

}  // namespace crabot::io

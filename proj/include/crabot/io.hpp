#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "crabot/community.hpp"
#include "crabot/eval.hpp"
#include "crabot/ingest.hpp"
#include "crabot/resonance.hpp"

namespace crabot::io {

std::string read_text(const std::filesystem::path& path);
// Writes through a temporary file and renames it into place.
void write_text(const std::filesystem::path& path, std::string_view content);

// Header row of user ids, then n rows of n values with 6 fractional digits.
std::string matrix_to_csv(const resonance::ResonanceMatrix& matrix);
resonance::ResonanceMatrix matrix_from_csv(std::string_view text,
                                           std::string_view source = "<memory>");

// Values as they read back from the CSV export, so in-memory and file-based
// runs see identical numbers.
resonance::ResonanceMatrix quantize(const resonance::ResonanceMatrix& matrix);

// "user_id,label" header then one row per user.
std::string labels_to_csv(const Corpus& corpus);
LabelMap labels_from_csv(std::string_view text, std::string_view source = "<memory>");

inline constexpr std::string_view kSweepHeader =
    "tau,mcc,represented_fraction,tp,fp,fn,tn,community_count";

std::string sweep_to_csv(std::span<const eval::SweepPoint> points);
std::vector<eval::SweepPoint> sweep_from_csv(std::string_view text,
                                             std::string_view source = "<memory>");

// {"tau": ..., "modularity": ..., "communities": [[user_id, ...], ...]}
std::string partition_to_json(const community::Partition& partition,
                              std::span<const std::string> user_ids, double tau);

}  // namespace crabot::io

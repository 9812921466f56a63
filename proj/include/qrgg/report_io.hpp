#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "qrgg/cut.hpp"

namespace qrgg {

struct Histogram;

/// Value whose shortest decimal form has at most 6 significant digits, so
/// nlohmann::json prints it as such.
double round_sig6(double value);

/// Writes to `path` via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Two-space indented JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);

std::string format_sig6(double value);

/// `trial,capacity` rows.
std::string trials_csv(std::span<const Capacity> capacities);

/// `bin_lo,bin_hi,count` rows.
std::string histogram_csv(const Histogram& histogram);

/// Self-contained bar chart (rect and text elements only).
std::string histogram_svg(const Histogram& histogram, std::string_view title);

}  // namespace qrgg

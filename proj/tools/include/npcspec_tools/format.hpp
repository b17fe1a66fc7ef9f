#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "npcspec/fourier.hpp"

namespace npcspec::tools {

/// Shortest decimal that round-trips to the same double; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_double(double x);

/// Writes bytes verbatim (binary mode, LF line endings).
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// One column headed "value".
std::string series_csv(std::span<const double> values);
TimeSeries parse_series_csv(const std::string& text);
TimeSeries read_series_csv(const std::filesystem::path& path);

/// Header "frequency,<name>..." then one row per grid point.
std::string grid_csv(std::span<const double> freqs, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns);

/// Joins fields with commas and terminates with LF.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace npcspec::tools

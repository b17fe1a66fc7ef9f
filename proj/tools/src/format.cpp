#include "npcspec_tools/format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "npcspec/error.hpp"
#include "npcspec_tools/errors.hpp"

namespace npcspec::tools {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string series_csv(std::span<const double> values) {
  std::string out = "value\n";
  for (double v : values) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

TimeSeries parse_series_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> values;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line == "value") continue;
    }
    double v = 0.0;
    const auto res = std::from_chars(line.data(), line.data() + line.size(), v);
    if (res.ec != std::errc() || res.ptr != line.data() + line.size() || !std::isfinite(v)) {
      throw IoError("line " + std::to_string(line_no) + ": not a finite number: " + line);
    }
    values.push_back(v);
  }
  try {
    return TimeSeries(std::move(values));
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

TimeSeries read_series_csv(const std::filesystem::path& path) { return parse_series_csv(read_text_file(path)); }

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  out += '\n';
  return out;
}

std::string grid_csv(std::span<const double> freqs, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns) {
  std::vector<std::string> header{"frequency"};
  header.insert(header.end(), names.begin(), names.end());
  std::string out = csv_row(header);
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    std::vector<std::string> row{format_double(freqs[j])};
    for (const auto& c : columns) row.push_back(format_double(c.at(j)));
    out += csv_row(row);
  }
  return out;
}

}  // namespace npcspec::tools

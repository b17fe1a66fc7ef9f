#pragma once

#include <span>
#include <string>
#include <vector>

namespace npcspec::tools {

/// Minimal static line-plot writer. Data coordinates are mapped linearly to
/// the plotting area; call the add_* functions after set_range.
class SvgPlot {
 public:
  SvgPlot(double width = 720, double height = 440);

  void set_range(double x_min, double x_max, double y_min, double y_max);
  void set_labels(std::string title, std::string x_label, std::string y_label);

  void add_line(std::span<const double> x, std::span<const double> y, const std::string& stroke, double width = 1.5,
                bool dashed = false);
  /// Filled polygon between lower and upper curves.
  void add_band(std::span<const double> x, std::span<const double> lower, std::span<const double> upper,
                const std::string& fill, double opacity = 0.3);
  void add_points(std::span<const double> x, std::span<const double> y, const std::string& fill, double radius = 3);
  void add_marker(double x, double y, const std::string& label);
  void add_legend(const std::string& label, const std::string& colour);

  std::string render() const;

 private:
  double px(double x) const;
  double py(double y) const;
  std::string axes() const;

  double width_, height_;
  double left_ = 70, right_ = 20, top_ = 40, bottom_ = 55;
  double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
  std::string title_, x_label_, y_label_;
  std::vector<std::string> body_;
  std::vector<std::pair<std::string, std::string>> legend_;
};

/// Tick positions at multiples of 1, 2 or 5 times a power of ten.
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

/// Escapes &, <, > and quotes for XML text and attributes.
std::string xml_escape(const std::string& s);

}  // namespace npcspec::tools

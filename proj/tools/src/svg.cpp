#include "npcspec_tools/svg.hpp"

#include <algorithm>
#include <cmath>

#include "npcspec_tools/format.hpp"

namespace npcspec::tools {

namespace {

std::string num(double v) {
  // Two decimals in pixel space keeps files small and byte-stable.
  return format_double(std::round(v * 100.0) / 100.0);
}

std::string points_attr(const std::vector<std::pair<double, double>>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += num(pts[i].first) + "," + num(pts[i].second);
  }
  return out;
}

}  // namespace

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
  std::vector<double> ticks;
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) return ticks;
  const double raw = (hi - lo) / std::max(target, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

SvgPlot::SvgPlot(double width, double height) : width_(width), height_(height) {}

void SvgPlot::set_range(double x_min, double x_max, double y_min, double y_max) {
  x0_ = x_min;
  x1_ = x_max > x_min ? x_max : x_min + 1.0;
  y0_ = y_min;
  y1_ = y_max > y_min ? y_max : y_min + 1.0;
}

void SvgPlot::set_labels(std::string title, std::string x_label, std::string y_label) {
  title_ = std::move(title);
  x_label_ = std::move(x_label);
  y_label_ = std::move(y_label);
}

double SvgPlot::px(double x) const { return left_ + (x - x0_) / (x1_ - x0_) * (width_ - left_ - right_); }
double SvgPlot::py(double y) const { return height_ - bottom_ - (y - y0_) / (y1_ - y0_) * (height_ - top_ - bottom_); }

void SvgPlot::add_line(std::span<const double> x, std::span<const double> y, const std::string& stroke, double width,
                       bool dashed) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (std::isfinite(x[i]) && std::isfinite(y[i])) pts.emplace_back(px(x[i]), py(y[i]));
  }
  if (pts.empty()) return;
  body_.push_back("<polyline fill=\"none\" stroke=\"" + xml_escape(stroke) + "\" stroke-width=\"" + num(width) + "\"" +
                  (dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + points_attr(pts) + "\"/>");
}

void SvgPlot::add_band(std::span<const double> x, std::span<const double> lower, std::span<const double> upper,
                       const std::string& fill, double opacity) {
  std::vector<std::pair<double, double>> pts;
  const std::size_t m = std::min({x.size(), lower.size(), upper.size()});
  for (std::size_t i = 0; i < m; ++i) {
    if (std::isfinite(x[i]) && std::isfinite(upper[i])) pts.emplace_back(px(x[i]), py(upper[i]));
  }
  for (std::size_t i = m; i-- > 0;) {
    if (std::isfinite(x[i]) && std::isfinite(lower[i])) pts.emplace_back(px(x[i]), py(lower[i]));
  }
  if (pts.size() < 3) return;
  body_.push_back("<polygon fill=\"" + xml_escape(fill) + "\" fill-opacity=\"" + num(opacity) +
                  "\" stroke=\"none\" points=\"" + points_attr(pts) + "\"/>");
}

void SvgPlot::add_points(std::span<const double> x, std::span<const double> y, const std::string& fill,
                         double radius) {
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    body_.push_back("<circle cx=\"" + num(px(x[i])) + "\" cy=\"" + num(py(y[i])) + "\" r=\"" + num(radius) +
                    "\" fill=\"" + xml_escape(fill) + "\"/>");
  }
}

void SvgPlot::add_marker(double x, double y, const std::string& label) {
  body_.push_back("<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) +
                  "\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>");
  body_.push_back("<text x=\"" + num(px(x) + 9) + "\" y=\"" + num(py(y) - 9) + "\" font-size=\"12\">" +
                  xml_escape(label) + "</text>");
}

void SvgPlot::add_legend(const std::string& label, const std::string& colour) { legend_.emplace_back(label, colour); }

std::string SvgPlot::axes() const {
  std::string out;
  const double xa = left_, xb = width_ - right_, ya = height_ - bottom_, yb = top_;
  out += "<rect x=\"" + num(xa) + "\" y=\"" + num(yb) + "\" width=\"" + num(xb - xa) + "\" height=\"" + num(ya - yb) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : nice_ticks(x0_, x1_)) {
    out += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(ya) + "\" x2=\"" + num(px(t)) + "\" y2=\"" + num(ya + 5) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(px(t)) + "\" y=\"" + num(ya + 18) + "\" font-size=\"11\" text-anchor=\"middle\">" +
           format_double(t) + "</text>\n";
  }
  for (double t : nice_ticks(y0_, y1_)) {
    out += "<line x1=\"" + num(xa - 5) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(xa) + "\" y2=\"" + num(py(t)) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(xa - 8) + "\" y=\"" + num(py(t) + 4) + "\" font-size=\"11\" text-anchor=\"end\">" +
           format_double(t) + "</text>\n";
  }
  out += "<text x=\"" + num(0.5 * (xa + xb)) + "\" y=\"" + num(height_ - 12) +
         "\" font-size=\"13\" text-anchor=\"middle\">" + xml_escape(x_label_) + "</text>\n";
  out += "<text x=\"16\" y=\"" + num(0.5 * (ya + yb)) + "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(0.5 * (ya + yb)) + ")\">" + xml_escape(y_label_) + "</text>\n";
  out += "<text x=\"" + num(0.5 * (xa + xb)) + "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" +
         xml_escape(title_) + "</text>\n";
  return out;
}

std::string SvgPlot::render() const {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" + num(height_) +
         "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<defs><clipPath id=\"area\"><rect x=\"" + num(left_) + "\" y=\"" + num(top_) + "\" width=\"" +
         num(width_ - left_ - right_) + "\" height=\"" + num(height_ - top_ - bottom_) + "\"/></clipPath></defs>\n";
  out += "<g clip-path=\"url(#area)\">\n";
  for (const auto& b : body_) out += b + "\n";
  out += "</g>\n";
  out += axes();
  double ly = top_ + 16;
  for (const auto& [label, colour] : legend_) {
    const double lx = width_ - right_ - 150;
    out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 20) + "\" y2=\"" + num(ly - 4) +
           "\" stroke=\"" + xml_escape(colour) + "\" stroke-width=\"3\"/>\n";
    out += "<text x=\"" + num(lx + 26) + "\" y=\"" + num(ly) + "\" font-size=\"12\">" + xml_escape(label) + "</text>\n";
    ly += 16;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace npcspec::tools

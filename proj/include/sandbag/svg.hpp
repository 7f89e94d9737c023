#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

// Self-contained SVG line plots (axes, ticks, legend, polylines). No
// timestamps or other run-dependent content, so identical data renders to
// identical bytes.

namespace sandbag {

class SvgFigure {
 public:
  SvgFigure(double width, double height, std::string title)
      : width_(width), height_(height), title_(std::move(title)) {}

  void set_ranges(double x_min, double x_max, double y_min, double y_max) {
    x_min_ = x_min;
    x_max_ = x_max > x_min ? x_max : x_min + 1.0;
    y_min_ = y_min;
    y_max_ = y_max > y_min ? y_max : y_min + 1.0;
  }

  void set_labels(std::string x_label, std::string y_label) {
    x_label_ = std::move(x_label);
    y_label_ = std::move(y_label);
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color, double stroke_width = 1.0,
                bool dashed = false, double opacity = 1.0) {
    if (xs.size() < 2 || xs.size() != ys.size()) return;
    std::string points;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      points += fmt(px(xs[i])) + "," + fmt(py(ys[i])) + " ";
    }
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             fmt(stroke_width) + "\"";
    if (dashed) body_ += " stroke-dasharray=\"6,4\"";
    if (opacity < 1.0) body_ += " stroke-opacity=\"" + fmt(opacity) + "\"";
    body_ += " points=\"" + points + "\"/>\n";
  }

  // Step-after line, for action rasters.
  void steps(const std::vector<double>& xs, const std::vector<double>& ys,
             const std::string& color, double stroke_width = 1.0,
             double opacity = 1.0) {
    if (xs.size() < 2 || xs.size() != ys.size()) return;
    std::vector<double> sx, sy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) {
        sx.push_back(xs[i]);
        sy.push_back(ys[i - 1]);
      }
      sx.push_back(xs[i]);
      sy.push_back(ys[i]);
    }
    polyline(sx, sy, color, stroke_width, false, opacity);
  }

  void hline(double y, const std::string& color, bool dashed = true) {
    polyline({x_min_, x_max_}, {y, y}, color, 1.0, dashed);
  }

  void legend_entry(const std::string& label, const std::string& color) {
    legend_.push_back({label, color});
  }

  std::string render() const {
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) +
           "\" height=\"" + fmt(height_) + "\" viewBox=\"0 0 " + fmt(width_) + " " +
           fmt(height_) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + fmt(width_ / 2) +
           "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">" +
           title_ + "</text>\n";
    out += axes();
    out += body_;
    out += legend_box();
    out += "</svg>\n";
    return out;
  }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
  }

  static std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
  }

  double px(double x) const {
    return margin_left_ +
           (x - x_min_) / (x_max_ - x_min_) * (width_ - margin_left_ - margin_right_);
  }
  double py(double y) const {
    return height_ - margin_bottom_ -
           (y - y_min_) / (y_max_ - y_min_) * (height_ - margin_top_ - margin_bottom_);
  }

  std::string axes() const {
    std::string out;
    const double x0 = margin_left_;
    const double x1 = width_ - margin_right_;
    const double y0 = height_ - margin_bottom_;
    const double y1 = margin_top_;
    out += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) +
           "\" y2=\"" + fmt(y0) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x0) +
           "\" y2=\"" + fmt(y1) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double fx = x_min_ + (x_max_ - x_min_) * i / 5.0;
      const double fy = y_min_ + (y_max_ - y_min_) * i / 5.0;
      out += "<line x1=\"" + fmt(px(fx)) + "\" y1=\"" + fmt(y0) + "\" x2=\"" +
             fmt(px(fx)) + "\" y2=\"" + fmt(y0 + 4) + "\" stroke=\"black\"/>\n";
      out += "<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(y0 + 16) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
             tick_label(fx) + "</text>\n";
      out += "<line x1=\"" + fmt(x0 - 4) + "\" y1=\"" + fmt(py(fy)) + "\" x2=\"" +
             fmt(x0) + "\" y2=\"" + fmt(py(fy)) + "\" stroke=\"black\"/>\n";
      out += "<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(py(fy) + 3) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
             tick_label(fy) + "</text>\n";
    }
    if (!x_label_.empty()) {
      out += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"" + fmt(height_ - 8) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
             x_label_ + "</text>\n";
    }
    if (!y_label_.empty()) {
      out += "<text x=\"14\" y=\"" + fmt((y0 + y1) / 2) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
             "transform=\"rotate(-90 14 " +
             fmt((y0 + y1) / 2) + ")\">" + y_label_ + "</text>\n";
    }
    return out;
  }

  std::string legend_box() const {
    if (legend_.empty()) return "";
    std::string out;
    double y = margin_top_ + 14;
    const double x = width_ - margin_right_ - 150;
    for (const auto& [label, color] : legend_) {
      out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y - 4) + "\" x2=\"" +
             fmt(x + 22) + "\" y2=\"" + fmt(y - 4) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
      out += "<text x=\"" + fmt(x + 28) + "\" y=\"" + fmt(y) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" + label + "</text>\n";
      y += 16;
    }
    return out;
  }

  double width_;
  double height_;
  std::string title_;
  std::string x_label_;
  std::string y_label_;
  double x_min_ = 0.0, x_max_ = 1.0, y_min_ = 0.0, y_max_ = 1.0;
  double margin_left_ = 58.0, margin_right_ = 20.0;
  double margin_top_ = 30.0, margin_bottom_ = 46.0;
  std::string body_;
  std::vector<std::pair<std::string, std::string>> legend_;
};

}  // namespace sandbag

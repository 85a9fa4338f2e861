#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "legik/csv.hpp"

namespace legik {

// Minimal standalone SVG line-plot writer: axes box, linear ticks, legend,
// one polyline per series. Deliberately tiny; no external renderer involved.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)),
        ylabel_(std::move(ylabel)) {}

  void add_series(std::string name, std::vector<double> xs,
                  std::vector<double> ys) {
    if (xs.size() != ys.size())
      throw std::invalid_argument("svg series length mismatch");
    series_.push_back({std::move(name), std::move(xs), std::move(ys)});
  }

  bool empty() const {
    for (const auto& s : series_)
      if (!s.xs.empty()) return false;
    return true;
  }

  void write(const std::string& path) const {
    if (empty()) throw std::runtime_error("svg plot has no data: " + path);
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series_) {
      for (double v : s.xs) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
      for (double v : s.ys) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    }
    if (xmax == xmin) { xmax += 1; xmin -= 1; }
    if (ymax == ymin) { ymax += 1; ymin -= 1; }
    double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double W = 720, H = 480, ml = 70, mr = 160, mt = 40, mb = 55;
    const double pw = W - ml - mr, ph = H - mt - mb;
    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write svg: " + path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" << title_ << "</text>\n"
      << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
      double fx = xmin + (xmax - xmin) * i / 5.0;
      double fy = ymin + (ymax - ymin) * i / 5.0;
      f << "<line x1=\"" << X(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << X(fx)
        << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << X(fx) << "\" y=\"" << mt + ph + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << tick(fx) << "</text>\n"
        << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(fy) << "\" x2=\"" << ml
        << "\" y2=\"" << Y(fy) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << Y(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick(fy) << "</text>\n";
    }
    f << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xlabel_ << "</text>\n"
      << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << ylabel_
      << "</text>\n";

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};
    for (std::size_t s = 0; s < series_.size(); ++s) {
      const auto& ser = series_[s];
      const char* col = colors[s % 6];
      f << "<polyline fill=\"none\" stroke=\"" << col
        << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < ser.xs.size(); ++i)
        f << X(ser.xs[i]) << "," << Y(ser.ys[i]) << " ";
      f << "\"/>\n";
      double ly = mt + 16 + 18 * static_cast<double>(s);
      f << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\""
        << ml + pw + 34 << "\" y2=\"" << ly << "\" stroke=\"" << col
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << ser.name
        << "</text>\n";
    }
    f << "</svg>\n";
  }

 private:
  struct Series {
    std::string name;
    std::vector<double> xs, ys;
  };

  static std::string tick(double v) {
    char buf[32];
    double a = std::abs(v);
    if (v == 0)
      std::snprintf(buf, sizeof(buf), "0");
    else if (a >= 1e4 || a < 1e-3)
      std::snprintf(buf, sizeof(buf), "%.2e", v);
    else
      std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
  }

  std::string title_, xlabel_, ylabel_;
  std::vector<Series> series_;
};

}  // namespace legik

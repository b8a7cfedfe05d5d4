#pragma once

// Dependency-free SVG line plots: polyline paths, linear or log-log axes,
// dashed overlay curves, side-by-side panels. Enough for trajectory and
// envelope figures; not a general plotting layer.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraccoop {

struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
  std::string color = "#1f6fb2";
  bool dashed = false;
};

class SvgPlot {
 public:
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;

  void add_series(SvgSeries s) { series_.push_back(std::move(s)); }

  void render(std::ostream& os, double ox, double oy, double w, double h) const {
    const double ml = 62, mr = 14, mt = 30, mb = 42;  // margins
    const double pw = w - ml - mr, ph = h - mt - mb;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series_)
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double px = tx(s.x[i]), py = ty(s.y[i]);
        if (!std::isfinite(px) || !std::isfinite(py)) continue;
        xmin = std::min(xmin, px); xmax = std::max(xmax, px);
        ymin = std::min(ymin, py); ymax = std::max(ymax, py);
      }
    if (xmin > xmax) { xmin = 0; xmax = 1; }
    if (ymin > ymax) { ymin = 0; ymax = 1; }
    if (xmax - xmin < 1e-12) { xmax += 0.5; xmin -= 0.5; }
    if (ymax - ymin < 1e-12) { ymax += 0.5; ymin -= 0.5; }
    const double ypad = 0.04 * (ymax - ymin);
    ymin -= ypad; ymax += ypad;

    auto X = [&](double v) { return ox + ml + (tx(v) - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double v) { return oy + mt + ph - (ty(v) - ymin) / (ymax - ymin) * ph; };

    os << "<g font-family=\"Helvetica,Arial,sans-serif\" font-size=\"12\">\n";
    os << rect(ox + ml, oy + mt, pw, ph);

    for (double t : ticks(xmin, xmax, logx)) {
      const double px = ox + ml + (t - xmin) / (xmax - xmin) * pw;
      os << line(px, oy + mt + ph, px, oy + mt + ph + 5);
      os << text(px, oy + mt + ph + 18, tick_label(t, logx), "middle");
    }
    for (double t : ticks(ymin, ymax, logy)) {
      const double py = oy + mt + ph - (t - ymin) / (ymax - ymin) * ph;
      os << line(ox + ml - 5, py, ox + ml, py);
      os << text(ox + ml - 8, py + 4, tick_label(t, logy), "end");
    }
    os << text(ox + ml + pw / 2, oy + mt + ph + 36, xlabel, "middle");
    os << "<text x=\"" << ox + 16 << "\" y=\"" << oy + mt + ph / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << ox + 16 << " "
       << oy + mt + ph / 2 << ")\">" << escape(ylabel) << "</text>\n";
    os << text(ox + ml + pw / 2, oy + 18, title, "middle");

    double ly = oy + mt + 14;
    for (const auto& s : series_) {
      std::ostringstream pts;
      bool pen_up = true;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double px = tx(s.x[i]), py = ty(s.y[i]);
        if (!std::isfinite(px) || !std::isfinite(py)) { pen_up = true; continue; }
        pts << (pen_up ? "M" : "L") << fmt(X(s.x[i])) << " " << fmt(Y(s.y[i]));
        pen_up = false;
      }
      os << "<path d=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1.4\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
      if (!s.label.empty()) {
        os << "<line x1=\"" << ox + ml + 8 << "\" y1=\"" << ly << "\" x2=\"" << ox + ml + 30
           << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"1.4\""
           << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>";
        os << text(ox + ml + 35, ly + 4, s.label, "start");
        ly += 16;
      }
    }
    os << "</g>\n";
  }

 private:
  std::vector<SvgSeries> series_;

  double tx(double v) const { return logx ? std::log10(v) : v; }
  double ty(double v) const { return logy ? std::log10(v) : v; }

  static std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", v);
    return b;
  }
  static std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '<') o += "&lt;";
      else if (c == '>') o += "&gt;";
      else if (c == '&') o += "&amp;";
      else o += c;
    }
    return o;
  }
  static std::string rect(double x, double y, double w, double h) {
    std::ostringstream os;
    os << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
       << "\" height=\"" << fmt(h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    return os.str();
  }
  static std::string line(double x1, double y1, double x2, double y2) {
    std::ostringstream os;
    os << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
       << "\" y2=\"" << fmt(y2) << "\" stroke=\"#444\"/>\n";
    return os.str();
  }
  static std::string text(double x, double y, const std::string& t, const std::string& anchor) {
    std::ostringstream os;
    os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" text-anchor=\"" << anchor << "\">"
       << escape(t) << "</text>\n";
    return os.str();
  }

  static std::string tick_label(double t, bool log) {
    char b[32];
    if (log) {
      std::snprintf(b, sizeof b, "1e%g", t);
    } else {
      std::snprintf(b, sizeof b, "%.4g", t);
    }
    return b;
  }

  // "nice" tick positions in transformed coordinates
  static std::vector<double> ticks(double lo, double hi, bool log) {
    std::vector<double> out;
    if (log) {
      for (double d = std::ceil(lo); d <= std::floor(hi) + 1e-9; d += 1.0) out.push_back(d);
      if (out.size() > 12) {
        std::vector<double> thin;
        const std::size_t k = (out.size() + 11) / 12;
        for (std::size_t i = 0; i < out.size(); i += k) thin.push_back(out[i]);
        return thin;
      }
      if (!out.empty()) return out;
    }
    const double span = hi - lo;
    double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
    if (span / step > 10.0) step *= 2.0;
    if (span / step > 10.0) step *= 2.5;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step)
      out.push_back(std::fabs(t) < 1e-12 * span ? 0.0 : t);
    return out;
  }
};

/// Lay panels out left to right in a single SVG file.
inline void write_svg_panels(const std::string& path, const std::vector<SvgPlot>& panels,
                             double panel_w = 460, double panel_h = 340) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  const double W = panel_w * static_cast<double>(panels.size()), H = panel_h;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i)
    panels[i].render(os, panel_w * static_cast<double>(i), 0.0, panel_w, panel_h);
  os << "</svg>\n";
}

}  // namespace fraccoop

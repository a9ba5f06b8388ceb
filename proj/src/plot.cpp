#include "jroc/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "jroc/error.hpp"

namespace jroc {

namespace {

constexpr std::array<const char*, 8> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
constexpr double kMarginLeft = 70, kMarginRight = 170, kMarginTop = 40, kMarginBottom = 55;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Frame {
  double x0, y0, w, h;
  PlotRange range;
  double px(double tc) const { return x0 + tc / range.tc_max * w; }
  double py(double mc) const { return y0 + h - mc / range.mc_max * h; }
};

void glyph(std::ostream& os, std::size_t shape, double x, double y, const char* color) {
  const double r = 3.2;
  switch (shape % 4) {
    case 0:
      os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r) << "\" fill=\"" << color
         << "\" fill-opacity=\"0.6\"/>\n";
      break;
    case 1:
      os << "<rect x=\"" << num(x - r) << "\" y=\"" << num(y - r) << "\" width=\"" << num(2 * r)
         << "\" height=\"" << num(2 * r) << "\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
      break;
    case 2:
      os << "<polygon points=\"" << num(x) << ',' << num(y - r - 0.8) << ' ' << num(x - r) << ','
         << num(y + r) << ' ' << num(x + r) << ',' << num(y + r) << "\" fill=\"" << color
         << "\" fill-opacity=\"0.6\"/>\n";
      break;
    default:
      os << "<polygon points=\"" << num(x) << ',' << num(y - r) << ' ' << num(x + r) << ',' << num(y) << ' '
         << num(x) << ',' << num(y + r) << ' ' << num(x - r) << ',' << num(y) << "\" fill=\"" << color
         << "\" fill-opacity=\"0.6\"/>\n";
  }
}

// Clips the line mc = y + slope * (tc - x) to the data rectangle.
std::optional<std::array<double, 4>> clip_isometric(const EvalPoint& p, double alpha, const PlotRange& r) {
  if (alpha == 0) return std::array<double, 4>{p.mean_tc, 0, p.mean_tc, r.mc_max};
  const double s = isometric_slope(alpha);
  if (s == 0) return std::array<double, 4>{0, p.mean_mc, r.tc_max, p.mean_mc};
  const auto mc_at = [&](double tc) { return p.mean_mc + s * (tc - p.mean_tc); };
  const auto tc_at = [&](double mc) { return p.mean_tc + (mc - p.mean_mc) / s; };
  // Negative slope: enters at the top or left edge, leaves at the bottom or right.
  double xa = 0, ya = mc_at(0);
  if (ya > r.mc_max) {
    ya = r.mc_max;
    xa = tc_at(ya);
  }
  double xb = r.tc_max, yb = mc_at(r.tc_max);
  if (yb < 0) {
    yb = 0;
    xb = tc_at(0);
  }
  if (xa > xb) return std::nullopt;
  return std::array<double, 4>{xa, ya, xb, yb};
}

}  // namespace

std::vector<PlotSeries> make_series(std::span<const EvalPoint> points, bool with_hulls) {
  std::vector<PlotSeries> series;
  std::map<std::string, std::size_t> index;
  for (const auto& p : points) {
    auto [it, inserted] = index.emplace(p.model_id, series.size());
    if (inserted) series.push_back({p.model_id, {}, {}});
    series[it->second].points.push_back(p);
  }
  if (with_hulls) {
    for (auto& s : series) s.hull = lower_hull(s.points).vertices;
  }
  return series;
}

PlotRange plot_range(const std::vector<PlotSeries>& series) {
  double tc = 0, mc = 0;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      tc = std::max(tc, p.mean_tc);
      mc = std::max(mc, p.mean_mc);
    }
  }
  return {tc > 0 ? tc * 1.05 : 1.0, mc > 0 ? mc * 1.05 : 1.0};
}

std::string render_plot_svg(const std::vector<PlotSeries>& series, std::span<const double> isometric_alphas,
                            const PlotOptions& options) {
  const Frame f{kMarginLeft, kMarginTop, options.width - kMarginLeft - kMarginRight,
                options.height - kMarginTop - kMarginBottom, plot_range(series)};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
     << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(f.x0 + f.w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(options.title) << "</text>\n";
  os << "<g class=\"axes\" data-tc-max=\"" << tick(f.range.tc_max) << "\" data-mc-max=\"" << tick(f.range.mc_max)
     << "\">\n";
  os << "<rect x=\"" << num(f.x0) << "\" y=\"" << num(f.y0) << "\" width=\"" << num(f.w) << "\" height=\""
     << num(f.h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double tc = f.range.tc_max * i / 5.0;
    const double mc = f.range.mc_max * i / 5.0;
    os << "<line x1=\"" << num(f.px(tc)) << "\" y1=\"" << num(f.y0 + f.h) << "\" x2=\"" << num(f.px(tc))
       << "\" y2=\"" << num(f.y0 + f.h + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(f.px(tc)) << "\" y=\"" << num(f.y0 + f.h + 18)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << tick(tc) << "</text>\n";
    os << "<line x1=\"" << num(f.x0 - 5) << "\" y1=\"" << num(f.py(mc)) << "\" x2=\"" << num(f.x0) << "\" y2=\""
       << num(f.py(mc)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(f.x0 - 8) << "\" y=\"" << num(f.py(mc) + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << tick(mc) << "</text>\n";
  }
  os << "<text x=\"" << num(f.x0 + f.w / 2) << "\" y=\"" << num(f.y0 + f.h + 40)
     << "\" text-anchor=\"middle\" font-size=\"13\">TC</text>\n";
  os << "<text x=\"18\" y=\"" << num(f.y0 + f.h / 2) << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
     << num(f.y0 + f.h / 2) << ")\">MC</text>\n";
  os << "</g>\n";

  std::vector<EvalPoint> pooled;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % kColors.size()];
    os << "<g class=\"series\" data-model=\"" << escape(series[s].model_id) << "\">\n";
    for (const auto& p : series[s].points) glyph(os, s, f.px(p.mean_tc), f.py(p.mean_mc), color);
    if (!series[s].hull.empty()) {
      os << "<polyline class=\"hull\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < series[s].hull.size(); ++i) {
        if (i) os << ' ';
        os << num(f.px(series[s].hull[i].mean_tc)) << ',' << num(f.py(series[s].hull[i].mean_mc));
      }
      os << "\"/>\n";
    }
    os << "</g>\n";
    pooled.insert(pooled.end(), series[s].points.begin(), series[s].points.end());
  }

  if (!pooled.empty()) {
    for (double alpha : isometric_alphas) {
      const auto& best = select_best(pooled, alpha);
      const auto seg = clip_isometric(best, alpha, f.range);
      if (!seg) continue;
      os << "<g class=\"isometric\" data-alpha=\"" << tick(alpha) << "\" data-slope=\""
         << (alpha == 0 ? std::string("-inf") : tick(isometric_slope(alpha))) << "\">\n";
      os << "<line x1=\"" << num(f.px((*seg)[0])) << "\" y1=\"" << num(f.py((*seg)[1])) << "\" x2=\""
         << num(f.px((*seg)[2])) << "\" y2=\"" << num(f.py((*seg)[3]))
         << "\" stroke=\"gray\" stroke-dasharray=\"5,3\"/>\n";
      os << "<text x=\"" << num(f.px(best.mean_tc) + 6) << "\" y=\"" << num(f.py(best.mean_mc) - 6)
         << "\" font-size=\"10\" fill=\"gray\">&#945;=" << tick(alpha) << "</text>\n";
      os << "</g>\n";
    }
  }

  os << "<g class=\"legend\">\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double y = f.y0 + 12 + 18.0 * static_cast<double>(s);
    glyph(os, s, f.x0 + f.w + 18, y, kColors[s % kColors.size()]);
    os << "<text x=\"" << num(f.x0 + f.w + 28) << "\" y=\"" << num(y + 4) << "\" font-size=\"11\">"
       << escape(series[s].model_id) << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void render_plot(const std::vector<PlotSeries>& series, std::span<const double> isometric_alphas,
                 const std::filesystem::path& out, const PlotOptions& options) {
  const auto svg = render_plot_svg(series, isometric_alphas, options);
  std::ofstream file(out, std::ios::binary);
  if (!file) throw IoError("cannot write plot " + out.string());
  file << svg;
  if (!file) throw IoError("failed writing plot " + out.string());
}

}  // namespace jroc

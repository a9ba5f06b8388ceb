#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "jroc/hull.hpp"

namespace jroc {

// One model's cloud on a JROC plot and, optionally, its hull.
struct PlotSeries {
  std::string model_id;
  std::vector<EvalPoint> points;
  std::vector<EvalPoint> hull;
};

// Groups points by model_id (first-appearance order) and computes each hull.
std::vector<PlotSeries> make_series(std::span<const EvalPoint> points, bool with_hulls = true);

struct PlotOptions {
  std::string title = "JROC";
  int width = 720;
  int height = 540;
};

// Data ranges shown on the axes: [0, max * 1.05] each; 1 when the max is 0.
struct PlotRange {
  double tc_max = 1;
  double mc_max = 1;
};
PlotRange plot_range(const std::vector<PlotSeries>& series);

// SVG with TC on x and MC on y. Each isometric passes through the point
// chosen by select_best over every series at that alpha. Output bytes depend
// only on the inputs.
std::string render_plot_svg(const std::vector<PlotSeries>& series, std::span<const double> isometric_alphas,
                            const PlotOptions& options = {});

// Throws IoError if the file cannot be written.
void render_plot(const std::vector<PlotSeries>& series, std::span<const double> isometric_alphas,
                 const std::filesystem::path& out, const PlotOptions& options = {});

}  // namespace jroc

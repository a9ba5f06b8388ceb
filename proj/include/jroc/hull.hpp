#pragma once

#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "jroc/lattice.hpp"

namespace jroc {

// Lower-left convex chain of a TC/MC cloud: exactly the points that minimise
// JC for some alpha in [0, 1]. Vertices run by strictly increasing mean_tc
// and strictly decreasing mean_mc.
struct Hull {
  std::vector<EvalPoint> vertices;
};

// An alpha interval and the point with minimal JC inside it. Consecutive
// regions share their boundary alpha.
struct OperatingRegion {
  double alpha_lo = 0;
  double alpha_hi = 1;
  EvalPoint best;
};

// Throws ValidationError on empty input. Coincident points collapse to the one
// with the smaller model_id, then the smaller bitmask.
Hull lower_hull(std::span<const EvalPoint> points);

// Point minimising alpha*mc + (1-alpha)*tc. Ties: lower mean_tc, then lower
// model_id, then lower bitmask. At alpha = 0 the order is (tc, mc, ...).
const EvalPoint& select_best(std::span<const EvalPoint> points, double alpha);

// Slope of an equal-JC line in TC/MC space: -(1 - alpha) / alpha.
double isometric_slope(double alpha);

// Alpha at which two hull vertices have equal JC (a has the lower TC).
double crossover_alpha(const EvalPoint& a, const EvalPoint& b);

// Regions of the pooled hull of every cloud, covering [0, 1] without gaps.
std::vector<OperatingRegion> dominance_regions(const std::vector<std::vector<EvalPoint>>& clouds);

nlohmann::json to_json(const EvalPoint& p);
nlohmann::json to_json(const Hull& hull);
nlohmann::json to_json(const std::vector<OperatingRegion>& regions);

}  // namespace jroc

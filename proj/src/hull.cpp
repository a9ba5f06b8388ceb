#include "jroc/hull.hpp"

#include <algorithm>
#include <tuple>

#include <nlohmann/json.hpp>

#include "jroc/error.hpp"

namespace jroc {

namespace {

auto coordinate_key(const EvalPoint& p) {
  return std::tie(p.mean_tc, p.mean_mc, p.model_id);
}

bool coordinate_less(const EvalPoint& a, const EvalPoint& b) {
  if (coordinate_key(a) != coordinate_key(b)) return coordinate_key(a) < coordinate_key(b);
  return a.cfg.bits() < b.cfg.bits();
}

double cross(const EvalPoint& o, const EvalPoint& a, const EvalPoint& b) {
  return (a.mean_tc - o.mean_tc) * (b.mean_mc - o.mean_mc) - (a.mean_mc - o.mean_mc) * (b.mean_tc - o.mean_tc);
}

}  // namespace

Hull lower_hull(std::span<const EvalPoint> points) {
  if (points.empty()) throw ValidationError("hull of an empty point set");
  std::vector<EvalPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), coordinate_less);
  // Equal TC: only the lowest MC can be optimal.
  sorted.erase(std::unique(sorted.begin(), sorted.end(),
                           [](const EvalPoint& a, const EvalPoint& b) { return a.mean_tc == b.mean_tc; }),
               sorted.end());

  std::vector<EvalPoint> chain;
  for (auto& p : sorted) {
    while (chain.size() >= 2 && cross(chain[chain.size() - 2], chain.back(), p) <= 0) chain.pop_back();
    chain.push_back(std::move(p));
  }
  // Past the lowest-MC vertex the chain climbs (or runs flat); none of those
  // points is strictly optimal for any alpha.
  const auto lowest = std::min_element(chain.begin(), chain.end(), [](const EvalPoint& a, const EvalPoint& b) {
    return a.mean_mc < b.mean_mc;
  });
  chain.erase(lowest + 1, chain.end());
  return Hull{std::move(chain)};
}

const EvalPoint& select_best(std::span<const EvalPoint> points, double alpha) {
  if (points.empty()) throw ValidationError("select_best over an empty point set");
  if (!(alpha >= 0 && alpha <= 1)) throw ValidationError("alpha must lie in [0, 1]");
  const auto better = [alpha](const EvalPoint& a, const EvalPoint& b) {
    const double ka = alpha == 0 ? a.mean_tc : a.jc(alpha);
    const double kb = alpha == 0 ? b.mean_tc : b.jc(alpha);
    if (ka != kb) return ka < kb;
    if (a.mean_tc != b.mean_tc) return a.mean_tc < b.mean_tc;
    if (alpha == 0 && a.mean_mc != b.mean_mc) return a.mean_mc < b.mean_mc;
    if (a.model_id != b.model_id) return a.model_id < b.model_id;
    return a.cfg.bits() < b.cfg.bits();
  };
  const EvalPoint* best = &points[0];
  for (const auto& p : points.subspan(1)) {
    if (better(p, *best)) best = &p;
  }
  return *best;
}

double isometric_slope(double alpha) {
  if (!(alpha > 0 && alpha <= 1)) throw ValidationError("isometric slope needs alpha in (0, 1]");
  return -(1 - alpha) / alpha;
}

double crossover_alpha(const EvalPoint& a, const EvalPoint& b) {
  const double dtc = b.mean_tc - a.mean_tc;
  const double dmc = a.mean_mc - b.mean_mc;
  if (!(dtc + dmc != 0)) throw ValidationError("coincident points have no crossover");
  return dtc / (dmc + dtc);
}

std::vector<OperatingRegion> dominance_regions(const std::vector<std::vector<EvalPoint>>& clouds) {
  std::vector<EvalPoint> pooled;
  for (const auto& cloud : clouds) {
    if (cloud.empty()) throw ValidationError("dominance regions need non-empty clouds");
    pooled.insert(pooled.end(), cloud.begin(), cloud.end());
  }
  if (pooled.empty()) throw ValidationError("dominance regions need at least one cloud");
  const auto hull = lower_hull(pooled);
  std::vector<OperatingRegion> regions;
  double lo = 0;
  for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
    const double hi =
        i + 1 < hull.vertices.size() ? crossover_alpha(hull.vertices[i], hull.vertices[i + 1]) : 1.0;
    regions.push_back({lo, hi, hull.vertices[i]});
    lo = hi;
  }
  return regions;
}

nlohmann::json to_json(const EvalPoint& p) {
  return {{"model_id", p.model_id},
          {"cfg", p.cfg.to_bit_string()},
          {"popcount", p.cfg.count()},
          {"mean_tc", p.mean_tc},
          {"mean_mc", p.mean_mc}};
}

nlohmann::json to_json(const Hull& hull) {
  auto out = nlohmann::json::array();
  for (const auto& v : hull.vertices) out.push_back(to_json(v));
  return out;
}

nlohmann::json to_json(const std::vector<OperatingRegion>& regions) {
  auto out = nlohmann::json::array();
  for (const auto& r : regions) {
    out.push_back({{"alpha_lo", r.alpha_lo}, {"alpha_hi", r.alpha_hi}, {"best", to_json(r.best)}});
  }
  return out;
}

}  // namespace jroc

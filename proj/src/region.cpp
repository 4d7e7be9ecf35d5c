#include <algorithm>
#include <cmath>
#include <string>

#include "lcf/error.hpp"
#include "lcf/rate_analysis.hpp"
#include "parallel.hpp"

namespace lcf {
namespace {

double cross(const RatePoint& o, const RatePoint& a, const RatePoint& b) {
  return (a.r12 - o.r12) * (b.r21 - o.r21) - (a.r21 - o.r21) * (b.r12 - o.r12);
}

void check_grid(std::span<const double> grid, const char* name) {
  if (grid.empty()) throw InvalidInput(std::string(name) + " grid is empty");
  for (double v : grid) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidInput(std::string(name) + " grid values must lie in [0, 1]");
    }
  }
}

// Comprehensive closure: every vertex with its axis projections, plus the origin.
std::vector<RatePoint> closure_points(std::span<const RateResult> points) {
  std::vector<RatePoint> pts{{0.0, 0.0}};
  for (const RateResult& r : points) {
    for (const RatePoint& v : polytope_vertices(r)) {
      pts.push_back(v);
      pts.push_back({v.r12, 0.0});
      pts.push_back({0.0, v.r21});
    }
  }
  return pts;
}

}  // namespace

std::vector<RatePoint> polytope_vertices(const RateResult& r) {
  if (!(r.r12 + r.r21 > r.sum_cap)) return {{r.r12, r.r21}};
  return {{r.r12, std::max(0.0, r.sum_cap - r.r12)}, {std::max(0.0, r.sum_cap - r.r21), r.r21}};
}

std::vector<RatePoint> convex_hull(std::vector<RatePoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const RatePoint& a, const RatePoint& b) {
    return a.r12 < b.r12 || (a.r12 == b.r12 && a.r21 < b.r21);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const RatePoint& a, const RatePoint& b) {
                          return a.r12 == b.r12 && a.r21 == b.r21;
                        }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<RatePoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const RatePoint& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<double> uniform_grid(std::size_t n) {
  if (n == 0) throw InvalidInput("grid size must be at least 1");
  if (n == 1) return {0.5};
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return g;
}

std::vector<RateResult> sweep_grid(const ChannelConfig& cfg, Scheme scheme,
                                   std::span<const double> alphas, std::span<const double> nus,
                                   unsigned workers) {
  cfg.validate();
  if (scheme == Scheme::kAf) return {af_rates(cfg)};
  check_grid(alphas, "alpha");
  const bool layered = scheme == Scheme::kLcf2;
  if (layered) check_grid(nus, "nu");
  const std::size_t per_alpha = layered ? nus.size() : 1;
  std::vector<RateResult> out(alphas.size() * per_alpha);
  parallel_blocks(alphas.size(), workers, [&](std::size_t a) {
    for (std::size_t j = 0; j < per_alpha; ++j) {
      out[a * per_alpha + j] = scheme_rates(scheme, cfg, alphas[a], layered ? nus[j] : 1.0);
    }
  });
  return out;
}

RateRegion optimize_region(const ChannelConfig& cfg, Scheme scheme, std::span<const double> etas,
                           std::span<const double> alphas, std::span<const double> nus,
                           unsigned workers) {
  check_grid(etas, "eta");
  const std::vector<RateResult> grid = sweep_grid(cfg, scheme, alphas, nus, workers);
  RateRegion region;
  region.scheme = scheme;
  region.etas.assign(etas.begin(), etas.end());
  std::vector<RatePoint> hull_input{{0.0, 0.0}};
  double max12 = 0.0;
  double max21 = 0.0;
  for (double eta : etas) {
    RateResult best = grid.front();
    double best_value = -1.0;
    for (const RateResult& r : grid) {
      for (const RatePoint& v : polytope_vertices(r)) {
        const double value = eta * v.r12 + (1.0 - eta) * v.r21;
        if (value > best_value) {
          best_value = value;
          best = r;
          best.r12 = v.r12;
          best.r21 = v.r21;
        }
      }
    }
    region.points.push_back(best);
    hull_input.push_back({best.r12, best.r21});
    max12 = std::max(max12, best.r12);
    max21 = std::max(max21, best.r21);
  }
  hull_input.push_back({max12, 0.0});
  hull_input.push_back({0.0, max21});
  region.hull = convex_hull(std::move(hull_input));
  return region;
}

double equal_rate(std::span<const RateResult> points) {
  const std::vector<RatePoint> hull = convex_hull(closure_points(points));
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const RatePoint& a = hull[i];
    const RatePoint& b = hull[(i + 1) % hull.size()];
    const double da = a.r12 - a.r21;
    const double db = b.r12 - b.r21;
    if (da == 0.0) best = std::max(best, a.r12);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double t = da / (da - db);
      best = std::max(best, a.r12 + t * (b.r12 - a.r12));
    }
  }
  return best;
}

double equal_rate(const ChannelConfig& cfg, Scheme scheme, std::span<const double> alphas,
                  std::span<const double> nus, unsigned workers) {
  const std::vector<RateResult> grid = sweep_grid(cfg, scheme, alphas, nus, workers);
  return equal_rate(grid);
}

std::vector<EqualRatePoint> equal_rate_curve(std::span<const double> snr_db, Scheme scheme,
                                             std::span<const double> alphas,
                                             std::span<const double> nus, unsigned workers) {
  std::vector<EqualRatePoint> curve;
  curve.reserve(snr_db.size());
  for (double db : snr_db) {
    const ChannelConfig cfg = ChannelConfig::symmetric(db_to_linear(db));
    curve.push_back({db, equal_rate(cfg, scheme, alphas, nus, workers)});
  }
  return curve;
}

}  // namespace lcf

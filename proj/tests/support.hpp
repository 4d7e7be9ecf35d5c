#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "lcf/lattice.hpp"
#include "lcf/random.hpp"

namespace lcf::test {

inline std::vector<double> gaussian_vector(Rng& rng, std::size_t n, double sd = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = sd * rng.normal();
  return v;
}

inline std::vector<double> uniform_vector(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

/// Rejection threshold at level 0.01 (c = 1.6276).
inline double ks_critical_001(std::size_t n, std::size_t m) {
  return 1.6276 * std::sqrt(double(n + m) / (double(n) * double(m)));
}

inline double variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / double(v.size());
}

// Walks the integer box [lo_i, lo_i + width) in every coordinate.
inline void for_each_in_box(const std::vector<long>& lo, long width,
                     const std::function<void(const std::vector<long>&)>& visit) {
  std::vector<long> p(lo);
  const std::size_t n = lo.size();
  while (true) {
    visit(p);
    std::size_t i = 0;
    while (i < n && ++p[i] == lo[i] + width) {
      p[i] = lo[i];
      ++i;
    }
    if (i == n) return;
  }
}

// Best distance over every lattice point in a generous box around x.
inline double brute_force_distance(const LatticeSpec& l, const std::vector<double>& x) {
  const std::size_t n = l.dimension;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] / l.scale;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& p) {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d += (p[i] - y[i]) * (p[i] - y[i]);
    best = std::min(best, d);
  };
  const bool e8 = l.family == LatticeFamily::kE8;
  const long radius = e8 ? 1 : 3;
  for (double shift : e8 ? std::vector<double>{0.0, 0.5} : std::vector<double>{0.0}) {
    std::vector<long> lo(n);
    for (std::size_t i = 0; i < n; ++i) lo[i] = long(std::floor(y[i] - shift)) - radius;
    for_each_in_box(lo, 2 * radius + 2, [&](const std::vector<long>& c) {
      long sum = 0;
      for (long v : c) sum += v;
      if (l.family != LatticeFamily::kIntegerZn && (sum % 2) != 0) return;
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = double(c[i]) + shift;
      consider(p);
    });
  }
  return best * l.scale * l.scale;
}

inline bool is_lattice_point(const LatticeSpec& l, const std::vector<double>& p) {
  return max_abs_diff(nearest_point(l, p), p) < 1e-9;
}

}  // namespace lcf::test

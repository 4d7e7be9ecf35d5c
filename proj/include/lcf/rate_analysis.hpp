#pragma once

// Closed-form achievable rates for the lattice schemes and the AF/DF/cut-set
// baselines, weighted-sum region optimization, equal-rate points and the
// minimal distortions of the analog (Wyner-Ziv) view.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lcf/schemes.hpp"
#include "lcf/twrc_model.hpp"

namespace lcf {

/// One parameter point. Rates are bits per channel use. A point is the
/// polytope {r12' <= r12, r21' <= r21, r12' + r21' <= sum_cap}; only DF has a
/// finite sum cap.
struct RateResult {
  double r12 = 0.0;
  double r21 = 0.0;
  double snr_1to2 = 0.0;
  double snr_2to1 = 0.0;
  double alpha_used = 0.0;
  double nu_used = 1.0;
  Scheme scheme = Scheme::kLcf1;
  double sum_cap = std::numeric_limits<double>::infinity();
  bool relabeled = false;
};

RateResult lcf1_rates(const ChannelConfig& cfg, double alpha);
RateResult lcf2_rates(const ChannelConfig& cfg, double alpha, double nu);
/// Two-hop amplify-and-forward with equal phases.
RateResult af_rates(const ChannelConfig& cfg);
RateResult df_rates(const ChannelConfig& cfg, double alpha);
/// Cut-set bound for a fixed time split.
RateResult outer_bound(const ChannelConfig& cfg, double alpha);

/// Dispatch; nu is ignored by every scheme but LCF2 and alpha by AF.
RateResult scheme_rates(Scheme scheme, const ChannelConfig& cfg, double alpha, double nu);

// ---------------------------------------------------------------------------
// Regions

struct RatePoint {
  double r12 = 0.0;
  double r21 = 0.0;
};

/// Pareto vertices of the point's polytope (one or two points).
std::vector<RatePoint> polytope_vertices(const RateResult& result);

/// Convex hull, counterclockwise from the lowest-leftmost point, collinear
/// points dropped.
std::vector<RatePoint> convex_hull(std::vector<RatePoint> points);

struct GridSpec {
  std::size_t alpha = 201;
  std::size_t nu = 201;
  std::size_t eta = 101;
};

/// n uniform points on [0, 1]; a single point is 0.5.
std::vector<double> uniform_grid(std::size_t n);

struct RateRegion {
  Scheme scheme = Scheme::kLcf1;
  std::vector<double> etas;
  /// points[k] maximizes eta r12 + (1 - eta) r21 for etas[k]; r12/r21 hold
  /// the maximizing polytope vertex.
  std::vector<RateResult> points;
  /// Hull of the maximizers, the origin and the axis intercepts.
  std::vector<RatePoint> hull;
};

RateRegion optimize_region(const ChannelConfig& cfg, Scheme scheme, std::span<const double> etas,
                           std::span<const double> alphas, std::span<const double> nus,
                           unsigned workers = 1);

/// Every grid point of the scheme (AF: the single alpha = 1/2 point).
std::vector<RateResult> sweep_grid(const ChannelConfig& cfg, Scheme scheme,
                                   std::span<const double> alphas, std::span<const double> nus,
                                   unsigned workers = 1);

/// Largest R with (R, R) in the time-sharing hull of the given points.
double equal_rate(std::span<const RateResult> points);
double equal_rate(const ChannelConfig& cfg, Scheme scheme, std::span<const double> alphas,
                  std::span<const double> nus, unsigned workers = 1);

struct EqualRatePoint {
  double snr_db = 0.0;
  double rate = 0.0;
};

/// Symmetric unit-gain, unit-noise channels at each SNR.
std::vector<EqualRatePoint> equal_rate_curve(std::span<const double> snr_db, Scheme scheme,
                                             std::span<const double> alphas,
                                             std::span<const double> nus, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Distortions

struct DistortionResult {
  double d1_min = 0.0;
  double d2_min = 0.0;
  double gamma1_star = 0.0;
  double gamma2_star = 0.0;
  double beta_used = 1.0;
  /// (1/2) log2(sigma^2_U / D) at the terminal with the worse side information
  /// (LCF1) or the common-only terminal (LCF2), bits per source sample.
  double r_wz = 0.0;
  bool relabeled = false;
  std::optional<double> gamma1_printed;
  std::optional<double> gamma2_printed;
};

/// D_i = sigma^2_Ui sigma^2(L1)_min / (beta^2 sigma^2_Ui + sigma^2(L1)_min).
/// Throws DegenerateParameters for alpha in {0, 1}.
DistortionResult lcf1_distortions(const ChannelConfig& cfg, double alpha, double beta);

/// Each terminal against its own layer. Throws DegenerateParameters for
/// alpha in {0, 1} or nu = 0.
DistortionResult lcf2_distortions(const ChannelConfig& cfg, double alpha, double nu, double beta);

/// alpha log2(sigma^2_U / D) - (1 - alpha) log2(1 + min_i h_i^2 PR / sigma_i^2)
/// at the worse-side-information terminal; zero for the LCF1 optimum.
double wyner_ziv_residual(const ChannelConfig& cfg, double alpha, const DistortionResult& d);

// ---------------------------------------------------------------------------

/// Limiting expressions for symmetric channels, used as anchors.
struct AsymptoticReferences {
  double r_df_low = 0.0;
  double r_df_high = 0.0;
  double r_lcf1_low = 0.0;
  double r_lcf1_high = 0.0;
};

AsymptoticReferences asymptotic_references(double snr_linear);

}  // namespace lcf

#include "lcf/rate_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lcf/error.hpp"

namespace lcf {
namespace {

// (scale / 2) log2(1 + snr)
double half_log(double scale, double snr) {
  if (!(scale > 0.0) || !(snr > 0.0)) return 0.0;
  return 0.5 * scale * std::log1p(snr) / std::numbers::ln2;
}

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput(std::string(name) + " must lie in [0, 1]");
}

RateResult zero_rates(Scheme scheme, double alpha, double nu) {
  RateResult r;
  r.scheme = scheme;
  r.alpha_used = alpha;
  r.nu_used = nu;
  return r;
}

}  // namespace

RateResult lcf1_rates(const ChannelConfig& cfg, double alpha) {
  cfg.validate();
  check_unit(alpha, "alpha");
  RateResult r = zero_rates(Scheme::kLcf1, alpha, 1.0);
  r.relabeled = cfg.h2 * cfg.h2 * cfg.P2 > cfg.h1 * cfg.h1 * cfg.P1;
  if (alpha == 0.0 || alpha == 1.0) return r;
  const double bracket =
      std::expm1((1.0 - alpha) / alpha * std::log1p(std::min(cfg.bc_snr1(), cfg.bc_snr2())));
  if (!(bracket > 0.0)) return r;
  const double added = std::max(cfg.sigma2_U1(), cfg.sigma2_U2()) / bracket;
  r.snr_1to2 = cfg.h1 * cfg.h1 * cfg.P1 / (cfg.sigma_R2 + added);
  r.snr_2to1 = cfg.h2 * cfg.h2 * cfg.P2 / (cfg.sigma_R2 + added);
  r.r12 = half_log(alpha, r.snr_1to2);
  r.r21 = half_log(alpha, r.snr_2to1);
  return r;
}

RateResult lcf2_rates(const ChannelConfig& cfg, double alpha, double nu) {
  cfg.validate();
  check_unit(alpha, "alpha");
  check_unit(nu, "nu");
  RateResult r = zero_rates(Scheme::kLcf2, alpha, nu);
  const OptimalParams p = optimal_params_lcf2(cfg, alpha, nu, 1.0);
  r.relabeled = p.relabeled;
  if (p.degenerate) return r;
  const double s1 = p.sigma2_lambda1_min;
  const double s0 = *p.sigma2_lambda0_min;
  // The refined terminal receives the other's message through L0.
  const double into_t2 = p.refined_terminal == 2 ? s0 : s1;
  const double into_t1 = p.refined_terminal == 1 ? s0 : s1;
  const EndToEndSnr snr = end_to_end_snr(cfg, 1.0, into_t2, into_t1);
  r.snr_1to2 = snr.snr_1to2;
  r.snr_2to1 = snr.snr_2to1;
  r.r12 = half_log(alpha, r.snr_1to2);
  r.r21 = half_log(alpha, r.snr_2to1);
  return r;
}

RateResult af_rates(const ChannelConfig& cfg) {
  cfg.validate();
  RateResult r = zero_rates(Scheme::kAf, 0.5, 1.0);
  const double a1 = cfg.h1 * cfg.h1;
  const double a2 = cfg.h2 * cfg.h2;
  const double g2 = cfg.PR / (a1 * cfg.P1 + a2 * cfg.P2 + cfg.sigma_R2);
  // a1 * a2 first, so swapping the terminals gives bit-identical results.
  const double both = g2 * (a1 * a2);
  r.snr_1to2 = both * cfg.P1 / (g2 * a2 * cfg.sigma_R2 + cfg.sigma_2_2);
  r.snr_2to1 = both * cfg.P2 / (g2 * a1 * cfg.sigma_R2 + cfg.sigma_1_2);
  r.r12 = half_log(0.5, r.snr_1to2);
  r.r21 = half_log(0.5, r.snr_2to1);
  return r;
}

namespace {

RateResult cut_set(const ChannelConfig& cfg, double alpha, Scheme scheme) {
  cfg.validate();
  check_unit(alpha, "alpha");
  RateResult r = zero_rates(scheme, alpha, 1.0);
  const double a1 = cfg.h1 * cfg.h1;
  const double a2 = cfg.h2 * cfg.h2;
  r.snr_1to2 = a1 * cfg.P1 / cfg.sigma_R2;
  r.snr_2to1 = a2 * cfg.P2 / cfg.sigma_R2;
  r.r12 = std::min(half_log(alpha, r.snr_1to2), half_log(1.0 - alpha, cfg.bc_snr2()));
  r.r21 = std::min(half_log(alpha, r.snr_2to1), half_log(1.0 - alpha, cfg.bc_snr1()));
  return r;
}

}  // namespace

RateResult df_rates(const ChannelConfig& cfg, double alpha) {
  RateResult r = cut_set(cfg, alpha, Scheme::kDf);
  r.sum_cap = half_log(alpha, (cfg.h1 * cfg.h1 * cfg.P1 + cfg.h2 * cfg.h2 * cfg.P2) / cfg.sigma_R2);
  return r;
}

RateResult outer_bound(const ChannelConfig& cfg, double alpha) {
  return cut_set(cfg, alpha, Scheme::kOuter);
}

RateResult scheme_rates(Scheme scheme, const ChannelConfig& cfg, double alpha, double nu) {
  switch (scheme) {
    case Scheme::kLcf1: return lcf1_rates(cfg, alpha);
    case Scheme::kLcf2: return lcf2_rates(cfg, alpha, nu);
    case Scheme::kAf: return af_rates(cfg);
    case Scheme::kDf: return df_rates(cfg, alpha);
    case Scheme::kOuter: return outer_bound(cfg, alpha);
  }
  throw InvalidInput("unknown scheme");
}

// ---------------------------------------------------------------------------

DistortionResult lcf1_distortions(const ChannelConfig& cfg, double alpha, double beta) {
  const OptimalParams p = optimal_params_lcf1(cfg, alpha, beta);
  if (p.degenerate) throw DegenerateParameters("alpha must lie strictly inside (0, 1)");
  const double s = p.sigma2_lambda1_min;
  const double b2 = beta * beta;
  const double u1 = cfg.sigma2_U1();
  const double u2 = cfg.sigma2_U2();
  DistortionResult d;
  d.d1_min = u1 * s / (b2 * u1 + s);
  d.d2_min = u2 * s / (b2 * u2 + s);
  d.gamma1_star = p.gamma1_star;
  d.gamma2_star = p.gamma2_star;
  d.beta_used = beta;
  d.relabeled = p.relabeled;
  const bool worse_is_2 = u2 >= u1;
  d.r_wz = 0.5 * std::log2(worse_is_2 ? u2 / d.d2_min : u1 / d.d1_min);
  return d;
}

DistortionResult lcf2_distortions(const ChannelConfig& cfg, double alpha, double nu,
                                  double beta) {
  const OptimalParams p = optimal_params_lcf2(cfg, alpha, nu, beta);
  if (p.degenerate) {
    throw DegenerateParameters("alpha must lie strictly inside (0, 1) and nu must be positive");
  }
  const double s1 = p.sigma2_lambda1_min;
  const double s0 = *p.sigma2_lambda0_min;
  const double b2 = beta * beta;
  const double u1 = cfg.sigma2_U1();
  const double u2 = cfg.sigma2_U2();
  const double l1 = p.refined_terminal == 1 ? s0 : s1;
  const double l2 = p.refined_terminal == 2 ? s0 : s1;
  DistortionResult d;
  d.d1_min = u1 * l1 / (b2 * u1 + l1);
  d.d2_min = u2 * l2 / (b2 * u2 + l2);
  d.gamma1_star = p.gamma1_star;
  d.gamma2_star = p.gamma2_star;
  d.gamma1_printed = p.gamma1_printed;
  d.gamma2_printed = p.gamma2_printed;
  d.beta_used = beta;
  d.relabeled = p.relabeled;
  d.r_wz = p.refined_terminal == 1 ? 0.5 * std::log2(u2 / d.d2_min) : 0.5 * std::log2(u1 / d.d1_min);
  return d;
}

double wyner_ziv_residual(const ChannelConfig& cfg, double alpha, const DistortionResult& d) {
  const double u1 = cfg.sigma2_U1();
  const double u2 = cfg.sigma2_U2();
  const double ratio = u2 >= u1 ? u2 / d.d2_min : u1 / d.d1_min;
  return alpha * std::log2(ratio) -
         (1.0 - alpha) * std::log2(1.0 + std::min(cfg.bc_snr1(), cfg.bc_snr2()));
}

AsymptoticReferences asymptotic_references(double snr) {
  if (!(snr > 0.0)) throw InvalidInput("snr must be positive");
  const double root = std::sqrt(snr);
  const double root1 = std::sqrt(snr + 1.0);
  AsymptoticReferences a;
  a.r_df_low = snr / 4.0;
  a.r_df_high = std::log2(snr) / 6.0;
  a.r_lcf1_low = ((root1 - 1.0) + (snr - 2.0 * root + 2.0) * root) * snr * snr /
                 (2.0 * (root1 - 1.0) + root);
  a.r_lcf1_high = 0.25 * (std::log2(snr) - 1.0);
  return a;
}

}  // namespace lcf

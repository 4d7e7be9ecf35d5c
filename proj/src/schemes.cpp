#include "lcf/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lcf/error.hpp"
#include "parallel.hpp"

namespace lcf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
}

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidInput("beta must be positive");
}

// Chunks of one lattice dimension; the dither is either one vector or one per chunk.
struct Chunking {
  std::size_t dim = 1;
  std::size_t count = 0;
  bool shared_dither = true;

  std::span<const double> dither(std::span<const double> t, std::size_t c) const {
    return shared_dither ? t : t.subspan(c * dim, dim);
  }
};

Chunking chunking(const LatticeSpec& lattice, std::size_t length, std::size_t dither_length) {
  const std::size_t dim = lattice.dimension;
  if (length % dim != 0) {
    throw InvalidInput("signal length " + std::to_string(length) +
                       " is not a multiple of the lattice dimension " + std::to_string(dim));
  }
  Chunking ch{dim, length / dim, true};
  if (dither_length == dim) return ch;
  if (dither_length == length) {
    ch.shared_dither = false;
    return ch;
  }
  throw InvalidInput("dither length " + std::to_string(dither_length) +
                     " matches neither the lattice dimension nor the signal");
}

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InvalidInput(std::string(what) + " length mismatch: " + std::to_string(a) + " vs " +
                       std::to_string(b));
  }
}

void require_levels(const NestedChain& chain, int levels) {
  chain.validate();
  if (chain.levels != levels) {
    throw InvalidInput("expected a " + std::to_string(levels) + "-level chain");
  }
}

// gamma ((w) mod L2) over every chunk, where w = lhs - t - beta s.
std::vector<double> modulo_decode(std::span<const double> lhs, std::span<const double> side,
                                  std::span<const double> dither, double beta, double gamma,
                                  const LatticeSpec& coarse) {
  require_same(lhs.size(), side.size(), "side information");
  const Chunking ch = chunking(coarse, lhs.size(), dither.size());
  std::vector<double> out(lhs.size());
  std::vector<double> w(ch.dim);
  for (std::size_t c = 0; c < ch.count; ++c) {
    const auto t = ch.dither(dither, c);
    const std::size_t off = c * ch.dim;
    for (std::size_t i = 0; i < ch.dim; ++i) w[i] = lhs[off + i] - t[i] - beta * side[off + i];
    mod_lattice(coarse, w, std::span<double>(out.data() + off, ch.dim));
    for (std::size_t i = 0; i < ch.dim; ++i) out[off + i] *= gamma;
  }
  return out;
}

double gamma_star(double beta, double sigma2_u, double sigma2_layer) {
  return beta * sigma2_u / (beta * beta * sigma2_u + sigma2_layer);
}

// T1 decodes the refinement layer: the stronger broadcast receiver, with ties
// going to the stronger MAC-phase signal.
bool refinement_goes_to_t2(const ChannelConfig& cfg) {
  const double b1 = cfg.bc_snr1();
  const double b2 = cfg.bc_snr2();
  if (b1 != b2) return b2 > b1;
  return cfg.h2 * cfg.h2 * cfg.P2 > cfg.h1 * cfg.h1 * cfg.P1;
}

OptimalParams degenerate_params(double beta, bool layered) {
  OptimalParams p;
  p.sigma2_lambda1_min = kInf;
  if (layered) p.sigma2_lambda0_min = kInf;
  p.beta = beta;
  p.degenerate = true;
  return p;
}

unsigned ceil_ratio(double ratio) {
  const double k = std::ceil(std::sqrt(ratio) - 1e-12);
  if (!(k < 4.0e9)) throw InfeasibleError("required nesting ratio is too large");
  return std::max(1u, static_cast<unsigned>(k));
}

// ---------------------------------------------------------------------------
// Simulation accumulators

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  void merge(const Moments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
  }
  double variance() const {
    if (n == 0) return 0.0;
    const double mean = sum / static_cast<double>(n);
    return sum_sq / static_cast<double>(n) - mean * mean;
  }
};

struct TerminalAcc {
  Moments z_clean;
  Moments z_all;
  Moments err_clean;
  std::uint64_t overloads = 0;
  std::uint64_t vectors = 0;
  double max_residual = 0.0;

  void merge(const TerminalAcc& o) {
    z_clean.merge(o.z_clean);
    z_all.merge(o.z_all);
    err_clean.merge(o.err_clean);
    overloads += o.overloads;
    vectors += o.vectors;
    max_residual = std::max(max_residual, o.max_residual);
  }
};

struct BlockAcc {
  TerminalAcc t1;
  TerminalAcc t2;
  TerminalAcc common_only;
  Moments eq;
  Moments eq0;
  Moments yr;
  double cross = 0.0;
  std::uint64_t mismatches = 0;
  std::uint64_t any_overload = 0;
  std::uint64_t vectors = 0;

  void merge(const BlockAcc& o) {
    t1.merge(o.t1);
    t2.merge(o.t2);
    common_only.merge(o.common_only);
    eq.merge(o.eq);
    eq0.merge(o.eq0);
    yr.merge(o.yr);
    cross += o.cross;
    mismatches += o.mismatches;
    any_overload += o.any_overload;
    vectors += o.vectors;
  }
};

struct TerminalView {
  std::span<const double> u_hat;
  std::span<const double> u;
  std::span<const double> e;
  std::span<const double> interference;  // h_other x_other
  double beta = 1.0;
  double gamma = 1.0;
};

// Returns true when the vector overloaded.
bool accumulate(TerminalAcc& acc, const TerminalView& v, const LatticeSpec& coarse) {
  const std::size_t n = v.u.size();
  std::vector<double> probe(n);
  for (std::size_t i = 0; i < n; ++i) probe[i] = v.beta * v.u[i] + v.e[i];
  const bool overload = !in_voronoi(coarse, probe);
  ++acc.vectors;
  if (overload) ++acc.overloads;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = v.u_hat[i] - v.gamma * v.beta * v.interference[i];
    acc.z_all.add(z);
    if (!overload) {
      acc.z_clean.add(z);
      acc.err_clean.add(v.u_hat[i] / v.gamma - v.beta * v.u[i]);
      acc.max_residual = std::max(acc.max_residual, std::abs(v.u_hat[i] - v.gamma * probe[i]));
    }
  }
  return overload;
}

TerminalStats finish(const TerminalAcc& acc, double gamma, double beta, double sigma_r2,
                     double sigma2_layer) {
  TerminalStats s;
  s.z_eq_variance = acc.z_clean.variance();
  s.z_eq_variance_all = acc.z_all.variance();
  s.z_eq_expected = gamma * gamma * (beta * beta * sigma_r2 + sigma2_layer);
  s.error_variance = acc.err_clean.variance();
  s.error_expected = sigma2_layer;
  s.gamma = gamma;
  s.overload_count = acc.overloads;
  s.vector_count = acc.vectors;
  s.max_identity_residual = acc.max_residual;
  return s;
}

bool points_differ(std::span<const double> a, std::span<const double> b, double scale) {
  const double tol = 1e-9 * std::max(1.0, scale);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return true;
  }
  return false;
}

struct SimSetup {
  ChannelConfig cfg;
  SimulationRequest req;
  NestedChain chain;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double gamma_common_only = 1.0;
  int refined = 1;  // LCF2: terminal decoding the refinement layer
};

BlockAcc run_block(const SimSetup& s, std::uint64_t block) {
  const ChannelConfig& cfg = s.cfg;
  const double beta = s.req.beta;
  const bool layered = s.req.scheme == Scheme::kLcf2;
  const LatticeSpec l0 = s.chain.finest();
  const LatticeSpec l1 = s.chain.fine();
  const LatticeSpec l2 = s.chain.coarse();
  const std::size_t dim = l1.dimension;
  const std::size_t len = s.req.block_dim;

  const std::uint64_t bs = derive_seed(s.req.seed, block);
  const SignalBlock x1 = generate_source(cfg.P1, len, derive_seed(bs, 1));
  const SignalBlock x2 = generate_source(cfg.P2, len, derive_seed(bs, 2));
  const SignalBlock y = mac_phase(cfg, x1, x2, derive_seed(bs, 3));
  Rng dither_rng(derive_seed(bs, 4));

  BlockAcc acc;
  std::vector<double> t(dim), s1(dim), s2(dim), u1(dim), u2(dim), x(dim), q0(dim), q1n(dim),
      q1d(dim), ec(dim);
  for (std::size_t off = 0; off < len; off += dim) {
    const std::span<const double> yc(y.samples.data() + off, dim);
    sample_dither(l1, dither_rng, t);
    for (std::size_t i = 0; i < dim; ++i) {
      s1[i] = cfg.h1 * x1.samples[off + i];
      s2[i] = cfg.h2 * x2.samples[off + i];
      u1[i] = yc[i] - s1[i];
      u2[i] = yc[i] - s2[i];
    }
    const std::vector<double> e1 = quantization_error(l1, yc, beta, t);
    for (std::size_t i = 0; i < dim; ++i) {
      acc.eq.add(e1[i]);
      acc.yr.add(yc[i]);
      acc.cross += e1[i] * yc[i];
    }
    ++acc.vectors;

    bool overload = false;
    if (!layered) {
      const std::vector<double> v = lcf1_encode(yc, s.chain, beta, t);
      const std::vector<double> h1 = lcf1_decode(v, s1, t, beta, s.gamma1, s.chain);
      const std::vector<double> h2 = lcf1_decode(v, s2, t, beta, s.gamma2, s.chain);
      overload |= accumulate(acc.t1, {h1, u1, e1, s2, beta, s.gamma1}, l2);
      overload |= accumulate(acc.t2, {h2, u2, e1, s1, beta, s.gamma2}, l2);
    } else {
      const LayeredDescription d = lcf2_encode(yc, s.chain, beta, t);
      const std::vector<double> e0 = quantization_error(l0, yc, beta, t);
      for (double v : e0) acc.eq0.add(v);
      // The common layer carries Q_L1(Q_L0(x)); its error is measured directly.
      for (std::size_t i = 0; i < dim; ++i) x[i] = beta * yc[i] + t[i];
      nearest_point(l0, x, q0);
      nearest_point(l1, q0, q1n);
      nearest_point(l1, x, q1d);
      if (points_differ(q1n, q1d, l1.scale)) ++acc.mismatches;
      for (std::size_t i = 0; i < dim; ++i) ec[i] = q1n[i] - x[i];

      const bool t1_refined = s.refined == 1;
      const std::span<const double> s_ref = t1_refined ? s1 : s2;
      const std::span<const double> s_com = t1_refined ? s2 : s1;
      const std::span<const double> u_ref = t1_refined ? u1 : u2;
      const std::span<const double> u_com = t1_refined ? u2 : u1;
      const double g_ref = t1_refined ? s.gamma1 : s.gamma2;
      const double g_com = t1_refined ? s.gamma2 : s.gamma1;
      TerminalAcc& a_ref = t1_refined ? acc.t1 : acc.t2;
      TerminalAcc& a_com = t1_refined ? acc.t2 : acc.t1;

      const std::vector<double> h_ref =
          lcf2_decode_refined(d.common, d.refinement, s_ref, t, beta, g_ref, s.chain);
      const std::vector<double> h_com = lcf2_decode_common(d.common, s_com, t, beta, g_com, s.chain);
      const std::vector<double> h_only =
          lcf2_decode_common(d.common, s_ref, t, beta, s.gamma_common_only, s.chain);
      overload |= accumulate(a_ref, {h_ref, u_ref, e0, s_com, beta, g_ref}, l2);
      overload |= accumulate(a_com, {h_com, u_com, ec, s_ref, beta, g_com}, l2);
      accumulate(acc.common_only, {h_only, u_ref, ec, s_com, beta, s.gamma_common_only}, l2);
    }
    if (overload) ++acc.any_overload;
  }
  return acc;
}

}  // namespace

std::string_view scheme_name(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::kLcf1: return "LCF1";
    case Scheme::kLcf2: return "LCF2";
    case Scheme::kAf: return "AF";
    case Scheme::kDf: return "DF";
    case Scheme::kOuter: return "OUTER";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::kLcf1, Scheme::kLcf2, Scheme::kAf, Scheme::kDf, Scheme::kOuter}) {
    if (name == scheme_name(s)) return s;
  }
  throw InvalidInput("unknown scheme '" + std::string(name) + "'");
}

void SchemeConfig::validate(Scheme scheme) const {
  check_alpha(alpha);
  if (!(nu >= 0.0 && nu <= 1.0)) throw InvalidInput("nu must lie in [0, 1]");
  check_beta(beta);
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0)) throw InvalidInput("gammas must be positive");
  if (scheme == Scheme::kLcf1) {
    require_levels(chain, 2);
  } else if (scheme == Scheme::kLcf2) {
    require_levels(chain, 3);
  } else {
    throw InvalidInput("lattice parameters only apply to LCF1 and LCF2");
  }
}

OptimalParams optimal_params_lcf1(const ChannelConfig& cfg, double alpha, double beta) {
  cfg.validate();
  check_alpha(alpha);
  check_beta(beta);
  if (alpha == 0.0 || alpha == 1.0) return degenerate_params(beta, false);
  const double e = (1.0 - alpha) / alpha;
  const double bracket = std::expm1(e * std::log1p(std::min(cfg.bc_snr1(), cfg.bc_snr2())));
  if (!(bracket > 0.0)) return degenerate_params(beta, false);
  const double u_worst = std::max(cfg.sigma2_U1(), cfg.sigma2_U2());
  OptimalParams p;
  p.beta = beta;
  p.sigma2_lambda1_min = beta * beta * u_worst / bracket;
  p.gamma1_star = gamma_star(beta, cfg.sigma2_U1(), p.sigma2_lambda1_min);
  p.gamma2_star = gamma_star(beta, cfg.sigma2_U2(), p.sigma2_lambda1_min);
  p.relabeled = cfg.h2 * cfg.h2 * cfg.P2 > cfg.h1 * cfg.h1 * cfg.P1;
  return p;
}

OptimalParams optimal_params_lcf2(const ChannelConfig& user_cfg, double alpha, double nu,
                                  double beta) {
  user_cfg.validate();
  check_alpha(alpha);
  check_beta(beta);
  if (!(nu >= 0.0 && nu <= 1.0)) throw InvalidInput("nu must lie in [0, 1]");
  const bool relabel = refinement_goes_to_t2(user_cfg);
  if (alpha == 0.0 || alpha == 1.0 || nu == 0.0) {
    OptimalParams p = degenerate_params(beta, true);
    p.relabeled = relabel;
    p.refined_terminal = relabel ? 2 : 1;
    return p;
  }
  const ChannelConfig cfg = relabel ? user_cfg.swapped() : user_cfg;
  const double e = (1.0 - alpha) / alpha;
  const double g2 = cfg.h2 * cfg.h2 * cfg.PR;
  const double sinr_c = nu * g2 / ((1.0 - nu) * g2 + cfg.sigma_2_2);
  const double log_r = std::log1p((1.0 - nu) * cfg.bc_snr1());
  const double ac_minus_1 = std::expm1(e * std::log1p(sinr_c));
  // A_c - 1/A_r = (A_c - 1) + (1 - 1/A_r)
  const double ac_minus_inv_ar = ac_minus_1 - std::expm1(-e * log_r);
  if (!(ac_minus_1 > 0.0)) {
    OptimalParams p = degenerate_params(beta, true);
    p.relabeled = relabel;
    p.refined_terminal = relabel ? 2 : 1;
    return p;
  }
  const double u1 = cfg.sigma2_U1();
  const double u2 = cfg.sigma2_U2();
  const double s1 = beta * beta * std::max(u2 / ac_minus_1, u1 / ac_minus_inv_ar);
  const double s0 = s1 * std::exp(-e * log_r);

  // Frame labels: 1 = refined terminal, 2 = common-only terminal.
  const double g1 = gamma_star(beta, u1, s0);
  const double g2s = gamma_star(beta, u2, s1);
  const double p1 = beta * s1 / (beta * beta * u2 + s1);
  const double p2 = beta * s0 / (beta * beta * u1 + s0);

  OptimalParams p;
  p.beta = beta;
  p.sigma2_lambda1_min = s1;
  p.sigma2_lambda0_min = s0;
  p.relabeled = relabel;
  p.refined_terminal = relabel ? 2 : 1;
  p.gamma1_star = relabel ? g2s : g1;
  p.gamma2_star = relabel ? g1 : g2s;
  p.gamma1_printed = relabel ? p2 : p1;
  p.gamma2_printed = relabel ? p1 : p2;
  return p;
}

EndToEndSnr end_to_end_snr(const ChannelConfig& cfg, double beta, double sigma2_for_1to2,
                           double sigma2_for_2to1) {
  check_beta(beta);
  const double b2 = beta * beta;
  EndToEndSnr snr;
  snr.snr_1to2 = b2 * cfg.h1 * cfg.h1 * cfg.P1 / (b2 * cfg.sigma_R2 + sigma2_for_1to2);
  snr.snr_2to1 = b2 * cfg.h2 * cfg.h2 * cfg.P2 / (b2 * cfg.sigma_R2 + sigma2_for_2to1);
  return snr;
}

// ---------------------------------------------------------------------------

std::vector<double> lcf1_encode(std::span<const double> yR, const NestedChain& chain, double beta,
                                std::span<const double> dither) {
  require_levels(chain, 2);
  check_beta(beta);
  const LatticeSpec fine = chain.fine();
  const LatticeSpec coarse = chain.coarse();
  const Chunking ch = chunking(fine, yR.size(), dither.size());
  std::vector<double> out(yR.size());
  std::vector<double> x(ch.dim), q(ch.dim);
  for (std::size_t c = 0; c < ch.count; ++c) {
    const auto t = ch.dither(dither, c);
    const std::size_t off = c * ch.dim;
    for (std::size_t i = 0; i < ch.dim; ++i) x[i] = beta * yR[off + i] + t[i];
    nearest_point(fine, x, q);
    mod_lattice(coarse, q, std::span<double>(out.data() + off, ch.dim));
  }
  return out;
}

std::vector<double> lcf1_decode(std::span<const double> vR, std::span<const double> side,
                                std::span<const double> dither, double beta, double gamma,
                                const NestedChain& chain) {
  require_levels(chain, 2);
  check_beta(beta);
  return modulo_decode(vR, side, dither, beta, gamma, chain.coarse());
}

std::vector<double> quantization_error(const LatticeSpec& lattice, std::span<const double> yR,
                                       double beta, std::span<const double> dither) {
  lattice.validate();
  const Chunking ch = chunking(lattice, yR.size(), dither.size());
  std::vector<double> out(yR.size());
  std::vector<double> x(ch.dim);
  for (std::size_t c = 0; c < ch.count; ++c) {
    const auto t = ch.dither(dither, c);
    const std::size_t off = c * ch.dim;
    for (std::size_t i = 0; i < ch.dim; ++i) x[i] = beta * yR[off + i] + t[i];
    mod_lattice(lattice, x, std::span<double>(out.data() + off, ch.dim));
    for (std::size_t i = 0; i < ch.dim; ++i) out[off + i] = -out[off + i];
  }
  return out;
}

LayeredDescription lcf2_encode(std::span<const double> yR, const NestedChain& chain, double beta,
                               std::span<const double> dither) {
  require_levels(chain, 3);
  check_beta(beta);
  const LatticeSpec l0 = chain.finest();
  const LatticeSpec l1 = chain.fine();
  const LatticeSpec l2 = chain.coarse();
  const Chunking ch = chunking(l1, yR.size(), dither.size());
  LayeredDescription d{std::vector<double>(yR.size()), std::vector<double>(yR.size())};
  std::vector<double> x(ch.dim), q0(ch.dim), q1(ch.dim);
  for (std::size_t c = 0; c < ch.count; ++c) {
    const auto t = ch.dither(dither, c);
    const std::size_t off = c * ch.dim;
    for (std::size_t i = 0; i < ch.dim; ++i) x[i] = beta * yR[off + i] + t[i];
    nearest_point(l0, x, q0);
    nearest_point(l1, q0, q1);
    for (std::size_t i = 0; i < ch.dim; ++i) d.refinement[off + i] = q0[i] - q1[i];
    mod_lattice(l2, q1, std::span<double>(d.common.data() + off, ch.dim));
  }
  return d;
}

std::vector<double> lcf2_decode_common(std::span<const double> common,
                                       std::span<const double> side,
                                       std::span<const double> dither, double beta, double gamma,
                                       const NestedChain& chain) {
  require_levels(chain, 3);
  check_beta(beta);
  return modulo_decode(common, side, dither, beta, gamma, chain.coarse());
}

std::vector<double> lcf2_decode_refined(std::span<const double> common,
                                        std::span<const double> refinement,
                                        std::span<const double> side,
                                        std::span<const double> dither, double beta, double gamma,
                                        const NestedChain& chain) {
  require_levels(chain, 3);
  check_beta(beta);
  require_same(common.size(), refinement.size(), "refinement");
  std::vector<double> sum(common.size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = common[i] + refinement[i];
  return modulo_decode(sum, side, dither, beta, gamma, chain.coarse());
}

// ---------------------------------------------------------------------------

double TerminalStats::overload_frequency() const noexcept {
  return vector_count == 0 ? 0.0
                           : static_cast<double>(overload_count) / static_cast<double>(vector_count);
}

DecodeDiagnostics TerminalStats::diagnostics(double e_q_variance) const noexcept {
  return {e_q_variance, z_eq_variance, overload_count, vector_count};
}

NestedChain realize_chain(const ChannelConfig& cfg, Scheme scheme, const OptimalParams& params,
                          LatticeFamily family, double alpha, double nu, double margin,
                          SimReport* report) {
  if (scheme != Scheme::kLcf1 && scheme != Scheme::kLcf2) {
    throw InvalidInput("only LCF1 and LCF2 use lattice chains");
  }
  if (!(margin > 0.0) || !std::isfinite(margin)) throw InvalidInput("margin must be positive");
  const double s1 = params.sigma2_lambda1_min;
  if (params.degenerate || !(s1 > 0.0) || !std::isfinite(s1)) {
    throw InfeasibleError("parameters are degenerate; no finite lattice realizes them");
  }
  const double beta = params.beta;
  const double b2 = beta * beta;
  const double e = (1.0 - alpha) / alpha;
  const LatticeSpec unit = LatticeSpec::make(family, natural_dimension(family));
  const double base_sm = unit.base_second_moment();

  SimReport local;
  SimReport& r = report ? *report : local;
  NestedChain chain;
  if (scheme == Scheme::kLcf1) {
    const double need = std::max(b2 * cfg.sigma2_U1(), b2 * cfg.sigma2_U2()) + s1;
    const unsigned k2 = ceil_ratio(margin * need / s1);
    chain = NestedChain::two_level(unit.scaled_by(std::sqrt(s1 / base_sm)), k2);
    const double coarse = chain.coarse().second_moment();
    r.realized_margin = coarse / need;
    r.common_rate = std::log2(static_cast<double>(k2));
    r.common_rate_budget = 0.5 * e * std::log2(1.0 + std::min(cfg.bc_snr1(), cfg.bc_snr2()));
    r.refinement_rate = 0.0;
    r.refinement_rate_budget = 0.0;
    r.refinement_unrealizable = false;
  } else {
    if (!params.sigma2_lambda0_min) throw InvalidInput("LCF2 realization needs sigma^2(L0)");
    const bool t1_refined = params.refined_terminal == 1;
    const double u_ref = t1_refined ? cfg.sigma2_U1() : cfg.sigma2_U2();
    const double u_com = t1_refined ? cfg.sigma2_U2() : cfg.sigma2_U1();
    const double ratio = s1 / *params.sigma2_lambda0_min;
    const auto k1 =
        static_cast<unsigned>(std::max(1.0, std::floor(std::sqrt(ratio) + 1e-12)));
    const double s0 = s1 / (static_cast<double>(k1) * k1);
    // The common-only diagnostic at the refined terminal needs u_ref + s1.
    const double need = std::max({b2 * u_com + s1, b2 * u_ref + s0, b2 * u_ref + s1});
    const unsigned k2 = ceil_ratio(margin * need / s1);
    chain = NestedChain::three_level(
        unit.scaled_by(std::sqrt(s0 / base_sm)), k1, k2);
    r.realized_margin = chain.coarse().second_moment() / need;
    const double h_com2 = t1_refined ? cfg.h2 * cfg.h2 : cfg.h1 * cfg.h1;
    const double noise_com = t1_refined ? cfg.sigma_2_2 : cfg.sigma_1_2;
    const double bc_ref = t1_refined ? cfg.bc_snr1() : cfg.bc_snr2();
    const double g = h_com2 * cfg.PR;
    r.common_rate = std::log2(static_cast<double>(k2));
    r.refinement_rate = std::log2(static_cast<double>(k1));
    r.common_rate_budget = 0.5 * e * std::log2(1.0 + nu * g / ((1.0 - nu) * g + noise_com));
    r.refinement_rate_budget = 0.5 * e * std::log2(1.0 + (1.0 - nu) * bc_ref);
    r.refinement_unrealizable = k1 == 1 && ratio > 1.0 + 1e-12;
  }
  r.rate_exceeds_budget = r.common_rate > r.common_rate_budget + 1e-12 ||
                          r.refinement_rate > r.refinement_rate_budget + 1e-12;
  r.chain = chain;
  return chain;
}

SimReport simulate_scheme(const ChannelConfig& cfg, const SimulationRequest& request) {
  cfg.validate();
  if (request.scheme != Scheme::kLcf1 && request.scheme != Scheme::kLcf2) {
    throw InvalidInput("only LCF1 and LCF2 can be simulated");
  }
  if (request.n_blocks == 0) throw InvalidInput("n_blocks must be at least 1");
  const std::size_t dim = natural_dimension(request.family);
  if (request.block_dim == 0 || request.block_dim % dim != 0) {
    throw InvalidInput("block_dim must be a positive multiple of the lattice dimension " +
                       std::to_string(dim));
  }
  const bool layered = request.scheme == Scheme::kLcf2;
  const OptimalParams params =
      layered ? optimal_params_lcf2(cfg, request.alpha, request.nu, request.beta)
              : optimal_params_lcf1(cfg, request.alpha, request.beta);

  SimReport report;
  report.scheme = request.scheme;
  report.family = request.family;
  report.params = params;
  SimSetup setup;
  setup.cfg = cfg;
  setup.req = request;
  setup.chain = realize_chain(cfg, request.scheme, params, request.family, request.alpha,
                              request.nu, request.margin, &report);
  setup.refined = params.refined_terminal;

  // Decoder scales are matched to the realized lattices.
  const double beta = request.beta;
  const double s1 = setup.chain.fine().second_moment();
  const double s0 = setup.chain.finest().second_moment();
  const double layer1 = layered && setup.refined == 1 ? s0 : s1;
  const double layer2 = layered && setup.refined == 2 ? s0 : s1;
  setup.gamma1 = gamma_star(beta, cfg.sigma2_U1(), layer1);
  setup.gamma2 = gamma_star(beta, cfg.sigma2_U2(), layer2);
  const double u_ref = setup.refined == 1 ? cfg.sigma2_U1() : cfg.sigma2_U2();
  setup.gamma_common_only = gamma_star(beta, u_ref, s1);

  const std::size_t n_blocks = request.n_blocks;
  std::vector<BlockAcc> blocks(n_blocks);
  parallel_blocks(n_blocks, std::max(1u, request.workers),
                  [&](std::size_t b) { blocks[b] = run_block(setup, b); });
  BlockAcc total;
  for (const BlockAcc& b : blocks) total.merge(b);

  report.e_q_variance = total.eq.variance();
  report.e_q_expected = s1;
  {
    const double n = static_cast<double>(total.eq.n);
    const double cov = total.cross / n - (total.eq.sum / n) * (total.yr.sum / n);
    const double denom = std::sqrt(total.eq.variance() * total.yr.variance());
    report.corr_eq_yr = denom > 0.0 ? cov / denom : 0.0;
  }
  report.t1 = finish(total.t1, setup.gamma1, beta, cfg.sigma_R2, layer1);
  report.t2 = finish(total.t2, setup.gamma2, beta, cfg.sigma_R2, layer2);
  if (layered) {
    report.e_q0_variance = total.eq0.variance();
    report.e_q0_expected = s0;
    report.nested_mismatch_frequency =
        static_cast<double>(total.mismatches) / static_cast<double>(total.vectors);
    report.refined_common_only =
        finish(total.common_only, setup.gamma_common_only, beta, cfg.sigma_R2, s1);
  }
  report.n_blocks = n_blocks;
  report.block_dim = request.block_dim;
  report.vector_count = total.vectors;
  report.overload_frequency =
      static_cast<double>(total.any_overload) / static_cast<double>(total.vectors);
  return report;
}

}  // namespace lcf

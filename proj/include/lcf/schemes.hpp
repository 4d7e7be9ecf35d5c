#pragma once

// Lattice compress-and-forward chains. LCF1: the relay quantizes beta*y_R + t
// on the fine lattice and sends its coset modulo the coarse lattice; each
// terminal removes its own signal and reduces mod the coarse lattice. LCF2
// adds a refinement coset on a finer lattice, decoded by the terminal with
// the stronger broadcast link only.
//
// Signals are processed in consecutive chunks of the lattice dimension. A
// dither argument either holds one vector (reused for every chunk) or one
// vector per chunk.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lcf/lattice.hpp"
#include "lcf/twrc_model.hpp"

namespace lcf {

enum class Scheme { kLcf1, kLcf2, kAf, kDf, kOuter };

std::string_view scheme_name(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view name);

struct SchemeConfig {
  double alpha = 0.5;
  double nu = 1.0;
  double beta = 1.0;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  NestedChain chain;

  /// alpha, nu in [0,1]; beta, gammas positive; two levels for LCF1, three for LCF2.
  void validate(Scheme scheme) const;
};

struct OptimalParams {
  double sigma2_lambda1_min = 0.0;
  std::optional<double> sigma2_lambda0_min;
  double gamma1_star = 0.0;
  double gamma2_star = 0.0;
  /// LCF2: the printed closed forms beta sigma^2(L1) / (beta^2 sU2^2 + sigma^2(L1))
  /// and beta sigma^2(L0) / (beta^2 sU1^2 + sigma^2(L0)), kept for comparison.
  /// They differ from the stationary points and are not used for decoding.
  std::optional<double> gamma1_printed;
  std::optional<double> gamma2_printed;
  double beta = 1.0;
  /// alpha in {0,1} or nu = 0: the lattice bounds diverge, gammas are 0.
  bool degenerate = false;
  /// The closed forms assume a terminal ordering; true when the inputs were
  /// relabeled to meet it and the outputs swapped back.
  bool relabeled = false;
  /// LCF2: the terminal (1 or 2) that decodes the refinement layer.
  int refined_terminal = 1;
};

/// sigma^2(L1)_min = beta^2 max(sigma^2_U) / ((1 + min_i h_i^2 PR/sigma_i^2)^((1-a)/a) - 1)
/// and gamma_i* = beta sigma^2_Ui / (beta^2 sigma^2_Ui + sigma^2(L1)_min).
OptimalParams optimal_params_lcf1(const ChannelConfig& cfg, double alpha, double beta);

/// Layered bounds. With T1 the stronger broadcast receiver:
///   A_c = (1 + nu h2^2 PR / ((1-nu) h2^2 PR + s2^2))^((1-a)/a)
///   A_r = (1 + (1-nu) h1^2 PR / s1^2)^((1-a)/a)
///   sigma^2(L1)_min = beta^2 max(sU2^2 / (A_c - 1), sU1^2 / (A_c - 1/A_r))
///   sigma^2(L0)_min = sigma^2(L1)_min / A_r
/// The second term of the max only binds when T1 also has the worse side
/// information. gamma_i* are the stationary points of the per-terminal
/// distortion with each terminal's own quantization layer.
OptimalParams optimal_params_lcf2(const ChannelConfig& cfg, double alpha, double nu, double beta);

/// End-to-end SNRs beta^2 h^2 P / (beta^2 sigma_R^2 + sigma^2(layer)).
struct EndToEndSnr {
  double snr_1to2 = 0.0;
  double snr_2to1 = 0.0;
};

EndToEndSnr end_to_end_snr(const ChannelConfig& cfg, double beta, double sigma2_for_1to2,
                           double sigma2_for_2to1);

// ---------------------------------------------------------------------------
// Encoding and decoding

/// v_R = Q_L1(beta y_R + t) mod L2.
std::vector<double> lcf1_encode(std::span<const double> yR, const NestedChain& chain, double beta,
                                std::span<const double> dither);

/// u_hat = gamma ((v_R - t - beta s) mod L2).
std::vector<double> lcf1_decode(std::span<const double> vR, std::span<const double> side,
                                std::span<const double> dither, double beta, double gamma,
                                const NestedChain& chain);

/// -(beta y_R + t) mod lattice, computed directly from the encoder input.
std::vector<double> quantization_error(const LatticeSpec& lattice, std::span<const double> yR,
                                       double beta, std::span<const double> dither);

struct LayeredDescription {
  std::vector<double> common;
  std::vector<double> refinement;
};

/// v_Rr = Q_L0(x) mod L1 and v_Rc = Q_L1(Q_L0(x)) mod L2 with x = beta y_R + t.
/// Quantizing the L0 point keeps v_Rc + v_Rr = Q_L0(x) mod L2 exact for any
/// chain; it coincides with Q_L1(x) mod L2 whenever Q_L1(Q_L0(x)) = Q_L1(x),
/// which holds everywhere for Z^n with odd k1.
LayeredDescription lcf2_encode(std::span<const double> yR, const NestedChain& chain, double beta,
                               std::span<const double> dither);

std::vector<double> lcf2_decode_common(std::span<const double> common,
                                       std::span<const double> side,
                                       std::span<const double> dither, double beta, double gamma,
                                       const NestedChain& chain);

/// Decodes v_Rc + v_Rr against the side information.
std::vector<double> lcf2_decode_refined(std::span<const double> common,
                                        std::span<const double> refinement,
                                        std::span<const double> side,
                                        std::span<const double> dither, double beta, double gamma,
                                        const NestedChain& chain);

// ---------------------------------------------------------------------------
// Monte-Carlo link simulation

struct DecodeDiagnostics {
  double e_q_variance = 0.0;
  double z_eq_variance = 0.0;
  std::uint64_t overload_count = 0;
  std::uint64_t block_count = 0;
};

struct TerminalStats {
  /// Z_eq = u_hat - gamma beta h_other x_other, over vectors without overload.
  double z_eq_variance = 0.0;
  /// Same statistic over every vector, overloads included.
  double z_eq_variance_all = 0.0;
  /// gamma^2 (beta^2 sigma_R^2 + sigma^2(layer)).
  double z_eq_expected = 0.0;
  /// u_hat / gamma - beta u over vectors without overload.
  double error_variance = 0.0;
  /// sigma^2 of the layer this terminal decodes against.
  double error_expected = 0.0;
  double gamma = 0.0;
  std::uint64_t overload_count = 0;
  std::uint64_t vector_count = 0;
  /// max |u_hat - gamma (beta u + e)| over vectors without overload.
  double max_identity_residual = 0.0;

  double overload_frequency() const noexcept;
  DecodeDiagnostics diagnostics(double e_q_variance) const noexcept;
};

struct SimulationRequest {
  Scheme scheme = Scheme::kLcf1;
  LatticeFamily family = LatticeFamily::kE8;
  double alpha = 0.5;
  double nu = 0.5;
  double beta = 1.0;
  /// sigma^2(L2) is made at least margin * (beta^2 sigma_U^2 + sigma^2(layer)).
  double margin = 1.2;
  std::size_t n_blocks = 1000;
  /// MAC-phase channel uses per block; a multiple of the lattice dimension.
  std::size_t block_dim = 8;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct SimReport {
  Scheme scheme = Scheme::kLcf1;
  LatticeFamily family = LatticeFamily::kE8;
  NestedChain chain;
  OptimalParams params;

  /// sigma^2(L2) over the largest beta^2 sigma_U^2 + sigma^2(layer).
  double realized_margin = 0.0;
  double common_rate = 0.0;
  double refinement_rate = 0.0;
  /// Per-dimension source rates the broadcast phase can carry.
  double common_rate_budget = 0.0;
  double refinement_rate_budget = 0.0;
  /// Rounding k2 up for the overload margin can exceed the broadcast budget.
  bool rate_exceeds_budget = false;
  /// LCF2 only: the refinement budget does not admit k1 >= 2, so the chain
  /// collapses to k1 = 1.
  bool refinement_unrealizable = false;

  /// e_q = -(beta y_R + t) mod L1.
  double e_q_variance = 0.0;
  double e_q_expected = 0.0;
  double corr_eq_yr = 0.0;
  /// LCF2: e_q0 = -(beta y_R + t) mod L0.
  double e_q0_variance = 0.0;
  double e_q0_expected = 0.0;
  /// LCF2: fraction of vectors with Q_L1(Q_L0(x)) != Q_L1(x).
  double nested_mismatch_frequency = 0.0;

  TerminalStats t1;
  TerminalStats t2;
  /// LCF2: the refined terminal decoding from the common layer alone.
  std::optional<TerminalStats> refined_common_only;

  std::uint64_t n_blocks = 0;
  std::uint64_t block_dim = 0;
  std::uint64_t vector_count = 0;
  /// Fraction of lattice vectors where any decoder overloaded.
  double overload_frequency = 0.0;
};

/// Chain realizing the parameter targets: scale from sigma^2(L1)_min,
/// k1 = floor(sqrt(sigma^2(L1)/sigma^2(L0)_min)), k2 the smallest integer
/// meeting the overload margin. `report` receives margin, rates and flags.
NestedChain realize_chain(const ChannelConfig& cfg, Scheme scheme, const OptimalParams& params,
                          LatticeFamily family, double alpha, double nu, double margin,
                          SimReport* report = nullptr);

SimReport simulate_scheme(const ChannelConfig& cfg, const SimulationRequest& request);

}  // namespace lcf

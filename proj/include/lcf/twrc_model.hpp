#pragma once

// Two-phase Gaussian two-way relay channel: terminals T1, T2 reach each other
// only through the relay R. MAC phase: y_R = h1 x1 + h2 x2 + z_R. BC phase:
// y_i = h_i x_R + z_i. The same h_i parameterize both phases.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace lcf {

/// Physical parameters, all linear. Gains are real amplitudes; the rate
/// formulas only ever use h_i^2.
struct ChannelConfig {
  double h1 = 1.0;
  double h2 = 1.0;
  double P1 = 1.0;
  double P2 = 1.0;
  double PR = 1.0;
  double sigma_R2 = 1.0;
  double sigma_1_2 = 1.0;
  double sigma_2_2 = 1.0;

  /// Powers in dB, squared gains linear (the figure-caption convention).
  static ChannelConfig from_db(double p1_db, double p2_db, double pr_db, double h1_sq,
                               double h2_sq, double sigma_r2 = 1.0, double sigma_1_2 = 1.0,
                               double sigma_2_2 = 1.0);

  /// Symmetric unit-gain, unit-noise channel with every power equal to snr.
  static ChannelConfig symmetric(double snr_linear);

  /// Throws InvalidInput unless powers and variances are positive and gains nonzero.
  void validate() const;

  /// Variance of the part of y_R that terminal i does not know: U_1 = h2 X2 + Z_R.
  double sigma2_U1() const noexcept { return h2 * h2 * P2 + sigma_R2; }
  double sigma2_U2() const noexcept { return h1 * h1 * P1 + sigma_R2; }

  /// h_i^2 PR / sigma_i^2.
  double bc_snr1() const noexcept { return h1 * h1 * PR / sigma_1_2; }
  double bc_snr2() const noexcept { return h2 * h2 * PR / sigma_2_2; }

  /// The same channel with the terminal labels exchanged.
  ChannelConfig swapped() const noexcept;
};

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

struct SignalBlock {
  std::vector<double> samples;
  double per_dimension_power = 0.0;

  std::size_t size() const noexcept { return samples.size(); }
  /// (1/len) ||samples||^2.
  double empirical_power() const noexcept;
};

struct MessageIndex {
  std::uint64_t value = 0;
  unsigned bits = 0;

  static MessageIndex make(std::uint64_t value, unsigned bits);
};

/// Uniform message of the given width.
MessageIndex draw_message(unsigned bits, std::uint64_t seed);

/// I.i.d. N(0, power) samples.
SignalBlock generate_source(double power, std::size_t n, std::uint64_t seed);

/// y_R = h1 x1 + h2 x2 + z_R with z_R ~ N(0, sigma_R2). A zero noise variance
/// gives the noiseless superposition.
SignalBlock mac_phase(const ChannelConfig& cfg, const SignalBlock& x1, const SignalBlock& x2,
                      std::uint64_t seed);

/// (y1, y2) with y_i = h_i x_R + z_i, independent noises.
std::pair<SignalBlock, SignalBlock> bc_phase(const ChannelConfig& cfg, const SignalBlock& xR,
                                             std::uint64_t seed);

/// Side information S_i = h_i x_i and unknown part U_i = y_R - S_i at terminal i.
struct Decomposition {
  SignalBlock side_information;
  SignalBlock unknown;
};

Decomposition decompose(const ChannelConfig& cfg, const SignalBlock& yR, const SignalBlock& x1,
                        const SignalBlock& x2, int terminal);

/// MAC / BC phase lengths for n channel uses: n1 = round(alpha n), n2 = n - n1.
std::pair<std::size_t, std::size_t> split_block_lengths(double alpha, std::size_t n);

}  // namespace lcf

#include "lcf/twrc_model.hpp"

#include <cmath>
#include <string>

#include "lcf/error.hpp"
#include "lcf/random.hpp"

namespace lcf {
namespace {

// Stream tags so that, for one seed, the relay noise and the two BC noises
// are independent.
constexpr std::uint64_t kStreamMacNoise = 0x4D4143;
constexpr std::uint64_t kStreamBcNoise1 = 0x424331;
constexpr std::uint64_t kStreamBcNoise2 = 0x424332;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string(name) + " must be positive and finite");
  }
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string(name) + " must be nonnegative and finite");
  }
}

void add_noise(std::vector<double>& samples, double variance, std::uint64_t seed) {
  if (variance == 0.0) return;
  Rng rng(seed);
  const double sd = std::sqrt(variance);
  for (double& v : samples) v += sd * rng.normal();
}

void require_same_length(const SignalBlock& a, const SignalBlock& b) {
  if (a.size() != b.size()) {
    throw InvalidInput("signal length mismatch: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
  }
}

}  // namespace

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

ChannelConfig ChannelConfig::from_db(double p1_db, double p2_db, double pr_db, double h1_sq,
                                     double h2_sq, double sigma_r2, double sigma_1_2,
                                     double sigma_2_2) {
  require_positive(h1_sq, "|h1|^2");
  require_positive(h2_sq, "|h2|^2");
  ChannelConfig cfg;
  cfg.h1 = std::sqrt(h1_sq);
  cfg.h2 = std::sqrt(h2_sq);
  cfg.P1 = db_to_linear(p1_db);
  cfg.P2 = db_to_linear(p2_db);
  cfg.PR = db_to_linear(pr_db);
  cfg.sigma_R2 = sigma_r2;
  cfg.sigma_1_2 = sigma_1_2;
  cfg.sigma_2_2 = sigma_2_2;
  cfg.validate();
  return cfg;
}

ChannelConfig ChannelConfig::symmetric(double snr_linear) {
  ChannelConfig cfg;
  cfg.P1 = cfg.P2 = cfg.PR = snr_linear;
  cfg.validate();
  return cfg;
}

void ChannelConfig::validate() const {
  if (!(h1 != 0.0) || !std::isfinite(h1)) throw InvalidInput("h1 must be nonzero and finite");
  if (!(h2 != 0.0) || !std::isfinite(h2)) throw InvalidInput("h2 must be nonzero and finite");
  require_positive(P1, "P1");
  require_positive(P2, "P2");
  require_positive(PR, "PR");
  require_positive(sigma_R2, "sigma_R2");
  require_positive(sigma_1_2, "sigma_1_2");
  require_positive(sigma_2_2, "sigma_2_2");
}

ChannelConfig ChannelConfig::swapped() const noexcept {
  ChannelConfig s = *this;
  std::swap(s.h1, s.h2);
  std::swap(s.P1, s.P2);
  std::swap(s.sigma_1_2, s.sigma_2_2);
  return s;
}

double SignalBlock::empirical_power() const noexcept {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double v : samples) acc += v * v;
  return acc / static_cast<double>(samples.size());
}

MessageIndex MessageIndex::make(std::uint64_t value, unsigned bits) {
  if (bits > 64) throw InvalidInput("message index wider than 64 bits");
  if (bits < 64 && value >= (std::uint64_t{1} << bits)) {
    throw InvalidInput("message index does not fit in " + std::to_string(bits) + " bits");
  }
  return {value, bits};
}

MessageIndex draw_message(unsigned bits, std::uint64_t seed) {
  if (bits > 64) throw InvalidInput("message index wider than 64 bits");
  Rng rng(seed);
  const std::uint64_t raw = rng.next_u64();
  return MessageIndex::make(bits == 64 ? raw : (bits == 0 ? 0 : raw >> (64 - bits)), bits);
}

SignalBlock generate_source(double power, std::size_t n, std::uint64_t seed) {
  require_positive(power, "source power");
  if (n == 0) throw InvalidInput("source length must be at least 1");
  SignalBlock block{std::vector<double>(n, 0.0), power};
  add_noise(block.samples, power, seed);
  return block;
}

SignalBlock mac_phase(const ChannelConfig& cfg, const SignalBlock& x1, const SignalBlock& x2,
                      std::uint64_t seed) {
  require_same_length(x1, x2);
  require_nonnegative(cfg.sigma_R2, "sigma_R2");
  SignalBlock y{std::vector<double>(x1.size()),
                cfg.h1 * cfg.h1 * x1.per_dimension_power + cfg.h2 * cfg.h2 * x2.per_dimension_power +
                    cfg.sigma_R2};
  for (std::size_t i = 0; i < y.size(); ++i) {
    y.samples[i] = cfg.h1 * x1.samples[i] + cfg.h2 * x2.samples[i];
  }
  add_noise(y.samples, cfg.sigma_R2, derive_seed(seed, kStreamMacNoise));
  return y;
}

std::pair<SignalBlock, SignalBlock> bc_phase(const ChannelConfig& cfg, const SignalBlock& xR,
                                             std::uint64_t seed) {
  require_nonnegative(cfg.sigma_1_2, "sigma_1_2");
  require_nonnegative(cfg.sigma_2_2, "sigma_2_2");
  SignalBlock y1{std::vector<double>(xR.size()),
                 cfg.h1 * cfg.h1 * xR.per_dimension_power + cfg.sigma_1_2};
  SignalBlock y2{std::vector<double>(xR.size()),
                 cfg.h2 * cfg.h2 * xR.per_dimension_power + cfg.sigma_2_2};
  for (std::size_t i = 0; i < xR.size(); ++i) {
    y1.samples[i] = cfg.h1 * xR.samples[i];
    y2.samples[i] = cfg.h2 * xR.samples[i];
  }
  add_noise(y1.samples, cfg.sigma_1_2, derive_seed(seed, kStreamBcNoise1));
  add_noise(y2.samples, cfg.sigma_2_2, derive_seed(seed, kStreamBcNoise2));
  return {std::move(y1), std::move(y2)};
}

Decomposition decompose(const ChannelConfig& cfg, const SignalBlock& yR, const SignalBlock& x1,
                        const SignalBlock& x2, int terminal) {
  require_same_length(yR, x1);
  require_same_length(yR, x2);
  if (terminal != 1 && terminal != 2) throw InvalidInput("terminal must be 1 or 2");
  const bool first = terminal == 1;
  const SignalBlock& own = first ? x1 : x2;
  const double gain = first ? cfg.h1 : cfg.h2;
  Decomposition d;
  d.side_information = {std::vector<double>(yR.size()), gain * gain * own.per_dimension_power};
  d.unknown = {std::vector<double>(yR.size()), first ? cfg.sigma2_U1() : cfg.sigma2_U2()};
  for (std::size_t i = 0; i < yR.size(); ++i) {
    d.side_information.samples[i] = gain * own.samples[i];
    d.unknown.samples[i] = yR.samples[i] - d.side_information.samples[i];
  }
  return d;
}

std::pair<std::size_t, std::size_t> split_block_lengths(double alpha, std::size_t n) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
  const auto n1 = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n)));
  return {n1, n - n1};
}

}  // namespace lcf

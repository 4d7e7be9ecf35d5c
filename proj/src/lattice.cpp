#include "lcf/lattice.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "lcf/error.hpp"

namespace lcf {
namespace {

constexpr std::size_t kMaxDnDimension = 8;

// Distances (in base-lattice units) closer than this count as ties. Scaling
// by 1/k makes exact ties differ in the last bits, and an exact comparison
// would then break them differently for x and x + lambda.
constexpr double kTieTolerance = 1e-10;

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

inline double coordinate_cost(double x, double c) {
  const double d = x - c;
  return d * d;
}

inline unsigned parity_of(double integral) {
  return static_cast<unsigned>(static_cast<long long>(integral) & 1LL);
}

// Ties go to the smaller integer.
double closest_integer(double x) {
  const double fl = std::floor(x);
  return coordinate_cost(x, fl) <= coordinate_cost(x, fl + 1.0) + kTieTolerance ? fl : fl + 1.0;
}

void closest_zn(std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = closest_integer(x[i]);
}

// Closest point of D_n = {z in Z^n : sum z even}. Exact dynamic program over
// coordinates with the running parity as state; each coordinate only needs
// the four integers floor(x)-1 .. floor(x)+2. The forward pass takes the
// smallest (near-)optimal value at every coordinate, which yields the
// lexicographically smallest minimizer.
void closest_dn(std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::array<std::array<double, 2>, kMaxDnDimension + 1> suffix{};
  std::array<double, kMaxDnDimension> floors{};
  suffix[n] = {0.0, kInf};
  for (std::size_t i = n; i-- > 0;) {
    floors[i] = std::floor(x[i]);
    for (unsigned p = 0; p < 2; ++p) {
      double best = kInf;
      for (int d = -1; d <= 2; ++d) {
        const double c = floors[i] + d;
        const double cost = coordinate_cost(x[i], c) + suffix[i + 1][p ^ parity_of(c)];
        best = std::min(best, cost);
      }
      suffix[i][p] = best;
    }
  }
  unsigned need = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = -1; d <= 2; ++d) {
      const double c = floors[i] + d;
      const unsigned cp = parity_of(c);
      if (coordinate_cost(x[i], c) + suffix[i + 1][need ^ cp] <= suffix[i][need] + kTieTolerance) {
        out[i] = c;
        need ^= cp;
        break;
      }
    }
  }
}

// E8 = D8 u (D8 + 1/2): decode in both cosets, keep the closer one.
void closest_e8(std::span<const double> x, std::span<double> out) {
  std::array<double, 8> a{};
  std::array<double, 8> b{};
  std::array<double, 8> shifted{};
  closest_dn(x, a);
  for (std::size_t i = 0; i < 8; ++i) shifted[i] = x[i] - 0.5;
  closest_dn(shifted, b);
  for (double& v : b) v += 0.5;
  const double da = squared_distance(x, a);
  const double db = squared_distance(x, b);
  const bool tie = std::abs(da - db) <= kTieTolerance;
  const bool take_a = tie ? !std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end())
                          : da < db;
  std::copy_n(take_a ? a.begin() : b.begin(), 8, out.begin());
}

void closest_base(LatticeFamily family, std::span<const double> x, std::span<double> out) {
  switch (family) {
    case LatticeFamily::kIntegerZn:
      closest_zn(x, out);
      return;
    case LatticeFamily::kD4:
      closest_dn(x, out);
      return;
    case LatticeFamily::kE8:
      closest_e8(x, out);
      return;
  }
}

void check_dimension(const LatticeSpec& lattice, std::size_t got) {
  if (got != lattice.dimension) {
    throw InvalidInput("dimension mismatch: lattice has " + std::to_string(lattice.dimension) +
                       " coordinates, input has " + std::to_string(got));
  }
}

// Row-vector generator matrices: a lattice point is z * G for integer z.
Eigen::MatrixXd generator(LatticeFamily family, std::size_t n) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  switch (family) {
    case LatticeFamily::kIntegerZn:
      g.setIdentity();
      break;
    case LatticeFamily::kD4:
      g << -1, -1, 0, 0,
            1, -1, 0, 0,
            0, 1, -1, 0,
            0, 0, 1, -1;
      break;
    case LatticeFamily::kE8:
      g << 2, 0, 0, 0, 0, 0, 0, 0,
          -1, 1, 0, 0, 0, 0, 0, 0,
           0, -1, 1, 0, 0, 0, 0, 0,
           0, 0, -1, 1, 0, 0, 0, 0,
           0, 0, 0, -1, 1, 0, 0, 0,
           0, 0, 0, 0, -1, 1, 0, 0,
           0, 0, 0, 0, 0, -1, 1, 0,
           0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5;
      break;
  }
  return g;
}

struct CosetFrame {
  LatticeSpec finer;
  LatticeSpec coarser;
  unsigned k = 1;
};

CosetFrame coset_frame(const NestedChain& chain, CosetLevel level) {
  chain.validate();
  if (level == CosetLevel::kCommon) {
    return {chain.fine(), chain.coarse(), chain.k_mid_to_coarse};
  }
  if (chain.levels != 3) {
    throw InvalidInput("refinement cosets need a three-level chain");
  }
  return {chain.finest(), chain.fine(), chain.k_fine_to_mid};
}

}  // namespace

std::string_view family_name(LatticeFamily family) noexcept {
  switch (family) {
    case LatticeFamily::kIntegerZn:
      return "Zn";
    case LatticeFamily::kD4:
      return "D4";
    case LatticeFamily::kE8:
      return "E8";
  }
  return "?";
}

LatticeFamily parse_family(std::string_view name) {
  if (name == "Zn" || name == "Z") return LatticeFamily::kIntegerZn;
  if (name == "D4") return LatticeFamily::kD4;
  if (name == "E8") return LatticeFamily::kE8;
  throw InvalidInput("unknown lattice family '" + std::string(name) + "' (expected Zn, D4 or E8)");
}

std::size_t natural_dimension(LatticeFamily family) noexcept {
  switch (family) {
    case LatticeFamily::kD4: return 4;
    case LatticeFamily::kE8: return 8;
    case LatticeFamily::kIntegerZn: break;
  }
  return 1;
}

LatticeSpec LatticeSpec::make(LatticeFamily family, std::size_t dimension, double scale) {
  LatticeSpec spec{family, dimension, scale};
  spec.validate();
  return spec;
}

void LatticeSpec::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidInput("lattice scale must be positive and finite");
  }
  if (dimension == 0) throw InvalidInput("lattice dimension must be positive");
  if (family == LatticeFamily::kD4 && dimension != 4) {
    throw InvalidInput("D4 has dimension 4");
  }
  if (family == LatticeFamily::kE8 && dimension != 8) {
    throw InvalidInput("E8 has dimension 8");
  }
}

double LatticeSpec::base_second_moment() const noexcept {
  switch (family) {
    case LatticeFamily::kIntegerZn:
      return 1.0 / 12.0;
    case LatticeFamily::kD4:
      return 13.0 / 120.0;
    case LatticeFamily::kE8:
      return 929.0 / 12960.0;
  }
  return 0.0;
}

double LatticeSpec::base_volume() const noexcept {
  return family == LatticeFamily::kD4 ? 2.0 : 1.0;
}

double LatticeSpec::volume() const noexcept {
  return std::pow(scale, static_cast<double>(dimension)) * base_volume();
}

double LatticeSpec::normalized_second_moment() const noexcept {
  return second_moment() / std::pow(volume(), 2.0 / static_cast<double>(dimension));
}

LatticeSpec LatticeSpec::scaled_by(double factor) const {
  return make(family, dimension, scale * factor);
}

void nearest_point(const LatticeSpec& lattice, std::span<const double> x, std::span<double> out) {
  check_dimension(lattice, x.size());
  check_dimension(lattice, out.size());
  std::array<double, kMaxDnDimension> base_x{};
  std::array<double, kMaxDnDimension> base_q{};
  if (lattice.family == LatticeFamily::kIntegerZn) {
    // Z^n decodes coordinate by coordinate; no scratch limit on n.
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = closest_integer(x[i] / lattice.scale) * lattice.scale;
    }
    return;
  }
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) base_x[i] = x[i] / lattice.scale;
  closest_base(lattice.family, std::span<const double>(base_x.data(), n),
               std::span<double>(base_q.data(), n));
  for (std::size_t i = 0; i < n; ++i) out[i] = base_q[i] * lattice.scale;
}

std::vector<double> nearest_point(const LatticeSpec& lattice, std::span<const double> x) {
  std::vector<double> out(x.size());
  nearest_point(lattice, x, out);
  return out;
}

void mod_lattice(const LatticeSpec& lattice, std::span<const double> x, std::span<double> out) {
  std::array<double, kMaxDnDimension> q{};
  if (lattice.family == LatticeFamily::kIntegerZn && x.size() > kMaxDnDimension) {
    std::vector<double> big(x.size());
    nearest_point(lattice, x, big);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - big[i];
    return;
  }
  check_dimension(lattice, x.size());
  nearest_point(lattice, x, std::span<double>(q.data(), x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - q[i];
}

std::vector<double> mod_lattice(const LatticeSpec& lattice, std::span<const double> x) {
  std::vector<double> out(x.size());
  mod_lattice(lattice, x, out);
  return out;
}

bool in_voronoi(const LatticeSpec& lattice, std::span<const double> x) {
  std::vector<double> q(x.size());
  nearest_point(lattice, x, q);
  return std::all_of(q.begin(), q.end(), [](double v) { return v == 0.0; });
}

void sample_dither(const LatticeSpec& lattice, Rng& rng, std::span<double> out) {
  check_dimension(lattice, out.size());
  // Z^n contains Z^n; D4 and E8 contain 2Z^n.
  const double side = (lattice.family == LatticeFamily::kIntegerZn ? 1.0 : 2.0) * lattice.scale;
  std::vector<double> box(out.size());
  for (double& v : box) v = side * rng.uniform();
  mod_lattice(lattice, box, out);
}

DitherVector sample_dither(const LatticeSpec& lattice, std::uint64_t seed) {
  lattice.validate();
  Rng rng(seed);
  DitherVector dither{std::vector<double>(lattice.dimension)};
  sample_dither(lattice, rng, dither.values);
  return dither;
}

MomentEstimate second_moment_estimate(const LatticeSpec& lattice, std::size_t n_samples,
                                      std::uint64_t seed) {
  lattice.validate();
  if (n_samples < 1000) throw InvalidInput("second_moment_estimate needs at least 1000 samples");
  Rng rng(seed);
  std::vector<double> t(lattice.dimension);
  const double n = static_cast<double>(lattice.dimension);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    sample_dither(lattice, rng, t);
    double norm2 = 0.0;
    for (double v : t) norm2 += v * v;
    const double value = norm2 / n;
    const double delta = value - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (value - mean);
  }
  const double variance = m2 / static_cast<double>(n_samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(n_samples))};
}

// ---------------------------------------------------------------------------

NestedChain NestedChain::two_level(const LatticeSpec& fine, unsigned k2) {
  NestedChain chain{fine, 1, k2, 2};
  chain.validate();
  return chain;
}

NestedChain NestedChain::three_level(const LatticeSpec& finest, unsigned k1, unsigned k2) {
  NestedChain chain{finest, k1, k2, 3};
  chain.validate();
  return chain;
}

void NestedChain::validate() const {
  base.validate();
  if (levels != 2 && levels != 3) throw InvalidInput("a nested chain has 2 or 3 levels");
  if (k_mid_to_coarse == 0 || k_fine_to_mid == 0) {
    throw InvalidInput("nesting ratios must be positive integers");
  }
  if (levels == 2 && k_fine_to_mid != 1) {
    throw InvalidInput("a two-level chain has no refinement ratio");
  }
}

LatticeSpec NestedChain::finest() const { return base; }

LatticeSpec NestedChain::fine() const {
  return levels == 3 ? base.scaled_by(static_cast<double>(k_fine_to_mid)) : base;
}

LatticeSpec NestedChain::coarse() const {
  return fine().scaled_by(static_cast<double>(k_mid_to_coarse));
}

ChainRates chain_rates(const NestedChain& chain) {
  chain.validate();
  ChainRates rates;
  rates.common = std::log2(static_cast<double>(chain.k_mid_to_coarse));
  rates.refinement = chain.levels == 3 ? std::log2(static_cast<double>(chain.k_fine_to_mid)) : 0.0;
  rates.total = rates.common + rates.refinement;
  return rates;
}

std::uint64_t coset_count(const NestedChain& chain, CosetLevel level) {
  const CosetFrame frame = coset_frame(chain, level);
  const std::size_t n = frame.finer.dimension;
  if (static_cast<double>(n) * std::log2(static_cast<double>(frame.k)) >= 63.0) {
    throw InvalidInput("coset table k^n does not fit in 63 bits");
  }
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= frame.k;
  return count;
}

std::uint64_t coset_index(const NestedChain& chain, std::span<const double> leader,
                          CosetLevel level) {
  const CosetFrame frame = coset_frame(chain, level);
  coset_count(chain, level);  // rejects tables wider than 63 bits
  check_dimension(frame.finer, leader.size());
  const std::vector<double> q = nearest_point(frame.finer, leader);
  const double tol = 1e-9 * std::max(1.0, frame.finer.scale);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (std::abs(q[i] - leader[i]) > tol) {
      throw InvalidInput("coset leader is not a point of the finer lattice");
    }
  }
  if (!in_voronoi(frame.coarser, q)) {
    throw InvalidInput("coset leader lies outside the Voronoi cell of the coarser lattice");
  }
  const auto n = static_cast<Eigen::Index>(q.size());
  const Eigen::MatrixXd g = generator(frame.finer.family, q.size());
  Eigen::RowVectorXd point(n);
  for (Eigen::Index i = 0; i < n; ++i) point[i] = q[static_cast<std::size_t>(i)] / frame.finer.scale;
  const Eigen::RowVectorXd coords = point * g.inverse();
  const auto k = static_cast<long long>(frame.k);
  std::uint64_t index = 0;
  std::uint64_t radix = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    const long long z = std::llround(coords[i]);
    const long long digit = ((z % k) + k) % k;
    index += static_cast<std::uint64_t>(digit) * radix;
    radix *= frame.k;
  }
  return index;
}

std::vector<double> coset_leader_of(const NestedChain& chain, std::uint64_t index,
                                    CosetLevel level) {
  const CosetFrame frame = coset_frame(chain, level);
  const std::uint64_t count = coset_count(chain, level);
  if (index >= count) throw InvalidInput("coset index out of range");
  const std::size_t n = frame.finer.dimension;
  Eigen::RowVectorXd digits(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    digits[static_cast<Eigen::Index>(i)] = static_cast<double>(index % frame.k);
    index /= frame.k;
  }
  const Eigen::RowVectorXd point = digits * generator(frame.finer.family, n);
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = point[static_cast<Eigen::Index>(i)] * frame.finer.scale;
  return mod_lattice(frame.coarser, p);
}

}  // namespace lcf

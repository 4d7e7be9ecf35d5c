#pragma once

// Concrete lattice arithmetic: closest-point quantization for Z^n, D4 and E8,
// modulo-lattice reduction, dithering, self-similar nesting and coset indexing.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lcf/random.hpp"

namespace lcf {

enum class LatticeFamily { kIntegerZn, kD4, kE8 };

/// Config-file vocabulary: "Zn", "D4", "E8".
std::string_view family_name(LatticeFamily family) noexcept;
LatticeFamily parse_family(std::string_view name);

/// Dimension used when a family is picked by name: 4 for D4, 8 for E8, 1 for Zn.
std::size_t natural_dimension(LatticeFamily family) noexcept;

/// The lattice scale * L_base, where L_base is Z^n, D4 or E8 in their standard
/// coordinates (D4 = integer vectors with even sum, E8 = D8 union D8 + 1/2).
struct LatticeSpec {
  LatticeFamily family = LatticeFamily::kIntegerZn;
  std::size_t dimension = 1;
  double scale = 1.0;

  /// Validating constructor. D4 and E8 force their dimension.
  static LatticeSpec make(LatticeFamily family, std::size_t dimension, double scale = 1.0);

  /// Second moment per dimension of L_base: 1/12, 13/120, 929/12960.
  double base_second_moment() const noexcept;
  /// Voronoi cell volume of L_base: 1, 2, 1.
  double base_volume() const noexcept;

  double second_moment() const noexcept { return scale * scale * base_second_moment(); }
  double volume() const noexcept;
  /// Dimensionless normalized second moment G = sigma^2 / V^(2/n).
  double normalized_second_moment() const noexcept;

  LatticeSpec scaled_by(double factor) const;
  void validate() const;
};

/// Nearest lattice point. Equidistant candidates resolve to the
/// lexicographically smallest coordinate vector.
std::vector<double> nearest_point(const LatticeSpec& lattice, std::span<const double> x);
void nearest_point(const LatticeSpec& lattice, std::span<const double> x, std::span<double> out);

/// x - nearest_point(x), a point of the basic Voronoi cell.
std::vector<double> mod_lattice(const LatticeSpec& lattice, std::span<const double> x);
void mod_lattice(const LatticeSpec& lattice, std::span<const double> x, std::span<double> out);

/// True when x quantizes to the origin.
bool in_voronoi(const LatticeSpec& lattice, std::span<const double> x);

struct DitherVector {
  std::vector<double> values;
};

/// Uniform point of V(lattice). The generator draws a uniform point of the box
/// spanned by a cubic sublattice (Z^n or 2Z^n) and reduces it mod the lattice,
/// which is exactly uniform on the Voronoi cell.
DitherVector sample_dither(const LatticeSpec& lattice, std::uint64_t seed);
void sample_dither(const LatticeSpec& lattice, Rng& rng, std::span<double> out);

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo estimate of (1/n) E||T||^2 for T uniform on V(lattice).
MomentEstimate second_moment_estimate(const LatticeSpec& lattice, std::size_t n_samples,
                                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// Nesting

/// Self-similar chain. Two levels: fine = base, coarse = k2 * base.
/// Three levels: finest = base, fine = k1 * base, coarse = k2 * k1 * base.
struct NestedChain {
  LatticeSpec base;
  unsigned k_fine_to_mid = 1;
  unsigned k_mid_to_coarse = 1;
  int levels = 2;

  static NestedChain two_level(const LatticeSpec& fine, unsigned k2);
  static NestedChain three_level(const LatticeSpec& finest, unsigned k1, unsigned k2);

  LatticeSpec finest() const;
  LatticeSpec fine() const;
  LatticeSpec coarse() const;
  void validate() const;
};

/// Bits per dimension of the common, refinement and total codebooks.
struct ChainRates {
  double common = 0.0;
  double refinement = 0.0;
  double total = 0.0;
};

ChainRates chain_rates(const NestedChain& chain);

enum class CosetLevel { kCommon, kRefinement };

/// Number of coset leaders at the level, k^n. Throws when it exceeds 2^63.
std::uint64_t coset_count(const NestedChain& chain, CosetLevel level);

/// Mixed-radix index of a coset leader from its integer coordinates in the
/// generator basis of the finer lattice of the level.
std::uint64_t coset_index(const NestedChain& chain, std::span<const double> leader,
                          CosetLevel level);
std::vector<double> coset_leader_of(const NestedChain& chain, std::uint64_t index,
                                    CosetLevel level);

}  // namespace lcf

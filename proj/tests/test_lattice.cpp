#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <vector>

#include "doctest.h"
#include "lcf/error.hpp"
#include "lcf/lattice.hpp"
#include "support.hpp"

using namespace lcf;
using lcf::test::max_abs_diff;
using lcf::test::brute_force_distance;
using lcf::test::is_lattice_point;
using lcf::test::squared_distance;

namespace {

std::vector<LatticeSpec> all_families(double scale = 1.0) {
  return {LatticeSpec::make(LatticeFamily::kIntegerZn, 3, scale),
          LatticeSpec::make(LatticeFamily::kD4, 4, scale),
          LatticeSpec::make(LatticeFamily::kE8, 8, scale)};
}

}  // namespace

TEST_CASE("family vocabulary and spec invariants") {
  CHECK(family_name(LatticeFamily::kIntegerZn) == "Zn");
  CHECK(parse_family("E8") == LatticeFamily::kE8);
  CHECK_THROWS_AS(parse_family("A2"), InvalidInput);
  CHECK_THROWS_AS(LatticeSpec::make(LatticeFamily::kD4, 3), InvalidInput);
  CHECK_THROWS_AS(LatticeSpec::make(LatticeFamily::kE8, 4), InvalidInput);
  CHECK_THROWS_AS(LatticeSpec::make(LatticeFamily::kIntegerZn, 2, -1.0), InvalidInput);

  for (double a : {0.5, 1.0, 3.0}) {
    for (const LatticeSpec& l : all_families(a)) {
      CHECK(l.second_moment() == doctest::Approx(a * a * l.base_second_moment()).epsilon(1e-15));
      CHECK(l.volume() == doctest::Approx(std::pow(a, double(l.dimension)) * l.base_volume()));
    }
  }
  CHECK(LatticeSpec::make(LatticeFamily::kE8, 8).base_second_moment() == 929.0 / 12960.0);
  CHECK(LatticeSpec::make(LatticeFamily::kD4, 4).normalized_second_moment() ==
        doctest::Approx(13.0 / 120.0 / std::sqrt(2.0)));
}

TEST_CASE("nearest point examples") {
  const auto z1 = LatticeSpec::make(LatticeFamily::kIntegerZn, 1);
  const auto z1x2 = LatticeSpec::make(LatticeFamily::kIntegerZn, 1, 2.0);
  const auto d4 = LatticeSpec::make(LatticeFamily::kD4, 4);
  CHECK(nearest_point(z1, std::vector<double>{0.4}) == std::vector<double>{0.0});
  CHECK(nearest_point(z1x2, std::vector<double>{2.3}) == std::vector<double>{2.0});
  CHECK(nearest_point(d4, std::vector<double>{0.6, 0.6, 0.0, 0.0}) ==
        std::vector<double>{1.0, 1.0, 0.0, 0.0});
  CHECK_THROWS_AS(nearest_point(d4, std::vector<double>{0.1, 0.2}), InvalidInput);
}

TEST_CASE("ties resolve to the lexicographically smaller point") {
  const auto z1 = LatticeSpec::make(LatticeFamily::kIntegerZn, 1);
  CHECK(nearest_point(z1, std::vector<double>{0.5}) == std::vector<double>{0.0});
  CHECK(nearest_point(z1, std::vector<double>{-0.5}) == std::vector<double>{-1.0});
  const auto d4 = LatticeSpec::make(LatticeFamily::kD4, 4);
  // (1,0,0,0) is equidistant from the origin, (2,0,0,0) and (1,+-1,0,0) etc.
  CHECK(nearest_point(d4, std::vector<double>{1.0, 0.0, 0.0, 0.0}) ==
        std::vector<double>{0.0, 0.0, 0.0, 0.0});
  CHECK(nearest_point(d4, std::vector<double>{1.0, 1.0, 1.0, 0.0}) ==
        std::vector<double>{0.0, 1.0, 1.0, 0.0});
}

TEST_CASE("nearest point matches exhaustive search") {
  Rng rng(11);
  for (double a : {1.0, 0.7}) {
    for (const LatticeSpec& l : all_families(a)) {
      for (int t = 0; t < 100; ++t) {
        const auto x = lcf::test::uniform_vector(rng, l.dimension, -4.0, 4.0);
        const auto q = nearest_point(l, x);
        REQUIRE(is_lattice_point(l, q));
        CHECK(squared_distance(q, x) <= brute_force_distance(l, x) + 1e-12);
      }
    }
  }
}

TEST_CASE("mod lattice examples and cell membership") {
  const auto z1x2 = LatticeSpec::make(LatticeFamily::kIntegerZn, 1, 2.0);
  CHECK(mod_lattice(z1x2, std::vector<double>{2.3})[0] == doctest::Approx(0.3).epsilon(1e-12));
  const auto z2 = LatticeSpec::make(LatticeFamily::kIntegerZn, 2);
  const auto r = mod_lattice(z2, std::vector<double>{3.7, -1.2});
  CHECK(r[0] == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(-0.2).epsilon(1e-12));

  Rng rng(3);
  for (const LatticeSpec& l : all_families(1.3)) {
    for (int t = 0; t < 200; ++t) {
      const auto x = lcf::test::gaussian_vector(rng, l.dimension, 5.0);
      const auto m = mod_lattice(l, x);
      CHECK(in_voronoi(l, m));
      CHECK(max_abs_diff(mod_lattice(l, m), m) < 1e-12);
    }
  }
}

TEST_CASE("mod lattice distributive law") {
  Rng rng(5);
  for (const LatticeSpec& l : all_families(0.9)) {
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const auto x = lcf::test::gaussian_vector(rng, l.dimension, 4.0);
      const auto y = lcf::test::gaussian_vector(rng, l.dimension, 4.0);
      auto lhs = mod_lattice(l, x);
      std::vector<double> sum(l.dimension);
      for (std::size_t i = 0; i < l.dimension; ++i) {
        lhs[i] += y[i];
        sum[i] = x[i] + y[i];
      }
      worst = std::max(worst, max_abs_diff(mod_lattice(l, lhs), mod_lattice(l, sum)));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("dither lies in the cell and is seed deterministic") {
  const auto z1 = LatticeSpec::make(LatticeFamily::kIntegerZn, 1);
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const double t = sample_dither(z1, s).values[0];
    CHECK(t > -0.5);
    CHECK(t <= 0.5);
  }
  for (const LatticeSpec& l : all_families(2.0)) {
    const auto a = sample_dither(l, 42).values;
    CHECK(a == sample_dither(l, 42).values);
    CHECK(a != sample_dither(l, 43).values);
    CHECK(max_abs_diff(mod_lattice(l, a), a) < 1e-12);
  }
}

TEST_CASE("dither moments over 1e5 samples") {
  constexpr std::size_t kN = 100000;
  for (const LatticeSpec& l : all_families()) {
    Rng rng(17);
    std::vector<double> sum(l.dimension, 0.0);
    double energy = 0.0;
    std::vector<double> t(l.dimension);
    for (std::size_t k = 0; k < kN; ++k) {
      sample_dither(l, rng, t);
      for (std::size_t i = 0; i < l.dimension; ++i) {
        sum[i] += t[i];
        energy += t[i] * t[i];
      }
    }
    const double sd = std::sqrt(l.second_moment());
    for (double s : sum) CHECK(std::abs(s / kN) < 3.0 * sd / std::sqrt(double(kN)));
    const double var = energy / double(kN * l.dimension);
    CHECK(std::abs(var / l.base_second_moment() - 1.0) < 0.05);
  }
}

TEST_CASE("second moment estimates") {
  const auto z1 = LatticeSpec::make(LatticeFamily::kIntegerZn, 1);
  const auto z1x3 = LatticeSpec::make(LatticeFamily::kIntegerZn, 1, 3.0);
  const auto e8 = LatticeSpec::make(LatticeFamily::kE8, 8);
  const MomentEstimate m1 = second_moment_estimate(z1, 1000000, 1);
  const MomentEstimate m3 = second_moment_estimate(z1x3, 1000000, 2);
  const MomentEstimate me8 = second_moment_estimate(e8, 1000000, 3);
  CHECK(std::abs(m1.value * 12.0 - 1.0) < 0.01);
  CHECK(std::abs(m3.value / 0.75 - 1.0) < 0.01);
  CHECK(std::abs(me8.value / (929.0 / 12960.0) - 1.0) < 0.01);
  CHECK(m1.std_error > 0.0);
  CHECK_THROWS_AS(second_moment_estimate(z1, 10, 1), InvalidInput);

  // Self-similar scaling within combined Monte-Carlo error.
  const double ratio = m3.value / m1.value;
  const double err = ratio * std::hypot(m1.std_error / m1.value, m3.std_error / m3.value);
  CHECK(std::abs(ratio - 9.0) < 4.0 * err);
}

TEST_CASE("Crypto Lemma: shifted dither is distributed like the dither") {
  constexpr std::size_t kN = 100000;
  for (const LatticeSpec& l : all_families(1.5)) {
    const std::vector<double> x = {0.37, -2.1, 5.3, 0.9, -0.2, 1.7, 3.3, -4.4};
    std::vector<std::vector<double>> shifted(l.dimension), plain(l.dimension);
    std::vector<double> v(l.dimension);
    for (std::size_t s = 0; s < kN; ++s) {
      const auto t = sample_dither(l, s).values;
      for (std::size_t i = 0; i < l.dimension; ++i) v[i] = x[i] + t[i];
      const auto r = mod_lattice(l, v);
      const auto u = sample_dither(l, s + kN).values;
      for (std::size_t i = 0; i < l.dimension; ++i) {
        shifted[i].push_back(r[i]);
        plain[i].push_back(u[i]);
      }
    }
    for (std::size_t i = 0; i < l.dimension; ++i) {
      CHECK(lcf::test::ks_statistic(shifted[i], plain[i]) < lcf::test::ks_critical_001(kN, kN));
    }
  }
}

TEST_CASE("nesting: coarse points are fine points") {
  Rng rng(23);
  for (const LatticeSpec& base : all_families(0.8)) {
    const auto chain = NestedChain::three_level(base, 2, 3);
    for (int t = 0; t < 100; ++t) {
      const auto x = lcf::test::gaussian_vector(rng, base.dimension, 10.0);
      const auto q2 = nearest_point(chain.coarse(), x);
      CHECK(is_lattice_point(chain.fine(), q2));
      CHECK(is_lattice_point(chain.finest(), q2));
      CHECK(is_lattice_point(chain.finest(), nearest_point(chain.fine(), x)));
    }
    CHECK(chain.coarse().second_moment() / chain.fine().second_moment() ==
          doctest::Approx(9.0).epsilon(1e-14));
  }
}

TEST_CASE("nesting idempotence, coarse then fine") {
  Rng rng(29);
  for (const LatticeSpec& base : all_families(0.6)) {
    for (unsigned k : {2u, 3u, 4u}) {
      const auto chain = NestedChain::two_level(base, k);
      for (int t = 0; t < 1000; ++t) {
        const auto x = lcf::test::gaussian_vector(rng, base.dimension, 6.0);
        const auto q2 = nearest_point(chain.coarse(), x);
        CHECK(max_abs_diff(nearest_point(chain.fine(), q2), q2) < 1e-12);
      }
    }
  }
}

TEST_CASE("nesting idempotence, fine then coarse, for cubic chains with odd ratio") {
  Rng rng(31);
  for (std::size_t n : {1u, 2u, 5u}) {
    for (unsigned k : {3u, 5u, 7u}) {
      const auto chain =
          NestedChain::two_level(LatticeSpec::make(LatticeFamily::kIntegerZn, n, 0.4), k);
      for (int t = 0; t < 1000; ++t) {
        const auto x = lcf::test::gaussian_vector(rng, n, 8.0);
        const auto q2 = nearest_point(chain.coarse(), x);
        CHECK(max_abs_diff(nearest_point(chain.coarse(), nearest_point(chain.fine(), x)), q2) <
              1e-12);
      }
    }
  }
}

TEST_CASE("fine-then-coarse quantization is not idempotent for even ratios") {
  // Z inside 2Z: Q_Z(1.1) = 1 sits on the boundary of the 2Z cell and the tie
  // resolves to 0, while Q_2Z(1.1) = 2.
  const auto chain = NestedChain::two_level(LatticeSpec::make(LatticeFamily::kIntegerZn, 1), 2);
  const std::vector<double> x{1.1};
  CHECK(nearest_point(chain.coarse(), nearest_point(chain.fine(), x))[0] == 0.0);
  CHECK(nearest_point(chain.coarse(), x)[0] == 2.0);
}

TEST_CASE("chain rates") {
  const auto z2 = LatticeSpec::make(LatticeFamily::kIntegerZn, 2);
  const ChainRates r2 = chain_rates(NestedChain::two_level(z2, 4));
  CHECK(r2.common == doctest::Approx(2.0));
  CHECK(r2.refinement == 0.0);

  const auto z1 = LatticeSpec::make(LatticeFamily::kIntegerZn, 1);
  const auto chain = NestedChain::three_level(z1, 3, 4);
  const ChainRates r3 = chain_rates(chain);
  CHECK(r3.common == doctest::Approx(2.0));
  CHECK(r3.refinement == doctest::Approx(std::log2(3.0)));
  CHECK(r3.total == doctest::Approx(2.0 + std::log2(3.0)));
  const double from_moments =
      0.5 * std::log2(chain.coarse().second_moment() / chain.finest().second_moment());
  CHECK(from_moments == doctest::Approx(r3.total).epsilon(1e-14));

  CHECK_THROWS_AS(NestedChain::two_level(z1, 0), InvalidInput);
}

TEST_CASE("coset index examples") {
  const auto z1 = LatticeSpec::make(LatticeFamily::kIntegerZn, 1);
  const auto c1 = NestedChain::two_level(z1, 4);
  CHECK(coset_index(c1, std::vector<double>{0.0}, CosetLevel::kCommon) == 0);
  CHECK_THROWS_AS(coset_index(c1, std::vector<double>{0.5}, CosetLevel::kCommon), InvalidInput);
  CHECK_THROWS_AS(coset_index(c1, std::vector<double>{3.0}, CosetLevel::kCommon), InvalidInput);
  CHECK_THROWS_AS(coset_leader_of(c1, 4, CosetLevel::kCommon), InvalidInput);

  const auto z2 = LatticeSpec::make(LatticeFamily::kIntegerZn, 2);
  const auto c2 = NestedChain::two_level(z2, 4);
  CHECK(coset_count(c2, CosetLevel::kCommon) == 16);
  for (long a = -1; a <= 2; ++a) {
    for (long b = -1; b <= 2; ++b) {
      const auto idx = coset_index(c2, std::vector<double>{double(a), double(b)},
                                   CosetLevel::kCommon);
      CHECK(idx < 16);
    }
  }
}

TEST_CASE("coset index is a bijection on the leaders") {
  struct Case {
    NestedChain chain;
    CosetLevel level;
  };
  const auto z2 = LatticeSpec::make(LatticeFamily::kIntegerZn, 2);
  const auto d4 = LatticeSpec::make(LatticeFamily::kD4, 4, 0.5);
  const auto e8 = LatticeSpec::make(LatticeFamily::kE8, 8, 1.7);
  const std::vector<Case> cases = {
      {NestedChain::two_level(z2, 3), CosetLevel::kCommon},
      {NestedChain::two_level(d4, 3), CosetLevel::kCommon},
      {NestedChain::two_level(e8, 2), CosetLevel::kCommon},
      {NestedChain::three_level(e8, 2, 3), CosetLevel::kRefinement},
      {NestedChain::three_level(d4, 3, 2), CosetLevel::kCommon},
  };
  for (const Case& c : cases) {
    const std::uint64_t count = coset_count(c.chain, c.level);
    const LatticeSpec coarse = c.level == CosetLevel::kCommon ? c.chain.coarse() : c.chain.fine();
    const LatticeSpec fine = c.level == CosetLevel::kCommon ? c.chain.fine() : c.chain.finest();
    std::set<std::vector<double>> seen;
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto leader = coset_leader_of(c.chain, i, c.level);
      CHECK(in_voronoi(coarse, leader));
      CHECK(is_lattice_point(fine, leader));
      CHECK(coset_index(c.chain, leader, c.level) == i);
      seen.insert(leader);
    }
    CHECK(seen.size() == count);
  }
}

// Exercises the shared library through its C header only.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "lcf/lcf.h"

namespace fs = std::filesystem;

namespace {

lcf_channel sym20() {
  lcf_channel ch{};
  REQUIRE(lcf_channel_from_db(20, 20, 20, 1, 1, 1, 1, 1, &ch) == LCF_OK);
  return ch;
}

lcf_channel fig7a() {
  lcf_channel ch{};
  REQUIRE(lcf_channel_from_db(10, 5, 5, 2, 0.5, 1, 1, 1, &ch) == LCF_OK);
  return ch;
}

std::string serialized(const lcf_experiment* e) {
  std::size_t needed = 0;
  REQUIRE(lcf_experiment_serialize(e, nullptr, 0, &needed) == LCF_OK);
  std::string s(needed + 1, '\0');
  REQUIRE(lcf_experiment_serialize(e, s.data(), s.size(), &needed) == LCF_OK);
  s.resize(needed);
  return s;
}

}  // namespace

TEST_CASE("library identity and status names") {
  CHECK(std::strlen(lcf_version()) > 0);
  CHECK(std::string(lcf_status_name(LCF_OK)) != std::string(lcf_status_name(LCF_ERR_CONFIG)));
  CHECK(lcf_status_name(static_cast<lcf_status>(99)) != nullptr);
}

TEST_CASE("channels and rates") {
  const lcf_channel ch = sym20();
  CHECK(ch.P1 == doctest::Approx(100.0));
  CHECK(ch.h1 == doctest::Approx(1.0));

  lcf_rates r{};
  REQUIRE(lcf_rates_eval(LCF_SCHEME_LCF1, &ch, 0.5, 1.0, &r) == LCF_OK);
  CHECK(r.r12 == doctest::Approx(1.416342818581165).epsilon(1e-13));
  REQUIRE(lcf_rates_eval(LCF_SCHEME_AF, &ch, 0.3, 1.0, &r) == LCF_OK);
  CHECK(r.r12 == doctest::Approx(1.274219275219747).epsilon(1e-13));
  CHECK(r.alpha == 0.5);
  REQUIRE(lcf_rates_eval(LCF_SCHEME_DF, &ch, 0.5, 1.0, &r) == LCF_OK);
  CHECK(std::isfinite(r.sum_cap));

  double eq = 0.0;
  REQUIRE(lcf_equal_rate(LCF_SCHEME_OUTER, &ch, 201, 1, &eq) == LCF_OK);
  CHECK(eq == doctest::Approx(1.66455287068795).epsilon(1e-12));
  REQUIRE(lcf_equal_rate(LCF_SCHEME_DF, &ch, 201, 1, &eq) == LCF_OK);
  CHECK(eq == doctest::Approx(1.21460445597465).epsilon(1e-12));

  lcf_channel swapped{};
  REQUIRE(lcf_channel_from_db(5, 10, 5, 0.5, 2, 1, 1, 1, &swapped) == LCF_OK);
  const lcf_channel c7 = fig7a();
  lcf_rates a{}, b{};
  REQUIRE(lcf_rates_eval(LCF_SCHEME_LCF2, &c7, 0.4, 0.6, &a) == LCF_OK);
  REQUIRE(lcf_rates_eval(LCF_SCHEME_LCF2, &swapped, 0.4, 0.6, &b) == LCF_OK);
  CHECK(a.r12 == doctest::Approx(b.r21).epsilon(1e-12));
  CHECK(a.relabeled != b.relabeled);
}

TEST_CASE("errors are reported, not thrown") {
  const lcf_channel ch = sym20();
  lcf_rates r{};
  CHECK(lcf_rates_eval(LCF_SCHEME_LCF1, &ch, 1.5, 1.0, &r) == LCF_ERR_INVALID);
  CHECK(std::string(lcf_last_error()).find("alpha") != std::string::npos);
  CHECK(lcf_rates_eval(LCF_SCHEME_LCF1, nullptr, 0.5, 1.0, &r) == LCF_ERR_INVALID);
  CHECK(lcf_rates_eval(static_cast<lcf_scheme>(42), &ch, 0.5, 1.0, &r) == LCF_ERR_INVALID);

  lcf_channel bad = ch;
  bad.h1 = 0.0;
  CHECK(lcf_rates_eval(LCF_SCHEME_LCF1, &bad, 0.5, 1.0, &r) == LCF_ERR_INVALID);
  lcf_channel out{};
  CHECK(lcf_channel_from_db(20, 20, 20, -1, 1, 1, 1, 1, &out) == LCF_ERR_INVALID);

  lcf_distortion d{};
  CHECK(lcf_distortions(LCF_SCHEME_LCF1, &ch, 0.0, 1.0, 1.0, &d) == LCF_ERR_DEGENERATE);
  CHECK(lcf_distortions(LCF_SCHEME_AF, &ch, 0.5, 1.0, 1.0, &d) == LCF_ERR_INVALID);
}

TEST_CASE("parameters and distortions") {
  const lcf_channel ch = fig7a();
  lcf_params p{};
  REQUIRE(lcf_optimal_params(LCF_SCHEME_LCF2, &ch, 0.5, 0.5, 1.0, &p) == LCF_OK);
  CHECK(p.gamma1_star == doctest::Approx(0.1842574582922437).epsilon(1e-12));
  CHECK(p.gamma2_star == doctest::Approx(0.3062870566386036).epsilon(1e-12));
  CHECK(p.sigma2_lambda0_min < p.sigma2_lambda1_min);
  CHECK(p.degenerate == 0);

  lcf_distortion d{};
  REQUIRE(lcf_distortions(LCF_SCHEME_LCF2, &ch, 0.5, 0.5, 1.0, &d) == LCF_OK);
  CHECK(d.d1_min == doctest::Approx(2.105544749753462).epsilon(1e-12));
  CHECK(d.d2_min == doctest::Approx(14.56797181058933).epsilon(1e-12));
  REQUIRE(lcf_distortions(LCF_SCHEME_LCF1, &ch, 0.5, 1.0, 1.0, &d) == LCF_OK);
  CHECK(d.d1_min == doctest::Approx(2.16114251426).epsilon(1e-10));
}

TEST_CASE("lattice handles") {
  lcf_lattice* lat = nullptr;
  REQUIRE(lcf_lattice_create(LCF_FAMILY_D4, 4, 2.0, &lat) == LCF_OK);
  CHECK(lcf_lattice_dimension(lat) == 4);
  CHECK(lcf_lattice_second_moment(lat) > 0.0);
  const double x[4] = {2.2, 1.9, 0.1, -0.2};
  double q[4], m[4];
  REQUIRE(lcf_lattice_nearest(lat, x, q) == LCF_OK);
  REQUIRE(lcf_lattice_mod(lat, x, m) == LCF_OK);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    CHECK(std::fmod(q[i], 2.0) == 0.0);
    CHECK(m[i] == doctest::Approx(x[i] - q[i]).epsilon(1e-15));
    sum += q[i] / 2.0;
  }
  CHECK(std::fmod(sum, 2.0) == 0.0);
  lcf_lattice_destroy(lat);
  lcf_lattice_destroy(nullptr);

  CHECK(lcf_lattice_create(LCF_FAMILY_E8, 4, 1.0, &lat) == LCF_ERR_INVALID);
  CHECK(lat == nullptr);
  CHECK(lcf_lattice_create(LCF_FAMILY_ZN, 3, -1.0, &lat) == LCF_ERR_INVALID);
}

TEST_CASE("simulation") {
  const lcf_channel ch = sym20();
  lcf_sim_request req{};
  lcf_sim_request_defaults(&req);
  req.n_blocks = 200;
  req.margin = 3.0;
  req.seed = 11;
  lcf_sim_report one{}, four{};
  REQUIRE(lcf_simulate(&ch, &req, &one) == LCF_OK);
  req.workers = 4;
  REQUIRE(lcf_simulate(&ch, &req, &four) == LCF_OK);
  CHECK(std::memcmp(&one, &four, sizeof one) == 0);
  CHECK(one.vector_count == 200);
  CHECK(one.max_identity_residual < 1e-10);
  CHECK(one.realized_margin >= 3.0);

  req.scheme = LCF_SCHEME_DF;
  CHECK(lcf_simulate(&ch, &req, &one) == LCF_ERR_INVALID);
}

TEST_CASE("experiments") {
  const fs::path dir = fs::temp_directory_path() / "lcf_capi_exp";
  fs::remove_all(dir);
  fs::create_directories(dir);

  SUBCASE("preset run writes its tables") {
    lcf_experiment* e = nullptr;
    REQUIRE(lcf_experiment_from_preset("fig8d", &e) == LCF_OK);
    REQUIRE(lcf_experiment_set_grid(e, 21, 11, 11) == LCF_OK);
    REQUIRE(lcf_experiment_set_output(e, (dir / "f8d.csv").c_str()) == LCF_OK);
    REQUIRE(lcf_experiment_run(e) == LCF_OK);
    REQUIRE(lcf_experiment_output_count(e) >= 2);
    for (std::size_t i = 0; i < lcf_experiment_output_count(e); ++i) {
      CHECK(fs::exists(lcf_experiment_output_path(e, i)));
    }
    CHECK(lcf_experiment_output_path(e, 99) == nullptr);
    const std::string yaml = serialized(e);
    CHECK(yaml.find("alpha: 21") != std::string::npos);
    lcf_experiment_destroy(e);
  }
  SUBCASE("serialize respects the buffer size") {
    lcf_experiment* e = nullptr;
    REQUIRE(lcf_experiment_from_preset("fig6", &e) == LCF_OK);
    char small[8];
    std::size_t needed = 0;
    REQUIRE(lcf_experiment_serialize(e, small, sizeof small, &needed) == LCF_OK);
    CHECK(needed > sizeof small);
    CHECK(small[sizeof small - 1] == '\0');
    lcf_experiment* copy = nullptr;
    REQUIRE(lcf_experiment_from_string(serialized(e).c_str(), &copy) == LCF_OK);
    CHECK(serialized(copy) == serialized(e));
    lcf_experiment_destroy(copy);
    lcf_experiment_destroy(e);
  }
  SUBCASE("validation happens at run time") {
    lcf_experiment* e = nullptr;
    REQUIRE(lcf_experiment_from_string("kind: simulate\nsimulate: {n_blocks: 20}\n", &e) == LCF_OK);
    CHECK(lcf_experiment_run(e) == LCF_ERR_CONFIG);
    CHECK(std::string(lcf_last_error()).find("seed") != std::string::npos);
    REQUIRE(lcf_experiment_set_seed(e, 3) == LCF_OK);
    REQUIRE(lcf_experiment_set_output(e, (dir / "sim.csv").c_str()) == LCF_OK);
    CHECK(lcf_experiment_run(e) == LCF_OK);
    CHECK(lcf_experiment_set_kind(e, "sweep") == LCF_ERR_CONFIG);
    lcf_experiment_destroy(e);
  }
  SUBCASE("bad sources") {
    lcf_experiment* e = nullptr;
    CHECK(lcf_experiment_from_preset("fig42", &e) == LCF_ERR_CONFIG);
    CHECK(e == nullptr);
    CHECK(lcf_experiment_from_string("kind: region\nnope: 1\n", &e) == LCF_ERR_CONFIG);
    CHECK(std::string(lcf_last_error()).find("line 2") != std::string::npos);
    CHECK(lcf_experiment_from_file((dir / "missing.yaml").c_str(), &e) == LCF_ERR_CONFIG);
    std::ofstream(dir / "ok.yaml") << "preset: fig7b\n";
    REQUIRE(lcf_experiment_from_file((dir / "ok.yaml").c_str(), &e) == LCF_OK);
    lcf_experiment_destroy(e);
  }
}

TEST_CASE("preset catalog") {
  REQUIRE(lcf_preset_count() == 9);
  CHECK(std::string(lcf_preset_name(2)) == "fig6");
  CHECK(std::string(lcf_preset_kind(2)) == "equal_rate");
  CHECK(std::string(lcf_preset_caption(8)).find("P1 = 5 dB") != std::string::npos);
  CHECK(lcf_preset_name(9) == nullptr);
}

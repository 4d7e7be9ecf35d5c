#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lcf/error.hpp"
#include "lcf/harness.hpp"

using namespace lcf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string golden(const std::string& name) {
  std::string s = slurp(fs::path(LCF_GOLDEN_DIR) / name);
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

int error_line(std::string_view yaml) {
  try {
    parse_config(yaml);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -2;
}

ExperimentConfig small(std::string_view preset, ExperimentKind kind) {
  ExperimentConfig c = config_from_preset(preset);
  c.kind = kind;
  c.grid = {21, 11, 11};
  return c;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("lcf_harness_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("preset catalog") {
  const auto& all = list_presets();
  REQUIRE(all.size() == 9);
  const char* names[] = {"fig5a", "fig5b", "fig6",  "fig7a", "fig7b",
                         "fig8a", "fig8b", "fig8c", "fig8d"};
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i].name == names[i]);
  CHECK(find_preset("fig6").kind == ExperimentKind::kEqualRate);
  CHECK_THROWS_AS(find_preset("fig9"), ConfigError);

  struct Row {
    const char* name;
    double p1, p2, pr, h1, h2;
  };
  const Row rows[] = {{"fig5a", 15, 10, 20, 0.5, 1},  {"fig5b", 10, 15, 20, 2, 0.5},
                      {"fig7a", 10, 5, 5, 2, 0.5},    {"fig7b", 10, 5, 5, 6, 0.5},
                      {"fig8a", 30, 25, 30, 1, 0.2},  {"fig8b", 20, 18, 17, 4, 0.5},
                      {"fig8c", 10, 9, 9, 4, 2},      {"fig8d", 5, 3, 3, 4, 0.5}};
  for (const Row& r : rows) {
    const ChannelDb c = find_preset(r.name).channel;
    CHECK(c.p1_db == r.p1);
    CHECK(c.p2_db == r.p2);
    CHECK(c.pr_db == r.pr);
    CHECK(c.h1_sq == r.h1);
    CHECK(c.h2_sq == r.h2);
    CHECK(c.sigma_r2 == 1.0);
    CHECK(find_preset(r.name).caption.find("P1 = ") != std::string::npos);
  }
}

TEST_CASE("config round trip") {
  for (const FigurePreset& p : list_presets()) {
    ExperimentConfig c = config_from_preset(p.name);
    c.mc.seed = 17;
    c.output_path = "out/" + p.name + ".csv";
    const std::string text = serialize_config(c);
    const ExperimentConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
  }
  ExperimentConfig odd = config_from_preset("fig7a");
  odd.kind = ExperimentKind::kDistortion;
  odd.schemes = {Scheme::kLcf1, Scheme::kLcf2};
  odd.channel.p1_db = 0.1 + 0.2;  // not exactly representable
  odd.distortion.alphas = {0.25, 0.5};
  odd.snr = {-3.5, 12, 0.5};
  odd.workers = 3;
  CHECK(parse_config(serialize_config(odd)) == odd);
}

TEST_CASE("config parsing") {
  SUBCASE("preset then overrides") {
    const ExperimentConfig c = parse_config(
        "preset: fig7a\n"
        "channel: {p1_db: 12}\n"
        "grid: {alpha: 51}\n");
    CHECK(c.channel.p1_db == 12);
    CHECK(c.channel.h1_sq == 2);
    CHECK(c.grid.alpha == 51);
    CHECK(c.grid.nu == 201);
    CHECK(c.kind == ExperimentKind::kRegion);
  }
  SUBCASE("kinds") {
    CHECK(parse_kind("equal-rate") == ExperimentKind::kEqualRate);
    CHECK(parse_kind("equal_rate") == ExperimentKind::kEqualRate);
    CHECK(kind_name(ExperimentKind::kSimulate) == "simulate");
    CHECK_THROWS_AS(parse_kind("sweep"), ConfigError);
  }
  SUBCASE("errors name the offending line") {
    CHECK(error_line("kind: region\nchannel:\n  p1_db: loud\n") == 3);
    CHECK(error_line("kind: region\nbogus: 1\n") == 2);
    CHECK(error_line("kind: region\ngrid: {alpha: 5, beta: 2}\n") == 2);
    CHECK(error_line("kind: region\nschemes: [LCF1, XYZ]\n") == 2);
    CHECK(error_line("kind: [unclosed\n") >= 1);
    CHECK(error_line("kind: region\nworkers: 1.5\n") == 2);
  }
  SUBCASE("semantic errors") {
    CHECK_THROWS_AS(parse_config(""), ConfigError);
    CHECK_THROWS_AS(parse_config("kind: simulate\n"), ConfigError);  // seed missing
    CHECK_NOTHROW(parse_config("kind: simulate\n", false));
    CHECK_NOTHROW(parse_config("kind: simulate\nsimulate: {seed: 3}\n"));
    CHECK_THROWS_AS(parse_config("channel: {h1_sq: 0}\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("channel: {sigma_r2: -1}\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("grid: {alpha: 0}\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("workers: 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schemes: []\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("kind: distortion\nschemes: [AF]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("kind: equal_rate\nsnr_db: {start: 5, stop: 1}\n"), ConfigError);
    CHECK_THROWS_AS(
        parse_config("kind: simulate\nsimulate: {seed: 1, lattice: E8, block_dim: 12}\n"),
        ConfigError);
    CHECK_THROWS_AS(parse_config("kind: simulate\nsimulate: {seed: 1, scheme: DF}\n"),
                    ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/dir/x.yaml"), ConfigError);
  }
  SUBCASE("file loading") {
    const fs::path d = scratch_dir("load");
    std::ofstream(d / "c.yaml") << "preset: fig8c\nworkers: 2\n";
    const ExperimentConfig c = load_config((d / "c.yaml").string());
    CHECK(c.workers == 2);
    CHECK(c.channel.h2_sq == 2);
  }
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.2) == "0.2");
  CHECK(format_number(1.416342818581165) == "1.41634281858");
  CHECK(format_number(-2.5e-7) == "-2.5e-07");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("table layout") {
  SUBCASE("region") {
    ExperimentConfig c = small("fig7a", ExperimentKind::kRegion);
    c.schemes = {Scheme::kLcf1, Scheme::kLcf2};
    const auto tables = compute(c);
    REQUIRE(tables.size() == 4);
    CHECK(tables[0].suffix == "_LCF1");
    CHECK(tables[1].suffix == "_LCF1_hull");
    CHECK(join(tables[0].header) == golden("region.header"));
    CHECK(join(tables[1].header) == golden("region_hull.header"));
    CHECK(tables[0].rows.size() == 11);
    for (const auto& t : tables) {
      for (const auto& row : t.rows) CHECK(row.size() == t.header.size());
    }
  }
  SUBCASE("equal rate") {
    ExperimentConfig c = config_from_preset("fig6");
    const auto tables = compute(c);
    REQUIRE(tables.size() == 1);
    CHECK(join(tables[0].header) == golden("equal_rate_fig6.header"));
    CHECK(tables[0].rows.size() == 31);
    CHECK(tables[0].to_string() == golden("equal_rate_fig6.csv") + "\n");
  }
  SUBCASE("distortion") {
    ExperimentConfig c = small("fig7a", ExperimentKind::kDistortion);
    c.schemes = {Scheme::kLcf1, Scheme::kLcf2};
    const auto t = compute(c).at(0);
    CHECK(join(t.header) == golden("distortion.header"));
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][4] == "2.10554474975");
    CHECK(t.rows[1][5] == "14.5679718106");
  }
  SUBCASE("asymptotics") {
    const auto t = compute(small("fig6", ExperimentKind::kAsymptotics)).at(0);
    CHECK(join(t.header) == golden("asymptotics.header"));
    CHECK(t.rows.size() == 31);
  }
  SUBCASE("simulate") {
    ExperimentConfig c = small("fig6", ExperimentKind::kSimulate);
    c.mc.seed = 5;
    c.mc.n_blocks = 50;
    const auto t = compute(c).at(0);
    CHECK(join(t.header) == golden("simulate.header"));
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].size() == t.header.size());
  }
  CHECK(table_path("out/a.csv", "_LCF1") == "out/a_LCF1.csv");
  CHECK(table_path("out/a", "_x") == "out/a_x.csv");
  CHECK(table_path("a.b/c.csv", "") == "a.b/c.csv");
}

TEST_CASE("runs are reproducible") {
  const fs::path d = scratch_dir("repro");
  ExperimentConfig c = small("fig6", ExperimentKind::kSimulate);
  c.mc.seed = 99;
  c.mc.n_blocks = 200;
  c.mc.scheme = Scheme::kLcf2;
  c.output_path = (d / "one.csv").string();
  c.workers = 1;
  REQUIRE(run(c).size() == 1);
  c.output_path = (d / "two.csv").string();
  c.workers = 4;
  run(c);
  c.output_path = (d / "three.csv").string();
  run(c);
  CHECK(slurp(d / "one.csv") == slurp(d / "two.csv"));
  CHECK(slurp(d / "two.csv") == slurp(d / "three.csv"));

  c.mc.seed = 100;
  c.output_path = (d / "four.csv").string();
  run(c);
  CHECK(slurp(d / "one.csv") != slurp(d / "four.csv"));

  ExperimentConfig r = small("fig8b", ExperimentKind::kRegion);
  r.schemes = {Scheme::kLcf2, Scheme::kDf};
  r.output_path = (d / "r1.csv").string();
  r.workers = 1;
  const auto p1 = run(r);
  r.output_path = (d / "r2.csv").string();
  r.workers = 3;
  const auto p2 = run(r);
  REQUIRE(p1.size() == 4);
  for (std::size_t i = 0; i < p1.size(); ++i) CHECK(slurp(p1[i]) == slurp(p2[i]));
}

TEST_CASE("stdout sink and write failures") {
  ExperimentConfig c = small("fig6", ExperimentKind::kAsymptotics);
  std::string sink;
  CHECK(run(c, &sink).empty());
  CHECK(sink.find("snr_dB,r_df_low") != std::string::npos);

  const fs::path d = scratch_dir("sink");
  std::ofstream(d / "plain") << "x";
  c.output_path = (d / "plain" / "out.csv").string();  // parent is a regular file
  CHECK_THROWS_AS(run(c), IoError);
}

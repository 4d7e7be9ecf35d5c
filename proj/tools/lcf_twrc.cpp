// Command-line front-end. Talks to the library through the C interface only.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lcf/lcf.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

int exit_code(lcf_status s) {
  switch (s) {
    case LCF_OK: return kExitOk;
    case LCF_ERR_CONFIG:
    case LCF_ERR_INVALID:
    case LCF_ERR_IO: return kExitConfig;
    case LCF_ERR_INFEASIBLE:
    case LCF_ERR_DEGENERATE: return kExitInfeasible;
    case LCF_ERR_INTERNAL: break;
  }
  return kExitInternal;
}

int report(lcf_status s) {
  std::fprintf(stderr, "lcf_twrc: %s: %s\n", lcf_status_name(s), lcf_last_error());
  return exit_code(s);
}

struct Options {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t grid_alpha = 0;
  std::size_t grid_nu = 0;
  std::size_t grid_eta = 0;
  unsigned workers = 0;
};

// Experiment kinds share one flag set.
CLI::App* add_experiment(CLI::App& app, const char* name, const char* help, Options& o) {
  CLI::App* sub = app.add_subcommand(name, help);
  auto* cfg = sub->add_option("--config", o.config, "YAML experiment file");
  sub->add_option("--preset", o.preset, "named figure preset (see `presets`)")->excludes(cfg);
  sub->add_option("--seed", o.seed, "Monte-Carlo seed");
  sub->add_option("--out", o.out, "output CSV path; tables go to stdout when omitted");
  sub->add_option("--grid-alpha", o.grid_alpha, "alpha grid points")->check(CLI::PositiveNumber);
  sub->add_option("--grid-nu", o.grid_nu, "nu grid points")->check(CLI::PositiveNumber);
  sub->add_option("--grid-eta", o.grid_eta, "eta grid points")->check(CLI::PositiveNumber);
  sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  return sub;
}

int run_experiment(const std::string& kind, const Options& o) {
  lcf_experiment* exp = nullptr;
  lcf_status s;
  if (!o.config.empty()) {
    s = lcf_experiment_from_file(o.config.c_str(), &exp);
  } else if (!o.preset.empty()) {
    s = lcf_experiment_from_preset(o.preset.c_str(), &exp);
  } else {
    s = lcf_experiment_from_string("{}", &exp);
  }
  if (s != LCF_OK) return report(s);

  s = lcf_experiment_set_kind(exp, kind.c_str());
  if (s == LCF_OK && o.seed) s = lcf_experiment_set_seed(exp, *o.seed);
  if (s == LCF_OK) s = lcf_experiment_set_grid(exp, o.grid_alpha, o.grid_nu, o.grid_eta);
  if (s == LCF_OK && !o.out.empty()) s = lcf_experiment_set_output(exp, o.out.c_str());
  if (s == LCF_OK && o.workers) s = lcf_experiment_set_workers(exp, o.workers);
  if (s == LCF_OK) s = lcf_experiment_run(exp);
  if (s == LCF_OK) {
    for (std::size_t i = 0; i < lcf_experiment_output_count(exp); ++i) {
      std::fprintf(stderr, "wrote %s\n", lcf_experiment_output_path(exp, i));
    }
  }
  lcf_experiment_destroy(exp);
  return s == LCF_OK ? kExitOk : report(s);
}

void print_presets() {
  std::printf("name,kind,caption\n");
  for (std::size_t i = 0; i < lcf_preset_count(); ++i) {
    std::printf("%s,%s,\"%s\"\n", lcf_preset_name(i), lcf_preset_kind(i), lcf_preset_caption(i));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice compress-and-forward for the two-way relay channel"};
  app.set_version_flag("--version", std::string(lcf_version()));
  app.require_subcommand(1);

  Options opts;
  add_experiment(app, "region", "achievable rate regions per scheme", opts);
  add_experiment(app, "equal-rate", "equal-rate curves over an SNR sweep", opts);
  add_experiment(app, "distortion", "minimum distortions and decoder gains", opts);
  add_experiment(app, "simulate", "Monte-Carlo link simulation", opts);
  add_experiment(app, "asymptotics", "high/low SNR reference expressions", opts);
  app.add_subcommand("presets", "list figure presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->get_name() == "presets") {
    print_presets();
    return kExitOk;
  }
  return run_experiment(chosen->get_name(), opts);
}

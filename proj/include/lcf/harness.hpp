#pragma once

// Experiment front-end: YAML configs, figure presets and CSV emission.
//
// Config layout (every key optional once a preset is named):
//
//   kind: region            # region | equal_rate | distortion | simulate | asymptotics
//   preset: fig7a
//   channel: {p1_db: 10, p2_db: 5, pr_db: 5, h1_sq: 2, h2_sq: 0.5,
//             sigma_r2: 1, sigma1_2: 1, sigma2_2: 1}
//   schemes: [LCF1, LCF2]
//   grid: {alpha: 201, nu: 201, eta: 101}
//   snr_db: {start: 0, stop: 30, step: 1}
//   distortion: {alpha: [0.5], nu: [0.5], beta: 1}
//   simulate: {scheme: LCF1, lattice: E8, alpha: 0.5, nu: 0.5, beta: 1,
//              margin: 1.2, n_blocks: 1000, block_dim: 8, seed: 1}
//   workers: 1
//   output: results/fig7a.csv

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcf/lattice.hpp"
#include "lcf/rate_analysis.hpp"
#include "lcf/schemes.hpp"
#include "lcf/twrc_model.hpp"

namespace lcf {

enum class ExperimentKind { kRegion, kEqualRate, kDistortion, kSimulate, kAsymptotics };

std::string_view kind_name(ExperimentKind kind) noexcept;
/// Accepts "equal_rate" and "equal-rate".
ExperimentKind parse_kind(std::string_view name);

/// Caption convention: powers in dB, squared gains and noise variances linear.
struct ChannelDb {
  double p1_db = 20.0;
  double p2_db = 20.0;
  double pr_db = 20.0;
  double h1_sq = 1.0;
  double h2_sq = 1.0;
  double sigma_r2 = 1.0;
  double sigma1_2 = 1.0;
  double sigma2_2 = 1.0;

  ChannelConfig to_linear() const;
  bool operator==(const ChannelDb&) const = default;
};

struct SnrSweep {
  double start = 0.0;
  double stop = 30.0;
  double step = 1.0;

  std::vector<double> values() const;
  bool operator==(const SnrSweep&) const = default;
};

struct DistortionSettings {
  std::vector<double> alphas{0.5};
  std::vector<double> nus{0.5};
  double beta = 1.0;
  bool operator==(const DistortionSettings&) const = default;
};

struct McSettings {
  Scheme scheme = Scheme::kLcf1;
  LatticeFamily family = LatticeFamily::kE8;
  double alpha = 0.5;
  double nu = 0.5;
  double beta = 1.0;
  double margin = 1.2;
  std::size_t n_blocks = 1000;
  std::size_t block_dim = 8;
  std::optional<std::uint64_t> seed;
  bool operator==(const McSettings&) const = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kRegion;
  std::string preset;
  ChannelDb channel;
  std::vector<Scheme> schemes{Scheme::kLcf1};
  GridSpec grid;
  SnrSweep snr;
  DistortionSettings distortion;
  McSettings mc;
  unsigned workers = 1;
  std::string output_path;

  /// Throws ConfigError naming the violated invariant.
  void validate() const;
  bool operator==(const ExperimentConfig& o) const;
};

struct FigurePreset {
  std::string name;
  std::string caption;
  ExperimentKind kind = ExperimentKind::kRegion;
  ChannelDb channel;
  std::vector<Scheme> schemes;
};

/// Stable order: fig5a, fig5b, fig6, fig7a, fig7b, fig8a .. fig8d.
const std::vector<FigurePreset>& list_presets();
const FigurePreset& find_preset(std::string_view name);

/// Preset defaults with nothing overridden.
ExperimentConfig config_from_preset(std::string_view name);

/// Errors carry 1-based line numbers where the YAML position is known.
/// With `check` false only syntax and types are verified; callers that still
/// intend to override fields (a seed from the command line, say) validate later.
ExperimentConfig parse_config(std::string_view yaml_text, bool check = true);
ExperimentConfig load_config(const std::string& path, bool check = true);
std::string serialize_config(const ExperimentConfig& config);

struct CsvTable {
  /// Appended to the output stem, e.g. "_LCF1" or "_LCF1_hull"; empty for
  /// single-table kinds.
  std::string suffix;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
};

/// 12 significant digits, "inf"/"nan" spelled out.
std::string format_number(double value);

/// All tables an experiment produces, in output order.
std::vector<CsvTable> compute(const ExperimentConfig& config);

/// Runs the experiment and writes each table to output_path with its suffix
/// inserted before the extension. With an empty output path the tables go to
/// `stdout_sink` as gnuplot data blocks. Returns the written paths.
std::vector<std::string> run(const ExperimentConfig& config, std::string* stdout_sink = nullptr);

/// output_path with the suffix inserted before the extension.
std::string table_path(const std::string& output_path, const std::string& suffix);

}  // namespace lcf

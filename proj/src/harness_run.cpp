#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "lcf/error.hpp"
#include "lcf/harness.hpp"

namespace lcf {
namespace {

std::string rate_column(Scheme s) {
  return s == Scheme::kOuter ? "r_outer" : "r_" + std::string(scheme_name(s));
}

std::string flag(bool b) { return b ? "1" : "0"; }

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

void region_tables(const ExperimentConfig& c, std::vector<CsvTable>& out) {
  const ChannelConfig ch = c.channel.to_linear();
  const std::vector<double> etas = uniform_grid(c.grid.eta);
  const std::vector<double> alphas = uniform_grid(c.grid.alpha);
  const std::vector<double> nus = uniform_grid(c.grid.nu);
  for (Scheme s : c.schemes) {
    const RateRegion region = optimize_region(ch, s, etas, alphas, nus, c.workers);
    const std::string name(scheme_name(s));
    CsvTable points{"_" + name, {"scheme", "eta", "alpha", "nu", "r12", "r21"}, {}};
    for (std::size_t k = 0; k < region.points.size(); ++k) {
      const RateResult& r = region.points[k];
      points.rows.push_back({name, format_number(region.etas[k]), format_number(r.alpha_used),
                             format_number(r.nu_used), format_number(r.r12),
                             format_number(r.r21)});
    }
    CsvTable hull{"_" + name + "_hull", {"scheme", "r12", "r21"}, {}};
    for (const RatePoint& p : region.hull) {
      hull.rows.push_back({name, format_number(p.r12), format_number(p.r21)});
    }
    out.push_back(std::move(points));
    out.push_back(std::move(hull));
  }
}

void equal_rate_table(const ExperimentConfig& c, std::vector<CsvTable>& out) {
  const std::vector<double> snrs = c.snr.values();
  const std::vector<double> alphas = uniform_grid(c.grid.alpha);
  const std::vector<double> nus = uniform_grid(c.grid.nu);
  CsvTable t{"", {"snr_dB"}, std::vector<std::vector<std::string>>(snrs.size())};
  for (std::size_t i = 0; i < snrs.size(); ++i) t.rows[i].push_back(format_number(snrs[i]));
  for (Scheme s : c.schemes) {
    t.header.push_back(rate_column(s));
    const std::vector<EqualRatePoint> curve = equal_rate_curve(snrs, s, alphas, nus, c.workers);
    for (std::size_t i = 0; i < curve.size(); ++i) t.rows[i].push_back(format_number(curve[i].rate));
  }
  out.push_back(std::move(t));
}

void distortion_table(const ExperimentConfig& c, std::vector<CsvTable>& out) {
  const ChannelConfig ch = c.channel.to_linear();
  CsvTable t{"",
             {"scheme", "alpha", "nu", "beta", "d1_min", "d2_min", "gamma1_star", "gamma2_star",
              "gamma1_printed", "gamma2_printed", "r_wz", "relabeled"},
             {}};
  const double beta = c.distortion.beta;
  for (Scheme s : c.schemes) {
    const bool layered = s == Scheme::kLcf2;
    const std::vector<double> nus = layered ? c.distortion.nus : std::vector<double>{1.0};
    for (double a : c.distortion.alphas) {
      for (double nu : nus) {
        DistortionResult d;
        try {
          d = layered ? lcf2_distortions(ch, a, nu, beta) : lcf1_distortions(ch, a, beta);
        } catch (const DegenerateParameters& e) {
          throw InfeasibleError(std::string(scheme_name(s)) + " distortion at alpha=" +
                                format_number(a) + ", nu=" + format_number(nu) + ": " + e.what());
        }
        t.rows.push_back({std::string(scheme_name(s)), format_number(a), format_number(nu),
                          format_number(beta), format_number(d.d1_min), format_number(d.d2_min),
                          format_number(d.gamma1_star), format_number(d.gamma2_star),
                          optional_number(d.gamma1_printed), optional_number(d.gamma2_printed),
                          format_number(d.r_wz), flag(d.relabeled)});
      }
    }
  }
  out.push_back(std::move(t));
}

void simulate_table(const ExperimentConfig& c, std::vector<CsvTable>& out) {
  SimulationRequest q;
  q.scheme = c.mc.scheme;
  q.family = c.mc.family;
  q.alpha = c.mc.alpha;
  q.nu = c.mc.nu;
  q.beta = c.mc.beta;
  q.margin = c.mc.margin;
  q.n_blocks = c.mc.n_blocks;
  q.block_dim = c.mc.block_dim;
  q.seed = *c.mc.seed;
  q.workers = c.workers;
  SimReport r;
  try {
    r = simulate_scheme(c.channel.to_linear(), q);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("simulate: ") + e.what());
  }
  const TerminalStats empty;
  const TerminalStats& only = r.refined_common_only ? *r.refined_common_only : empty;
  CsvTable t{"",
             {"scheme", "lattice", "alpha", "nu", "beta", "seed", "n_blocks", "block_dim",
              "k1", "k2", "margin_target", "margin_realized", "common_rate", "common_budget",
              "refinement_rate", "refinement_budget", "rate_exceeds_budget",
              "refinement_unrealizable", "e_q_var", "e_q_expected", "corr_eq_yr", "e_q0_var",
              "e_q0_expected", "t1_err_var", "t1_err_expected", "t1_z_var", "t1_z_var_all",
              "t1_z_expected", "t1_overload", "t1_residual", "t2_err_var", "t2_err_expected",
              "t2_z_var", "t2_z_var_all", "t2_z_expected", "t2_overload", "t2_residual",
              "common_only_err_var", "overload_any", "nested_mismatch"},
             {}};
  t.rows.push_back({std::string(scheme_name(r.scheme)), std::string(family_name(r.family)),
                    format_number(q.alpha), format_number(q.nu), format_number(q.beta),
                    std::to_string(q.seed), std::to_string(r.n_blocks),
                    std::to_string(r.block_dim), std::to_string(r.chain.k_fine_to_mid),
                    std::to_string(r.chain.k_mid_to_coarse), format_number(q.margin),
                    format_number(r.realized_margin), format_number(r.common_rate),
                    format_number(r.common_rate_budget), format_number(r.refinement_rate),
                    format_number(r.refinement_rate_budget), flag(r.rate_exceeds_budget),
                    flag(r.refinement_unrealizable), format_number(r.e_q_variance),
                    format_number(r.e_q_expected), format_number(r.corr_eq_yr),
                    format_number(r.e_q0_variance), format_number(r.e_q0_expected),
                    format_number(r.t1.error_variance), format_number(r.t1.error_expected),
                    format_number(r.t1.z_eq_variance), format_number(r.t1.z_eq_variance_all),
                    format_number(r.t1.z_eq_expected), format_number(r.t1.overload_frequency()),
                    format_number(r.t1.max_identity_residual), format_number(r.t2.error_variance),
                    format_number(r.t2.error_expected), format_number(r.t2.z_eq_variance),
                    format_number(r.t2.z_eq_variance_all), format_number(r.t2.z_eq_expected),
                    format_number(r.t2.overload_frequency()),
                    format_number(r.t2.max_identity_residual), format_number(only.error_variance),
                    format_number(r.overload_frequency),
                    format_number(r.nested_mismatch_frequency)});
  out.push_back(std::move(t));
}

void asymptotics_table(const ExperimentConfig& c, std::vector<CsvTable>& out) {
  const std::vector<double> alphas = uniform_grid(c.grid.alpha);
  const std::vector<double> nus{1.0};
  CsvTable t{"",
             {"snr_dB", "r_df_low", "r_df_high", "r_lcf1_low", "r_lcf1_high", "r_DF", "r_LCF1"},
             {}};
  for (double db : c.snr.values()) {
    const double snr = db_to_linear(db);
    const AsymptoticReferences a = asymptotic_references(snr);
    const ChannelConfig ch = ChannelConfig::symmetric(snr);
    t.rows.push_back({format_number(db), format_number(a.r_df_low), format_number(a.r_df_high),
                      format_number(a.r_lcf1_low), format_number(a.r_lcf1_high),
                      format_number(equal_rate(ch, Scheme::kDf, alphas, nus, c.workers)),
                      format_number(equal_rate(ch, Scheme::kLcf1, alphas, nus, c.workers))});
  }
  out.push_back(std::move(t));
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string CsvTable::to_string() const {
  std::string s;
  auto line = [&s](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return s;
}

std::vector<CsvTable> compute(const ExperimentConfig& config) {
  config.validate();
  std::vector<CsvTable> tables;
  switch (config.kind) {
    case ExperimentKind::kRegion: region_tables(config, tables); break;
    case ExperimentKind::kEqualRate: equal_rate_table(config, tables); break;
    case ExperimentKind::kDistortion: distortion_table(config, tables); break;
    case ExperimentKind::kSimulate: simulate_table(config, tables); break;
    case ExperimentKind::kAsymptotics: asymptotics_table(config, tables); break;
  }
  return tables;
}

std::string table_path(const std::string& output_path, const std::string& suffix) {
  namespace fs = std::filesystem;
  const fs::path p(output_path);
  const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
  return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

std::vector<std::string> run(const ExperimentConfig& config, std::string* stdout_sink) {
  const std::vector<CsvTable> tables = compute(config);
  std::vector<std::string> written;
  if (config.output_path.empty()) {
    std::string text;
    for (const CsvTable& t : tables) {
      if (tables.size() > 1) text += "# " + std::string(kind_name(config.kind)) + t.suffix + "\n";
      text += t.to_string();
      if (tables.size() > 1) text += "\n\n";
    }
    if (stdout_sink) {
      *stdout_sink += text;
    } else {
      std::cout << text;
    }
    return written;
  }
  for (const CsvTable& t : tables) {
    const std::string path = table_path(config.output_path, t.suffix);
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << t.to_string();
    if (!out) throw IoError("write failed for '" + path + "'");
    written.push_back(path);
  }
  return written;
}

}  // namespace lcf

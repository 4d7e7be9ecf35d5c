#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "lcf/error.hpp"
#include "lcf/harness.hpp"

namespace lcf {
namespace {

constexpr std::size_t kMaxGrid = 100001;
constexpr std::size_t kMaxSweep = 10000;

std::vector<FigurePreset> build_presets() {
  const std::vector<Scheme> fig5{Scheme::kLcf1, Scheme::kAf, Scheme::kDf, Scheme::kOuter};
  const std::vector<Scheme> fig7{Scheme::kLcf1, Scheme::kLcf2};
  const std::vector<Scheme> fig8{Scheme::kLcf1, Scheme::kLcf2, Scheme::kAf, Scheme::kDf,
                                 Scheme::kOuter};
  auto ch = [](double p1, double p2, double pr, double h1, double h2) {
    ChannelDb c;
    c.p1_db = p1;
    c.p2_db = p2;
    c.pr_db = pr;
    c.h1_sq = h1;
    c.h2_sq = h2;
    return c;
  };
  return {
      {"fig5a", "Fig. 5(a): P1 = 15 dB, P2 = 10 dB, PR = 20 dB, |h1|^2 = 0.5, |h2|^2 = 1",
       ExperimentKind::kRegion, ch(15, 10, 20, 0.5, 1), fig5},
      {"fig5b", "Fig. 5(b): P1 = 10 dB, P2 = 15 dB, PR = 20 dB, |h1|^2 = 2, |h2|^2 = 0.5",
       ExperimentKind::kRegion, ch(10, 15, 20, 2, 0.5), fig5},
      {"fig6", "Fig. 6: equal rates R12 = R21 for symmetric channels, SNR 0-30 dB",
       ExperimentKind::kEqualRate, ch(20, 20, 20, 1, 1),
       {Scheme::kAf, Scheme::kDf, Scheme::kLcf1, Scheme::kOuter}},
      {"fig7a", "Fig. 7(a): P1 = 10 dB, P2 = PR = 5 dB, |h1|^2 = 2, |h2|^2 = 0.5",
       ExperimentKind::kRegion, ch(10, 5, 5, 2, 0.5), fig7},
      {"fig7b", "Fig. 7(b): P1 = 10 dB, P2 = PR = 5 dB, |h1|^2 = 6, |h2|^2 = 0.5",
       ExperimentKind::kRegion, ch(10, 5, 5, 6, 0.5), fig7},
      {"fig8a", "Fig. 8(a): P1 = 30 dB, P2 = 25 dB, PR = 30 dB, |h1|^2 = 1, |h2|^2 = 0.2",
       ExperimentKind::kRegion, ch(30, 25, 30, 1, 0.2), fig8},
      {"fig8b", "Fig. 8(b): P1 = 20 dB, P2 = 18 dB, PR = 17 dB, |h1|^2 = 4, |h2|^2 = 0.5",
       ExperimentKind::kRegion, ch(20, 18, 17, 4, 0.5), fig8},
      {"fig8c", "Fig. 8(c): P1 = 10 dB, P2 = 9 dB, PR = 9 dB, |h1|^2 = 4, |h2|^2 = 2",
       ExperimentKind::kRegion, ch(10, 9, 9, 4, 2), fig8},
      {"fig8d", "Fig. 8(d): P1 = 5 dB, P2 = 3 dB, PR = 3 dB, |h1|^2 = 4, |h2|^2 = 0.5",
       ExperimentKind::kRegion, ch(5, 3, 3, 4, 0.5), fig8},
  };
}

int line_of(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : -1;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  throw ConfigError(what, line_of(node));
}

void allow_keys(const YAML::Node& map, std::initializer_list<std::string_view> keys,
                const std::string& where) {
  if (!map.IsMap()) fail(map, where + " must be a mapping");
  for (const auto& kv : map) {
    const std::string key = kv.first.Scalar();
    bool known = false;
    for (std::string_view k : keys) known |= key == k;
    if (!known) fail(kv.first, "unknown key '" + key + "' in " + where);
  }
}

std::string scalar(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) fail(node, name + " must be a scalar");
  return node.Scalar();
}

double real(const YAML::Node& node, const std::string& name) {
  const std::string text = scalar(node, name);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  fail(node, name + ": expected a finite number, got '" + text + "'");
}

std::uint64_t whole(const YAML::Node& node, const std::string& name) {
  const std::string text = scalar(node, name);
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
    try {
      return std::stoull(text);
    } catch (const std::exception&) {
    }
  }
  fail(node, name + ": expected a nonnegative integer, got '" + text + "'");
}

std::vector<double> reals(const YAML::Node& node, const std::string& name) {
  if (node.IsScalar()) return {real(node, name)};
  if (!node.IsSequence()) fail(node, name + " must be a number or a list of numbers");
  std::vector<double> out;
  for (const auto& item : node) out.push_back(real(item, name));
  return out;
}

template <typename Fn>
auto vocabulary(const YAML::Node& node, const std::string& name, Fn parse) {
  const std::string text = scalar(node, name);
  try {
    return parse(text);
  } catch (const Error& e) {
    fail(node, name + ": " + e.what());
  }
}

void read_channel(const YAML::Node& n, ChannelDb& c) {
  allow_keys(n, {"p1_db", "p2_db", "pr_db", "h1_sq", "h2_sq", "sigma_r2", "sigma1_2", "sigma2_2"},
             "channel");
  if (n["p1_db"]) c.p1_db = real(n["p1_db"], "channel.p1_db");
  if (n["p2_db"]) c.p2_db = real(n["p2_db"], "channel.p2_db");
  if (n["pr_db"]) c.pr_db = real(n["pr_db"], "channel.pr_db");
  if (n["h1_sq"]) c.h1_sq = real(n["h1_sq"], "channel.h1_sq");
  if (n["h2_sq"]) c.h2_sq = real(n["h2_sq"], "channel.h2_sq");
  if (n["sigma_r2"]) c.sigma_r2 = real(n["sigma_r2"], "channel.sigma_r2");
  if (n["sigma1_2"]) c.sigma1_2 = real(n["sigma1_2"], "channel.sigma1_2");
  if (n["sigma2_2"]) c.sigma2_2 = real(n["sigma2_2"], "channel.sigma2_2");
}

void read_mc(const YAML::Node& n, McSettings& mc) {
  allow_keys(n,
             {"scheme", "lattice", "alpha", "nu", "beta", "margin", "n_blocks", "block_dim",
              "seed"},
             "simulate");
  if (n["scheme"]) mc.scheme = vocabulary(n["scheme"], "simulate.scheme", parse_scheme);
  if (n["lattice"]) mc.family = vocabulary(n["lattice"], "simulate.lattice", parse_family);
  if (n["alpha"]) mc.alpha = real(n["alpha"], "simulate.alpha");
  if (n["nu"]) mc.nu = real(n["nu"], "simulate.nu");
  if (n["beta"]) mc.beta = real(n["beta"], "simulate.beta");
  if (n["margin"]) mc.margin = real(n["margin"], "simulate.margin");
  if (n["n_blocks"]) mc.n_blocks = whole(n["n_blocks"], "simulate.n_blocks");
  if (n["block_dim"]) mc.block_dim = whole(n["block_dim"], "simulate.block_dim");
  if (n["seed"]) mc.seed = whole(n["seed"], "simulate.seed");
}

void check_unit_list(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw ConfigError(std::string(name) + " must not be empty");
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(std::string(name) + " values must lie in [0, 1]");
  }
}

void emit_channel(YAML::Emitter& out, const ChannelDb& c) {
  out << YAML::Key << "channel" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "p1_db" << YAML::Value << c.p1_db;
  out << YAML::Key << "p2_db" << YAML::Value << c.p2_db;
  out << YAML::Key << "pr_db" << YAML::Value << c.pr_db;
  out << YAML::Key << "h1_sq" << YAML::Value << c.h1_sq;
  out << YAML::Key << "h2_sq" << YAML::Value << c.h2_sq;
  out << YAML::Key << "sigma_r2" << YAML::Value << c.sigma_r2;
  out << YAML::Key << "sigma1_2" << YAML::Value << c.sigma1_2;
  out << YAML::Key << "sigma2_2" << YAML::Value << c.sigma2_2;
  out << YAML::EndMap;
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::kRegion: return "region";
    case ExperimentKind::kEqualRate: return "equal_rate";
    case ExperimentKind::kDistortion: return "distortion";
    case ExperimentKind::kSimulate: return "simulate";
    case ExperimentKind::kAsymptotics: return "asymptotics";
  }
  return "?";
}

ExperimentKind parse_kind(std::string_view name) {
  if (name == "equal-rate") return ExperimentKind::kEqualRate;
  for (ExperimentKind k : {ExperimentKind::kRegion, ExperimentKind::kEqualRate,
                           ExperimentKind::kDistortion, ExperimentKind::kSimulate,
                           ExperimentKind::kAsymptotics}) {
    if (name == kind_name(k)) return k;
  }
  throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

ChannelConfig ChannelDb::to_linear() const {
  return ChannelConfig::from_db(p1_db, p2_db, pr_db, h1_sq, h2_sq, sigma_r2, sigma1_2, sigma2_2);
}

std::vector<double> SnrSweep::values() const {
  if (!(step > 0.0) || !(stop >= start)) throw ConfigError("snr_db needs step > 0 and stop >= start");
  const double span = (stop - start) / step;
  if (span > static_cast<double>(kMaxSweep)) throw ConfigError("snr_db sweep has too many points");
  // Tolerate stop landing a rounding error short of a grid point.
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = start + static_cast<double>(i) * step;
  return v;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return kind == o.kind && preset == o.preset && channel == o.channel && schemes == o.schemes &&
         grid.alpha == o.grid.alpha && grid.nu == o.grid.nu && grid.eta == o.grid.eta &&
         snr == o.snr && distortion == o.distortion && mc == o.mc && workers == o.workers &&
         output_path == o.output_path;
}

void ExperimentConfig::validate() const {
  try {
    channel.to_linear();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("channel: ") + e.what());
  }
  if (schemes.empty()) throw ConfigError("schemes must list at least one scheme");
  for (std::size_t n : {grid.alpha, grid.nu, grid.eta}) {
    if (n == 0 || n > kMaxGrid) throw ConfigError("grid sizes must lie in [1, 100001]");
  }
  if (workers == 0 || workers > 256) throw ConfigError("workers must lie in [1, 256]");
  switch (kind) {
    case ExperimentKind::kEqualRate:
    case ExperimentKind::kAsymptotics:
      snr.values();
      break;
    case ExperimentKind::kDistortion:
      check_unit_list(distortion.alphas, "distortion.alpha");
      check_unit_list(distortion.nus, "distortion.nu");
      if (!(distortion.beta > 0.0)) throw ConfigError("distortion.beta must be positive");
      for (Scheme s : schemes) {
        if (s != Scheme::kLcf1 && s != Scheme::kLcf2) {
          throw ConfigError("distortion is only defined for LCF1 and LCF2, not " +
                            std::string(scheme_name(s)));
        }
      }
      break;
    case ExperimentKind::kSimulate:
      if (!mc.seed) throw ConfigError("simulate.seed is required for Monte-Carlo runs");
      if (mc.scheme != Scheme::kLcf1 && mc.scheme != Scheme::kLcf2) {
        throw ConfigError("simulate.scheme must be LCF1 or LCF2");
      }
      if (!(mc.alpha >= 0.0 && mc.alpha <= 1.0)) throw ConfigError("simulate.alpha must lie in [0, 1]");
      if (!(mc.nu >= 0.0 && mc.nu <= 1.0)) throw ConfigError("simulate.nu must lie in [0, 1]");
      if (!(mc.beta > 0.0)) throw ConfigError("simulate.beta must be positive");
      if (!(mc.margin > 0.0)) throw ConfigError("simulate.margin must be positive");
      if (mc.n_blocks == 0) throw ConfigError("simulate.n_blocks must be at least 1");
      {
        const std::size_t dim = natural_dimension(mc.family);
        if (mc.block_dim == 0 || mc.block_dim % dim != 0) {
          throw ConfigError("simulate.block_dim must be a positive multiple of " +
                            std::to_string(dim));
        }
      }
      break;
    case ExperimentKind::kRegion:
      break;
  }
}

const std::vector<FigurePreset>& list_presets() {
  static const std::vector<FigurePreset> presets = build_presets();
  return presets;
}

const FigurePreset& find_preset(std::string_view name) {
  for (const FigurePreset& p : list_presets()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

ExperimentConfig config_from_preset(std::string_view name) {
  const FigurePreset& p = find_preset(name);
  ExperimentConfig cfg;
  cfg.kind = p.kind;
  cfg.preset = p.name;
  cfg.channel = p.channel;
  cfg.schemes = p.schemes;
  return cfg;
}

ExperimentConfig parse_config(std::string_view text, bool check) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
  }
  if (root.IsNull()) throw ConfigError("config is empty");
  allow_keys(root,
             {"kind", "preset", "channel", "schemes", "grid", "snr_db", "distortion", "simulate",
              "workers", "output"},
             "config");

  ExperimentConfig cfg;
  if (root["preset"]) {
    const YAML::Node n = root["preset"];
    cfg = vocabulary(n, "preset", [](const std::string& s) { return config_from_preset(s); });
  }
  if (root["kind"]) cfg.kind = vocabulary(root["kind"], "kind", parse_kind);
  if (root["channel"]) read_channel(root["channel"], cfg.channel);
  if (root["schemes"]) {
    const YAML::Node n = root["schemes"];
    if (!n.IsSequence()) fail(n, "schemes must be a list");
    cfg.schemes.clear();
    for (const auto& item : n) cfg.schemes.push_back(vocabulary(item, "schemes", parse_scheme));
  }
  if (root["grid"]) {
    const YAML::Node n = root["grid"];
    allow_keys(n, {"alpha", "nu", "eta"}, "grid");
    if (n["alpha"]) cfg.grid.alpha = whole(n["alpha"], "grid.alpha");
    if (n["nu"]) cfg.grid.nu = whole(n["nu"], "grid.nu");
    if (n["eta"]) cfg.grid.eta = whole(n["eta"], "grid.eta");
  }
  if (root["snr_db"]) {
    const YAML::Node n = root["snr_db"];
    allow_keys(n, {"start", "stop", "step"}, "snr_db");
    if (n["start"]) cfg.snr.start = real(n["start"], "snr_db.start");
    if (n["stop"]) cfg.snr.stop = real(n["stop"], "snr_db.stop");
    if (n["step"]) cfg.snr.step = real(n["step"], "snr_db.step");
  }
  if (root["distortion"]) {
    const YAML::Node n = root["distortion"];
    allow_keys(n, {"alpha", "nu", "beta"}, "distortion");
    if (n["alpha"]) cfg.distortion.alphas = reals(n["alpha"], "distortion.alpha");
    if (n["nu"]) cfg.distortion.nus = reals(n["nu"], "distortion.nu");
    if (n["beta"]) cfg.distortion.beta = real(n["beta"], "distortion.beta");
  }
  if (root["simulate"]) read_mc(root["simulate"], cfg.mc);
  if (root["workers"]) cfg.workers = static_cast<unsigned>(whole(root["workers"], "workers"));
  if (root["output"]) cfg.output_path = scalar(root["output"], "output");
  if (check) cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path, bool check) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), check);
}

std::string serialize_config(const ExperimentConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(kind_name(c.kind));
  if (!c.preset.empty()) out << YAML::Key << "preset" << YAML::Value << c.preset;
  emit_channel(out, c.channel);
  out << YAML::Key << "schemes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (Scheme s : c.schemes) out << std::string(scheme_name(s));
  out << YAML::EndSeq;
  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "alpha" << YAML::Value << c.grid.alpha;
  out << YAML::Key << "nu" << YAML::Value << c.grid.nu;
  out << YAML::Key << "eta" << YAML::Value << c.grid.eta;
  out << YAML::EndMap;
  out << YAML::Key << "snr_db" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "start" << YAML::Value << c.snr.start;
  out << YAML::Key << "stop" << YAML::Value << c.snr.stop;
  out << YAML::Key << "step" << YAML::Value << c.snr.step;
  out << YAML::EndMap;
  out << YAML::Key << "distortion" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "alpha" << YAML::Value << YAML::Flow << c.distortion.alphas;
  out << YAML::Key << "nu" << YAML::Value << YAML::Flow << c.distortion.nus;
  out << YAML::Key << "beta" << YAML::Value << c.distortion.beta;
  out << YAML::EndMap;
  out << YAML::Key << "simulate" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "scheme" << YAML::Value << std::string(scheme_name(c.mc.scheme));
  out << YAML::Key << "lattice" << YAML::Value << std::string(family_name(c.mc.family));
  out << YAML::Key << "alpha" << YAML::Value << c.mc.alpha;
  out << YAML::Key << "nu" << YAML::Value << c.mc.nu;
  out << YAML::Key << "beta" << YAML::Value << c.mc.beta;
  out << YAML::Key << "margin" << YAML::Value << c.mc.margin;
  out << YAML::Key << "n_blocks" << YAML::Value << c.mc.n_blocks;
  out << YAML::Key << "block_dim" << YAML::Value << c.mc.block_dim;
  if (c.mc.seed) out << YAML::Key << "seed" << YAML::Value << *c.mc.seed;
  out << YAML::EndMap;
  out << YAML::Key << "workers" << YAML::Value << c.workers;
  if (!c.output_path.empty()) out << YAML::Key << "output" << YAML::Value << c.output_path;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace lcf

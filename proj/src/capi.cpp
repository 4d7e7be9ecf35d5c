#include "lcf/lcf.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "lcf/error.hpp"
#include "lcf/harness.hpp"
#include "lcf/lattice.hpp"
#include "lcf/rate_analysis.hpp"
#include "lcf/schemes.hpp"

struct lcf_lattice {
  lcf::LatticeSpec spec;
};

struct lcf_experiment {
  lcf::ExperimentConfig config;
  std::vector<std::string> outputs;
};

namespace {

thread_local std::string g_last_error;

lcf_status status_of(lcf::ErrorCode code) {
  switch (code) {
    case lcf::ErrorCode::kInvalidInput: return LCF_ERR_INVALID;
    case lcf::ErrorCode::kDegenerate: return LCF_ERR_DEGENERATE;
    case lcf::ErrorCode::kConfig: return LCF_ERR_CONFIG;
    case lcf::ErrorCode::kInfeasible: return LCF_ERR_INFEASIBLE;
    case lcf::ErrorCode::kIo: return LCF_ERR_IO;
  }
  return LCF_ERR_INTERNAL;
}

template <typename Fn>
lcf_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return LCF_OK;
  } catch (const lcf::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LCF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return LCF_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw lcf::InvalidInput(std::string(what) + " must not be NULL");
}

lcf::ChannelConfig to_cpp(const lcf_channel* c) {
  require(c, "channel");
  lcf::ChannelConfig cfg;
  cfg.h1 = c->h1;
  cfg.h2 = c->h2;
  cfg.P1 = c->P1;
  cfg.P2 = c->P2;
  cfg.PR = c->PR;
  cfg.sigma_R2 = c->sigma_R2;
  cfg.sigma_1_2 = c->sigma_1_2;
  cfg.sigma_2_2 = c->sigma_2_2;
  cfg.validate();
  return cfg;
}

lcf::Scheme to_cpp(lcf_scheme s) {
  switch (s) {
    case LCF_SCHEME_LCF1: return lcf::Scheme::kLcf1;
    case LCF_SCHEME_LCF2: return lcf::Scheme::kLcf2;
    case LCF_SCHEME_AF: return lcf::Scheme::kAf;
    case LCF_SCHEME_DF: return lcf::Scheme::kDf;
    case LCF_SCHEME_OUTER: return lcf::Scheme::kOuter;
  }
  throw lcf::InvalidInput("unknown scheme code");
}

lcf::LatticeFamily to_cpp(lcf_family f) {
  switch (f) {
    case LCF_FAMILY_ZN: return lcf::LatticeFamily::kIntegerZn;
    case LCF_FAMILY_D4: return lcf::LatticeFamily::kD4;
    case LCF_FAMILY_E8: return lcf::LatticeFamily::kE8;
  }
  throw lcf::InvalidInput("unknown lattice family code");
}

const lcf::FigurePreset* preset_at(size_t index) {
  const auto& presets = lcf::list_presets();
  return index < presets.size() ? &presets[index] : nullptr;
}

}  // namespace

extern "C" {

const char* lcf_version(void) { return "1.0.0"; }

const char* lcf_last_error(void) { return g_last_error.c_str(); }

const char* lcf_status_name(lcf_status status) {
  switch (status) {
    case LCF_OK: return "ok";
    case LCF_ERR_INVALID: return "invalid input";
    case LCF_ERR_DEGENERATE: return "degenerate parameters";
    case LCF_ERR_CONFIG: return "config error";
    case LCF_ERR_INFEASIBLE: return "infeasible";
    case LCF_ERR_IO: return "i/o error";
    case LCF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

lcf_status lcf_channel_from_db(double p1_db, double p2_db, double pr_db, double h1_sq,
                               double h2_sq, double sigma_r2, double sigma_1_2, double sigma_2_2,
                               lcf_channel* out) {
  return guarded([&] {
    require(out, "out");
    const lcf::ChannelConfig c = lcf::ChannelConfig::from_db(p1_db, p2_db, pr_db, h1_sq, h2_sq,
                                                             sigma_r2, sigma_1_2, sigma_2_2);
    *out = {c.h1, c.h2, c.P1, c.P2, c.PR, c.sigma_R2, c.sigma_1_2, c.sigma_2_2};
  });
}

lcf_status lcf_rates_eval(lcf_scheme scheme, const lcf_channel* channel, double alpha, double nu,
                          lcf_rates* out) {
  return guarded([&] {
    require(out, "out");
    const lcf::RateResult r = lcf::scheme_rates(to_cpp(scheme), to_cpp(channel), alpha, nu);
    *out = {r.r12, r.r21, r.snr_1to2, r.snr_2to1, r.alpha_used, r.nu_used, r.sum_cap,
            r.relabeled ? 1 : 0};
  });
}

lcf_status lcf_equal_rate(lcf_scheme scheme, const lcf_channel* channel, size_t n_alpha,
                          size_t n_nu, double* out) {
  return guarded([&] {
    require(out, "out");
    const std::vector<double> alphas = lcf::uniform_grid(n_alpha);
    const std::vector<double> nus = lcf::uniform_grid(n_nu);
    *out = lcf::equal_rate(to_cpp(channel), to_cpp(scheme), alphas, nus);
  });
}

lcf_status lcf_optimal_params(lcf_scheme scheme, const lcf_channel* channel, double alpha,
                              double nu, double beta, lcf_params* out) {
  return guarded([&] {
    require(out, "out");
    const lcf::ChannelConfig cfg = to_cpp(channel);
    lcf::OptimalParams p;
    switch (to_cpp(scheme)) {
      case lcf::Scheme::kLcf1: p = lcf::optimal_params_lcf1(cfg, alpha, beta); break;
      case lcf::Scheme::kLcf2: p = lcf::optimal_params_lcf2(cfg, alpha, nu, beta); break;
      default: throw lcf::InvalidInput("optimal parameters exist for LCF1 and LCF2 only");
    }
    *out = {p.sigma2_lambda1_min, p.sigma2_lambda0_min.value_or(p.sigma2_lambda1_min),
            p.gamma1_star, p.gamma2_star, p.beta, p.degenerate ? 1 : 0, p.relabeled ? 1 : 0,
            p.refined_terminal};
  });
}

lcf_status lcf_distortions(lcf_scheme scheme, const lcf_channel* channel, double alpha, double nu,
                           double beta, lcf_distortion* out) {
  return guarded([&] {
    require(out, "out");
    const lcf::ChannelConfig cfg = to_cpp(channel);
    lcf::DistortionResult d;
    switch (to_cpp(scheme)) {
      case lcf::Scheme::kLcf1: d = lcf::lcf1_distortions(cfg, alpha, beta); break;
      case lcf::Scheme::kLcf2: d = lcf::lcf2_distortions(cfg, alpha, nu, beta); break;
      default: throw lcf::InvalidInput("distortions exist for LCF1 and LCF2 only");
    }
    *out = {d.d1_min, d.d2_min, d.gamma1_star, d.gamma2_star, d.beta_used, d.r_wz,
            d.relabeled ? 1 : 0};
  });
}

lcf_status lcf_lattice_create(lcf_family family, size_t dimension, double scale,
                              lcf_lattice** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new lcf_lattice{lcf::LatticeSpec::make(to_cpp(family), dimension, scale)};
  });
}

void lcf_lattice_destroy(lcf_lattice* lattice) { delete lattice; }

size_t lcf_lattice_dimension(const lcf_lattice* lattice) {
  return lattice ? lattice->spec.dimension : 0;
}

double lcf_lattice_second_moment(const lcf_lattice* lattice) {
  return lattice ? lattice->spec.second_moment() : 0.0;
}

lcf_status lcf_lattice_nearest(const lcf_lattice* lattice, const double* x, double* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(x, "x");
    require(out, "out");
    const std::size_t n = lattice->spec.dimension;
    const std::vector<double> q = lcf::nearest_point(lattice->spec, std::span<const double>(x, n));
    std::memcpy(out, q.data(), n * sizeof(double));
  });
}

lcf_status lcf_lattice_mod(const lcf_lattice* lattice, const double* x, double* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(x, "x");
    require(out, "out");
    const std::size_t n = lattice->spec.dimension;
    const std::vector<double> r = lcf::mod_lattice(lattice->spec, std::span<const double>(x, n));
    std::memcpy(out, r.data(), n * sizeof(double));
  });
}

void lcf_sim_request_defaults(lcf_sim_request* r) {
  if (!r) return;
  const lcf::SimulationRequest d;
  *r = {LCF_SCHEME_LCF1, LCF_FAMILY_E8, d.alpha, d.nu, d.beta, d.margin,
        d.n_blocks, d.block_dim, d.seed, d.workers};
}

lcf_status lcf_simulate(const lcf_channel* channel, const lcf_sim_request* request,
                        lcf_sim_report* out) {
  return guarded([&] {
    require(request, "request");
    require(out, "out");
    lcf::SimulationRequest q;
    q.scheme = to_cpp(request->scheme);
    q.family = to_cpp(request->family);
    q.alpha = request->alpha;
    q.nu = request->nu;
    q.beta = request->beta;
    q.margin = request->margin;
    q.n_blocks = request->n_blocks;
    q.block_dim = request->block_dim;
    q.seed = request->seed;
    q.workers = request->workers;
    const lcf::SimReport r = lcf::simulate_scheme(to_cpp(channel), q);
    lcf_sim_report o{};
    o.k1 = r.chain.k_fine_to_mid;
    o.k2 = r.chain.k_mid_to_coarse;
    o.realized_margin = r.realized_margin;
    o.e_q_variance = r.e_q_variance;
    o.e_q_expected = r.e_q_expected;
    o.corr_eq_yr = r.corr_eq_yr;
    o.e_q0_variance = r.e_q0_variance;
    o.e_q0_expected = r.e_q0_expected;
    o.t1_error_variance = r.t1.error_variance;
    o.t1_error_expected = r.t1.error_expected;
    o.t1_z_eq_variance = r.t1.z_eq_variance;
    o.t1_z_eq_expected = r.t1.z_eq_expected;
    o.t1_overload = r.t1.overload_frequency();
    o.t2_error_variance = r.t2.error_variance;
    o.t2_error_expected = r.t2.error_expected;
    o.t2_z_eq_variance = r.t2.z_eq_variance;
    o.t2_z_eq_expected = r.t2.z_eq_expected;
    o.t2_overload = r.t2.overload_frequency();
    o.common_only_error_variance = r.refined_common_only ? r.refined_common_only->error_variance : 0.0;
    o.overload_any = r.overload_frequency;
    o.max_identity_residual = std::max(r.t1.max_identity_residual, r.t2.max_identity_residual);
    o.rate_exceeds_budget = r.rate_exceeds_budget ? 1 : 0;
    o.vector_count = r.vector_count;
    *out = o;
  });
}

lcf_status lcf_experiment_from_file(const char* path, lcf_experiment** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new lcf_experiment{lcf::load_config(path, false), {}};
  });
}

lcf_status lcf_experiment_from_string(const char* yaml, lcf_experiment** out) {
  return guarded([&] {
    require(yaml, "yaml");
    require(out, "out");
    *out = nullptr;
    *out = new lcf_experiment{lcf::parse_config(yaml, false), {}};
  });
}

lcf_status lcf_experiment_from_preset(const char* name, lcf_experiment** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = nullptr;
    *out = new lcf_experiment{lcf::config_from_preset(name), {}};
  });
}

void lcf_experiment_destroy(lcf_experiment* experiment) { delete experiment; }

lcf_status lcf_experiment_set_kind(lcf_experiment* e, const char* kind) {
  return guarded([&] {
    require(e, "experiment");
    require(kind, "kind");
    e->config.kind = lcf::parse_kind(kind);
  });
}

lcf_status lcf_experiment_set_seed(lcf_experiment* e, uint64_t seed) {
  return guarded([&] {
    require(e, "experiment");
    e->config.mc.seed = seed;
  });
}

lcf_status lcf_experiment_set_grid(lcf_experiment* e, size_t n_alpha, size_t n_nu, size_t n_eta) {
  return guarded([&] {
    require(e, "experiment");
    if (n_alpha) e->config.grid.alpha = n_alpha;
    if (n_nu) e->config.grid.nu = n_nu;
    if (n_eta) e->config.grid.eta = n_eta;
  });
}

lcf_status lcf_experiment_set_output(lcf_experiment* e, const char* path) {
  return guarded([&] {
    require(e, "experiment");
    e->config.output_path = path ? path : "";
  });
}

lcf_status lcf_experiment_set_workers(lcf_experiment* e, unsigned workers) {
  return guarded([&] {
    require(e, "experiment");
    e->config.workers = workers;
  });
}

lcf_status lcf_experiment_run(lcf_experiment* e) {
  return guarded([&] {
    require(e, "experiment");
    e->outputs.clear();
    e->outputs = lcf::run(e->config);
  });
}

size_t lcf_experiment_output_count(const lcf_experiment* e) { return e ? e->outputs.size() : 0; }

const char* lcf_experiment_output_path(const lcf_experiment* e, size_t index) {
  if (!e || index >= e->outputs.size()) return nullptr;
  return e->outputs[index].c_str();
}

lcf_status lcf_experiment_serialize(const lcf_experiment* e, char* buf, size_t capacity,
                                    size_t* needed) {
  return guarded([&] {
    require(e, "experiment");
    const std::string text = lcf::serialize_config(e->config);
    if (needed) *needed = text.size();
    if (buf && capacity > 0) {
      const std::size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

size_t lcf_preset_count(void) { return lcf::list_presets().size(); }

const char* lcf_preset_name(size_t index) {
  const lcf::FigurePreset* p = preset_at(index);
  return p ? p->name.c_str() : nullptr;
}

const char* lcf_preset_kind(size_t index) {
  const lcf::FigurePreset* p = preset_at(index);
  return p ? lcf::kind_name(p->kind).data() : nullptr;
}

const char* lcf_preset_caption(size_t index) {
  const lcf::FigurePreset* p = preset_at(index);
  return p ? p->caption.c_str() : nullptr;
}

}  // extern "C"

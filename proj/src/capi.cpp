#include "gkt4.h"

#include <cmath>
#include <new>
#include <string>

#include "gkt4/deform.hpp"
#include "gkt4/functionals.hpp"
#include "gkt4/io.hpp"
#include "gkt4/verify.hpp"

struct gkt4_state {
  gkt4::GKState s;
};
struct gkt4_config {
  gkt4::RunConfig c;
};
struct gkt4_trace {
  gkt4::FlowTrace t;
};
struct gkt4_report {
  gkt4::CheckReport r;
  std::string table, rows;
};

namespace {

thread_local std::string g_last_error;

gkt4_status to_status(gkt4::ErrorCode code) {
  using gkt4::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return GKT4_ERR_INVALID_ARGUMENT;
    case ErrorCode::NonPositiveMetric: return GKT4_ERR_NON_POSITIVE_METRIC;
    case ErrorCode::SingularForm: return GKT4_ERR_SINGULAR_FORM;
    case ErrorCode::BrokenStructure: return GKT4_ERR_BROKEN_STRUCTURE;
    case ErrorCode::DegeneratePair: return GKT4_ERR_DEGENERATE_PAIR;
    case ErrorCode::PositivityLoss: return GKT4_ERR_POSITIVITY_LOSS;
    case ErrorCode::IoFailure: return GKT4_ERR_IO;
    case ErrorCode::FormatMismatch: return GKT4_ERR_FORMAT_MISMATCH;
    case ErrorCode::DimsMismatch: return GKT4_ERR_DIMS_MISMATCH;
    case ErrorCode::ConfigError: return GKT4_ERR_CONFIG;
    case ErrorCode::Precondition: return GKT4_ERR_PRECONDITION;
  }
  return GKT4_ERR_INTERNAL;
}

gkt4_status fail(gkt4_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

// Runs body, mapping exceptions to status codes.
template <class F>
gkt4_status guard(F&& body) {
  try {
    g_last_error.clear();
    body();
    return GKT4_OK;
  } catch (const gkt4::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GKT4_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GKT4_ERR_INTERNAL, e.what());
  }
}

gkt4::DiffRule rule_of(gkt4_diff_rule r) {
  if (r == GKT4_DIFF_SPECTRAL) return gkt4::DiffRule::Spectral;
  if (r == GKT4_DIFF_FD4) return gkt4::DiffRule::Central4;
  throw gkt4::Error(gkt4::ErrorCode::InvalidArgument, "unknown differentiation rule");
}

void require(bool ok, const char* what) {
  if (!ok) throw gkt4::Error(gkt4::ErrorCode::InvalidArgument, what);
}

gkt4::FaultInjection fault_of(const char* check, double size) {
  gkt4::FaultInjection f;
  if (check) f.check = check;
  f.size = size;
  return f;
}

gkt4_report* wrap(gkt4::CheckReport r) {
  auto* out = new gkt4_report{std::move(r), {}, {}};
  out->table = out->r.table();
  out->rows = out->r.rows();
  return out;
}

}  // namespace

extern "C" {

const char* gkt4_last_error(void) { return g_last_error.c_str(); }

const char* gkt4_status_name(gkt4_status status) {
  switch (status) {
    case GKT4_OK: return "ok";
    case GKT4_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case GKT4_ERR_NON_POSITIVE_METRIC: return "NonPositiveMetric";
    case GKT4_ERR_SINGULAR_FORM: return "SingularForm";
    case GKT4_ERR_BROKEN_STRUCTURE: return "BrokenStructure";
    case GKT4_ERR_DEGENERATE_PAIR: return "DegeneratePair";
    case GKT4_ERR_POSITIVITY_LOSS: return "PositivityLoss";
    case GKT4_ERR_IO: return "IoFailure";
    case GKT4_ERR_FORMAT_MISMATCH: return "FormatMismatch";
    case GKT4_ERR_DIMS_MISMATCH: return "DimsMismatch";
    case GKT4_ERR_CONFIG: return "ConfigError";
    case GKT4_ERR_PRECONDITION: return "Precondition";
    case GKT4_ERR_INTERNAL: return "Internal";
  }
  return "unknown";
}

const char* gkt4_version(void) { return "1.0.0"; }

gkt4_status gkt4_state_flat(const int dims[4], gkt4_diff_rule rule, gkt4_state** out) {
  return guard([&] {
    require(dims && out, "null argument");
    std::array<int, 4> d{};
    for (int a = 0; a < 4; ++a) {
      require(dims[a] >= 1 && dims[a] <= 4096, "grid sizes must lie in [1, 4096]");
      d[a] = dims[a];
    }
    auto s = gkt4::flat_hyperkahler(gkt4::make_grid(d, rule_of(rule))).with_provenance("init flat");
    *out = new gkt4_state{std::move(s)};
  });
}

gkt4_status gkt4_state_load(const char* path, gkt4_diff_rule rule, gkt4_state** out) {
  return guard([&] {
    require(path && out, "null argument");
    *out = new gkt4_state{gkt4::load_snapshot(path, rule_of(rule))};
  });
}

gkt4_status gkt4_state_save(const gkt4_state* s, const char* path) {
  return guard([&] {
    require(s && path, "null argument");
    gkt4::save_snapshot(s->s, path);
  });
}

gkt4_status gkt4_state_info_get(const gkt4_state* s, gkt4_state_info* out) {
  return guard([&] {
    require(s && out, "null argument");
    gkt4_state_info info{};
    for (int a = 0; a < 4; ++a) info.dims[a] = s->s.grid()->dim(a);
    info.t = s->s.time();
    info.valid = s->s.valid() ? 1 : 0;
    info.margin = s->s.positivity_margin();
    try {
      info.lambda = gkt4::lambda_invariant(s->s);
      double dev = 0.0;
      for (double v : s->s.phi().data()) dev = std::max(dev, std::abs(v - info.lambda));
      info.sup_phi_dev = dev;
    } catch (const gkt4::Error&) {
      info.lambda = 0.0;
      info.sup_phi_dev = 0.0;
    }
    *out = info;
  });
}

void gkt4_state_free(gkt4_state* s) { delete s; }

gkt4_status gkt4_config_default(gkt4_config** out) {
  return guard([&] {
    require(out, "null argument");
    *out = new gkt4_config{};
  });
}

gkt4_status gkt4_config_parse(const char* text, gkt4_config** out) {
  return guard([&] {
    require(text && out, "null argument");
    *out = new gkt4_config{gkt4::parse_config(text)};
  });
}

gkt4_status gkt4_config_load(const char* path, gkt4_config** out) {
  return guard([&] {
    require(path && out, "null argument");
    *out = new gkt4_config{gkt4::load_config(path)};
  });
}

gkt4_status gkt4_config_info_get(const gkt4_config* c, gkt4_config_info* out) {
  return guard([&] {
    require(c && out, "null argument");
    gkt4_config_info info{};
    for (int a = 0; a < 4; ++a) info.dims[a] = c->c.dims[a];
    info.diff = c->c.diff == gkt4::DiffRule::Spectral ? GKT4_DIFF_SPECTRAL : GKT4_DIFF_FD4;
    info.deform_t_end = c->c.deform_t_end;
    info.flow_t_end = c->c.flow.t_end;
    info.checkpoint_stride = c->c.checkpoint_stride;
    *out = info;
  });
}

const char* gkt4_config_snapshot_out(const gkt4_config* c) { return c ? c->c.snapshot_out.c_str() : ""; }
const char* gkt4_config_csv_out(const gkt4_config* c) { return c ? c->c.csv_out.c_str() : ""; }

const char* gkt4_config_reference(void) {
  static const std::string text = gkt4::config_reference();
  return text.c_str();
}

void gkt4_config_free(gkt4_config* c) { delete c; }

gkt4_status gkt4_deform(const gkt4_state* in, const gkt4_config* c, gkt4_state** out, double* reached_t) {
  return guard([&] {
    require(in && c && out, "null argument");
    if (reached_t) *reached_t = in->s.time();
    const gkt4::ScalarField f = gkt4::make_generator(c->c.generator, in->s.grid());
    try {
      gkt4::GKState s = gkt4::joyce_deform(in->s, f, c->c.deform_t_end, c->c.deform_dt);
      const auto& g = c->c.generator;
      std::string prov = in->s.provenance() + "; deform " + g.family + " eps=" + std::to_string(g.amplitude) +
                         " t=" + std::to_string(c->c.deform_t_end);
      if (g.family == "random") prov += " k<=" + std::to_string(g.kmax) + " seed=" + std::to_string(g.seed);
      if (reached_t) *reached_t = c->c.deform_t_end;
      *out = new gkt4_state{s.at_time(0.0).with_provenance(prov)};
    } catch (const gkt4::PositivityLossError& e) {
      if (reached_t) *reached_t = e.reached_time();
      throw;
    }
  });
}

gkt4_status gkt4_flow(const gkt4_state* in, const gkt4_config* c, gkt4_step_callback cb, void* user,
                      gkt4_trace** out) {
  return guard([&] {
    require(in && c && out, "null argument");
    gkt4::StepObserver obs;
    if (cb) {
      obs = [&](long n, const gkt4::GKState& s) {
        const gkt4_state view{s};
        cb(n, &view, user);
      };
    }
    gkt4::FlowTrace t = gkt4::run(in->s, c->c.flow, obs);
    if (t.final_state) {
      t.final_state = t.final_state->with_provenance(in->s.provenance() + "; flow t=" +
                                                     std::to_string(t.final_state->time()));
    }
    *out = new gkt4_trace{std::move(t)};
  });
}

gkt4_status gkt4_flow_timestep(const gkt4_state* in, const gkt4_config* c, double* out) {
  return guard([&] {
    require(in && c && out, "null argument");
    *out = gkt4::flow_timestep(in->s, c->c.flow);
  });
}

gkt4_status gkt4_trace_info_get(const gkt4_trace* t, gkt4_trace_info* out) {
  return guard([&] {
    require(t && out, "null argument");
    gkt4_trace_info info{};
    info.rows = t->t.rows.size();
    info.steps = t->t.steps;
    info.dt = t->t.dt;
    info.termination = static_cast<gkt4_termination>(t->t.termination);
    info.has_final_state = t->t.final_state ? 1 : 0;
    *out = info;
  });
}

gkt4_status gkt4_trace_row(const gkt4_trace* t, size_t index, gkt4_row* out) {
  return guard([&] {
    require(t && out, "null argument");
    require(index < t->t.rows.size(), "row index out of range");
    const auto& r = t->t.rows[index];
    *out = {r.t,          r.lambda,     r.sup_phi_dev, r.sup_grad_phi_sq, r.F_value,     r.dF_dt,
            r.energy_rhs, r.mu_l2,      r.torsion_l2,  r.pos_margin,      r.heat_residual};
  });
}

const char* gkt4_trace_message(const gkt4_trace* t) { return t ? t->t.message.c_str() : ""; }

gkt4_status gkt4_trace_final_state(const gkt4_trace* t, gkt4_state** out) {
  return guard([&] {
    require(t && out, "null argument");
    if (!t->t.final_state) throw gkt4::Error(gkt4::ErrorCode::Precondition, "trace has no final state");
    *out = new gkt4_state{*t->t.final_state};
  });
}

gkt4_status gkt4_trace_write_csv(const gkt4_trace* t, const char* path) {
  return guard([&] {
    require(t && path, "null argument");
    gkt4::write_diagnostics_csv(t->t, path);
  });
}

gkt4_status gkt4_trace_load_csv(const char* path, gkt4_trace** out) {
  return guard([&] {
    require(path && out, "null argument");
    *out = new gkt4_trace{gkt4::read_diagnostics_csv(path)};
  });
}

void gkt4_trace_free(gkt4_trace* t) { delete t; }

gkt4_status gkt4_verify_pointwise(unsigned long long seed, int count, const char* fault_check, double fault_size,
                                  gkt4_report** out) {
  return guard([&] {
    require(out, "null argument");
    *out = wrap(gkt4::run_pointwise_suite(seed, count, fault_of(fault_check, fault_size)));
  });
}

gkt4_status gkt4_verify_field(const gkt4_state* s, double threshold, const char* fault_check, double fault_size,
                              gkt4_report** out) {
  return guard([&] {
    require(s && out, "null argument");
    require(threshold > 0.0, "threshold must be positive");
    *out = wrap(gkt4::run_field_suite(s->s, threshold, fault_of(fault_check, fault_size)));
  });
}

gkt4_status gkt4_verify_flow(const gkt4_trace* t, double dt, const char* fault_check, double fault_size,
                             gkt4_report** out) {
  return guard([&] {
    require(t && out, "null argument");
    *out = wrap(gkt4::run_flow_suite(t->t, dt, fault_of(fault_check, fault_size)));
  });
}

int gkt4_report_passed(const gkt4_report* r) { return r && r->r.passed() ? 1 : 0; }
size_t gkt4_report_count(const gkt4_report* r) { return r ? r->r.checks.size() : 0; }

gkt4_status gkt4_report_check(const gkt4_report* r, size_t index, gkt4_check* out) {
  return guard([&] {
    require(r && out, "null argument");
    require(index < r->r.checks.size(), "check index out of range");
    const auto& c = r->r.checks[index];
    *out = {c.name.c_str(), c.residual, c.threshold, c.pass ? 1 : 0};
  });
}

const char* gkt4_report_table(const gkt4_report* r) { return r ? r->table.c_str() : ""; }
const char* gkt4_report_rows(const gkt4_report* r) { return r ? r->rows.c_str() : ""; }
void gkt4_report_free(gkt4_report* r) { delete r; }

gkt4_status gkt4_functional_report(const gkt4_state* s, gkt4_functionals* out) {
  return guard([&] {
    require(s && out, "null argument");
    const gkt4::FunctionalReport r = gkt4::functional_report(s->s);
    *out = {r.lambda, r.F_value, r.dF_dt, r.energy_rhs, r.mu_l2, r.gscal_mean, gkt4::torsion_norm(s->s)};
  });
}

}  // extern "C"

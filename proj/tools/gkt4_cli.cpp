// Command-line driver; talks to the library only through gkt4.h.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gkt4.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CliError {
  int code;
  std::string message;
};

int exit_code_for(gkt4_status st) {
  switch (st) {
    case GKT4_OK: return kExitOk;
    case GKT4_ERR_CONFIG:
    case GKT4_ERR_INVALID_ARGUMENT: return kExitUsage;
    default: return kExitFail;
  }
}

void check(gkt4_status st, const std::string& what) {
  if (st != GKT4_OK) {
    throw CliError{exit_code_for(st), what + ": " + gkt4_status_name(st) + ": " + gkt4_last_error()};
  }
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using StatePtr = std::unique_ptr<gkt4_state, Deleter<gkt4_state, gkt4_state_free>>;
using ConfigPtr = std::unique_ptr<gkt4_config, Deleter<gkt4_config, gkt4_config_free>>;
using TracePtr = std::unique_ptr<gkt4_trace, Deleter<gkt4_trace, gkt4_trace_free>>;
using ReportPtr = std::unique_ptr<gkt4_report, Deleter<gkt4_report, gkt4_report_free>>;

ConfigPtr load_config(const std::string& path) {
  gkt4_config* c = nullptr;
  if (path.empty()) {
    check(gkt4_config_default(&c), "config");
  } else {
    const gkt4_status st = gkt4_config_load(path.c_str(), &c);
    // unreadable config is a usage problem
    if (st == GKT4_ERR_IO) throw CliError{kExitUsage, std::string("config: ") + gkt4_last_error()};
    check(st, "config");
  }
  return ConfigPtr(c);
}

gkt4_config_info info_of(const gkt4_config* c) {
  gkt4_config_info info{};
  check(gkt4_config_info_get(c, &info), "config");
  return info;
}

StatePtr load_state(const std::string& path, const gkt4_config* c) {
  gkt4_state* s = nullptr;
  check(gkt4_state_load(path.c_str(), info_of(c).diff, &s), "load '" + path + "'");
  return StatePtr(s);
}

std::string pick(const std::string& flag, const char* from_config, const char* what) {
  if (!flag.empty()) return flag;
  if (from_config && *from_config) return from_config;
  throw CliError{kExitUsage, std::string("missing ") + what};
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> d;
  std::string s = text;
  std::replace(s.begin(), s.end(), 'x', ',');
  std::istringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      d.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw CliError{kExitUsage, "--dims: bad size '" + part + "'"};
    }
  }
  if (d.size() != 4) throw CliError{kExitUsage, "--dims needs 4 sizes"};
  return d;
}

void print_state(const gkt4_state* s) {
  gkt4_state_info info{};
  check(gkt4_state_info_get(s, &info), "state");
  std::printf("dims %d,%d,%d,%d  t %.17g  valid %d  margin %.17g  lambda %.17g  sup|Phi-lambda| %.17g\n",
              info.dims[0], info.dims[1], info.dims[2], info.dims[3], info.t, info.valid, info.margin, info.lambda,
              info.sup_phi_dev);
}

// ---- subcommands ----

struct InitOpts {
  std::string out, config, dims;
};

int cmd_init(const InitOpts& o) {
  const ConfigPtr cfg = load_config(o.config);
  const gkt4_config_info info = info_of(cfg.get());
  std::vector<int> dims(info.dims, info.dims + 4);
  if (!o.dims.empty()) dims = parse_dims(o.dims);
  gkt4_state* raw = nullptr;
  check(gkt4_state_flat(dims.data(), info.diff, &raw), "init");
  const StatePtr s(raw);
  const std::string out = pick(o.out, gkt4_config_snapshot_out(cfg.get()), "--out");
  check(gkt4_state_save(s.get(), out.c_str()), "save '" + out + "'");
  print_state(s.get());
  return kExitOk;
}

struct DeformOpts {
  std::string in, config, out;
};

int cmd_deform(const DeformOpts& o) {
  const ConfigPtr cfg = load_config(o.config);
  const std::string out = pick(o.out, gkt4_config_snapshot_out(cfg.get()), "--out");
  const StatePtr in = load_state(o.in, cfg.get());
  gkt4_state* raw = nullptr;
  double reached = 0.0;
  const gkt4_status st = gkt4_deform(in.get(), cfg.get(), &raw, &reached);
  if (st == GKT4_ERR_POSITIVITY_LOSS) {
    std::fprintf(stderr, "PositivityLoss: %s\nreached t = %.17g of %.17g\n", gkt4_last_error(), reached,
                 info_of(cfg.get()).deform_t_end);
    return kExitFail;
  }
  check(st, "deform");
  const StatePtr s(raw);
  check(gkt4_state_save(s.get(), out.c_str()), "save '" + out + "'");
  print_state(s.get());
  return kExitOk;
}

struct FlowOpts {
  std::string in, config, out, csv;
};

struct CheckpointCtx {
  std::string base;
  long stride = 0;
  std::optional<CliError> error;
};

void checkpoint(long step, const gkt4_state* s, void* user) {
  auto* ctx = static_cast<CheckpointCtx*>(user);
  if (ctx->stride <= 0 || step % ctx->stride != 0 || ctx->error) return;
  const std::string path = ctx->base + ".step" + std::to_string(step);
  if (gkt4_state_save(s, path.c_str()) != GKT4_OK) {
    ctx->error = CliError{kExitFail, "checkpoint '" + path + "': " + gkt4_last_error()};
  }
}

int cmd_flow(const FlowOpts& o) {
  const ConfigPtr cfg = load_config(o.config);
  const std::string out = pick(o.out, gkt4_config_snapshot_out(cfg.get()), "--out");
  const std::string csv = pick(o.csv, gkt4_config_csv_out(cfg.get()), "--csv");
  const StatePtr in = load_state(o.in, cfg.get());
  CheckpointCtx ctx{out, info_of(cfg.get()).checkpoint_stride, std::nullopt};
  gkt4_trace* raw = nullptr;
  check(gkt4_flow(in.get(), cfg.get(), checkpoint, &ctx, &raw), "flow");
  const TracePtr trace(raw);
  if (ctx.error) throw *ctx.error;
  check(gkt4_trace_write_csv(trace.get(), csv.c_str()), "write '" + csv + "'");
  gkt4_trace_info ti{};
  check(gkt4_trace_info_get(trace.get(), &ti), "trace");
  gkt4_state* fin = nullptr;
  check(gkt4_trace_final_state(trace.get(), &fin), "trace");
  const StatePtr final_state(fin);
  check(gkt4_state_save(final_state.get(), out.c_str()), "save '" + out + "'");
  static const char* names[] = {"reached_t_end", "positivity_loss", "converged"};
  std::printf("steps %ld  dt %.17g  rows %zu  termination %s\n", ti.steps, ti.dt, ti.rows, names[ti.termination]);
  print_state(final_state.get());
  if (*gkt4_trace_message(trace.get())) std::fprintf(stderr, "%s\n", gkt4_trace_message(trace.get()));
  if (ti.termination == GKT4_TERM_POSITIVITY_LOSS) {
    gkt4_state_info si{};
    check(gkt4_state_info_get(final_state.get(), &si), "state");
    std::fprintf(stderr, "PositivityLoss: flow stopped, reached t = %.17g\n", si.t);
    return kExitFail;
  }
  return kExitOk;
}

struct VerifyOpts {
  std::string in, suite = "field", trace, config, inject;
  double dt = 0.0, threshold = 1e-6, inject_size = 1e-3;
  unsigned long long seed = 7;
  int count = 1000;
  bool rows = false;
};

double row_spacing(const gkt4_trace* t) {
  gkt4_trace_info ti{};
  check(gkt4_trace_info_get(t, &ti), "trace");
  double h = 0.0;
  gkt4_row prev{}, cur{};
  for (std::size_t k = 0; k < ti.rows; ++k) {
    check(gkt4_trace_row(t, k, &cur), "trace");
    if (k > 0) {
      const double d = cur.t - prev.t;
      if (d > 0.0 && (h == 0.0 || d < h)) h = d;
    }
    prev = cur;
  }
  return h;
}

int cmd_verify(const VerifyOpts& o) {
  const char* fault = o.inject.empty() ? nullptr : o.inject.c_str();
  gkt4_report* raw = nullptr;
  if (o.suite == "pointwise") {
    check(gkt4_verify_pointwise(o.seed, o.count, fault, o.inject_size, &raw), "verify");
  } else if (o.suite == "field") {
    if (o.in.empty()) throw CliError{kExitUsage, "--in is required for the field suite"};
    const ConfigPtr cfg = load_config(o.config);
    const StatePtr s = load_state(o.in, cfg.get());
    check(gkt4_verify_field(s.get(), o.threshold, fault, o.inject_size, &raw), "verify");
  } else if (o.suite == "flow") {
    if (o.trace.empty()) throw CliError{kExitUsage, "--trace is required for the flow suite"};
    gkt4_trace* tr = nullptr;
    check(gkt4_trace_load_csv(o.trace.c_str(), &tr), "load '" + o.trace + "'");
    const TracePtr trace(tr);
    double dt = o.dt;
    if (dt <= 0.0 && !o.config.empty() && !o.in.empty()) {
      const ConfigPtr cfg = load_config(o.config);
      const StatePtr s = load_state(o.in, cfg.get());
      check(gkt4_flow_timestep(s.get(), cfg.get(), &dt), "timestep");
    }
    if (dt <= 0.0) {
      dt = row_spacing(trace.get());
      std::fprintf(stderr, "note: step taken from row spacing, dt = %.17g\n", dt);
    }
    check(gkt4_verify_flow(trace.get(), dt, fault, o.inject_size, &raw), "verify");
  } else {
    throw CliError{kExitUsage, "unknown suite '" + o.suite + "'"};
  }
  const ReportPtr report(raw);
  std::fputs(o.rows ? gkt4_report_rows(report.get()) : gkt4_report_table(report.get()), stdout);
  return gkt4_report_passed(report.get()) ? kExitOk : kExitFail;
}

struct FunctionalOpts {
  std::string in, config;
};

int cmd_functional(const FunctionalOpts& o) {
  const ConfigPtr cfg = load_config(o.config);
  const StatePtr s = load_state(o.in, cfg.get());
  gkt4_functionals f{};
  check(gkt4_functional_report(s.get(), &f), "functional");
  std::printf("lambda      %.17g\nF_value     %.17g\ndF_dt       %.17g\nenergy_rhs  %.17g\n"
              "mu_l2       %.17g\ngscal_mean  %.17g\ntorsion_l2  %.17g\n",
              f.lambda, f.F_value, f.dF_dt, f.energy_rhs, f.mu_l2, f.gscal_mean, f.torsion_l2);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Kaehler lab on the flat 4-torus"};
  app.require_subcommand(1);

  InitOpts init;
  auto* c_init = app.add_subcommand("init", "write the flat hyper-Kaehler snapshot");
  c_init->add_option("--out", init.out, "snapshot path");
  c_init->add_option("--config", init.config, "config file (grid.dims, diff)");
  c_init->add_option("--dims", init.dims, "grid sizes, e.g. 32,32,1,1");

  DeformOpts deform;
  auto* c_deform = app.add_subcommand("deform", "Hamiltonian isotopy of a snapshot");
  c_deform->add_option("--in", deform.in, "input snapshot")->required();
  c_deform->add_option("--config", deform.config, "config file");
  c_deform->add_option("--out", deform.out, "output snapshot");

  FlowOpts flow;
  auto* c_flow = app.add_subcommand("flow", "run the generalized Kaehler-Ricci flow");
  c_flow->add_option("--in", flow.in, "input snapshot")->required();
  c_flow->add_option("--config", flow.config, "config file");
  c_flow->add_option("--csv", flow.csv, "diagnostics CSV");
  c_flow->add_option("--out", flow.out, "final snapshot");

  VerifyOpts verify;
  auto* c_verify = app.add_subcommand("verify", "run an identity suite; exit 0 iff every check passes");
  c_verify->add_option("--in", verify.in, "snapshot");
  c_verify->add_option("--suite", verify.suite, "pointwise | field | flow")
      ->check(CLI::IsMember({"pointwise", "field", "flow"}));
  c_verify->add_option("--trace", verify.trace, "diagnostics CSV for the flow suite");
  c_verify->add_option("--dt", verify.dt, "flow step for the heat-residual bound");
  c_verify->add_option("--config", verify.config, "config used for the run");
  c_verify->add_option("--seed", verify.seed, "pointwise seed");
  c_verify->add_option("--count", verify.count, "pointwise sample count")->check(CLI::PositiveNumber);
  c_verify->add_option("--threshold", verify.threshold, "field threshold")->check(CLI::PositiveNumber);
  c_verify->add_option("--inject", verify.inject, "perturb the named check");
  c_verify->add_option("--inject-size", verify.inject_size, "perturbation size");
  c_verify->add_flag("--rows", verify.rows, "machine-readable rows instead of the table");

  FunctionalOpts functional;
  auto* c_func = app.add_subcommand("functional", "print the functional report of a snapshot");
  c_func->add_option("--in", functional.in, "snapshot")->required();
  c_func->add_option("--config", functional.config, "config file");

  auto* c_keys = app.add_subcommand("keys", "list config keys with defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_init->parsed()) return cmd_init(init);
    if (c_deform->parsed()) return cmd_deform(deform);
    if (c_flow->parsed()) return cmd_flow(flow);
    if (c_verify->parsed()) return cmd_verify(verify);
    if (c_func->parsed()) return cmd_functional(functional);
    if (c_keys->parsed()) {
      std::fputs(gkt4_config_reference(), stdout);
      return kExitOk;
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  }
  return kExitUsage;
}

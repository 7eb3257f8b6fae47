#include "gkt4/gkrf.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "gkt4/functionals.hpp"

namespace gkt4 {

void FlowConfig::validate() const {
  if (dt_mode == DtMode::Fixed && !(dt > 0.0)) throw Error(ErrorCode::ConfigError, "flow dt must be > 0");
  if (dt_mode == DtMode::Cfl && !(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "cfl_safety must lie in (0, 1]");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error(ErrorCode::ConfigError, "t_end must be >= 0");
  if (diagnostic_stride < 1) throw Error(ErrorCode::ConfigError, "diagnostic_stride must be >= 1");
  if (!(eps_pos_fraction >= 0.0 && eps_pos_fraction < 1.0)) {
    throw Error(ErrorCode::ConfigError, "eps_pos must lie in [0, 1)");
  }
  if (!(heat_warn > 0.0)) throw Error(ErrorCode::ConfigError, "heat_warn must be > 0");
}

OneFormField gkrf_velocity(const GKState& s) {
  OneFormField v = j_dphi(s);
  v *= -0.5;
  return v;
}

GKState step(const GKState& s, double dt, Integrator integrator, double stop_margin) {
  const OneFormField& a = s.potential();
  OneFormField next = a;
  if (integrator == Integrator::Euler) {
    next.axpy(dt, gkrf_velocity(s));
  } else {
    const OneFormField k1 = gkrf_velocity(s);
    const OneFormField k2 = gkrf_velocity(s.with_potential(a + (0.5 * dt) * k1));
    const OneFormField k3 = gkrf_velocity(s.with_potential(a + (0.5 * dt) * k2));
    const OneFormField k4 = gkrf_velocity(s.with_potential(a + dt * k3));
    next.axpy(dt / 6.0, k1);
    next.axpy(dt / 3.0, k2);
    next.axpy(dt / 3.0, k3);
    next.axpy(dt / 6.0, k4);
  }
  GKState out = s.with_potential(std::move(next)).at_time(s.time() + dt);
  if (!(out.positivity_margin() > stop_margin)) {
    std::ostringstream msg;
    msg << "positivity lost: margin " << out.positivity_margin() << " at t = " << out.time()
        << "; last valid t = " << s.time();
    throw PositivityLossError(s.time(), out.positivity_margin(), msg.str());
  }
  return out;
}

double cfl_timestep(const GKState& s, double safety) {
  if (!(safety > 0.0)) throw Error(ErrorCode::InvalidArgument, "cfl safety must be positive");
  const MetricData& md = s.metric();
  double sup = 0.0;
  for (std::size_t i = 0; i < s.grid()->size(); ++i) {
    sup = std::max(sup, sym_eigenvalues(matrix_at(md.inverse, i))[3]);
  }
  const double k2 = s.grid()->stiffness();
  if (k2 == 0.0) return safety * 2.0;
  return safety * 2.0 / (sup * k2);
}

namespace {

double raw_dt(const GKState& s, const FlowConfig& config) {
  return config.dt_mode == DtMode::Fixed ? config.dt : cfl_timestep(s, config.cfl_safety);
}

long step_count(const GKState& s, const FlowConfig& config) {
  if (!(config.t_end > 0.0)) return 0;
  return std::max(1L, static_cast<long>(std::ceil(config.t_end / raw_dt(s, config) - 1e-9)));
}

}  // namespace

double flow_timestep(const GKState& s, const FlowConfig& config) {
  config.validate();
  const long n = step_count(s, config);
  return n > 0 ? config.t_end / static_cast<double>(n) : raw_dt(s, config);
}

namespace {

DiagnosticsRecord diagnostics(const GKState& s, double F_value, double sigma) {
  DiagnosticsRecord r;
  r.t = s.time();
  r.lambda = lambda_invariant(s);
  const ScalarField& phi = s.phi();
  double dev = 0.0;
  for (double v : phi.data()) dev = std::max(dev, std::abs(v - r.lambda));
  r.sup_phi_dev = dev;
  r.sup_grad_phi_sq = sup_grad_phi_sq(s);
  r.F_value = F_value;
  r.dF_dt = sigma;
  r.energy_rhs = energy_rhs(s);
  r.mu_l2 = moment_map(s).l2_norm;
  r.torsion_l2 = torsion_norm(s);
  r.pos_margin = s.positivity_margin();
  return r;
}

double sigma0(const GKState& s) { return aubin_yau_sigma(s, ScalarField(s.grid()), s.phi()); }

bool converged(const GKState& s) {
  const double lam = lambda_invariant(s);
  double dev = 0.0;
  for (double v : s.phi().data()) dev = std::max(dev, std::abs(v - lam));
  return dev <= kConvergenceTol && exterior_derivative(s.phi()).max_abs() <= kConvergenceTol;
}

struct Pending {
  std::size_t row;
  long step;
  ScalarField lap_c;
};

struct Window {
  std::deque<std::pair<long, ScalarField>> phis;

  const ScalarField* at(long n) const {
    for (const auto& p : phis)
      if (p.first == n) return &p.second;
    return nullptr;
  }
};

double residual(const ScalarField& dphi_dt, const ScalarField& lap_c) {
  double m = 0.0;
  for (std::size_t i = 0; i < lap_c.points(); ++i) m = std::max(m, std::abs(dphi_dt(0, i) - lap_c(0, i)));
  return m;
}

ScalarField combo(std::initializer_list<std::pair<double, const ScalarField*>> terms, double scale) {
  ScalarField out(terms.begin()->second->grid());
  for (const auto& [w, f] : terms) out.axpy(w, *f);
  out *= scale;
  return out;
}

// Try to finalize the heat residual of a pending row; `last` marks the end of the run.
bool finalize(const Pending& p, const Window& w, long newest, double h, bool last, FlowTrace& trace) {
  const long n = p.step;
  const ScalarField* c = w.at(n);
  const ScalarField* prev = w.at(n - 1);
  const ScalarField* next = w.at(n + 1);
  if (prev && next) {
    trace.rows[p.row].heat_residual = residual(combo({{1.0, next}, {-1.0, prev}}, 0.5 / h), p.lap_c);
    return true;
  }
  if (n == 0 && newest >= 2) {
    const ScalarField* n2 = w.at(2);
    trace.rows[p.row].heat_residual = residual(combo({{-3.0, c}, {4.0, next}, {-1.0, n2}}, 0.5 / h), p.lap_c);
    return true;
  }
  if (!last) return false;
  const ScalarField* prev2 = w.at(n - 2);
  if (prev && prev2) {
    trace.rows[p.row].heat_residual = residual(combo({{3.0, c}, {-4.0, prev}, {1.0, prev2}}, 0.5 / h), p.lap_c);
  } else if (prev) {
    trace.rows[p.row].heat_residual = residual(combo({{1.0, c}, {-1.0, prev}}, 1.0 / h), p.lap_c);
  } else if (next) {
    trace.rows[p.row].heat_residual = residual(combo({{1.0, next}, {-1.0, c}}, 1.0 / h), p.lap_c);
  } else {
    trace.rows[p.row].heat_residual = sup_norm(p.lap_c);
  }
  return true;
}

ScalarField chern_laplacian_of_phi(const GKState& s) {
  return laplacian_chern(s.phi(), s.g(), lee_form(s, Side::I));
}

}  // namespace

FlowTrace run(const GKState& initial, const FlowConfig& config, const StepObserver& observer) {
  config.validate();
  if (!initial.valid()) throw Error(ErrorCode::NonPositiveMetric, "initial state is not valid");
  FlowTrace trace;
  GKState s = initial.at_time(0.0);
  const long nsteps = step_count(s, config);
  const double h = flow_timestep(s, config);
  trace.dt = h;
  const double stop = config.eps_pos_fraction * s.positivity_margin();

  Window window;
  std::vector<Pending> pending;
  double sigma = sigma0(s);
  double F = 0.0;

  auto log_row = [&](long n) {
    trace.rows.push_back(diagnostics(s, F, sigma));
    pending.push_back({trace.rows.size() - 1, n, chern_laplacian_of_phi(s)});
  };

  window.phis.emplace_back(0, s.phi());
  log_row(0);
  long n = 0;
  if (config.stop_on_converged && converged(s)) {
    trace.termination = Termination::Converged;
  } else {
    for (n = 1; n <= nsteps; ++n) {
      try {
        s = step(s, h, config.integrator, stop);
      } catch (const PositivityLossError& e) {
        trace.termination = Termination::PositivityLoss;
        trace.message = e.what();
        --n;
        break;
      }
      const double sigma_new = sigma0(s);
      F += 0.5 * h * (sigma + sigma_new);
      sigma = sigma_new;
      window.phis.emplace_back(n, s.phi());
      if (window.phis.size() > 3) window.phis.pop_front();
      std::erase_if(pending, [&](const Pending& p) { return finalize(p, window, n, h, false, trace); });
      const bool done = config.stop_on_converged && converged(s);
      if (n % config.diagnostic_stride == 0 || n == nsteps || done) log_row(n);
      if (observer) observer(n, s);
      if (done) {
        trace.termination = Termination::Converged;
        break;
      }
    }
    if (n > nsteps) n = nsteps;
  }
  for (const auto& p : pending) finalize(p, window, n, h, true, trace);
  double worst_heat = 0.0;
  for (const auto& r : trace.rows) worst_heat = std::max(worst_heat, r.heat_residual);
  if (worst_heat > config.heat_warn) {
    std::ostringstream msg;
    msg << "warning: heat residual " << worst_heat << " exceeds heat_warn " << config.heat_warn;
    trace.message += (trace.message.empty() ? "" : "; ") + msg.str();
  }
  trace.steps = n;
  trace.final_state = s;
  return trace;
}

}  // namespace gkt4

#pragma once

#include <functional>

#include "gkt4/trace.hpp"

namespace gkt4 {

enum class Integrator { RK4, Euler };
enum class DtMode { Fixed, Cfl };

struct FlowConfig {
  DtMode dt_mode = DtMode::Cfl;
  double dt = 1e-3;          // used when dt_mode == Fixed
  double cfl_safety = 0.5;   // used when dt_mode == Cfl
  double t_end = 1.0;
  int diagnostic_stride = 1;
  double eps_pos_fraction = 1e-6;  // stop when margin <= fraction * initial margin
  double heat_warn = 1e-4;
  Integrator integrator = Integrator::RK4;
  bool stop_on_converged = true;

  // Throws ConfigError.
  void validate() const;
};

// v = -1/2 J dPhi, so dv = rho_B.
OneFormField gkrf_velocity(const GKState& s);

// One step of the potential ODE. Throws PositivityLossError if the new margin
// is <= stop_margin.
GKState step(const GKState& s, double dt, Integrator integrator = Integrator::RK4, double stop_margin = 0.0);

// safety * 2 / (sup eig(g^{-1}) * sum_i floor(N_i / 2)^2).
double cfl_timestep(const GKState& s, double safety);

// Uniform step used by run: t_end / ceil(t_end / dt) with dt fixed or from the CFL bound.
double flow_timestep(const GKState& s, const FlowConfig& config);

// Called after every accepted step with (step index, state).
using StepObserver = std::function<void(long, const GKState&)>;

FlowTrace run(const GKState& s, const FlowConfig& config, const StepObserver& observer = {});

inline constexpr double kConvergenceTol = 1e-9;

}  // namespace gkt4

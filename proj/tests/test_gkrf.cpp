#include "helpers.hpp"

using namespace gkt4;
using testing::max_diff;

namespace {

FlowConfig fixed(double dt, double t_end, Integrator in = Integrator::RK4) {
  FlowConfig c;
  c.dt_mode = DtMode::Fixed;
  c.dt = dt;
  c.t_end = t_end;
  c.integrator = in;
  return c;
}

ErrorCode config_error(const FlowConfig& c) {
  try {
    c.validate();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

// sup |Phi(t) - Phi_ref(t)| after integrating with step dt.
double phi_error(Integrator in, double dt, const ScalarField& ref) {
  FlowConfig c = fixed(dt, 0.04, in);
  c.stop_on_converged = false;
  const FlowTrace tr = run(testing::joyce_state(), c);
  return max_diff(tr.final_state->phi(), ref);
}

}  // namespace

TEST_CASE("hyper-Kaehler state is a fixed point") {
  const GKState flat = flat_hyperkahler(testing::grid32());
  CHECK(gkrf_velocity(flat).max_abs() < 1e-12);
  GKState s = flat;
  for (int k = 0; k < 100; ++k) s = step(s, 1e-3);
  CHECK(max_diff(s.potential(), flat.potential()) < 1e-12);
  CHECK(max_diff(s.J(), flat.J()) < 1e-12);
}

TEST_CASE("CFL timestep") {
  const GKState flat = flat_hyperkahler(testing::grid32());
  CHECK(cfl_timestep(flat, 0.5) == doctest::Approx(1.953125e-3).epsilon(1e-12));
  const GKState fine = flat_hyperkahler(make_grid({64, 64, 1, 1}));
  CHECK(cfl_timestep(fine, 0.5) == doctest::Approx(1.953125e-3 / 4.0).epsilon(1e-12));
  FlowConfig c;
  c.t_end = 1.0;
  // 1 / ceil(512) exactly
  CHECK(flow_timestep(flat, c) == 1.0 / 512.0);
  c.t_end = 0.01;
  CHECK(flow_timestep(flat, c) == doctest::Approx(0.01 / 6.0));
}

TEST_CASE("flow configuration validation") {
  FlowConfig c;
  CHECK_NOTHROW(c.validate());
  c.t_end = -1.0;
  CHECK(config_error(c) == ErrorCode::ConfigError);
  c = FlowConfig{};
  c.cfl_safety = 0.0;
  CHECK(config_error(c) == ErrorCode::ConfigError);
  c = FlowConfig{};
  c.dt_mode = DtMode::Fixed;
  c.dt = 0.0;
  CHECK(config_error(c) == ErrorCode::ConfigError);
  c = FlowConfig{};
  c.diagnostic_stride = 0;
  CHECK(config_error(c) == ErrorCode::ConfigError);
  c = FlowConfig{};
  c.eps_pos_fraction = 1.0;
  CHECK(config_error(c) == ErrorCode::ConfigError);
}

TEST_CASE("Euler heat residual is first order in dt") {
  FlowConfig c = fixed(1e-3, 0.01, Integrator::Euler);
  c.stop_on_converged = false;
  const FlowTrace a = run(testing::joyce_state(), c);
  c.dt = 5e-4;
  const FlowTrace b = run(testing::joyce_state(), c);
  const double ra = a.rows.back().heat_residual, rb = b.rows.back().heat_residual;
  CHECK(ra / rb == doctest::Approx(2.0).epsilon(0.05));
  // frozen constant: residual ~ C dt with C ~ 9.9e-3
  CHECK(ra / 1e-3 == doctest::Approx(9.91e-3).epsilon(0.01));
}

TEST_CASE("Euler is first order and RK4 reaches roundoff") {
  FlowConfig c = fixed(1e-4, 0.04);
  c.stop_on_converged = false;
  const ScalarField ref = run(testing::joyce_state(), c).final_state->phi();
  const double e1 = phi_error(Integrator::Euler, 2e-3, ref), e2 = phi_error(Integrator::Euler, 1e-3, ref);
  const double r1 = phi_error(Integrator::RK4, 4e-3, ref), r2 = phi_error(Integrator::RK4, 2e-3, ref);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
  // RK4 is already at roundoff for this smooth profile
  CHECK(r1 < 1e-13);
  CHECK(r2 < 1e-13);
}

TEST_CASE("flat run terminates as converged") {
  const GKState flat = flat_hyperkahler(testing::grid32());
  FlowConfig c;
  const FlowTrace tr = run(flat, c);
  CHECK(tr.termination == Termination::Converged);
  c.stop_on_converged = false;
  c.t_end = 0.01;
  const FlowTrace full = run(flat, c);
  CHECK(full.termination == Termination::ReachedEnd);
  CHECK(full.rows.size() >= 3);
  CHECK(full.rows.back().t == doctest::Approx(0.01));
}

TEST_CASE("diagnostic stride and observer") {
  FlowConfig c = fixed(1e-3, 0.01);
  c.diagnostic_stride = 5;
  c.stop_on_converged = false;
  long calls = 0;
  const FlowTrace tr = run(testing::joyce_state(), c, [&](long, const GKState&) { ++calls; });
  CHECK(calls == 10);
  CHECK(tr.steps == 10);
  REQUIRE(tr.rows.size() == 3);
  CHECK(tr.rows[1].t == doctest::Approx(0.005));
}

TEST_CASE("step reports positivity loss") {
  const GKState& s = testing::joyce_state();
  try {
    step(s, 1e-3, Integrator::RK4, 10.0);
    FAIL("expected PositivityLoss");
  } catch (const PositivityLossError& e) {
    CHECK(e.code() == ErrorCode::PositivityLoss);
  }
}

TEST_CASE("flow velocity matches the Joyce velocity of Phi") {
  const GKState& s = testing::joyce_state();
  const VectorField x = hamiltonian_vector_field(s.phi(), s.omega());
  CHECK(max_diff(gkrf_velocity(s), joyce_velocity(s.psi2(), x)) < 1e-14);
}

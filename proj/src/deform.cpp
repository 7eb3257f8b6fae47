#include "gkt4/deform.hpp"

#include <cmath>
#include <sstream>

#include "gkt4/functionals.hpp"

namespace gkt4 {

HamiltonianGenerator HamiltonianGenerator::constant(ScalarField f) {
  return {[f = std::move(f)](double) { return f; }};
}

ScalarField normalize_generator(const ScalarField& f, const TwoFormField& omega) {
  const std::size_t n = f.points();
  std::vector<double> w(n), fw(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = pfaffian(point_at(omega, i));
    fw[i] = f(0, i) * w[i];
  }
  const double mean = compensated_sum(fw) / compensated_sum(w);
  ScalarField out = f;
  for (double& v : out.data()) v -= mean;
  return out;
}

VectorField hamiltonian_vector_field(const ScalarField& f, const TwoFormField& omega) {
  const OneFormField df = exterior_derivative(f);
  VectorField x(f.grid());
  for (std::size_t i = 0; i < f.points(); ++i) {
    const Mat4 om = matrix_at(omega, i);
    const double scale = std::max(1.0, max_abs(om));
    if (std::abs(pfaffian(om)) <= kEpsInv * scale * scale) {
      throw Error(ErrorCode::SingularForm, "Omega is not invertible at point " + std::to_string(i));
    }
    // X^a Omega_ab = -df_b  <=>  X = Omega^{-1} df
    set_vec(x, i, mat_vec(inverse(om), vec_at(df, i)));
  }
  return x;
}

OneFormField joyce_velocity(const TwoFormField& psi2, const VectorField& x) {
  OneFormField v = interior(x, psi2);
  v *= 0.5;
  return v;
}

namespace {

OneFormField rhs(const GKState& s, const OneFormField& a, const VectorField& x) {
  TwoFormField psi2 = s.psi2_base() + exterior_derivative(a);
  return joyce_velocity(psi2, x);
}

}  // namespace

GKState joyce_deform(const GKState& s, const HamiltonianGenerator& gen, double t_end, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (!s.valid()) throw Error(ErrorCode::NonPositiveMetric, "initial state is not valid");
  const double t0 = s.time();
  if (t_end == 0.0) return s;
  const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(t_end) / dt - 1e-9)));
  const double h = t_end / static_cast<double>(steps);
  const double stop = kPositivityFraction * s.positivity_margin();
  const TwoFormField& omega = s.omega();
  GKState cur = s;
  OneFormField a = s.potential();
  for (long k = 0; k < steps; ++k) {
    const double tau = k * h;
    const VectorField x0 = hamiltonian_vector_field(gen.f(tau), omega);
    const VectorField xh = hamiltonian_vector_field(gen.f(tau + 0.5 * h), omega);
    const VectorField x1 = hamiltonian_vector_field(gen.f(tau + h), omega);
    const OneFormField k1 = rhs(s, a, x0);
    const OneFormField k2 = rhs(s, a + (0.5 * h) * k1, xh);
    const OneFormField k3 = rhs(s, a + (0.5 * h) * k2, xh);
    const OneFormField k4 = rhs(s, a + h * k3, x1);
    OneFormField next = a;
    next.axpy(h / 6.0, k1);
    next.axpy(h / 3.0, k2);
    next.axpy(h / 3.0, k3);
    next.axpy(h / 6.0, k4);
    GKState trial = s.with_potential(next).at_time(t0 + (k + 1) * h);
    if (!(trial.positivity_margin() > stop)) {
      std::ostringstream msg;
      msg << "positivity lost: margin " << trial.positivity_margin() << " after t = " << (k + 1) * h
          << "; last valid t = " << tau;
      throw PositivityLossError(t0 + tau, trial.positivity_margin(), msg.str());
    }
    a = std::move(next);
    cur = std::move(trial);
  }
  return cur;
}

GKState joyce_deform(const GKState& s, const ScalarField& f, double t_end, double dt) {
  return joyce_deform(s, HamiltonianGenerator::constant(f), t_end, dt);
}

std::vector<SweepEntry> deformation_sweep(const GKState& s, const ScalarField& f,
                                          const std::vector<double>& t_grid, double dt) {
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > t_grid[k - 1])) throw Error(ErrorCode::InvalidArgument, "t_grid must be increasing");
  }
  std::vector<SweepEntry> out;
  GKState cur = s;
  double t = 0.0;
  for (double target : t_grid) {
    if (target != t) {
      try {
        cur = joyce_deform(cur.at_time(0.0), f, target - t, dt);
      } catch (const PositivityLossError& e) {
        throw PositivityLossError(t + e.reached_time(), e.margin(), e.what());
      }
    }
    t = target;
    cur = cur.at_time(s.time() + t);
    out.push_back({t, cur, lambda_invariant(cur), cur.positivity_margin()});
  }
  return out;
}

}  // namespace gkt4

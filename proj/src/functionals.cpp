#include "gkt4/functionals.hpp"

#include <cmath>

namespace gkt4 {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::ReachedEnd:
      return "reached_t_end";
    case Termination::PositivityLoss:
      return "positivity_loss";
    case Termination::Converged:
      return "converged";
  }
  return "unknown";
}

namespace {

struct Pfaffians {
  ScalarField plus, minus;
};

Pfaffians pfaffians(const GKState& s) {
  Pfaffians p{ScalarField(s.grid()), ScalarField(s.grid())};
  for (std::size_t i = 0; i < s.grid()->size(); ++i) {
    p.plus(0, i) = pfaffian(point_at(s.F_plus(), i));
    p.minus(0, i) = pfaffian(point_at(s.F_minus(), i));
  }
  return p;
}

double lambda_from(const Pfaffians& p) {
  const double ip = integrate_top_form(p.plus);
  const double im = integrate_top_form(p.minus);
  if (!(ip > 0.0) || !(im > 0.0)) throw Error(ErrorCode::DegeneratePair, "F+ or F- has nonpositive volume");
  return std::log(ip / im);
}

}  // namespace

double lambda_invariant(const GKState& s) { return lambda_from(pfaffians(s)); }

double aubin_yau_sigma(const GKState& s, const ScalarField& f, const ScalarField& h) {
  const Pfaffians p = pfaffians(s);
  const double el = std::exp(lambda_from(p));
  ScalarField dens(s.grid());
  for (std::size_t i = 0; i < dens.points(); ++i) {
    dens(0, i) = (f(0, i) - h(0, i)) * (p.plus(0, i) - el * p.minus(0, i));
  }
  return integrate_top_form(dens);
}

std::vector<double> accumulate_F(const FlowTrace& trace) {
  if (trace.rows.size() < 2) throw Error(ErrorCode::Precondition, "accumulate_F needs at least 2 rows");
  std::vector<double> f(trace.rows.size(), 0.0);
  for (std::size_t k = 1; k < trace.rows.size(); ++k) {
    const auto& a = trace.rows[k - 1];
    const auto& b = trace.rows[k];
    f[k] = f[k - 1] + 0.5 * (b.t - a.t) * (a.dF_dt + b.dF_dt);
  }
  return f;
}

MomentMap moment_map(const GKState& s) {
  const Pfaffians p = pfaffians(s);
  const double el = std::exp(lambda_from(p));
  MomentMap m{ScalarField(s.grid()), 0.0};
  ScalarField sq(s.grid());
  for (std::size_t i = 0; i < sq.points(); ++i) {
    const double v = 4.0 * (p.plus(0, i) - el * p.minus(0, i));
    m.density(0, i) = v;
    sq(0, i) = v * v;
  }
  m.l2_norm = std::sqrt(integrate_top_form(sq));
  return m;
}

double energy_rhs(const GKState& s) {
  const Pfaffians p = pfaffians(s);
  const double el = std::exp(lambda_from(p));
  const ScalarField grad2 = inner(exterior_derivative(s.phi()), exterior_derivative(s.phi()), s.metric().inverse);
  ScalarField dens(s.grid());
  for (std::size_t i = 0; i < dens.points(); ++i) {
    dens(0, i) = grad2(0, i) * (p.plus(0, i) + el * p.minus(0, i));
  }
  return integrate_top_form(dens);
}

double sup_grad_phi_sq(const GKState& s) {
  const OneFormField dphi = exterior_derivative(s.phi());
  return sup_norm(inner(dphi, dphi, s.metric().inverse));
}

ScalarField poisson_bracket(const TwoFormField& omega, const ScalarField& f, const ScalarField& h) {
  const OneFormField df = exterior_derivative(f);
  const OneFormField dh = exterior_derivative(h);
  ScalarField out(f.grid());
  for (std::size_t i = 0; i < f.points(); ++i) {
    const Mat4 pi = inverse(matrix_at(omega, i));
    double s = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        // M_ba = df_b dh_a - df_a dh_b
        s += pi(a, b) * (df(b, i) * dh(a, i) - df(a, i) * dh(b, i));
      }
    out(0, i) = 0.5 * s;
  }
  return out;
}

double git_symplectic_form(const GKState& s, const ScalarField& f1, const ScalarField& g1,
                           const ScalarField& f2, const ScalarField& g2) {
  const Pfaffians p = pfaffians(s);
  const double el = std::exp(lambda_from(p));
  const MetricField& gi = s.metric().inverse;
  const std::size_t n = s.grid()->size();
  EndoField apj(s.grid()), amj(s.grid());
  for (std::size_t i = 0; i < n; ++i) {
    const Mat4 im = matrix_at(s.I(), i), jm = matrix_at(s.J(), i);
    set_at(apj, i, im + jm);
    set_at(amj, i, im - jm);
  }
  const OneFormField df1 = exterior_derivative(f1), dg1 = exterior_derivative(g1);
  const OneFormField df2 = exterior_derivative(f2), dg2 = exterior_derivative(g2);
  const ScalarField pp12 = inner(act_on_covector(apj, df1), act_on_covector(apj, dg2), gi);
  const ScalarField pp21 = inner(act_on_covector(apj, df2), act_on_covector(apj, dg1), gi);
  const ScalarField mm12 = inner(act_on_covector(amj, df1), act_on_covector(amj, dg2), gi);
  const ScalarField mm21 = inner(act_on_covector(amj, df2), act_on_covector(amj, dg1), gi);
  const ScalarField b12 = poisson_bracket(s.omega(), f1, g2);
  const ScalarField b21 = poisson_bracket(s.omega(), f2, g1);
  ScalarField dens(s.grid());
  for (std::size_t i = 0; i < n; ++i) {
    const double pl = p.plus(0, i), mi = el * p.minus(0, i);
    dens(0, i) = (pp12(0, i) - pp21(0, i)) * pl + (mm12(0, i) - mm21(0, i)) * mi +
                 (b12(0, i) - b21(0, i)) * (pl - mi);
  }
  return integrate_top_form(dens);
}

FunctionalReport functional_report(const GKState& s) {
  FunctionalReport r;
  r.lambda = lambda_invariant(s);
  r.F_value = 0.0;
  r.dF_dt = aubin_yau_sigma(s, ScalarField(s.grid()), s.phi());
  r.energy_rhs = energy_rhs(s);
  r.mu_l2 = moment_map(s).l2_norm;
  const ScalarField gs = generalized_scalar_curvature(s);
  const ScalarField& vol = s.metric().sqrt_det;
  r.gscal_mean = integrate_top_form(pointwise_product(gs, vol)) / integrate_top_form(vol);
  return r;
}

}  // namespace gkt4

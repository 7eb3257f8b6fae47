#include "gkt4/state.hpp"

#include <cmath>
#include <limits>
#include <mutex>

namespace gkt4 {

FlatForms flat_forms() {
  const QuaternionTriple q = quaternionic_triple();
  const Mat4 omega = -0.5 * kaehler_form(Mat4::identity(), q.K);
  return {omega, -(transpose(q.I) * omega), -(transpose(q.J) * omega)};
}

GKState flat_hyperkahler(const GridPtr& grid) {
  const FlatForms f = flat_forms();
  return GKState::assemble(constant_two_form(grid, f.omega), constant_two_form(grid, f.psi1),
                           constant_two_form(grid, f.psi2), OneFormField(grid));
}

namespace {

void check_structure(const Mat4& j, std::size_t i, const char* name) {
  const Mat4 r = j * j + Mat4::identity();
  const double scale = std::max(1.0, max_abs(j) * max_abs(j));
  if (!(max_abs(r) <= kEpsStructure * scale)) {
    throw Error(ErrorCode::BrokenStructure,
                std::string(name) + "^2 != -Id at point " + std::to_string(i));
  }
}

}  // namespace

std::shared_ptr<const GKState::Derived> GKState::derive(const Core& core, OneFormField a) {
  const GridPtr& grid = core.omega.grid();
  require_same_grid(core.omega, a);
  const std::size_t n = grid->size();
  auto d = std::make_shared<Derived>();
  d->psi2 = core.psi2_base + exterior_derivative(a);
  d->a = std::move(a);
  d->j = EndoField(grid);
  d->g = MetricField(grid);
  d->b = TwoFormField(grid);
  d->f_plus = TwoFormField(grid);
  d->f_minus = TwoFormField(grid);
  d->p = ScalarField(grid);
  ScalarField phi(grid);
  for (std::size_t i = 0; i < n; ++i) {
    const PointTwoForm om = point_at(core.omega, i);
    const PointTwoForm ps2 = point_at(d->psi2, i);
    const Mat4 j = reconstruct_J(ps2, om);
    check_structure(j, i, "J");
    set_at(d->j, i, j);
    const Mat4 ps1 = matrix_at(core.psi1, i);
    const Mat4 fp = 2.0 * (ps1 - ps2.matrix());
    const Mat4 fm = 2.0 * (-ps1 - ps2.matrix());
    set_at(d->f_plus, i, fp);
    set_at(d->f_minus, i, fm);
    const Mat4 im = matrix_at(core.i, i);
    const TamingSplit ts = taming_split(PointTwoForm::from_matrix(fp), im);
    for (int c = 0; c < 10; ++c) d->g(c, i) = ts.g.c[c];
    for (int c = 0; c < 6; ++c) d->b(c, i) = ts.b.c[c];
    d->p(0, i) = angle_function(im, j);
    if (d->phi_error.empty()) {
      try {
        // degeneracy test on I +- J, value from the Pfaffians of F+-
        (void)phi_det_route(im, j);
        const double pp = pfaffian(fp), pm = pfaffian(fm);
        if (!(pp > 0.0) || !(pm > 0.0)) throw Error(ErrorCode::DegeneratePair, "nonpositive Pfaffian");
        phi(0, i) = std::log(pp / pm);
      } catch (const Error& err) {
        d->phi_error = std::string(err.what()) + " at point " + std::to_string(i);
      }
    }
  }
  if (d->phi_error.empty()) d->phi = std::move(phi);
  try {
    d->metric = metric_data(d->g);
    d->valid = true;
  } catch (const Error&) {
    d->valid = false;
  }
  d->margin = std::make_shared<MarginCache>();
  return d;
}

GKState GKState::assemble(TwoFormField omega, TwoFormField psi1, TwoFormField psi2_base, OneFormField a) {
  require_same_grid(omega, psi1);
  require_same_grid(omega, psi2_base);
  auto core = std::make_shared<Core>();
  const std::size_t n = omega.points();
  core->i = EndoField(omega.grid());
  for (std::size_t i = 0; i < n; ++i) {
    const Mat4 im = reconstruct_J(point_at(psi1, i), point_at(omega, i));
    check_structure(im, i, "I");
    set_at(core->i, i, im);
  }
  core->omega = std::move(omega);
  core->psi1 = std::move(psi1);
  core->psi2_base = std::move(psi2_base);
  auto d = derive(*core, std::move(a));
  return GKState(std::move(core), std::move(d));
}

GKState GKState::with_potential(OneFormField a) const {
  auto d = derive(*core_, std::move(a));
  std::const_pointer_cast<Derived>(d)->t = d_->t;
  return GKState(core_, std::move(d));
}

GKState GKState::at_time(double t) const {
  auto d = std::make_shared<Derived>(*d_);
  d->t = t;
  return GKState(core_, std::move(d));
}

GKState GKState::with_provenance(std::string text) const {
  auto core = std::make_shared<Core>(*core_);
  core->provenance = std::move(text);
  return GKState(std::move(core), d_);
}

const GKState::MarginCache& GKState::margin_cache() const {
  MarginCache& m = *d_->margin;
  std::call_once(m.once, [&] {
    double margin = std::numeric_limits<double>::infinity();
    std::size_t where = 0;
    for (std::size_t i = 0; i < grid()->size(); ++i) {
      const double e = sym_eigenvalues(matrix_at(d_->g, i))[0];
      if (e < margin) {
        margin = e;
        where = i;
      }
    }
    m.value = margin;
    m.index = where;
  });
  return m;
}

const MetricData& GKState::metric() const {
  if (!d_->metric) {
    throw Error(ErrorCode::NonPositiveMetric,
                "metric is not positive-definite (margin " + std::to_string(positivity_margin()) + ")");
  }
  return *d_->metric;
}

const ScalarField& GKState::phi() const {
  if (!d_->phi) throw Error(ErrorCode::DegeneratePair, d_->phi_error);
  return *d_->phi;
}

const ScalarField& ricci_potential(const GKState& s) { return s.phi(); }

TwoFormField omega_I(const GKState& s) {
  TwoFormField out(s.grid());
  for (std::size_t i = 0; i < s.grid()->size(); ++i) {
    set_at(out, i, kaehler_form(matrix_at(s.g(), i), matrix_at(s.I(), i)));
  }
  return out;
}

TwoFormField omega_J(const GKState& s) {
  TwoFormField out(s.grid());
  for (std::size_t i = 0; i < s.grid()->size(); ++i) {
    set_at(out, i, kaehler_form(matrix_at(s.g(), i), matrix_at(s.J(), i)));
  }
  return out;
}

ThreeFormField torsion(const GKState& s) { return exterior_derivative(s.b()); }

OneFormField lee_form(const GKState& s, Side which) {
  const TwoFormField w = which == Side::I ? omega_I(s) : omega_J(s);
  (void)s.metric();
  return lambda_contraction(exterior_derivative(w), w, s.g());
}

OneFormField j_dphi(const GKState& s) {
  return act_on_covector(s.J(), exterior_derivative(s.phi()));
}

TwoFormField bismut_ricci(const GKState& s) {
  TwoFormField r = exterior_derivative(j_dphi(s));
  r *= -0.5;
  return r;
}

ScalarField generalized_scalar_curvature(const GKState& s) {
  const GridPtr& grid = s.grid();
  const OneFormField dphi = exterior_derivative(s.phi());
  OneFormField beta(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Mat4 fm = matrix_at(s.F_minus(), i);
    const double scale = std::max(1.0, max_abs(fm));
    if (std::abs(pfaffian(fm)) <= kEpsInv * scale * scale) {
      throw Error(ErrorCode::SingularForm, "F- is not invertible at point " + std::to_string(i));
    }
    // iota_V F- = -dPhi  <=>  F-^T V = -dPhi  <=>  V = F-^{-1} dPhi
    const auto v = mat_vec(inverse(fm), vec_at(dphi, i));
    set_vec(beta, i, apply_left(v, matrix_at(s.omega(), i)));
  }
  const TwoFormField db = exterior_derivative(beta);
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Mat4 fp = matrix_at(s.F_plus(), i);
    out(0, i) = 4.0 * wedge_top(matrix_at(db, i), fp) / wedge_top(fp, fp);
  }
  return out;
}

double torsion_norm(const GKState& s) {
  const MetricData& md = s.metric();
  const ThreeFormField h = torsion(s);
  ScalarField dens = inner(h, h, md.inverse);
  for (std::size_t i = 0; i < dens.points(); ++i) dens(0, i) *= md.sqrt_det(0, i);
  return integrate_top_form(dens);
}

EndoField poisson_tensor(const GKState& s) {
  EndoField out(s.grid());
  const MetricData& md = s.metric();
  for (std::size_t i = 0; i < s.grid()->size(); ++i) {
    const Mat4 im = matrix_at(s.I(), i), jm = matrix_at(s.J(), i);
    const Mat4 c = im * jm - jm * im;
    set_at(out, i, matrix_at(md.inverse, i) * transpose(c));
  }
  return out;
}

}  // namespace gkt4

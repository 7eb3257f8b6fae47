#include "gkt4/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gkt4/functionals.hpp"
#include "gkt4/random.hpp"

namespace gkt4 {

bool CheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* CheckReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string CheckReport::table() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-28s %14s %14s  %s\n", "check", "residual", "threshold", "result");
  out << line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-28s %14.6e %14.6e  %s\n", c.name.c_str(), c.residual, c.threshold,
                  c.pass ? "PASS" : "FAIL");
    out << line;
  }
  out << (passed() ? "overall PASS" : "overall FAIL") << " (" << suite << " suite, " << checks.size()
      << " checks)\n";
  return out.str();
}

std::string CheckReport::rows() const {
  std::ostringstream out;
  out << "suite,check,residual,threshold,pass\n";
  char num[64];
  for (const auto& c : checks) {
    out << suite << ',' << c.name << ',';
    std::snprintf(num, sizeof num, "%.17g", c.residual);
    out << num << ',';
    std::snprintf(num, sizeof num, "%.17g", c.threshold);
    out << num << ',' << (c.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

namespace {

// Tracks max |lhs - rhs| and the largest term.
struct Discrepancy {
  double err = 0.0;
  double scale = 0.0;

  void add(double lhs, double rhs) {
    err = std::max(err, std::abs(lhs - rhs));
    scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
  }
  double residual() const { return std::isfinite(err) ? err / std::max(1.0, scale) : INFINITY; }
};

void push(CheckReport& r, const std::string& name, double residual, double threshold) {
  const bool pass = std::isfinite(residual) && residual <= threshold;
  r.checks.push_back({name, residual, threshold, pass});
}

double fault_for(const FaultInjection& f, const std::string& name) {
  return f.check == name ? f.size : 0.0;
}

// Haar-distributed rotation with det = +1.
Mat4 random_rotation(Rng& rng) {
  Mat4 q;
  for (double& v : q.v) v = rng.normal();
  // Gram-Schmidt on columns
  for (int c = 0; c < 4; ++c) {
    for (int k = 0; k < c; ++k) {
      double d = 0.0;
      for (int r = 0; r < 4; ++r) d += q(r, c) * q(r, k);
      for (int r = 0; r < 4; ++r) q(r, c) -= d * q(r, k);
    }
    double nrm = 0.0;
    for (int r = 0; r < 4; ++r) nrm += q(r, c) * q(r, c);
    nrm = std::sqrt(nrm);
    for (int r = 0; r < 4; ++r) q(r, c) /= nrm;
  }
  if (det(q) < 0.0)
    for (int r = 0; r < 4; ++r) q(r, 0) = -q(r, 0);
  return q;
}

struct PointSample {
  Mat4 i, j, g;
};

PointSample sample(Rng& rng, int k) {
  const QuaternionTriple q = quaternionic_triple();
  if (k == 0) return {q.I, q.J, Mat4::identity()};
  const Mat4 r = random_rotation(rng);
  // mild symmetric stretch so that g is not the identity
  Mat4 s = Mat4::identity();
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      const double x = 0.15 * rng.uniform(-1.0, 1.0);
      s(a, b) += x;
      if (a != b) s(b, a) += x;
    }
  const double theta = rng.uniform(-1.2, 1.2);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Mat4 jmix = std::sin(theta) * q.I + std::cos(theta) * (std::cos(phi) * q.J + std::sin(phi) * q.K);
  const Mat4 a = r * s;
  const Mat4 ai = inverse(a);
  return {a * q.I * ai, a * jmix * ai, transpose(ai) * ai};
}

void add_matrix(Discrepancy& d, const Mat4& lhs, const Mat4& rhs, double fault) {
  for (int k = 0; k < 16; ++k) d.add(lhs.v[k] + fault, rhs.v[k]);
}

}  // namespace

std::vector<std::string> pointwise_check_names() {
  return {"complex_structures", "fdefs_plus",      "fdefs_minus",     "basic1_I",
          "basic1_J",           "b_half_F",        "b_symplectic",    "taming_metric",
          "taming_roundtrip",   "phi_det",        "phi_angle",       "anticommutation",
          "sum_squares",        "sigma_type_I",    "sigma_type_J",    "sigma_omega",
          "pfaffian_det"};
}

CheckReport run_pointwise_suite(std::uint64_t seed, int count, const FaultInjection& fault) {
  if (count < 1) throw Error(ErrorCode::Precondition, "pointwise suite needs count >= 1");
  Rng rng(seed);
  const auto names = pointwise_check_names();
  std::vector<Discrepancy> d(names.size());
  auto at = [&](const char* n) -> Discrepancy& {
    return d[std::find(names.begin(), names.end(), n) - names.begin()];
  };
  auto fl = [&](const char* n) { return fault_for(fault, n); };
  const Mat4 id = Mat4::identity();
  for (int k = 0; k < count; ++k) {
    const PointSample ps = sample(rng, k);
    const Mat4 &i = ps.i, &j = ps.j, &g = ps.g;
    add_matrix(at("complex_structures"), i * i, -id, fl("complex_structures"));
    add_matrix(at("complex_structures"), j * j, -id, fl("complex_structures"));
    const Mat4 c = i * j - j * i;
    const Mat4 omega = transpose(inverse(c)) * g;
    const Mat4 psi1 = -(transpose(i) * omega);
    const Mat4 psi2 = -(transpose(j) * omega);
    const Mat4 fp = 2.0 * (psi1 - psi2);
    const Mat4 fm = 2.0 * (-psi1 - psi2);
    add_matrix(at("fdefs_plus"), fp, -2.0 * (transpose(inverse(i + j)) * g), fl("fdefs_plus"));
    add_matrix(at("fdefs_minus"), fm, -2.0 * (transpose(inverse(i - j)) * g), fl("fdefs_minus"));
    const TamingSplit ts = taming_split(PointTwoForm::from_matrix(fp), i);
    const Mat4 gm = ts.g.matrix();
    const Mat4 b = ts.b.matrix();
    add_matrix(at("taming_metric"), gm, g, fl("taming_metric"));
    add_matrix(at("basic1_I"), transpose(i) * fp, -gm + b, fl("basic1_I"));
    add_matrix(at("basic1_J"), transpose(j) * fp, -gm - b, fl("basic1_J"));
    add_matrix(at("b_half_F"), b, 0.5 * (transpose(i - j) * fp), fl("b_half_F"));
    add_matrix(at("b_symplectic"), b, -(transpose(inverse(i + j) * (i - j)) * g), fl("b_symplectic"));
    {
      const TamingSplit back = taming_split(compose_taming(ts.g, ts.b, i), i);
      add_matrix(at("taming_roundtrip"), back.g.matrix() + back.b.matrix(), gm + b, fl("taming_roundtrip"));
    }
    const double ph = phi_pointwise(i, j, PointTwoForm::from_matrix(omega));
    at("phi_det").add(ph + fl("phi_det"), phi_det_route(i, j));
    at("phi_angle").add(ph + fl("phi_angle"), phi_angle_route(i, j));
    add_matrix(at("anticommutation"), (i + j) * (i - j), -((i - j) * (i + j)), fl("anticommutation"));
    const double p = angle_function(i, j);
    add_matrix(at("sum_squares"), (i + j) * (i + j), (-2.0 * (1.0 + p)) * id, fl("sum_squares"));
    add_matrix(at("sum_squares"), (i - j) * (i - j), (-2.0 * (1.0 - p)) * id, fl("sum_squares"));
    const Mat4 sigma = inverse(g) * transpose(c);
    add_matrix(at("sigma_type_I"), i * sigma, sigma * transpose(i), fl("sigma_type_I"));
    add_matrix(at("sigma_type_J"), j * sigma, sigma * transpose(j), fl("sigma_type_J"));
    add_matrix(at("sigma_omega"), sigma * omega, id, fl("sigma_omega"));
    for (const Mat4& f : {fp, fm, psi1, omega}) {
      const double pf = pfaffian(f);
      const double dt = det(f);
      // relative comparison
      const double sc = std::max(1.0, std::abs(dt));
      at("pfaffian_det").add((pf * pf) / sc + fl("pfaffian_det"), dt / sc);
    }
  }
  CheckReport r;
  r.suite = "pointwise";
  const double threshold = 1e-9;
  for (std::size_t k = 0; k < names.size(); ++k) push(r, names[k], d[k].residual(), threshold);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

template <class F>
void add_fields(Discrepancy& d, const F& lhs, const F& rhs, double fault) {
  for (std::size_t k = 0; k < lhs.data().size(); ++k) d.add(lhs.data()[k] + fault, rhs.data()[k]);
}

template <class F>
void add_zero(Discrepancy& d, const F& lhs, double fault) {
  for (double v : lhs.data()) d.add(v + fault, 0.0);
}

}  // namespace

std::vector<std::string> field_check_names() {
  return {"closed_omega",      "closed_psi1",      "closed_psi2",     "complex_I",        "complex_J",
          "metric_I_invariant", "metric_J_invariant", "b_type_I",     "b_type_J",         "torsion_I",
          "torsion_J",         "pluriclosed",      "torsion_closed",  "lee_routes_I",     "lee_routes_J",
          "lee_b_identity",   "log_det_identity", "commutator_dphi", "bismut_closed",  "nijenhuis_I",
          "nijenhuis_J",       "sigma_omega",      "fdefs",           "phi_routes",       "chern_laplacian",
          "chern_laplacian_J",      "hamiltonian_generator", "isotopy_velocity"};
}

CheckReport run_field_suite(const GKState& s, double threshold, const FaultInjection& fault) {
  const GridPtr& grid = s.grid();
  const std::size_t n = grid->size();
  const MetricData& md = s.metric();
  const MetricField& g = s.g();
  auto fl = [&](const char* name) { return fault_for(fault, name); };
  CheckReport r;
  r.suite = "field";
  const double tight = 1e-10;

  auto closed = [&](const char* name, const TwoFormField& w) {
    Discrepancy d;
    add_zero(d, exterior_derivative(w), fl(name));
    push(r, name, d.residual(), threshold);
  };
  closed("closed_omega", s.omega());
  closed("closed_psi1", s.psi1());
  closed("closed_psi2", s.psi2());

  {
    Discrepancy di, dj, gi, gj, bi, bj;
    const Mat4 id = Mat4::identity();
    for (std::size_t p = 0; p < n; ++p) {
      const Mat4 im = matrix_at(s.I(), p), jm = matrix_at(s.J(), p);
      const Mat4 gm = matrix_at(g, p), bm = matrix_at(s.b(), p);
      add_matrix(di, im * im, -id, fl("complex_I"));
      add_matrix(dj, jm * jm, -id, fl("complex_J"));
      add_matrix(gi, transpose(im) * gm * im, gm, fl("metric_I_invariant"));
      add_matrix(gj, transpose(jm) * gm * jm, gm, fl("metric_J_invariant"));
      add_matrix(bi, transpose(im) * bm * im, -bm, fl("b_type_I"));
      add_matrix(bj, transpose(jm) * bm * jm, -bm, fl("b_type_J"));
    }
    push(r, "complex_I", di.residual(), tight);
    push(r, "complex_J", dj.residual(), tight);
    push(r, "metric_I_invariant", gi.residual(), tight);
    push(r, "metric_J_invariant", gj.residual(), tight);
    push(r, "b_type_I", bi.residual(), tight);
    push(r, "b_type_J", bj.residual(), tight);
  }

  const TwoFormField w_i = omega_I(s);
  const TwoFormField w_j = omega_J(s);
  const ThreeFormField h = torsion(s);
  {
    Discrepancy d;
    add_fields(d, dc_operator(w_i, s.I()), h, fl("torsion_I"));
    push(r, "torsion_I", d.residual(), threshold);
  }
  {
    Discrepancy d;
    add_fields(d, dc_operator(w_j, s.J()), -h, fl("torsion_J"));
    push(r, "torsion_J", d.residual(), threshold);
  }
  {
    Discrepancy d;
    add_zero(d, exterior_derivative(dc_operator(w_i, s.I())), fl("pluriclosed"));
    push(r, "pluriclosed", d.residual(), threshold);
  }
  {
    Discrepancy d;
    add_zero(d, exterior_derivative(h), fl("torsion_closed"));
    push(r, "torsion_closed", d.residual(), threshold);
  }

  const OneFormField theta_i = lambda_contraction(exterior_derivative(w_i), w_i, g);
  const OneFormField theta_j = lambda_contraction(exterior_derivative(w_j), w_j, g);
  {
    Discrepancy d;
    add_fields(d, theta_i, act_on_covector(s.I(), codifferential(w_i, g)), fl("lee_routes_I"));
    push(r, "lee_routes_I", d.residual(), threshold);
  }
  {
    Discrepancy d;
    add_fields(d, theta_j, act_on_covector(s.J(), codifferential(w_j, g)), fl("lee_routes_J"));
    push(r, "lee_routes_J", d.residual(), threshold);
  }

  // <b, iota_{e_c} H> for each coordinate direction c
  OneFormField b_dot_h(grid);
  for (int c = 0; c < 4; ++c) {
    VectorField e(grid);
    std::fill(e.comp(c).begin(), e.comp(c).end(), 1.0);
    const ScalarField v = inner(s.b(), interior(e, h), md.inverse);
    std::copy(v.comp(0).begin(), v.comp(0).end(), b_dot_h.comp(c).begin());
  }
  {
    const OneFormField db = codifferential(s.b(), g);
    const VectorField th = sharp(theta_i, md.inverse);
    OneFormField rhs = interior(th, s.b());
    rhs -= b_dot_h;
    rhs += db;
    Discrepancy d;
    add_fields(d, theta_i, rhs, fl("lee_b_identity"));
    push(r, "lee_b_identity", d.residual(), threshold);
  }
  {
    ScalarField logdet(grid);
    for (std::size_t p = 0; p < n; ++p) logdet(0, p) = std::log(det(matrix_at(s.I(), p) + matrix_at(s.J(), p)));
    OneFormField rhs = b_dot_h;
    rhs *= -2.0;
    Discrepancy d;
    add_fields(d, exterior_derivative(logdet), rhs, fl("log_det_identity"));
    push(r, "log_det_identity", d.residual(), threshold);
  }

  const ScalarField& phi = s.phi();
  const OneFormField dphi = exterior_derivative(phi);
  {
    EndoField c(grid);
    for (std::size_t p = 0; p < n; ++p) {
      const Mat4 im = matrix_at(s.I(), p), jm = matrix_at(s.J(), p);
      set_at(c, p, im * jm - jm * im);
    }
    OneFormField rhs = theta_i - theta_j;
    rhs *= 2.0;
    Discrepancy d;
    add_fields(d, act_on_covector(c, dphi), rhs, fl("commutator_dphi"));
    push(r, "commutator_dphi", d.residual(), threshold);
  }
  {
    Discrepancy d;
    add_zero(d, exterior_derivative(bismut_ricci(s)), fl("bismut_closed"));
    push(r, "bismut_closed", d.residual(), threshold);
  }

  auto nijenhuis = [&](const char* name, const EndoField& jf) {
    // dj[e][a*4+b] = d_e J^a_b
    std::vector<EndoField> dj(4, EndoField(grid));
    for (int e = 0; e < 4; ++e)
      for (int c = 0; c < 16; ++c) grid->derivative(jf.comp(c), dj[e].comp(c), e);
    Discrepancy d;
    const double f = fl(name);
    for (std::size_t p = 0; p < n; ++p) {
      const Mat4 jm = matrix_at(jf, p);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int c = b + 1; c < 4; ++c) {
            double v = 0.0;
            for (int k = 0; k < 4; ++k) {
              v += jm(k, b) * dj[k](a * 4 + c, p) - jm(k, c) * dj[k](a * 4 + b, p);
              v -= jm(a, k) * (dj[b](k * 4 + c, p) - dj[c](k * 4 + b, p));
            }
            d.add(v + f, 0.0);
          }
    }
    push(r, name, d.residual(), threshold);
  };
  nijenhuis("nijenhuis_I", s.I());
  nijenhuis("nijenhuis_J", s.J());

  const EndoField sigma = poisson_tensor(s);
  {
    Discrepancy d;
    const Mat4 id = Mat4::identity();
    for (std::size_t p = 0; p < n; ++p) {
      add_matrix(d, matrix_at(sigma, p) * matrix_at(s.omega(), p), id, fl("sigma_omega"));
    }
    push(r, "sigma_omega", d.residual(), tight);
  }
  {
    Discrepancy d;
    for (std::size_t p = 0; p < n; ++p) {
      const Mat4 im = matrix_at(s.I(), p), jm = matrix_at(s.J(), p), gm = matrix_at(g, p);
      add_matrix(d, matrix_at(s.F_plus(), p), -2.0 * (transpose(inverse(im + jm)) * gm), fl("fdefs"));
      add_matrix(d, matrix_at(s.F_minus(), p), -2.0 * (transpose(inverse(im - jm)) * gm), fl("fdefs"));
    }
    push(r, "fdefs", d.residual(), tight);
  }
  {
    Discrepancy d;
    for (std::size_t p = 0; p < n; ++p) {
      const Mat4 im = matrix_at(s.I(), p), jm = matrix_at(s.J(), p);
      d.add(phi(0, p) + fl("phi_routes"), phi_det_route(im, jm));
      d.add(phi(0, p) + fl("phi_routes"), phi_angle_route(im, jm));
    }
    push(r, "phi_routes", d.residual(), tight);
  }

  const OneFormField jd = j_dphi(s);
  const ScalarField ddc_phi = inner(exterior_derivative(jd), w_j, md.inverse);
  {
    Discrepancy d;
    add_fields(d, ddc_phi, laplacian_chern(phi, g, theta_i), fl("chern_laplacian"));
    push(r, "chern_laplacian", d.residual(), threshold);
  }
  {
    Discrepancy d;
    add_fields(d, ddc_phi, laplacian_chern(phi, g, theta_j), fl("chern_laplacian_J"));
    push(r, "chern_laplacian_J", d.residual(), threshold);
  }
  {
    // X^b = -1/2 dPhi_a sigma^{ab} against (theta_J - theta_I)^sharp
    VectorField x(grid);
    for (std::size_t p = 0; p < n; ++p) {
      auto v = apply_left(vec_at(dphi, p), matrix_at(sigma, p));
      for (double& c : v) c *= -0.5;
      set_vec(x, p, v);
    }
    Discrepancy d;
    add_fields(d, x, sharp(theta_j - theta_i, md.inverse), fl("hamiltonian_generator"));
    push(r, "hamiltonian_generator", d.residual(), threshold);
  }
  {
    // GKRF velocity equals the isotopy velocity with generator Phi
    OneFormField v = jd;
    v *= -0.5;
    VectorField x(grid);
    for (std::size_t p = 0; p < n; ++p) set_vec(x, p, mat_vec(inverse(matrix_at(s.omega(), p)), vec_at(dphi, p)));
    OneFormField w = interior(x, s.psi2());
    w *= 0.5;
    Discrepancy d;
    add_fields(d, v, w, fl("isotopy_velocity"));
    push(r, "isotopy_velocity", d.residual(), threshold);
  }

  // order fixed by name list
  std::vector<CheckResult> ordered;
  for (const auto& name : field_check_names()) {
    if (const CheckResult* c = r.find(name)) ordered.push_back(*c);
  }
  r.checks = std::move(ordered);
  return r;
}

// ---------------------------------------------------------------------------

std::vector<std::string> flow_check_names() {
  return {"rows_increasing", "positivity",     "lambda_conservation", "heat_residual",
          "max_principle",   "gradient_decay", "energy_identity",     "energy_nonnegative",
          "F_convexity",     "trend_phi",      "trend_mu",            "trend_torsion"};
}

CheckReport run_flow_suite(const FlowTrace& input, double dt, const FaultInjection& fault) {
  if (input.rows.size() < 3) throw Error(ErrorCode::Precondition, "flow suite needs at least 3 rows");
  if (!(dt > 0.0)) throw Error(ErrorCode::Precondition, "flow suite needs dt > 0");
  std::vector<DiagnosticsRecord> rows = input.rows;
  const std::size_t m = rows.size();
  const std::size_t mid = m / 2;
  auto fl = [&](const char* name) { return fault.check == name; };
  // fault injection on the trace columns
  if (fl("rows_increasing")) std::swap(rows[mid].t, rows[mid - 1].t);
  if (fl("positivity")) rows[mid].pos_margin = -fault.size;
  if (fl("lambda_conservation")) rows[m - 1].lambda += fault.size;
  if (fl("heat_residual")) rows[mid].heat_residual += 1e3 * fault.size;
  if (fl("max_principle")) rows[mid].sup_phi_dev = rows[mid - 1].sup_phi_dev + fault.size;
  if (fl("gradient_decay")) rows[m - 1].sup_grad_phi_sq += 1e3 * fault.size + 10.0 * rows[0].sup_phi_dev;
  if (fl("energy_identity")) {
    for (auto& r : rows) r.energy_rhs = r.energy_rhs * 1.1 + fault.size;
  }
  if (fl("energy_nonnegative")) rows[mid].energy_rhs = -fault.size;
  if (fl("F_convexity")) rows[mid].F_value += fault.size;
  if (fl("trend_phi")) rows[m - 1].sup_phi_dev = rows[0].sup_phi_dev + fault.size;
  if (fl("trend_mu")) rows[m - 1].mu_l2 = rows[0].mu_l2 + fault.size;
  if (fl("trend_torsion")) rows[m - 1].torsion_l2 = rows[0].torsion_l2 + fault.size;

  CheckReport r;
  r.suite = "flow";
  {
    double worst = 0.0;
    for (std::size_t k = 1; k < m; ++k) worst = std::max(worst, rows[k - 1].t - rows[k].t + (rows[k].t == rows[k - 1].t));
    push(r, "rows_increasing", worst > 0.0 ? worst : 0.0, 0.0);
    if (worst > 0.0) r.checks.back().pass = false;
  }
  {
    double lo = INFINITY;
    for (const auto& row : rows) lo = std::min(lo, row.pos_margin);
    push(r, "positivity", lo > 0.0 ? 0.0 : 1.0 - lo, 0.0);
  }
  {
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, std::abs(row.lambda - rows[0].lambda));
    push(r, "lambda_conservation", worst, 1e-8);
  }
  {
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, row.heat_residual);
    push(r, "heat_residual", worst, 10.0 * (dt * dt + 1e-6));
  }
  {
    double worst = 0.0;
    for (std::size_t k = 1; k < m; ++k) worst = std::max(worst, rows[k].sup_phi_dev - rows[k - 1].sup_phi_dev);
    push(r, "max_principle", worst, 1e-12);
  }
  {
    const double s0 = rows[0].sup_phi_dev * rows[0].sup_phi_dev;
    double worst = 0.0;
    for (const auto& row : rows) {
      if (row.t < 0.01) continue;
      worst = std::max(worst, s0 > 0.0 ? row.t * row.sup_grad_phi_sq / s0 : row.sup_grad_phi_sq);
    }
    push(r, "gradient_decay", worst, s0 > 0.0 ? 1.05 : 1e-12);
  }
  {
    double worst = 0.0, lowest = 0.0;
    for (std::size_t k = 1; k + 1 < m; ++k) {
      const double h1 = rows[k].t - rows[k - 1].t, h2 = rows[k + 1].t - rows[k].t;
      if (!(h1 > 0.0 && h2 > 0.0)) continue;
      // second-order derivative on a nonuniform stencil
      const double fd = (-h2 / (h1 * (h1 + h2))) * rows[k - 1].dF_dt +
                        ((h2 - h1) / (h1 * h2)) * rows[k].dF_dt + (h1 / (h2 * (h1 + h2))) * rows[k + 1].dF_dt;
      lowest = std::min({lowest, fd, rows[k].energy_rhs});
      if (rows[k].t < 0.01) continue;
      const double e = rows[k].energy_rhs;
      const double rel = std::abs(fd - e) / std::max(std::abs(e), 1e-10);
      worst = std::max(worst, rel);
    }
    for (const auto& row : rows) lowest = std::min(lowest, row.energy_rhs);
    push(r, "energy_identity", worst, 0.02);
    push(r, "energy_nonnegative", std::max(0.0, -lowest), 1e-10);
  }
  {
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < m; ++k) {
      const double h1 = rows[k].t - rows[k - 1].t, h2 = rows[k + 1].t - rows[k].t;
      if (!(h1 > 0.0 && h2 > 0.0)) continue;
      const double second = ((rows[k + 1].F_value - rows[k].F_value) / h2 -
                             (rows[k].F_value - rows[k - 1].F_value) / h1) * 0.5 * (h1 + h2);
      worst = std::max(worst, -second);
    }
    push(r, "F_convexity", worst, 1e-8);
  }
  auto trend = [&](const char* name, double first, double last) {
    // strict decrease; vacuous when the initial value is already at round-off
    if (first <= 1e-12) {
      push(r, name, std::max(0.0, last - first), 1e-12);
    } else {
      push(r, name, last / first, 1.0 - 1e-12);
    }
  };
  trend("trend_phi", rows[0].sup_phi_dev, rows[m - 1].sup_phi_dev);
  trend("trend_mu", rows[0].mu_l2, rows[m - 1].mu_l2);
  trend("trend_torsion", rows[0].torsion_l2, rows[m - 1].torsion_l2);
  return r;
}

}  // namespace gkt4

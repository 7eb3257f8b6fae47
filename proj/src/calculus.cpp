#include "gkt4/calculus.hpp"

#include <cmath>
#include <numbers>

namespace gkt4 {

namespace {

constexpr double kVolume = 16.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi * std::numbers::pi;

void deriv(const GridPtr& grid, std::span<const double> in, std::span<double> out, int axis) {
  grid->derivative(in, out, axis);
}

// Sign and sorted slot of the 3-form component for an index triple.
// Returns 0 if indices repeat.
int triple_sign(int a, int b, int c, int& slot) {
  if (a == b || b == c || a == c) return 0;
  int s = 1;
  int x[3] = {a, b, c};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2 - i; ++j)
      if (x[j] > x[j + 1]) {
        std::swap(x[j], x[j + 1]);
        s = -s;
      }
  slot = triple_index(x[0], x[1], x[2]);
  return s;
}

}  // namespace

double three_form_value(const ThreeFormField& eta, std::size_t i, int a, int b, int c) {
  int slot = 0;
  const int s = triple_sign(a, b, c, slot);
  return s == 0 ? 0.0 : s * eta(slot, i);
}

TwoFormField constant_two_form(const GridPtr& grid, const Mat4& m) {
  TwoFormField f(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) set_at(f, i, m);
  return f;
}

EndoField constant_endo(const GridPtr& grid, const Mat4& m) {
  EndoField f(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) set_at(f, i, m);
  return f;
}

MetricField constant_metric(const GridPtr& grid, const Mat4& m) {
  MetricField f(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) set_at(f, i, m);
  return f;
}

ScalarField constant_scalar(const GridPtr& grid, double v) {
  ScalarField f(grid);
  std::fill(f.data().begin(), f.data().end(), v);
  return f;
}

double compensated_sum(std::span<const double> v) {
  double s = 0.0, c = 0.0;
  for (double x : v) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  return s + c;
}

double grid_mean(const ScalarField& f) {
  return compensated_sum(f.comp(0)) / static_cast<double>(f.points());
}

double sup_norm(const ScalarField& f) { return f.max_abs(); }

double integrate_top_form(const ScalarField& density) { return grid_mean(density) * kVolume; }

ScalarField partial(const ScalarField& f, int axis) {
  ScalarField out(f.grid());
  deriv(f.grid(), f.comp(0), out.comp(0), axis);
  return out;
}

OneFormField exterior_derivative(const ScalarField& f) {
  OneFormField out(f.grid());
  for (int a = 0; a < 4; ++a) deriv(f.grid(), f.comp(0), out.comp(a), a);
  return out;
}

TwoFormField exterior_derivative(const OneFormField& w) {
  const auto& grid = w.grid();
  const std::size_t n = grid->size();
  TwoFormField out(grid);
  std::vector<double> tmp(n);
  for (int p = 0; p < 6; ++p) {
    const int a = kPairA[p], b = kPairB[p];
    auto o = out.comp(p);
    // d_a w_b - d_b w_a
    if (!grid->trivial_axis(a)) {
      deriv(grid, w.comp(b), o, a);
    }
    if (!grid->trivial_axis(b)) {
      deriv(grid, w.comp(a), tmp, b);
      for (std::size_t i = 0; i < n; ++i) o[i] -= tmp[i];
    }
  }
  return out;
}

ThreeFormField exterior_derivative(const TwoFormField& w) {
  const auto& grid = w.grid();
  const std::size_t n = grid->size();
  ThreeFormField out(grid);
  std::vector<double> tmp(n);
  for (int t = 0; t < 4; ++t) {
    const int idx[3] = {kTripleA[t], kTripleB[t], kTripleC[t]};
    auto o = out.comp(t);
    for (int j = 0; j < 3; ++j) {
      const int axis = idx[j];
      if (grid->trivial_axis(axis)) continue;
      int rest[2], r = 0;
      for (int k = 0; k < 3; ++k)
        if (k != j) rest[r++] = idx[k];
      deriv(grid, w.comp(pair_index(rest[0], rest[1])), tmp, axis);
      const double s = (j % 2 == 0) ? 1.0 : -1.0;
      for (std::size_t i = 0; i < n; ++i) o[i] += s * tmp[i];
    }
  }
  return out;
}

ScalarField exterior_derivative(const ThreeFormField& eta) {
  const auto& grid = eta.grid();
  const std::size_t n = grid->size();
  ScalarField out(grid);
  std::vector<double> tmp(n);
  auto o = out.comp(0);
  // (d eta)_0123 = d0 eta123 - d1 eta023 + d2 eta013 - d3 eta012
  for (int axis = 0; axis < 4; ++axis) {
    if (grid->trivial_axis(axis)) continue;
    deriv(grid, eta.comp(3 - axis), tmp, axis);
    const double s = (axis % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) o[i] += s * tmp[i];
  }
  return out;
}

ThreeFormField complex_action(const ThreeFormField& eta, const EndoField& iend) {
  const auto& grid = eta.grid();
  ThreeFormField out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Mat4 m = matrix_at(iend, i);
    double full[4][4][4];
    for (int d = 0; d < 4; ++d)
      for (int e = 0; e < 4; ++e)
        for (int f = 0; f < 4; ++f) full[d][e][f] = three_form_value(eta, i, d, e, f);
    for (int t = 0; t < 4; ++t) {
      const int a = kTripleA[t], b = kTripleB[t], c = kTripleC[t];
      double s = 0.0;
      for (int d = 0; d < 4; ++d) {
        if (m(d, a) == 0.0) continue;
        for (int e = 0; e < 4; ++e) {
          if (m(e, b) == 0.0) continue;
          for (int f = 0; f < 4; ++f) s += m(d, a) * m(e, b) * m(f, c) * full[d][e][f];
        }
      }
      out(t, i) = -s;
    }
  }
  return out;
}

ThreeFormField dc_operator(const TwoFormField& w, const EndoField& iend) {
  return complex_action(exterior_derivative(w), iend);
}

OneFormField act_on_covector(const EndoField& a, const OneFormField& xi) {
  OneFormField out(xi.grid());
  for (std::size_t i = 0; i < xi.points(); ++i) {
    set_vec(out, i, act_on_covector(matrix_at(a, i), vec_at(xi, i)));
  }
  return out;
}

MetricData metric_data(const MetricField& g) {
  MetricData md{MetricField(g.grid()), ScalarField(g.grid())};
  for (std::size_t i = 0; i < g.points(); ++i) {
    const Mat4 m = matrix_at(g, i);
    Mat4 l;
    if (!cholesky(m, l)) {
      throw Error(ErrorCode::NonPositiveMetric, "metric is not positive-definite at point " + std::to_string(i));
    }
    set_at(md.inverse, i, inverse(m));
    md.sqrt_det(0, i) = l(0, 0) * l(1, 1) * l(2, 2) * l(3, 3);
  }
  return md;
}

VectorField sharp(const OneFormField& xi, const MetricField& gi) {
  VectorField out(xi.grid());
  for (std::size_t i = 0; i < xi.points(); ++i) set_vec(out, i, mat_vec(matrix_at(gi, i), vec_at(xi, i)));
  return out;
}

OneFormField flat(const VectorField& x, const MetricField& g) {
  OneFormField out(x.grid());
  for (std::size_t i = 0; i < x.points(); ++i) set_vec(out, i, mat_vec(matrix_at(g, i), vec_at(x, i)));
  return out;
}

EndoField structure_of(const TwoFormField& omega, const MetricField& g) {
  EndoField out(g.grid());
  for (std::size_t i = 0; i < g.points(); ++i) {
    const Mat4 gm = matrix_at(g, i);
    set_at(out, i, -(inverse(gm) * matrix_at(omega, i)));
  }
  return out;
}

namespace {

// Columns of L^{-T}: a g-orthonormal frame.
Mat4 orthonormal_frame(const Mat4& g, std::size_t i) {
  Mat4 l;
  if (!cholesky(g, l)) {
    throw Error(ErrorCode::NonPositiveMetric, "metric is not positive-definite at point " + std::to_string(i));
  }
  return transpose(inverse(l));
}

}  // namespace

ScalarField lambda_contraction(const TwoFormField& psi, const TwoFormField& omega, const MetricField& g) {
  ScalarField out(g.grid());
  for (std::size_t i = 0; i < g.points(); ++i) {
    const Mat4 gm = matrix_at(g, i);
    const Mat4 e = orthonormal_frame(gm, i);
    const Mat4 a = -(inverse(gm) * matrix_at(omega, i));
    const Mat4 ae = a * e;
    const Mat4 p = matrix_at(psi, i);
    double s = 0.0;
    for (int k = 0; k < 4; ++k)
      for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) s += e(x, k) * ae(y, k) * p(x, y);
    out(0, i) = 0.5 * s;
  }
  return out;
}

OneFormField lambda_contraction(const ThreeFormField& psi, const TwoFormField& omega, const MetricField& g) {
  OneFormField out(g.grid());
  for (std::size_t i = 0; i < g.points(); ++i) {
    const Mat4 gm = matrix_at(g, i);
    const Mat4 e = orthonormal_frame(gm, i);
    const Mat4 a = -(inverse(gm) * matrix_at(omega, i));
    const Mat4 ae = a * e;
    // bilinear weight w(x, y) = sum_k e^x_k (A e_k)^y
    Mat4 w;
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += e(x, k) * ae(y, k);
        w(x, y) = s;
      }
    for (int c = 0; c < 4; ++c) {
      double s = 0.0;
      for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) s += w(x, y) * three_form_value(psi, i, x, y, c);
      out(c, i) = 0.5 * s;
    }
  }
  return out;
}

ScalarField codifferential(const OneFormField& w, const MetricField& g) {
  const MetricData md = metric_data(g);
  const auto& grid = g.grid();
  const std::size_t n = grid->size();
  VectorField up(grid);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = mat_vec(matrix_at(md.inverse, i), vec_at(w, i));
    for (int a = 0; a < 4; ++a) up(a, i) = v[a] * md.sqrt_det(0, i);
  }
  ScalarField out(grid);
  std::vector<double> tmp(n);
  for (int a = 0; a < 4; ++a) {
    if (grid->trivial_axis(a)) continue;
    deriv(grid, up.comp(a), tmp, a);
    for (std::size_t i = 0; i < n; ++i) out(0, i) += tmp[i];
  }
  for (std::size_t i = 0; i < n; ++i) out(0, i) = -out(0, i) / md.sqrt_det(0, i);
  return out;
}

OneFormField codifferential(const TwoFormField& w, const MetricField& g) {
  const MetricData md = metric_data(g);
  const auto& grid = g.grid();
  const std::size_t n = grid->size();
  TwoFormField up(grid);  // sqrt(g) w^{ab}
  for (std::size_t i = 0; i < n; ++i) {
    const Mat4 gi = matrix_at(md.inverse, i);
    const Mat4 r = gi * matrix_at(w, i) * gi;
    set_at(up, i, md.sqrt_det(0, i) * r);
  }
  VectorField div(grid);
  std::vector<double> tmp(n);
  for (int p = 0; p < 6; ++p) {
    const int a = kPairA[p], b = kPairB[p];
    // div^b += d_a W^{ab}; div^a += d_b W^{ba} = -d_b W^{ab}
    if (!grid->trivial_axis(a)) {
      deriv(grid, up.comp(p), tmp, a);
      for (std::size_t i = 0; i < n; ++i) div(b, i) += tmp[i];
    }
    if (!grid->trivial_axis(b)) {
      deriv(grid, up.comp(p), tmp, b);
      for (std::size_t i = 0; i < n; ++i) div(a, i) -= tmp[i];
    }
  }
  OneFormField out(grid);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = mat_vec(matrix_at(g, i), vec_at(div, i));
    for (int c = 0; c < 4; ++c) out(c, i) = -v[c] / md.sqrt_det(0, i);
  }
  return out;
}

TwoFormField codifferential(const ThreeFormField& w, const MetricField& g) {
  const MetricData md = metric_data(g);
  const auto& grid = g.grid();
  const std::size_t n = grid->size();
  ThreeFormField up(grid);
  for (std::size_t i = 0; i < n; ++i) {
    const Mat4 gi = matrix_at(md.inverse, i);
    for (int t = 0; t < 4; ++t) {
      const int a = kTripleA[t], b = kTripleB[t], c = kTripleC[t];
      double s = 0.0;
      for (int d = 0; d < 4; ++d)
        for (int e = 0; e < 4; ++e)
          for (int f = 0; f < 4; ++f) {
            const double v = three_form_value(w, i, d, e, f);
            if (v != 0.0) s += gi(a, d) * gi(b, e) * gi(c, f) * v;
          }
      up(t, i) = md.sqrt_det(0, i) * s;
    }
  }
  TwoFormField div(grid);  // div^{bc} = d_a U^{abc}
  std::vector<double> tmp(n);
  for (int t = 0; t < 4; ++t) {
    const int idx[3] = {kTripleA[t], kTripleB[t], kTripleC[t]};
    for (int j = 0; j < 3; ++j) {
      const int axis = idx[j];
      if (grid->trivial_axis(axis)) continue;
      int rest[2], r = 0;
      for (int k = 0; k < 3; ++k)
        if (k != j) rest[r++] = idx[k];
      // U^{axis, rest0, rest1} = (-1)^j U^{idx}
      deriv(grid, up.comp(t), tmp, axis);
      const double s = (j % 2 == 0) ? 1.0 : -1.0;
      const int p = pair_index(rest[0], rest[1]);
      for (std::size_t i = 0; i < n; ++i) div(p, i) += s * tmp[i];
    }
  }
  TwoFormField out(grid);
  for (std::size_t i = 0; i < n; ++i) {
    const Mat4 gm = matrix_at(g, i);
    const Mat4 r = gm * matrix_at(div, i) * gm;
    set_at(out, i, (-1.0 / md.sqrt_det(0, i)) * r);
  }
  return out;
}

ScalarField laplacian_analytic(const ScalarField& f, const MetricField& g) {
  const MetricData md = metric_data(g);
  const auto& grid = g.grid();
  const std::size_t n = grid->size();
  const OneFormField df = exterior_derivative(f);
  VectorField flux(grid);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = mat_vec(matrix_at(md.inverse, i), vec_at(df, i));
    for (int a = 0; a < 4; ++a) flux(a, i) = md.sqrt_det(0, i) * v[a];
  }
  ScalarField out(grid);
  std::vector<double> tmp(n);
  for (int a = 0; a < 4; ++a) {
    if (grid->trivial_axis(a)) continue;
    deriv(grid, flux.comp(a), tmp, a);
    for (std::size_t i = 0; i < n; ++i) out(0, i) += tmp[i];
  }
  for (std::size_t i = 0; i < n; ++i) out(0, i) /= md.sqrt_det(0, i);
  return out;
}

ScalarField laplacian_chern(const ScalarField& f, const MetricField& g, const OneFormField& theta_i) {
  ScalarField lap = laplacian_analytic(f, g);
  const MetricData md = metric_data(g);
  const ScalarField c = inner(exterior_derivative(f), theta_i, md.inverse);
  lap -= c;
  return lap;
}

ScalarField inner(const OneFormField& a, const OneFormField& b, const MetricField& gi) {
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.points(); ++i) {
    const auto v = mat_vec(matrix_at(gi, i), vec_at(b, i));
    out(0, i) = a(0, i) * v[0] + a(1, i) * v[1] + a(2, i) * v[2] + a(3, i) * v[3];
  }
  return out;
}

ScalarField inner(const TwoFormField& a, const TwoFormField& b, const MetricField& gi) {
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.points(); ++i) {
    const Mat4 g = matrix_at(gi, i);
    const Mat4 up = g * matrix_at(a, i) * g;
    const Mat4 bm = matrix_at(b, i);
    double s = 0.0;
    for (int k = 0; k < 16; ++k) s += up.v[k] * bm.v[k];
    out(0, i) = 0.5 * s;
  }
  return out;
}

ScalarField inner(const ThreeFormField& a, const ThreeFormField& b, const MetricField& gi) {
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.points(); ++i) {
    const Mat4 g = matrix_at(gi, i);
    double s = 0.0;
    for (int t = 0; t < 4; ++t) {
      const int x = kTripleA[t], y = kTripleB[t], z = kTripleC[t];
      // raise a on the sorted slot, contract with the full antisymmetric b
      double up = 0.0;
      for (int d = 0; d < 4; ++d)
        for (int e = 0; e < 4; ++e)
          for (int f = 0; f < 4; ++f) {
            const double v = three_form_value(a, i, d, e, f);
            if (v != 0.0) up += g(x, d) * g(y, e) * g(z, f) * v;
          }
      s += up * b(t, i);
    }
    // sorted triples cover 1/6 of the full contraction
    out(0, i) = s;
  }
  return out;
}

OneFormField interior(const VectorField& x, const TwoFormField& w) {
  OneFormField out(x.grid());
  for (std::size_t i = 0; i < x.points(); ++i) {
    set_vec(out, i, apply_left(vec_at(x, i), matrix_at(w, i)));
  }
  return out;
}

TwoFormField interior(const VectorField& x, const ThreeFormField& w) {
  TwoFormField out(x.grid());
  for (std::size_t i = 0; i < x.points(); ++i) {
    for (int p = 0; p < 6; ++p) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a) s += x(a, i) * three_form_value(w, i, a, kPairA[p], kPairB[p]);
      out(p, i) = s;
    }
  }
  return out;
}

ScalarField wedge_top(const TwoFormField& a, const TwoFormField& b) {
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.points(); ++i) out(0, i) = wedge_top(matrix_at(a, i), matrix_at(b, i));
  return out;
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.points(); ++i) out(0, i) = a(0, i) * b(0, i);
  return out;
}

}  // namespace gkt4

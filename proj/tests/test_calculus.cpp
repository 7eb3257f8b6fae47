#include "helpers.hpp"

#include <numbers>

using namespace gkt4;
using testing::max_diff;
using testing::random_field;
using testing::random_form;

namespace {

ScalarField sample(const GridPtr& g, double (*fn)(double, double, double, double)) {
  ScalarField f(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    f(0, i) = fn(g->coord(i, 0), g->coord(i, 1), g->coord(i, 2), g->coord(i, 3));
  }
  return f;
}

// SPD metric field Id + small smooth perturbation.
MetricField wavy_metric(const GridPtr& g, std::uint64_t seed) {
  MetricField m(g);
  for (int c = 0; c < 10; ++c) {
    const ScalarField f = random_field(g, seed + c, 0.08, 1);
    for (std::size_t i = 0; i < g->size(); ++i) m(c, i) = f(0, i) + (kSymA[c] == kSymB[c] ? 1.0 : 0.0);
  }
  return m;
}

double integral(const ScalarField& density, const ScalarField& sqrt_det) {
  return integrate_top_form(pointwise_product(density, sqrt_det));
}

}  // namespace

TEST_CASE("spectral derivative is exact below Nyquist") {
  for (int n : {15, 16}) {
    const GridPtr g = make_grid({n, 1, 1, 1});
    const int k = (n - 1) / 2;
    ScalarField f(g), expected(g);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double x = g->coord(i, 0);
      f(0, i) = std::sin(k * x);
      expected(0, i) = k * std::cos(k * x);
    }
    CHECK(max_diff(partial(f, 0), expected) < 1e-12);
  }
  // Nyquist mode of an odd derivative is dropped
  const GridPtr g = make_grid({16, 1, 1, 1});
  ScalarField nyq(g);
  for (std::size_t i = 0; i < g->size(); ++i) nyq(0, i) = std::cos(8.0 * g->coord(i, 0));
  CHECK(partial(nyq, 0).max_abs() < 1e-12);
}

TEST_CASE("trivial axes have zero derivative") {
  const GridPtr g = make_grid({8, 1, 1, 1});
  const ScalarField f = random_field(g, 3);
  CHECK(partial(f, 1).max_abs() == 0.0);
  CHECK(partial(f, 3).max_abs() == 0.0);
}

TEST_CASE("fourth-order fallback converges at fourth order") {
  double err[2];
  int k = 0;
  for (int n : {16, 32}) {
    const GridPtr g = make_grid({n, 1, 1, 1}, DiffRule::Central4);
    ScalarField f(g), expected(g);
    for (std::size_t i = 0; i < g->size(); ++i) {
      f(0, i) = std::sin(g->coord(i, 0));
      expected(0, i) = std::cos(g->coord(i, 0));
    }
    err[k++] = max_diff(partial(f, 0), expected);
  }
  CHECK(err[0] / err[1] == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("compensated summation") {
  const std::vector<double> v = {1e16, 1.0, -1e16};
  CHECK(compensated_sum(v) == 1.0);
  const GridPtr g = make_grid({4, 4, 1, 1});
  CHECK(integrate_top_form(constant_scalar(g, 1.0)) == doctest::Approx(std::pow(2.0 * std::numbers::pi, 4)));
}

TEST_CASE("d squared vanishes") {
  const GridPtr g = make_grid({8, 6, 5, 4});
  const ScalarField f = random_field(g, 9, 1.0, 2);
  CHECK(exterior_derivative(exterior_derivative(f)).max_abs() < 1e-12);
  const auto a = random_form<OneFormField>(g, 4);
  CHECK(exterior_derivative(exterior_derivative(a)).max_abs() < 1e-12);
  const auto w = random_form<TwoFormField>(g, 5);
  CHECK(exterior_derivative(exterior_derivative(w)).max_abs() < 1e-12);
}

TEST_CASE("3-form derivative orientation") {
  const GridPtr g = make_grid({8, 1, 1, 8});
  ThreeFormField eta(g);
  // eta = sin x0 dx123 + sin x3 dx012
  for (std::size_t i = 0; i < g->size(); ++i) {
    eta(3, i) = std::sin(g->coord(i, 0));
    eta(0, i) = std::sin(g->coord(i, 3));
  }
  const ScalarField top = exterior_derivative(eta);
  double err = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    err = std::max(err, std::abs(top(0, i) - (std::cos(g->coord(i, 0)) - std::cos(g->coord(i, 3)))));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("flat Laplacian eigenfunction") {
  const GridPtr g = testing::grid32();
  const ScalarField f = sample(g, [](double x, double y, double, double) { return std::cos(x) * std::cos(y); });
  const MetricField id = constant_metric(g, Mat4::identity());
  ScalarField expected = f;
  expected *= -2.0;
  CHECK(max_diff(laplacian_analytic(f, id), expected) < 1e-12);
}

TEST_CASE("codifferential is the adjoint of d for a curved metric") {
  const GridPtr g = make_grid({8, 6, 5, 4});
  const MetricField gm = wavy_metric(g, 40);
  const MetricData md = metric_data(gm);
  {
    const ScalarField f = random_field(g, 1, 1.0, 2);
    const auto b = random_form<OneFormField>(g, 2);
    const double lhs = integral(inner(exterior_derivative(f), b, md.inverse), md.sqrt_det);
    const double rhs = integral(pointwise_product(f, codifferential(b, gm)), md.sqrt_det);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
  {
    const auto a = random_form<OneFormField>(g, 3);
    const auto b = random_form<TwoFormField>(g, 4);
    const double lhs = integral(inner(exterior_derivative(a), b, md.inverse), md.sqrt_det);
    const double rhs = integral(inner(a, codifferential(b, gm), md.inverse), md.sqrt_det);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
  {
    const auto a = random_form<TwoFormField>(g, 5);
    const auto b = random_form<ThreeFormField>(g, 6);
    const double lhs = integral(inner(exterior_derivative(a), b, md.inverse), md.sqrt_det);
    const double rhs = integral(inner(a, codifferential(b, gm), md.inverse), md.sqrt_det);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("Laplacian equals -delta d") {
  const GridPtr g = make_grid({8, 6, 5, 1});
  const MetricField gm = wavy_metric(g, 70);
  const ScalarField f = random_field(g, 71, 1.0, 2);
  ScalarField rhs = codifferential(exterior_derivative(f), gm);
  rhs *= -1.0;
  CHECK(max_diff(laplacian_analytic(f, gm), rhs) < 1e-9);
}

TEST_CASE("inner product normalization") {
  const GridPtr g = make_grid({2, 1, 1, 1});
  const MetricField id = constant_metric(g, Mat4::identity());
  TwoFormField w(g);
  std::fill(w.comp(0).begin(), w.comp(0).end(), 1.0);
  CHECK(inner(w, w, id)(0, 0) == doctest::Approx(1.0));
  ThreeFormField t(g);
  std::fill(t.comp(2).begin(), t.comp(2).end(), 1.0);
  CHECK(inner(t, t, id)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("trace of a Kaehler form and flat Lee form") {
  const GKState s = flat_hyperkahler(make_grid({4, 4, 1, 1}));
  const TwoFormField w = omega_I(s);
  const ScalarField tr = lambda_contraction(w, w, s.g());
  CHECK(tr(0, 0) == doctest::Approx(2.0));
  CHECK(lee_form(s, Side::I).max_abs() < 1e-14);
  CHECK(lee_form(s, Side::J).max_abs() < 1e-14);
}

TEST_CASE("structure_of inverts the Kaehler form") {
  const GKState& s = testing::joyce_state();
  const EndoField a = structure_of(omega_J(s), s.g());
  CHECK(max_diff(a, s.J()) < 1e-13);
}

TEST_CASE("grid mismatch is reported") {
  const ScalarField a(make_grid({4, 4, 1, 1}));
  const ScalarField b(make_grid({4, 2, 1, 1}));
  try {
    require_same_grid(a, b);
    FAIL("expected DimsMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimsMismatch);
  }
}

TEST_CASE("metric data rejects indefinite metrics") {
  const GridPtr g = make_grid({2, 1, 1, 1});
  Mat4 m = Mat4::identity();
  m(2, 2) = -1.0;
  try {
    metric_data(constant_metric(g, m));
    FAIL("expected NonPositiveMetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveMetric);
  }
}

#include "helpers.hpp"

using namespace gkt4;
using testing::max_diff;
using testing::random_field;

namespace {

double mean_zero_integral(const ScalarField& f) { return std::abs(integrate_top_form(f)); }

ScalarField scaled(ScalarField f, double c) {
  f *= c;
  return f;
}

// Flat Omega^{-1} pairs x0 with x3 and x1 with x2, so brackets need all four axes.
// N = 8 is too coarse: the truncated pullback breaks J^2 = -Id at the 1e-8 level.
const GKState& deformed_4d() {
  static const GKState s = [] {
    const GridPtr g = make_grid({10, 10, 10, 10});
    return joyce_deform(flat_hyperkahler(g), random_field(g, 31, 0.1, 1), 0.2, 0.02);
  }();
  return s;
}

}  // namespace

TEST_CASE("flat background functionals vanish") {
  const GKState flat = flat_hyperkahler(testing::grid32());
  const ScalarField f = random_field(flat.grid(), 1), h = random_field(flat.grid(), 2);
  CHECK(lambda_invariant(flat) == 0.0);
  CHECK(std::abs(aubin_yau_sigma(flat, f, h)) < 1e-10);
  const MomentMap mu = moment_map(flat);
  CHECK(mu.density.max_abs() < 1e-14);
  CHECK(mu.l2_norm < 1e-12);
  CHECK(energy_rhs(flat) == 0.0);
  CHECK(std::abs(git_symplectic_form(flat, f, f, h, h)) < 1e-10);
  const FunctionalReport r = functional_report(flat);
  CHECK(r.F_value == 0.0);
  CHECK(std::abs(r.dF_dt) < 1e-12);
  CHECK(std::abs(r.gscal_mean) < 1e-14);
}

TEST_CASE("Aubin-Yau differential") {
  const GKState& s = testing::joyce_state();
  const ScalarField f = random_field(s.grid(), 5);
  CHECK(aubin_yau_sigma(s, f, f) == 0.0);
  // sigma(f, -f) = 1/2 int f mu
  const MomentMap mu = moment_map(s);
  const double expected = 0.5 * integrate_top_form(pointwise_product(f, mu.density));
  CHECK(aubin_yau_sigma(s, f, scaled(f, -1.0)) == doctest::Approx(expected).epsilon(1e-12));
  // a deformed state is not Calabi-Yau, so sigma detects it
  CHECK(std::abs(aubin_yau_sigma(s, ScalarField(s.grid()), s.phi())) > 1e-4);
}

TEST_CASE("moment map has zero integral") {
  const GKState& s = testing::joyce_state();
  const MomentMap mu = moment_map(s);
  CHECK(mu.l2_norm > 1e-3);
  CHECK(mean_zero_integral(mu.density) < 1e-10);
  const GKState t = joyce_deform(s, random_field(s.grid(), 8), 0.3, 0.01);
  CHECK(mean_zero_integral(moment_map(t).density) < 1e-10);
  CHECK(std::abs(lambda_invariant(t)) < 1e-8);
}

TEST_CASE("Poisson bracket") {
  const GKState& s = deformed_4d();
  const ScalarField f = random_field(s.grid(), 11, 1.0, 1), g = random_field(s.grid(), 12, 1.0, 1),
                    h = random_field(s.grid(), 13, 1.0, 1);
  ScalarField sum = poisson_bracket(s.omega(), f, g);
  sum += poisson_bracket(s.omega(), g, f);
  CHECK(sum.max_abs() < 1e-14);
  CHECK(poisson_bracket(s.omega(), f, g).max_abs() > 0.1);
  ScalarField jac = poisson_bracket(s.omega(), f, poisson_bracket(s.omega(), g, h));
  jac += poisson_bracket(s.omega(), g, poisson_bracket(s.omega(), h, f));
  jac += poisson_bracket(s.omega(), h, poisson_bracket(s.omega(), f, g));
  CHECK(jac.max_abs() < 1e-7);
  // functions of x0, x1 alone commute
  const GKState& ref = testing::joyce_state();
  CHECK(poisson_bracket(ref.omega(), random_field(ref.grid(), 1), random_field(ref.grid(), 2)).max_abs() == 0.0);
}

TEST_CASE("GIT symplectic form") {
  const GKState& s = deformed_4d();
  const GridPtr g = s.grid();
  double scale = 0.0, asym = 0.0, lowest = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const ScalarField f1 = random_field(g, 1000 + 4 * k, 0.1, 1), g1 = random_field(g, 1001 + 4 * k, 0.1, 1);
    const ScalarField f2 = random_field(g, 1002 + 4 * k, 0.1, 1), g2 = random_field(g, 1003 + 4 * k, 0.1, 1);
    const double a = git_symplectic_form(s, f1, g1, f2, g2);
    const double b = git_symplectic_form(s, f2, g2, f1, g1);
    scale = std::max(scale, std::abs(a));
    asym = std::max(asym, std::abs(a + b));
    // taming against (f, g) -> (-g, f)
    lowest = std::min(lowest, git_symplectic_form(s, f1, g1, scaled(g1, -1.0), f1));
  }
  CHECK(scale > 1e-6);
  CHECK(asym < 1e-10);
  CHECK(lowest >= 0.0);
}

TEST_CASE("accumulated functional") {
  FlowTrace tr;
  CHECK_THROWS_AS(accumulate_F(tr), Error);
  tr.rows.resize(3);
  for (int k = 0; k < 3; ++k) {
    tr.rows[k].t = 0.5 * k;
    tr.rows[k].dF_dt = k;
  }
  const auto f = accumulate_F(tr);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == doctest::Approx(0.25));
  CHECK(f[2] == doctest::Approx(1.0));
}

TEST_CASE("functional is convex along a fixed-generator path") {
  const GridPtr grid = testing::grid32();
  const GKState flat = flat_hyperkahler(grid);
  const ScalarField gen = random_field(grid, 21);
  const ScalarField twice = scaled(gen, 2.0);
  double prev = -1e300;
  for (int k = 0; k <= 8; ++k) {
    const double t = 0.05 * k;
    const GKState st = k == 0 ? flat : joyce_deform(flat, twice, t, 0.01);
    const double df = aubin_yau_sigma(st, ScalarField(grid), gen);
    CAPTURE(t);
    CHECK(df >= prev - 1e-12);
    prev = df;
  }
  CHECK(prev > 1e-6);
}

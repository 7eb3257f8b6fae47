#include "helpers.hpp"

#include <numbers>

using namespace gkt4;
using testing::max_diff;

namespace {

Mat4 random_antisym(Rng& rng) {
  Mat4 m;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      m(a, b) = rng.uniform(-1.0, 1.0);
      m(b, a) = -m(a, b);
    }
  return m;
}

Mat4 random_matrix(Rng& rng) {
  Mat4 m;
  for (double& v : m.v) v = rng.uniform(-1.0, 1.0);
  return m;
}

// J = sin(theta) I0 + cos(theta) J0 has angle function p = sin(theta).
Mat4 tilted_j(double theta) {
  const QuaternionTriple q = quaternionic_triple();
  return std::sin(theta) * q.I + std::cos(theta) * q.J;
}

}  // namespace

TEST_CASE("quaternion relations") {
  const QuaternionTriple q = quaternionic_triple();
  const Mat4 id = Mat4::identity();
  CHECK(max_diff(q.I * q.I, -id) == 0.0);
  CHECK(max_diff(q.J * q.J, -id) == 0.0);
  CHECK(max_diff(q.K * q.K, -id) == 0.0);
  CHECK(max_diff(q.I * q.J, q.K) == 0.0);
  CHECK(max_diff(q.J * q.I, -q.K) == 0.0);
  // orthogonal and antisymmetric
  CHECK(max_diff(transpose(q.I), -q.I) == 0.0);
  CHECK(q.I(1, 0) == 1.0);
  CHECK(q.J(2, 0) == 1.0);
}

TEST_CASE("determinant and inverse") {
  Mat4 d = Mat4::identity();
  d(0, 0) = 2.0;
  d(1, 1) = 3.0;
  d(2, 2) = 5.0;
  d(3, 3) = 7.0;
  CHECK(det(d) == doctest::Approx(210.0));
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const Mat4 m = random_matrix(rng) + 3.0 * Mat4::identity();
    CHECK(max_diff(m * inverse(m), Mat4::identity()) < 1e-13);
    // multiplicativity
    const Mat4 n = random_matrix(rng);
    CHECK(det(m * n) == doctest::Approx(det(m) * det(n)).epsilon(1e-12));
  }
}

TEST_CASE("pfaffian squares to the determinant and matches the wedge square") {
  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const Mat4 f = random_antisym(rng);
    const double pf = pfaffian(f);
    CHECK(pf * pf == doctest::Approx(det(f)).epsilon(1e-12));
    CHECK(wedge_top(f, f) == doctest::Approx(2.0 * pf).epsilon(1e-14));
    CHECK(pfaffian(PointTwoForm::from_matrix(f)) == doctest::Approx(pf));
  }
  // dx01 + dx23 has Pfaffian 1
  Mat4 s;
  s(0, 1) = 1.0;
  s(1, 0) = -1.0;
  s(2, 3) = 1.0;
  s(3, 2) = -1.0;
  CHECK(pfaffian(s) == 1.0);
}

TEST_CASE("index tables round trip") {
  for (int c = 0; c < 6; ++c) CHECK(pair_index(kPairA[c], kPairB[c]) == c);
  for (int c = 0; c < 10; ++c) {
    CHECK(sym_index(kSymA[c], kSymB[c]) == c);
    CHECK(sym_index(kSymB[c], kSymA[c]) == c);
  }
  for (int c = 0; c < 4; ++c) CHECK(triple_index(kTripleA[c], kTripleB[c], kTripleC[c]) == c);
  Rng rng(5);
  const Mat4 f = random_antisym(rng);
  CHECK(max_diff(PointTwoForm::from_matrix(f).matrix(), f) == 0.0);
}

TEST_CASE("covector action sign") {
  const QuaternionTriple q = quaternionic_triple();
  // (I xi)(X) = -xi(I X); I e0 = e1, so (I dx1)(e0) = -1
  const auto v = act_on_covector(q.I, {0.0, 1.0, 0.0, 0.0});
  CHECK(v[0] == -1.0);
  CHECK(v[1] == 0.0);
}

TEST_CASE("flat background data") {
  const FlatForms f = flat_forms();
  const QuaternionTriple q = quaternionic_triple();
  const Mat4 i = reconstruct_J(PointTwoForm::from_matrix(f.psi1), PointTwoForm::from_matrix(f.omega));
  const Mat4 j = reconstruct_J(PointTwoForm::from_matrix(f.psi2), PointTwoForm::from_matrix(f.omega));
  CHECK(max_diff(i, q.I) < 1e-15);
  CHECK(max_diff(j, q.J) < 1e-15);
  const Mat4 fp = 2.0 * (f.psi1 - f.psi2);
  const TamingSplit ts = taming_split(PointTwoForm::from_matrix(fp), i);
  CHECK(max_diff(ts.g.matrix(), Mat4::identity()) < 1e-15);
  // b = -omega_K
  CHECK(max_diff(ts.b.matrix(), -kaehler_form(Mat4::identity(), q.K)) < 1e-15);
  CHECK(phi_pointwise(i, j, PointTwoForm::from_matrix(f.omega)) == doctest::Approx(0.0));
  CHECK(angle_function(i, j) == 0.0);
}

TEST_CASE("three routes to Phi at a known angle") {
  const QuaternionTriple q = quaternionic_triple();
  const double theta = std::numbers::pi / 6.0;  // p = 1/2
  const Mat4 j = tilted_j(theta);
  CHECK(angle_function(q.I, j) == doctest::Approx(0.5));
  const double expected = -std::log(3.0);
  CHECK(phi_angle_route(q.I, j) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(phi_det_route(q.I, j) == doctest::Approx(expected).epsilon(1e-14));
  const Mat4 c = q.I * j - j * q.I;
  const Mat4 omega = transpose(inverse(c));  // g = Id
  CHECK(phi_pointwise(q.I, j, PointTwoForm::from_matrix(omega)) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("taming split round trip") {
  Rng rng(8);
  const QuaternionTriple q = quaternionic_triple();
  for (int k = 0; k < 20; ++k) {
    const Mat4 f = random_antisym(rng);
    const TamingSplit ts = taming_split(PointTwoForm::from_matrix(f), q.I);
    const PointTwoForm back = compose_taming(ts.g, ts.b, q.I);
    CHECK(max_diff(back.matrix(), f) < 1e-14);
  }
}

TEST_CASE("error conditions") {
  const QuaternionTriple q = quaternionic_triple();
  const PointTwoForm zero;
  const PointTwoForm psi = PointTwoForm::from_matrix(flat_forms().psi1);
  CHECK_THROWS_AS(reconstruct_J(psi, zero), Error);
  try {
    reconstruct_J(psi, zero);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularForm);
  }
  // I = J is a degenerate pair
  try {
    phi_pointwise(q.I, q.I, PointTwoForm::from_matrix(flat_forms().omega));
    FAIL("expected DegeneratePair");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegeneratePair);
  }
  CHECK(std::string(error_name(ErrorCode::PositivityLoss)) == "PositivityLoss");
}

TEST_CASE("symmetric eigenvalues and cholesky") {
  Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    // Q diag(1,2,3,4) Q^T
    Mat4 r = random_matrix(rng);
    Mat4 qm = r;
    for (int c = 0; c < 4; ++c) {
      for (int p = 0; p < c; ++p) {
        double d = 0.0;
        for (int i = 0; i < 4; ++i) d += qm(i, c) * qm(i, p);
        for (int i = 0; i < 4; ++i) qm(i, c) -= d * qm(i, p);
      }
      double n = 0.0;
      for (int i = 0; i < 4; ++i) n += qm(i, c) * qm(i, c);
      for (int i = 0; i < 4; ++i) qm(i, c) /= std::sqrt(n);
    }
    Mat4 d;
    for (int a = 0; a < 4; ++a) d(a, a) = a + 1.0;
    const Mat4 s = qm * d * transpose(qm);
    const auto e = sym_eigenvalues(s);
    for (int a = 0; a < 4; ++a) CHECK(e[a] == doctest::Approx(a + 1.0).epsilon(1e-12));
    Mat4 l;
    REQUIRE(cholesky(s, l));
    CHECK(max_diff(l * transpose(l), s) < 1e-13);
    CHECK_FALSE(cholesky(s - 2.5 * Mat4::identity(), l));
  }
}

TEST_CASE("kaehler form and actions") {
  const QuaternionTriple q = quaternionic_triple();
  const Mat4 wk = kaehler_form(Mat4::identity(), q.K);
  CHECK(max_diff(wk, transpose(q.K)) == 0.0);
  CHECK(max_diff(act_on_form(q.I, wk), transpose(q.I) * wk) == 0.0);
}

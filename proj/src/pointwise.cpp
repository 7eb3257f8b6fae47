#include "gkt4/pointwise.hpp"

#include <algorithm>
#include <cmath>

#include "gkt4/error.hpp"

namespace gkt4 {

Mat4 Mat4::identity() {
  Mat4 m;
  for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
  return m;
}

Mat4 operator+(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 16; ++i) r.v[i] = a.v[i] + b.v[i];
  return r;
}

Mat4 operator-(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 16; ++i) r.v[i] = a.v[i] - b.v[i];
  return r;
}

Mat4 operator-(const Mat4& a) {
  Mat4 r;
  for (int i = 0; i < 16; ++i) r.v[i] = -a.v[i];
  return r;
}

Mat4 operator*(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  }
  return r;
}

Mat4 operator*(double s, const Mat4& a) {
  Mat4 r;
  for (int i = 0; i < 16; ++i) r.v[i] = s * a.v[i];
  return r;
}

Mat4 transpose(const Mat4& a) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = a(j, i);
  return r;
}

Mat4 sym_part(const Mat4& a) { return 0.5 * (a + transpose(a)); }
Mat4 antisym_part(const Mat4& a) { return 0.5 * (a - transpose(a)); }

double trace(const Mat4& a) { return a(0, 0) + a(1, 1) + a(2, 2) + a(3, 3); }

double max_abs(const Mat4& a) {
  double m = 0.0;
  for (double x : a.v) m = std::max(m, std::abs(x));
  return m;
}

namespace {

// 2x2 minors of rows (0,1) and rows (2,3), indexed by column pair.
struct Minors {
  double lo[6];
  double hi[6];
};

Minors minors(const Mat4& a) {
  Minors m{};
  for (int p = 0; p < 6; ++p) {
    const int i = kPairA[p], j = kPairB[p];
    m.lo[p] = a(0, i) * a(1, j) - a(0, j) * a(1, i);
    m.hi[p] = a(2, i) * a(3, j) - a(2, j) * a(3, i);
  }
  return m;
}

}  // namespace

double det(const Mat4& a) {
  const Minors m = minors(a);
  // Laplace expansion along the first two rows.
  return m.lo[0] * m.hi[5] - m.lo[1] * m.hi[4] + m.lo[2] * m.hi[3] + m.lo[3] * m.hi[2] -
         m.lo[4] * m.hi[1] + m.lo[5] * m.hi[0];
}

Mat4 inverse(const Mat4& a) {
  const double* m = a.v.data();
  double inv[16];
  inv[0] = m[5] * m[10] * m[15] - m[5] * m[11] * m[14] - m[9] * m[6] * m[15] +
           m[9] * m[7] * m[14] + m[13] * m[6] * m[11] - m[13] * m[7] * m[10];
  inv[4] = -m[4] * m[10] * m[15] + m[4] * m[11] * m[14] + m[8] * m[6] * m[15] -
           m[8] * m[7] * m[14] - m[12] * m[6] * m[11] + m[12] * m[7] * m[10];
  inv[8] = m[4] * m[9] * m[15] - m[4] * m[11] * m[13] - m[8] * m[5] * m[15] +
           m[8] * m[7] * m[13] + m[12] * m[5] * m[11] - m[12] * m[7] * m[9];
  inv[12] = -m[4] * m[9] * m[14] + m[4] * m[10] * m[13] + m[8] * m[5] * m[14] -
            m[8] * m[6] * m[13] - m[12] * m[5] * m[10] + m[12] * m[6] * m[9];
  inv[1] = -m[1] * m[10] * m[15] + m[1] * m[11] * m[14] + m[9] * m[2] * m[15] -
           m[9] * m[3] * m[14] - m[13] * m[2] * m[11] + m[13] * m[3] * m[10];
  inv[5] = m[0] * m[10] * m[15] - m[0] * m[11] * m[14] - m[8] * m[2] * m[15] +
           m[8] * m[3] * m[14] + m[12] * m[2] * m[11] - m[12] * m[3] * m[10];
  inv[9] = -m[0] * m[9] * m[15] + m[0] * m[11] * m[13] + m[8] * m[1] * m[15] -
           m[8] * m[3] * m[13] - m[12] * m[1] * m[11] + m[12] * m[3] * m[9];
  inv[13] = m[0] * m[9] * m[14] - m[0] * m[10] * m[13] - m[8] * m[1] * m[14] +
            m[8] * m[2] * m[13] + m[12] * m[1] * m[10] - m[12] * m[2] * m[9];
  inv[2] = m[1] * m[6] * m[15] - m[1] * m[7] * m[14] - m[5] * m[2] * m[15] +
           m[5] * m[3] * m[14] + m[13] * m[2] * m[7] - m[13] * m[3] * m[6];
  inv[6] = -m[0] * m[6] * m[15] + m[0] * m[7] * m[14] + m[4] * m[2] * m[15] -
           m[4] * m[3] * m[14] - m[12] * m[2] * m[7] + m[12] * m[3] * m[6];
  inv[10] = m[0] * m[5] * m[15] - m[0] * m[7] * m[13] - m[4] * m[1] * m[15] +
            m[4] * m[3] * m[13] + m[12] * m[1] * m[7] - m[12] * m[3] * m[5];
  inv[14] = -m[0] * m[5] * m[14] + m[0] * m[6] * m[13] + m[4] * m[1] * m[14] -
            m[4] * m[2] * m[13] - m[12] * m[1] * m[6] + m[12] * m[2] * m[5];
  inv[3] = -m[1] * m[6] * m[11] + m[1] * m[7] * m[10] + m[5] * m[2] * m[11] -
           m[5] * m[3] * m[10] - m[9] * m[2] * m[7] + m[9] * m[3] * m[6];
  inv[7] = m[0] * m[6] * m[11] - m[0] * m[7] * m[10] - m[4] * m[2] * m[11] +
           m[4] * m[3] * m[10] + m[8] * m[2] * m[7] - m[8] * m[3] * m[6];
  inv[11] = -m[0] * m[5] * m[11] + m[0] * m[7] * m[9] + m[4] * m[1] * m[11] -
            m[4] * m[3] * m[9] - m[8] * m[1] * m[7] + m[8] * m[3] * m[5];
  inv[15] = m[0] * m[5] * m[10] - m[0] * m[6] * m[9] - m[4] * m[1] * m[10] +
            m[4] * m[2] * m[9] + m[8] * m[1] * m[6] - m[8] * m[2] * m[5];
  const double d = m[0] * inv[0] + m[1] * inv[4] + m[2] * inv[8] + m[3] * inv[12];
  Mat4 r;
  for (int i = 0; i < 16; ++i) r.v[i] = inv[i] / d;
  return r;
}

std::array<double, 4> mat_vec(const Mat4& a, const std::array<double, 4>& x) {
  std::array<double, 4> y{};
  for (int i = 0; i < 4; ++i) y[i] = a(i, 0) * x[0] + a(i, 1) * x[1] + a(i, 2) * x[2] + a(i, 3) * x[3];
  return y;
}

std::array<double, 4> apply_left(const std::array<double, 4>& xi, const Mat4& a) {
  std::array<double, 4> y{};
  for (int j = 0; j < 4; ++j) y[j] = xi[0] * a(0, j) + xi[1] * a(1, j) + xi[2] * a(2, j) + xi[3] * a(3, j);
  return y;
}

Mat4 PointTwoForm::matrix() const {
  Mat4 m;
  for (int p = 0; p < 6; ++p) {
    m(kPairA[p], kPairB[p]) = c[p];
    m(kPairB[p], kPairA[p]) = -c[p];
  }
  return m;
}

PointTwoForm PointTwoForm::from_matrix(const Mat4& m) {
  PointTwoForm f;
  for (int p = 0; p < 6; ++p) f.c[p] = 0.5 * (m(kPairA[p], kPairB[p]) - m(kPairB[p], kPairA[p]));
  return f;
}

Mat4 PointMetric::matrix() const {
  Mat4 m;
  for (int s = 0; s < 10; ++s) {
    m(kSymA[s], kSymB[s]) = c[s];
    m(kSymB[s], kSymA[s]) = c[s];
  }
  return m;
}

PointMetric PointMetric::from_matrix(const Mat4& m) {
  PointMetric g;
  for (int s = 0; s < 10; ++s) g.c[s] = 0.5 * (m(kSymA[s], kSymB[s]) + m(kSymB[s], kSymA[s]));
  return g;
}

int pair_index(int a, int b) {
  static constexpr int t[4][4] = {{-1, 0, 1, 2}, {-1, -1, 3, 4}, {-1, -1, -1, 5}, {-1, -1, -1, -1}};
  return t[a][b];
}

int sym_index(int a, int b) {
  static constexpr int t[4][4] = {{0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
  return t[a][b];
}

int triple_index(int a, int b, int c) {
  // the omitted index identifies the triple
  const int missing = 6 - a - b - c;
  return 3 - missing;
}

QuaternionTriple quaternionic_triple() {
  QuaternionTriple q;
  // column b holds the image of e_b
  q.I(1, 0) = 1.0;
  q.I(0, 1) = -1.0;
  q.I(3, 2) = 1.0;
  q.I(2, 3) = -1.0;
  q.J(2, 0) = 1.0;
  q.J(3, 1) = -1.0;
  q.J(0, 2) = -1.0;
  q.J(1, 3) = 1.0;
  q.K = q.I * q.J;
  return q;
}

Mat4 kaehler_form(const Mat4& g, const PointEndo& a) { return transpose(a) * g; }

Mat4 act_on_form(const PointEndo& a, const Mat4& alpha) { return transpose(a) * alpha; }

std::array<double, 4> act_on_covector(const PointEndo& a, const std::array<double, 4>& xi) {
  auto y = apply_left(xi, a);
  for (double& v : y) v = -v;
  return y;
}

double pfaffian(const PointTwoForm& f) {
  return f.c[0] * f.c[5] - f.c[1] * f.c[4] + f.c[2] * f.c[3];
}

double pfaffian(const Mat4& f) {
  return f(0, 1) * f(2, 3) - f(0, 2) * f(1, 3) + f(0, 3) * f(1, 2);
}

double wedge_top(const Mat4& x, const Mat4& y) {
  return x(0, 1) * y(2, 3) - x(0, 2) * y(1, 3) + x(0, 3) * y(1, 2) + x(2, 3) * y(0, 1) -
         x(1, 3) * y(0, 2) + x(1, 2) * y(0, 3);
}

TamingSplit taming_split(const PointTwoForm& f, const PointEndo& i) {
  const Mat4 fi = f.matrix() * i;
  return {PointMetric::from_matrix(fi), PointTwoForm::from_matrix(fi)};
}

PointTwoForm compose_taming(const PointMetric& g, const PointTwoForm& b, const PointEndo& i) {
  // F I = g + b, and I^{-1} = -I for a complex structure
  const Mat4 f = (g.matrix() + b.matrix()) * inverse(i);
  return PointTwoForm::from_matrix(f);
}

PointEndo reconstruct_J(const PointTwoForm& psi2, const PointTwoForm& omega) {
  const double scale = std::max(1.0, max_abs(psi2.matrix()));
  if (std::abs(pfaffian(psi2)) <= kEpsInv * scale * scale) {
    throw Error(ErrorCode::SingularForm, "Psi2 is not invertible");
  }
  const Mat4 om = omega.matrix();
  const double oscale = std::max(1.0, max_abs(om));
  if (std::abs(pfaffian(omega)) <= kEpsInv * oscale * oscale) {
    throw Error(ErrorCode::SingularForm, "Omega is not invertible");
  }
  return -(inverse(om) * psi2.matrix());
}

double angle_function(const PointEndo& i, const PointEndo& j) { return -0.25 * trace(i * j); }

namespace {

void check_pair(const PointEndo& i, const PointEndo& j, double& dp, double& dm) {
  const double scale = std::max(max_abs(i), max_abs(j));
  const double s4 = std::pow(std::max(1.0, scale), 4);
  dp = det(i + j);
  dm = det(i - j);
  if (dp <= kEpsDeg * s4 || dm <= kEpsDeg * s4) {
    throw Error(ErrorCode::DegeneratePair, "I + J or I - J is degenerate");
  }
}

}  // namespace

double phi_pointwise(const PointEndo& i, const PointEndo& j, const PointTwoForm& omega) {
  double dp = 0.0, dm = 0.0;
  check_pair(i, j, dp, dm);
  const Mat4 om = omega.matrix();
  const Mat4 psi1 = -(transpose(i) * om);
  const Mat4 psi2 = -(transpose(j) * om);
  const double pp = pfaffian(2.0 * (psi1 - psi2));
  const double pm = pfaffian(2.0 * (-psi1 - psi2));
  if (!(pp > 0.0) || !(pm > 0.0)) {
    throw Error(ErrorCode::DegeneratePair, "F+ or F- has nonpositive Pfaffian");
  }
  return std::log(pp / pm);
}

double phi_det_route(const PointEndo& i, const PointEndo& j) {
  double dp = 0.0, dm = 0.0;
  check_pair(i, j, dp, dm);
  return 0.5 * std::log(dm / dp);
}

double phi_angle_route(const PointEndo& i, const PointEndo& j) {
  const double p = angle_function(i, j);
  if (!(std::abs(p) < 1.0)) throw Error(ErrorCode::DegeneratePair, "angle function outside (-1, 1)");
  return std::log((1.0 - p) / (1.0 + p));
}

std::array<double, 4> sym_eigenvalues(const Mat4& s) {
  Mat4 a = sym_part(s);
  double frob = 0.0;
  for (double v : a.v) frob += v * v;
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += a(p, q) * a(p, q);
    // quadratic convergence: one more sweep past this point changes nothing
    if (off <= 1e-36 * frob) break;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int k = 0; k < 4; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  std::array<double, 4> e = {a(0, 0), a(1, 1), a(2, 2), a(3, 3)};
  std::sort(e.begin(), e.end());
  return e;
}

bool cholesky(const Mat4& s, Mat4& l) {
  l = Mat4{};
  for (int j = 0; j < 4; ++j) {
    double d = s(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return false;
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < 4; ++i) {
      double v = s(i, j);
      for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return true;
}

}  // namespace gkt4

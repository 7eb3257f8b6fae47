#pragma once

#include <array>
#include <cstddef>

namespace gkt4 {

// 4x4 real matrix, row-major. For an endomorphism m(a, b) = A^a_b;
// for a bilinear form m(a, b) = alpha(d_a, d_b).
struct Mat4 {
  std::array<double, 16> v{};

  double& operator()(int r, int c) { return v[r * 4 + c]; }
  double operator()(int r, int c) const { return v[r * 4 + c]; }

  static Mat4 identity();
  static Mat4 zero() { return Mat4{}; }
};

Mat4 operator+(const Mat4& a, const Mat4& b);
Mat4 operator-(const Mat4& a, const Mat4& b);
Mat4 operator-(const Mat4& a);
Mat4 operator*(const Mat4& a, const Mat4& b);
Mat4 operator*(double s, const Mat4& a);
Mat4 transpose(const Mat4& a);
Mat4 sym_part(const Mat4& a);
Mat4 antisym_part(const Mat4& a);
double trace(const Mat4& a);
double max_abs(const Mat4& a);
double det(const Mat4& a);
// Cofactor inverse. Caller checks det.
Mat4 inverse(const Mat4& a);
std::array<double, 4> mat_vec(const Mat4& a, const std::array<double, 4>& x);
// Row vector times matrix: (xi A)_b = xi_a A^a_b.
std::array<double, 4> apply_left(const std::array<double, 4>& xi, const Mat4& a);

// Independent entries of an antisymmetric matrix, a < b:
// (01) (02) (03) (12) (13) (23).
struct PointTwoForm {
  std::array<double, 6> c{};
  Mat4 matrix() const;
  static PointTwoForm from_matrix(const Mat4& m);
};

// Upper triangle of a symmetric matrix:
// (00) (01) (02) (03) (11) (12) (13) (22) (23) (33).
struct PointMetric {
  std::array<double, 10> c{};
  Mat4 matrix() const;
  static PointMetric from_matrix(const Mat4& m);
};

using PointEndo = Mat4;

inline constexpr int kPairA[6] = {0, 0, 0, 1, 1, 2};
inline constexpr int kPairB[6] = {1, 2, 3, 2, 3, 3};
inline constexpr int kSymA[10] = {0, 0, 0, 0, 1, 1, 1, 2, 2, 3};
inline constexpr int kSymB[10] = {0, 1, 2, 3, 1, 2, 3, 2, 3, 3};
inline constexpr int kTripleA[4] = {0, 0, 0, 1};
inline constexpr int kTripleB[4] = {1, 1, 2, 2};
inline constexpr int kTripleC[4] = {2, 3, 3, 3};

int pair_index(int a, int b);    // a < b
int sym_index(int a, int b);     // any order
int triple_index(int a, int b, int c);  // a < b < c

struct QuaternionTriple {
  PointEndo I, J, K;
};

// Left quaternion multiplication on the basis (1, i, j, k).
QuaternionTriple quaternionic_triple();

// Kaehler form of a complex structure: omega(X, Y) = g(AX, Y), matrix A^T g.
Mat4 kaehler_form(const Mat4& g, const PointEndo& a);

// Action of an endomorphism on a 2-form, (A alpha)(X, Y) = alpha(AX, Y), matrix A^T alpha.
Mat4 act_on_form(const PointEndo& a, const Mat4& alpha);

// Action on a 1-form, (A xi)(X) = -xi(AX).
std::array<double, 4> act_on_covector(const PointEndo& a, const std::array<double, 4>& xi);

double pfaffian(const PointTwoForm& f);
double pfaffian(const Mat4& f);

// Coefficient of dx0123 in alpha ^ beta.
double wedge_top(const Mat4& alpha, const Mat4& beta);

struct TamingSplit {
  PointMetric g;
  PointTwoForm b;
};

// g + b = (X, Y) -> F(X, IY).
TamingSplit taming_split(const PointTwoForm& f, const PointEndo& i);
// Inverse of taming_split: F with F(X, IY) = g + b.
PointTwoForm compose_taming(const PointMetric& g, const PointTwoForm& b, const PointEndo& i);

// J = -Omega^{-1} Psi2. Throws SingularForm when |Pf(Psi2)| is below tolerance.
PointEndo reconstruct_J(const PointTwoForm& psi2, const PointTwoForm& omega);

double angle_function(const PointEndo& i, const PointEndo& j);

// log(Pf F+ / Pf F-) with F+- = -2 g (I +- J)^{-1} and g from the taming split of F+.
// Throws DegeneratePair when det(I +- J) is below tolerance.
double phi_pointwise(const PointEndo& i, const PointEndo& j, const PointTwoForm& omega);
// (1/2) log(det(I - J) / det(I + J)).
double phi_det_route(const PointEndo& i, const PointEndo& j);
// log((1 - p) / (1 + p)).
double phi_angle_route(const PointEndo& i, const PointEndo& j);

// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
std::array<double, 4> sym_eigenvalues(const Mat4& s);
// Lower-triangular L with s = L L^T. Returns false if s is not positive-definite.
bool cholesky(const Mat4& s, Mat4& l);

inline constexpr double kEpsInv = 1e-10;
inline constexpr double kEpsDeg = 1e-10;
inline constexpr double kEpsStructure = 1e-8;

}  // namespace gkt4

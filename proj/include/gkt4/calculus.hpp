#pragma once

#include <span>

#include "gkt4/field.hpp"

namespace gkt4 {

// Compensated (Neumaier) sum in index order.
double compensated_sum(std::span<const double> v);
double grid_mean(const ScalarField& f);
double sup_norm(const ScalarField& f);

ScalarField partial(const ScalarField& f, int axis);

// Exterior derivative; the 3-form case returns the dx0123 coefficient.
OneFormField exterior_derivative(const ScalarField& f);
TwoFormField exterior_derivative(const OneFormField& a);
ThreeFormField exterior_derivative(const TwoFormField& w);
ScalarField exterior_derivative(const ThreeFormField& eta);

// (I eta)(X, Y, Z) = -eta(IX, IY, IZ).
ThreeFormField complex_action(const ThreeFormField& eta, const EndoField& i);
// d^c_I omega = I(d omega).
ThreeFormField dc_operator(const TwoFormField& w, const EndoField& i);

// (A xi)(X) = -xi(AX).
OneFormField act_on_covector(const EndoField& a, const OneFormField& xi);

struct MetricData {
  MetricField inverse;
  ScalarField sqrt_det;
};

// Throws NonPositiveMetric if g fails a Cholesky factorization anywhere.
MetricData metric_data(const MetricField& g);

VectorField sharp(const OneFormField& xi, const MetricField& g_inverse);
OneFormField flat(const VectorField& x, const MetricField& g);

// Endomorphism A with omega = A^T g, i.e. A = -g^{-1} omega.
EndoField structure_of(const TwoFormField& omega, const MetricField& g);

// Lambda(psi) = 1/2 sum_i psi(e_i, A e_i, ...), e_i a g-orthonormal frame
// from the Cholesky factor of g, A the endomorphism of omega.
ScalarField lambda_contraction(const TwoFormField& psi, const TwoFormField& omega, const MetricField& g);
OneFormField lambda_contraction(const ThreeFormField& psi, const TwoFormField& omega, const MetricField& g);

// L2 adjoint of d with respect to g dV_g.
ScalarField codifferential(const OneFormField& w, const MetricField& g);
OneFormField codifferential(const TwoFormField& w, const MetricField& g);
TwoFormField codifferential(const ThreeFormField& w, const MetricField& g);

// Delta f = (1/sqrt g) d_a (sqrt g g^{ab} d_b f).
ScalarField laplacian_analytic(const ScalarField& f, const MetricField& g);
// Delta^C f = Delta f - <df, theta_I>_g.
ScalarField laplacian_chern(const ScalarField& f, const MetricField& g, const OneFormField& theta_i);

// Pointwise inner products; 2-forms carry 1/2 and 3-forms 1/6.
ScalarField inner(const OneFormField& a, const OneFormField& b, const MetricField& g_inverse);
ScalarField inner(const TwoFormField& a, const TwoFormField& b, const MetricField& g_inverse);
ScalarField inner(const ThreeFormField& a, const ThreeFormField& b, const MetricField& g_inverse);

// (iota_X alpha)(Y, ...) = alpha(X, Y, ...).
OneFormField interior(const VectorField& x, const TwoFormField& w);
TwoFormField interior(const VectorField& x, const ThreeFormField& w);

// dx0123 coefficient of a ^ b.
ScalarField wedge_top(const TwoFormField& a, const TwoFormField& b);

// Grid mean times (2 pi)^4.
double integrate_top_form(const ScalarField& density);

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b);

}  // namespace gkt4

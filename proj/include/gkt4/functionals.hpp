#pragma once

#include <vector>

#include "gkt4/trace.hpp"

namespace gkt4 {

// log(int Pf F+ / int Pf F-). Throws DegeneratePair if either integral is <= 0.
double lambda_invariant(const GKState& s);

// int (f - h)(Pf F+ - e^lambda Pf F-) dx.
double aubin_yau_sigma(const GKState& s, const ScalarField& f, const ScalarField& h);

// Trapezoid accumulation of the dF_dt column over the rows; F(0) = 0.
std::vector<double> accumulate_F(const FlowTrace& trace);

struct MomentMap {
  ScalarField density;  // 4 (Pf F+ - e^lambda Pf F-)
  double l2_norm = 0.0;
};

MomentMap moment_map(const GKState& s);

// int |dPhi|^2_g (Pf F+ + e^lambda Pf F-) dx.
double energy_rhs(const GKState& s);

// sup over the grid of |dPhi|^2_g.
double sup_grad_phi_sq(const GKState& s);

// {f, h} = <Omega^{-1}, df ^ dh> = 1/2 tr(Omega^{-1} (df ^ dh)).
ScalarField poisson_bracket(const TwoFormField& omega, const ScalarField& f, const ScalarField& h);

// Evaluated GIT symplectic form on pairs (f1, g1), (f2, g2).
double git_symplectic_form(const GKState& s, const ScalarField& f1, const ScalarField& g1,
                           const ScalarField& f2, const ScalarField& g2);

struct FunctionalReport {
  double lambda = 0.0;
  double F_value = 0.0;
  double dF_dt = 0.0;
  double energy_rhs = 0.0;
  double mu_l2 = 0.0;
  double gscal_mean = 0.0;
};

// Single-state report; F_value is the base-point value 0.
FunctionalReport functional_report(const GKState& s);

}  // namespace gkt4

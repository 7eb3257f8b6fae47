#pragma once

#include <functional>
#include <vector>

#include "gkt4/state.hpp"

namespace gkt4 {

// Generator of an Omega-Hamiltonian isotopy; f(t) may depend on time.
struct HamiltonianGenerator {
  std::function<ScalarField(double)> f;

  static HamiltonianGenerator constant(ScalarField f);
};

// Subtract the mean of f with respect to the density Omega ^ Omega.
ScalarField normalize_generator(const ScalarField& f, const TwoFormField& omega);

// X_f with iota_{X_f} Omega = -df. Throws SingularForm if Omega degenerates.
VectorField hamiltonian_vector_field(const ScalarField& f, const TwoFormField& omega);

// Potential velocity 1/2 iota_{X_f}(Psi2_base + da).
OneFormField joyce_velocity(const TwoFormField& psi2, const VectorField& x);

// Integrate the isotopy from the state's potential over [0, t_end] (t_end may be
// negative) with classical RK4 and uniform steps of size at most dt.
// Throws PositivityLossError when the metric margin drops to 1e-6 of its initial value.
GKState joyce_deform(const GKState& s, const HamiltonianGenerator& f, double t_end, double dt);
GKState joyce_deform(const GKState& s, const ScalarField& f, double t_end, double dt);

struct SweepEntry {
  double t;
  GKState state;
  double lambda;
  double margin;
};

// States at each requested time; t_grid must be increasing.
std::vector<SweepEntry> deformation_sweep(const GKState& s, const ScalarField& f,
                                          const std::vector<double>& t_grid, double dt);

inline constexpr double kPositivityFraction = 1e-6;

}  // namespace gkt4

#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "gkt4/calculus.hpp"

namespace gkt4 {

// Generalized Kaehler state on T^4 parametrized by (Omega, Psi1, Psi2_base, a),
// Psi2 = Psi2_base + da. Immutable; derived fields are computed at assembly.
class GKState {
 public:
  // Throws SingularForm or BrokenStructure. A state whose metric is not
  // positive-definite is returned with valid() == false.
  static GKState assemble(TwoFormField omega, TwoFormField psi1, TwoFormField psi2_base, OneFormField a);

  // Same fixed data, new potential.
  GKState with_potential(OneFormField a) const;

  const GridPtr& grid() const { return core_->omega.grid(); }
  const TwoFormField& omega() const { return core_->omega; }
  const TwoFormField& psi1() const { return core_->psi1; }
  const TwoFormField& psi2_base() const { return core_->psi2_base; }
  const OneFormField& potential() const { return d_->a; }
  const TwoFormField& psi2() const { return d_->psi2; }

  const EndoField& I() const { return core_->i; }
  const EndoField& J() const { return d_->j; }
  const MetricField& g() const { return d_->g; }
  const TwoFormField& b() const { return d_->b; }
  const TwoFormField& F_plus() const { return d_->f_plus; }
  const TwoFormField& F_minus() const { return d_->f_minus; }
  const ScalarField& p() const { return d_->p; }

  // valid: the metric admits a Cholesky factor at every point.
  bool valid() const { return d_->valid; }
  // Smallest eigenvalue of g over the grid; computed on first use.
  double positivity_margin() const { return margin_cache().value; }
  std::size_t margin_index() const { return margin_cache().index; }

  // Throws NonPositiveMetric on invalid states.
  const MetricData& metric() const;

  // Phi = log(Pf F+ / Pf F-). Throws DegeneratePair if the pair degenerates.
  const ScalarField& phi() const;

  double time() const { return d_->t; }
  GKState at_time(double t) const;
  const std::string& provenance() const { return core_->provenance; }
  GKState with_provenance(std::string text) const;

 private:
  struct Core {
    TwoFormField omega, psi1, psi2_base;
    EndoField i;
    std::string provenance;
  };
  struct MarginCache {
    std::once_flag once;
    double value = 0.0;
    std::size_t index = 0;
  };
  struct Derived {
    OneFormField a;
    TwoFormField psi2;
    EndoField j;
    MetricField g;
    TwoFormField b, f_plus, f_minus;
    ScalarField p;
    std::optional<ScalarField> phi;
    std::string phi_error;
    std::optional<MetricData> metric;
    bool valid = false;
    std::shared_ptr<MarginCache> margin;
    double t = 0.0;
  };

  GKState(std::shared_ptr<const Core> core, std::shared_ptr<const Derived> d)
      : core_(std::move(core)), d_(std::move(d)) {}
  const MarginCache& margin_cache() const;
  static std::shared_ptr<const Derived> derive(const Core& core, OneFormField a);

  std::shared_ptr<const Core> core_;
  std::shared_ptr<const Derived> d_;
};

// g flat, I = I0, J = J0, Omega = -1/2 omega_K0.
GKState flat_hyperkahler(const GridPtr& grid);

// Constant data of the flat background.
struct FlatForms {
  Mat4 omega, psi1, psi2;
};
FlatForms flat_forms();

const ScalarField& ricci_potential(const GKState& s);

TwoFormField omega_I(const GKState& s);
TwoFormField omega_J(const GKState& s);

// H = db.
ThreeFormField torsion(const GKState& s);

enum class Side { I, J };

// theta = Lambda(d omega) for the chosen complex structure.
OneFormField lee_form(const GKState& s, Side which);

// J dPhi with (J xi)(X) = -xi(JX).
OneFormField j_dphi(const GKState& s);

// rho_B = -1/2 d(J dPhi).
TwoFormField bismut_ricci(const GKState& s);

// 4 (d beta ^ F+) / (F+ ^ F+), beta = iota_V Omega, iota_V F- = -dPhi.
ScalarField generalized_scalar_curvature(const GKState& s);

// int |H|^2_g dV_g.
double torsion_norm(const GKState& s);

// sigma = g^{-1} [I, J]^T as a bivector field sigma^{ab}, stored as an endomorphism-shaped array.
EndoField poisson_tensor(const GKState& s);

}  // namespace gkt4

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gkt4/state.hpp"

namespace gkt4 {

struct DiagnosticsRecord {
  double t = 0.0;
  double lambda = 0.0;
  double sup_phi_dev = 0.0;      // sup |Phi - lambda|
  double sup_grad_phi_sq = 0.0;  // sup |dPhi|^2_g
  double F_value = 0.0;          // int_0^t sigma(0, Phi_s) ds
  double dF_dt = 0.0;            // sigma(0, Phi_t)
  double energy_rhs = 0.0;       // int |dPhi|^2_g (Pf F+ + e^lambda Pf F-) dx
  double mu_l2 = 0.0;
  double torsion_l2 = 0.0;       // int |H|^2_g dV
  double pos_margin = 0.0;
  double heat_residual = 0.0;    // sup |d_t Phi - Delta^C Phi|
};

enum class Termination { ReachedEnd, PositivityLoss, Converged };

const char* termination_name(Termination t);

struct FlowTrace {
  std::vector<DiagnosticsRecord> rows;
  std::optional<GKState> final_state;
  Termination termination = Termination::ReachedEnd;
  double dt = 0.0;
  long steps = 0;
  std::string message;
};

}  // namespace gkt4

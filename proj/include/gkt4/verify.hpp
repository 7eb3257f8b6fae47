#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gkt4/trace.hpp"

namespace gkt4 {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  // Fixed-width text table.
  std::string table() const;
  // name,residual,threshold,pass rows with a header line.
  std::string rows() const;
};

// Names a check whose primary operand gets a deliberate perturbation.
struct FaultInjection {
  std::string check;
  double size = 1e-3;
};

std::vector<std::string> pointwise_check_names();
std::vector<std::string> field_check_names();
std::vector<std::string> flow_check_names();

// Sample 0 is the flat pair; later samples are random rotations and angle mixes.
CheckReport run_pointwise_suite(std::uint64_t seed, int count, const FaultInjection& fault = {});

CheckReport run_field_suite(const GKState& s, double threshold = 1e-6, const FaultInjection& fault = {});

// dt is the integrator step used for the heat-residual bound. Throws Precondition
// for traces with fewer than 3 rows.
CheckReport run_flow_suite(const FlowTrace& trace, double dt, const FaultInjection& fault = {});

}  // namespace gkt4

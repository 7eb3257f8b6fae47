#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "gkt4/gkrf.hpp"

namespace gkt4 {

struct GeneratorSpec {
  std::string family = "cos";  // cos | sincos | random
  double amplitude = 0.1;
  int kmax = 2;                // random only
  std::uint64_t seed = 1;      // random only
};

struct RunConfig {
  std::array<int, 4> dims{32, 32, 1, 1};
  DiffRule diff = DiffRule::Spectral;
  GeneratorSpec generator;
  double deform_t_end = 0.2;
  double deform_dt = 0.01;
  FlowConfig flow;
  long checkpoint_stride = 0;  // 0 disables checkpoints
  std::string snapshot_out;
  std::string csv_out;
};

// Flat "key = value" text, '#' comments. Unknown keys and malformed values
// throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// Documented keys with defaults, one per line.
std::string config_reference();

// Generator sampled on the grid, mean-normalized.
ScalarField make_generator(const GeneratorSpec& spec, const GridPtr& grid);

inline constexpr std::uint32_t kSnapshotVersion = 1;

void save_snapshot(const GKState& s, const std::string& path);
// The differentiation rule is a run setting, not part of the file.
GKState load_snapshot(const std::string& path, DiffRule rule = DiffRule::Spectral);

void write_diagnostics_csv(const FlowTrace& trace, const std::string& path);
std::string diagnostics_csv(const FlowTrace& trace);
// Rows only; dt and steps are left at 0.
FlowTrace read_diagnostics_csv(const std::string& path);

inline constexpr const char* kCsvHeader =
    "t,lambda,sup_phi_dev,sup_grad_phi_sq,F_value,dF_dt,energy_rhs,mu_l2,torsion_l2,pos_margin,heat_residual";

// Write to a sibling temp file, then rename over path.
void write_file_atomic(const std::string& path, const std::string& bytes);

}  // namespace gkt4

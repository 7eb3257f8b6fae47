#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace gkt4 {

enum class DiffRule { Spectral, Central4 };

// Uniform grid on (R / 2 pi Z)^4. Point index is row-major with axis 3 fastest.
class PeriodicGrid {
 public:
  explicit PeriodicGrid(std::array<int, 4> dims, DiffRule rule = DiffRule::Spectral);

  const std::array<int, 4>& dims() const { return dims_; }
  int dim(int axis) const { return dims_[axis]; }
  std::size_t size() const { return size_; }
  double spacing(int axis) const;
  std::size_t stride(int axis) const { return strides_[axis]; }
  DiffRule rule() const { return rule_; }

  // Integer wavenumbers of the axis in DFT order, Nyquist entry set to 0.
  const std::vector<int>& wavenumbers(int axis) const { return wavenumbers_[axis]; }

  // Coordinate value x_axis at a flat point index.
  double coord(std::size_t index, int axis) const;
  std::array<int, 4> multi_index(std::size_t index) const;

  // out = d/dx_axis of in. out and in must not alias.
  void derivative(std::span<const double> in, std::span<double> out, int axis) const;
  bool trivial_axis(int axis) const { return dims_[axis] == 1; }

  // Largest eigenvalue bound of -d^2/dx^2 used by the CFL estimate.
  double stiffness() const;

  bool operator==(const PeriodicGrid& o) const { return dims_ == o.dims_ && rule_ == o.rule_; }

 private:
  std::array<int, 4> dims_;
  std::array<std::size_t, 4> strides_{};
  std::size_t size_ = 1;
  DiffRule rule_;
  std::array<std::vector<int>, 4> wavenumbers_;
  std::array<std::vector<double>, 4> dmat_;  // row-major n x n per axis
};

using GridPtr = std::shared_ptr<const PeriodicGrid>;

GridPtr make_grid(std::array<int, 4> dims, DiffRule rule = DiffRule::Spectral);

}  // namespace gkt4

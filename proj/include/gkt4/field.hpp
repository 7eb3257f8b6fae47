#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gkt4/error.hpp"
#include "gkt4/grid.hpp"
#include "gkt4/pointwise.hpp"

namespace gkt4 {

struct ScalarTag {};
struct OneFormTag {};
struct VectorTag {};
struct TwoFormTag {};
struct ThreeFormTag {};
struct EndoTag {};
struct MetricTag {};

// Component-major storage: component c occupies [c * npoints, (c + 1) * npoints).
template <std::size_t NC, class Tag>
class TensorField {
 public:
  static constexpr std::size_t kComponents = NC;

  TensorField() = default;
  explicit TensorField(GridPtr grid) : grid_(std::move(grid)), data_(NC * grid_->size(), 0.0) {}

  const GridPtr& grid() const { return grid_; }
  std::size_t points() const { return grid_ ? grid_->size() : 0; }
  bool empty() const { return data_.empty(); }

  std::span<double> comp(std::size_t c) { return {data_.data() + c * points(), points()}; }
  std::span<const double> comp(std::size_t c) const { return {data_.data() + c * points(), points()}; }

  double& operator()(std::size_t c, std::size_t i) { return data_[c * points() + i]; }
  double operator()(std::size_t c, std::size_t i) const { return data_[c * points() + i]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  TensorField& operator+=(const TensorField& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  TensorField& operator-=(const TensorField& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  TensorField& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }
  friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
  friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
  friend TensorField operator*(double s, TensorField a) { return a *= s; }
  TensorField operator-() const {
    TensorField r = *this;
    r *= -1.0;
    return r;
  }

  // this += s * o
  void axpy(double s, const TensorField& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

 private:
  GridPtr grid_;
  std::vector<double> data_;
};

using ScalarField = TensorField<1, ScalarTag>;
using OneFormField = TensorField<4, OneFormTag>;
using VectorField = TensorField<4, VectorTag>;
using TwoFormField = TensorField<6, TwoFormTag>;
using ThreeFormField = TensorField<4, ThreeFormTag>;
using EndoField = TensorField<16, EndoTag>;
using MetricField = TensorField<10, MetricTag>;

// Point accessors.
inline Mat4 matrix_at(const TwoFormField& f, std::size_t i) {
  PointTwoForm p;
  for (int c = 0; c < 6; ++c) p.c[c] = f(c, i);
  return p.matrix();
}
inline PointTwoForm point_at(const TwoFormField& f, std::size_t i) {
  PointTwoForm p;
  for (int c = 0; c < 6; ++c) p.c[c] = f(c, i);
  return p;
}
inline void set_at(TwoFormField& f, std::size_t i, const Mat4& m) {
  const PointTwoForm p = PointTwoForm::from_matrix(m);
  for (int c = 0; c < 6; ++c) f(c, i) = p.c[c];
}
inline Mat4 matrix_at(const MetricField& f, std::size_t i) {
  PointMetric p;
  for (int c = 0; c < 10; ++c) p.c[c] = f(c, i);
  return p.matrix();
}
inline void set_at(MetricField& f, std::size_t i, const Mat4& m) {
  const PointMetric p = PointMetric::from_matrix(m);
  for (int c = 0; c < 10; ++c) f(c, i) = p.c[c];
}
inline Mat4 matrix_at(const EndoField& f, std::size_t i) {
  Mat4 m;
  for (int c = 0; c < 16; ++c) m.v[c] = f(c, i);
  return m;
}
inline void set_at(EndoField& f, std::size_t i, const Mat4& m) {
  for (int c = 0; c < 16; ++c) f(c, i) = m.v[c];
}
template <class Tag>
std::array<double, 4> vec_at(const TensorField<4, Tag>& f, std::size_t i) {
  return {f(0, i), f(1, i), f(2, i), f(3, i)};
}
template <class Tag>
void set_vec(TensorField<4, Tag>& f, std::size_t i, const std::array<double, 4>& v) {
  for (int c = 0; c < 4; ++c) f(c, i) = v[c];
}

// Full antisymmetric value eta(a, b, c) of a 3-form.
double three_form_value(const ThreeFormField& eta, std::size_t i, int a, int b, int c);

// Constant-coefficient fields.
TwoFormField constant_two_form(const GridPtr& grid, const Mat4& m);
EndoField constant_endo(const GridPtr& grid, const Mat4& m);
MetricField constant_metric(const GridPtr& grid, const Mat4& m);
ScalarField constant_scalar(const GridPtr& grid, double v);

// Helper: check two fields live on the same grid.
template <class A, class B>
void require_same_grid(const A& a, const B& b) {
  if (!a.grid() || !b.grid() || !(*a.grid() == *b.grid())) {
    throw Error(ErrorCode::DimsMismatch, "fields live on different grids");
  }
}

}  // namespace gkt4

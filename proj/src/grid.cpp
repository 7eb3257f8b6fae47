#include "gkt4/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gkt4/error.hpp"

namespace gkt4 {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> spectral_matrix(int n) {
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  if (n == 1) return d;
  // highest retained wavenumber; Nyquist dropped for even n
  const int kmax = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const int diff = ((j - k) % n + n) % n;
      double s = 0.0;
      for (int m = 1; m <= kmax; ++m) {
        const int phase = static_cast<int>((static_cast<long long>(m) * diff) % n);
        s += m * std::sin(kTwoPi * phase / n);
      }
      d[static_cast<std::size_t>(j) * n + k] = -2.0 * s / n;
    }
  }
  return d;
}

std::vector<double> central4_matrix(int n) {
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  if (n == 1) return d;
  const double h = kTwoPi / n;
  const int off[4] = {-2, -1, 1, 2};
  const double w[4] = {1.0, -8.0, 8.0, -1.0};
  for (int j = 0; j < n; ++j) {
    for (int s = 0; s < 4; ++s) {
      const int k = ((j + off[s]) % n + n) % n;
      d[static_cast<std::size_t>(j) * n + k] += w[s] / (12.0 * h);
    }
  }
  return d;
}

}  // namespace

PeriodicGrid::PeriodicGrid(std::array<int, 4> dims, DiffRule rule) : dims_(dims), rule_(rule) {
  for (int a = 0; a < 4; ++a) {
    if (dims[a] < 1) {
      throw Error(ErrorCode::InvalidArgument, "grid axis " + std::to_string(a) + " has size < 1");
    }
  }
  strides_[3] = 1;
  for (int a = 2; a >= 0; --a) strides_[a] = strides_[a + 1] * static_cast<std::size_t>(dims[a + 1]);
  size_ = strides_[0] * static_cast<std::size_t>(dims[0]);
  for (int a = 0; a < 4; ++a) {
    const int n = dims[a];
    auto& k = wavenumbers_[a];
    k.resize(n);
    for (int i = 0; i < n; ++i) k[i] = (i <= (n - 1) / 2) ? i : i - n;
    if (n % 2 == 0) k[n / 2] = 0;
    dmat_[a] = (rule == DiffRule::Spectral) ? spectral_matrix(n) : central4_matrix(n);
  }
}

double PeriodicGrid::spacing(int axis) const { return kTwoPi / dims_[axis]; }

double PeriodicGrid::coord(std::size_t index, int axis) const {
  const auto i = (index / strides_[axis]) % static_cast<std::size_t>(dims_[axis]);
  return kTwoPi * static_cast<double>(i) / dims_[axis];
}

std::array<int, 4> PeriodicGrid::multi_index(std::size_t index) const {
  std::array<int, 4> m{};
  for (int a = 0; a < 4; ++a) m[a] = static_cast<int>((index / strides_[a]) % dims_[a]);
  return m;
}

void PeriodicGrid::derivative(std::span<const double> in, std::span<double> out, int axis) const {
  const int n = dims_[axis];
  if (n == 1) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const std::size_t st = strides_[axis];
  const std::size_t block = st * static_cast<std::size_t>(n);
  const double* dm = dmat_[axis].data();
  std::vector<double> line(n);
  for (std::size_t base = 0; base < size_; base += block) {
    for (std::size_t inner = 0; inner < st; ++inner) {
      const std::size_t o = base + inner;
      for (int k = 0; k < n; ++k) line[k] = in[o + k * st];
      for (int j = 0; j < n; ++j) {
        const double* row = dm + static_cast<std::size_t>(j) * n;
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += row[k] * line[k];
        out[o + j * st] = s;
      }
    }
  }
}

double PeriodicGrid::stiffness() const {
  double s = 0.0;
  for (int a = 0; a < 4; ++a) {
    const double half = static_cast<double>(dims_[a] / 2);
    s += half * half;
  }
  return s;
}

GridPtr make_grid(std::array<int, 4> dims, DiffRule rule) {
  return std::make_shared<const PeriodicGrid>(dims, rule);
}

}  // namespace gkt4

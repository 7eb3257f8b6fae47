#pragma once

#include <doctest.h>

#include <cmath>

#include "gkt4/deform.hpp"
#include "gkt4/functionals.hpp"
#include "gkt4/gkrf.hpp"
#include "gkt4/io.hpp"
#include "gkt4/random.hpp"
#include "gkt4/verify.hpp"

namespace testing {

using namespace gkt4;

inline GridPtr grid32() { return make_grid({32, 32, 1, 1}); }

inline ScalarField cos_x0(const GridPtr& g, double eps) {
  ScalarField f(g);
  for (std::size_t i = 0; i < g->size(); ++i) f(0, i) = eps * std::cos(g->coord(i, 0));
  return f;
}

// Band-limited random field, |k_a| <= kmax on nontrivial axes.
inline ScalarField random_field(const GridPtr& g, std::uint64_t seed, double amplitude = 0.1, int kmax = 2) {
  GeneratorSpec spec;
  spec.family = "random";
  spec.amplitude = amplitude;
  spec.kmax = kmax;
  spec.seed = seed;
  return make_generator(spec, g);
}

template <class F>
F random_form(const GridPtr& g, std::uint64_t seed, int kmax = 2) {
  F out(g);
  for (std::size_t c = 0; c < F::kComponents; ++c) {
    const ScalarField f = random_field(g, seed * 101 + c, 1.0, kmax);
    std::copy(f.data().begin(), f.data().end(), out.comp(c).begin());
  }
  return out;
}

// Joyce deformation of the flat state by eps cos x0 to time t.
inline const GKState& joyce_state() {
  static const GKState s = joyce_deform(flat_hyperkahler(grid32()), cos_x0(grid32(), 0.1), 0.2, 0.01);
  return s;
}

template <class F>
double max_diff(const F& a, const F& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

inline double max_diff(const Mat4& a, const Mat4& b) { return max_abs(a - b); }

inline Mat4 expm(const Mat4& x) {
  // scaling and squaring with a Taylor core
  int squarings = 0;
  double n = max_abs(x);
  while (n > 0.1) {
    n *= 0.5;
    ++squarings;
  }
  const Mat4 y = std::ldexp(1.0, -squarings) * x;
  Mat4 term = Mat4::identity(), sum = Mat4::identity();
  for (int k = 1; k < 20; ++k) {
    term = (1.0 / k) * (term * y);
    sum = sum + term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

}  // namespace testing

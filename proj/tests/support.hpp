#pragma once

// Deterministic random inputs shared by the unit and acceptance tests.

#include <cmath>
#include <random>

#include "twistor/lhc.hpp"
#include "twistor/pluripencil.hpp"
#include "twistor/polymat.hpp"

namespace testing_support {

using twistor::CMatrix;
using twistor::Complex;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  Complex complex() { return {normal(), normal()}; }
  Complex unit_complex() { return std::polar(1.0, uniform(0.0, 2.0 * M_PI)); }

  CMatrix matrix(int rows, int cols) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = complex();
    return m;
  }

  /// Well-conditioned: I + scale * random.
  CMatrix near_identity(int n, double scale) { return twistor::identity(n) + scale * matrix(n, n); }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// [[0, -I], [I, 0]] with m = n/2; a real matrix with X^2 = -I.
inline CMatrix standard_j(int n) {
  const int m = n / 2;
  CMatrix j = CMatrix::Zero(n, n);
  j.topRightCorner(m, m) = -twistor::identity(m);
  j.bottomLeftCorner(m, m) = twistor::identity(m);
  return j;
}

/// g J conj(g)^-1, hypercomplex for any invertible g. Two Newton steps
/// X <- (X - conj(X)^-1) / 2 remove the rounding left by the inverse.
inline CMatrix random_hypercomplex_x(Rng& rng, int n) {
  const CMatrix g = rng.near_identity(n, 0.3);
  CMatrix x = g * standard_j(n) * g.conjugate().inverse();
  for (int i = 0; i < 2; ++i) x = (x - x.conjugate().inverse()) / 2.0;
  return x;
}

inline twistor::lhc::LHCData random_lhc(Rng& rng, int n) {
  return twistor::lhc::make_lhc(random_hypercomplex_x(rng, n), rng.matrix(n, n), rng.matrix(n, n));
}

}  // namespace testing_support

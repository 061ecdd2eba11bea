#pragma once

// Complex matrices and matrix-valued polynomials in two variables.
//
// A MatPoly2 stores coefficient matrices c[i][j] of u^i v^j for
// 0 <= i <= deg1, 0 <= j <= deg2. The first variable is always zeta; the
// second is eta (points of P^1 x P^1) or w (fibre coordinate of TP^1).

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace twistor {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class SecondVar { Eta, W };

/// Largest entry modulus; zero for an empty matrix.
double max_norm(const CMatrix& m);

/// Singular values below rel_tol * sigma_max count as zero.
int numerical_rank(const CMatrix& m, double rel_tol = 1e-9);

/// sigma_max / sigma_min; infinity when sigma_min is zero.
double condition_number(const CMatrix& m);

bool all_finite(const CMatrix& m);

CMatrix identity(int n);

class ScalarPoly2 {
 public:
  ScalarPoly2() = default;
  ScalarPoly2(int deg1, int deg2, SecondVar second = SecondVar::Eta);

  int deg1() const { return deg1_; }
  int deg2() const { return deg2_; }
  SecondVar second_var() const { return second_; }

  Complex coeff(int i, int j) const;
  void set_coeff(int i, int j, Complex value);

  Complex eval(Complex u, Complex v) const;

  double max_abs() const;
  bool is_zero() const;

  /// Coefficient-wise max |this - other|, padding the smaller grid with zeros.
  double max_diff(const ScalarPoly2& other) const;

  ScalarPoly2 scaled(Complex factor) const;

  /// Smallest bounds that still hold every nonzero coefficient.
  ScalarPoly2 trimmed() const;

  /// Coefficients with |c| < threshold are set to exactly zero.
  void chop(double threshold);

 private:
  int deg1_ = 0;
  int deg2_ = 0;
  SecondVar second_ = SecondVar::Eta;
  std::vector<Complex> coeffs_{Complex{}};
};

class MatPoly2 {
 public:
  MatPoly2(int rows, int cols, int deg1, int deg2, SecondVar second = SecondVar::Eta);

  static MatPoly2 constant(const CMatrix& m, SecondVar second = SecondVar::Eta);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int deg1() const { return deg1_; }
  int deg2() const { return deg2_; }
  SecondVar second_var() const { return second_; }

  const CMatrix& coeff(int i, int j) const;
  /// Throws InvalidArgument on shape mismatch or out-of-range index.
  void set_coeff(int i, int j, const CMatrix& m);

  CMatrix eval(Complex u, Complex v) const;

  /// Entrywise transpose of every coefficient matrix.
  MatPoly2 transposed() const;

 private:
  int rows_;
  int cols_;
  int deg1_;
  int deg2_;
  SecondVar second_;
  std::vector<CMatrix> coeffs_;
};

/// Determinant of a square matrix polynomial, recovered from its values on
/// a tensor grid of roots of unity. The default bidegree bound is
/// (n*deg1, n*deg2). Coefficients below 1e-10 * max|c| are flushed to zero.
ScalarPoly2 det2(const MatPoly2& p, std::optional<std::pair<int, int>> bound = std::nullopt);

struct SpectralPair {
  Complex eigenvalue;
  CMatrix projector;
};

/// Eigenvalues with spectral projectors, sorted by (real, imag).
/// Throws NonSimpleSpectrum when two eigenvalues are closer than 1e3 * tol
/// or when the projector identities fail to hold to tol.
std::vector<SpectralPair> spectral_data(const CMatrix& m, double tol);

/// Roots of the polynomial sum_k c[k] x^k (ascending coefficients, leading
/// coefficient nonzero) from the companion matrix, Newton-polished.
std::vector<Complex> poly_roots(const std::vector<Complex>& ascending);

Complex poly_eval(const std::vector<Complex>& ascending, Complex x);

}  // namespace twistor

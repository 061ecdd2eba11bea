#include "twistor/polymat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "twistor/error.hpp"

namespace twistor {

double max_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

int numerical_rank(const CMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++rank;
  }
  return rank;
}

double condition_number(const CMatrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::BDCSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

CMatrix identity(int n) { return CMatrix::Identity(n, n); }

// ---------------------------------------------------------------------------
// ScalarPoly2

ScalarPoly2::ScalarPoly2(int deg1, int deg2, SecondVar second)
    : deg1_(deg1), deg2_(deg2), second_(second) {
  if (deg1 < 0 || deg2 < 0) throw Error(ErrorKind::InvalidArgument, "negative degree bound");
  coeffs_.assign(static_cast<std::size_t>((deg1 + 1) * (deg2 + 1)), Complex{});
}

Complex ScalarPoly2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i > deg1_ || j > deg2_) return Complex{};
  return coeffs_[static_cast<std::size_t>(i * (deg2_ + 1) + j)];
}

void ScalarPoly2::set_coeff(int i, int j, Complex value) {
  if (i < 0 || j < 0 || i > deg1_ || j > deg2_)
    throw Error(ErrorKind::InvalidArgument, "coefficient index outside declared bidegree");
  coeffs_[static_cast<std::size_t>(i * (deg2_ + 1) + j)] = value;
}

Complex ScalarPoly2::eval(Complex u, Complex v) const {
  // Horner in u over Horner-in-v rows.
  Complex acc{};
  for (int i = deg1_; i >= 0; --i) {
    Complex row{};
    for (int j = deg2_; j >= 0; --j) row = row * v + coeff(i, j);
    acc = acc * u + row;
  }
  return acc;
}

double ScalarPoly2::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool ScalarPoly2::is_zero() const { return max_abs() == 0.0; }

double ScalarPoly2::max_diff(const ScalarPoly2& other) const {
  const int d1 = std::max(deg1_, other.deg1_);
  const int d2 = std::max(deg2_, other.deg2_);
  double m = 0.0;
  for (int i = 0; i <= d1; ++i)
    for (int j = 0; j <= d2; ++j) m = std::max(m, std::abs(coeff(i, j) - other.coeff(i, j)));
  return m;
}

ScalarPoly2 ScalarPoly2::scaled(Complex factor) const {
  ScalarPoly2 out = *this;
  for (auto& c : out.coeffs_) c *= factor;
  return out;
}

ScalarPoly2 ScalarPoly2::trimmed() const {
  int d1 = 0;
  int d2 = 0;
  for (int i = 0; i <= deg1_; ++i)
    for (int j = 0; j <= deg2_; ++j)
      if (coeff(i, j) != Complex{}) {
        d1 = std::max(d1, i);
        d2 = std::max(d2, j);
      }
  ScalarPoly2 out(d1, d2, second_);
  for (int i = 0; i <= d1; ++i)
    for (int j = 0; j <= d2; ++j) out.set_coeff(i, j, coeff(i, j));
  return out;
}

void ScalarPoly2::chop(double threshold) {
  for (auto& c : coeffs_)
    if (std::abs(c) < threshold) c = Complex{};
}

// ---------------------------------------------------------------------------
// MatPoly2

MatPoly2::MatPoly2(int rows, int cols, int deg1, int deg2, SecondVar second)
    : rows_(rows), cols_(cols), deg1_(deg1), deg2_(deg2), second_(second) {
  if (rows <= 0 || cols <= 0) throw Error(ErrorKind::InvalidArgument, "matrix dimensions must be positive");
  if (deg1 < 0 || deg2 < 0) throw Error(ErrorKind::InvalidArgument, "negative degree bound");
  coeffs_.assign(static_cast<std::size_t>((deg1 + 1) * (deg2 + 1)), CMatrix::Zero(rows, cols));
}

MatPoly2 MatPoly2::constant(const CMatrix& m, SecondVar second) {
  MatPoly2 p(static_cast<int>(m.rows()), static_cast<int>(m.cols()), 0, 0, second);
  p.set_coeff(0, 0, m);
  return p;
}

const CMatrix& MatPoly2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i > deg1_ || j > deg2_)
    throw Error(ErrorKind::InvalidArgument, "coefficient index outside declared bidegree");
  return coeffs_[static_cast<std::size_t>(i * (deg2_ + 1) + j)];
}

void MatPoly2::set_coeff(int i, int j, const CMatrix& m) {
  if (i < 0 || j < 0 || i > deg1_ || j > deg2_)
    throw Error(ErrorKind::InvalidArgument, "coefficient index outside declared bidegree");
  if (m.rows() != rows_ || m.cols() != cols_)
    throw Error(ErrorKind::InvalidArgument, "coefficient shape differs from polynomial shape");
  if (!all_finite(m)) throw Error(ErrorKind::InvalidArgument, "non-finite coefficient entry");
  coeffs_[static_cast<std::size_t>(i * (deg2_ + 1) + j)] = m;
}

CMatrix MatPoly2::eval(Complex u, Complex v) const {
  CMatrix acc = CMatrix::Zero(rows_, cols_);
  for (int i = deg1_; i >= 0; --i) {
    CMatrix row = CMatrix::Zero(rows_, cols_);
    for (int j = deg2_; j >= 0; --j) row = row * v + coeff(i, j);
    acc = acc * u + row;
  }
  return acc;
}

MatPoly2 MatPoly2::transposed() const {
  MatPoly2 out(cols_, rows_, deg1_, deg2_, second_);
  for (int i = 0; i <= deg1_; ++i)
    for (int j = 0; j <= deg2_; ++j) out.set_coeff(i, j, coeff(i, j).transpose());
  return out;
}

// ---------------------------------------------------------------------------
// det2

namespace {

std::vector<Complex> unit_roots(int count) {
  std::vector<Complex> nodes(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    nodes[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / count);
  return nodes;
}

Complex determinant(const CMatrix& m) {
  if (m.rows() == 0) return Complex{1.0};
  return m.partialPivLu().determinant();
}

}  // namespace

ScalarPoly2 det2(const MatPoly2& p, std::optional<std::pair<int, int>> bound) {
  if (p.rows() != p.cols()) throw Error(ErrorKind::NonSquare, "det2 needs square coefficients");
  const int n = p.rows();
  const auto [b1, b2] = bound.value_or(std::pair{n * p.deg1(), n * p.deg2()});
  if (b1 < 0 || b2 < 0) throw Error(ErrorKind::InvalidArgument, "negative determinant bound");

  const int n1 = b1 + 1;
  const int n2 = b2 + 1;
  const auto u_nodes = unit_roots(n1);
  const auto v_nodes = unit_roots(n2);

  // values(a, b) = det p(u_a, v_b)
  Eigen::MatrixXcd values(n1, n2);
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b) values(a, b) = determinant(p.eval(u_nodes[a], v_nodes[b]));

  // Inverse DFT along both axes; exact for bidegree <= (b1, b2).
  ScalarPoly2 out(b1, b2, p.second_var());
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      Complex acc{};
      for (int a = 0; a < n1; ++a) {
        Complex row{};
        for (int b = 0; b < n2; ++b) row += values(a, b) * std::conj(v_nodes[static_cast<std::size_t>((j * b) % n2)]);
        acc += row * std::conj(u_nodes[static_cast<std::size_t>((i * a) % n1)]);
      }
      out.set_coeff(i, j, acc / static_cast<double>(n1 * n2));
    }
  }
  out.chop(1e-10 * out.max_abs());
  return out;
}

// ---------------------------------------------------------------------------
// spectral_data

std::vector<SpectralPair> spectral_data(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NonSquare, "spectral_data needs a square matrix");
  const Eigen::Index n = m.rows();
  Eigen::ComplexEigenSolver<CMatrix> solver(m, true);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::NonSimpleSpectrum, "eigen-decomposition did not converge");

  const CVector& lambda = solver.eigenvalues();
  const CMatrix& vecs = solver.eigenvectors();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (lambda(a).real() != lambda(b).real()) return lambda(a).real() < lambda(b).real();
    return lambda(a).imag() < lambda(b).imag();
  });

  const double gap_threshold = 1e3 * tol;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(lambda(i) - lambda(j)) < gap_threshold)
        throw Error(ErrorKind::NonSimpleSpectrum, "eigenvalues closer than the gap threshold");

  Eigen::FullPivLU<CMatrix> lu(vecs);
  if (!lu.isInvertible()) throw Error(ErrorKind::NonSimpleSpectrum, "eigenvectors are linearly dependent");
  const CMatrix left = lu.inverse();

  std::vector<SpectralPair> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index idx : order) out.push_back({lambda(idx), vecs.col(idx) * left.row(idx)});

  CMatrix sum = CMatrix::Zero(n, n);
  CMatrix recon = CMatrix::Zero(n, n);
  for (const auto& sp : out) {
    sum += sp.projector;
    recon += sp.eigenvalue * sp.projector;
  }
  double defect = std::max(max_norm(sum - CMatrix::Identity(n, n)), max_norm(recon - m));
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j) {
      const CMatrix prod = out[i].projector * out[j].projector;
      defect = std::max(defect, max_norm(i == j ? CMatrix(prod - out[i].projector) : prod));
    }
  if (!(defect <= tol))
    throw Error(ErrorKind::NonSimpleSpectrum, "projector identities fail to tolerance (matrix not diagonalizable)");
  return out;
}

// ---------------------------------------------------------------------------
// scalar polynomials in one variable

Complex poly_eval(const std::vector<Complex>& ascending, Complex x) {
  Complex acc{};
  for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<Complex> poly_roots(const std::vector<Complex>& ascending) {
  std::vector<Complex> c = ascending;
  while (!c.empty() && c.back() == Complex{}) c.pop_back();
  if (c.empty()) throw Error(ErrorKind::InvalidArgument, "zero polynomial has no well-defined roots");
  const int degree = static_cast<int>(c.size()) - 1;
  if (degree == 0) return {};

  CMatrix companion = CMatrix::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
  std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + degree);

  std::vector<Complex> deriv(static_cast<std::size_t>(degree));
  for (int k = 1; k <= degree; ++k) deriv[static_cast<std::size_t>(k - 1)] = c[static_cast<std::size_t>(k)] * static_cast<double>(k);
  for (auto& r : roots) {
    for (int it = 0; it < 3; ++it) {
      const Complex d = poly_eval(deriv, r);
      if (d == Complex{}) break;
      const Complex step = poly_eval(c, r) / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      r -= step;
    }
  }
  return roots;
}

}  // namespace twistor

#include "twistor/pluripencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "twistor/error.hpp"

namespace twistor::pluri {

using sheaf::LineBundle;
using sheaf::Monomial;

namespace {

constexpr Monomial kX0{1, 0};  // first homogeneous coordinate
constexpr Monomial kX1{0, 1};  // second homogeneous coordinate
constexpr Monomial kOne{0, 0};

double scale_of(const PluriPencil& p) {
  return std::max({1.0, max_norm(p.X), max_norm(p.Y)});
}

}  // namespace

PluriPencil make_pencil(CMatrix X, CMatrix Y) {
  if (X.rows() == 0 || X.rows() != X.cols()) throw Error(ErrorKind::NonSquare, "X must be a nonempty square matrix");
  if (Y.rows() != X.rows() || Y.cols() != X.cols())
    throw Error(ErrorKind::InvalidArgument, "X and Y must have the same shape");
  if (!all_finite(X) || !all_finite(Y)) throw Error(ErrorKind::InvalidArgument, "non-finite pencil entry");
  return {static_cast<int>(X.rows()), std::move(X), std::move(Y)};
}

CMatrix HomogenizedM::eval(Complex z0, Complex z1, Complex e0, Complex e1) const {
  const Eigen::Index n = A0.cols();
  CMatrix m(2 * n, 2 * n);
  m.leftCols(n) = z0 * A0 + z1 * A1;
  m.rightCols(n) = e0 * B0 + e1 * B1;
  return m;
}

HomogenizedM assemble_M_homogenized(const PluriPencil& p) {
  const int n = p.n;
  const CMatrix I = identity(n);
  const CMatrix Z = CMatrix::Zero(n, n);
  HomogenizedM h;
  h.A0.resize(2 * n, n);
  h.A1.resize(2 * n, n);
  h.B0.resize(2 * n, n);
  h.B1.resize(2 * n, n);
  h.A0 << p.X, Z;
  h.A1 << p.Y, I;
  h.B0 << -I, -p.Y.conjugate();
  h.B1 << Z, p.X.conjugate();
  return h;
}

MatPoly2 assemble_M(const PluriPencil& p) {
  const int n = p.n;
  const HomogenizedM h = assemble_M_homogenized(p);
  MatPoly2 m(2 * n, 2 * n, 1, 1, SecondVar::Eta);
  CMatrix c00(2 * n, 2 * n), c10(2 * n, 2 * n), c01(2 * n, 2 * n);
  c00 << h.A0, h.B0;
  c10 << h.A1, CMatrix::Zero(2 * n, n);
  c01 << CMatrix::Zero(2 * n, n), h.B1;
  m.set_coeff(0, 0, c00);
  m.set_coeff(1, 0, c10);
  m.set_coeff(0, 1, c01);
  return m;
}

MatPoly2 assemble_C(const PluriPencil& p) {
  const CMatrix Xb = p.X.conjugate();
  const CMatrix Yb = p.Y.conjugate();
  MatPoly2 c(p.n, p.n, 1, 1, SecondVar::Eta);
  c.set_coeff(0, 0, -Yb * p.X);
  c.set_coeff(1, 0, identity(p.n) - Yb * p.Y);
  c.set_coeff(0, 1, Xb * p.X);
  c.set_coeff(1, 1, Xb * p.Y);
  return c;
}

PluriPencil gauge_act(const CMatrix& g, const PluriPencil& p) {
  if (g.rows() != p.n || g.cols() != p.n) throw Error(ErrorKind::InvalidArgument, "gauge has the wrong shape");
  if (!(condition_number(g) < 1e12)) throw Error(ErrorKind::SingularGauge, "gauge matrix is not invertible");
  const CMatrix gbar_inv = g.conjugate().inverse();
  return {p.n, g * p.X * gbar_inv, g * p.Y * gbar_inv};
}

ScalarPoly2 char_poly(const PluriPencil& p) {
  return det2(assemble_C(p), std::pair{p.n, p.n});
}

bool is_degenerate(const PluriPencil& p) {
  const double s = scale_of(p);
  // Entries of C are bounded by about n * s^2; det by (n * s^2)^n.
  const double bound = std::pow(static_cast<double>(p.n) * s * s, p.n);
  return char_poly(p).max_abs() <= 1e-10 * bound;
}

bool is_hypercomplex(const PluriPencil& p, double tol) {
  return max_norm(p.Y) <= tol && max_norm(p.X.conjugate() * p.X + identity(p.n)) <= tol;
}

double antidiagonal_clearance(const PluriPencil& p, int grid) {
  if (grid < 1) throw Error(ErrorKind::InvalidArgument, "grid must be positive");
  if (is_degenerate(p)) throw Error(ErrorKind::DegeneratePencil, "characteristic polynomial vanishes identically");
  const ScalarPoly2 poly = char_poly(p);
  const int n1 = poly.deg1();
  const int n2 = poly.deg2();

  // Homogeneous evaluation sum c_ij z1^i z0^(n1-i) e1^j e0^(n2-j).
  auto eval_h = [&](Complex z0, Complex z1, Complex e0, Complex e1) {
    Complex acc{};
    for (int i = 0; i <= n1; ++i)
      for (int j = 0; j <= n2; ++j) {
        const Complex c = poly.coeff(i, j);
        if (c == Complex{}) continue;
        acc += c * std::pow(z1, i) * std::pow(z0, n1 - i) * std::pow(e1, j) * std::pow(e0, n2 - j);
      }
    return acc;
  };
  // zeta = z1/z0 and eta = -1/conj(zeta) = e1/e0, both pairs with max-norm 1.
  auto value_at = [&](Complex zeta, bool at_infinity) {
    if (at_infinity) return std::abs(eval_h(0.0, 1.0, 1.0, 0.0));
    if (std::abs(zeta) <= 1.0) return std::abs(eval_h(1.0, zeta, -std::conj(zeta), 1.0));
    const Complex inv = 1.0 / zeta;
    return std::abs(eval_h(inv, 1.0, 1.0, -std::conj(inv)));
  };

  const int k = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(grid)))));
  double best = std::min(value_at(0.0, false), value_at(0.0, true));
  for (int lat = 1; lat < k; ++lat) {
    const double theta = std::numbers::pi * lat / k;
    const double radius = std::tan(theta / 2.0);
    for (int lon = 0; lon < 2 * k; ++lon) {
      const double phi = std::numbers::pi * lon / k;
      best = std::min(best, value_at(std::polar(radius, phi), false));
    }
  }
  return best;
}

sheaf::BundleMap presentation_F(const PluriPencil& p) {
  const int n = p.n;
  std::vector<LineBundle> source;
  for (int i = 0; i < n; ++i) source.push_back({-1, 0});
  for (int i = 0; i < n; ++i) source.push_back({0, -1});
  std::vector<LineBundle> target(static_cast<std::size_t>(2 * n), LineBundle{0, 0});
  sheaf::BundleMap map(source, target);

  const HomogenizedM h = assemble_M_homogenized(p);
  for (int r = 0; r < 2 * n; ++r)
    for (int c = 0; c < n; ++c) {
      map.add_term(r, c, {h.A0(r, c), kX0, kOne});
      map.add_term(r, c, {h.A1(r, c), kX1, kOne});
      map.add_term(r, n + c, {h.B0(r, c), kOne, kX0});
      map.add_term(r, n + c, {h.B1(r, c), kOne, kX1});
    }
  return map;
}

sheaf::BundleMap presentation_F2(const PluriPencil& p) {
  const int n = p.n;
  sheaf::BundleMap map(std::vector<LineBundle>(static_cast<std::size_t>(n), LineBundle{-1, 0}),
                       std::vector<LineBundle>(static_cast<std::size_t>(n), LineBundle{0, 1}));
  // C_h = e1 z0 conj(X) X + e1 z1 conj(X) Y - e0 z0 conj(Y) X + e0 z1 (I - conj(Y) Y)
  const MatPoly2 c = assemble_C(p);
  for (int r = 0; r < n; ++r)
    for (int col = 0; col < n; ++col) {
      map.add_term(r, col, {c.coeff(0, 0)(r, col), kX0, kX0});
      map.add_term(r, col, {c.coeff(1, 0)(r, col), kX1, kX0});
      map.add_term(r, col, {c.coeff(0, 1)(r, col), kX0, kX1});
      map.add_term(r, col, {c.coeff(1, 1)(r, col), kX1, kX1});
    }
  return map;
}

namespace {

TwistCohomology twist_cohomology(const sheaf::BundleMap& base, int a, int b) {
  const auto r = sheaf::cokernel_cohomology(base.twisted(a, b));
  TwistCohomology t;
  t.a = a;
  t.b = b;
  t.h0 = r.h0;
  t.h1 = r.h1;
  t.euler = r.euler;
  t.consistent = r.h0_injective && r.h2_surjective && (r.h0 - r.h1 == r.euler);
  return t;
}

CriterionMatrix criterion(const CMatrix& m) {
  CriterionMatrix c;
  c.matrix = m;
  c.det = m.size() == 0 ? Complex{1.0} : m.fullPivLu().determinant();
  c.cond = condition_number(m);
  c.rank = numerical_rank(m);
  c.nonsingular = c.rank == m.rows() && m.rows() == m.cols();
  return c;
}

}  // namespace

bool CohomReport::vanishing() const {
  for (std::size_t i = 1; i < twists.size(); ++i)
    if (twists[i].h0 != 0 || twists[i].h1 != 0) return false;
  return true;
}

CohomReport cohomology_report(const PluriPencil& p) {
  if (is_degenerate(p))
    throw Error(ErrorKind::DegeneratePencil, "det M vanishes identically; the presentation is not injective");
  CohomReport rep;
  rep.n = p.n;
  rep.injective = true;
  rep.odd_n_warning = p.n % 2 != 0;

  const auto f = presentation_F(p);
  const auto f2 = presentation_F2(p);
  for (std::size_t i = 0; i < kReportTwists.size(); ++i) {
    const auto [a, b] = kReportTwists[i];
    rep.twists[i] = twist_cohomology(f, a, b);
    rep.f2_twists[i] = twist_cohomology(f2, a, b);
  }
  rep.criterion_m20 = criterion(f.twisted(-2, 0).cohomology_matrix(1, 0));
  rep.criterion_0m2 = criterion(f.twisted(0, -2).cohomology_matrix(0, 1));
  return rep;
}

}  // namespace twistor::pluri

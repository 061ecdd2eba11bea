#pragma once

// Pluricomplex structures in matrix normal form. A pair (X, Y) of n x n
// complex matrices determines the presentation
//
//   O(-1,0)^n + O(0,-1)^n --M--> O^2n --> F --> 0,
//   M(zeta, eta) = [[X + zeta Y, -I], [zeta I, eta conj(X) - conj(Y)]],
//
// whose cokernel F (the characteristic sheaf) is supported on the curve
// det C(zeta, eta) = 0 with C = (eta conj(X) - conj(Y))(X + zeta Y) + zeta I.

#include <array>

#include "twistor/polymat.hpp"
#include "twistor/sheaf.hpp"

namespace twistor::pluri {

struct PluriPencil {
  int n = 0;
  CMatrix X;
  CMatrix Y;
};

/// Checks shapes and finiteness.
PluriPencil make_pencil(CMatrix X, CMatrix Y);

/// Homogenized blocks: M_h = [[z0 A0 + z1 A1 | e0 B0 + e1 B1]], i.e. the
/// first n columns have bidegree (1,0) and the last n bidegree (0,1).
struct HomogenizedM {
  CMatrix A0, A1, B0, B1;  // each 2n x n
  CMatrix eval(Complex z0, Complex z1, Complex e0, Complex e1) const;
};

MatPoly2 assemble_M(const PluriPencil& p);
HomogenizedM assemble_M_homogenized(const PluriPencil& p);

/// The n x n matrix C(zeta, eta) of the reduced presentation.
MatPoly2 assemble_C(const PluriPencil& p);

/// (g X conj(g)^-1, g Y conj(g)^-1). Throws SingularGauge when cond(g) >= 1e12.
PluriPencil gauge_act(const CMatrix& g, const PluriPencil& p);

/// det C(zeta, eta), bidegree <= (n, n).
ScalarPoly2 char_poly(const PluriPencil& p);

/// True when char_poly vanishes identically (relative to the input scale).
bool is_degenerate(const PluriPencil& p);

/// ||Y||_max <= tol and ||conj(X) X + I||_max <= tol.
bool is_hypercomplex(const PluriPencil& p, double tol);

/// Minimum of |char_poly| over antidiagonal points (zeta, -1/conj(zeta)),
/// sampled on a latitude/longitude grid of the Riemann sphere with about
/// `grid` points (both poles always included). Each point is evaluated in
/// the affine chart pair where the homogeneous coordinates have max-norm 1.
/// Throws DegeneratePencil when char_poly vanishes identically.
double antidiagonal_clearance(const PluriPencil& p, int grid);

/// Symmetric presentation (columns: n copies of O(-1,0), then n of O(0,-1)).
sheaf::BundleMap presentation_F(const PluriPencil& p);
/// Reduced presentation O(-1,0)^n --C--> O(0,1)^n.
sheaf::BundleMap presentation_F2(const PluriPencil& p);

struct TwistCohomology {
  int a = 0;
  int b = 0;
  int h0 = 0;
  int h1 = 0;
  int euler = 0;            ///< dimension count forced by the exact sequence
  bool consistent = false;  ///< h0 - h1 == euler and the end maps are exact
};

struct CriterionMatrix {
  CMatrix matrix;
  Complex det;
  double cond = 0.0;
  int rank = 0;
  bool nonsingular = false;
};

inline constexpr std::array<std::array<int, 2>, 4> kReportTwists{{{0, 0}, {-2, 0}, {0, -2}, {-1, -1}}};

struct CohomReport {
  int n = 0;
  bool injective = false;
  bool odd_n_warning = false;
  std::array<TwistCohomology, 4> twists{};     ///< from presentation_F, order of kReportTwists
  std::array<TwistCohomology, 4> f2_twists{};  ///< cross-check from presentation_F2
  CriterionMatrix criterion_m20;  ///< twist (-2,0): [[Y, X], [I, 0]]
  CriterionMatrix criterion_0m2;  ///< twist (0,-2): [[0, -I], [conj X, -conj Y]]

  /// H* vanishes at (-2,0), (0,-2) and (-1,-1).
  bool vanishing() const;
};

/// Throws DegeneratePencil when the presentation is not injective.
CohomReport cohomology_report(const PluriPencil& p);

}  // namespace twistor::pluri

#pragma once

// l-hypercomplex data: first-order deformations (P, Q) of a hypercomplex
// pencil (X0, 0), the quadratic matrix polynomial
//
//   A~(zeta) = -conj(Q) X0 + (conj(X0) P + conj(P) X0) zeta + conj(X0) Q zeta^2,
//
// and the characteristic curve det(w I - A~(zeta)) = 0 in TP^1.

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "twistor/polymat.hpp"

namespace twistor::lhc {

inline constexpr double kBaseTol = 1e-9;

struct LHCData {
  int n = 0;
  CMatrix X0;
  CMatrix P;
  CMatrix Q;
};

/// Throws NotHypercomplexBase unless ||conj(X0) X0 + I||_max <= 1e-9.
LHCData make_lhc(CMatrix X0, CMatrix P, CMatrix Q);

/// A~(zeta) = c0 + c1 zeta + c2 zeta^2. `base` is the matrix S of the real
/// structure tau(A) = S conj(A) S^-1 on values (S = conj(X0) for data built
/// from LHCData; entrywise conjugation when absent).
struct ATilde {
  CMatrix c0, c1, c2;
  std::optional<CMatrix> base;

  CMatrix eval(Complex zeta) const;
  CMatrix conj_value(const CMatrix& value) const;
};

ATilde a_tilde(const LHCData& d);

/// det(w I - A~(zeta)) as a polynomial in (zeta, w): monic of degree n in w,
/// degree <= 2n in zeta.
ScalarPoly2 char_poly_l(const LHCData& d);
ScalarPoly2 char_poly_l(const ATilde& a);

/// max ||A~(-1/conj z) + tau(A~(z)) / conj(z)^2||_max over `samples` angles
/// on the circles |z| = 0.5, 1, 2.
double reality_residual(const ATilde& a, int samples);

/// t -> (X_t, Y_t); must be deterministic and safe to call concurrently.
using FamilySampler = std::function<std::pair<CMatrix, CMatrix>(double)>;

struct LimitDiagnostics {
  std::vector<double> steps;
  std::vector<double> curve_residual;  ///< r(t) per step
  double order = 0.0;                  ///< log-log slope of r(t); NaN if r == 0
  double richardson_spread = 0.0;
};

struct LimitResult {
  LHCData data;
  LimitDiagnostics diagnostics;
};

/// P = lim (X_t - X_0)/t and Q = lim Y_t/t by Richardson extrapolation over
/// the steps (positive, decreasing, at least four). Throws
/// NotHypercomplexBase if f(0) is not hypercomplex, NoLimit if the
/// estimates fail to settle to 1e-6.
LimitResult extract_limit(const FamilySampler& f, std::span<const double> steps);

/// max over a fixed (zeta, w) grid of
/// |chi_t(zeta, zeta + t w) / t^n - (-1)^n det(w I - A~(zeta))|,
/// with chi_t = det C_t evaluated directly.
double curve_limit_residual(const CMatrix& Xt, const CMatrix& Yt, double t, const ATilde& limit);

struct PushforwardCohomology {
  int h0 = 0;
  int h1 = 0;
  int cutoff = 0;  ///< fibre-degree cutoff of the reported computation
};

/// h^0, h^1 of F(m) for F = coker(A~(zeta) - w I : O(-1)^n -> O(1)^n) on
/// TP^1, by truncated graded linear algebra in the fibre degree. Throws
/// TruncationUnstable when two successive cutoffs disagree.
PushforwardCohomology pushforward_cohomology(const LHCData& d, int m);

/// The truncated computation at a single cutoff.
PushforwardCohomology pushforward_cohomology_at(const ATilde& a, int n, int m, int cutoff);

struct ReconstructionReport {
  Complex zeta0;
  std::vector<Complex> eigenvalues;  ///< the w_i, sorted by (real, imag)
  CMatrix a_rec;                     ///< sum_i w_i Pi_i(J' v) on C^n + C^n
  CMatrix a_direct;
  double residual = 0.0;             ///< ||a_rec - a_direct||_max
  double anticommutator = 0.0;       ///< ||A J + J A||_max for a_direct
  bool ok = false;                   ///< residual <= tol
};

/// Linear model: V^C = C^n (+) C^n, J = diag(i I, -i I), J'(v, u) = (-u, v),
/// complex scalars acting as w on the (1,0) summand and conj(w) on (0,1).
/// Then A(zeta0) = [[0, -A~(zeta0)], [conj A~(zeta0), 0]]; a_rec rebuilds it
/// from the spectral projectors of A~(zeta0), a_direct from P + zeta0 Q.
/// A~(zeta0) = 0 is accepted and rebuilds to 0; otherwise a repeated
/// eigenvalue throws NonSimpleSpectrum.
ReconstructionReport reconstruct_A(const LHCData& d, Complex zeta0, double tol);

/// The fixed anticommuting structure J' of the linear model.
CMatrix model_j_prime(int n);
CMatrix model_j(int n);

}  // namespace twistor::lhc

#pragma once

// Spectral curves of monopoles on the degenerating family: transition
// functions of L^s (a, b), the hyperbolic -> Euclidean limit of spectral
// curves, sigma-invariance residuals and pole data of based rational maps.

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "twistor/minitwistor.hpp"
#include "twistor/polymat.hpp"

namespace twistor::monopole {

/// Transition value of L^s (x) O(a, b) at (zeta, w) in the fibre over t:
///   t > 0:  (1 + t w / zeta)^(-s/t) zeta^a (zeta + t w)^b   (principal branch)
///   t = 0:  exp(-s w / zeta) zeta^(a+b)
/// Throws ZeroZeta, BranchCut when 1 + t w / zeta lies on (-inf, 0], and
/// InvalidArgument for t < 0.
Complex bundle_cocycle(double s, int a, int b, double t, Complex zeta, Complex w);

/// Bidegree (k, k) curve sum c(i, j) zeta^i eta^j = 0 in the fibre over t.
struct SpectralCurveHyp {
  int k = 1;
  double t = 1.0;
  CMatrix coeffs;  ///< (k+1) x (k+1), row = zeta power, column = eta power
};

/// Checks k >= 1, t > 0, the grid shape, finiteness and that it is nonzero.
SpectralCurveHyp make_spectral_hyp(int k, double t, CMatrix coeffs);

/// The charge-1 curve a00 + a10 zeta + a01 eta + a11 zeta eta.
SpectralCurveHyp to_spectral(const minitwistor::Curve11& c);

/// w^k + a_1(zeta) w^(k-1) + ... + a_k(zeta) = 0 with deg a_i <= 2i.
/// a[i-1] holds the 2i+1 ascending coefficients of a_i.
struct SpectralCurveEuc {
  int k = 1;
  std::vector<std::vector<Complex>> a;

  /// Coefficient of zeta^m w^l (the w^k row is the constant 1).
  Complex coeff(int m, int l) const;
};

/// Checks k >= 1, a.size() == k and the degree bounds.
SpectralCurveEuc make_spectral_euc(int k, std::vector<std::vector<Complex>> a);

/// w - (A00 + A10 zeta + A11 zeta^2) = 0.
SpectralCurveEuc to_spectral(const minitwistor::EuclidCurve1& c);

/// Inverse of to_spectral for k = 1.
minitwistor::EuclidCurve1 to_euclid_curve1(const SpectralCurveEuc& c);

/// Coefficients of P(zeta, zeta + t w) divided by the coefficient of w^k,
/// as a (2k+1) x (k+1) grid (row = zeta power, column = w power).
CMatrix substituted_monic(const SpectralCurveHyp& c);

struct EuclidLimit {
  SpectralCurveEuc curve;
  double spread = 0.0;
};

/// Limit as t_n -> 0 of the substituted, w-monic curves, by extrapolation
/// of every coefficient sequence (at least four members with equal k and
/// decreasing t). Throws NoLimit when a sequence does not settle to 1e-6;
/// DegenerateLeading when the w^k coefficient is zero for some member or
/// its zeta-dependent part, or any coefficient above the degree bounds,
/// survives in the limit.
EuclidLimit euclid_limit(std::span<const SpectralCurveHyp> family);

/// min over |lambda| = 1 of max_ij |lambda c_ij - c*_ij| where c* is the
/// sigma-pullback of the curve: conj(P(-1/conj eta, -1/conj zeta)) (zeta eta)^k
/// for hyperbolic curves, conj(E(-1/conj zeta, -conj w/conj zeta^2)) zeta^2k
/// for Euclidean ones.
double sigma_residual(const SpectralCurveHyp& c);
double sigma_residual(const SpectralCurveEuc& c);

/// p(z)/q(z) with deg p < k and q monic of degree k (ascending coefficients).
struct RationalMap {
  int k = 1;
  std::vector<Complex> p;
  std::vector<Complex> q;
};

/// Throws NotBased on a degree or monicity violation.
RationalMap make_rational_map(int k, std::vector<Complex> p, std::vector<Complex> q);

/// (eta_i, p(eta_i)) over the roots of q, sorted by (re, im) of the pole.
/// Throws NonSimplePoles when two roots are within 1e-8, NotCoprime when
/// p vanishes at a root.
std::vector<std::pair<Complex, Complex>> rational_map_pole_data(const RationalMap& r);

}  // namespace twistor::monopole

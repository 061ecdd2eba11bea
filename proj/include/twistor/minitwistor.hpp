#pragma once

// The degenerating family of minitwistor spaces. Fibres over t != 0 are
// P^1 x P^1 minus the antidiagonal (geodesics of hyperbolic space with
// curvature -t^2); the fibre over t = 0 is TP^1 (geodesics of R^3).
//
// Two charts U0 = (zeta, w, t) and U1 = (zeta~, w~, t~) are glued by
//   zeta~ = 1/zeta,  w~ = -w / ((zeta + t w) zeta),  t~ = t,
// and eta = zeta + t w identifies a nonzero fibre with P^1 x P^1.

#include <span>
#include <variant>
#include <vector>

#include "twistor/polymat.hpp"

namespace twistor::minitwistor {

enum class Chart { U0, U1 };

/// A point of the family in one of the two charts.
struct ChartPoint {
  Chart chart = Chart::U0;
  Complex zeta;
  Complex w;
  Complex t;
};

/// Throws OutsideDomain when |zeta|^2 + t w conj(zeta) + 1 == 0.
ChartPoint make_chart_point(Chart chart, Complex zeta, Complex w, Complex t);

/// (zeta, eta, t) coordinates of a nonzero fibre. `t_infinite` marks the
/// compactifying fibre t = infinity, on which only sigma0 is defined.
struct ZEPoint {
  Chart chart = Chart::U0;
  Complex zeta;
  Complex eta;
  Complex t;
  bool t_infinite = false;
};

/// Coefficients of a00 + a10 zeta + a01 eta + a11 zeta eta = 0 in the
/// fibre over t > 0, normalized so that a01 = -1/t.
struct Curve11 {
  Complex a00, a10, a01, a11;
  double t = 1.0;
};

/// The Euclidean limit curve w = A00 + A10 zeta + A11 zeta^2 in TP^1.
struct EuclidCurve1 {
  Complex A00, A10, A11;
};

/// Half-space coordinates of H^3 with curvature -t^2 (R^3 when t = 0).
struct SpacePoint {
  double x = 0, y = 0, z = 0;
  double t = 0;
};

using PointCurve = std::variant<Curve11, EuclidCurve1>;

inline constexpr double kRealityTol = 1e-9;  // tau_real
inline constexpr double kLimitTol = 1e-6;    // tau_lim

// --- chart algebra ---------------------------------------------------------

/// Same point in the other chart. Throws OutsideOverlap when zeta == 0 or
/// zeta + t w == 0.
ChartPoint transition(const ChartPoint& p);

/// Throws ZeroT for t == 0.
ZEPoint to_ze(const ChartPoint& p);
ChartPoint from_ze(const ZEPoint& q);

/// The real structure, applied within the point's chart. Throws
/// OutsideDomain when conj(zeta) or conj(zeta) + conj(t w) vanishes.
ChartPoint sigma(const ChartPoint& p);

/// sigma0(zeta, eta, t) = (-1/conj(eta), -1/conj(zeta), conj(t)); defined on
/// the t = infinity fibre too.
ZEPoint sigma0(const ZEPoint& q);

// --- points and curves -----------------------------------------------------

/// Curve11 for t > 0, EuclidCurve1 for t == 0. Throws OutsideHalfSpace
/// unless z t > -1 and t >= 0.
PointCurve point_to_curve(const SpacePoint& s);
Curve11 point_to_curve11(const SpacePoint& s);
EuclidCurve1 point_to_euclid(const SpacePoint& s);

/// Inverse of point_to_curve. Throws NotSigmaInvariant when the reality
/// constraints conj(a11) = -a00, a10 real, a01 = -1/t fail beyond tau_real,
/// NotARealPoint when r a10 - |a00|^2 <= 0.
SpacePoint curve_to_point(const Curve11& c);
SpacePoint curve_to_point(const EuclidCurve1& c);
SpacePoint curve_to_point(const PointCurve& c);

struct PointLimit {
  EuclidCurve1 curve;
  SpacePoint point;
  double spread = 0.0;
};

/// Limit of a family of (1,1)-curves as t_n -> 0: the sequences a00_n,
/// a11_n and a10_n - 1/t_n are extrapolated to t = 0 and must settle to
/// tau_lim over the tail; otherwise NoLimit.
PointLimit limit_point(std::span<const Curve11> family);

/// r^2 / (z + r)^2 with r = 1/t. Throws OutsideHalfSpace unless t > 0 and
/// z t > -1.
double conformal_factor(const SpacePoint& s);

}  // namespace twistor::minitwistor

#include "twistor/minitwistor.hpp"

#include <algorithm>
#include <cmath>

#include "twistor/error.hpp"
#include "twistor/extrapolate.hpp"

namespace twistor::minitwistor {

namespace {

bool domain_ok(Complex zeta, Complex w, Complex t) {
  return std::norm(zeta) + t * w * std::conj(zeta) + 1.0 != Complex{};
}

Chart other(Chart c) { return c == Chart::U0 ? Chart::U1 : Chart::U0; }

void require_half_space(const SpacePoint& s) {
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.z) || !std::isfinite(s.t))
    throw Error(ErrorKind::OutsideHalfSpace, "non-finite coordinates");
  if (s.t < 0.0) throw Error(ErrorKind::OutsideHalfSpace, "t must be nonnegative");
  if (!(s.z * s.t > -1.0)) throw Error(ErrorKind::OutsideHalfSpace, "z t > -1 fails");
}

}  // namespace

ChartPoint make_chart_point(Chart chart, Complex zeta, Complex w, Complex t) {
  if (!domain_ok(zeta, w, t)) throw Error(ErrorKind::OutsideDomain, "point lies on the excluded antidiagonal locus");
  return {chart, zeta, w, t};
}

ChartPoint transition(const ChartPoint& p) {
  const Complex eta = p.zeta + p.t * p.w;
  if (p.zeta == Complex{} || eta == Complex{})
    throw Error(ErrorKind::OutsideOverlap, "zeta and zeta + t w must be nonzero");
  return {other(p.chart), 1.0 / p.zeta, -p.w / (eta * p.zeta), p.t};
}

ZEPoint to_ze(const ChartPoint& p) {
  if (p.t == Complex{}) throw Error(ErrorKind::ZeroT, "the t = 0 fibre has no (zeta, eta) description");
  return {p.chart, p.zeta, p.zeta + p.t * p.w, p.t, false};
}

ChartPoint from_ze(const ZEPoint& q) {
  if (q.t_infinite) throw Error(ErrorKind::InvalidArgument, "the t = infinity fibre has no chart description");
  if (q.t == Complex{}) throw Error(ErrorKind::ZeroT, "the t = 0 fibre has no (zeta, eta) description");
  return {q.chart, q.zeta, (q.eta - q.zeta) / q.t, q.t};
}

ChartPoint sigma(const ChartPoint& p) {
  const Complex zb = std::conj(p.zeta);
  const Complex eb = zb + std::conj(p.t) * std::conj(p.w);
  if (zb == Complex{} || eb == Complex{})
    throw Error(ErrorKind::OutsideDomain, "sigma denominator vanishes in this chart");
  return {p.chart, -1.0 / eb, -std::conj(p.w) / (eb * zb), std::conj(p.t)};
}

ZEPoint sigma0(const ZEPoint& q) {
  if (q.zeta == Complex{} || q.eta == Complex{})
    throw Error(ErrorKind::OutsideDomain, "sigma0 denominator vanishes in this chart");
  return {q.chart, -1.0 / std::conj(q.eta), -1.0 / std::conj(q.zeta), std::conj(q.t), q.t_infinite};
}

Curve11 point_to_curve11(const SpacePoint& s) {
  require_half_space(s);
  if (!(s.t > 0.0)) throw Error(ErrorKind::InvalidArgument, "Curve11 needs t > 0");
  const double r = 1.0 / s.t;
  const double rho2 = s.x * s.x + s.y * s.y + s.z * s.z;
  Curve11 c;
  c.a00 = {s.x, s.y};
  c.a10 = 2.0 * s.z + r + rho2 / r;
  c.a01 = -r;
  c.a11 = {-s.x, s.y};
  c.t = s.t;
  return c;
}

EuclidCurve1 point_to_euclid(const SpacePoint& s) {
  require_half_space(s);
  return {{s.x, s.y}, 2.0 * s.z, {-s.x, s.y}};
}

PointCurve point_to_curve(const SpacePoint& s) {
  require_half_space(s);
  if (s.t > 0.0) return point_to_curve11(s);
  return point_to_euclid(s);
}

SpacePoint curve_to_point(const Curve11& c) {
  if (!(c.t > 0.0) || !std::isfinite(c.t)) throw Error(ErrorKind::InvalidArgument, "Curve11 needs finite t > 0");
  const double r = 1.0 / c.t;
  if (std::abs(c.a01 + r) > kRealityTol * std::max(1.0, r))
    throw Error(ErrorKind::InvalidArgument, "a01 is not normalized to -1/t");
  if (std::abs(std::conj(c.a11) + c.a00) > kRealityTol * std::max(1.0, std::abs(c.a00)) ||
      std::abs(c.a10.imag()) > kRealityTol * std::max(1.0, std::abs(c.a10)))
    throw Error(ErrorKind::NotSigmaInvariant, "curve fails conj(a11) = -a00, a10 real");
  const double radicand = r * c.a10.real() - std::norm(c.a00);
  if (!(radicand > 0.0)) throw Error(ErrorKind::NotARealPoint, "r a10 - |a00|^2 must be positive");
  return {c.a00.real(), c.a00.imag(), -r + std::sqrt(radicand), c.t};
}

SpacePoint curve_to_point(const EuclidCurve1& c) {
  if (std::abs(std::conj(c.A11) + c.A00) > kRealityTol * std::max(1.0, std::abs(c.A00)) ||
      std::abs(c.A10.imag()) > kRealityTol * std::max(1.0, std::abs(c.A10)))
    throw Error(ErrorKind::NotSigmaInvariant, "curve fails conj(A11) = -A00, A10 real");
  return {c.A00.real(), c.A00.imag(), c.A10.real() / 2.0, 0.0};
}

SpacePoint curve_to_point(const PointCurve& c) {
  return std::visit([](const auto& curve) { return curve_to_point(curve); }, c);
}

PointLimit limit_point(std::span<const Curve11> family) {
  std::vector<double> ts;
  std::vector<std::vector<Complex>> samples;
  ts.reserve(family.size());
  for (const auto& c : family) {
    if (!(c.t > 0.0)) throw Error(ErrorKind::InvalidArgument, "family parameters must be positive");
    ts.push_back(c.t);
    samples.push_back({c.a00, c.a10 - 1.0 / c.t, c.a11});
  }
  const Extrapolation ex = extrapolate_default(ts, samples);
  require_stable(ex, kLimitTol, "curve coefficient sequence");

  PointLimit out;
  out.curve = {ex.limit[0], ex.limit[1], ex.limit[2]};
  out.point = curve_to_point(out.curve);
  out.spread = ex.spread;
  return out;
}

double conformal_factor(const SpacePoint& s) {
  require_half_space(s);
  if (!(s.t > 0.0)) throw Error(ErrorKind::OutsideHalfSpace, "conformal factor needs t > 0");
  const double r = 1.0 / s.t;
  return (r * r) / ((s.z + r) * (s.z + r));
}

}  // namespace twistor::minitwistor

#include "twistor/monopole.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twistor/error.hpp"
#include "twistor/extrapolate.hpp"

namespace twistor::monopole {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Repeated multiplication keeps integer powers exactly multiplicative in the
// exponent up to rounding, which std::pow(complex, int) does not promise.
Complex ipow(Complex z, int e) {
  Complex base = e < 0 ? 1.0 / z : z;
  unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
  Complex acc{1.0, 0.0};
  while (n) {
    if (n & 1u) acc *= base;
    base *= base;
    n >>= 1u;
  }
  return acc;
}

std::vector<std::vector<double>> binomials(int n) {
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    c[i].assign(static_cast<std::size_t>(i + 1), 1.0);
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

double min_over_phase(const std::vector<Complex>& c, const std::vector<Complex>& p) {
  auto residual = [&](double phi) {
    const Complex lambda = std::polar(1.0, phi);
    double worst = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::abs(lambda * c[i] - p[i]));
    return worst;
  };
  constexpr int kGrid = 360;
  const double h = 2.0 * std::numbers::pi / kGrid;
  int best = 0;
  double best_value = residual(0.0);
  for (int i = 1; i < kGrid; ++i) {
    const double v = residual(i * h);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  // golden-section refinement on the neighbouring grid cells
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = (best - 1) * h, hi = (best + 1) * h;
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = residual(x1), f2 = residual(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = residual(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = residual(x2);
    }
  }
  return std::min({best_value, f1, f2});
}

}  // namespace

Complex bundle_cocycle(double s, int a, int b, double t, Complex zeta, Complex w) {
  if (!std::isfinite(s) || !std::isfinite(t) || !finite(zeta) || !finite(w))
    throw Error(ErrorKind::InvalidArgument, "non-finite cocycle argument");
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "t must be nonnegative");
  if (zeta == Complex{}) throw Error(ErrorKind::ZeroZeta, "cocycle is not defined over zeta = 0");
  if (t == 0.0) return std::exp(-s * w / zeta) * ipow(zeta, a + b);
  const Complex u = 1.0 + t * w / zeta;
  if (u.imag() == 0.0 && u.real() <= 0.0)
    throw Error(ErrorKind::BranchCut, "1 + t w / zeta lies on the cut (-inf, 0]");
  return std::exp(-(s / t) * std::log(u)) * ipow(zeta, a) * ipow(zeta + t * w, b);
}

SpectralCurveHyp make_spectral_hyp(int k, double t, CMatrix coeffs) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "charge must be positive");
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "hyperbolic curves need t > 0");
  if (coeffs.rows() != k + 1 || coeffs.cols() != k + 1)
    throw Error(ErrorKind::InvalidArgument, "coefficient grid must be (k+1) x (k+1)");
  if (!all_finite(coeffs)) throw Error(ErrorKind::InvalidArgument, "non-finite curve coefficient");
  if (max_norm(coeffs) == 0.0) throw Error(ErrorKind::InvalidArgument, "zero polynomial is not a curve");
  return {k, t, std::move(coeffs)};
}

SpectralCurveHyp to_spectral(const minitwistor::Curve11& c) {
  CMatrix g(2, 2);
  g << c.a00, c.a01, c.a10, c.a11;
  return make_spectral_hyp(1, c.t, std::move(g));
}

Complex SpectralCurveEuc::coeff(int m, int l) const {
  if (l < 0 || l > k || m < 0) return {};
  if (l == k) return m == 0 ? Complex{1.0} : Complex{};
  const auto& row = a[static_cast<std::size_t>(k - l - 1)];
  return m < static_cast<int>(row.size()) ? row[static_cast<std::size_t>(m)] : Complex{};
}

SpectralCurveEuc make_spectral_euc(int k, std::vector<std::vector<Complex>> a) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "charge must be positive");
  if (static_cast<int>(a.size()) != k) throw Error(ErrorKind::InvalidArgument, "need one polynomial a_i per i = 1..k");
  for (int i = 1; i <= k; ++i) {
    auto& row = a[static_cast<std::size_t>(i - 1)];
    if (static_cast<int>(row.size()) > 2 * i + 1) throw Error(ErrorKind::InvalidArgument, "deg a_i must be <= 2i");
    for (const Complex z : row)
      if (!finite(z)) throw Error(ErrorKind::InvalidArgument, "non-finite curve coefficient");
    row.resize(static_cast<std::size_t>(2 * i + 1));
  }
  return {k, std::move(a)};
}

SpectralCurveEuc to_spectral(const minitwistor::EuclidCurve1& c) {
  return make_spectral_euc(1, {{-c.A00, -c.A10, -c.A11}});
}

minitwistor::EuclidCurve1 to_euclid_curve1(const SpectralCurveEuc& c) {
  if (c.k != 1) throw Error(ErrorKind::InvalidArgument, "charge-1 curve expected");
  return {-c.coeff(0, 0), -c.coeff(1, 0), -c.coeff(2, 0)};
}

CMatrix substituted_monic(const SpectralCurveHyp& c) {
  const int k = c.k;
  const auto binom = binomials(k);
  // P(zeta, zeta + t w) = sum c_ij C(j,l) t^l zeta^(i+j-l) w^l
  CMatrix out = CMatrix::Zero(2 * k + 1, k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) {
      const Complex cij = c.coeffs(i, j);
      if (cij == Complex{}) continue;
      for (int l = 0; l <= j; ++l) out(i + j - l, l) += cij * binom[j][l] * std::pow(c.t, l);
    }
  const Complex lead = out(0, k);
  if (std::abs(lead) <= 1e-14 * max_norm(out))
    throw Error(ErrorKind::DegenerateLeading, "coefficient of w^k vanishes");
  return out / lead;
}

EuclidLimit euclid_limit(std::span<const SpectralCurveHyp> family) {
  if (family.size() < 4) throw Error(ErrorKind::InvalidArgument, "euclid_limit needs at least four curves");
  const int k = family.front().k;
  std::vector<double> ts;
  std::vector<std::vector<Complex>> samples;
  for (const auto& c : family) {
    if (c.k != k) throw Error(ErrorKind::InvalidArgument, "family mixes charges");
    const CMatrix g = substituted_monic(c);
    ts.push_back(c.t);
    samples.emplace_back(g.data(), g.data() + g.size());
  }
  const Extrapolation ex = extrapolate_default(ts, samples);
  require_stable(ex, minitwistor::kLimitTol, "substituted spectral-curve coefficients");

  const Eigen::Map<const CMatrix> lim(ex.limit.data(), 2 * k + 1, k + 1);
  const double tol = minitwistor::kLimitTol * std::max(1.0, ex.scale);
  std::vector<std::vector<Complex>> a(static_cast<std::size_t>(k));
  for (int l = 0; l <= k; ++l) {
    const int bound = 2 * (k - l);
    for (int m = 0; m <= 2 * k; ++m) {
      if (l == k && m == 0) continue;
      if (m > bound) {
        if (std::abs(lim(m, l)) > tol)
          throw Error(ErrorKind::DegenerateLeading,
                      l == k ? "the w^k coefficient keeps a zeta-dependent part"
                             : "limit coefficient exceeds the degree bound");
        continue;
      }
      a[static_cast<std::size_t>(k - l - 1)].push_back(lim(m, l));
    }
  }
  return {make_spectral_euc(k, std::move(a)), ex.spread};
}

double sigma_residual(const SpectralCurveHyp& c) {
  const int k = c.k;
  std::vector<Complex> coeffs, pulled;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b) {
      coeffs.push_back(c.coeffs(a, b));
      const double sign = (a + b) % 2 == 0 ? 1.0 : -1.0;
      pulled.push_back(sign * std::conj(c.coeffs(k - b, k - a)));
    }
  return min_over_phase(coeffs, pulled);
}

double sigma_residual(const SpectralCurveEuc& c) {
  const int k = c.k;
  std::vector<Complex> coeffs, pulled;
  for (int l = 0; l <= k; ++l)
    for (int mp = 0; mp <= 2 * (k - l); ++mp) {
      const int m = 2 * k - 2 * l - mp;
      const double sign = (m + l) % 2 == 0 ? 1.0 : -1.0;
      coeffs.push_back(c.coeff(mp, l));
      pulled.push_back(sign * std::conj(c.coeff(m, l)));
    }
  return min_over_phase(coeffs, pulled);
}

RationalMap make_rational_map(int k, std::vector<Complex> p, std::vector<Complex> q) {
  if (k < 1) throw Error(ErrorKind::NotBased, "degree must be positive");
  while (!p.empty() && p.back() == Complex{}) p.pop_back();
  if (static_cast<int>(p.size()) > k) throw Error(ErrorKind::NotBased, "deg p must be < k");
  if (static_cast<int>(q.size()) != k + 1 || std::abs(q.back() - 1.0) > 1e-12)
    throw Error(ErrorKind::NotBased, "q must be monic of degree k");
  for (const Complex z : p)
    if (!finite(z)) throw Error(ErrorKind::InvalidArgument, "non-finite coefficient");
  for (const Complex z : q)
    if (!finite(z)) throw Error(ErrorKind::InvalidArgument, "non-finite coefficient");
  q.back() = 1.0;
  return {k, std::move(p), std::move(q)};
}

std::vector<std::pair<Complex, Complex>> rational_map_pole_data(const RationalMap& r) {
  auto roots = poly_roots(r.q);
  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
    return std::pair(x.real(), x.imag()) < std::pair(y.real(), y.imag());
  });
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) <= 1e-8) throw Error(ErrorKind::NonSimplePoles, "q has a repeated root");

  double pscale = 1.0;
  for (const Complex z : r.p) pscale = std::max(pscale, std::abs(z));
  std::vector<std::pair<Complex, Complex>> out;
  for (const Complex eta : roots) {
    const Complex value = poly_eval(r.p, eta);
    const double size = pscale * std::pow(std::max(1.0, std::abs(eta)), std::max<int>(0, static_cast<int>(r.p.size()) - 1));
    if (std::abs(value) <= 1e-10 * size) throw Error(ErrorKind::NotCoprime, "p vanishes at a pole of q");
    out.emplace_back(eta, value);
  }
  return out;
}

}  // namespace twistor::monopole

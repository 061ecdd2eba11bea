#include "doctest.h"

#include <cmath>

#include "support.hpp"
#include "twistor/error.hpp"
#include "twistor/extrapolate.hpp"
#include "twistor/minitwistor.hpp"
#include "twistor/monopole.hpp"

using namespace twistor;
using namespace twistor::monopole;
using testing_support::Rng;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

std::vector<SpectralCurveHyp> point_family(minitwistor::SpacePoint s, int from = 3, int to = 12) {
  std::vector<SpectralCurveHyp> f;
  for (int n = from; n <= to; ++n) {
    s.t = std::ldexp(1.0, -n);
    f.push_back(to_spectral(minitwistor::point_to_curve11(s)));
  }
  return f;
}

}  // namespace

TEST_CASE("bundle cocycle examples") {
  CHECK(bundle_cocycle(0, 0, 0, 0.3, Complex(0.2, 1.1), Complex(-0.4, 0.1)) == Complex(1.0));
  CHECK(bundle_cocycle(0, 0, 0, 0.0, Complex(0.2, 1.1), Complex(-0.4, 0.1)) == Complex(1.0));
  CHECK(std::abs(bundle_cocycle(1, 0, 0, 1.0, 1.0, 1.0) - 0.5) < 1e-15);

  double prev = 1.0;
  for (int n = 3; n <= 10; ++n) {
    const double t = std::ldexp(1.0, -n);
    const double err = std::abs(bundle_cocycle(1, 0, 0, t, 1.0, 1.0) - std::exp(-1.0));
    CHECK(err < prev);
    CHECK(err <= t);  // (1 + t)^(-1/t) - e^-1 ~ e^-1 t / 2
    prev = err;
  }
  CHECK(kind_of([] { bundle_cocycle(1, 0, 0, 1.0, 0.0, 1.0); }) == ErrorKind::ZeroZeta);
  CHECK(kind_of([] { bundle_cocycle(1, 0, 0, 1.0, 1.0, -2.0); }) == ErrorKind::BranchCut);
  CHECK(kind_of([] { bundle_cocycle(1, 0, 0, 1.0, 1.0, -1.0); }) == ErrorKind::BranchCut);
  CHECK(kind_of([] { bundle_cocycle(1, 0, 0, -1.0, 1.0, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("property: cocycle multiplicativity and O(a,b) degeneration") {
  Rng rng(51);
  for (int i = 0; i < 200; ++i) {
    const Complex zeta = rng.unit_complex();
    const Complex w = rng.uniform(0.0, 1.0) * rng.unit_complex();
    const double t = rng.uniform(0.0, 0.25);
    const double s1 = rng.uniform(-3, 3), s2 = rng.uniform(-3, 3);
    const int a1 = static_cast<int>(rng.uniform(-4, 4)), a2 = static_cast<int>(rng.uniform(-4, 4));
    const int b1 = static_cast<int>(rng.uniform(-4, 4)), b2 = static_cast<int>(rng.uniform(-4, 4));
    const Complex lhs = bundle_cocycle(s1 + s2, a1 + a2, b1 + b2, t, zeta, w);
    const Complex rhs = bundle_cocycle(s1, a1, b1, t, zeta, w) * bundle_cocycle(s2, a2, b2, t, zeta, w);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
  const Complex zeta(0.6, 0.8), w(0.3, -0.2);
  for (const auto [a, b] : {std::pair{2, -1}, std::pair{-3, 1}, std::pair{1, 1}}) {
    const Complex target = std::pow(zeta, a + b);
    double prev = 1e300;
    for (int n = 3; n <= 12; ++n) {
      const double err = std::abs(bundle_cocycle(0, a, b, std::ldexp(1.0, -n), zeta, w) - target);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-3);
    CHECK(std::abs(bundle_cocycle(0, a, b, 0.0, zeta, w) - target) < 1e-14);
  }
}

TEST_CASE("property: cocycle converges linearly in t") {
  Rng rng(52);
  for (const double s : {1.0, 2.0, 5.0}) {
    std::vector<double> ts, errs;
    for (int n = 3; n <= 10; ++n) {
      const double t = std::ldexp(1.0, -n);
      double worst = 0.0;
      for (int k = 0; k < 32; ++k) {
        const Complex zeta = std::polar(1.0, 2 * M_PI * k / 32);
        for (const double rad : {0.25, 0.5, 1.0}) {
          const Complex w = std::polar(rad, 0.3 + 2 * M_PI * k / 32 * 3);
          worst = std::max(worst, std::abs(bundle_cocycle(s, 0, 0, t, zeta, w) - std::exp(-s * w / zeta)));
        }
      }
      ts.push_back(t);
      errs.push_back(worst);
    }
    CHECK(loglog_slope(ts, errs) == doctest::Approx(1.0).epsilon(0.2));
  }
}

TEST_CASE("euclid_limit examples") {
  const auto lim = euclid_limit(point_family({1, 2, 3, 0})).curve;
  const auto c = to_euclid_curve1(lim);
  CHECK(std::abs(c.A00 - Complex(1, 2)) < 1e-10);
  CHECK(std::abs(c.A10 - 6.0) < 1e-10);
  CHECK(std::abs(c.A11 - Complex(-1, 2)) < 1e-10);

  const auto origin = to_euclid_curve1(euclid_limit(point_family({0, 0, 0, 0})).curve);
  CHECK(std::abs(origin.A00) < 1e-12);
  CHECK(std::abs(origin.A10) < 1e-12);
  CHECK(std::abs(origin.A11) < 1e-12);

  auto divergent = point_family({0, 0, 1, 0});
  for (auto& h : divergent) {
    h.coeffs(0, 0) = 1.0 / h.t;
    h.coeffs(1, 1) = -1.0 / h.t;
  }
  CHECK(kind_of([&] { euclid_limit(divergent); }) == ErrorKind::NoLimit);

  // 1 + zeta eta / t has w-coefficient zeta after substitution, zero at zeta = 0
  std::vector<SpectralCurveHyp> tilted;
  for (int n = 3; n <= 10; ++n) {
    const double t = std::ldexp(1.0, -n);
    CMatrix g(2, 2);
    g << 1.0, 0.0, 0.0, 1.0 / t;
    tilted.push_back(make_spectral_hyp(1, t, g));
  }
  CHECK(kind_of([&] { euclid_limit(tilted); }) == ErrorKind::DegenerateLeading);
}

TEST_CASE("euclid_limit for charge 2 products of point curves") {
  // The product of two charge-1 curves converges to the product of the limits.
  const minitwistor::SpacePoint p{0.5, -1, 2, 0}, q{-1, 0.25, -0.5, 0};
  std::vector<SpectralCurveHyp> fam;
  for (int n = 3; n <= 12; ++n) {
    const double t = std::ldexp(1.0, -n);
    const auto a = to_spectral(minitwistor::point_to_curve11({p.x, p.y, p.z, t})).coeffs;
    const auto b = to_spectral(minitwistor::point_to_curve11({q.x, q.y, q.z, t})).coeffs;
    CMatrix g = CMatrix::Zero(3, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) g(i + k, j + l) += a(i, j) * b(k, l);
    fam.push_back(make_spectral_hyp(2, t, g));
  }
  const auto lim = euclid_limit(fam).curve;
  const auto ep = minitwistor::point_to_euclid(p), eq = minitwistor::point_to_euclid(q);
  // (w - f)(w - g) = w^2 - (f + g) w + f g
  const std::vector<Complex> f{ep.A00, ep.A10, ep.A11}, g{eq.A00, eq.A10, eq.A11};
  for (int m = 0; m <= 2; ++m) CHECK(std::abs(lim.coeff(m, 1) + f[m] + g[m]) < 1e-8);
  for (int m = 0; m <= 4; ++m) {
    Complex fg{};
    for (int i = 0; i <= 2; ++i)
      if (m - i >= 0 && m - i <= 2) fg += f[i] * g[m - i];
    CHECK(std::abs(lim.coeff(m, 0) - fg) < 1e-8);
  }
  CHECK(sigma_residual(lim) <= 1e-9);
}

TEST_CASE("sigma residual examples") {
  CHECK(sigma_residual(to_spectral(minitwistor::point_to_curve11({0, 0, 1, 1}))) <= 1e-12);
  CHECK(sigma_residual(to_spectral(minitwistor::EuclidCurve1{1.0, 0.0, -1.0})) <= 1e-12);
  CHECK(sigma_residual(to_spectral(minitwistor::EuclidCurve1{0.0, 0.0, 1.0})) == doctest::Approx(1.0).epsilon(1e-9));

  Rng rng(53);
  for (int i = 0; i < 50; ++i) {
    const minitwistor::SpacePoint s{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-0.4, 3), rng.uniform(0.1, 2)};
    CHECK(sigma_residual(to_spectral(minitwistor::point_to_curve11(s))) <= 1e-9);
    CHECK(sigma_residual(to_spectral(minitwistor::point_to_euclid({s.x, s.y, s.z, 0}))) <= 1e-9);
  }
}

TEST_CASE("rational map pole data") {
  const auto one = rational_map_pole_data(make_rational_map(1, {1.0}, {0.0, 1.0}));
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one[0].first) < 1e-15);
  CHECK(std::abs(one[0].second - 1.0) < 1e-15);

  const auto two = rational_map_pole_data(make_rational_map(2, {1.0}, {-1.0, 0.0, 1.0}));
  REQUIRE(two.size() == 2);
  CHECK(std::abs(two[0].first + 1.0) < 1e-12);
  CHECK(std::abs(two[1].first - 1.0) < 1e-12);
  CHECK(std::abs(two[0].second - 1.0) < 1e-12);

  CHECK(kind_of([] { rational_map_pole_data(make_rational_map(2, {1.0}, {0.0, 0.0, 1.0})); }) ==
        ErrorKind::NonSimplePoles);
  CHECK(kind_of([] { make_rational_map(1, {1.0, 1.0}, {0.0, 1.0}); }) == ErrorKind::NotBased);
  CHECK(kind_of([] { make_rational_map(1, {1.0}, {0.0, 2.0}); }) == ErrorKind::NotBased);
  // p = z - 1 shares the root 1 with q = z^2 - 1
  CHECK(kind_of([] { rational_map_pole_data(make_rational_map(2, {-1.0, 1.0}, {-1.0, 0.0, 1.0})); }) ==
        ErrorKind::NotCoprime);
}

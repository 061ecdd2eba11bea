#pragma once

// Cohomology of cokernels of maps between sums of line bundles on
// P^1 x P^1, computed with explicit monomial bases.
//
// H^0(P^1, O(d)) has basis x0^a x1^b with a, b >= 0, a + b = d.
// H^1(P^1, O(d)) has basis x0^a x1^b with a, b <= -1, a + b = d (the Cech
// Laurent window). Multiplying by a monomial with nonnegative exponents
// maps each window into itself after discarding terms that leave it.
// Products use the Kunneth decomposition H^k = sum_{i+j=k} H^i (x) H^j.

#include <optional>
#include <vector>

#include "twistor/polymat.hpp"

namespace twistor::sheaf {

struct Monomial {
  int e0 = 0;
  int e1 = 0;
  int degree() const { return e0 + e1; }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

int h0_p1(int d);
int h1_p1(int d);

/// Basis of H^type(P^1, O(d)), type in {0, 1}, ordered by e0 descending.
std::vector<Monomial> p1_basis(int d, int type);

/// m * by, projected to the type's window; nullopt when the product leaves it.
std::optional<Monomial> multiply(const Monomial& m, const Monomial& by, int type);

struct LineBundle {
  int a = 0;  ///< degree along the zeta factor
  int b = 0;  ///< degree along the eta factor
};

/// One monomial term coeff * zeta^(zeta) * eta^(eta) of a bihomogeneous entry.
struct Term {
  Complex coeff;
  Monomial zeta;
  Monomial eta;
};

/// A map sum_c source[c] -> sum_r target[r]; entry(r, c) must be
/// bihomogeneous of bidegree target[r] - source[c].
class BundleMap {
 public:
  BundleMap(std::vector<LineBundle> source, std::vector<LineBundle> target);

  const std::vector<LineBundle>& source() const { return source_; }
  const std::vector<LineBundle>& target() const { return target_; }

  void add_term(int row, int col, const Term& term);
  const std::vector<Term>& entry(int row, int col) const;

  BundleMap twisted(int a, int b) const;

  /// The induced map H^zeta_type (x) H^eta_type(source) -> same(target).
  /// Basis order: zeta exponent e0 descending, then eta e0 descending,
  /// then summand index.
  CMatrix cohomology_matrix(int zeta_type, int eta_type) const;

 private:
  std::vector<LineBundle> source_;
  std::vector<LineBundle> target_;
  std::vector<std::vector<Term>> entries_;
};

/// Dimension of H^k of a sum of line bundles on P^1 x P^1.
int bundle_h(const std::vector<LineBundle>& bundles, int k);

/// Holomorphic Euler characteristic sum (a+1)(b+1).
int euler_characteristic(const std::vector<LineBundle>& bundles);

struct CokernelReport {
  int h0 = 0;
  int h1 = 0;
  int rank_h0 = 0;
  int rank_h1 = 0;
  int rank_h2 = 0;
  bool h0_injective = true;   ///< H^0(source) -> H^0(target) injective
  bool h2_surjective = true;  ///< H^2(source) -> H^2(target) surjective
  int euler = 0;              ///< chi(target) - chi(source)
};

/// h^0, h^1 of F = coker(map), assuming the sheaf map is injective, via the
/// long exact sequence. Ranks use singular values above rel_tol * sigma_max.
CokernelReport cokernel_cohomology(const BundleMap& map, double rel_tol = 1e-9);

}  // namespace twistor::sheaf

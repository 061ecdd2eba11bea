#include "twistor/sheaf.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "twistor/error.hpp"

namespace twistor::sheaf {

int h0_p1(int d) { return std::max(d + 1, 0); }
int h1_p1(int d) { return std::max(-d - 1, 0); }

std::vector<Monomial> p1_basis(int d, int type) {
  std::vector<Monomial> out;
  if (type == 0) {
    for (int a = d; a >= 0; --a) out.push_back({a, d - a});
  } else if (type == 1) {
    for (int a = -1; a >= d + 1; --a) out.push_back({a, d - a});
  } else {
    throw Error(ErrorKind::InvalidArgument, "cohomology type on P^1 is 0 or 1");
  }
  return out;
}

std::optional<Monomial> multiply(const Monomial& m, const Monomial& by, int type) {
  const Monomial p{m.e0 + by.e0, m.e1 + by.e1};
  if (type == 0) {
    if (p.e0 < 0 || p.e1 < 0) return std::nullopt;
  } else if (p.e0 > -1 || p.e1 > -1) {
    return std::nullopt;
  }
  return p;
}

BundleMap::BundleMap(std::vector<LineBundle> source, std::vector<LineBundle> target)
    : source_(std::move(source)), target_(std::move(target)), entries_(source_.size() * target_.size()) {}

void BundleMap::add_term(int row, int col, const Term& term) {
  if (row < 0 || col < 0 || row >= static_cast<int>(target_.size()) || col >= static_cast<int>(source_.size()))
    throw Error(ErrorKind::InvalidArgument, "bundle map entry index out of range");
  if (term.zeta.e0 < 0 || term.zeta.e1 < 0 || term.eta.e0 < 0 || term.eta.e1 < 0)
    throw Error(ErrorKind::InvalidArgument, "map terms must be polynomial");
  const auto& s = source_[static_cast<std::size_t>(col)];
  const auto& t = target_[static_cast<std::size_t>(row)];
  if (term.zeta.degree() != t.a - s.a || term.eta.degree() != t.b - s.b)
    throw Error(ErrorKind::InvalidArgument, "map term has the wrong bidegree");
  if (term.coeff == Complex{}) return;
  entries_[static_cast<std::size_t>(row) * source_.size() + static_cast<std::size_t>(col)].push_back(term);
}

const std::vector<Term>& BundleMap::entry(int row, int col) const {
  return entries_.at(static_cast<std::size_t>(row) * source_.size() + static_cast<std::size_t>(col));
}

BundleMap BundleMap::twisted(int a, int b) const {
  auto shift = [&](std::vector<LineBundle> v) {
    for (auto& l : v) {
      l.a += a;
      l.b += b;
    }
    return v;
  };
  BundleMap out(shift(source_), shift(target_));
  out.entries_ = entries_;
  return out;
}

namespace {

struct BasisElement {
  int summand;
  Monomial zeta;
  Monomial eta;
};

std::vector<BasisElement> product_basis(const std::vector<LineBundle>& bundles, int zt, int et) {
  std::vector<BasisElement> out;
  for (int s = 0; s < static_cast<int>(bundles.size()); ++s) {
    const auto& l = bundles[static_cast<std::size_t>(s)];
    for (const auto& mz : p1_basis(l.a, zt))
      for (const auto& me : p1_basis(l.b, et)) out.push_back({s, mz, me});
  }
  std::stable_sort(out.begin(), out.end(), [](const BasisElement& x, const BasisElement& y) {
    return std::tuple(-x.zeta.e0, -x.eta.e0, x.summand) < std::tuple(-y.zeta.e0, -y.eta.e0, y.summand);
  });
  return out;
}

using Key = std::tuple<int, int, int, int, int>;

Key key_of(const BasisElement& b) { return {b.summand, b.zeta.e0, b.zeta.e1, b.eta.e0, b.eta.e1}; }

}  // namespace

CMatrix BundleMap::cohomology_matrix(int zeta_type, int eta_type) const {
  const auto src = product_basis(source_, zeta_type, eta_type);
  const auto tgt = product_basis(target_, zeta_type, eta_type);
  std::map<Key, Eigen::Index> index;
  for (std::size_t i = 0; i < tgt.size(); ++i) index[key_of(tgt[i])] = static_cast<Eigen::Index>(i);

  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(tgt.size()), static_cast<Eigen::Index>(src.size()));
  for (std::size_t c = 0; c < src.size(); ++c) {
    const auto& b = src[c];
    for (int row = 0; row < static_cast<int>(target_.size()); ++row) {
      for (const auto& term : entry(row, b.summand)) {
        const auto mz = multiply(b.zeta, term.zeta, zeta_type);
        const auto me = multiply(b.eta, term.eta, eta_type);
        if (!mz || !me) continue;
        const auto it = index.find(Key{row, mz->e0, mz->e1, me->e0, me->e1});
        if (it == index.end()) throw Error(ErrorKind::InvalidArgument, "product left the target basis");
        m(it->second, static_cast<Eigen::Index>(c)) += term.coeff;
      }
    }
  }
  return m;
}

int bundle_h(const std::vector<LineBundle>& bundles, int k) {
  int total = 0;
  for (const auto& l : bundles) {
    const int h0a = h0_p1(l.a), h1a = h1_p1(l.a), h0b = h0_p1(l.b), h1b = h1_p1(l.b);
    if (k == 0) total += h0a * h0b;
    if (k == 1) total += h0a * h1b + h1a * h0b;
    if (k == 2) total += h1a * h1b;
  }
  return total;
}

int euler_characteristic(const std::vector<LineBundle>& bundles) {
  int chi = 0;
  for (const auto& l : bundles) chi += (l.a + 1) * (l.b + 1);
  return chi;
}

CokernelReport cokernel_cohomology(const BundleMap& map, double rel_tol) {
  auto rank_of = [&](int zt, int et) {
    const CMatrix m = map.cohomology_matrix(zt, et);
    if (m.rows() == 0 || m.cols() == 0) return 0;
    return numerical_rank(m, rel_tol);
  };
  CokernelReport r;
  r.rank_h0 = rank_of(0, 0);
  r.rank_h1 = rank_of(1, 0) + rank_of(0, 1);
  r.rank_h2 = rank_of(1, 1);

  const int e0 = bundle_h(map.source(), 0), e1 = bundle_h(map.source(), 1), e2 = bundle_h(map.source(), 2);
  const int g0 = bundle_h(map.target(), 0), g1 = bundle_h(map.target(), 1), g2 = bundle_h(map.target(), 2);

  // 0 -> H0(E) -> H0(G) -> H0(F) -> H1(E) -> H1(G) -> H1(F) -> H2(E) -> H2(G) -> 0
  r.h0 = (g0 - r.rank_h0) + (e1 - r.rank_h1);
  r.h1 = (g1 - r.rank_h1) + (e2 - r.rank_h2);
  r.h0_injective = r.rank_h0 == e0;
  r.h2_surjective = r.rank_h2 == g2;
  r.euler = euler_characteristic(map.target()) - euler_characteristic(map.source());
  return r;
}

}  // namespace twistor::sheaf

#include "twistor/lhc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "twistor/error.hpp"
#include "twistor/extrapolate.hpp"
#include "twistor/sheaf.hpp"

namespace twistor::lhc {

namespace {

void require_base(const CMatrix& X0) {
  if (X0.rows() == 0 || X0.rows() != X0.cols()) throw Error(ErrorKind::NonSquare, "X0 must be a nonempty square matrix");
  if (!all_finite(X0) || max_norm(X0.conjugate() * X0 + identity(static_cast<int>(X0.rows()))) > kBaseTol)
    throw Error(ErrorKind::NotHypercomplexBase, "conj(X0) X0 = -I fails");
}

std::vector<Complex> flatten(const CMatrix& a, const CMatrix& b) {
  std::vector<Complex> out(a.data(), a.data() + a.size());
  out.insert(out.end(), b.data(), b.data() + b.size());
  return out;
}

Complex determinant(const CMatrix& m) { return m.partialPivLu().determinant(); }

}  // namespace

LHCData make_lhc(CMatrix X0, CMatrix P, CMatrix Q) {
  require_base(X0);
  if (P.rows() != X0.rows() || P.cols() != X0.cols() || Q.rows() != X0.rows() || Q.cols() != X0.cols())
    throw Error(ErrorKind::InvalidArgument, "X0, P, Q must share one shape");
  if (!all_finite(P) || !all_finite(Q)) throw Error(ErrorKind::InvalidArgument, "non-finite P or Q");
  return {static_cast<int>(X0.rows()), std::move(X0), std::move(P), std::move(Q)};
}

CMatrix ATilde::eval(Complex zeta) const { return c0 + zeta * c1 + (zeta * zeta) * c2; }

CMatrix ATilde::conj_value(const CMatrix& value) const {
  if (!base) return value.conjugate();
  return *base * value.conjugate() * base->inverse();
}

ATilde a_tilde(const LHCData& d) {
  require_base(d.X0);
  const CMatrix Xb = d.X0.conjugate();
  ATilde a;
  a.c0 = -d.Q.conjugate() * d.X0;
  a.c1 = Xb * d.P + d.P.conjugate() * d.X0;
  a.c2 = Xb * d.Q;
  a.base = Xb;
  return a;
}

ScalarPoly2 char_poly_l(const ATilde& a) {
  const int n = static_cast<int>(a.c0.rows());
  MatPoly2 m(n, n, 2, 1, SecondVar::W);
  m.set_coeff(0, 0, -a.c0);
  m.set_coeff(1, 0, -a.c1);
  m.set_coeff(2, 0, -a.c2);
  m.set_coeff(0, 1, identity(n));
  ScalarPoly2 p = det2(m, std::pair{2 * n, n});
  // The w^(n-k) coefficient has zeta-degree <= 2k; w^n is exactly 1.
  for (int k = 0; k <= n; ++k)
    for (int i = 2 * k + 1; i <= 2 * n; ++i) p.set_coeff(i, n - k, 0.0);
  p.set_coeff(0, n, 1.0);
  return p;
}

ScalarPoly2 char_poly_l(const LHCData& d) { return char_poly_l(a_tilde(d)); }

double reality_residual(const ATilde& a, int samples) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be positive");
  double worst = 0.0;
  for (const double radius : {0.5, 1.0, 2.0}) {
    for (int j = 0; j < samples; ++j) {
      const Complex z = std::polar(radius, 2.0 * std::numbers::pi * j / samples);
      const Complex zb = std::conj(z);
      const CMatrix lhs = a.eval(-1.0 / zb);
      const CMatrix rhs = a.conj_value(a.eval(z)) / (zb * zb);
      worst = std::max(worst, max_norm(lhs + rhs));
    }
  }
  return worst;
}

double curve_limit_residual(const CMatrix& Xt, const CMatrix& Yt, double t, const ATilde& limit) {
  const int n = static_cast<int>(Xt.rows());
  const CMatrix Xb = Xt.conjugate();
  const CMatrix Yb = Yt.conjugate();
  const CMatrix I = identity(n);
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  static constexpr std::array<Complex, 6> kW{Complex{0, 0}, Complex{1, 0}, Complex{-1, 0},
                                             Complex{0, 1}, Complex{0, -1}, Complex{0.5, 0.5}};
  double worst = 0.0;
  for (const double radius : {0.5, 1.0}) {
    for (int j = 0; j < 6; ++j) {
      const Complex zeta = std::polar(radius, 2.0 * std::numbers::pi * j / 6.0 + 0.1);
      const CMatrix a = limit.eval(zeta);
      for (const Complex w : kW) {
        const Complex eta = zeta + t * w;
        const CMatrix C = (eta * Xb - Yb) * (Xt + zeta * Yt) + zeta * I;
        const Complex chi = determinant(C) / std::pow(t, n);
        const Complex expected = sign * determinant(w * I - a);
        worst = std::max(worst, std::abs(chi - expected));
      }
    }
  }
  return worst;
}

LimitResult extract_limit(const FamilySampler& f, std::span<const double> steps) {
  if (steps.size() < 4) throw Error(ErrorKind::InvalidArgument, "extract_limit needs at least four steps");
  const auto [X0, Y0] = f(0.0);
  if (X0.rows() == 0 || X0.rows() != X0.cols() || Y0.rows() != X0.rows() || Y0.cols() != X0.cols())
    throw Error(ErrorKind::InvalidArgument, "sampler returned malformed matrices at t = 0");
  const int n = static_cast<int>(X0.rows());
  if (max_norm(Y0) > kBaseTol || max_norm(X0.conjugate() * X0 + identity(n)) > kBaseTol)
    throw Error(ErrorKind::NotHypercomplexBase, "the family at t = 0 is not hypercomplex");

  std::vector<std::pair<CMatrix, CMatrix>> values;
  std::vector<std::vector<Complex>> quotients;
  for (const double t : steps) {
    auto v = f(t);
    if (v.first.rows() != n || v.first.cols() != n || v.second.rows() != n || v.second.cols() != n)
      throw Error(ErrorKind::InvalidArgument, "sampler changed matrix shape");
    quotients.push_back(flatten((v.first - X0) / t, v.second / t));
    values.push_back(std::move(v));
  }
  const Extrapolation ex = extrapolate_default(steps, quotients);
  require_stable(ex, 1e-6, "difference quotients (X_t - X_0)/t, Y_t/t");

  const Eigen::Map<const CMatrix> P(ex.limit.data(), n, n);
  const Eigen::Map<const CMatrix> Q(ex.limit.data() + n * n, n, n);
  LimitResult out{make_lhc(X0, P, Q), {}};
  const ATilde a = a_tilde(out.data);

  auto& diag = out.diagnostics;
  diag.steps.assign(steps.begin(), steps.end());
  diag.richardson_spread = ex.spread;
  for (std::size_t k = 0; k < steps.size(); ++k)
    diag.curve_residual.push_back(curve_limit_residual(values[k].first, values[k].second, steps[k], a));
  diag.order = loglog_slope(diag.steps, diag.curve_residual);
  return out;
}

// ---------------------------------------------------------------------------
// Graded cohomology on TP^1. Sections of the pullback of O(c) split by fibre
// degree k into H^i(P^1, O(c - 2k)); A~ keeps k, w raises it by one.

namespace {

struct GradedBasis {
  int k;
  int copy;
  sheaf::Monomial mono;
};

std::vector<GradedBasis> graded_basis(int n, int degree0, int pieces, int type) {
  std::vector<GradedBasis> out;
  for (int k = 0; k < pieces; ++k)
    for (int copy = 0; copy < n; ++copy)
      for (const auto& m : sheaf::p1_basis(degree0 - 2 * k, type)) out.push_back({k, copy, m});
  return out;
}

// Rank of the graded map by elimination from the top fibre degree down:
// column block k (source piece k) is pivoted on its w-shift image in target
// piece k + 1, which only meets column blocks k and k + 1. When every pivot
// block has full rank all columns are eliminated; otherwise fall back to
// the rank of the whole matrix.
int graded_rank(const CMatrix& mat, const std::vector<GradedBasis>& src, const std::vector<GradedBasis>& tgt) {
  int rank = 0;
  for (std::size_t c0 = 0; c0 < src.size();) {
    std::size_t c1 = c0;
    while (c1 < src.size() && src[c1].k == src[c0].k) ++c1;
    std::vector<Eigen::Index> rows;
    for (std::size_t r = 0; r < tgt.size(); ++r)
      if (tgt[r].k == src[c0].k + 1) rows.push_back(static_cast<Eigen::Index>(r));
    const auto cols = static_cast<Eigen::Index>(c1 - c0);
    CMatrix pivot(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) pivot.row(static_cast<Eigen::Index>(r)) = mat.row(rows[r]).segment(static_cast<Eigen::Index>(c0), cols);
    const int r = numerical_rank(pivot);
    if (r < cols) return numerical_rank(mat);
    rank += r;
    c0 = c1;
  }
  return rank;
}

}  // namespace

PushforwardCohomology pushforward_cohomology_at(const ATilde& a, int n, int m, int cutoff) {
  if (cutoff < 1) throw Error(ErrorKind::InvalidArgument, "cutoff must be positive");
  // w -> mu w is an automorphism of TP^1 taking coker(A~ - w) to
  // coker(A~/mu - w). With mu past twice the norm of A~ the shift dominates
  // and the singular values stay above 1/2.
  const auto norm2 = [](const CMatrix& c) { return c.size() ? Eigen::BDCSVD<CMatrix>(c).singularValues()(0) : 0.0; };
  const double mu = std::max(1.0, 2.0 * (norm2(a.c0) + norm2(a.c1) + norm2(a.c2)));
  const CMatrix s0 = a.c0 / mu, s1 = a.c1 / mu, s2 = a.c2 / mu;
  const std::array<std::pair<sheaf::Monomial, const CMatrix*>, 3> quad{
      {{{2, 0}, &s0}, {{1, 1}, &s1}, {{0, 2}, &s2}}};

  int rank[2] = {0, 0};
  int dim_source[2] = {0, 0};
  int dim_target[2] = {0, 0};
  for (int type = 0; type < 2; ++type) {
    const auto src = graded_basis(n, m - 1, cutoff, type);
    const auto tgt = graded_basis(n, m + 1, cutoff + 1, type);
    dim_source[type] = static_cast<int>(src.size());
    dim_target[type] = static_cast<int>(tgt.size());
    if (src.empty() || tgt.empty()) continue;

    std::map<std::tuple<int, int, int>, Eigen::Index> index;
    for (std::size_t i = 0; i < tgt.size(); ++i) index[{tgt[i].k, tgt[i].copy, tgt[i].mono.e0}] = static_cast<Eigen::Index>(i);

    CMatrix mat = CMatrix::Zero(static_cast<Eigen::Index>(tgt.size()), static_cast<Eigen::Index>(src.size()));
    for (std::size_t c = 0; c < src.size(); ++c) {
      const auto& b = src[c];
      const auto col = static_cast<Eigen::Index>(c);
      for (const auto& [mono, coeff] : quad) {
        const auto prod = sheaf::multiply(b.mono, mono, type);
        if (!prod) continue;
        for (int row = 0; row < n; ++row) {
          const Complex v = (*coeff)(row, b.copy);
          if (v != Complex{}) mat(index.at({b.k, row, prod->e0}), col) += v;
        }
      }
      mat(index.at({b.k + 1, b.copy, b.mono.e0}), col) -= 1.0;
    }
    rank[type] = graded_rank(mat, src, tgt);
  }

  PushforwardCohomology out;
  out.cutoff = cutoff;
  out.h0 = (dim_target[0] - rank[0]) + (dim_source[1] - rank[1]);
  out.h1 = dim_target[1] - rank[1];
  return out;
}

PushforwardCohomology pushforward_cohomology(const LHCData& d, int m) {
  if (m < -4 || m > 4) throw Error(ErrorKind::InvalidArgument, "twist must satisfy |m| <= 4");
  const ATilde a = a_tilde(d);
  const int cutoff = std::max(4, std::abs(m) + 2);
  const auto first = pushforward_cohomology_at(a, d.n, m, cutoff);
  const auto second = pushforward_cohomology_at(a, d.n, m, 2 * cutoff);
  if (first.h0 != second.h0 || first.h1 != second.h1)
    throw Error(ErrorKind::TruncationUnstable, "cohomology changed between cutoffs");
  return first;
}

// ---------------------------------------------------------------------------

CMatrix model_j(int n) {
  CMatrix j = CMatrix::Zero(2 * n, 2 * n);
  j.topLeftCorner(n, n) = Complex{0, 1} * identity(n);
  j.bottomRightCorner(n, n) = Complex{0, -1} * identity(n);
  return j;
}

CMatrix model_j_prime(int n) {
  CMatrix j = CMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -identity(n);
  j.bottomLeftCorner(n, n) = identity(n);
  return j;
}

ReconstructionReport reconstruct_A(const LHCData& d, Complex zeta0, double tol) {
  const ATilde a = a_tilde(d);
  const int n = d.n;
  const CMatrix value = a.eval(zeta0);

  // A~(zeta0) = 0 rebuilds to zero whatever projectors are used.
  std::vector<SpectralPair> spectrum;
  if (max_norm(value) <= tol)
    spectrum.push_back({Complex{}, identity(n)});
  else
    spectrum = spectral_data(value, tol);

  // Scalars act J-complex-linearly: w on the (1,0) summand, conj(w) on (0,1).
  const CMatrix jp = model_j_prime(n);
  ReconstructionReport rep;
  rep.zeta0 = zeta0;
  rep.a_rec = CMatrix::Zero(2 * n, 2 * n);
  for (const auto& sp : spectrum) {
    CMatrix lifted = CMatrix::Zero(2 * n, 2 * n);
    lifted.topLeftCorner(n, n) = sp.eigenvalue * sp.projector;
    lifted.bottomRightCorner(n, n) = std::conj(sp.eigenvalue) * sp.projector.conjugate();
    rep.a_rec += lifted * jp;
    rep.eigenvalues.push_back(sp.eigenvalue);
  }

  // A(zeta) = P + zeta Q; the block is zeta conj(X0) A(zeta) + zeta conj(A(-1/conj zeta)) X0.
  const CMatrix block = d.X0.conjugate() * (zeta0 * d.P + zeta0 * zeta0 * d.Q) +
                        (zeta0 * d.P.conjugate() - d.Q.conjugate()) * d.X0;
  rep.a_direct = CMatrix::Zero(2 * n, 2 * n);
  rep.a_direct.topRightCorner(n, n) = -block;
  rep.a_direct.bottomLeftCorner(n, n) = block.conjugate();

  rep.residual = max_norm(rep.a_rec - rep.a_direct);
  const CMatrix j = model_j(n);
  rep.anticommutator = max_norm(rep.a_direct * j + j * rep.a_direct);
  rep.ok = rep.residual <= tol;
  return rep;
}

}  // namespace twistor::lhc

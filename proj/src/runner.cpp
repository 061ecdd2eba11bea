#include "twistor/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "twistor/error.hpp"
#include "twistor/extrapolate.hpp"
#include "twistor/lhc.hpp"
#include "twistor/minitwistor.hpp"
#include "twistor/monopole.hpp"
#include "twistor/pluripencil.hpp"

namespace twistor::cli {

namespace {

namespace mt = minitwistor;

constexpr const char* kSuperscripts[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
constexpr const char* kMinus = "−";

std::string superscript(int e) {
  std::string digits = std::to_string(e), out;
  for (const char d : digits) out += kSuperscripts[d - '0'];
  return out;
}

std::string fmt(double x) {
  if (std::abs(x) < 1e-12) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string fmt(Complex z) {
  const double scale = std::max(std::abs(z.real()), std::abs(z.imag()));
  double re = std::abs(z.real()) <= 1e-12 * scale ? 0.0 : z.real();
  double im = std::abs(z.imag()) <= 1e-12 * scale ? 0.0 : z.imag();
  if (std::abs(im) < 1e-12) return fmt(re);
  const std::string imag = (std::abs(std::abs(im) - 1.0) < 1e-12 ? std::string() : fmt(std::abs(im))) + "i";
  if (std::abs(re) < 1e-12) return (im < 0 ? "-" : "") + imag;
  return fmt(re) + (im < 0 ? "-" : "+") + imag;
}

std::string fmt(const CMatrix& m) {
  std::string out = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += r ? ", [" : "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + fmt(m(r, c));
    out += "]";
  }
  return out + "]";
}

std::string csv_row(const std::string& id, Complex zeta, Complex v, double t) {
  return id + "," + shortest(zeta.real()) + "," + shortest(zeta.imag()) + "," + shortest(v.real()) + "," +
         shortest(v.imag()) + "," + shortest(t) + "\n";
}

Complex unit_root(int j, int g) { return std::polar(1.0, 2.0 * std::numbers::pi * j / g); }

struct Outcome {
  bool ok = true;
  std::string failure;  // error kind or failed check
  std::string body;
  std::string csv;      // rows without header
};

class Block {
 public:
  template <class... Parts>
  void line(const Parts&... parts) {
    body_ += "  ";
    (body_ += ... += parts);
    body_ += "\n";
  }
  std::string take() { return std::move(body_); }

 private:
  std::string body_;
};

bool check(Outcome& o, bool pass, const std::string& name) {
  if (!pass && o.ok) {
    o.ok = false;
    o.failure = name;
  }
  return pass;
}

// ---------------------------------------------------------------------------

Outcome check_pluricomplex(const Task& task) {
  const auto& in = std::get<PencilInput>(task.input);
  const auto p = pluri::make_pencil(in.X, in.Y);
  Outcome o;
  Block b;
  b.line("n = ", std::to_string(p.n));
  const bool hyper = pluri::is_hypercomplex(p, 1e-9);
  const auto rep = pluri::cohomology_report(p);
  const bool vanishing = rep.vanishing();
  b.line("hypercomplex: ", hyper ? "true" : "false", "; char poly = ", format_poly(pluri::char_poly(p)),
         "; vanishing: ", vanishing ? "pass" : "fail");
  for (std::size_t i = 0; i < rep.twists.size(); ++i) {
    const auto& t = rep.twists[i];
    const auto& t2 = rep.f2_twists[i];
    b.line("twist (", std::to_string(t.a), ",", std::to_string(t.b), "): h0 = ", std::to_string(t.h0),
           ", h1 = ", std::to_string(t.h1), "; reduced presentation: h0 = ", std::to_string(t2.h0),
           ", h1 = ", std::to_string(t2.h1));
  }
  b.line("det at twist (-2,0) = ", fmt(rep.criterion_m20.det), "; rank ", std::to_string(rep.criterion_m20.rank));
  b.line("det at twist (0,-2) = ", fmt(rep.criterion_0m2.det), "; rank ", std::to_string(rep.criterion_0m2.rank));
  if (rep.odd_n_warning) b.line("warning: odd n");
  b.line("antidiagonal clearance = ", fmt(pluri::antidiagonal_clearance(p, task.output.grid)));
  for (const auto& r : task.output.require) {
    if (r == "hypercomplex") check(o, hyper, "check hypercomplex");
    if (r == "vanishing") check(o, vanishing, "check vanishing");
  }
  o.body = b.take();
  return o;
}

Outcome char_curve(const Task& task) {
  const auto& in = std::get<PencilInput>(task.input);
  const auto p = pluri::make_pencil(in.X, in.Y);
  if (pluri::is_degenerate(p)) throw Error(ErrorKind::DegeneratePencil, "characteristic polynomial vanishes identically");
  const ScalarPoly2 poly = pluri::char_poly(p).trimmed();
  Outcome o;
  Block b;
  b.line("char poly = ", format_poly(poly));
  b.line("bidegree = (", std::to_string(poly.deg1()), ",", std::to_string(poly.deg2()), ")");
  const int g = task.output.grid;
  std::size_t samples = 0;
  for (int j = 0; j < g; ++j) {
    const Complex zeta = unit_root(j, g);
    std::vector<Complex> eta_poly(static_cast<std::size_t>(poly.deg2() + 1));
    for (int jj = 0; jj <= poly.deg2(); ++jj)
      for (int i = poly.deg1(); i >= 0; --i) eta_poly[jj] = eta_poly[jj] * zeta + poly.coeff(i, jj);
    for (const Complex eta : poly_roots(eta_poly)) {
      o.csv += csv_row(task.id, zeta, eta, 1.0);
      ++samples;
    }
  }
  b.line("samples = ", std::to_string(samples));
  o.body = b.take();
  return o;
}

Outcome limit(const Task& task) {
  const auto& in = std::get<LimitInput>(task.input);
  std::map<double, const FamilyEntry*> by_t;
  for (const auto& e : in.family) by_t[e.t] = &e;
  lhc::FamilySampler f = [&](double t) {
    const auto it = by_t.find(t);
    if (it == by_t.end()) throw Error(ErrorKind::InvalidArgument, "family has no member at the requested t");
    return std::pair{it->second->X, it->second->Y};
  };
  std::vector<double> steps;
  for (auto it = by_t.rbegin(); it != by_t.rend(); ++it)
    if (it->first > 0.0) steps.push_back(it->first);

  const auto res = lhc::extract_limit(f, steps);
  Outcome o;
  Block b;
  b.line("P = ", fmt(res.data.P));
  b.line("Q = ", fmt(res.data.Q));
  b.line("richardson spread = ", fmt(res.diagnostics.richardson_spread));
  for (std::size_t k = 0; k < steps.size(); ++k)
    b.line("r(", fmt(steps[k]), ") = ", fmt(res.diagnostics.curve_residual[k]));
  const double order = res.diagnostics.order;
  b.line("order = ", std::isnan(order) ? std::string("n/a (r = 0)") : fmt(order));
  b.line("limit curve = ", format_poly(lhc::char_poly_l(res.data)));
  if (task.output.min_order && !std::isnan(order))
    check(o, order >= *task.output.min_order, "check min_order");
  o.body = b.take();
  return o;
}

Outcome reconstruct(const Task& task) {
  const auto& in = std::get<ReconstructInput>(task.input);
  const auto d = lhc::make_lhc(in.X0, in.P, in.Q);
  const double tol = task.output.tol.value_or(1e-9);
  const auto rep = lhc::reconstruct_A(d, in.zeta0, tol);
  Outcome o;
  Block b;
  std::string eig;
  for (const Complex w : rep.eigenvalues) eig += (eig.empty() ? "" : ", ") + fmt(w);
  b.line("eigenvalues = [", eig, "]");
  b.line("residual = ", fmt(rep.residual));
  b.line("anticommutator = ", fmt(rep.anticommutator));
  check(o, rep.ok, "check residual");
  o.body = b.take();
  return o;
}

Outcome minitwistor_task(const Task& task) {
  const auto& in = std::get<MinitwistorInput>(task.input);
  const mt::SpacePoint s = in.point;
  const auto curve = mt::point_to_curve(s);
  const auto back = mt::curve_to_point(curve);
  const double err = std::max({std::abs(back.x - s.x), std::abs(back.y - s.y), std::abs(back.z - s.z)});
  const double scale = std::max({1.0, std::abs(s.x), std::abs(s.y), std::abs(s.z)});
  const double tol = task.output.tol.value_or(1e-10);
  const int g = task.output.grid;

  Outcome o;
  Block b;
  if (const auto* c = std::get_if<mt::Curve11>(&curve)) {
    b.line("curve: a00 = ", fmt(c->a00), ", a10 = ", fmt(c->a10), ", a01 = ", fmt(c->a01), ", a11 = ", fmt(c->a11));
    b.line("sigma residual = ", fmt(monopole::sigma_residual(monopole::to_spectral(*c))));
    b.line("conformal factor = ", fmt(mt::conformal_factor(s)));
    for (int j = 0; j < g; ++j) {
      const Complex zeta = unit_root(j, g);
      const Complex den = c->a01 + c->a11 * zeta;
      if (den == Complex{}) continue;
      o.csv += csv_row(task.id, zeta, -(c->a00 + c->a10 * zeta) / den, s.t);
    }
  } else {
    const auto& e = std::get<mt::EuclidCurve1>(curve);
    b.line("curve: w = ", fmt(e.A00), " + (", fmt(e.A10), ")ζ + (", fmt(e.A11), ")ζ²");
    b.line("sigma residual = ", fmt(monopole::sigma_residual(monopole::to_spectral(e))));
    for (int j = 0; j < g; ++j) {
      const Complex zeta = unit_root(j, g);
      o.csv += csv_row(task.id, zeta, e.A00 + e.A10 * zeta + e.A11 * zeta * zeta, 0.0);
    }
  }
  b.line("round trip error = ", fmt(err));
  check(o, err <= tol * scale, "check round trip");
  o.body = b.take();
  return o;
}

Outcome monopole_limit(const Task& task) {
  const auto& in = std::get<MonopoleLimitInput>(task.input);
  std::vector<monopole::SpectralCurveHyp> family = in.family;
  if (in.point) {
    for (const double t : in.steps) {
      mt::SpacePoint s = *in.point;
      s.t = t;
      family.push_back(monopole::to_spectral(mt::point_to_curve11(s)));
    }
  }
  const auto lim = monopole::euclid_limit(family);
  const auto& c = lim.curve;
  Outcome o;
  Block b;
  b.line("charge = ", std::to_string(c.k));
  for (int i = 1; i <= c.k; ++i) {
    std::string coeffs;
    for (const Complex z : c.a[i - 1]) coeffs += (coeffs.empty() ? "" : ", ") + fmt(z);
    b.line("a", std::to_string(i), " = [", coeffs, "]");
  }
  if (c.k == 1) {
    const auto e = monopole::to_euclid_curve1(c);
    b.line("coefficients = (", fmt(e.A00), ", ", fmt(e.A10), ", ", fmt(e.A11), ")");
    if (in.point) {
      const auto expected = mt::point_to_euclid(*in.point);
      const double err = std::max({std::abs(e.A00 - expected.A00), std::abs(e.A10 - expected.A10),
                                   std::abs(e.A11 - expected.A11)});
      b.line("closed-form error = ", fmt(err));
    }
  }
  const double sigma = monopole::sigma_residual(c);
  b.line("richardson spread = ", fmt(lim.spread));
  b.line("sigma residual = ", fmt(sigma));
  check(o, sigma <= task.output.tol.value_or(1e-9), "check sigma residual");

  const int g = task.output.grid;
  for (int j = 0; j < g; ++j) {
    const Complex zeta = unit_root(j, g);
    std::vector<Complex> wpoly(static_cast<std::size_t>(c.k + 1));
    for (int l = 0; l <= c.k; ++l)
      for (int m = 2 * c.k; m >= 0; --m) wpoly[l] = wpoly[l] * zeta + c.coeff(m, l);
    for (const Complex w : poly_roots(wpoly)) o.csv += csv_row(task.id, zeta, w, 0.0);
  }
  o.body = b.take();
  return o;
}

Outcome cocycle(const Task& task) {
  const auto& in = std::get<CocycleInput>(task.input);
  Outcome o;
  Block b;
  const Complex limit = monopole::bundle_cocycle(in.s, in.a, in.b, 0.0, in.zeta, in.w);
  std::vector<double> ts, errs;
  for (const double t : in.ts) {
    const Complex v = monopole::bundle_cocycle(in.s, in.a, in.b, t, in.zeta, in.w);
    b.line("t = ", fmt(t), ": ", fmt(v));
    if (t > 0.0) {
      ts.push_back(t);
      errs.push_back(std::abs(v - limit));
    }
  }
  b.line("t -> 0: ", fmt(limit));
  if (ts.size() >= 2 && std::is_sorted(ts.rbegin(), ts.rend()) &&
      std::adjacent_find(ts.begin(), ts.end()) == ts.end()) {
    const double slope = loglog_slope(ts, errs);
    if (!std::isnan(slope)) b.line("log-log slope = ", fmt(slope));
  }
  o.body = b.take();
  return o;
}

Outcome execute(const Task& task) {
  try {
    switch (task.kind) {
      case TaskKind::CheckPluricomplex: return check_pluricomplex(task);
      case TaskKind::CharCurve: return char_curve(task);
      case TaskKind::Limit: return limit(task);
      case TaskKind::Reconstruct: return reconstruct(task);
      case TaskKind::Minitwistor: return minitwistor_task(task);
      case TaskKind::MonopoleLimit: return monopole_limit(task);
      case TaskKind::Cocycle: return cocycle(task);
    }
    throw Error(ErrorKind::InvalidArgument, "unhandled task kind");
  } catch (const Error& e) {
    Outcome o;
    o.ok = false;
    o.failure = std::string(to_string(e.kind()));
    o.body = "  error: " + std::string(e.what()) + "\n";
    return o;
  } catch (const std::exception& e) {
    Outcome o;
    o.ok = false;
    o.failure = "internal error";
    o.body = "  error: " + std::string(e.what()) + "\n";
    return o;
  }
}

bool write_csv(const std::filesystem::path& target, const std::string& rows, std::string& why) {
  std::error_code ec;
  std::filesystem::create_directories(target.parent_path(), ec);
  std::filesystem::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << kCsvHeader << "\n" << rows;
    out.flush();
    if (!out) {
      why = "cannot write " + tmp.string();
      std::filesystem::remove(tmp, ec);
      return false;
    }
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    why = "cannot rename " + tmp.string() + ": " + ec.message();
    std::filesystem::remove(tmp, ec);
    return false;
  }
  return true;
}

}  // namespace

std::string shortest(double x) {
  if (x == 0.0) x = 0.0;  // drops the sign of -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

std::string format_poly(const ScalarPoly2& p) {
  const char* second = p.second_var() == SecondVar::Eta ? "η" : "w";
  const double scale = p.max_abs();
  if (scale == 0.0) return "0";
  const double tol = 1e-10 * scale;

  // c (zeta - eta)^n with n = total degree
  if (p.second_var() == SecondVar::Eta) {
    const int n = std::max(p.deg1(), p.deg2());
    const Complex c = p.coeff(n, 0);
    if (n > 0 && std::abs(c) > tol) {
      ScalarPoly2 ref(n, n);
      double binom = 1.0;
      for (int j = 0; j <= n; ++j) {
        ref.set_coeff(n - j, j, c * binom * (j % 2 ? -1.0 : 1.0));
        binom = binom * (n - j) / (j + 1);
      }
      if (p.max_diff(ref) <= tol) {
        const std::string base = std::string("(ζ") + kMinus + "η)" + (n > 1 ? superscript(n) : "");
        return std::abs(c - 1.0) <= tol ? base : "(" + fmt(c) + ")" + base;
      }
    }
  }

  std::string out;
  for (int j = p.deg2(); j >= 0; --j)
    for (int i = p.deg1(); i >= 0; --i) {
      Complex c = p.coeff(i, j);
      if (std::abs(c) <= tol) continue;
      std::string mono;
      if (i > 0) mono += std::string("ζ") + (i > 1 ? superscript(i) : "");
      if (j > 0) mono += std::string(second) + (j > 1 ? superscript(j) : "");
      bool negative = false;
      if (std::abs(c.imag()) <= tol && c.real() < 0) {
        negative = true;
        c = -c;
      }
      std::string coeff;
      if (std::abs(c.imag()) <= tol) {
        coeff = (std::abs(c.real() - 1.0) <= tol && !mono.empty()) ? "" : fmt(c.real());
      } else {
        coeff = "(" + fmt(c) + ")";
      }
      if (out.empty()) {
        out = (negative ? kMinus : "") + coeff + mono;
      } else {
        out += std::string(negative ? " " + std::string(kMinus) + " " : " + ") + coeff + mono;
      }
    }
  return out;
}

RunResult run(const Manifest& m, const RunOptions& opts) {
  std::vector<Outcome> outcomes(m.tasks.size());
  if (opts.parallel && m.tasks.size() > 1) {
    std::atomic<std::size_t> next{0};
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(m.tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < m.tasks.size(); i = next++) outcomes[i] = execute(m.tasks[i]);
      });
    for (auto& t : pool) t.join();
  } else {
    for (std::size_t i = 0; i < m.tasks.size(); ++i) outcomes[i] = execute(m.tasks[i]);
  }

  // Single collection point: files and report in manifest order.
  RunResult result;
  std::string first_failure;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < m.tasks.size(); ++i) {
    const Task& task = m.tasks[i];
    Outcome& o = outcomes[i];
    if (task.output.csv) {
      const auto target = opts.out_dir / *task.output.csv;
      std::error_code ec;
      if (o.ok) {
        std::string why;
        if (write_csv(target, o.csv, why)) {
          o.body += "  csv: " + *task.output.csv + "\n";
        } else {
          o.ok = false;
          o.failure = "csv";
          o.body += "  error: " + why + "\n";
        }
      }
      if (!o.ok) std::filesystem::remove(target, ec);
    }
    result.report += "[" + task.id + "] " + std::string(kind_name(task.kind)) + "\n" + o.body;
    result.report += o.ok ? "  status: ok\n" : "  status: FAILED (" + o.failure + ")\n";
    if (o.ok) {
      ++ok;
    } else if (first_failure.empty()) {
      first_failure = task.id + " (" + o.failure + ")";
    }
  }
  result.report += "summary: " + std::to_string(ok) + "/" + std::to_string(m.tasks.size()) + " tasks ok\n";
  if (!first_failure.empty()) result.report += "first failing task: " + first_failure + "\n";
  result.exit_code = first_failure.empty() ? 0 : 1;
  return result;
}

}  // namespace twistor::cli

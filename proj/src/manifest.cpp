#include "twistor/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "twistor/error.hpp"

namespace twistor::cli {

using json = nlohmann::json;

namespace {

struct KindInfo {
  TaskKind kind;
  std::string_view name;
  std::vector<std::string_view> output_keys;
};

const KindInfo kKinds[] = {
    {TaskKind::CheckPluricomplex, "check-pluricomplex", {"grid", "require"}},
    {TaskKind::CharCurve, "char-curve", {"csv", "grid"}},
    {TaskKind::Limit, "limit", {"min_order"}},
    {TaskKind::Reconstruct, "reconstruct", {"tol"}},
    {TaskKind::Minitwistor, "minitwistor", {"csv", "grid", "tol"}},
    {TaskKind::MonopoleLimit, "monopole-limit", {"csv", "grid", "tol"}},
    {TaskKind::Cocycle, "cocycle", {}},
};

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::SchemaError, where + ": " + what);
}

void only_keys(const json& obj, const std::vector<std::string_view>& allowed, const std::string& where) {
  if (!obj.is_object()) schema(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      schema(where, "unknown key \"" + key + "\"");
  }
}

const json& need(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema(where, std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) schema(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema(where, "number must be finite");
  return d;
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema(where, "expected an integer");
  const auto i = v.get<long long>();
  if (i < -1000000 || i > 1000000) schema(where, "integer out of range");
  return static_cast<int>(i);
}

Complex complex_value(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) schema(where, "complex numbers are [re, im]");
  return {number(v[0], where), number(v[1], where)};
}

CMatrix matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) schema(where, "matrix must be a nonempty array of rows");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  if (cols == 0) schema(where, "matrix rows must be nonempty arrays");
  CMatrix m(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < v.size(); ++r) {
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    if (!v[r].is_array() || v[r].size() != cols) schema(row_where, "matrix is not rectangular");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_value(v[r][c], row_where);
  }
  return m;
}

CMatrix square(const json& v, const std::string& where) {
  CMatrix m = matrix(v, where);
  if (m.rows() != m.cols()) schema(where, "matrix must be square");
  return m;
}

void same_shape(const CMatrix& a, const CMatrix& b, const std::string& where) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) schema(where, "matrices must have the same shape");
}

std::vector<double> positive_list(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) schema(where, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    const double d = number(x, where);
    if (!(d > 0.0)) schema(where, "values must be positive");
    out.push_back(d);
  }
  return out;
}

minitwistor::SpacePoint point(const json& v, std::size_t arity, const std::string& where) {
  if (!v.is_array() || v.size() != arity)
    schema(where, arity == 4 ? "points are [x, y, z, t]" : "points are [x, y, z]");
  minitwistor::SpacePoint p{number(v[0], where), number(v[1], where), number(v[2], where), 0.0};
  if (arity == 4) p.t = number(v[3], where);
  return p;
}

PencilInput pencil_input(const json& in, const std::string& where) {
  only_keys(in, {"X", "Y"}, where);
  PencilInput p{square(need(in, "X", where), where + ".X"), square(need(in, "Y", where), where + ".Y")};
  same_shape(p.X, p.Y, where);
  return p;
}

LimitInput limit_input(const json& in, const std::string& where) {
  only_keys(in, {"family"}, where);
  const json& fam = need(in, "family", where);
  if (!fam.is_array() || fam.empty()) schema(where + ".family", "expected a nonempty array");
  LimitInput out;
  std::set<double> seen;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const std::string w = where + ".family[" + std::to_string(i) + "]";
    only_keys(fam[i], {"t", "X", "Y"}, w);
    FamilyEntry e{number(need(fam[i], "t", w), w + ".t"), square(need(fam[i], "X", w), w + ".X"),
                  square(need(fam[i], "Y", w), w + ".Y")};
    same_shape(e.X, e.Y, w);
    if (!out.family.empty()) same_shape(e.X, out.family.front().X, w);
    if (e.t < 0.0) schema(w, "t must be nonnegative");
    if (!seen.insert(e.t).second) schema(w, "duplicate t");
    out.family.push_back(std::move(e));
  }
  if (!seen.count(0.0)) schema(where + ".family", "the t = 0 member is required");
  return out;
}

ReconstructInput reconstruct_input(const json& in, const std::string& where) {
  only_keys(in, {"X0", "P", "Q", "zeta0"}, where);
  ReconstructInput r{square(need(in, "X0", where), where + ".X0"), square(need(in, "P", where), where + ".P"),
                     square(need(in, "Q", where), where + ".Q"), complex_value(need(in, "zeta0", where), where + ".zeta0")};
  same_shape(r.X0, r.P, where);
  same_shape(r.X0, r.Q, where);
  return r;
}

MonopoleLimitInput monopole_input(const json& in, const std::string& where) {
  only_keys(in, {"point", "steps", "family"}, where);
  MonopoleLimitInput out;
  const bool has_point = in.contains("point");
  if (has_point == in.contains("family")) schema(where, "give exactly one of \"point\" and \"family\"");
  if (has_point) {
    out.point = point(in["point"], 3, where + ".point");
    if (in.contains("steps")) {
      out.steps = positive_list(in["steps"], where + ".steps");
    } else {
      for (int n = 3; n <= 12; ++n) out.steps.push_back(std::ldexp(1.0, -n));
    }
    return out;
  }
  if (in.contains("steps")) schema(where, "\"steps\" only applies with \"point\"");
  const json& fam = in["family"];
  if (!fam.is_array() || fam.empty()) schema(where + ".family", "expected a nonempty array");
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const std::string w = where + ".family[" + std::to_string(i) + "]";
    only_keys(fam[i], {"t", "coeffs"}, w);
    const double t = number(need(fam[i], "t", w), w + ".t");
    CMatrix c = square(need(fam[i], "coeffs", w), w + ".coeffs");
    try {
      out.family.push_back(monopole::make_spectral_hyp(static_cast<int>(c.rows()) - 1, t, std::move(c)));
    } catch (const Error& e) {
      schema(w, e.what());
    }
  }
  return out;
}

CocycleInput cocycle_input(const json& in, const std::string& where) {
  only_keys(in, {"s", "a", "b", "zeta", "w", "t"}, where);
  CocycleInput c;
  c.s = number(need(in, "s", where), where + ".s");
  c.a = in.contains("a") ? integer(in["a"], where + ".a") : 0;
  c.b = in.contains("b") ? integer(in["b"], where + ".b") : 0;
  c.zeta = complex_value(need(in, "zeta", where), where + ".zeta");
  c.w = complex_value(need(in, "w", where), where + ".w");
  const json& t = need(in, "t", where);
  if (t.is_array()) {
    if (t.empty()) schema(where + ".t", "expected at least one t");
    for (const auto& x : t) c.ts.push_back(number(x, where + ".t"));
  } else {
    c.ts.push_back(number(t, where + ".t"));
  }
  for (const double x : c.ts)
    if (x < 0.0) schema(where + ".t", "t must be nonnegative");
  return c;
}

OutputOptions output_options(const json& out, const KindInfo& info, const std::string& where) {
  OutputOptions o;
  only_keys(out, info.output_keys, where);
  if (out.contains("csv")) {
    const json& v = out["csv"];
    if (!v.is_string() || v.get<std::string>().empty()) schema(where + ".csv", "expected a nonempty string");
    const std::string path = v.get<std::string>();
    if (path.front() == '/' || path.find("..") != std::string::npos)
      schema(where + ".csv", "path must be relative and stay inside the output directory");
    o.csv = path;
  }
  if (out.contains("grid")) {
    o.grid = integer(out["grid"], where + ".grid");
    if (o.grid < 1 || o.grid > 100000) schema(where + ".grid", "grid must be in [1, 100000]");
  }
  if (out.contains("tol")) {
    o.tol = number(out["tol"], where + ".tol");
    if (!(*o.tol > 0.0)) schema(where + ".tol", "tolerance must be positive");
  }
  if (out.contains("min_order")) o.min_order = number(out["min_order"], where + ".min_order");
  if (out.contains("require")) {
    const json& r = out["require"];
    if (!r.is_array()) schema(where + ".require", "expected an array of check names");
    for (const auto& x : r) {
      if (!x.is_string() || (x != "hypercomplex" && x != "vanishing"))
        schema(where + ".require", "checks are \"hypercomplex\" and \"vanishing\"");
      o.require.push_back(x.get<std::string>());
    }
  }
  return o;
}

}  // namespace

std::string_view kind_name(TaskKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.name;
  return "unknown";
}

Manifest parse_manifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                           ": malformed JSON document");
  }

  only_keys(doc, {"version", "tasks"}, "manifest");
  const json& version = need(doc, "version", "manifest");
  if (!version.is_number_integer()) schema("manifest.version", "expected an integer");
  if (version.get<long long>() != 1)
    throw Error(ErrorKind::VersionError, "unsupported manifest version " + version.dump());

  const json& tasks = need(doc, "tasks", "manifest");
  if (!tasks.is_array()) schema("manifest.tasks", "expected an array");

  Manifest m;
  std::set<std::string> ids, csvs;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string where = "tasks[" + std::to_string(i) + "]";
    const json& t = tasks[i];
    only_keys(t, {"id", "kind", "input", "output"}, where);

    const json& id = need(t, "id", where);
    if (!id.is_string() || id.get<std::string>().empty()) schema(where + ".id", "expected a nonempty string");
    const json& kind = need(t, "kind", where);
    if (!kind.is_string()) schema(where + ".kind", "expected a string");
    const auto info = std::find_if(std::begin(kKinds), std::end(kKinds),
                                   [&](const KindInfo& k) { return k.name == kind.get<std::string>(); });
    if (info == std::end(kKinds)) schema(where + ".kind", "unknown kind \"" + kind.get<std::string>() + "\"");

    Task task;
    task.id = id.get<std::string>();
    if (!ids.insert(task.id).second) schema(where + ".id", "duplicate task id \"" + task.id + "\"");
    task.kind = info->kind;

    const json& in = need(t, "input", where);
    const std::string iw = where + ".input";
    switch (task.kind) {
      case TaskKind::CheckPluricomplex:
      case TaskKind::CharCurve:
        task.input = pencil_input(in, iw);
        break;
      case TaskKind::Limit:
        task.input = limit_input(in, iw);
        break;
      case TaskKind::Reconstruct:
        task.input = reconstruct_input(in, iw);
        break;
      case TaskKind::Minitwistor:
        only_keys(in, {"point"}, iw);
        task.input = MinitwistorInput{point(need(in, "point", iw), 4, iw + ".point")};
        break;
      case TaskKind::MonopoleLimit:
        task.input = monopole_input(in, iw);
        break;
      case TaskKind::Cocycle:
        task.input = cocycle_input(in, iw);
        break;
    }
    if (t.contains("output")) task.output = output_options(t["output"], *info, where + ".output");
    if (task.output.csv && !csvs.insert(*task.output.csv).second)
      schema(where + ".output.csv", "two tasks write the same CSV file");
    m.tasks.push_back(std::move(task));
  }
  return m;
}

}  // namespace twistor::cli

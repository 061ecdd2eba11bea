#pragma once

// Batch manifests: a versioned JSON document listing independent tasks.
//
//   {"version": 1, "tasks": [{"id": "...", "kind": "...", "input": {...},
//                             "output": {...}}]}
//
// Complex numbers are [re, im]; matrices are arrays of rows of complex
// numbers. Parsing is strict: unknown keys, kinds and malformed shapes are
// rejected with the offending task index.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "twistor/minitwistor.hpp"
#include "twistor/monopole.hpp"
#include "twistor/polymat.hpp"

namespace twistor::cli {

enum class TaskKind { CheckPluricomplex, CharCurve, Limit, Reconstruct, Minitwistor, MonopoleLimit, Cocycle };

std::string_view kind_name(TaskKind kind);

struct PencilInput {
  CMatrix X, Y;
};

struct FamilyEntry {
  double t = 0.0;
  CMatrix X, Y;
};

/// A sampled family; the t = 0 member is required.
struct LimitInput {
  std::vector<FamilyEntry> family;
};

struct ReconstructInput {
  CMatrix X0, P, Q;
  Complex zeta0;
};

struct MinitwistorInput {
  minitwistor::SpacePoint point;
};

/// Either a point (x, y, z) whose charge-1 curves are sampled at `steps`,
/// or an explicit family of hyperbolic curves.
struct MonopoleLimitInput {
  std::optional<minitwistor::SpacePoint> point;
  std::vector<double> steps;
  std::vector<monopole::SpectralCurveHyp> family;
};

struct CocycleInput {
  double s = 0.0;
  int a = 0, b = 0;
  Complex zeta, w;
  std::vector<double> ts;
};

using TaskInput = std::variant<PencilInput, LimitInput, ReconstructInput, MinitwistorInput,
                               MonopoleLimitInput, CocycleInput>;

struct OutputOptions {
  std::optional<std::string> csv;     ///< relative path of the sample file
  int grid = 16;                      ///< sample count (meaning depends on kind)
  std::optional<double> tol;          ///< residual tolerance for the task's check
  std::optional<double> min_order;    ///< limit: lower bound on the convergence order
  std::vector<std::string> require;   ///< check-pluricomplex: "hypercomplex", "vanishing"
};

struct Task {
  std::string id;
  TaskKind kind = TaskKind::CharCurve;
  TaskInput input;
  OutputOptions output;
};

struct Manifest {
  int version = 1;
  std::vector<Task> tasks;
};

/// Throws ParseError (with line and column), SchemaError or VersionError.
Manifest parse_manifest(std::string_view text);

}  // namespace twistor::cli

#pragma once

// Executes a parsed manifest: one report block per task, in manifest order,
// plus optional CSV sample files written atomically (temp file + rename).

#include <filesystem>
#include <string>

#include "twistor/manifest.hpp"

namespace twistor::cli {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kCsvHeader = "task_id,zeta_re,zeta_im,w_or_eta_re,w_or_eta_im,t";

struct RunOptions {
  bool parallel = false;
  std::filesystem::path out_dir = ".";
};

struct RunResult {
  int exit_code = 0;  ///< 0 when every task and requested check passed, else 1
  std::string report;
};

RunResult run(const Manifest& m, const RunOptions& opts);

/// Shortest decimal that round-trips to the same double ("-0" becomes "0").
std::string shortest(double x);

/// Human-readable polynomial, e.g. "(ζ−η)²" or "w² + 4ζ²".
std::string format_poly(const ScalarPoly2& p);

}  // namespace twistor::cli

#pragma once

// Polynomial (Richardson/Neville) extrapolation of sampled sequences to t = 0.

#include <span>
#include <string_view>
#include <vector>

#include "twistor/polymat.hpp"

namespace twistor {

struct Extrapolation {
  std::vector<Complex> limit;  ///< last entry of the selected tableau column
  double spread = 0.0;         ///< max difference among the last `window` column entries
  double scale = 0.0;          ///< max |limit component|
  int level = 0;
  int window = 0;
};

/// Neville tableau at t = 0 for samples[k] taken at ts[k]. ts must be
/// positive and strictly decreasing; every sample has the same length.
/// Column `level` eliminates the t, ..., t^level error terms.
Extrapolation extrapolate_to_zero(std::span<const double> ts,
                                  std::span<const std::vector<Complex>> samples,
                                  int level, int window);

/// Level min(2, m-2) (at least 1) with a window of up to five tail entries.
Extrapolation extrapolate_default(std::span<const double> ts,
                                  std::span<const std::vector<Complex>> samples);

/// Throws NoLimit unless spread <= tol * max(1, scale).
void require_stable(const Extrapolation& ex, double tol, std::string_view what);

/// Least-squares slope of log(errors) against log(ts), skipping zero errors.
/// Returns NaN when fewer than two usable points remain.
double loglog_slope(std::span<const double> ts, std::span<const double> errors);

}  // namespace twistor

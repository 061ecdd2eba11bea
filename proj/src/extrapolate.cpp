#include "twistor/extrapolate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "twistor/error.hpp"

namespace twistor {

Extrapolation extrapolate_to_zero(std::span<const double> ts,
                                  std::span<const std::vector<Complex>> samples,
                                  int level, int window) {
  const std::size_t m = ts.size();
  if (samples.size() != m) throw Error(ErrorKind::InvalidArgument, "one sample per step is required");
  if (level < 0 || static_cast<std::size_t>(level) + 2 > m)
    throw Error(ErrorKind::InvalidArgument, "not enough steps for the requested extrapolation level");
  for (std::size_t k = 0; k < m; ++k) {
    if (!(ts[k] > 0.0)) throw Error(ErrorKind::InvalidArgument, "steps must be positive");
    if (k > 0 && !(ts[k] < ts[k - 1])) throw Error(ErrorKind::InvalidArgument, "steps must be strictly decreasing");
    if (samples[k].size() != samples[0].size())
      throw Error(ErrorKind::InvalidArgument, "samples differ in length");
  }
  const std::size_t len = samples[0].size();

  // column[k] holds T[k][j] for the current j.
  std::vector<std::vector<Complex>> column(samples.begin(), samples.end());
  for (int j = 1; j <= level; ++j) {
    std::vector<std::vector<Complex>> next(m);
    for (std::size_t k = static_cast<std::size_t>(j); k < m; ++k) {
      const double t_far = ts[k - static_cast<std::size_t>(j)];
      const double t_near = ts[k];
      const double w = t_near / (t_far - t_near);
      next[k].resize(len);
      for (std::size_t c = 0; c < len; ++c)
        next[k][c] = column[k][c] + (column[k][c] - column[k - 1][c]) * w;
    }
    column = std::move(next);
  }

  const std::size_t entries = m - static_cast<std::size_t>(level);
  const std::size_t win = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(window, 1)), 1, entries);

  Extrapolation out;
  out.level = level;
  out.window = static_cast<int>(win);
  out.limit = column[m - 1];
  for (const auto& z : out.limit) out.scale = std::max(out.scale, std::abs(z));
  for (std::size_t a = m - win; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = 0; c < len; ++c)
        out.spread = std::max(out.spread, std::abs(column[a][c] - column[b][c]));
  for (const auto& z : out.limit)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) out.spread = std::numeric_limits<double>::infinity();
  return out;
}

Extrapolation extrapolate_default(std::span<const double> ts,
                                  std::span<const std::vector<Complex>> samples) {
  const int m = static_cast<int>(ts.size());
  if (m < 3) throw Error(ErrorKind::InvalidArgument, "at least three steps are needed to extrapolate");
  const int level = std::max(1, std::min(2, m - 3));
  return extrapolate_to_zero(ts, samples, level, std::min(5, m - level));
}

void require_stable(const Extrapolation& ex, double tol, std::string_view what) {
  if (!(ex.spread <= tol * std::max(1.0, ex.scale)))
    throw Error(ErrorKind::NoLimit, std::string(what) + " does not stabilize (tail spread " +
                                        std::to_string(ex.spread) + ")");
}

double loglog_slope(std::span<const double> ts, std::span<const double> errors) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t k = 0; k < ts.size() && k < errors.size(); ++k) {
    if (!(errors[k] > 0.0) || !(ts[k] > 0.0)) continue;
    const double x = std::log(ts[k]);
    const double y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (count * sxy - sx * sy) / denom;
}

}  // namespace twistor

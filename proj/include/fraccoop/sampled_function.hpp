#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fraccoop {

/// A real function sampled on a uniform time grid. `start` is the time of
/// the first sample; operator inputs must start at 0, operator outputs may
/// carry an offset (e.g. the interior grid of a difference scheme).
struct SampledFunction {
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const { return times.size(); }
  double start() const { return times.empty() ? 0.0 : times.front(); }
  double step() const {
    if (times.size() < 2) throw std::invalid_argument("SampledFunction: need >= 2 samples");
    return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  }
};

/// Uniform grid t = start + k h, k = 0..n.
inline std::vector<double> make_uniform_grid(double start, double h, std::size_t n) {
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = start + static_cast<double>(k) * h;
  return t;
}

/// Rejects non-uniform grids (relative spacing jitter above 1e-12) and
/// mismatched value/grid lengths.
inline void validate_uniform(const SampledFunction& f) {
  if (f.times.size() != f.values.size())
    throw std::invalid_argument("SampledFunction: times/values size mismatch");
  if (f.times.size() < 2) throw std::invalid_argument("SampledFunction: need >= 2 samples");
  const double h = f.step();
  if (!(h > 0.0)) throw std::invalid_argument("SampledFunction: grid must be increasing");
  for (std::size_t k = 1; k < f.times.size(); ++k) {
    const double dk = f.times[k] - f.times[k - 1];
    if (std::fabs(dk - h) > 1e-12 * std::max(1.0, std::fabs(h)) && std::fabs(dk / h - 1.0) > 1e-12)
      throw std::invalid_argument("SampledFunction: non-uniform grid");
  }
}

inline void validate_zero_origin(const SampledFunction& f) {
  validate_uniform(f);
  if (std::fabs(f.times.front()) > 1e-12 * f.step())
    throw std::invalid_argument("SampledFunction: grid must start at t = 0");
}

}  // namespace fraccoop

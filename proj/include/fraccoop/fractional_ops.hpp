#pragma once

// Numerical Caputo derivative (L1 scheme) and Riemann-Liouville integral
// (product trapezoid) on uniform grids starting at t = 0. Order 1 falls
// back to classical central differences / cumulative trapezoid.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fraccoop/sampled_function.hpp"

namespace fraccoop {

namespace detail {

inline void check_order01(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0 || !std::isfinite(alpha))
    throw std::invalid_argument("fractional order must lie in (0, 1]");
}

}  // namespace detail

/// L1-scheme Caputo derivative of order alpha on the interior grid points
/// t_1 .. t_{N-1}; alpha = 1 uses central finite differences. Error is
/// O(h^{2-alpha}) away from t = 0 for smooth inputs.
inline SampledFunction caputo_numeric(const SampledFunction& f, double alpha) {
  detail::check_order01(alpha);
  validate_zero_origin(f);
  if (f.size() < 3) throw std::invalid_argument("caputo_numeric: need >= 3 grid points");
  const std::size_t n = f.size() - 1;
  const double h = f.step();

  SampledFunction out;
  out.times.assign(f.times.begin() + 1, f.times.end() - 1);
  out.values.resize(n - 1);

  if (alpha == 1.0) {
    for (std::size_t k = 1; k < n; ++k)
      out.values[k - 1] = (f.values[k + 1] - f.values[k - 1]) / (2.0 * h);
    return out;
  }

  // c_m = (m+1)^{1-a} - m^{1-a}
  std::vector<double> c(n);
  for (std::size_t m = 0; m < n; ++m)
    c[m] = std::pow(static_cast<double>(m + 1), 1.0 - alpha) -
           std::pow(static_cast<double>(m), 1.0 - alpha);
  std::vector<double> df(n);
  for (std::size_t j = 0; j < n; ++j) df[j] = f.values[j + 1] - f.values[j];

  const double pref = std::pow(h, -alpha) / std::tgamma(2.0 - alpha);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    // D^a f(t_k) ~ pref * sum_{j=0}^{k-1} c_{k-1-j} (f_{j+1} - f_j)
    for (std::size_t j = 0; j < k; ++j) acc += c[k - 1 - j] * df[j];
    out.values[k - 1] = pref * acc;
  }
  return out;
}

/// Riemann-Liouville fractional integral I^alpha by product-trapezoid
/// quadrature on the full grid; I^1 is the cumulative trapezoid.
inline SampledFunction rl_integral(const SampledFunction& f, double alpha) {
  detail::check_order01(alpha);
  validate_zero_origin(f);
  if (f.size() < 3) throw std::invalid_argument("rl_integral: need >= 3 grid points");
  const std::size_t n = f.size() - 1;
  const double h = f.step();

  SampledFunction out;
  out.times = f.times;
  out.values.assign(n + 1, 0.0);

  if (alpha == 1.0) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      acc += 0.5 * h * (f.values[k - 1] + f.values[k]);
      out.values[k] = acc;
    }
    return out;
  }

  // interior weights a_m = (m+1)^{a+1} - 2 m^{a+1} + (m-1)^{a+1}
  std::vector<double> pw(n + 2);
  for (std::size_t m = 0; m < n + 2; ++m) pw[m] = std::pow(static_cast<double>(m), alpha + 1.0);
  const double pref = std::pow(h, alpha) / std::tgamma(alpha + 2.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    double acc = (std::pow(kk - 1.0, alpha + 1.0) - std::pow(kk, alpha) * (kk - alpha - 1.0)) *
                 f.values[0];
    for (std::size_t j = 1; j < k; ++j) acc += (pw[k - j + 1] - 2.0 * pw[k - j] + pw[k - j - 1]) * f.values[j];
    acc += f.values[k];
    out.values[k] = pref * acc;
  }
  return out;
}

}  // namespace fraccoop

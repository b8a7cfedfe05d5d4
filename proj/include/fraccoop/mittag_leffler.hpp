#pragma once

// Two-parameter Mittag-Leffler function E_{a,b}(z) on the real line,
// double precision output, absolute error <= 1e-10 on z in [-1e4, 1]
// for a in (0,2), b > 0.
//
// Method selection is driven by the predicted magnitude of the largest
// Taylor term (the cancellation budget on the negative axis):
//   peak <= ~1e7   -> Taylor series, long double Kahan accumulation
//   peak <= ~1e18  -> Taylor series, __float128 accumulation
//   otherwise      -> algebraic asymptotic expansion, smallest-term
//                     truncation (plus the oscillatory exponential pair
//                     for 1 < a < 2, and the dominant real exponential
//                     for large positive z)
// a == 1 && b == 1 short-circuits to exp(z).
//
// Reciprocal-gamma tables depend only on (a, b) and are kept in a small
// thread-local cache; evaluation itself is pure and re-entrant.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <quadmath.h>

namespace fraccoop {

struct MLQuery {
  double alpha;  // series exponent step, > 0
  double beta;   // offset parameter, > 0
  double z;      // real argument
};

namespace detail {

inline constexpr long double kPiL = 3.14159265358979323846264338327950288L;

// sin(pi*x) with argument reduction done on x (exact for moderate x).
inline long double sin_pi(long double x) {
  long double n = std::nearbyint(x);
  long double r = x - n;
  long double s = std::sin(kPiL * r);
  return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

// 1/Gamma(x) in long double; zero at the poles x = 0, -1, -2, ...
inline long double recip_gamma_ld(long double x) {
  if (x > 0.5L) {
    long double lg = lgammal(x);
    return lg > 11350.0L ? 0.0L : expl(-lg);
  }
  // reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
  long double s = sin_pi(x);
  if (s == 0.0L) return 0.0L;
  long double lg = lgammal(1.0L - x);
  if (lg > 11300.0L) return s > 0 ? std::numeric_limits<long double>::infinity()
                                  : -std::numeric_limits<long double>::infinity();
  return s * expl(lg) / kPiL;
}

inline double recip_gamma(double x) { return static_cast<double>(recip_gamma_ld(x)); }

// Per-(a,b) reciprocal-gamma tables shared by every evaluation with the
// same parameters (the envelope machinery calls ml thousands of times on
// a handful of parameter pairs).
struct MlTables {
  double a = std::numeric_limits<double>::quiet_NaN();
  double b = std::numeric_limits<double>::quiet_NaN();
  std::vector<long double> rg_ld;   // 1/Gamma(a k + b), k = 0, 1, ...
  std::vector<__float128> rg_q;
  std::vector<long double> rg_neg;  // 1/Gamma(b - a k), k = 0, 1, ... (0 at poles)

  void grow_ld(std::size_t n) {
    for (std::size_t k = rg_ld.size(); k < n; ++k)
      rg_ld.push_back(recip_gamma_ld(static_cast<long double>(a) * k + b));
  }
  void grow_q(std::size_t n) {
    for (std::size_t k = rg_q.size(); k < n; ++k) {
      const __float128 arg = static_cast<__float128>(a) * k + static_cast<__float128>(b);
      rg_q.push_back(expq(-lgammaq(arg)));  // arg > 0 throughout the series
    }
  }
  void grow_neg(std::size_t n) {
    for (std::size_t k = rg_neg.size(); k < n; ++k)
      rg_neg.push_back(recip_gamma_ld(static_cast<long double>(b) - static_cast<long double>(a) * k));
  }
};

inline MlTables& ml_tables(double a, double b) {
  thread_local std::array<MlTables, 4> slots;
  thread_local int next = 0;
  for (auto& s : slots)
    if (s.a == a && s.b == b) return s;
  MlTables& s = slots[static_cast<std::size_t>(next)];
  next = (next + 1) & 3;
  s = MlTables{};
  s.a = a;
  s.b = b;
  return s;
}

// log10 of the largest Taylor term |z|^k / Gamma(a k + b).
inline double series_peak_log10(double a, double b, double x) {
  if (x <= 1.0) return -std::log10(std::tgamma(b > 0.5 ? b : 1.0)) + 0.5;
  double lx = std::log(x);
  if (lx / a > 60.0) return 1e6;  // far beyond any float budget
  double kstar = (std::pow(x, 1.0 / a) - b) / a;
  if (kstar <= 0.0) kstar = 0.0;
  double peak = -std::numeric_limits<double>::infinity();
  for (double k : {std::floor(kstar), std::ceil(kstar), std::ceil(kstar) + 1.0}) {
    if (k < 0.0) continue;
    double v = k * lx - static_cast<double>(lgammal(a * k + b));
    peak = std::max(peak, v);
  }
  return peak / std::log(10.0);
}

inline constexpr int kSeriesCap = 10000;

// Taylor series, long double with Kahan compensation.
inline double ml_series_ld(double a, double b, double z) {
  MlTables& tb = ml_tables(a, b);
  long double sum = 0.0L, comp = 0.0L, zp = 1.0L;
  const long double zl = static_cast<long double>(z);
  for (int k = 0; k < kSeriesCap; ++k) {
    if (tb.rg_ld.size() <= static_cast<std::size_t>(k)) tb.grow_ld(static_cast<std::size_t>(k) + 64);
    const long double t = tb.rg_ld[static_cast<std::size_t>(k)] * zp;
    const long double y = t - comp;
    const long double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    if (k > 4 && fabsl(t) < 1e-26L * (fabsl(sum) + 1e-30L)) break;
    if (z == 0.0) break;
    zp *= zl;
    if (fabsl(zp) > 1e4900L) break;
  }
  return static_cast<double>(sum);
}

// Taylor series, __float128 accumulation for the mid-range band.
inline double ml_series_quad(double a, double b, double z) {
  MlTables& tb = ml_tables(a, b);
  __float128 sum = 0.0Q, zp = 1.0Q;
  const __float128 zq = static_cast<__float128>(z);
  for (int k = 0; k < kSeriesCap; ++k) {
    if (tb.rg_q.size() <= static_cast<std::size_t>(k)) tb.grow_q(static_cast<std::size_t>(k) + 64);
    const __float128 t = tb.rg_q[static_cast<std::size_t>(k)] * zp;
    sum += t;
    if (k > 4 && fabsq(t) < 1e-40Q * (fabsq(sum) + 1e-60Q)) break;
    if (z == 0.0) break;
    zp *= zq;
  }
  return static_cast<double>(sum);
}

struct AsymResult {
  double value;
  double err_estimate;  // magnitude of the first omitted term
};

inline constexpr int kAsymCap = 300;

// Algebraic asymptotic expansion for z < 0 with smallest-term truncation:
//   E_{a,b}(z) ~ -sum_{k>=1} z^{-k} / Gamma(b - a k)
// For 1 < a < 2 the decaying oscillatory exponential pair is added.
inline AsymResult ml_asymptotic_neg(double a, double b, double z) {
  MlTables& tb = ml_tables(a, b);
  tb.grow_neg(kAsymCap + 1);
  const long double zi = 1.0L / static_cast<long double>(z);  // negative
  long double sum = 0.0L;
  long double prev_mag = std::numeric_limits<long double>::max();
  long double zp = 1.0L;
  double err = 0.0;
  for (int k = 1; k <= kAsymCap; ++k) {
    zp *= zi;
    const long double rg = tb.rg_neg[static_cast<std::size_t>(k)];
    if (rg == 0.0L) continue;  // pole of the reciprocal: term vanishes
    const long double term = rg * zp;
    const long double mag = fabsl(term);
    if (mag > prev_mag) {  // terms started growing: truncate
      err = static_cast<double>(mag);
      break;
    }
    sum -= term;
    prev_mag = mag;
    err = static_cast<double>(mag) * 1e-18;
  }
  double value = static_cast<double>(sum);
  if (a > 1.0) {
    // exponential pair: (2/a) Re(w^{1-b} e^w), w = |z|^{1/a} e^{i pi/a}
    std::complex<long double> w = std::polar<long double>(
        powl(-static_cast<long double>(z), 1.0L / static_cast<long double>(a)),
        kPiL / static_cast<long double>(a));
    std::complex<long double> c =
        std::pow(w, static_cast<long double>(1.0 - b)) * std::exp(w);
    value += static_cast<double>(2.0L / static_cast<long double>(a) * c.real());
  }
  return {value, err};
}

// Large positive z: dominant exponential plus algebraic correction.
inline double ml_asymptotic_pos(double a, double b, double z) {
  MlTables& tb = ml_tables(a, b);
  tb.grow_neg(kAsymCap + 1);
  long double za = powl(static_cast<long double>(z), 1.0L / static_cast<long double>(a));
  long double lead_log = za + (1.0L - static_cast<long double>(b)) * logl(za);
  long double lead = (lead_log > 11300.0L)
                         ? std::numeric_limits<long double>::infinity()
                         : expl(lead_log) / static_cast<long double>(a);
  long double sum = 0.0L;
  long double prev_mag = std::numeric_limits<long double>::max();
  const long double zi = 1.0L / static_cast<long double>(z);
  long double zp = 1.0L;
  for (int k = 1; k <= kAsymCap; ++k) {
    zp *= zi;
    const long double rg = tb.rg_neg[static_cast<std::size_t>(k)];
    if (rg == 0.0L) continue;
    const long double term = rg * zp;
    if (fabsl(term) > prev_mag) break;
    sum += term;
    prev_mag = fabsl(term);
  }
  double value = static_cast<double>(lead - sum);
  if (a > 1.0) {
    std::complex<long double> w =
        std::polar<long double>(za, 2.0L * kPiL / static_cast<long double>(a));
    if (w.real() < 700.0L) {
      std::complex<long double> c =
          std::pow(w, static_cast<long double>(1.0 - b)) * std::exp(w);
      value += static_cast<double>(2.0L / static_cast<long double>(a) * c.real());
    }
  }
  return value;
}

// branch gates, shared with the crossover continuity test
inline constexpr double kSeriesLongDoublePeak = 7.5;
inline constexpr double kSeriesQuadPeak = 18.5;

}  // namespace detail

/// E_{alpha,beta}(z) = sum_{k>=0} z^k / Gamma(alpha k + beta).
inline double ml(const MLQuery& q) {
  const double a = q.alpha, b = q.beta, z = q.z;
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument("ml: alpha must be positive and finite");
  if (a >= 2.0)
    throw std::invalid_argument("ml: alpha >= 2 is not supported");
  if (!(b > 0.0) || !std::isfinite(b))
    throw std::invalid_argument("ml: beta must be positive and finite");
  if (!std::isfinite(z)) throw std::invalid_argument("ml: z must be finite");
  if (std::fabs(z) > 1e8)
    throw std::invalid_argument("ml: |z| > 1e8 is outside the supported range");

  if (z == 0.0) return detail::recip_gamma(b);
  if (a == 1.0 && b == 1.0) return std::exp(z);

  const double peak = detail::series_peak_log10(a, b, std::fabs(z));
  if (peak <= detail::kSeriesLongDoublePeak) return detail::ml_series_ld(a, b, z);
  if (peak <= detail::kSeriesQuadPeak) return detail::ml_series_quad(a, b, z);
  if (z < 0.0) return detail::ml_asymptotic_neg(a, b, z).value;
  return detail::ml_asymptotic_pos(a, b, z);
}

inline double ml(double alpha, double beta, double z) { return ml(MLQuery{alpha, beta, z}); }

/// One-parameter convenience alias E_alpha(z) = E_{alpha,1}(z).
inline double ml_one(double alpha, double z) { return ml(MLQuery{alpha, 1.0, z}); }

}  // namespace fraccoop

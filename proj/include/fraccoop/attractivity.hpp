#pragma once

// Decay-envelope construction and the qualitative checks on simulated
// trajectories: boundedness in the weighted norm, positivity, monotone
// order preservation, and the Mittag-Leffler envelope
//   Phi_i(t) <= C_i E_beta(-eta t^beta),  beta = min(alpha)/p,
// with eta found as the largest value satisfying, for every i,
//   f_i(v)/v_i + eta/m^{p-1} * I_i(eta) < -margin_eps.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraccoop/mittag_leffler.hpp"
#include "fraccoop/solver.hpp"
#include "fraccoop/vector_field.hpp"

namespace fraccoop {

/// Structured pass/fail result of a trajectory property check.
/// Invariant: passed == (worst_margin >= -tolerance).
struct Verdict {
  std::string name;
  bool passed = false;
  double worst_time = 0.0;
  double worst_margin = 0.0;  // signed; negative = violation
  double tolerance = 0.0;
  std::string description;

  std::string report_line() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "CHECK %s %s worst_t=%.6g margin=%.6g tol=%.6g",
                  name.c_str(), passed ? "PASS" : "FAIL", worst_time, worst_margin, tolerance);
    std::string line(buf);
    if (!description.empty()) line += "  # " + description;
    return line;
  }
};

inline Verdict make_verdict(std::string name, double worst_time, double worst_margin,
                            double tolerance, std::string description = {}) {
  Verdict v;
  v.name = std::move(name);
  v.worst_time = worst_time;
  v.worst_margin = worst_margin;
  v.tolerance = tolerance;
  v.passed = worst_margin >= -tolerance;
  v.description = std::move(description);
  return v;
}

class InfeasibleEtaError : public std::runtime_error {
 public:
  explicit InfeasibleEtaError(double eta_floor)
      : std::runtime_error("search_eta: no feasible eta found down to " +
                           std::to_string(eta_floor) + " (broken premises?)") {}
};

inline constexpr double kMarginEps = 1e-6;     // strict-inequality buffer in (addf)
inline constexpr double kCapitalICap = 1e6;    // default scan horizon
inline constexpr double kScanSafety = 1.05;    // inflation on the scanned sup

/// I(eta) = sup_{t>=1} t^{b-a_i} E_{b,1+b-a_i}(-eta t^b) / (E_b(-eta t^b))^p
/// with b = min(alpha)/p. Log-spaced 2000-point scan on [1, t_cap] plus the
/// analytic t->infinity limit; the scanned max carries a 1.05 safety factor.
/// The equal-order p=1 case (b == alpha_i) has ratio identically 1 and is
/// returned exactly.
inline double capital_I(double eta, double beta, double alpha_i, double p,
                        double t_cap = kCapitalICap) {
  if (!(eta > 0.0)) throw std::invalid_argument("capital_I: eta > 0 required");
  if (!(beta > 0.0) || beta > alpha_i + 1e-12)
    throw std::invalid_argument("capital_I: need 0 < beta <= alpha_i");
  if (!(p >= 1.0)) throw std::invalid_argument("capital_I: p >= 1 required");
  if (!(t_cap >= 1e3)) throw std::invalid_argument("capital_I: t_cap >= 1e3 required");

  const double second = 1.0 + beta - alpha_i;
  if (p == 1.0 && second == 1.0) return 1.0;  // numerator == denominator

  const int n_scan = 2000;
  double scan_max = 0.0;
  const double log_cap = std::log(t_cap);
  for (int k = 0; k < n_scan; ++k) {
    const double t = std::exp(log_cap * static_cast<double>(k) / (n_scan - 1));
    const double z = -eta * std::pow(t, beta);
    const double num = std::pow(t, beta - alpha_i) * ml(beta, second, z);
    const double den = std::pow(ml_one(beta, z), p);
    scan_max = std::max(scan_max, num / den);
  }

  // t -> infinity limit of the ratio via leading asymptotic terms:
  // nonzero only when alpha_i attains the minimum (beta * p == alpha_i).
  double tail = 0.0;
  if (std::fabs(beta * p - alpha_i) < 1e-12) {
    const double rg = detail::recip_gamma(1.0 - alpha_i);  // 0 at alpha_i = 1
    tail = std::pow(eta, p - 1.0) * std::pow(std::tgamma(1.0 - beta), p) * rg;
  }
  return std::max(kScanSafety * scan_max, tail);
}

/// Worst (largest) value over i of f_i(v)/v_i + eta/m^{p-1} * I_i(eta).
/// Feasibility of eta in condition (addf) is worst < -margin_eps.
inline double addf_margin(const VectorFieldHandle& f, const WeightVector& v,
                          const MultiOrder& orders, double p, double m, double eta,
                          double t_cap = kCapitalICap) {
  const Vec fv = f.eval(v.v);
  const double beta = orders.min_order() / p;
  const double mp = std::pow(m, p - 1.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double cap = capital_I(eta, beta, orders[i], p, t_cap);
    worst = std::max(worst, fv[i] / v[i] + eta / mp * cap);
  }
  return worst;
}

/// Largest eta in (0, 10] with addf_margin < -margin_eps, by downscan +
/// 60-step bisection. Throws InfeasibleEtaError below 1e-12. A non-monotone
/// bracket (feasible above an infeasible point) is reported through
/// `warnings`, never asserted.
inline double search_eta(const VectorFieldHandle& f, const WeightVector& v,
                         const MultiOrder& orders, double p, double m,
                         std::vector<std::string>* warnings = nullptr) {
  if (!(m > 0.0)) throw std::invalid_argument("search_eta: m > 0 required");
  const Vec fv = f.eval(v.v);
  for (double fi : fv)
    if (!(fi < 0.0))
      throw std::invalid_argument("search_eta: f(v) must be strictly negative componentwise");

  auto margin = [&](double eta) { return addf_margin(f, v, orders, p, m, eta); };

  double hi = 10.0;
  if (margin(hi) < -kMarginEps) return hi;
  double lo = hi;
  while (true) {
    lo *= 0.5;
    if (lo < 1e-12) throw InfeasibleEtaError(1e-12);
    if (margin(lo) < -kMarginEps) break;
  }

  // monotonicity probe on the bracket interior
  if (warnings) {
    const double mid = std::sqrt(lo * hi);
    const double m_lo = margin(lo), m_mid = margin(mid);
    if (m_mid < m_lo - 1e-12)
      warnings->push_back("search_eta: feasibility margin not monotone on the bracket");
  }

  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (margin(mid) < -kMarginEps)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

/// Parameters of the decay bound Phi_i(t) <= C_i E_beta(-eta t^beta).
/// Per-initial-condition: eta couples to m = ||omega||_v through m^{p-1},
/// so EnvelopeParams are never reused across omega.
struct EnvelopeParams {
  double beta = 0.0;
  double eta = 0.0;
  Vec amplitudes;  // C_i = m / E_beta(-eta) * v_i; all zero when m = 0
  WeightVector v;
  double p = 1.0;
  double m = 0.0;
};

inline EnvelopeParams make_envelope(const VectorFieldHandle& f, const WeightVector& v,
                                    const MultiOrder& orders, double p, const Vec& omega,
                                    std::vector<std::string>* warnings = nullptr) {
  if (omega.size() != v.size()) throw std::invalid_argument("make_envelope: dimension mismatch");
  EnvelopeParams env{orders.min_order() / p, 0.0, Vec(omega.size(), 0.0), v, p,
                     weighted_norm(omega, v)};
  if (env.m == 0.0) return env;  // zero trajectory, zero envelope

  env.eta = search_eta(f, v, orders, p, env.m, warnings);
  const double scale = env.m / ml_one(env.beta, -env.eta);
  for (std::size_t i = 0; i < v.size(); ++i) env.amplitudes[i] = scale * v[i];

  // dominance at t = 0: C_i >= m v_i >= omega_i since E_beta(-eta) < 1
  for (std::size_t i = 0; i < v.size(); ++i)
    if (env.amplitudes[i] < omega[i] - 1e-12)
      throw std::logic_error("make_envelope: envelope fails to dominate omega at t = 0");
  return env;
}

/// Phi_i(t_n) <= C_i E_beta(-eta t_n^beta) + tol for all n, i.
/// Default tol is 1e-4 * max_i C_i.
inline Verdict envelope_check(const Trajectory& traj, const EnvelopeParams& env,
                              std::optional<double> tol_override = std::nullopt) {
  const std::size_t d = traj.dimension();
  if (env.amplitudes.size() != d) throw std::invalid_argument("envelope_check: dimension mismatch");
  const double cmax = *std::max_element(env.amplitudes.begin(), env.amplitudes.end());
  const double tol = tol_override.value_or(1e-4 * cmax);

  double worst = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  for (std::size_t n = 0; n < traj.times.size(); ++n) {
    const double t = traj.times[n];
    const double decay =
        (env.m == 0.0) ? 0.0 : ml_one(env.beta, -env.eta * std::pow(t, env.beta));
    for (std::size_t i = 0; i < d; ++i) {
      const double margin = env.amplitudes[i] * decay - traj.states[n][i];
      if (margin < worst) {
        worst = margin;
        worst_t = t;
      }
    }
  }
  std::ostringstream desc;
  desc << "envelope C_i E_" << env.beta << "(-" << env.eta << " t^" << env.beta << ")";
  return make_verdict("envelope", worst_t, worst, tol, desc.str());
}

/// max_n ||states[n]||_v <= ||omega||_v + tol; tol = 1e-6 + 10 h.
inline Verdict boundedness_check(const Trajectory& traj, const WeightVector& v,
                                 std::optional<double> tol_override = std::nullopt) {
  const double tol = tol_override.value_or(1e-6 + 10.0 * traj.step);
  const double bound = weighted_norm(traj.initial, v);
  double worst = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  for (std::size_t n = 0; n < traj.times.size(); ++n) {
    const double margin = bound - weighted_norm(traj.states[n], v);
    if (margin < worst) {
      worst = margin;
      worst_t = traj.times[n];
    }
  }
  std::ostringstream desc;
  desc << "||Phi||_v <= ||omega||_v = " << bound;
  return make_verdict("boundedness", worst_t, worst, tol, desc.str());
}

/// min over n, i of states >= -tol; tol = 1e-6 + 10 h.
inline Verdict positivity_check(const Trajectory& traj,
                                std::optional<double> tol_override = std::nullopt) {
  const double tol = tol_override.value_or(1e-6 + 10.0 * traj.step);
  double worst = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  for (std::size_t n = 0; n < traj.times.size(); ++n)
    for (double wi : traj.states[n])
      if (wi < worst) {
        worst = wi;
        worst_t = traj.times[n];
      }
  return make_verdict("positivity", worst_t, worst, tol, "min component of the trajectory");
}

/// Integrates from omega_lo <= omega_hi and checks the order is preserved
/// componentwise for all t; tol = 1e-6 + 10 h.
inline Verdict monotonicity_check(const VectorFieldHandle& f, const MultiOrder& orders,
                                  const Vec& omega_lo, const Vec& omega_hi,
                                  const SolveConfig& cfg,
                                  std::optional<double> tol_override = std::nullopt) {
  if (omega_lo.size() != omega_hi.size())
    throw std::invalid_argument("monotonicity_check: dimension mismatch");
  for (std::size_t i = 0; i < omega_lo.size(); ++i)
    if (omega_lo[i] > omega_hi[i])
      throw std::invalid_argument("monotonicity_check: omega_lo must be <= omega_hi");

  const Trajectory lo = integrate(f, orders, omega_lo, cfg);
  const Trajectory hi = integrate(f, orders, omega_hi, cfg);
  const double tol = tol_override.value_or(1e-6 + 10.0 * cfg.step);

  double worst = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  for (std::size_t n = 0; n < lo.times.size(); ++n)
    for (std::size_t i = 0; i < omega_lo.size(); ++i) {
      const double margin = hi.states[n][i] - lo.states[n][i];
      if (margin < worst) {
        worst = margin;
        worst_t = lo.times[n];
      }
    }
  return make_verdict("monotonicity", worst_t, worst, tol,
                      "states from omega_lo stay below states from omega_hi");
}

}  // namespace fraccoop

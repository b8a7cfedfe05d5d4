#pragma once

// Mechanical screening of the structural hypotheses on a vector field:
// cooperativity (Metzler Jacobian on sampled interior points of the
// nonnegative orthant), homogeneity degree estimation, and search for a
// decay direction v > 0 with f(v) < 0. Sampled checks are evidence, not
// proof; reports state the sample count and box.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fraccoop/vector_field.hpp"

namespace fraccoop {

/// Seed for all randomized sampling; FRACCOOP_SEED overrides the default.
inline std::uint64_t default_seed() {
  if (const char* s = std::getenv("FRACCOOP_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
  }
  return 0x5eedu;
}

namespace detail {

// Halton low-discrepancy sequence, one prime base per dimension.
inline double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

inline constexpr std::uint64_t kHaltonPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

}  // namespace detail

inline constexpr double kMetzlerTol = 1e-9;

struct CooperativityVerdict {
  bool cooperative = false;
  std::size_t samples = 0;
  double box_radius = 0.0;
  double worst_offdiag = 0.0;  // most negative off-diagonal entry seen
  std::size_t worst_row = 0, worst_col = 0;
  Vec worst_point;
};

/// Evaluates Df at quasi-random interior points of (0, box_radius]^d
/// (offset 1e-4 from the axes) and checks every off-diagonal entry
/// against -kMetzlerTol. Jacobian failures propagate.
inline CooperativityVerdict check_cooperative(const VectorFieldHandle& f, std::size_t samples,
                                              double box_radius) {
  if (samples < 1) throw std::invalid_argument("check_cooperative: samples >= 1 required");
  if (!(box_radius > 0.0)) throw std::invalid_argument("check_cooperative: box_radius > 0 required");
  const std::size_t d = f.dimension;
  if (d > 10) throw std::invalid_argument("check_cooperative: dimension > 10 unsupported");

  CooperativityVerdict out;
  out.samples = samples;
  out.box_radius = box_radius;
  out.worst_offdiag = std::numeric_limits<double>::infinity();

  const double offset = 1e-4 * box_radius;
  Vec x(d);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < d; ++j) {
      const double u = detail::halton(s + 1, detail::kHaltonPrimes[j]);
      x[j] = offset + u * (box_radius - offset);
    }
    const Matrix J = jacobian_at(f, x);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (i == j) continue;
        if (!std::isfinite(J(i, j)))
          throw std::runtime_error("check_cooperative: Jacobian evaluation failed at sample point");
        if (J(i, j) < out.worst_offdiag) {
          out.worst_offdiag = J(i, j);
          out.worst_row = i;
          out.worst_col = j;
          out.worst_point = x;
        }
      }
  }
  out.cooperative = out.worst_offdiag >= -kMetzlerTol;
  return out;
}

struct HomogeneityEstimate {
  double degree = 0.0;
  double residual = 0.0;  // max over probes of ||f(l x) - l^p f(x)|| / ||f(x)||
};

/// p-hat = log(||f(l x)|| / ||f(x)||) / log l averaged over random positive
/// probes and scales l in {2, 4}; the residual re-checks the identity with
/// the averaged degree.
inline HomogeneityEstimate estimate_homogeneity_degree(const VectorFieldHandle& f,
                                                       std::size_t probes,
                                                       std::uint64_t seed = default_seed()) {
  if (probes < 2) throw std::invalid_argument("estimate_homogeneity_degree: probes >= 2 required");
  const std::size_t d = f.dimension;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.2, 1.0);

  std::vector<Vec> xs(probes, Vec(d));
  for (auto& x : xs)
    for (auto& xi : x) xi = unif(rng);

  const double scales[] = {2.0, 4.0};
  double sum_p = 0.0;
  std::size_t count = 0;
  bool any_nonzero = false;
  for (const auto& x : xs) {
    const double n0 = inf_norm(f.eval(x));
    if (n0 < 1e-300) continue;
    any_nonzero = true;
    for (double lam : scales) {
      Vec lx(d);
      for (std::size_t i = 0; i < d; ++i) lx[i] = lam * x[i];
      const double n1 = inf_norm(f.eval(lx));
      sum_p += std::log(n1 / n0) / std::log(lam);
      ++count;
    }
  }
  if (!any_nonzero)
    throw std::runtime_error("estimate_homogeneity_degree: field vanished at every probe");

  HomogeneityEstimate est;
  est.degree = sum_p / static_cast<double>(count);
  for (const auto& x : xs) {
    const Vec fx = f.eval(x);
    const double n0 = inf_norm(fx);
    if (n0 < 1e-300) continue;
    for (double lam : scales) {
      Vec lx(d);
      for (std::size_t i = 0; i < d; ++i) lx[i] = lam * x[i];
      const Vec flx = f.eval(lx);
      const double lp = std::pow(lam, est.degree);
      double dev = 0.0;
      for (std::size_t i = 0; i < d; ++i) dev = std::max(dev, std::fabs(flx[i] - lp * fx[i]));
      est.residual = std::max(est.residual, dev / n0);
    }
  }
  return est;
}

/// min_i (-f_i(v) / v_i); positive iff f(v) < 0 strictly.
inline double decay_margin(const VectorFieldHandle& f, const Vec& v) {
  const Vec fv = f.eval(v);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) m = std::min(m, -fv[i] / v[i]);
  return m;
}

/// Multi-start search for v > 0 with f(v) < 0: random directions with
/// ||v||_inf = 1, then coordinate descent on the margin min_i(-f_i(v)/v_i).
/// `budget` counts random starts. Absence is a valid result.
inline std::optional<WeightVector> find_decay_direction(const VectorFieldHandle& f,
                                                        std::size_t budget,
                                                        std::uint64_t seed = default_seed()) {
  if (budget < 1) throw std::invalid_argument("find_decay_direction: budget >= 1 required");
  const std::size_t d = f.dimension;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expd(1.0);

  Vec best;
  double best_margin = 0.0;

  for (std::size_t s = 0; s < budget; ++s) {
    Vec v(d);
    if (s == 0) {
      v.assign(d, 1.0);  // the all-ones direction first: common in practice
    } else {
      double mx = 0.0;
      for (auto& vi : v) {
        vi = expd(rng) + 1e-3;
        mx = std::max(mx, vi);
      }
      for (auto& vi : v) vi /= mx;
    }

    double margin = decay_margin(f, v);
    // coordinate descent with shrinking multiplicative steps
    for (double step = 0.5; step > 1e-3; step *= 0.5) {
      bool improved = true;
      int rounds = 0;
      while (improved && rounds++ < 20) {
        improved = false;
        for (std::size_t j = 0; j < d; ++j) {
          for (double fac : {1.0 + step, 1.0 / (1.0 + step)}) {
            Vec w = v;
            w[j] = std::min(1.0, std::max(1e-6, v[j] * fac));
            const double m2 = decay_margin(f, w);
            if (m2 > margin) {
              v = w;
              margin = m2;
              improved = true;
            }
          }
        }
      }
    }
    if (margin > best_margin) {
      best_margin = margin;
      best = v;
    }
  }

  if (best.empty() || !(best_margin > 0.0)) return std::nullopt;
  // postcondition: strict decay at the returned point
  const Vec fb = f.eval(best);
  for (double fi : fb)
    if (!(fi < 0.0)) return std::nullopt;
  return WeightVector(best);
}

struct HypothesisReport {
  CooperativityVerdict cooperative;
  HomogeneityEstimate homogeneity;
  std::optional<WeightVector> v_candidate;
  Vec f_at_v;

  std::string to_string() const {
    std::ostringstream os;
    os << "cooperative " << (cooperative.cooperative ? "PASS" : "FAIL") << " samples="
       << cooperative.samples << " box=" << cooperative.box_radius
       << " worst_offdiag=" << cooperative.worst_offdiag;
    if (!cooperative.cooperative)
      os << " at_entry=(" << cooperative.worst_row + 1 << "," << cooperative.worst_col + 1 << ")";
    os << "\nhomogeneity degree=" << homogeneity.degree << " residual=" << homogeneity.residual
       << "\n";
    if (v_candidate) {
      os << "decay direction v=(";
      for (std::size_t i = 0; i < v_candidate->size(); ++i)
        os << (i ? "," : "") << (*v_candidate)[i];
      os << ") f(v)=(";
      for (std::size_t i = 0; i < f_at_v.size(); ++i) os << (i ? "," : "") << f_at_v[i];
      os << ")\n";
    } else {
      os << "decay direction: none found\n";
    }
    return os.str();
  }
};

inline HypothesisReport analyze_field(const VectorFieldHandle& f, std::size_t samples = 256,
                                      double box_radius = 1.0, std::size_t probes = 16,
                                      std::size_t budget = 64,
                                      std::uint64_t seed = default_seed()) {
  HypothesisReport r;
  r.cooperative = check_cooperative(f, samples, box_radius);
  r.homogeneity = estimate_homogeneity_degree(f, probes, seed);
  r.v_candidate = find_decay_direction(f, budget, seed);
  if (r.v_candidate) r.f_at_v = f.eval(r.v_candidate->v);
  return r;
}

}  // namespace fraccoop

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fraccoop {

using Vec = std::vector<double>;

/// Small dense row-major matrix, sized for Jacobians of low-dimensional fields.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

/// Solve A x = b by partial-pivot elimination (A consumed by value).
inline Vec solve_dense(Matrix A, Vec b) {
  const std::size_t n = A.rows;
  if (A.cols != n || b.size() != n) throw std::invalid_argument("solve_dense: shape mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(A(i, k)) > std::fabs(A(p, k))) p = i;
    if (std::fabs(A(p, k)) < 1e-300) throw std::runtime_error("solve_dense: singular matrix");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
      std::swap(b[k], b[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = A(i, k) / A(k, k);
      if (m == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) A(i, j) -= m * A(k, j);
      b[i] -= m * b[k];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

/// Evaluatable d-dimensional vector field with optional analytic Jacobian.
struct VectorFieldHandle {
  std::size_t dimension = 0;
  std::function<Vec(const Vec&)> eval;
  std::function<Matrix(const Vec&)> jacobian;  // empty -> finite differences

  Vec operator()(const Vec& w) const { return eval(w); }
};

/// Strictly positive weight vector for the weighted sup norm.
struct WeightVector {
  Vec v;

  explicit WeightVector(Vec entries) : v(std::move(entries)) {
    if (v.empty()) throw std::invalid_argument("WeightVector: empty");
    for (double vi : v)
      if (!(vi > 0.0)) throw std::invalid_argument("WeightVector: entries must be > 0");
  }
  std::size_t size() const { return v.size(); }
  double operator[](std::size_t i) const { return v[i]; }
};

/// ||w||_v = max_i |w_i| / v_i
inline double weighted_norm(const Vec& w, const WeightVector& v) {
  if (w.size() != v.size()) throw std::invalid_argument("weighted_norm: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) m = std::max(m, std::fabs(w[i]) / v[i]);
  return m;
}

inline double inf_norm(const Vec& w) {
  double m = 0.0;
  for (double wi : w) m = std::max(m, std::fabs(wi));
  return m;
}

/// Central-difference Jacobian, one-sided toward the interior at the
/// orthant boundary (fields like sqrt(w) blow up across it).
inline Matrix numeric_jacobian(const VectorFieldHandle& f, const Vec& x) {
  const std::size_t d = f.dimension;
  Matrix J(d, d);
  Vec xp = x, xm = x;
  for (std::size_t j = 0; j < d; ++j) {
    const double h = 1e-6 * std::max(1.0, std::fabs(x[j]));
    double denom;
    if (x[j] - h < 0.0) {  // one-sided, stay inside the orthant
      xp[j] = x[j] + h;
      xm[j] = x[j];
      denom = h;
    } else {
      xp[j] = x[j] + h;
      xm[j] = x[j] - h;
      denom = 2.0 * h;
    }
    const Vec fp = f.eval(xp), fm = f.eval(xm);
    for (std::size_t i = 0; i < d; ++i) J(i, j) = (fp[i] - fm[i]) / denom;
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return J;
}

inline Matrix jacobian_at(const VectorFieldHandle& f, const Vec& x) {
  return f.jacobian ? f.jacobian(x) : numeric_jacobian(f, x);
}

/// Adapter clamping slightly negative components to 0 before evaluation;
/// used when feeding discrete trajectories (which may undershoot) into
/// fields with fractional powers.
inline VectorFieldHandle clamped_to_orthant(VectorFieldHandle f) {
  auto base = f.eval;
  f.eval = [base](const Vec& w) {
    Vec c(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) c[i] = std::max(w[i], 0.0);
    return base(c);
  };
  if (f.jacobian) {
    auto jac = f.jacobian;
    f.jacobian = [jac](const Vec& w) {
      Vec c(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) c[i] = std::max(w[i], 0.0);
      return jac(c);
    };
  }
  return f;
}

}  // namespace fraccoop

#pragma once

// The three built-in demonstration systems driven by the CLI `reproduce`
// subcommand. Examples 1 and 2 decay to the origin under the decay
// envelope; example 3 is a two-species Lotka-Volterra system converging
// to its positive equilibrium (1, 2).

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "fraccoop/kolmogorov.hpp"
#include "fraccoop/solver.hpp"
#include "fraccoop/vector_field.hpp"

namespace fraccoop {

struct ExampleSystem {
  int id = 0;
  std::string description;
  MultiOrder orders{{1.0}};
  Vec omega;
  VectorFieldHandle field;  // for the Kolmogorov example: the assembled field
  std::optional<WeightVector> v;
  double degree = 1.0;
  bool is_kolmogorov = false;
  Vec b;
  VectorFieldHandle interaction;
};

inline ExampleSystem builtin_example(int id) {
  ExampleSystem ex;
  ex.id = id;
  switch (id) {
    case 1: {
      ex.description = "2-species decay, orders (0.24, 0.55), degree 3/2";
      ex.orders = MultiOrder{{0.24, 0.55}};
      ex.omega = {0.7, 0.2};
      ex.field.dimension = 2;
      ex.field.eval = [](const Vec& w) {
        return Vec{-3.0 * std::pow(w[0], 1.5) + 2.0 * w[0] * std::sqrt(w[1]),
                   std::sqrt(w[0]) * w[1] - 4.0 * std::pow(w[1], 1.5)};
      };
      // no analytic Jacobian: exercises the finite-difference path
      ex.v = WeightVector({1.0, 1.0});
      ex.degree = 1.5;
      return ex;
    }
    case 2: {
      ex.description = "3-species decay, equal orders 0.45, degree 1";
      ex.orders = MultiOrder{{0.45, 0.45, 0.45}};
      ex.omega = {0.5, 0.3, 0.8};
      ex.field.dimension = 3;
      ex.field.eval = [](const Vec& w) {
        return Vec{-w[0] + w[1] + w[2], std::hypot(w[0], w[2]) - 4.0 * w[1],
                   w[0] + std::hypot(w[1], w[2]) - 5.0 * w[2]};
      };
      ex.field.jacobian = [](const Vec& w) {
        Matrix J(3, 3);
        const double r13 = std::hypot(w[0], w[2]);
        const double r23 = std::hypot(w[1], w[2]);
        J(0, 0) = -1.0; J(0, 1) = 1.0; J(0, 2) = 1.0;
        J(1, 0) = r13 > 0.0 ? w[0] / r13 : 0.0;
        J(1, 1) = -4.0;
        J(1, 2) = r13 > 0.0 ? w[2] / r13 : 0.0;
        J(2, 0) = 1.0;
        J(2, 1) = r23 > 0.0 ? w[1] / r23 : 0.0;
        J(2, 2) = (r23 > 0.0 ? w[2] / r23 : 0.0) - 5.0;
        return J;
      };
      ex.v = WeightVector({3.0, 1.0, 1.0});
      ex.degree = 1.0;
      return ex;
    }
    case 3: {
      ex.description = "2-species Lotka-Volterra, orders (0.4, 0.6), equilibrium (1, 2)";
      ex.orders = MultiOrder{{0.4, 0.6}};
      ex.omega = {0.2, 2.3};
      ex.is_kolmogorov = true;
      ex.b = {1.0, 1.0};
      ex.interaction.dimension = 2;
      ex.interaction.eval = [](const Vec& w) {
        return Vec{-3.0 * w[0] + w[1], w[0] - w[1]};
      };
      ex.interaction.jacobian = [](const Vec&) {
        Matrix J(2, 2);
        J(0, 0) = -3.0; J(0, 1) = 1.0;
        J(1, 0) = 1.0;  J(1, 1) = -1.0;
        return J;
      };
      ex.degree = 1.0;
      const KolmogorovSystem sys = assemble(ex.b, ex.interaction);
      ex.field = sys.assembled;
      return ex;
    }
    default:
      throw std::invalid_argument("builtin_example: id must be 1, 2 or 3");
  }
}

}  // namespace fraccoop

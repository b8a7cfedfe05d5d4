#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <sstream>

#include "fraccoop/builtin_examples.hpp"
#include "fraccoop/mittag_leffler.hpp"
#include "fraccoop/solver.hpp"
#include "oracles.hpp"

using namespace fraccoop;
using Catch::Approx;

namespace {

VectorFieldHandle scalar_field(std::function<double(double)> g) {
  VectorFieldHandle f;
  f.dimension = 1;
  f.eval = [g](const Vec& w) { return Vec{g(w[0])}; };
  return f;
}

const VectorFieldHandle kDecay = scalar_field([](double w) { return -w; });

}  // namespace

TEST_CASE("zero field keeps the state constant") {
  VectorFieldHandle f;
  f.dimension = 2;
  f.eval = [](const Vec&) { return Vec{0.0, 0.0}; };
  SolveConfig cfg{2.0, 1e-2, 1};
  const auto traj = integrate(f, MultiOrder{{0.3, 0.9}}, {0.4, 1.7}, cfg);
  for (const auto& w : traj.states) {
    CHECK(w[0] == 0.4);
    CHECK(w[1] == 1.7);
  }
  const auto conv = convergence_order(f, MultiOrder{{0.3, 0.9}}, {0.4, 1.7}, 1.0, 0.1);
  CHECK(conv.exact);
}

TEST_CASE("scalar linear decay against closed forms") {
  SECTION("order 1: exponential") {
    SolveConfig cfg{1.0, 1e-3, 1};
    const auto traj = integrate(kDecay, MultiOrder{{1.0}}, {1.0}, cfg);
    CHECK(traj.states.back()[0] == Approx(std::exp(-1.0)).margin(1e-4));
    // cross-check against an independent 4th-order reference
    const double ref = oracles::rk4([](double x) { return -x; }, 1.0, 1.0, 2000);
    CHECK(traj.states.back()[0] == Approx(ref).margin(1e-4));
  }
  SECTION("order 1/2: Mittag-Leffler decay") {
    SolveConfig cfg{1.0, 1e-3, 1};
    const auto traj = integrate(kDecay, MultiOrder{{0.5}}, {1.0}, cfg);
    CHECK(traj.states.back()[0] == Approx(ml_one(0.5, -1.0)).margin(5e-3));
  }
}

TEST_CASE("empirical convergence order") {
  SECTION("order 1: classical 2nd order against the exact solution") {
    const auto conv = convergence_order(kDecay, MultiOrder{{1.0}}, {1.0}, 1.0, 2e-2,
                                        [](double t) { return Vec{std::exp(-t)}; });
    CHECK_FALSE(conv.exact);
    CHECK(conv.order == Approx(2.0).margin(0.3));
  }
  SECTION("order 1/2: within the fractional Adams bracket") {
    const auto conv =
        convergence_order(kDecay, MultiOrder{{0.5}}, {1.0}, 1.0, 2e-2, [](double t) {
          return Vec{ml_one(0.5, -std::pow(t, 0.5))};
        });
    CHECK(conv.order >= 1.0);
    CHECK(conv.order <= 1.6);
  }
}

TEST_CASE("determinism: identical inputs give bit-identical trajectories") {
  const auto ex = builtin_example(2);
  SolveConfig cfg{5.0, 1e-2, 1};
  const auto a = integrate(ex.field, ex.orders, ex.omega, cfg);
  const auto b = integrate(ex.field, ex.orders, ex.omega, cfg);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t n = 0; n < a.states.size(); ++n)
    CHECK(std::memcmp(a.states[n].data(), b.states[n].data(), sizeof(double) * a.states[n].size()) == 0);
}

TEST_CASE("input validation and guards") {
  SECTION("negative initial condition") {
    SolveConfig cfg{1.0, 1e-2, 1};
    CHECK_THROWS_AS(integrate(kDecay, MultiOrder{{0.5}}, {-0.1}, cfg), std::invalid_argument);
  }
  SECTION("memory guard") {
    SolveConfig cfg{1e3, 1e-5, 1};
    CHECK_THROWS_AS(integrate(kDecay, MultiOrder{{0.5}}, {1.0}, cfg), std::invalid_argument);
  }
  SECTION("orders outside (0,1]") {
    CHECK_THROWS_AS((MultiOrder{{0.0, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS((MultiOrder{{1.2}}), std::invalid_argument);
  }
  SECTION("blow-up carries the last valid index") {
    const auto grow = scalar_field([](double w) { return w * w; });
    SolveConfig cfg{10.0, 1e-2, 1};
    try {
      integrate(grow, MultiOrder{{1.0}}, {1.0}, cfg);
      FAIL("expected BlowupError");
    } catch (const BlowupError& e) {
      CHECK(e.last_valid_index() > 10);
      CHECK(e.t_last() < 10.0);
    }
  }
}

TEST_CASE("floor-breach warning channel, states never clamped") {
  // w' = -1 from 0.05 crosses zero; solution keeps going negative
  const auto down = scalar_field([](double) { return -1.0; });
  SolveConfig cfg{1.0, 1e-2, 1};
  const auto traj = integrate(down, MultiOrder{{1.0}}, {0.05}, cfg);
  REQUIRE_FALSE(traj.warnings.empty());
  CHECK(traj.states.back()[0] == Approx(-0.95).margin(1e-10));
}

TEST_CASE("Volterra residual") {
  SECTION("zero field: exactly zero") {
    VectorFieldHandle f;
    f.dimension = 1;
    f.eval = [](const Vec&) { return Vec{0.0}; };
    SolveConfig cfg{1.0, 1e-2, 1};
    const auto traj = integrate(f, MultiOrder{{0.5}}, {1.0}, cfg);
    CHECK(residual(f, traj) == 0.0);
  }
  SECTION("linear scalar: bounded by 10 h^{1+alpha} and shrinking with h") {
    double res[2];
    int i = 0;
    for (double h : {1e-2, 5e-3}) {
      SolveConfig cfg{1.0, h, 1};
      const auto traj = integrate(kDecay, MultiOrder{{0.5}}, {1.0}, cfg);
      res[i] = residual(kDecay, traj);
      CHECK(res[i] <= 10.0 * std::pow(h, 1.5));
      ++i;
    }
    CHECK(res[1] < res[0]);
  }
  SECTION("corrupted state is detected") {
    SolveConfig cfg{1.0, 1e-2, 1};
    auto traj = integrate(kDecay, MultiOrder{{0.5}}, {1.0}, cfg);
    traj.states[50][0] += 0.1;  // at a checked grid point
    CHECK(residual(kDecay, traj) >= 0.05);
  }
  SECTION("accepted trajectories of the built-in examples stay under tol_residual(h)") {
    const double h = 1e-2;
    for (int id : {1, 2, 3}) {
      const auto ex = builtin_example(id);
      SolveConfig cfg{5.0, h, 1};
      const auto f = clamped_to_orthant(ex.field);
      const auto traj = integrate(f, ex.orders, ex.omega, cfg);
      double expo = 2.0;
      for (double a : ex.orders.alphas) expo = std::min(expo, std::min(2.0, 1.0 + a));
      INFO("example " << id);
      CHECK(residual(f, traj) <= 50.0 * std::pow(h, expo));
    }
  }
}

TEST_CASE("grid refinement is Cauchy on the built-in examples") {
  for (int id : {1, 2, 3}) {
    const auto ex = builtin_example(id);
    const auto f = clamped_to_orthant(ex.field);
    double norms[3];
    int i = 0;
    for (double h : {2e-2, 1e-2, 5e-3}) {
      SolveConfig cfg{5.0, h, 1};
      norms[i++] = inf_norm(integrate(f, ex.orders, ex.omega, cfg).states.back());
    }
    const double c1 = std::fabs(norms[1] - norms[0]);
    const double c2 = std::fabs(norms[2] - norms[1]);
    INFO("example " << id << " changes " << c1 << " -> " << c2);
    CHECK(c2 <= 4.0 * c1 + 1e-14);
  }
}

TEST_CASE("corrector sweeps refine the fixed point") {
  SolveConfig one{1.0, 1e-2, 1}, three{1.0, 1e-2, 3};
  const auto a = integrate(kDecay, MultiOrder{{0.5}}, {1.0}, one);
  const auto b = integrate(kDecay, MultiOrder{{0.5}}, {1.0}, three);
  const double exact = ml_one(0.5, -1.0);
  CHECK(std::fabs(b.states.back()[0] - exact) <= std::fabs(a.states.back()[0] - exact) + 1e-6);
}

TEST_CASE("trajectory CSV format") {
  SolveConfig cfg{0.1, 1e-2, 1};
  const auto traj = integrate(kDecay, MultiOrder{{0.5}}, {1.0 / 3.0}, cfg);
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  const std::string csv = os.str();
  CHECK(csv.rfind("t,w1\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  // 17 significant digits round-trip bit-exactly
  const auto line_end = csv.find('\n', csv.find('\n') + 1);
  const std::string second = csv.substr(csv.find('\n') + 1, line_end - csv.find('\n') - 1);
  const auto comma = second.find(',');
  CHECK(std::stod(second.substr(comma + 1)) == traj.states[0][0]);
  std::size_t rows = 0;
  for (char c : csv) rows += (c == '\n');
  CHECK(rows == traj.times.size() + 1);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fraccoop/fractional_ops.hpp"
#include "fraccoop/mittag_leffler.hpp"
#include "oracles.hpp"

using namespace fraccoop;
using Catch::Approx;

namespace {

SampledFunction sample(double h, std::size_t n, const std::function<double(double)>& f) {
  SampledFunction s;
  s.times = make_uniform_grid(0.0, h, n);
  s.values.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) s.values[k] = f(s.times[k]);
  return s;
}

}  // namespace

TEST_CASE("caputo of a constant vanishes") {
  const auto f = sample(0.01, 100, [](double) { return 3.7; });
  for (double a : {0.3, 0.7, 1.0}) {
    const auto d = caputo_numeric(f, a);
    for (double v : d.values) CHECK(std::fabs(v) < 1e-12);
  }
}

TEST_CASE("caputo of t") {
  const auto f = sample(1e-3, 1000, [](double t) { return t; });
  SECTION("order 1: all ones") {
    const auto d = caputo_numeric(f, 1.0);
    for (double v : d.values) CHECK(v == Approx(1.0).margin(1e-10));
  }
  SECTION("order 1/2: 2 sqrt(t/pi), L1 integrates linear data exactly") {
    const auto d = caputo_numeric(f, 0.5);
    for (std::size_t k = 0; k < d.values.size(); ++k) {
      const double t = d.times[k];
      CHECK(d.values[k] == Approx(2.0 * std::sqrt(t / M_PI)).margin(1e-10));
    }
  }
  SECTION("closed form cross-checked by direct RL quadrature of f'") {
    // ^C D^{1/2} t = I^{1/2} 1
    for (double t : {0.25, 0.5, 1.0}) {
      const double q = oracles::rl_quadrature([](double) { return 1.0; }, 0.5, t);
      CHECK(q == Approx(2.0 * std::sqrt(t / M_PI)).epsilon(1e-6));
    }
  }
}

TEST_CASE("rl_integral closed forms") {
  const auto zero = sample(0.01, 300, [](double) { return 0.0; });
  const auto one = sample(0.01, 300, [](double) { return 1.0; });
  const auto lin = sample(0.01, 300, [](double t) { return t; });

  SECTION("zero stays zero") {
    const auto r = rl_integral(zero, 0.5);
    for (double v : r.values) CHECK(v == 0.0);
  }
  SECTION("I^{1/2} 1 = t^{1/2}/Gamma(3/2)") {
    const auto r = rl_integral(one, 0.5);
    for (std::size_t k = 0; k < r.values.size(); ++k)
      CHECK(r.values[k] == Approx(std::pow(r.times[k], 0.5) / std::tgamma(1.5)).margin(1e-10));
  }
  SECTION("I^1 t = t^2/2") {
    const auto r = rl_integral(lin, 1.0);
    for (std::size_t k = 0; k < r.values.size(); ++k)
      CHECK(r.values[k] == Approx(0.5 * r.times[k] * r.times[k]).margin(1e-10));
  }
}

TEST_CASE("rl_integral semigroup: I^{1/2} I^{1/2} = I^1 on smooth inputs") {
  for (auto fn : {+[](double t) { return std::sin(t); }, +[](double t) { return std::exp(-t); }}) {
    const auto f = sample(1e-3, 2000, fn);
    const auto half = rl_integral(f, 0.5);
    const auto twice = rl_integral(half, 0.5);
    const auto full = rl_integral(f, 1.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
      worst = std::max(worst, std::fabs(twice.values[k] - full.values[k]));
    CHECK(worst < 5e-3);  // O(h) with a modest constant at h = 1e-3
  }
}

TEST_CASE("operators reject malformed grids") {
  auto f = sample(0.01, 50, [](double t) { return t; });
  SECTION("non-uniform") {
    f.times[20] += 1e-6;
    CHECK_THROWS_AS(caputo_numeric(f, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(rl_integral(f, 0.5), std::invalid_argument);
  }
  SECTION("non-zero origin") {
    for (auto& t : f.times) t += 0.5;
    CHECK_THROWS_AS(caputo_numeric(f, 0.5), std::invalid_argument);
  }
  SECTION("too short") {
    SampledFunction s;
    s.times = {0.0, 0.1};
    s.values = {1.0, 1.0};
    CHECK_THROWS_AS(caputo_numeric(s, 0.5), std::invalid_argument);
  }
  SECTION("bad order") {
    CHECK_THROWS_AS(caputo_numeric(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(caputo_numeric(f, 1.2), std::invalid_argument);
  }
}

TEST_CASE("Caputo of the Mittag-Leffler decay profile matches the analytic identity") {
  // d^a/dt^a E_b(-eta t^b) = -eta t^{b-a} E_{b,1-a+b}(-eta t^b)
  const double beta = 0.3, eta = 0.5, h = 2e-3;
  const std::size_t n = static_cast<std::size_t>(std::llround(5.0 / h));
  const auto g = sample(h, n, [&](double t) {
    return t == 0.0 ? 1.0 : ml_one(beta, -eta * std::pow(t, beta));
  });
  for (double a : {0.3, 0.6, 1.0}) {
    const auto d = caputo_numeric(g, a);
    double worst = 0.0;
    for (std::size_t k = 0; k < d.values.size(); ++k) {
      const double t = d.times[k];
      if (t < 0.1) continue;
      const double rhs =
          -eta * std::pow(t, beta - a) * ml(beta, 1.0 - a + beta, -eta * std::pow(t, beta));
      worst = std::max(worst, std::fabs(d.values[k] - rhs) / std::fabs(rhs));
    }
    INFO("a=" << a);
    CHECK(worst < 1e-2);
  }
}

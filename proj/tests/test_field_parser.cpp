#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>

#include "fraccoop/builtin_examples.hpp"
#include "fraccoop/field_parser.hpp"

using namespace fraccoop;
using Catch::Approx;

TEST_CASE("parsed example fields match the built-in definitions") {
  const std::string dir = FRACCOOP_FIELDS_DIR;
  struct Case {
    const char* file;
    int id;
  };
  for (auto [file, id] : {Case{"/example1.field", 1}, Case{"/example2.field", 2}}) {
    const auto parsed = to_handle(parse_field_file(dir + file));
    const auto ex = builtin_example(id);
    REQUIRE(parsed.dimension == ex.field.dimension);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    for (int it = 0; it < 25; ++it) {
      Vec w(parsed.dimension);
      for (auto& wi : w) wi = u(rng);
      const Vec a = parsed.eval(w), b = ex.field.eval(w);
      for (std::size_t i = 0; i < w.size(); ++i) CHECK(a[i] == Approx(b[i]).margin(1e-13));
    }
  }
}

TEST_CASE("expression grammar") {
  const auto f = to_handle(parse_field_text(
      "dim 2\n"
      "f1 = 2*w1 - w2/4 + 0.5\n"
      "f2 = pow(w1, 2) * sqrt(w2) - (w1 + -1e-1)\n"));
  const Vec v = f.eval({2.0, 4.0});
  CHECK(v[0] == Approx(2.0 * 2.0 - 4.0 / 4.0 + 0.5));
  CHECK(v[1] == Approx(4.0 * 2.0 - (2.0 - 0.1)));
}

TEST_CASE("comments, blank lines and out-of-order components") {
  const auto f = to_handle(parse_field_text(
      "# header comment\n"
      "\n"
      "dim 2\n"
      "f2 = w1   # trailing comment\n"
      "f1 = -w2\n"));
  const Vec v = f.eval({3.0, 5.0});
  CHECK(v[0] == Approx(-5.0));
  CHECK(v[1] == Approx(3.0));
}

TEST_CASE("parse errors carry line and column") {
  SECTION("empty input") {
    try {
      parse_field_text("");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
    }
  }
  SECTION("unknown variable") {
    try {
      parse_field_text("dim 2\nf1 = w3\nf2 = w1\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.col() >= 6);
    }
  }
  SECTION("missing parenthesis") {
    CHECK_THROWS_AS(parse_field_text("dim 1\nf1 = sqrt(w1\n"), ParseError);
  }
  SECTION("missing dim") {
    CHECK_THROWS_AS(parse_field_text("f1 = w1\n"), ParseError);
  }
  SECTION("duplicate component") {
    CHECK_THROWS_AS(parse_field_text("dim 1\nf1 = w1\nf1 = 2*w1\n"), ParseError);
  }
  SECTION("missing component") {
    CHECK_THROWS_AS(parse_field_text("dim 2\nf1 = w1\n"), ParseError);
  }
  SECTION("trailing garbage") {
    CHECK_THROWS_AS(parse_field_text("dim 1\nf1 = w1 w1\n"), ParseError);
  }
  SECTION("malformed number") {
    CHECK_THROWS_AS(parse_field_text("dim 1\nf1 = 1.2.3\n"), ParseError);
  }
  SECTION("component index out of range") {
    CHECK_THROWS_AS(parse_field_text("dim 1\nf2 = w1\n"), ParseError);
  }
}

TEST_CASE("division and pow behave as written") {
  const auto f = to_handle(parse_field_text("dim 1\nf1 = pow(w1, 3) / (w1 + 1)\n"));
  CHECK(f.eval({2.0})[0] == Approx(8.0 / 3.0));
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "ltac/poly_system.hpp"
#include "ltac/polynomial.hpp"

using namespace ltac;

namespace {

Polynomial p(const std::string& text, int nx) { return parse_polynomial(text, nx); }

Polynomial random_poly(std::mt19937& rng, int nvars, int max_deg) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> expo(0, max_deg);
  Polynomial out(nvars);
  for (int t = 0; t < 8; ++t) {
    std::vector<unsigned> e(nvars, 0);
    int budget = max_deg;
    for (int v = 0; v < nvars; ++v) {
      int x = std::min(budget, expo(rng) % (max_deg + 1));
      e[v] = static_cast<unsigned>(x % 3);
      budget -= static_cast<int>(e[v]);
      if (budget <= 0) break;
    }
    out.add_term(Monomial{e}, static_cast<double>(coeff(rng)));
  }
  return out;
}

}  // namespace

TEST_CASE("difference of squares") {
  Polynomial lhs = p("(x1+1)*(x1-1)", 1);
  CHECK(lhs == p("x1^2-1", 1));
}

TEST_CASE("additive identity") {
  Polynomial q = p("3*x1^2 - 2*x2", 2);
  CHECK(q + Polynomial(2) == q);
}

TEST_CASE("binomial expansion") {
  CHECK(p("(x1+x2)^2", 2) == p("x1^2 + 2*x1*x2 + x2^2", 2));
}

TEST_CASE("nvars mismatch rejected") {
  CHECK_THROWS_AS(p("x1", 1) + p("x1", 2), PolyError);
  CHECK_THROWS_AS(p("x1", 1) * p("x2", 2), PolyError);
}

TEST_CASE("gradient basics") {
  PolyVector g = gradient(p("0.5*x1^2", 3));
  CHECK(g[0] == p("x1", 3));
  CHECK(g[1].is_zero());
  CHECK(g[2].is_zero());

  CHECK(gradient(Polynomial::constant(2, 7.0)).is_zero());

  PolyVector gxy = gradient(p("x1*x2", 2));
  CHECK(gxy[0] == p("x2", 2));
  CHECK(gxy[1] == p("x1", 2));
}

TEST_CASE("evaluate") {
  Polynomial q = p("x1^2 - 1", 1);
  CHECK(q.evaluate(std::vector<double>{1.0}) == doctest::Approx(0.0));
  CHECK(q.evaluate(std::vector<double>{2.0}) == doctest::Approx(3.0));
  CHECK(p("x1*x2", 2).evaluate(std::vector<double>{3.0, 4.0}) == doctest::Approx(12.0));
  CHECK_THROWS_AS(q.evaluate(std::vector<double>{1.0, 2.0}), PolyError);
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial a = random_poly(rng, 4, 6);
    Polynomial b = random_poly(rng, 4, 6);
    Polynomial c = random_poly(rng, 4, 6);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("product rule is exact") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial a = random_poly(rng, 3, 4);
    Polynomial b = random_poly(rng, 3, 4);
    PolyVector lhs = gradient(a * b);
    for (int i = 0; i < 3; ++i) {
      Polynomial rhs = a * b.derivative(i) + b * a.derivative(i);
      CHECK(lhs[i] == rhs);
    }
  }
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> pt(-1.5, 1.5);
  const double h = 1e-4;
  for (int trial = 0; trial < 10; ++trial) {
    Polynomial a = random_poly(rng, 3, 5);
    PolyVector g = gradient(a);
    std::vector<double> x{pt(rng), pt(rng), pt(rng)};
    std::vector<double> dir{pt(rng), pt(rng), pt(rng)};
    std::vector<double> xp = x, xm = x;
    for (int i = 0; i < 3; ++i) {
      xp[i] += h * dir[i];
      xm[i] -= h * dir[i];
    }
    double fd = (a.evaluate(xp) - a.evaluate(xm)) / (2.0 * h);
    double an = 0.0;
    for (int i = 0; i < 3; ++i) an += g[i].evaluate(x) * dir[i];
    double scale = std::max({1.0, std::abs(fd), std::abs(an)});
    CHECK(std::abs(fd - an) / scale <= 1e-6);
  }
}

TEST_CASE("textual round trip is exact") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    Polynomial a = random_poly(rng, 3, 5) * 0.1237;
    CHECK(parse_polynomial(to_string(a), 3) == a);
  }
  CHECK(to_string(Polynomial(2)) == "0");
  CHECK(to_string(p("x1^2 - 1", 1)) == "x1^2 - 1");
}

TEST_CASE("z variables map to trailing indices") {
  VarLayout layout{2, 1};
  Polynomial q = parse_polynomial("x1*z1 - z1^2", layout);
  CHECK(q.nvars() == 3);
  CHECK(q.evaluate(std::vector<double>{2.0, 0.0, 3.0}) == doctest::Approx(6.0 - 9.0));
  CHECK(to_string(q, layout) == "-z1^2 + x1*z1");
  CHECK_THROWS_AS(parse_polynomial("z2", layout), PolyError);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_WITH_AS(p("x1 + + ", 1), doctest::Contains("position"), PolyError);
  CHECK_THROWS_AS(p("x2", 1), PolyError);
  CHECK_THROWS_AS(p("x1 ^ x1", 1), PolyError);
}

TEST_CASE("substitute_controls") {
  // f = x - x^3, G = 1, u = -x/2  ->  x - x^3 - x/2
  PolySystem sys = PolySystem::with_identity_psi(
      PolyVector({p("x1 - x1^3", 1)}),
      [] {
        PolyMatrix G(1, 1, 1);
        G(0, 0) = Polynomial::constant(1, 1.0);
        return G;
      }(),
      p("x1^2", 1));
  PolyVector closed = substitute_controls(sys, PolyVector({p("-0.5*x1", 1)}));
  CHECK(closed[0] == p("0.5*x1 - x1^3", 1));

  PolyVector zero_u({Polynomial(1)});
  CHECK(substitute_controls(sys, zero_u)[0] == sys.f[0]);

  PolySystem integrator = PolySystem::with_identity_psi(
      PolyVector({Polynomial(1)}),
      [] {
        PolyMatrix G(1, 1, 1);
        G(0, 0) = Polynomial::constant(1, 1.0);
        return G;
      }(),
      p("x1^2", 1));
  CHECK(substitute_controls(integrator, PolyVector({p("x1", 1)}))[0] == p("x1", 1));

  CHECK_THROWS_AS(substitute_controls(sys, PolyVector({p("x1", 1), p("x1", 1)})),
                  PolyError);
}

TEST_CASE("psi validation") {
  PolySystem sys;
  sys.n = 1;
  sys.m = 1;
  sys.f = PolyVector({p("-x1", 1)});
  sys.G = PolyMatrix(1, 1, 1);
  sys.G(0, 0) = Polynomial::constant(1, 1.0);
  sys.H = PolyMatrix(1, 1, 1);
  sys.phi0 = p("x1^2", 1);
  sys.psi = PolyMatrix(1, 1, 1);
  sys.psi(0, 0) = Polynomial::constant(1, -1.0);
  CHECK_THROWS_AS(sys.validate(), PolyError);
  sys.psi(0, 0) = Polynomial::constant(1, 1.0);
  CHECK_NOTHROW(sys.validate());
}

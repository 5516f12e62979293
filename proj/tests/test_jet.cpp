#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "cmfn/jet.hpp"

using cmfn::Jet;

namespace {

// Central finite difference of order k (k <= 3) with Richardson-free stencils.
double central_fd(const std::function<double(double)>& f, double x, int k, double h) {
  switch (k) {
    case 0:
      return f(x);
    case 1:
      return (f(x + h) - f(x - h)) / (2 * h);
    case 2:
      return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
    case 3:
      return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
    default:
      FAIL("fd order not supported");
      return 0;
  }
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("constant jets have zero derivatives") {
  const Jet a = Jet::constant(5.0, 2);
  CHECK(a.order() == 2);
  CHECK(a.coeff(0) == 5.0);
  CHECK(a.coeff(1) == 0.0);
  CHECK(a.coeff(2) == 0.0);

  const Jet b = Jet::constant(0.0, 0);
  CHECK(b.order() == 0);
  CHECK(b.value() == 0.0);

  const Jet c = Jet::constant(-1.5, 3);
  CHECK(c.coeff(0) == -1.5);
  for (int k = 1; k <= 3; ++k) CHECK(c.coeff(k) == 0.0);
}

TEST_CASE("seeded variables") {
  const Jet a = Jet::variable(2.0, 1);
  CHECK(a.coeff(0) == 2.0);
  CHECK(a.coeff(1) == 1.0);

  const Jet b = Jet::variable(0.0, 3);
  CHECK(b.coeff(0) == 0.0);
  CHECK(b.coeff(1) == 1.0);
  CHECK(b.coeff(2) == 0.0);
  CHECK(b.coeff(3) == 0.0);

  const Jet c = Jet::variable(10.0, 8);
  CHECK(c.order() == 8);
  CHECK(c.coeff(0) == 10.0);
  CHECK(c.coeff(1) == 1.0);
  for (int k = 2; k <= 8; ++k) CHECK(c.coeff(k) == 0.0);

  CHECK_THROWS_AS(Jet::variable(1.0, 0), cmfn::ConfigError);
}

TEST_CASE("elementary series at zero") {
  const Jet s = sin(Jet::variable(0.0, 3));
  CHECK(s.derivative(0) == doctest::Approx(0.0));
  CHECK(s.derivative(1) == doctest::Approx(1.0));
  CHECK(s.derivative(2) == doctest::Approx(0.0));
  CHECK(s.derivative(3) == doctest::Approx(-1.0));

  const Jet e = exp(Jet::variable(0.0, 2));
  for (int k = 0; k <= 2; ++k) CHECK(e.derivative(k) == doctest::Approx(1.0));

  // tanh(x) = x - x^3/3 + ...
  const Jet t = tanh(Jet::variable(0.0, 3));
  CHECK(t.derivative(0) == doctest::Approx(0.0));
  CHECK(t.derivative(1) == doctest::Approx(1.0));
  CHECK(t.derivative(2) == doctest::Approx(0.0));
  CHECK(t.derivative(3) == doctest::Approx(-2.0));
  CHECK(t.coeff(3) == doctest::Approx(-1.0 / 3.0));
  CHECK(central_fd([](double x) { return std::tanh(x); }, 0.0, 3, 1e-3) ==
        doctest::Approx(-2.0).epsilon(1e-5));
}

TEST_CASE("derivative extraction") {
  const Jet s = sin(Jet::variable(0.0, 3));
  CHECK(s.derivative(3) == doctest::Approx(-1.0));

  CHECK(Jet::constant(7.0, 2).derivative(1) == 0.0);

  const Jet x = Jet::variable(3.0, 2);
  CHECK((x * x).derivative(2) == doctest::Approx(2.0));

  CHECK_THROWS_AS(Jet::constant(1.0, 2).derivative(3), cmfn::ConfigError);
}

TEST_CASE("division requires nonzero constant term") {
  const Jet x = Jet::variable(0.0, 2);
  CHECK_THROWS_AS(Jet::constant(1.0, 2) / x, cmfn::SingularOperation);

  // 1/(1+x) = 1 - x + x^2 - ...
  const Jet r = 1.0 / (1.0 + Jet::variable(0.0, 3));
  CHECK(r.coeff(0) == doctest::Approx(1.0));
  CHECK(r.coeff(1) == doctest::Approx(-1.0));
  CHECK(r.coeff(2) == doctest::Approx(1.0));
  CHECK(r.coeff(3) == doctest::Approx(-1.0));
}

TEST_CASE("elementary derivatives match finite differences and closed forms") {
  struct Case {
    std::function<Jet(const Jet&)> jet_fn;
    std::function<double(double)> fn;
    std::function<double(double, int)> exact;  // closed-form k-th derivative
  };
  const std::vector<Case> cases = {
      {[](const Jet& j) { return exp(j); }, [](double x) { return std::exp(x); },
       [](double x, int) { return std::exp(x); }},
      {[](const Jet& j) { return sin(j); }, [](double x) { return std::sin(x); },
       [](double x, int k) { return std::sin(x + k * 1.5707963267948966); }},
      {[](const Jet& j) { return cos(j); }, [](double x) { return std::cos(x); },
       [](double x, int k) { return std::cos(x + k * 1.5707963267948966); }},
  };
  const std::vector<double> points = {-1.3, -0.2, 0.7, 2.1};
  for (const Case& c : cases) {
    for (double x0 : points) {
      const Jet j = c.jet_fn(Jet::variable(x0, 8));
      for (int k = 0; k <= 3; ++k) {
        // larger step for the 3rd-order stencil: roundoff scales as eps/h^3
        const double fd = central_fd(c.fn, x0, k, k == 3 ? 5e-3 : 1e-4);
        CHECK(j.derivative(k) ==
              doctest::Approx(fd).epsilon(1e-5).scale(std::max(1.0, std::abs(fd))));
      }
      for (int k = 4; k <= 8; ++k)
        CHECK(j.derivative(k) == doctest::Approx(c.exact(x0, k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("tanh high order matches finite differences of lower jets") {
  // d^k tanh via an order-(k+3) jet of tanh' = sech^2 composed as 1 - tanh^2
  for (double x0 : {-0.8, 0.0, 0.5, 1.7}) {
    const Jet t = tanh(Jet::variable(x0, 8));
    const Jet h = 1.0 - t * t;
    // derivative consistency: (tanh)'^(k) = (sech^2)^(k)
    for (int k = 0; k <= 7; ++k)
      CHECK(t.derivative(k + 1) == doctest::Approx(h.derivative(k)).epsilon(1e-9).scale(
                                       std::max(1.0, std::abs(h.derivative(k)))));
    for (int k = 1; k <= 3; ++k) {
      const double fd =
          central_fd([](double x) { return std::tanh(x); }, x0, k, k == 3 ? 5e-3 : 1e-4);
      // loose for k = 3: the stencil's truncation error carries tanh's large
      // fifth derivative
      CHECK(t.derivative(k) ==
            doctest::Approx(fd).epsilon(k == 3 ? 2e-4 : 1e-5).scale(std::max(1.0, std::abs(fd))));
    }
  }
}

TEST_CASE("Leibniz rule is exact on integer polynomial jets") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> x0d(-3, 3);
  const int order = 5;
  for (int trial = 0; trial < 50; ++trial) {
    const int x0 = x0d(rng);
    const Jet x = Jet::variable(static_cast<double>(x0), order);
    Jet a = Jet::constant(coeff(rng), order);
    Jet b = Jet::constant(coeff(rng), order);
    for (int d = 0; d < 4; ++d) {
      a = a * x + static_cast<double>(coeff(rng));
      b = b * x + static_cast<double>(coeff(rng));
    }
    const Jet ab = a * b;
    for (int k = 0; k <= order; ++k) {
      double leibniz = 0.0;
      for (int j = 0; j <= k; ++j) leibniz += binom(k, j) * a.derivative(j) * b.derivative(k - j);
      CHECK(ab.derivative(k) == leibniz);  // integers: exact
    }
  }
}

TEST_CASE("hyperbolic and power identities") {
  const Jet x = Jet::variable(0.4, 6);
  const Jet id = cosh(x) * cosh(x) - sinh(x) * sinh(x);
  CHECK(id.derivative(0) == doctest::Approx(1.0));
  for (int k = 1; k <= 6; ++k) CHECK(id.derivative(k) == doctest::Approx(0.0).epsilon(1e-12));

  const Jet t = tanh(x) - sinh(x) / cosh(x);
  for (int k = 0; k <= 6; ++k)
    CHECK(t.derivative(k) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  const Jet p = pow_int(x, 3) - x * x * x;
  for (int k = 0; k <= 6; ++k) CHECK(p.derivative(k) == doctest::Approx(0.0));

  const Jet q = cmfn::pow(x, 2.5) - exp(2.5 * log(x));
  for (int k = 0; k <= 6; ++k) CHECK(q.derivative(k) == doctest::Approx(0.0));

  const Jet inv = pow_int(x, -2) - 1.0 / (x * x);
  for (int k = 0; k <= 6; ++k)
    CHECK(inv.derivative(k) == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
}

TEST_CASE("extract produces constant jets of raw derivatives") {
  const Jet s = sin(Jet::variable(0.0, 3));
  const Jet d3 = extract(s, 3);
  CHECK(d3.value() == doctest::Approx(-1.0));
  CHECK(d3.coeff(1) == 0.0);
  CHECK(d3.order() == 3);
}

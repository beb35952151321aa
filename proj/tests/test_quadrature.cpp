#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bverify/compensated.hpp"
#include "bverify/field.hpp"
#include "bverify/quadrature.hpp"

using namespace bverify;

namespace {

constexpr double kPi = std::numbers::pi;

// integral of x^a y^b z^c over the sphere of radius R: zero for any odd
// exponent, else 4 pi R^(a+b+c+2) (a-1)!!(b-1)!!(c-1)!! / (a+b+c+1)!!
double sphere_monomial(int a, int b, int c, double R) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  auto dfact = [](int n) {
    double p = 1.0;
    for (int k = n; k >= 2; k -= 2) p *= k;
    return p;
  };
  return 4.0 * kPi * std::pow(R, a + b + c + 2) * dfact(a - 1) * dfact(b - 1) * dfact(c - 1) /
         dfact(a + b + c + 1);
}

PointFunctional monomial(int a, int b, int c) {
  return [a, b, c](const Vec3& x, const FieldSample&) {
    return std::pow(x.x, a) * std::pow(x.y, b) * std::pow(x.z, c);
  };
}

}  // namespace

// ============================================================================
// one-dimensional rule
// ============================================================================

TEST_CASE("gauss-legendre nodes and weights have the textbook structure") {
  GaussRule g1 = gauss_legendre(1);
  CHECK(g1.nodes.size() == 1);
  CHECK(g1.nodes[0] == doctest::Approx(0.0));
  CHECK(g1.weights[0] == doctest::Approx(2.0));

  for (int n : {2, 5, 16, 33}) {
    GaussRule g = gauss_legendre(n);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(g.weights[i] > 0.0);
      if (i) CHECK(g.nodes[i] > g.nodes[i - 1]);
      wsum += g.weights[i];
      // symmetry of the rule about 0
      CHECK(g.nodes[i] == doctest::Approx(-g.nodes[n - 1 - i]).epsilon(1e-14));
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("gauss-legendre integrates polynomials up to degree 2n-1 exactly") {
  auto integrate = [](const GaussRule& g, int k) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
    return s;
  };
  GaussRule g4 = gauss_legendre(4);
  CHECK(integrate(g4, 6) == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
  CHECK(std::fabs(integrate(g4, 7)) < 1e-15);
  GaussRule g5 = gauss_legendre(5);
  CHECK(integrate(g5, 8) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}

// ============================================================================
// sphere rule
// ============================================================================

TEST_CASE("sphere rule weights sum to the unit sphere area") {
  for (int nt : {3, 8, 32}) {
    SphereRule rule(nt, 2 * nt);
    CHECK(rule.weight_sum() == doctest::Approx(4.0 * kPi).epsilon(1e-13));
  }
}

TEST_CASE("surface integrals of monomials match the double-factorial formula") {
  AnalyticField zero = make_zero();
  QuadConfig cfg;
  struct Probe {
    int a, b, c;
    double R;
  };
  for (const Probe& pr : {Probe{0, 0, 0, 1.0}, Probe{2, 0, 0, 1.0}, Probe{0, 4, 0, 2.0},
                          Probe{2, 2, 2, 1.5}, Probe{4, 2, 0, 0.7}, Probe{1, 0, 0, 1.0},
                          Probe{3, 2, 0, 2.0}}) {
    CAPTURE(pr.a);
    CAPTURE(pr.b);
    CAPTURE(pr.c);
    double got = sphere_integral(zero, monomial(pr.a, pr.b, pr.c), pr.R, cfg);
    double want = sphere_monomial(pr.a, pr.b, pr.c, pr.R);
    if (want == 0.0) {
      CHECK(std::fabs(got) < 1e-13 * std::pow(pr.R, pr.a + pr.b + pr.c + 2));
    } else {
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("multi-functional sphere pass agrees with separate passes") {
  AnalyticField f = make_abc(1, 1, 1);
  QuadConfig cfg;
  PointFunctional gs[] = {functional::speed2(), functional::normal2(), functional::tangential2()};
  std::vector<double> together = sphere_integral_multi(f, gs, 1.3, cfg);
  REQUIRE(together.size() == 3);
  CHECK(together[0] == doctest::Approx(sphere_integral(f, functional::speed2(), 1.3, cfg)));
  // decomposition must add up on the sphere: |u|^2 = |u_N|^2 + |u_T|^2
  CHECK(together[0] == doctest::Approx(together[1] + together[2]).epsilon(1e-12));
}

// ============================================================================
// ball and shell integrals
// ============================================================================

TEST_CASE("ball integrals reproduce closed forms") {
  QuadConfig cfg;
  // scalar overload, no field evaluation involved
  CHECK(ball_integral([](const Vec3&) { return 1.0; }, 2.0, cfg) ==
        doctest::Approx(4.0 * kPi * 8.0 / 3.0).epsilon(1e-12));
  AnalyticField zero = make_zero();
  double got = ball_integral(
      zero, [](const Vec3& x, const FieldSample&) { return norm2(x); }, 1.0, cfg);
  CHECK(got == doctest::Approx(4.0 * kPi / 5.0).epsilon(1e-12));
}

TEST_CASE("weighted shell integrals reproduce closed forms across alpha") {
  QuadConfig cfg;
  AnalyticField zero = make_zero();
  PointFunctional one = [](const Vec3&, const FieldSample&) { return 1.0; };
  auto shell = [&](double r, double R, double alpha) {
    return shell_weighted_integral(zero, one, r, R, alpha, cfg);
  };
  // integral of |x|^-alpha over r < |x| < R
  CHECK(shell(0.5, 2.0, 0.0) == doctest::Approx(4.0 * kPi * (8.0 - 0.125) / 3.0).epsilon(1e-12));
  CHECK(shell(0.5, 2.0, 2.0) == doctest::Approx(4.0 * kPi * 1.5).epsilon(1e-12));
  CHECK(shell(0.5, 2.0, 3.0) == doctest::Approx(4.0 * kPi * std::log(4.0)).epsilon(1e-12));
  CHECK(shell(0.5, 2.0, -1.0) == doctest::Approx(kPi * (16.0 - 0.0625)).epsilon(1e-12));
  // from the origin, with the singular weight resolved by clustering
  CHECK(shell(0.0, 1.0, 2.0) == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  // a positive inner radius keeps strong weights analytic on every panel
  CHECK(shell(0.01, 1.0, 2.9) ==
        doctest::Approx(4.0 * kPi * (1.0 - std::pow(0.01, 0.1)) / 0.1).epsilon(1e-9));
  // from the origin the dyadic clustering cannot certify alpha near 3; the
  // certificate must refuse rather than return a biased value
  CHECK_THROWS_AS(shell(0.0, 1.0, 2.9), ConvergenceError);
  // non-radial integrand under the weight
  double got = shell_weighted_integral(
      zero, [](const Vec3& x, const FieldSample&) { return x.x * x.x; }, 0.5, 1.5, 1.0, cfg);
  CHECK(got == doctest::Approx(kPi / 3.0 * (std::pow(1.5, 4) - 0.0625)).epsilon(1e-12));
}

TEST_CASE("shell argument validation") {
  QuadConfig cfg;
  AnalyticField zero = make_zero();
  PointFunctional one = [](const Vec3&, const FieldSample&) { return 1.0; };
  CHECK_THROWS_AS(shell_weighted_integral(zero, one, -0.1, 1.0, 0.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(shell_weighted_integral(zero, one, 1.0, 1.0, 0.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(shell_weighted_integral(zero, one, 2.0, 1.0, 0.0, cfg), std::invalid_argument);
  // weight |x|^-3 is not integrable at the origin
  CHECK_THROWS_AS(shell_weighted_integral(zero, one, 0.0, 1.0, 3.0, cfg), std::domain_error);
  CHECK_THROWS_AS(sphere_integral(zero, one, 0.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(sphere_integral(zero, one, -1.0, cfg), std::invalid_argument);
}

// ============================================================================
// convergence certification
// ============================================================================

TEST_CASE("self-convergence failure raises with both disagreeing values") {
  AnalyticField zero = make_zero();
  QuadConfig cfg;
  cfg.n_theta = 4;
  cfg.n_phi = 8;
  cfg.max_refinements = 2;
  // angular frequency far beyond what doubling from n_theta=4 can settle;
  // the offsets break every parity the rule would otherwise cancel exactly
  PointFunctional wild = [](const Vec3& x, const FieldSample&) {
    return std::sin(35.0 * (x.x + 0.37) * (x.y + 0.91) + 3.0 * x.z);
  };
  try {
    sphere_integral(zero, wild, 1.0, cfg);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.previous != e.latest);
    CHECK(std::string(e.what()).find("self-convergence") != std::string::npos);
  }
}

TEST_CASE("max_refinements = 0 accepts the base rule unconditionally") {
  AnalyticField zero = make_zero();
  QuadConfig cfg;
  cfg.n_theta = 4;
  cfg.n_phi = 8;
  cfg.max_refinements = 0;
  PointFunctional wild = [](const Vec3& x, const FieldSample&) {
    return std::sin(35.0 * (x.x + 0.37) * (x.y + 0.91) + 3.0 * x.z);
  };
  double v = sphere_integral(zero, wild, 1.0, cfg);
  CHECK(std::isfinite(v));
}

TEST_CASE("automatic rule sizing tracks oscillatory fields") {
  QuadConfig cfg;
  AnalyticField abc = make_abc(1, 1, 1);
  AnalyticField sph = make_spheromak();
  CHECK(auto_n_theta(abc, 1.0, cfg) == 32);
  CHECK(auto_n_theta(abc, 20.0, cfg) == 96);
  // algebraraic decay keeps the angular complexity bounded
  CHECK(auto_n_theta(sph, 500.0, cfg) == 32);
  CHECK(auto_n_phi(32, cfg) == 64);
  QuadConfig forced;
  forced.n_theta = 48;
  forced.n_phi = 50;
  CHECK(auto_n_theta(abc, 20.0, forced) == 48);
  CHECK(auto_n_phi(48, forced) == 50);
}

TEST_CASE("node maximum on a sphere approximates the supremum") {
  AnalyticField rot = make_rotation();
  QuadConfig cfg;
  for (double R : {0.5, 2.0}) {
    double sup = sup_on_sphere(rot, functional::speed(), R, cfg);
    CHECK(sup <= R * (1.0 + 1e-12));
    CHECK(sup > 0.99 * R);
  }
}

// ============================================================================
// compensated accumulation
// ============================================================================

TEST_CASE("neumaier summation survives catastrophic cancellation") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);

  // alternating series that plain summation gets wrong at 1e-16 scale
  CompensatedSum t;
  for (int i = 0; i < 1000; ++i) {
    t.add(0.1);
    t.add(-0.1);
  }
  t.add(2.5);
  CHECK(t.value() == doctest::Approx(2.5).epsilon(1e-15));
}

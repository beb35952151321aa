#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bverify/asymptotics.hpp"
#include "bverify/field.hpp"
#include "bverify/identities.hpp"

using namespace bverify;

namespace {

constexpr double kPi = std::numbers::pi;

// constant-speed azimuthal swirl: |u_T| = 1 on every sphere, so the surface
// energy is 4 pi R^2 and the q-norm chain collapses to an equality.  Not a
// solution of anything; only the tangential geometry matters here.
AnalyticField azimuthal_unit() {
  auto eval = [](const Vec3& x) {
    double rho = std::hypot(x.x, x.y);
    if (rho < 1e-300) return FieldSample{{0.0, 0.0, 0.0}, 0.0};
    return FieldSample{{-x.y / rho, x.x / rho, 0.0}, 0.0};
  };
  return AnalyticField("azimuthal_unit", eval, /*beltrami=*/false, std::nullopt,
                       DecayClass{DecayKind::algebraic, 0.0}, /*oscillatory=*/false);
}

}  // namespace

// ============================================================================
// least squares helper
// ============================================================================

TEST_CASE("linear fit recovers an exact line") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v - 2.0);
  LinearFit fit = linear_fit(x, y);
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(fit.intercept == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(linear_fit(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                  std::invalid_argument);
}

// ============================================================================
// decay scan
// ============================================================================

TEST_CASE("tangential profile of rigid rotation follows (8 pi / 3) R^4") {
  AnalyticField f = make_rotation();
  std::vector<double> t = tangential_profile(f, {0.5, 1.0, 2.0});
  CHECK(t[0] == doctest::Approx(8.0 * kPi / 3.0 * 0.0625).epsilon(1e-12));
  CHECK(t[1] == doctest::Approx(8.0 * kPi / 3.0).epsilon(1e-12));
  CHECK(t[2] == doctest::Approx(8.0 * kPi / 3.0 * 16.0).epsilon(1e-12));
}

TEST_CASE("decay scan calls the zero field trivial") {
  DecayVerdict v = liouville_scan(make_zero(), 1.0, 100.0, 16);
  CHECK(v.classification == DecayClassification::trivial);
  CHECK_FALSE(v.contradiction);
  CHECK(v.max_t == 0.0);
}

TEST_CASE("decay scan flags a vanishing-energy sphere on a nonzero field") {
  // rigid rotation grows like R^4, so the smallest sampled sphere carries a
  // relative energy below the sequence threshold; the field is plainly
  // nonzero there and the verdict must say the two observations clash
  DecayVerdict v = liouville_scan(make_rotation(), 1.0, 100.0, 33);
  CHECK(v.classification == DecayClassification::sequence_found);
  CHECK(v.contradiction);
  CHECK(v.inf_at_R == doctest::Approx(1.0));
  CHECK(v.max_speed_at_vanishing > 0.5);
  CHECK(v.trend_exponent == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("decay scan finds no vanishing sequence for the spheromak") {
  DecayVerdict v = liouville_scan(make_spheromak(), 1.0, 100.0, 25);
  CHECK(v.classification == DecayClassification::no_sequence_up_to_Rmax);
  CHECK_FALSE(v.contradiction);
  CHECK(v.max_t > 0.0);
  // surface tangential energy stays of order one: trend exponent near zero
  CHECK(std::fabs(v.trend_exponent) < 0.5);
}

TEST_CASE("decay scan validates its grid") {
  CHECK_THROWS_AS(liouville_scan(make_zero(), 0.0, 10.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(liouville_scan(make_zero(), 10.0, 1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(liouville_scan(make_zero(), 1.0, 10.0, 1), std::invalid_argument);
}

// ============================================================================
// q-norm chain on spheres
// ============================================================================

TEST_CASE("q-norm chain holds for the spheromak") {
  QuadConfig cfg;
  for (double R : {1.0, 10.0}) {
    CAPTURE(R);
    IdentityReport rep = holder_chain_check(make_spheromak(), R, 3.0, cfg);
    CHECK(rep.pass);
  }
  IdentityReport mid = holder_chain_check(make_spheromak(), 10.0, 2.5, cfg);
  CHECK(mid.pass);
}

TEST_CASE("q-norm chain is an equality for a constant tangential speed") {
  QuadConfig cfg;
  AnalyticField f = azimuthal_unit();
  for (double q : {2.5, 3.0}) {
    CAPTURE(q);
    IdentityReport rep = holder_chain_check(f, 2.0, q, cfg);
    CHECK(rep.pass);
    CHECK(rep.lhs == doctest::Approx(rep.rhs).epsilon(1e-10));
    CHECK(rep.lhs == doctest::Approx(16.0 * kPi).epsilon(1e-10));
  }
}

TEST_CASE("q-norm chain rejects exponents outside (2, 3]") {
  CHECK_THROWS_AS(holder_chain_check(make_spheromak(), 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(holder_chain_check(make_spheromak(), 1.0, 3.1), std::invalid_argument);
}

// ============================================================================
// weighted radial tails
// ============================================================================

TEST_CASE("weighted tail of rigid rotation integrates to (2 pi / 3) R^4") {
  WeightedTail tail = weighted_radial_tail(make_rotation(), 1.0, {0.5, 1.0, 2.0, 4.0});
  REQUIRE(tail.I.size() == 4);
  for (std::size_t i = 0; i < tail.R.size(); ++i) {
    CAPTURE(tail.R[i]);
    CHECK(tail.I[i] ==
          doctest::Approx(2.0 * kPi / 3.0 * std::pow(tail.R[i], 4)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(weighted_radial_tail(make_rotation(), 1.5, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("weighted tail of the zero field is identically zero") {
  WeightedTail tail = weighted_radial_tail(make_zero(), 1.0, {1.0, 10.0, 100.0});
  for (double v : tail.I) CHECK(v == 0.0);
}

TEST_CASE("tail dichotomy validates decay class and grid span") {
  CHECK_THROWS_AS(tail_dichotomy(make_abc(1, 1, 1), log_grid(10, 1000, 9)), std::domain_error);
  CHECK_THROWS_AS(tail_dichotomy(make_spheromak(), log_grid(10.0, 50.0, 9)),
                  std::invalid_argument);
}

TEST_CASE("tail dichotomy separates the spheromak components on a short scan") {
  // structural smoke check on two decades; the acceptance gate runs the
  // documented [10, 1000] scan
  DichotomyReport rep = tail_dichotomy(make_spheromak(), log_grid(2.0, 200.0, 9));
  CHECK(rep.tangential.fit.slope > 0.0);
  CHECK(rep.tangential.I.back() > rep.tangential.I.front());
  CHECK(rep.normal_last_decade_fraction < 0.05);
}

// ============================================================================
// small-ball energy estimator
// ============================================================================

TEST_CASE("morrey estimator reproduces the rotation closed form") {
  // rho^-1 integral_{B_rho} |u|^2 = (8 pi / 15) rho^4: increasing, so the
  // sup sits at the grid end
  MorreyEstimate est = morrey_estimate(make_rotation(), 1.0, 8, 2);
  CHECK(est.sup == doctest::Approx(8.0 * kPi / 15.0).epsilon(1e-9));
  CHECK(est.at_rho == doctest::Approx(1.0));
  CHECK_FALSE(est.phi1.has_value());
  CHECK_FALSE(est.bound_holds.has_value());
  REQUIRE(est.value.size() == est.rho.size());
  CHECK(est.value.front() < est.value.back());
}

TEST_CASE("morrey bound holds for eigenfields on the unit ball") {
  for (const char* id : {"abc:1,1,1", "spheromak"}) {
    CAPTURE(id);
    MorreyEstimate est = morrey_estimate(make_field(id), 1.0, 16, 2);
    REQUIRE(est.phi1.has_value());
    REQUIRE(est.bound_holds.has_value());
    CHECK(*est.bound_holds);
    CHECK(est.sup <= *est.phi1 * (1.0 + 1e-6) + 1e-12);
  }
}

TEST_CASE("morrey bound is not asserted beyond the unit ball") {
  MorreyEstimate est = morrey_estimate(make_abc(1, 1, 1), 2.0, 8, 2);
  CHECK(est.phi1.has_value());
  CHECK_FALSE(est.bound_holds.has_value());
  CHECK_THROWS_AS(morrey_estimate(make_zero(), 0.0, 8, 2), std::invalid_argument);
  CHECK_THROWS_AS(morrey_estimate(make_zero(), 1.0, 0, 2), std::invalid_argument);
}

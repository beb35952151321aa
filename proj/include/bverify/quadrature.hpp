#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bverify/field.hpp"
#include "bverify/vec3.hpp"

namespace bverify {

// ============================================================================
// Deterministic quadrature over spheres, balls, and weighted shells.
//
// Sphere rule: Gauss-Legendre in cos(theta) crossed with a uniform trapezoid
// in the azimuth; exact for spherical harmonics up to degree
// min(2 n_theta - 1, n_phi - 1).  Radial direction: composite Gauss-Legendre
// panels of width <= panel_width, clustered geometrically towards the inner
// radius when the weight |x|^-alpha is strong there.  Every integral is
// certified by doubling the rule until the value moves by less than
// refine_tol relative to the integrand's absolute mass (so cancelling
// integrals are gated by their conditioning, not an impossible relative
// target); failure to converge raises ConvergenceError.
// ============================================================================

struct QuadConfig {
  int n_theta = 0;    // polar nodes; 0 = automatic (see auto_n_theta)
  int n_phi = 0;      // azimuthal nodes; 0 = automatic (2 * n_theta)
  // order 16 resolves several trigonometric wavelengths per panel, so a width
  // of 4 keeps radial error near machine precision for every catalog field
  // while the doubling certificate guards the general case
  double panel_width = 4.0;
  int panel_order = 16;
  double refine_tol = 1e-9;
  int max_refinements = 3;
  int tensor_order = 24;     // per-axis order of box rules (weak form, mollifier)
  int inner_order = 8;       // per-axis order of the nested mollification rule
  double node_budget = 4e8;  // abort guard for nested quadrature
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double prev, double last)
      : std::runtime_error(what), previous(prev), latest(last) {}
  double previous;
  double latest;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// rules
// ---------------------------------------------------------------------------

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // positive, sum = 2
};

GaussRule gauss_legendre(int n);

class SphereRule {
 public:
  SphereRule(int n_theta, int n_phi);

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const { return static_cast<std::size_t>(n_theta_) * n_phi_; }
  double weight_sum() const;  // = 4 pi up to rounding

  // visits unit-sphere nodes in a fixed (theta-major) order
  template <class F>
  void for_each(F&& fn) const {
    for (int i = 0; i < n_theta_; ++i) {
      double ct = cos_theta_[i], st = sin_theta_[i], w = theta_weight_[i] * phi_weight_;
      for (int j = 0; j < n_phi_; ++j)
        fn(Vec3{st * cos_phi_[j], st * sin_phi_[j], ct}, w);
    }
  }

 private:
  int n_theta_, n_phi_;
  std::vector<double> cos_theta_, sin_theta_, theta_weight_;
  std::vector<double> cos_phi_, sin_phi_;
  double phi_weight_;
};

// Automatic polar order: trigonometric fields oscillate with O(R) cycles
// across a sphere of radius R, so the rule grows with the radius; fields with
// bounded angular complexity keep the floor.
int auto_n_theta(const AnalyticField& f, double R, const QuadConfig& cfg);
int auto_n_phi(int n_theta, const QuadConfig& cfg);

// ---------------------------------------------------------------------------
// integrands
// ---------------------------------------------------------------------------

// evaluated with the point and the (already computed) field sample there
using PointFunctional = std::function<double(const Vec3& x, const FieldSample& s)>;

namespace functional {
PointFunctional pressure();                 // p
PointFunctional speed();                    // |u|
PointFunctional speed2();                   // |u|^2
PointFunctional normal2();                  // |u_N|^2
PointFunctional tangential2();              // |u_T|^2
PointFunctional tangential_pow(double q);   // |u_T|^q
PointFunctional mvf_surface();              // p + |u_N|^2
PointFunctional mvf_volume();               // 3p + |u|^2
PointFunctional deriv_surface();            // 2p + |u_T|^2
PointFunctional alpha_volume(double alpha); // (3-alpha) p + |u|^2 - alpha |u_N|^2
PointFunctional tangential_excess();        // |u_T|^2 - |u_N|^2
}  // namespace functional

// ---------------------------------------------------------------------------
// integrals (each self-converged by doubling; ConvergenceError on failure)
// ---------------------------------------------------------------------------

// integral of g over the sphere |x| = R (surface measure); R > 0
double sphere_integral(const AnalyticField& f, const PointFunctional& g, double R,
                       const QuadConfig& cfg = {});
std::vector<double> sphere_integral_multi(const AnalyticField& f,
                                          std::span<const PointFunctional> gs, double R,
                                          const QuadConfig& cfg = {});

// integral of g over the ball |x| <= R
double ball_integral(const AnalyticField& f, const PointFunctional& g, double R,
                     const QuadConfig& cfg = {});

// integral of g(x) |x|^-alpha over the shell r < |x| < R; r = 0 requires alpha < 3
double shell_weighted_integral(const AnalyticField& f, const PointFunctional& g, double r,
                               double R, double alpha, const QuadConfig& cfg = {});
std::vector<double> shell_weighted_integral_multi(const AnalyticField& f,
                                                  std::span<const PointFunctional> gs, double r,
                                                  double R, double alpha,
                                                  const QuadConfig& cfg = {});

// max of g over the rule nodes on |x| = R: a certified lower bound on the sup
double sup_on_sphere(const AnalyticField& f, const PointFunctional& g, double R,
                     const QuadConfig& cfg = {});

// scalar variants for plain functions of position
double ball_integral(const std::function<double(const Vec3&)>& g, double R,
                     const QuadConfig& cfg = {});

}  // namespace bverify

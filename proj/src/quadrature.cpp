#include "bverify/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bverify/compensated.hpp"

namespace bverify {

namespace {

constexpr double kAbsFloor = 1e-14;  // below this mass, convergence is judged absolutely

}  // namespace

// ============================================================================
// Gauss-Legendre rule: Newton iteration on the Legendre recurrence
// ============================================================================

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // i-th root counted from +1, Abramowitz-Stegun starting guess
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    if (n % 2 == 1 && i == m - 1) z = 0.0;  // symmetric middle node
    double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

// ============================================================================
// sphere rule
// ============================================================================

SphereRule::SphereRule(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("SphereRule: orders must be >= 1");
  GaussRule gl = gauss_legendre(n_theta);
  cos_theta_ = std::move(gl.nodes);
  theta_weight_ = std::move(gl.weights);
  sin_theta_.resize(n_theta);
  for (int i = 0; i < n_theta; ++i)
    sin_theta_[i] = std::sqrt(std::max(0.0, 1.0 - cos_theta_[i] * cos_theta_[i]));
  cos_phi_.resize(n_phi);
  sin_phi_.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) {
    double phi = 2.0 * std::numbers::pi * j / n_phi;
    cos_phi_[j] = std::cos(phi);
    sin_phi_[j] = std::sin(phi);
  }
  phi_weight_ = 2.0 * std::numbers::pi / n_phi;
}

double SphereRule::weight_sum() const {
  CompensatedSum acc;
  for (int i = 0; i < n_theta_; ++i)
    for (int j = 0; j < n_phi_; ++j) acc.add(theta_weight_[i] * phi_weight_);
  return acc.value();
}

int auto_n_theta(const AnalyticField& f, double R, const QuadConfig& cfg) {
  if (cfg.n_theta > 0) return cfg.n_theta;
  if (!f.oscillatory()) return 32;
  return std::max(32, static_cast<int>(std::ceil(4.0 * R)) + 16);
}

int auto_n_phi(int n_theta, const QuadConfig& cfg) {
  return cfg.n_phi > 0 ? cfg.n_phi : 2 * n_theta;
}

// ============================================================================
// level evaluation
// ============================================================================

namespace {

// quadrature sums carry the signed value and the accumulated absolute mass
// of the integrand; the mass is the conditioning scale of the sum and gates
// self-convergence, so cancelling integrals (true value near zero) are not
// held to an impossible relative target
struct LevelSums {
  std::vector<double> val;
  std::vector<double> mag;
};

// sum_j w_j g_k(s omega_j) over the unit-sphere rule (surface integral / s^2);
// f may be null for plain position functionals
LevelSums angular_sums(const AnalyticField* f, std::span<const PointFunctional> gs,
                       const SphereRule& rule, double s) {
  std::vector<CompensatedSum> acc(gs.size());
  std::vector<CompensatedSum> mass(gs.size());
  rule.for_each([&](const Vec3& omega, double w) {
    Vec3 x = s * omega;
    FieldSample smp = f ? (*f)(x) : FieldSample{};
    for (std::size_t k = 0; k < gs.size(); ++k) {
      double v = gs[k](x, smp);
      acc[k].add(w * v);
      mass[k].add(w * std::fabs(v));
    }
  });
  LevelSums out;
  out.val.resize(gs.size());
  out.mag.resize(gs.size());
  for (std::size_t k = 0; k < gs.size(); ++k) {
    out.val[k] = acc[k].value();
    out.mag[k] = mass[k].value();
  }
  return out;
}

LevelSums sphere_level(const AnalyticField* f, std::span<const PointFunctional> gs, double R,
                       int nt, int np) {
  SphereRule rule(nt, np);
  LevelSums v = angular_sums(f, gs, rule, R);
  for (double& x : v.val) x *= R * R;
  for (double& x : v.mag) x *= R * R;
  return v;
}

// Panel breakpoints for the radial integral of s^(2-alpha) * angular(s) over
// [r, R].  Uniform panels of width <= panel_width; when the weight varies
// strongly across the first panel (alpha > 1 and r below one panel width) the
// first panel is split geometrically towards the inner edge.
std::vector<double> radial_breakpoints(double r, double R, double width, double alpha) {
  int n = std::max(1, static_cast<int>(std::ceil((R - r) / width)));
  double step = (R - r) / n;
  std::vector<double> bp;
  if (alpha > 1.0 && r < step) {
    double b1 = r + step;
    if (r == 0.0) {
      bp.push_back(0.0);
      for (int k = 44; k >= 0; --k) bp.push_back(std::ldexp(b1, -k));
    } else {
      int m = std::max(1, static_cast<int>(std::ceil(std::log2(b1 / r))));
      for (int k = 0; k <= m; ++k) bp.push_back(r * std::pow(b1 / r, double(k) / m));
    }
    for (int i = 2; i <= n; ++i) bp.push_back(r + i * step);
  } else {
    for (int i = 0; i <= n; ++i) bp.push_back(r + i * step);
  }
  bp.back() = R;
  return bp;
}

LevelSums shell_level(const AnalyticField* f, std::span<const PointFunctional> gs, double r,
                      double R, double alpha, int nt, int np, int porder, double pwidth) {
  SphereRule rule(nt, np);
  GaussRule gl = gauss_legendre(porder);
  std::vector<double> bp = radial_breakpoints(r, R, pwidth, alpha);
  std::vector<CompensatedSum> acc(gs.size());
  std::vector<CompensatedSum> mass(gs.size());
  for (std::size_t pnl = 0; pnl + 1 < bp.size(); ++pnl) {
    double mid = 0.5 * (bp[pnl] + bp[pnl + 1]);
    double half = 0.5 * (bp[pnl + 1] - bp[pnl]);
    for (int q = 0; q < porder; ++q) {
      double s = mid + half * gl.nodes[q];
      double radial = (alpha == 0.0) ? s * s : std::pow(s, 2.0 - alpha);
      double ws = half * gl.weights[q] * radial;
      LevelSums ang = angular_sums(f, gs, rule, s);
      for (std::size_t k = 0; k < gs.size(); ++k) {
        acc[k].add(ws * ang.val[k]);
        mass[k].add(ws * ang.mag[k]);
      }
    }
  }
  LevelSums out;
  out.val.resize(gs.size());
  out.mag.resize(gs.size());
  for (std::size_t k = 0; k < gs.size(); ++k) {
    out.val[k] = acc[k].value();
    out.mag[k] = mass[k].value();
  }
  return out;
}

// doubles the rule until every component moves by less than refine_tol
// relative to its absolute mass
template <class LevelFn>
std::vector<double> converge(LevelFn&& level, const QuadConfig& cfg, const char* what) {
  LevelSums prev = level(0);
  std::size_t bad = 0;
  for (int lvl = 1; lvl <= cfg.max_refinements; ++lvl) {
    LevelSums next = level(lvl);
    bool ok = true;
    for (std::size_t k = 0; k < next.val.size(); ++k)
      if (std::fabs(next.val[k] - prev.val[k]) >
          cfg.refine_tol * std::max({std::fabs(next.val[k]), next.mag[k], kAbsFloor})) {
        ok = false;
        bad = k;
      }
    if (ok) return next.val;
    if (lvl == cfg.max_refinements)
      throw ConvergenceError(std::string(what) + ": no self-convergence within max_refinements",
                             prev.val[bad], next.val[bad]);
    prev = std::move(next);
  }
  return std::move(prev.val);  // max_refinements == 0: accept the base level
}

void check_sphere_args(double R) {
  if (!(R > 0.0)) throw std::invalid_argument("sphere integral: radius must be positive");
}

void check_shell_args(double r, double R, double alpha) {
  if (!(r >= 0.0) || !(R > r)) throw std::invalid_argument("shell integral: need 0 <= r < R");
  if (r == 0.0 && alpha >= 3.0)
    throw std::domain_error("shell integral: weight |x|^-alpha not integrable at 0 for alpha >= 3");
}

}  // namespace

// ============================================================================
// public entry points
// ============================================================================

std::vector<double> sphere_integral_multi(const AnalyticField& f,
                                          std::span<const PointFunctional> gs, double R,
                                          const QuadConfig& cfg) {
  check_sphere_args(R);
  int nt = auto_n_theta(f, R, cfg), np = auto_n_phi(nt, cfg);
  return converge(
      [&](int lvl) { return sphere_level(&f, gs, R, nt << lvl, np << lvl); }, cfg,
      "sphere_integral");
}

double sphere_integral(const AnalyticField& f, const PointFunctional& g, double R,
                       const QuadConfig& cfg) {
  return sphere_integral_multi(f, std::span<const PointFunctional>(&g, 1), R, cfg)[0];
}

std::vector<double> shell_weighted_integral_multi(const AnalyticField& f,
                                                  std::span<const PointFunctional> gs, double r,
                                                  double R, double alpha, const QuadConfig& cfg) {
  check_shell_args(r, R, alpha);
  int nt = auto_n_theta(f, R, cfg), np = auto_n_phi(nt, cfg);
  return converge(
      [&](int lvl) {
        return shell_level(&f, gs, r, R, alpha, nt << lvl, np << lvl, cfg.panel_order << lvl,
                           cfg.panel_width);
      },
      cfg, "shell_weighted_integral");
}

double shell_weighted_integral(const AnalyticField& f, const PointFunctional& g, double r,
                               double R, double alpha, const QuadConfig& cfg) {
  return shell_weighted_integral_multi(f, std::span<const PointFunctional>(&g, 1), r, R, alpha,
                                       cfg)[0];
}

double ball_integral(const AnalyticField& f, const PointFunctional& g, double R,
                     const QuadConfig& cfg) {
  return shell_weighted_integral(f, g, 0.0, R, 0.0, cfg);
}

double ball_integral(const std::function<double(const Vec3&)>& g, double R,
                     const QuadConfig& cfg) {
  PointFunctional wrap = [&g](const Vec3& x, const FieldSample&) { return g(x); };
  check_shell_args(0.0, R, 0.0);
  int nt = cfg.n_theta > 0 ? cfg.n_theta : 32;
  int np = auto_n_phi(nt, cfg);
  std::span<const PointFunctional> gs(&wrap, 1);
  return converge(
      [&](int lvl) {
        return shell_level(nullptr, gs, 0.0, R, 0.0, nt << lvl, np << lvl,
                           cfg.panel_order << lvl, cfg.panel_width);
      },
      cfg, "ball_integral")[0];
}

double sup_on_sphere(const AnalyticField& f, const PointFunctional& g, double R,
                     const QuadConfig& cfg) {
  check_sphere_args(R);
  SphereRule rule(auto_n_theta(f, R, cfg), auto_n_phi(auto_n_theta(f, R, cfg), cfg));
  double best = -std::numeric_limits<double>::infinity();
  rule.for_each([&](const Vec3& omega, double) {
    Vec3 x = R * omega;
    best = std::max(best, g(x, f(x)));
  });
  return best;
}

// ============================================================================
// standard integrands
// ============================================================================

namespace functional {

PointFunctional pressure() {
  return [](const Vec3&, const FieldSample& s) { return s.p; };
}

PointFunctional speed() {
  return [](const Vec3&, const FieldSample& s) { return norm(s.u); };
}

PointFunctional speed2() {
  return [](const Vec3&, const FieldSample& s) { return norm2(s.u); };
}

PointFunctional normal2() {
  return [](const Vec3& x, const FieldSample& s) {
    double d = dot(s.u, x);
    return d * d / norm2(x);
  };
}

PointFunctional tangential2() {
  return [](const Vec3& x, const FieldSample& s) {
    double d = dot(s.u, x);
    return std::max(0.0, norm2(s.u) - d * d / norm2(x));
  };
}

PointFunctional tangential_pow(double q) {
  return [q](const Vec3& x, const FieldSample& s) {
    double d = dot(s.u, x);
    double t2 = std::max(0.0, norm2(s.u) - d * d / norm2(x));
    return std::pow(t2, 0.5 * q);
  };
}

PointFunctional mvf_surface() {
  return [](const Vec3& x, const FieldSample& s) {
    double d = dot(s.u, x);
    return s.p + d * d / norm2(x);
  };
}

PointFunctional mvf_volume() {
  return [](const Vec3&, const FieldSample& s) { return 3.0 * s.p + norm2(s.u); };
}

PointFunctional deriv_surface() {
  return [](const Vec3& x, const FieldSample& s) {
    double d = dot(s.u, x);
    return 2.0 * s.p + std::max(0.0, norm2(s.u) - d * d / norm2(x));
  };
}

PointFunctional alpha_volume(double alpha) {
  return [alpha](const Vec3& x, const FieldSample& s) {
    double d = dot(s.u, x);
    return (3.0 - alpha) * s.p + norm2(s.u) - alpha * d * d / norm2(x);
  };
}

PointFunctional tangential_excess() {
  return [](const Vec3& x, const FieldSample& s) {
    double d = dot(s.u, x);
    return norm2(s.u) - 2.0 * d * d / norm2(x);
  };
}

}  // namespace functional

}  // namespace bverify

#include "bverify/identities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bverify {

namespace {

constexpr double kFloor = 1e-14;

void require_beltrami(const AnalyticField& f, const char* what) {
  if (!f.beltrami())
    throw std::domain_error(std::string(what) + ": field is not a curl eigenfield");
}

}  // namespace

double phi(const AnalyticField& f, double r, const QuadConfig& cfg) {
  return -2.0 * sphere_integral(f, functional::mvf_surface(), r, cfg);
}

double phi_volume(const AnalyticField& f, double r, const QuadConfig& cfg) {
  return -2.0 / r * ball_integral(f, functional::mvf_volume(), r, cfg);
}

double phi_prime_fd(const AnalyticField& f, double R, double h, const QuadConfig& cfg) {
  if (!(h > 0.0) || !(R > h)) throw std::invalid_argument("phi_prime_fd: need 0 < h < R");
  QuadConfig tight = cfg;
  tight.refine_tol = std::min(cfg.refine_tol, 1e-12);
  auto diff = [&](double hh) {
    return (phi(f, R + hh, tight) - phi(f, R - hh, tight)) / (2.0 * hh);
  };
  double coarse = diff(h);
  double fine = diff(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;  // cancels the O(h^2) error term
}

std::vector<double> linear_grid(double a, double b, int n) {
  if (n < 2 || !(b > a)) throw std::invalid_argument("linear_grid: need n >= 2 and b > a");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  g.back() = b;
  return g;
}

std::vector<double> log_grid(double a, double b, int n) {
  if (n < 2 || !(a > 0.0) || !(b > a))
    throw std::invalid_argument("log_grid: need n >= 2 and 0 < a < b");
  std::vector<double> g(n);
  double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) g[i] = std::exp(la + (lb - la) * i / (n - 1));
  g.back() = b;
  return g;
}

IdentityReport check_mvf(const AnalyticField& f, double R, const QuadConfig& cfg, double tol) {
  // reported in the raw form integral_{|x|=R} (p + |u_N|^2) dS
  //                          = (1/R) integral_{B_R} (3p + |u|^2) dx;
  // the flux phi is -2 times either side
  double lhs = sphere_integral(f, functional::mvf_surface(), R, cfg);
  double rhs = ball_integral(f, functional::mvf_volume(), R, cfg) / R;
  IdentityParams p;
  p.R = R;
  return make_equality_report(f.id(), "mvf", p, lhs, rhs, tol, cfg);
}

IdentityReport check_alpha_identity(const AnalyticField& f, double r, double R, double alpha,
                                    const QuadConfig& cfg, double tol) {
  if (!(r > 0.0) || !(R > r))
    throw std::invalid_argument("check_alpha_identity: need 0 < r < R");
  double lhs = std::pow(R, 1.0 - alpha) * phi(f, R, cfg) - std::pow(r, 1.0 - alpha) * phi(f, r, cfg);
  double rhs = -2.0 * shell_weighted_integral(f, functional::alpha_volume(alpha), r, R, alpha, cfg);
  IdentityParams p;
  p.R = R;
  p.r = r;
  p.alpha = alpha;
  return make_equality_report(f.id(), "alpha", p, lhs, rhs, tol, cfg);
}

DerivativeReports check_derivative_identities(const AnalyticField& f, double R,
                                              const QuadConfig& cfg, double tol, double h) {
  if (h <= 0.0) h = std::max(1e-3, 1e-3 * R);
  double dphi = phi_prime_fd(f, R, h, cfg);
  double phiR = phi(f, R, cfg);

  const PointFunctional surf[] = {functional::mvf_volume(), functional::deriv_surface()};
  std::vector<double> s = sphere_integral_multi(f, surf, R, cfg);

  IdentityParams p;
  p.R = R;
  p.h = h;
  DerivativeReports out;
  out.combined =
      make_equality_report(f.id(), "deriv_combined", p, phiR + R * dphi, -2.0 * s[0], tol, cfg);
  out.slope = make_equality_report(f.id(), "deriv_slope", p, dphi, -2.0 / R * s[1], tol, cfg);
  return out;
}

IdentityReport check_beltrami_phi(const AnalyticField& f, double r, const QuadConfig& cfg,
                                  double tol) {
  require_beltrami(f, "check_beltrami_phi");
  double a = sphere_integral(f, functional::tangential_excess(), r, cfg);
  double b = phi(f, r, cfg);
  double c = 1.0 / r * ball_integral(f, functional::speed2(), r, cfg);
  IdentityParams p;
  p.r = r;
  IdentityReport rep = make_equality_report(f.id(), "beltrami_phi", p, a, c, tol, cfg);
  double scale = std::max({std::fabs(a), std::fabs(b), std::fabs(c), kFloor});
  rep.abs_residual = std::max({std::fabs(a - b), std::fabs(a - c), std::fabs(b - c)});
  rep.rel_residual = rep.abs_residual / scale;
  bool all_tiny = scale <= kFloor;
  rep.pass = rep.rel_residual <= tol || (all_tiny && rep.abs_residual <= tol);
  return rep;
}

IdentityReport check_normal_bound(const AnalyticField& f, double R, const QuadConfig& cfg,
                                  double tol) {
  double lhs = shell_weighted_integral(f, functional::normal2(), 0.0, R, 1.0, cfg);
  double rhs = 0.5 / R * ball_integral(f, functional::speed2(), R, cfg);
  IdentityParams p;
  p.R = R;
  p.alpha = 1.0;
  return make_inequality_report(f.id(), "normal_bound", p, lhs, rhs, tol, cfg);
}

IdentityReport check_shell_identity(const AnalyticField& f, double r, double R,
                                    const QuadConfig& cfg, double tol) {
  require_beltrami(f, "check_shell_identity");
  if (!(r > 0.0) || !(R > r))
    throw std::invalid_argument("check_shell_identity: need 0 < r < R");
  double lhs = 2.0 * shell_weighted_integral(f, functional::normal2(), r, R, 1.0, cfg);
  double rhs = phi(f, R, cfg) - phi(f, r, cfg);
  IdentityParams p;
  p.R = R;
  p.r = r;
  p.alpha = 1.0;
  return make_equality_report(f.id(), "shell", p, lhs, rhs, tol, cfg);
}

EnergyChainReport check_energy_chain(const AnalyticField& f, const QuadConfig& cfg, double tol) {
  require_beltrami(f, "check_energy_chain");
  EnergyChainReport rep;

  const PointFunctional ball[] = {functional::speed2(), functional::tangential_excess()};
  std::vector<double> b2 = shell_weighted_integral_multi(f, ball, 0.0, 2.0, 0.0, cfg);
  rep.energy_b2 = b2[0];
  rep.excess_b2 = b2[1];
  // integral_1^2 phi(r) dr collapses to an unweighted shell integral because
  // dx = dS dr along radii
  rep.flux_integral =
      -2.0 * shell_weighted_integral(f, functional::mvf_surface(), 1.0, 2.0, 0.0, cfg);
  rep.phi_at_1 = phi(f, 1.0, cfg);

  IdentityParams p;
  p.R = 2.0;
  rep.links.push_back(make_inequality_report(f.id(), "energy_chain_excess", p, rep.excess_b2,
                                             rep.energy_b2, tol, cfg));
  rep.links.push_back(make_inequality_report(f.id(), "energy_chain_flux", p, rep.flux_integral,
                                             rep.excess_b2, tol, cfg));
  IdentityParams p1;
  p1.R = 1.0;
  rep.links.push_back(make_inequality_report(f.id(), "energy_chain_phi", p1, rep.phi_at_1,
                                             rep.flux_integral, tol, cfg));
  rep.pass = std::all_of(rep.links.begin(), rep.links.end(),
                         [](const IdentityReport& r) { return r.pass; });
  return rep;
}

PhiProfile phi_profile(const AnalyticField& f, const std::vector<double>& radii,
                       const QuadConfig& cfg) {
  PhiProfile prof;
  prof.field = f.id();
  const PointFunctional gs[] = {functional::pressure(), functional::normal2(),
                                functional::tangential2(), functional::speed2()};
  for (double r : radii) {
    std::vector<double> v = sphere_integral_multi(f, gs, r, cfg);
    prof.r.push_back(r);
    prof.surf_p.push_back(v[0]);
    prof.surf_uN2.push_back(v[1]);
    prof.surf_uT2.push_back(v[2]);
    prof.surf_u2.push_back(v[3]);
    prof.phi.push_back(-2.0 * (v[0] + v[1]));
  }
  return prof;
}

MonotoneVerdict check_monotone(const PhiProfile& profile, double slack_rel) {
  MonotoneVerdict v;
  v.monotone = true;
  for (std::size_t i = 0; i + 1 < profile.phi.size(); ++i) {
    double a = profile.phi[i], b = profile.phi[i + 1];
    double slack = slack_rel * std::max({std::fabs(a), std::fabs(b), kFloor});
    double drop = a - b;
    if (drop > slack && drop > v.max_violation) {
      v.monotone = false;
      v.max_violation = drop;
      v.at_r = profile.r[i + 1];
    }
  }
  return v;
}

}  // namespace bverify

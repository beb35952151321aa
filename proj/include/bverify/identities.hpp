#pragma once

#include <vector>

#include "bverify/field.hpp"
#include "bverify/quadrature.hpp"
#include "bverify/report.hpp"

namespace bverify {

// ============================================================================
// Integral identities for stationary flows with normalized pressure.
//
// The central object is the flux
//
//     phi(r) = -2 * integral_{|x|=r} (p + |u_N|^2) dS,
//
// which admits several independent integral representations.  Each check
// below evaluates two (or three) of them through separate quadrature routes
// and reports the residual.
// ============================================================================

// surface route
double phi(const AnalyticField& f, double r, const QuadConfig& cfg = {});
// volume route: -(2/r) * integral_{B_r} (3p + |u|^2) dx
double phi_volume(const AnalyticField& f, double r, const QuadConfig& cfg = {});
// Richardson-extrapolated central difference; phi evaluations run at a
// tightened refine tolerance so differencing does not amplify quadrature noise
double phi_prime_fd(const AnalyticField& f, double R, double h, const QuadConfig& cfg = {});

// grids for radial scans
std::vector<double> linear_grid(double a, double b, int n);
std::vector<double> log_grid(double a, double b, int n);

// surface route vs ball average route, reported in raw form:
//   integral_{|x|=R} (p + |u_N|^2) dS = (1/R) integral_{B_R} (3p + |u|^2) dx
// (each side is -phi(R)/2)
IdentityReport check_mvf(const AnalyticField& f, double R, const QuadConfig& cfg = {},
                         double tol = kTolEquality);

// weighted two-radius generalization: for any alpha,
//   R^(1-alpha) phi(R) - r^(1-alpha) phi(r)
//     = -2 * integral_{r<|x|<R} {(3-alpha) p + |u|^2 - alpha |u_N|^2} |x|^-alpha dx
IdentityReport check_alpha_identity(const AnalyticField& f, double r, double R, double alpha,
                                    const QuadConfig& cfg = {}, double tol = kTolEquality);

// differential forms of the same family at a single radius:
//   combined:  phi(R) + R phi'(R) = -2 * integral_{|x|=R} (3p + |u|^2) dS
//   slope:     phi'(R) = -(2/R) * integral_{|x|=R} (2p + |u_T|^2) dS
struct DerivativeReports {
  IdentityReport combined;
  IdentityReport slope;
};
DerivativeReports check_derivative_identities(const AnalyticField& f, double R,
                                              const QuadConfig& cfg = {},
                                              double tol = kTolDerivative, double h = 0.0);

// for curl eigenfields the pressure drops out of the flux:
//   phi(r) = integral_{|x|=r} (|u_T|^2 - |u_N|^2) dS = (1/r) integral_{B_r} |u|^2 dx
// (three-way check; the residual is the largest pairwise gap)
IdentityReport check_beltrami_phi(const AnalyticField& f, double r, const QuadConfig& cfg = {},
                                  double tol = kTolEquality);

// weighted normal-energy bound (one-sided):
//   integral_{B_R} |u_N|^2 / |x| dx <= (1/2R) integral_{B_R} |u|^2 dx
IdentityReport check_normal_bound(const AnalyticField& f, double R, const QuadConfig& cfg = {},
                                  double tol = kTolEquality);

// flux difference as a weighted shell integral (curl eigenfields):
//   2 * integral_{r<|x|<R} |u_N|^2 / |x| dx = phi(R) - phi(r)
IdentityReport check_shell_identity(const AnalyticField& f, double r, double R,
                                    const QuadConfig& cfg = {}, double tol = kTolEquality);

// chain of inequalities tying the energy on B_2 to phi(1) (curl eigenfields):
//   integral_{B_2} |u|^2 >= integral_{B_2} (|u_T|^2 - |u_N|^2)
//                        >= integral_1^2 phi(r) dr >= phi(1)
struct EnergyChainReport {
  double energy_b2 = 0.0;
  double excess_b2 = 0.0;
  double flux_integral = 0.0;
  double phi_at_1 = 0.0;
  std::vector<IdentityReport> links;
  bool pass = false;
};
EnergyChainReport check_energy_chain(const AnalyticField& f, const QuadConfig& cfg = {},
                                     double tol = kTolEquality);

// radial scan; one field evaluation pass per radius serves all columns
PhiProfile phi_profile(const AnalyticField& f, const std::vector<double>& radii,
                       const QuadConfig& cfg = {});

// nondecreasing check with relative slack for quadrature noise
MonotoneVerdict check_monotone(const PhiProfile& profile, double slack_rel = 1e-9);

}  // namespace bverify

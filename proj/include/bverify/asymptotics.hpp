#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "bverify/field.hpp"
#include "bverify/quadrature.hpp"
#include "bverify/report.hpp"

namespace bverify {

// ============================================================================
// Large-radius diagnostics: decay scans of the tangential surface energy
//
//     t(R) = integral_{|x|=R} |u_T|^2 dS,
//
// weighted radial tails, the tangential/normal tail dichotomy for
// algebraically decaying fields, and a small-ball Morrey estimator.  All
// scans work on finite grids and certify behavior only up to the largest
// sampled radius; the verdict names say so.
// ============================================================================

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// --------------------------------------------------------------------------
// decay scan
// --------------------------------------------------------------------------

enum class DecayClassification { trivial, sequence_found, no_sequence_up_to_Rmax };
const char* to_string(DecayClassification c);

struct DecayVerdict {
  std::string field;
  std::vector<double> R;
  std::vector<double> t;  // tangential surface energy per radius
  double max_t = 0.0;
  double inf_t = 0.0;
  double inf_at_R = 0.0;
  double trend_exponent = 0.0;  // decade-averaged log-log slope over the top two decades
  DecayClassification classification = DecayClassification::trivial;
  // set when t vanishes along a subsequence yet the field is demonstrably
  // nonzero on one of those spheres; impossible for an exact curl eigenfield
  // with normalized pressure, so it only fires on corrupted inputs
  bool contradiction = false;
  double max_speed_at_vanishing = 0.0;
};

std::vector<double> tangential_profile(const AnalyticField& f, const std::vector<double>& radii,
                                       const QuadConfig& cfg = {});

DecayVerdict liouville_scan(const AnalyticField& f, double R_min, double R_max, int grid_size,
                            const QuadConfig& cfg = {});

// --------------------------------------------------------------------------
// Hoelder chain on a sphere: with area |S_R| = 4 pi R^2 and q in (2, 3],
//   integral |u_T|^2 dS <= (4 pi)^((q-2)/q) R^(2(q-2)/q) (integral |u_T|^q dS)^(2/q)
// --------------------------------------------------------------------------

IdentityReport holder_chain_check(const AnalyticField& f, double R, double q,
                                  const QuadConfig& cfg = {}, double tol = kTolEquality);

// --------------------------------------------------------------------------
// weighted radial tails
// --------------------------------------------------------------------------

struct WeightedTail {
  std::string field;
  double mu = 1.0;
  std::vector<double> R;
  std::vector<double> I;  // cumulative integral of s^-mu t(s) ds from 0
  LinearFit fit;          // I against ln R
};

// I(R) = integral_0^R s^-mu t(s) ds, evaluated as a weighted ball integral;
// mu <= 1 keeps the weight integrable alongside the field's decay range
WeightedTail weighted_radial_tail(const AnalyticField& f, double mu,
                                  const std::vector<double>& R_grid,
                                  const QuadConfig& cfg = {});

// tails of |u_T|^2/|x| and |u_N|^2/|x| for an algebraically decaying field:
// the first should diverge logarithmically, the second converge
struct DichotomyReport {
  WeightedTail tangential;
  WeightedTail normal;
  double normal_last_decade_fraction = 0.0;
  bool tangential_diverges = false;  // fit r^2 >= 0.99 with positive slope
  bool normal_converges = false;     // last decade adds <= 1% of the total
  bool pass = false;
};

DichotomyReport tail_dichotomy(const AnalyticField& f, const std::vector<double>& R_grid,
                               const QuadConfig& cfg = {});

// --------------------------------------------------------------------------
// small-ball energy estimator
// --------------------------------------------------------------------------

struct MorreyEstimate {
  std::string field;
  std::vector<double> rho;
  std::vector<double> value;  // rho^-1 * integral_{B_rho} |u|^2 dx
  double sup = 0.0;           // over the grid: a lower bound on the true sup
  double at_rho = 0.0;
  std::optional<double> phi1;       // flux at radius 1, for curl eigenfields
  std::optional<bool> bound_holds;  // sup <= phi1 within tolerance (rho_max <= 1)
};

MorreyEstimate morrey_estimate(const AnalyticField& f, double rho_max, int per_decade = 64,
                               int decades = 4, double tol = 1e-6, const QuadConfig& cfg = {});

// JSON summaries (grids included for the scan types; CSV carries the rest)
nlohmann::ordered_json to_json(const DecayVerdict& v);
nlohmann::ordered_json to_json(const WeightedTail& t);
nlohmann::ordered_json to_json(const DichotomyReport& d);
nlohmann::ordered_json to_json(const MorreyEstimate& m);

}  // namespace bverify

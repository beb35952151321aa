#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bverify/quadrature.hpp"

namespace bverify {

// ============================================================================
// Check results and their machine-readable serialization.
//
// Every check reduces to an IdentityReport: two independently computed
// numbers, their residuals, and a verdict.  Equality checks pass when the
// relative residual is within tolerance; one-sided checks pass when lhs
// exceeds rhs by no more than the tolerance-scaled slack.
// ============================================================================

struct IdentityParams {
  std::optional<double> R;
  std::optional<double> r;
  std::optional<double> alpha;
  std::optional<double> h;
  std::optional<double> eps;
  std::optional<double> q;
  std::optional<double> mu;
};

struct IdentityReport {
  std::string field;
  std::string identity;
  IdentityParams params;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  QuadConfig quad;
};

// radial scan of the normalized flux and its surface components
struct PhiProfile {
  std::string field;
  std::vector<double> r;
  std::vector<double> phi;
  std::vector<double> surf_p;    // integral of p over |x| = r
  std::vector<double> surf_uN2;  // integral of |u_N|^2
  std::vector<double> surf_uT2;  // integral of |u_T|^2
  std::vector<double> surf_u2;   // integral of |u|^2
};

struct MonotoneVerdict {
  bool monotone = false;
  double max_violation = 0.0;  // largest decrease between consecutive samples
  double at_r = 0.0;           // radius where it occurred
};

struct RunManifest {
  std::string command;
  std::string field;
  std::string grid;
  std::uint64_t seed = 0;
  QuadConfig quad;
  std::string version = "0.1.0";
  std::string timestamp;  // ISO 8601 UTC; excluded from reproducibility diffs
};

// default tolerances: quadrature is certified to ~1e-9, so 1e-6 on algebraic
// identities leaves three decades of headroom; finite differencing of the
// flux derivative is the least accurate step and gets a looser gate
inline constexpr double kTolEquality = 1e-6;
inline constexpr double kTolDerivative = 1e-5;

// shortest guaranteed-round-trip formatting for CSV cells
std::string fmt17(double v);
// RFC 4180 quoting for text cells that may contain separators
std::string csv_escape(const std::string& s);

// verdict assembly (see module comment for the pass rules)
IdentityReport make_equality_report(std::string field, std::string identity,
                                    IdentityParams params, double lhs, double rhs,
                                    double tolerance, const QuadConfig& quad);
IdentityReport make_inequality_report(std::string field, std::string identity,
                                      IdentityParams params, double lhs, double rhs,
                                      double tolerance, const QuadConfig& quad);

RunManifest make_manifest(std::string command, std::string field, std::string grid,
                          std::uint64_t seed, const QuadConfig& quad);

nlohmann::ordered_json to_json(const IdentityParams& p);
nlohmann::ordered_json to_json(const QuadConfig& q);
nlohmann::ordered_json to_json(const IdentityReport& r);
nlohmann::ordered_json to_json(const RunManifest& m);

std::string report_csv_header();
std::string report_csv_row(const IdentityReport& r);
std::string profile_csv_header();
std::string profile_csv_rows(const PhiProfile& p);

}  // namespace bverify

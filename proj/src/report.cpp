#include "bverify/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>

namespace bverify {

namespace {

constexpr double kFloor = 1e-14;  // scale below which residuals are judged absolutely

double residual_scale(double lhs, double rhs) {
  return std::max({std::fabs(lhs), std::fabs(rhs), kFloor});
}

std::string csv_opt(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

}  // namespace

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

IdentityReport make_equality_report(std::string field, std::string identity,
                                    IdentityParams params, double lhs, double rhs,
                                    double tolerance, const QuadConfig& quad) {
  IdentityReport rep;
  rep.field = std::move(field);
  rep.identity = std::move(identity);
  rep.params = params;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.abs_residual = std::fabs(lhs - rhs);
  rep.rel_residual = rep.abs_residual / residual_scale(lhs, rhs);
  rep.tolerance = tolerance;
  bool both_tiny = std::fabs(lhs) < kFloor && std::fabs(rhs) < kFloor;
  rep.pass = rep.rel_residual <= tolerance || (both_tiny && rep.abs_residual <= tolerance);
  rep.quad = quad;
  return rep;
}

// one-sided: asserts lhs <= rhs up to tolerance-scaled slack
IdentityReport make_inequality_report(std::string field, std::string identity,
                                      IdentityParams params, double lhs, double rhs,
                                      double tolerance, const QuadConfig& quad) {
  IdentityReport rep;
  rep.field = std::move(field);
  rep.identity = std::move(identity);
  rep.params = params;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.abs_residual = std::max(0.0, lhs - rhs);
  rep.rel_residual = rep.abs_residual / residual_scale(lhs, rhs);
  rep.tolerance = tolerance;
  double slack = std::max(tolerance * residual_scale(lhs, rhs), kFloor);
  rep.pass = lhs <= rhs + slack;
  rep.quad = quad;
  return rep;
}

RunManifest make_manifest(std::string command, std::string field, std::string grid,
                          std::uint64_t seed, const QuadConfig& quad) {
  RunManifest m;
  m.command = std::move(command);
  m.field = std::move(field);
  m.grid = std::move(grid);
  m.seed = seed;
  m.quad = quad;
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  m.timestamp = buf;
  return m;
}

nlohmann::ordered_json to_json(const IdentityParams& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (p.R) j["R"] = *p.R;
  if (p.r) j["r"] = *p.r;
  if (p.alpha) j["alpha"] = *p.alpha;
  if (p.h) j["h"] = *p.h;
  if (p.eps) j["eps"] = *p.eps;
  if (p.q) j["q"] = *p.q;
  if (p.mu) j["mu"] = *p.mu;
  return j;
}

nlohmann::ordered_json to_json(const QuadConfig& q) {
  nlohmann::ordered_json j;
  j["n_theta"] = q.n_theta;
  j["n_phi"] = q.n_phi;
  j["panel_width"] = q.panel_width;
  j["panel_order"] = q.panel_order;
  j["refine_tol"] = q.refine_tol;
  j["max_refinements"] = q.max_refinements;
  j["tensor_order"] = q.tensor_order;
  j["inner_order"] = q.inner_order;
  return j;
}

nlohmann::ordered_json to_json(const IdentityReport& r) {
  nlohmann::ordered_json j;
  j["field"] = r.field;
  j["identity"] = r.identity;
  j["params"] = to_json(r.params);
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["abs_residual"] = r.abs_residual;
  j["rel_residual"] = r.rel_residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["quad"] = to_json(r.quad);
  return j;
}

nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["field"] = m.field;
  j["grid"] = m.grid;
  j["seed"] = m.seed;
  j["quad"] = to_json(m.quad);
  j["version"] = m.version;
  j["timestamp"] = m.timestamp;
  return j;
}

std::string report_csv_header() {
  return "field,identity,R,r,alpha,lhs,rhs,abs_residual,rel_residual,tolerance,pass";
}

std::string report_csv_row(const IdentityReport& r) {
  std::string row;
  row += csv_escape(r.field);
  row += ',';
  row += csv_escape(r.identity);
  row += ',';
  row += csv_opt(r.params.R);
  row += ',';
  row += csv_opt(r.params.r);
  row += ',';
  row += csv_opt(r.params.alpha);
  row += ',';
  row += fmt17(r.lhs);
  row += ',';
  row += fmt17(r.rhs);
  row += ',';
  row += fmt17(r.abs_residual);
  row += ',';
  row += fmt17(r.rel_residual);
  row += ',';
  row += fmt17(r.tolerance);
  row += ',';
  row += r.pass ? "true" : "false";
  return row;
}

std::string profile_csv_header() { return "r,phi,surf_p,surf_uN2,surf_uT2,surf_u2"; }

std::string profile_csv_rows(const PhiProfile& p) {
  std::string out;
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    out += fmt17(p.r[i]);
    out += ',';
    out += fmt17(p.phi[i]);
    out += ',';
    out += fmt17(p.surf_p[i]);
    out += ',';
    out += fmt17(p.surf_uN2[i]);
    out += ',';
    out += fmt17(p.surf_uT2[i]);
    out += ',';
    out += fmt17(p.surf_u2[i]);
    out += '\n';
  }
  return out;
}

}  // namespace bverify

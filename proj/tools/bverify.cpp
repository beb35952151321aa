// bverify: numerical verification of flux identities, decay criteria, and
// the distributional formulation on the closed-form field catalog.
//
// Exit codes: 0 all checks pass; 1 a check failed; 2 usage or catalog error;
// 3 quadrature non-convergence or node-budget abort.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bverify/asymptotics.hpp"
#include "bverify/field.hpp"
#include "bverify/identities.hpp"
#include "bverify/quadrature.hpp"
#include "bverify/report.hpp"
#include "bverify/weakform.hpp"

namespace {

using namespace bverify;
using nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConverge = 3;

struct Options {
  std::string field = "zero";
  std::string identity = "all";
  std::string format = "json";
  std::string out;
  std::string scale = "lin";
  double R = 1.0;
  double r = -1.0;  // command-specific default when negative
  double alpha = 2.0;
  double mu = 1.0;
  double q = 3.0;
  double R_max = -1.0;
  double rho_max = 1.0;
  double tol = -1.0;  // command-specific default when negative
  int grid = -1;
  int ntheta = 0;
  int nphi = 0;
  int n = 20;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    os = &file;
  }
  void line(const std::string& s) { *os << s << '\n'; }
};

const char* to_string(DecayKind k) {
  switch (k) {
    case DecayKind::periodic: return "periodic";
    case DecayKind::algebraic: return "algebraic";
    case DecayKind::zero: return "zero";
  }
  return "?";
}

double tol_or(const Options& o, double fallback) { return o.tol >= 0.0 ? o.tol : fallback; }

QuadConfig quad_config(const Options& o) {
  QuadConfig cfg;
  cfg.n_theta = o.ntheta;
  cfg.n_phi = o.nphi;
  return cfg;
}

std::string grid_desc(const char* kind, double a, double b, int n) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s[%g,%g]x%d", kind, a, b, n);
  return buf;
}

void emit_reports(Sink& sink, const Options& o, const std::vector<IdentityReport>& reports,
                  const RunManifest& manifest) {
  if (o.format == "csv") {
    sink.line(report_csv_header());
    for (const IdentityReport& r : reports) sink.line(report_csv_row(r));
    ordered_json foot;
    foot["manifest"] = to_json(manifest);
    sink.line(foot.dump());
  } else {
    for (const IdentityReport& r : reports) {
      ordered_json j = to_json(r);
      j["manifest"] = to_json(manifest);
      sink.line(j.dump());
    }
  }
}

void emit_summary(Sink& sink, const Options& o, ordered_json summary,
                  const std::vector<std::string>& csv_rows, const std::string& csv_header,
                  const RunManifest& manifest) {
  if (o.format == "csv") {
    sink.line(csv_header);
    for (const std::string& row : csv_rows) sink.line(row);
    ordered_json foot = std::move(summary);
    foot.erase("R");  // grids live in the CSV body
    foot.erase("rho");
    foot.erase("t");
    foot.erase("I");
    foot.erase("value");
    foot["manifest"] = to_json(manifest);
    sink.line(foot.dump());
  } else {
    summary["manifest"] = to_json(manifest);
    sink.line(summary.dump());
  }
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int cmd_list(Sink& sink, const Options& o) {
  if (o.format == "csv")
    sink.line("pattern,example,beltrami,lambda,decay,rate,description");
  for (const CatalogEntry& e : catalog_entries()) {
    AnalyticField f = make_field(e.example);
    if (o.format == "csv") {
      std::string row = csv_escape(e.pattern) + "," + csv_escape(e.example) + "," +
                        (f.beltrami() ? "true" : "false") + "," +
                        (f.lambda() ? fmt17(*f.lambda()) : "") + "," +
                        to_string(f.decay().kind) + "," + fmt17(f.decay().rate) + "," +
                        csv_escape(e.description);
      sink.line(row);
    } else {
      ordered_json j;
      j["pattern"] = e.pattern;
      j["example"] = e.example;
      j["beltrami"] = f.beltrami();
      if (f.lambda()) j["lambda"] = *f.lambda();
      j["decay"] = to_string(f.decay().kind);
      j["rate"] = f.decay().rate;
      j["description"] = e.description;
      sink.line(j.dump());
    }
  }
  return kExitPass;
}

int cmd_verify(Sink& sink, const Options& o) {
  AnalyticField f = make_field(o.field);
  QuadConfig cfg = quad_config(o);
  double r = o.r >= 0.0 ? o.r : 0.5 * o.R;
  double teq = tol_or(o, kTolEquality);
  double tdv = tol_or(o, kTolDerivative);

  std::vector<IdentityReport> reports;
  bool all = o.identity == "all";
  bool known = all;
  auto want = [&](const char* id) {
    if (o.identity == id) known = true;
    return all || o.identity == id;
  };

  if (want("mvf")) reports.push_back(check_mvf(f, o.R, cfg, teq));
  if (want("alpha")) reports.push_back(check_alpha_identity(f, r, o.R, o.alpha, cfg, teq));
  if (want("deriv")) {
    DerivativeReports d = check_derivative_identities(f, o.R, cfg, tdv);
    reports.push_back(d.combined);
    reports.push_back(d.slope);
  }
  if (want("normal_bound")) reports.push_back(check_normal_bound(f, o.R, cfg, teq));
  if (want("beltrami_phi") && (!all || f.beltrami()))
    reports.push_back(check_beltrami_phi(f, o.R, cfg, teq));
  if (want("shell") && (!all || f.beltrami()))
    reports.push_back(check_shell_identity(f, r, o.R, cfg, teq));
  if (want("chain") && (!all || f.beltrami())) {
    EnergyChainReport c = check_energy_chain(f, cfg, teq);
    for (IdentityReport& link : c.links) reports.push_back(std::move(link));
  }
  if (!known) throw std::invalid_argument("unknown identity id: " + o.identity);

  char gbuf[96];
  std::snprintf(gbuf, sizeof gbuf, "R=%g;r=%g;alpha=%g", o.R, r, o.alpha);
  emit_reports(sink, o, reports, make_manifest("verify", f.id(), gbuf, o.seed, cfg));
  for (const IdentityReport& rep : reports)
    if (!rep.pass) return kExitFail;
  return kExitPass;
}

int cmd_profile(Sink& sink, const Options& o) {
  AnalyticField f = make_field(o.field);
  QuadConfig cfg = quad_config(o);
  double r_min = o.r >= 0.0 ? o.r : 0.25;
  double r_max = o.R_max > 0.0 ? o.R_max : 4.0;
  int n = o.grid > 0 ? o.grid : 33;
  std::vector<double> radii =
      o.scale == "log" ? log_grid(r_min, r_max, n) : linear_grid(r_min, r_max, n);

  PhiProfile prof = phi_profile(f, radii, cfg);
  MonotoneVerdict mono = check_monotone(prof);
  RunManifest manifest =
      make_manifest("profile", f.id(), grid_desc(o.scale.c_str(), r_min, r_max, n), o.seed, cfg);

  ordered_json mj;
  mj["monotone"] = mono.monotone;
  mj["max_violation"] = mono.max_violation;
  mj["at_r"] = mono.at_r;

  if (o.format == "csv") {
    sink.line(profile_csv_header());
    std::string rows = profile_csv_rows(prof);
    if (!rows.empty() && rows.back() == '\n') rows.pop_back();
    sink.line(rows);
    ordered_json foot;
    if (f.beltrami()) foot["monotone"] = mj;
    foot["manifest"] = to_json(manifest);
    sink.line(foot.dump());
  } else {
    ordered_json j;
    j["field"] = prof.field;
    j["r"] = prof.r;
    j["phi"] = prof.phi;
    j["surf_p"] = prof.surf_p;
    j["surf_uN2"] = prof.surf_uN2;
    j["surf_uT2"] = prof.surf_uT2;
    j["surf_u2"] = prof.surf_u2;
    if (f.beltrami()) j["monotone"] = mj;
    j["manifest"] = to_json(manifest);
    sink.line(j.dump());
  }
  return f.beltrami() && !mono.monotone ? kExitFail : kExitPass;
}

int cmd_liouville(Sink& sink, const Options& o) {
  AnalyticField f = make_field(o.field);
  QuadConfig cfg = quad_config(o);
  double R_min = o.r > 0.0 ? o.r : 0.1;
  double R_max = o.R_max > 0.0 ? o.R_max : 100.0;
  int n = o.grid > 0 ? o.grid : 64;

  DecayVerdict v = liouville_scan(f, R_min, R_max, n, cfg);
  RunManifest manifest =
      make_manifest("liouville", f.id(), grid_desc("log", R_min, R_max, n), o.seed, cfg);

  std::vector<std::string> rows;
  for (std::size_t i = 0; i < v.R.size(); ++i)
    rows.push_back(fmt17(v.R[i]) + "," + fmt17(v.t[i]));
  emit_summary(sink, o, to_json(v), rows, "R,t", manifest);
  return v.contradiction ? kExitFail : kExitPass;
}

int cmd_morrey(Sink& sink, const Options& o) {
  AnalyticField f = make_field(o.field);
  QuadConfig cfg = quad_config(o);
  int per_decade = o.grid > 0 ? o.grid : 64;

  MorreyEstimate m = morrey_estimate(f, o.rho_max, per_decade, 4, tol_or(o, 1e-6), cfg);
  RunManifest manifest = make_manifest(
      "morrey", f.id(), grid_desc("log", m.rho.front(), m.rho.back(), int(m.rho.size())), o.seed,
      cfg);

  std::vector<std::string> rows;
  for (std::size_t i = 0; i < m.rho.size(); ++i)
    rows.push_back(fmt17(m.rho[i]) + "," + fmt17(m.value[i]));
  emit_summary(sink, o, to_json(m), rows, "rho,value", manifest);
  return m.bound_holds && !*m.bound_holds ? kExitFail : kExitPass;
}

int cmd_weakform(Sink& sink, const Options& o) {
  AnalyticField f = make_field(o.field);
  QuadConfig cfg = quad_config(o);
  WeakFormReport rep = weak_form_suite(f, o.seed, o.n, tol_or(o, 1e-6), cfg, o.workers);
  char gbuf[32];
  std::snprintf(gbuf, sizeof gbuf, "n=%d", o.n);
  RunManifest manifest = make_manifest("weakform", f.id(), gbuf, o.seed, cfg);

  std::vector<std::string> rows;
  for (std::size_t i = 0; i < rep.residuals.size(); ++i)
    rows.push_back(std::to_string(i) + "," + fmt17(rep.residuals[i].residual) + "," +
                   fmt17(rep.residuals[i].scale) + "," +
                   fmt17(rep.residuals[i].normalized()));
  ordered_json j = to_json(rep);
  if (o.format == "csv") {
    sink.line("index,residual,scale,normalized");
    for (const std::string& row : rows) sink.line(row);
    ordered_json foot;
    foot["field"] = rep.field;
    foot["seed"] = rep.seed;
    foot["max_normalized"] = rep.max_normalized;
    foot["pass"] = rep.pass;
    foot["manifest"] = to_json(manifest);
    sink.line(foot.dump());
  } else {
    j["manifest"] = to_json(manifest);
    sink.line(j.dump());
  }
  return rep.pass ? kExitPass : kExitFail;
}

int cmd_tail(Sink& sink, const Options& o) {
  AnalyticField f = make_field(o.field);
  QuadConfig cfg = quad_config(o);
  double R_min = o.r > 0.0 ? o.r : 1.0;
  double R_max = o.R_max > 0.0 ? o.R_max : 100.0;
  int n = o.grid > 0 ? o.grid : 33;

  WeightedTail t = weighted_radial_tail(f, o.mu, log_grid(R_min, R_max, n), cfg);
  RunManifest manifest =
      make_manifest("tail", f.id(), grid_desc("log", R_min, R_max, n), o.seed, cfg);

  std::vector<std::string> rows;
  for (std::size_t i = 0; i < t.R.size(); ++i)
    rows.push_back(fmt17(t.R[i]) + "," + fmt17(t.I[i]));
  emit_summary(sink, o, to_json(t), rows, "R,I", manifest);
  for (std::size_t i = 0; i + 1 < t.I.size(); ++i)
    if (t.I[i + 1] < t.I[i]) return kExitFail;  // cumulative integral must not decrease
  return kExitPass;
}

int cmd_dichotomy(Sink& sink, const Options& o) {
  AnalyticField f = make_field(o.field);
  QuadConfig cfg = quad_config(o);
  double R_min = o.r > 0.0 ? o.r : 10.0;
  double R_max = o.R_max > 0.0 ? o.R_max : 1000.0;
  int n = o.grid > 0 ? o.grid : 33;

  DichotomyReport rep = tail_dichotomy(f, log_grid(R_min, R_max, n), cfg);
  RunManifest manifest =
      make_manifest("dichotomy", f.id(), grid_desc("log", R_min, R_max, n), o.seed, cfg);

  if (o.format == "csv") {
    sink.line("R,I_tangential,I_normal");
    for (std::size_t i = 0; i < rep.tangential.R.size(); ++i)
      sink.line(fmt17(rep.tangential.R[i]) + "," + fmt17(rep.tangential.I[i]) + "," +
                fmt17(rep.normal.I[i]));
    ordered_json foot;
    foot["tangential_slope"] = rep.tangential.fit.slope;
    foot["tangential_r_squared"] = rep.tangential.fit.r_squared;
    foot["normal_last_decade_fraction"] = rep.normal_last_decade_fraction;
    foot["tangential_diverges"] = rep.tangential_diverges;
    foot["normal_converges"] = rep.normal_converges;
    foot["pass"] = rep.pass;
    foot["manifest"] = to_json(manifest);
    sink.line(foot.dump());
  } else {
    ordered_json j = to_json(rep);
    j["manifest"] = to_json(manifest);
    sink.line(j.dump());
  }
  return rep.pass ? kExitPass : kExitFail;
}

int cmd_holder(Sink& sink, const Options& o) {
  AnalyticField f = make_field(o.field);
  QuadConfig cfg = quad_config(o);
  IdentityReport rep = holder_chain_check(f, o.R, o.q, cfg, tol_or(o, kTolEquality));
  char gbuf[64];
  std::snprintf(gbuf, sizeof gbuf, "R=%g;q=%g", o.R, o.q);
  emit_reports(sink, o, {rep}, make_manifest("holder", f.id(), gbuf, o.seed, cfg));
  return rep.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "numerical checks of flux identities, decay criteria, and the weak-form "
      "residual on closed-form velocity/pressure fields"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--field", o.field, "field id (see `list`)")->envname("BVERIFY_FIELD");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->envname("BVERIFY_FORMAT");
    cmd->add_option("--out", o.out, "write output to a file")->envname("BVERIFY_OUT");
    cmd->add_option("--ntheta", o.ntheta, "polar quadrature order (0 = auto)")
        ->envname("BVERIFY_NTHETA");
    cmd->add_option("--nphi", o.nphi, "azimuthal quadrature order (0 = auto)")
        ->envname("BVERIFY_NPHI");
    cmd->add_option("--tol", o.tol, "check tolerance (command default if unset)")
        ->envname("BVERIFY_TOL");
    cmd->add_option("--workers", o.workers, "parallel workers for independent checks")
        ->envname("BVERIFY_WORKERS");
    return cmd;
  };

  CLI::App* list = app.add_subcommand("list", "print the field catalog");
  add_common(list);

  CLI::App* verify = add_common(
      app.add_subcommand("verify", "check integral identities on a field"));
  verify->add_option("--identity", o.identity,
                     "mvf|alpha|deriv|beltrami_phi|normal_bound|shell|chain|all")
      ->envname("BVERIFY_IDENTITY");
  verify->add_option("--R", o.R, "outer radius")->envname("BVERIFY_R");
  verify->add_option("--r", o.r, "inner radius (default R/2)")->envname("BVERIFY_R_INNER");
  verify->add_option("--alpha", o.alpha, "weight exponent for the two-radius identity")
      ->envname("BVERIFY_ALPHA");

  CLI::App* profile = add_common(
      app.add_subcommand("profile", "radial scan of the flux and surface energies"));
  profile->add_option("--r", o.r, "smallest radius (default 0.25)")->envname("BVERIFY_R_INNER");
  profile->add_option("--R-max", o.R_max, "largest radius (default 4)")
      ->envname("BVERIFY_R_MAX");
  profile->add_option("--grid", o.grid, "number of radii (default 33)")->envname("BVERIFY_GRID");
  profile->add_option("--scale", o.scale, "grid spacing")
      ->check(CLI::IsMember({"lin", "log"}))
      ->envname("BVERIFY_SCALE");

  CLI::App* liouville = add_common(
      app.add_subcommand("liouville", "scan the tangential surface energy for decay"));
  liouville->add_option("--r", o.r, "smallest radius (default 0.1)")
      ->envname("BVERIFY_R_INNER");
  liouville->add_option("--R-max", o.R_max, "largest radius (default 100)")
      ->envname("BVERIFY_R_MAX");
  liouville->add_option("--grid", o.grid, "number of radii (default 64)")
      ->envname("BVERIFY_GRID");

  CLI::App* morrey = add_common(
      app.add_subcommand("morrey", "small-ball scaled energy estimator"));
  morrey->add_option("--rho-max", o.rho_max, "largest ball radius (default 1)")
      ->envname("BVERIFY_RHO_MAX");
  morrey->add_option("--grid", o.grid, "points per decade (default 64)")
      ->envname("BVERIFY_GRID");

  CLI::App* weakform = add_common(
      app.add_subcommand("weakform", "distributional residuals on a seeded test-function suite"));
  weakform->add_option("--n", o.n, "number of test functions (default 20)")
      ->envname("BVERIFY_N");
  weakform->add_option("--seed", o.seed, "suite seed (default 1)")->envname("BVERIFY_SEED");

  CLI::App* tail = add_common(
      app.add_subcommand("tail", "cumulative weighted tangential tail"));
  tail->add_option("--mu", o.mu, "radial weight exponent, mu <= 1 (default 1)")
      ->envname("BVERIFY_MU");
  tail->add_option("--r", o.r, "smallest radius (default 1)")->envname("BVERIFY_R_INNER");
  tail->add_option("--R-max", o.R_max, "largest radius (default 100)")
      ->envname("BVERIFY_R_MAX");
  tail->add_option("--grid", o.grid, "number of radii (default 33)")->envname("BVERIFY_GRID");

  CLI::App* dichotomy = add_common(
      app.add_subcommand("dichotomy", "tangential vs normal weighted tails at large radius"));
  dichotomy->add_option("--r", o.r, "smallest radius (default 10)")
      ->envname("BVERIFY_R_INNER");
  dichotomy->add_option("--R-max", o.R_max, "largest radius (default 1000)")
      ->envname("BVERIFY_R_MAX");
  dichotomy->add_option("--grid", o.grid, "number of radii (default 33)")
      ->envname("BVERIFY_GRID");

  CLI::App* holder = add_common(
      app.add_subcommand("holder", "surface Hoelder bound on the tangential energy"));
  holder->add_option("--R", o.R, "sphere radius")->envname("BVERIFY_R");
  holder->add_option("--q", o.q, "exponent in (2, 3]")->envname("BVERIFY_Q");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Sink sink;
  try {
    sink.open(o.out);
    if (list->parsed()) return cmd_list(sink, o);
    if (verify->parsed()) return cmd_verify(sink, o);
    if (profile->parsed()) return cmd_profile(sink, o);
    if (liouville->parsed()) return cmd_liouville(sink, o);
    if (morrey->parsed()) return cmd_morrey(sink, o);
    if (weakform->parsed()) return cmd_weakform(sink, o);
    if (tail->parsed()) return cmd_tail(sink, o);
    if (dichotomy->parsed()) return cmd_dichotomy(sink, o);
    if (holder->parsed()) return cmd_holder(sink, o);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (previous=" << fmt17(e.previous)
              << ", latest=" << fmt17(e.latest) << ")\n";
    return kExitNoConverge;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConverge;
  } catch (const CatalogError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

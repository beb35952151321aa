#include "bverify/weakform.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "bverify/bump.hpp"
#include "bverify/compensated.hpp"
#include "bverify/rng.hpp"

namespace bverify {

namespace {

constexpr double kFloor = 1e-14;

// --------------------------------------------------------------------------
// discrete convolution measure: tensor Gauss nodes on the kernel support
// with weights proportional to the kernel, renormalized to unit mass so the
// measure is a convex combination of translates
// --------------------------------------------------------------------------

struct KernelNode {
  Vec3 z;
  double w;
};

std::vector<KernelNode> discrete_kernel(double eps, int order) {
  GaussRule gl = gauss_legendre(order);
  std::vector<KernelNode> nodes;
  double total = 0.0;
  double vol = eps * eps * eps;
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j)
      for (int k = 0; k < order; ++k) {
        Vec3 y{gl.nodes[i], gl.nodes[j], gl.nodes[k]};
        if (norm2(y) >= 1.0) continue;  // kernel vanishes outside the ball
        Vec3 z = eps * y;
        double w = vol * gl.weights[i] * gl.weights[j] * gl.weights[k] * mollifier_rho(z, eps);
        nodes.push_back({z, w});
        total += w;
      }
  for (KernelNode& n : nodes) n.w /= total;
  return nodes;
}

// scalar doubling certificate, mirroring the quadrature module's policy
template <class LevelFn>
double converge_scalar(LevelFn&& level, const QuadConfig& cfg, const char* what) {
  double prev = level(0);
  for (int lvl = 1; lvl <= cfg.max_refinements; ++lvl) {
    double next = level(lvl);
    if (std::fabs(next - prev) <= cfg.refine_tol * std::max(std::fabs(next), kFloor)) return next;
    if (lvl == cfg.max_refinements)
      throw ConvergenceError(std::string(what) + ": no self-convergence within max_refinements",
                             prev, next);
    prev = next;
  }
  return prev;
}

}  // namespace

// --------------------------------------------------------------------------
// test functions
// --------------------------------------------------------------------------

double TestFunction::psi(const Vec3& x) const {
  return bump((x - center) / radius);
}

Vec3 TestFunction::grad_psi(const Vec3& x) const {
  return bump_grad((x - center) / radius) / radius;
}

std::vector<TestFunction> seeded_test_suite(std::uint64_t seed, int n, double domain) {
  if (n < 1) throw std::invalid_argument("seeded_test_suite: need n >= 1");
  if (!(domain >= 1.6))
    throw std::invalid_argument("seeded_test_suite: domain too small for the radius range");
  SplitMix64 rng(seed);
  std::vector<TestFunction> suite;
  suite.reserve(n);
  for (int k = 0; k < n; ++k) {
    TestFunction t;
    t.radius = 0.8 + 0.8 * rng.uniform01();
    t.center = (domain - t.radius) * rng.in_unit_ball();
    t.coeffs = Vec3{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    suite.push_back(t);
  }
  return suite;
}

double WeakResidual::normalized() const { return residual / std::max(scale, kFloor); }

// --------------------------------------------------------------------------
// weak-form residual: tensor Gauss on the support box, doubled until the
// residual stabilizes (to 0 for solutions, to the defect size otherwise)
// --------------------------------------------------------------------------

namespace {

struct WeakLevel {
  double residual;
  double scale;
};

WeakLevel weak_level(const AnalyticField& f, const TestFunction& t, int order) {
  GaussRule gl = gauss_legendre(order);
  CompensatedSum rsum, ssum;
  const double s = t.radius;
  const double vol = s * s * s;
  const double amag = norm(t.coeffs);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j)
      for (int k = 0; k < order; ++k) {
        Vec3 y{gl.nodes[i], gl.nodes[j], gl.nodes[k]};
        if (norm2(y) >= 1.0) continue;  // outside the bump's support
        double w = vol * gl.weights[i] * gl.weights[j] * gl.weights[k];
        Vec3 x = t.center + s * y;
        Vec3 gp = bump_grad(y) / s;
        FieldSample smp = f(x);
        double au = dot(t.coeffs, smp.u);
        double ug = dot(smp.u, gp);
        double ag = dot(t.coeffs, gp);
        rsum.add(w * (au * ug + smp.p * ag));
        ssum.add(w * norm2(smp.u) * amag * norm(gp));
      }
  return {rsum.value(), ssum.value()};
}

}  // namespace

WeakResidual weak_residual(const AnalyticField& f, const TestFunction& t, const QuadConfig& cfg) {
  if (!(t.radius > 0.0)) throw std::invalid_argument("weak_residual: support radius must be > 0");
  WeakLevel prev = weak_level(f, t, cfg.tensor_order);
  for (int lvl = 1; lvl <= cfg.max_refinements; ++lvl) {
    WeakLevel next = weak_level(f, t, cfg.tensor_order << lvl);
    double gate = cfg.refine_tol * std::max(next.scale, kFloor);
    if (std::fabs(next.residual - prev.residual) <= gate)
      return {std::fabs(next.residual), next.scale};
    if (lvl == cfg.max_refinements)
      throw ConvergenceError("weak_residual: no self-convergence within max_refinements",
                             prev.residual, next.residual);
    prev = next;
  }
  return {std::fabs(prev.residual), prev.scale};
}

WeakFormReport weak_form_suite(const AnalyticField& f, std::uint64_t seed, int n, double tol,
                               const QuadConfig& cfg, int workers) {
  WeakFormReport rep;
  rep.field = f.id();
  rep.seed = seed;
  rep.tolerance = tol;
  rep.testfns = seeded_test_suite(seed, n);
  rep.residuals.resize(rep.testfns.size());

  if (workers > 1) {
    std::vector<std::future<WeakResidual>> jobs;
    jobs.reserve(rep.testfns.size());
    for (const TestFunction& t : rep.testfns)
      jobs.push_back(std::async(std::launch::async,
                                [&f, t, &cfg] { return weak_residual(f, t, cfg); }));
    for (std::size_t i = 0; i < jobs.size(); ++i) rep.residuals[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < rep.testfns.size(); ++i)
      rep.residuals[i] = weak_residual(f, rep.testfns[i], cfg);
  }

  for (const WeakResidual& r : rep.residuals)
    rep.max_normalized = std::max(rep.max_normalized, r.normalized());
  rep.pass = rep.max_normalized <= tol;
  return rep;
}

// --------------------------------------------------------------------------
// mollifier operations
// --------------------------------------------------------------------------

double mollify_value(const std::function<double(const Vec3&)>& f, double eps, const Vec3& x,
                     const QuadConfig& cfg) {
  if (!(eps > 0.0) || !(eps <= 1.0))
    throw std::invalid_argument("mollify_value: need eps in (0, 1]");
  auto level = [&](int lvl) {
    int order = cfg.tensor_order << lvl;
    GaussRule gl = gauss_legendre(order);
    CompensatedSum sum;
    double vol = eps * eps * eps;
    for (int i = 0; i < order; ++i)
      for (int j = 0; j < order; ++j)
        for (int k = 0; k < order; ++k) {
          Vec3 y{gl.nodes[i], gl.nodes[j], gl.nodes[k]};
          if (norm2(y) >= 1.0) continue;
          Vec3 z = eps * y;
          double w = vol * gl.weights[i] * gl.weights[j] * gl.weights[k] * mollifier_rho(z, eps);
          sum.add(w * f(x - z));
        }
    return sum.value();
  };
  return converge_scalar(level, cfg, "mollify_value");
}

IdentityReport check_mollifier_normalization(double eps, double tol, const QuadConfig& cfg) {
  double lhs = mollify_value([](const Vec3&) { return 1.0; }, eps, Vec3{0.0, 0.0, 0.0}, cfg);
  IdentityParams p;
  p.eps = eps;
  return make_equality_report("kernel", "mollifier_normalization", p, lhs, 1.0, tol, cfg);
}

IdentityReport check_l1_contraction(const std::function<double(const Vec3&)>& f,
                                    const std::string& label, double eps, double R,
                                    const QuadConfig& cfg, double tol) {
  if (!(eps > 0.0) || !(eps <= 1.0))
    throw std::invalid_argument("check_l1_contraction: need eps in (0, 1]");
  if (!(R > 0.0)) throw std::invalid_argument("check_l1_contraction: need R > 0");

  std::vector<KernelNode> kernel = discrete_kernel(eps, cfg.inner_order);
  auto f_eps_abs = [&](const Vec3& x) {
    CompensatedSum sum;
    for (const KernelNode& n : kernel) sum.add(n.w * f(x - n.z));
    return std::fabs(sum.value());
  };
  // The discrete measure is a convex combination of translates, so the
  // contraction is exact for it; only the outer rules matter.  The inner
  // side needs no doubling certificate: a fixed moderate rule keeps the
  // nested cost flat and any outer underestimate only loosens the check.
  QuadConfig fixed = cfg;
  fixed.n_theta = 16;
  fixed.n_phi = 32;
  fixed.panel_order = 8;
  fixed.max_refinements = 0;
  double lhs = ball_integral(f_eps_abs, R, fixed);
  double rhs = ball_integral([&](const Vec3& x) { return std::fabs(f(x)); }, R + eps, cfg);
  IdentityParams p;
  p.R = R;
  p.eps = eps;
  return make_inequality_report(label, "l1_contraction", p, lhs, rhs, tol, cfg);
}

double mollified_normal_form(const AnalyticField& f, double eps, const Vec3& x,
                             const QuadConfig& cfg) {
  double x2 = norm2(x);
  if (x2 == 0.0) throw std::domain_error("mollified_normal_form: undefined at the origin");
  auto g = [&](const Vec3& y) {
    double d = dot(f(y).u, x);
    return d * d;
  };
  return mollify_value(g, eps, x, cfg) / x2;
}

// --------------------------------------------------------------------------
// regularized flux identity
// --------------------------------------------------------------------------

namespace {

struct MollifiedSample {
  double p;
  double u2;
  double vn;
};

MollifiedSample mollified_sample(const AnalyticField& f, const std::vector<KernelNode>& kernel,
                                 const Vec3& x) {
  CompensatedSum ps, us, vs;
  for (const KernelNode& n : kernel) {
    FieldSample s = f(x - n.z);
    ps.add(n.w * s.p);
    us.add(n.w * norm2(s.u));
    double d = dot(s.u, x);
    vs.add(n.w * d * d);
  }
  return {ps.value(), us.value(), vs.value() / norm2(x)};
}

}  // namespace

IdentityReport check_regularized_mvf(const AnalyticField& f, double R, double eps,
                                     const QuadConfig& cfg, double tol) {
  if (!(R > 0.0)) throw std::invalid_argument("check_regularized_mvf: need R > 0");
  if (!(eps > 0.0) || !(eps <= 0.1))
    throw std::invalid_argument("check_regularized_mvf: need eps in (0, 0.1]");

  std::vector<KernelNode> kernel = discrete_kernel(eps, cfg.inner_order);
  const int nt0 = auto_n_theta(f, R, cfg);
  const int np0 = auto_n_phi(nt0, cfg);
  const int radial_panels = std::max(1, static_cast<int>(std::ceil(R / cfg.panel_width)));

  auto lhs_level = [&](int lvl) {
    SphereRule rule(nt0 << lvl, np0 << lvl);
    CompensatedSum sum;
    rule.for_each([&](const Vec3& omega, double w) {
      Vec3 x = R * omega;
      MollifiedSample m = mollified_sample(f, kernel, x);
      sum.add(w * (m.p + m.vn));
    });
    return R * R * sum.value();
  };
  auto rhs_level = [&](int lvl) {
    SphereRule rule(nt0 << lvl, np0 << lvl);
    GaussRule gl = gauss_legendre(cfg.panel_order << lvl);
    double step = R / radial_panels;
    CompensatedSum sum;
    for (int pnl = 0; pnl < radial_panels; ++pnl) {
      double mid = (pnl + 0.5) * step, half = 0.5 * step;
      for (int q = 0; q < (cfg.panel_order << lvl); ++q) {
        double s = mid + half * gl.nodes[q];
        double ws = half * gl.weights[q] * s * s;
        CompensatedSum ang;
        rule.for_each([&](const Vec3& omega, double w) {
          Vec3 x = s * omega;
          MollifiedSample m = mollified_sample(f, kernel, x);
          ang.add(w * (3.0 * m.p + m.u2));
        });
        sum.add(ws * ang.value());
      }
    }
    return sum.value() / R;
  };
  auto level_nodes = [&](int lvl) {
    double sphere = double(nt0 << lvl) * double(np0 << lvl);
    double outer = sphere + sphere * double(radial_panels) * double(cfg.panel_order << lvl);
    return outer * double(kernel.size());
  };

  double conv_tol = std::max(cfg.refine_tol, 0.01 * tol);
  if (level_nodes(0) + level_nodes(1) > cfg.node_budget)
    throw BudgetError("check_regularized_mvf: node budget exceeded before refinement");
  double lhs = lhs_level(0), rhs = rhs_level(0);
  for (int lvl = 1; lvl <= cfg.max_refinements; ++lvl) {
    if (level_nodes(lvl) > cfg.node_budget)
      throw BudgetError("check_regularized_mvf: node budget exceeded");
    double lhs2 = lhs_level(lvl), rhs2 = rhs_level(lvl);
    bool ok = std::fabs(lhs2 - lhs) <= conv_tol * std::max(std::fabs(lhs2), kFloor) &&
              std::fabs(rhs2 - rhs) <= conv_tol * std::max(std::fabs(rhs2), kFloor);
    lhs = lhs2;
    rhs = rhs2;
    if (ok) break;
    if (lvl == cfg.max_refinements)
      throw ConvergenceError("check_regularized_mvf: outer quadrature did not settle", lhs, rhs);
  }

  IdentityParams p;
  p.R = R;
  p.eps = eps;
  return make_equality_report(f.id(), "regularized_mvf", p, lhs, rhs, tol, cfg);
}

// --------------------------------------------------------------------------
// serialization
// --------------------------------------------------------------------------

nlohmann::ordered_json to_json(const TestFunction& t) {
  nlohmann::ordered_json j;
  j["center"] = {t.center.x, t.center.y, t.center.z};
  j["radius"] = t.radius;
  j["coeffs"] = {t.coeffs.x, t.coeffs.y, t.coeffs.z};
  return j;
}

nlohmann::ordered_json to_json(const WeakFormReport& r) {
  nlohmann::ordered_json j;
  j["field"] = r.field;
  j["seed"] = r.seed;
  j["n"] = r.testfns.size();
  j["tolerance"] = r.tolerance;
  j["max_normalized"] = r.max_normalized;
  j["pass"] = r.pass;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.testfns.size(); ++i) {
    nlohmann::ordered_json e = to_json(r.testfns[i]);
    e["residual"] = r.residuals[i].residual;
    e["scale"] = r.residuals[i].scale;
    e["normalized"] = r.residuals[i].normalized();
    arr.push_back(std::move(e));
  }
  j["testfns"] = std::move(arr);
  return j;
}

}  // namespace bverify

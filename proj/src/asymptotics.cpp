#include "bverify/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bverify/compensated.hpp"
#include "bverify/identities.hpp"

namespace bverify {

namespace {

constexpr double kTrivialFloor = 1e-14;  // below this, t is numerically zero
constexpr double kSeqRatio = 1e-6;       // vanishing-subsequence threshold, relative to max t
constexpr double kNonzeroFloor = 1e-9;   // |u| above this counts as demonstrably nonzero
constexpr double kFitR2 = 0.99;

void require_increasing_positive(const std::vector<double>& g, const char* what) {
  if (g.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 radii");
  if (!(g.front() > 0.0)) throw std::invalid_argument(std::string(what) + ": radii must be positive");
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    if (!(g[i] < g[i + 1]))
      throw std::invalid_argument(std::string(what) + ": radii must be strictly increasing");
}

// cumulative integral of g(x) |x|^-mu over nested balls B_{grid[k]}, one
// shell segment at a time so each radius costs one shell integral
std::vector<std::vector<double>> cumulative_tails(const AnalyticField& f,
                                                  std::span<const PointFunctional> gs, double mu,
                                                  const std::vector<double>& grid,
                                                  const QuadConfig& cfg) {
  std::vector<std::vector<double>> out(gs.size());
  std::vector<CompensatedSum> acc(gs.size());
  double prev = 0.0;
  for (double R : grid) {
    std::vector<double> seg = shell_weighted_integral_multi(f, gs, prev, R, mu, cfg);
    for (std::size_t k = 0; k < gs.size(); ++k) {
      acc[k].add(seg[k]);
      out[k].push_back(acc[k].value());
    }
    prev = R;
  }
  return out;
}

// interpolate cumulative values at R_query on the (ln R, I) polygon
double interp_log(const std::vector<double>& R, const std::vector<double>& I, double R_query) {
  double lq = std::log(R_query);
  if (lq <= std::log(R.front())) return I.front();
  for (std::size_t i = 0; i + 1 < R.size(); ++i) {
    double l0 = std::log(R[i]), l1 = std::log(R[i + 1]);
    if (lq <= l1) return I[i] + (I[i + 1] - I[i]) * (lq - l0) / (l1 - l0);
  }
  return I.back();
}

}  // namespace

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need two equal-length samples");
  std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 1e-300) {
    fit.r_squared = 1.0;  // constant data is fit exactly by a constant line
  } else {
    double ss_res = syy - fit.slope * sxy;
    fit.r_squared = std::max(0.0, 1.0 - ss_res / syy);
  }
  return fit;
}

const char* to_string(DecayClassification c) {
  switch (c) {
    case DecayClassification::trivial: return "trivial";
    case DecayClassification::sequence_found: return "sequence_found";
    case DecayClassification::no_sequence_up_to_Rmax: return "no_sequence_up_to_Rmax";
  }
  return "?";
}

std::vector<double> tangential_profile(const AnalyticField& f, const std::vector<double>& radii,
                                       const QuadConfig& cfg) {
  require_increasing_positive(radii, "tangential_profile");
  std::vector<double> t;
  t.reserve(radii.size());
  for (double R : radii) t.push_back(sphere_integral(f, functional::tangential2(), R, cfg));
  return t;
}

DecayVerdict liouville_scan(const AnalyticField& f, double R_min, double R_max, int grid_size,
                            const QuadConfig& cfg) {
  if (!(R_min > 0.0) || !(R_max > R_min) || grid_size < 2)
    throw std::invalid_argument("liouville_scan: need 0 < R_min < R_max and grid_size >= 2");
  DecayVerdict v;
  v.field = f.id();
  v.R = log_grid(R_min, R_max, grid_size);
  v.t = tangential_profile(f, v.R, cfg);

  v.max_t = *std::max_element(v.t.begin(), v.t.end());
  auto it_min = std::min_element(v.t.begin(), v.t.end());
  v.inf_t = *it_min;
  v.inf_at_R = v.R[static_cast<std::size_t>(it_min - v.t.begin())];

  if (v.max_t <= kTrivialFloor) {
    v.classification = DecayClassification::trivial;
  } else if (v.inf_t <= kSeqRatio * v.max_t) {
    v.classification = DecayClassification::sequence_found;
  } else {
    v.classification = DecayClassification::no_sequence_up_to_Rmax;
  }

  // log-log slope over the top two decades, decade-averaged to tame bounded
  // oscillation; falls back to a plain fit when samples are scarce
  std::vector<double> lx, ly;
  double cut = R_max / 100.0;
  std::vector<double> hi_x, hi_y, lo_x, lo_y;
  for (std::size_t i = 0; i < v.R.size(); ++i) {
    if (v.R[i] < cut || v.t[i] <= kTrivialFloor) continue;
    (v.R[i] >= R_max / 10.0 ? hi_x : lo_x).push_back(std::log(v.R[i]));
    (v.R[i] >= R_max / 10.0 ? hi_y : lo_y).push_back(std::log(v.t[i]));
  }
  auto mean = [](const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s += x;
    return s / a.size();
  };
  if (!hi_x.empty() && !lo_x.empty()) {
    v.trend_exponent = (mean(hi_y) - mean(lo_y)) / (mean(hi_x) - mean(lo_x));
  } else if (hi_x.size() + lo_x.size() >= 2) {
    for (auto& a : {lo_x, hi_x}) lx.insert(lx.end(), a.begin(), a.end());
    for (auto& a : {lo_y, hi_y}) ly.insert(ly.end(), a.begin(), a.end());
    v.trend_exponent = linear_fit(lx, ly).slope;
  }

  if (v.classification == DecayClassification::sequence_found) {
    for (std::size_t i = 0; i < v.R.size(); ++i) {
      if (v.t[i] > kSeqRatio * v.max_t) continue;
      double s = sup_on_sphere(f, functional::speed(), v.R[i], cfg);
      v.max_speed_at_vanishing = std::max(v.max_speed_at_vanishing, s);
    }
    v.contradiction = v.max_speed_at_vanishing > kNonzeroFloor;
  }
  return v;
}

IdentityReport holder_chain_check(const AnalyticField& f, double R, double q,
                                  const QuadConfig& cfg, double tol) {
  if (!(q > 2.0) || !(q <= 3.0))
    throw std::invalid_argument("holder_chain_check: need q in (2, 3]");
  const PointFunctional gs[] = {functional::tangential2(), functional::tangential_pow(q)};
  std::vector<double> s = sphere_integral_multi(f, gs, R, cfg);
  double ex = (q - 2.0) / q;
  double rhs = std::pow(4.0 * std::numbers::pi, ex) * std::pow(R, 2.0 * ex) *
               std::pow(std::max(0.0, s[1]), 2.0 / q);
  IdentityParams p;
  p.R = R;
  p.q = q;
  return make_inequality_report(f.id(), "holder_chain", p, s[0], rhs, tol, cfg);
}

WeightedTail weighted_radial_tail(const AnalyticField& f, double mu,
                                  const std::vector<double>& R_grid, const QuadConfig& cfg) {
  if (!(mu <= 1.0)) throw std::invalid_argument("weighted_radial_tail: need mu <= 1");
  require_increasing_positive(R_grid, "weighted_radial_tail");
  WeightedTail tail;
  tail.field = f.id();
  tail.mu = mu;
  tail.R = R_grid;
  const PointFunctional g[] = {functional::tangential2()};
  tail.I = cumulative_tails(f, g, mu, R_grid, cfg)[0];
  std::vector<double> lr(R_grid.size());
  for (std::size_t i = 0; i < R_grid.size(); ++i) lr[i] = std::log(R_grid[i]);
  tail.fit = linear_fit(lr, tail.I);
  return tail;
}

DichotomyReport tail_dichotomy(const AnalyticField& f, const std::vector<double>& R_grid,
                               const QuadConfig& cfg) {
  if (f.decay().kind == DecayKind::periodic)
    throw std::domain_error("tail_dichotomy: field does not decay (periodic class)");
  require_increasing_positive(R_grid, "tail_dichotomy");
  if (!(R_grid.back() >= 100.0 * R_grid.front() * (1.0 - 1e-12)))
    throw std::invalid_argument("tail_dichotomy: grid must span at least two decades");

  DichotomyReport rep;
  const PointFunctional gs[] = {functional::tangential2(), functional::normal2()};
  std::vector<std::vector<double>> tails = cumulative_tails(f, gs, 1.0, R_grid, cfg);

  for (WeightedTail* t : {&rep.tangential, &rep.normal}) {
    t->field = f.id();
    t->mu = 1.0;
    t->R = R_grid;
  }
  rep.tangential.I = std::move(tails[0]);
  rep.normal.I = std::move(tails[1]);

  std::vector<double> lr(R_grid.size());
  for (std::size_t i = 0; i < R_grid.size(); ++i) lr[i] = std::log(R_grid[i]);
  rep.tangential.fit = linear_fit(lr, rep.tangential.I);
  rep.normal.fit = linear_fit(lr, rep.normal.I);

  rep.tangential_diverges =
      rep.tangential.fit.r_squared >= kFitR2 && rep.tangential.fit.slope > 0.0;

  double total = rep.normal.I.back();
  if (total > kTrivialFloor) {
    double before = interp_log(R_grid, rep.normal.I, R_grid.back() / 10.0);
    rep.normal_last_decade_fraction = (total - before) / total;
  }
  rep.normal_converges = total <= kTrivialFloor || rep.normal_last_decade_fraction <= 0.01;
  rep.pass = rep.tangential_diverges && rep.normal_converges;
  return rep;
}

MorreyEstimate morrey_estimate(const AnalyticField& f, double rho_max, int per_decade,
                               int decades, double tol, const QuadConfig& cfg) {
  if (!(rho_max > 0.0) || per_decade < 1 || decades < 1)
    throw std::invalid_argument("morrey_estimate: bad grid parameters");
  MorreyEstimate est;
  est.field = f.id();
  est.rho = log_grid(rho_max * std::pow(10.0, -decades), rho_max, per_decade * decades + 1);

  const PointFunctional g[] = {functional::speed2()};
  std::vector<double> energy = cumulative_tails(f, g, 0.0, est.rho, cfg)[0];
  est.value.resize(est.rho.size());
  for (std::size_t i = 0; i < est.rho.size(); ++i) {
    est.value[i] = std::max(0.0, energy[i] / est.rho[i]);
    if (est.value[i] >= est.sup) {
      est.sup = est.value[i];
      est.at_rho = est.rho[i];
    }
  }
  if (f.beltrami()) {
    est.phi1 = phi(f, 1.0, cfg);
    if (rho_max <= 1.0 + 1e-12)
      est.bound_holds = est.sup <= *est.phi1 * (1.0 + tol) + kTrivialFloor;
  }
  return est;
}

// ---------------------------------------------------------------------------
// JSON summaries
// ---------------------------------------------------------------------------

nlohmann::ordered_json to_json(const DecayVerdict& v) {
  nlohmann::ordered_json j;
  j["field"] = v.field;
  j["R"] = v.R;
  j["t"] = v.t;
  j["max_t"] = v.max_t;
  j["inf_t"] = v.inf_t;
  j["inf_at_R"] = v.inf_at_R;
  j["trend_exponent"] = v.trend_exponent;
  j["classification"] = to_string(v.classification);
  j["contradiction"] = v.contradiction;
  j["max_speed_at_vanishing"] = v.max_speed_at_vanishing;
  return j;
}

nlohmann::ordered_json to_json(const WeightedTail& t) {
  nlohmann::ordered_json j;
  j["field"] = t.field;
  j["mu"] = t.mu;
  j["R"] = t.R;
  j["I"] = t.I;
  j["slope"] = t.fit.slope;
  j["intercept"] = t.fit.intercept;
  j["r_squared"] = t.fit.r_squared;
  return j;
}

nlohmann::ordered_json to_json(const DichotomyReport& d) {
  nlohmann::ordered_json j;
  j["tangential"] = to_json(d.tangential);
  j["normal"] = to_json(d.normal);
  j["normal_last_decade_fraction"] = d.normal_last_decade_fraction;
  j["tangential_diverges"] = d.tangential_diverges;
  j["normal_converges"] = d.normal_converges;
  j["pass"] = d.pass;
  return j;
}

nlohmann::ordered_json to_json(const MorreyEstimate& m) {
  nlohmann::ordered_json j;
  j["field"] = m.field;
  j["rho"] = m.rho;
  j["value"] = m.value;
  j["sup"] = m.sup;
  j["at_rho"] = m.at_rho;
  if (m.phi1) j["phi1"] = *m.phi1;
  if (m.bound_holds) j["bound_holds"] = *m.bound_holds;
  return j;
}

}  // namespace bverify

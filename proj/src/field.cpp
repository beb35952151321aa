#include "bverify/field.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "bverify/bump.hpp"
#include "bverify/rng.hpp"

namespace bverify {

// ============================================================================
// spherical Bessel j1 and friends
// ============================================================================
//
// j1(r) = sin r / r^2 - cos r / r.  The closed form loses digits for small r
// (two O(1/r) terms cancelling), and the spheromak assembly below needs the
// combination (j1/r - j1') / r^2 which cancels catastrophically near 0, so
// everything switches to Taylor series below r = 0.5.  Series coefficients
// follow the recurrence c_{k+1} = c_k / ((2k+2)(2k+5)), c_0 = 1/3.

namespace {

constexpr double kSeriesSwitch = 0.5;

// f = j1(r)/r, j1p = j1'(r), h = (f - j1p)/r^2; all even power series
struct RadialProfiles {
  double f, j1p, h;
};

RadialProfiles profiles_series(double r2) {
  double c = 1.0 / 3.0;   // c_k
  double pw = 1.0;        // r^{2k}
  double f = 0.0, j1p = 0.0, h = 0.0;
  for (int k = 0; k < 16; ++k) {
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    double term = sign * c * pw;
    f += term;
    j1p += term * (2 * k + 1);
    // h picks up -2k * term / r^2, i.e. the k-th term shifted down one power
    if (k >= 1) h += -sign * c * (2 * k) * (pw / r2);
    double next = c / ((2.0 * k + 2.0) * (2.0 * k + 5.0));
    if (next * pw * r2 < 1e-19) {
      // one more h term so it is as converged as f and j1p
      double s2 = (k % 2 == 0) ? -1.0 : 1.0;
      h += -s2 * next * (2 * (k + 1)) * pw;
      break;
    }
    c = next;
    pw *= r2;
  }
  return {f, j1p, h};
}

RadialProfiles profiles_closed(double r) {
  double s = std::sin(r), c = std::cos(r);
  double j1 = s / (r * r) - c / r;
  double j1p = s / r - 2.0 * s / (r * r * r) + 2.0 * c / (r * r);
  double f = j1 / r;
  return {f, j1p, (f - j1p) / (r * r)};
}

RadialProfiles radial_profiles(double r) {
  return (r < kSeriesSwitch) ? profiles_series(r * r) : profiles_closed(r);
}

}  // namespace

double spherical_j1(double r) {
  double a = std::fabs(r);
  if (a < kSeriesSwitch) return profiles_series(a * a).f * r;
  double v = std::sin(a) / (a * a) - std::cos(a) / a;
  return (r < 0.0) ? -v : v;  // j1 is odd
}

double spherical_j1_prime(double r) {
  double a = std::fabs(r);
  if (a < kSeriesSwitch) return profiles_series(a * a).j1p;
  return std::sin(a) / a - 2.0 * std::sin(a) / (a * a * a) + 2.0 * std::cos(a) / (a * a);
}

// ============================================================================
// catalog fields
// ============================================================================

AnalyticField make_zero() {
  return AnalyticField(
      "zero", [](const Vec3&) { return FieldSample{{0.0, 0.0, 0.0}, 0.0}; },
      /*beltrami=*/true, /*lambda=*/0.0, DecayClass{DecayKind::zero, 0.0},
      /*oscillatory=*/false);
}

AnalyticField make_abc(double A, double B, double C) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "abc:%g,%g,%g", A, B, C);
  auto eval = [A, B, C](const Vec3& x) {
    Vec3 u{A * std::sin(x.z) + C * std::cos(x.y),
           B * std::sin(x.x) + A * std::cos(x.z),
           C * std::sin(x.y) + B * std::cos(x.x)};
    return FieldSample{u, -0.5 * norm2(u)};
  };
  return AnalyticField(buf, eval, /*beltrami=*/true, /*lambda=*/1.0,
                       DecayClass{DecayKind::periodic, 0.0}, /*oscillatory=*/true);
}

AnalyticField make_rotation() {
  auto eval = [](const Vec3& x) {
    return FieldSample{{-x.y, x.x, 0.0}, 0.5 * (x.x * x.x + x.y * x.y)};
  };
  // rigid rotation solves the stationary equations but curl u = (0,0,2) is not
  // proportional to u, and p != -|u|^2/2
  return AnalyticField("rotation", eval, /*beltrami=*/false, std::nullopt,
                       DecayClass{DecayKind::algebraic, -1.0}, /*oscillatory=*/false);
}

AnalyticField make_spheromak() {
  // In spherical components, with f = j1(r)/r, g = f + j1', h = (f - j1')/r^2:
  //   u_r = 2 f cos(theta), u_theta = -g sin(theta), u_phi = f r sin(theta)
  // which assembles in Cartesian form, smooth through the axis and the origin, as
  //   u = h * x3 * x + f * (-x2, x1, 0) + (0, 0, g).
  // curl u = u globally; |u| decays like 1/|x|.
  auto eval = [](const Vec3& x) {
    double r = norm(x);
    RadialProfiles rp = radial_profiles(r);
    double g = rp.f + rp.j1p;
    Vec3 u = rp.h * x.z * x + rp.f * Vec3{-x.y, x.x, 0.0} + Vec3{0.0, 0.0, g};
    return FieldSample{u, -0.5 * norm2(u)};
  };
  return AnalyticField("spheromak", eval, /*beltrami=*/true, /*lambda=*/1.0,
                       DecayClass{DecayKind::algebraic, 1.0}, /*oscillatory=*/false);
}

AnalyticField make_corrupt(const AnalyticField& base, CorruptMode mode, double delta,
                           std::uint64_t seed) {
  if (!(delta > 0.0)) throw CatalogError("corrupt: delta must be positive");
  if (base.id().rfind("corrupt:", 0) == 0) throw CatalogError("corrupt: nested corruption");

  std::ostringstream id;
  id << "corrupt:" << base.id() << ':'
     << (mode == CorruptMode::pressure_shift ? "pressure_shift" : "velocity_noise") << ':' << delta;
  if (mode == CorruptMode::velocity_noise) id << ':' << seed;

  AnalyticField::EvalFn eval;
  if (mode == CorruptMode::pressure_shift) {
    eval = [base, delta](const Vec3& x) {
      FieldSample s = base(x);
      s.p += delta * bump(x);
      return s;
    };
  } else {
    Vec3 dir = SplitMix64(seed).unit_vector();
    eval = [base, delta, dir](const Vec3& x) {
      FieldSample s = base(x);
      s.u = s.u + (delta * bump(x)) * dir;
      return s;
    };
  }
  return AnalyticField(id.str(), std::move(eval), /*beltrami=*/false, std::nullopt,
                       base.decay(), base.oscillatory());
}

// ---------------------------------------------------------------------------
// id grammar
// ---------------------------------------------------------------------------

namespace {

double parse_num(const std::string& tok, const std::string& ctx) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty())
    throw CatalogError("bad number '" + tok + "' in " + ctx);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

}  // namespace

AnalyticField make_field(const std::string& id) {
  std::vector<std::string> tok = split(id, ':');
  const std::string& kind = tok[0];

  if (kind == "zero" || kind == "rotation" || kind == "spheromak") {
    if (tok.size() != 1) throw CatalogError("field '" + kind + "' takes no parameters");
    if (kind == "zero") return make_zero();
    if (kind == "rotation") return make_rotation();
    return make_spheromak();
  }

  if (kind == "abc") {
    if (tok.size() != 2) throw CatalogError("expected abc:A,B,C");
    std::vector<std::string> abc = split(tok[1], ',');
    if (abc.size() != 3) throw CatalogError("expected abc:A,B,C");
    return make_abc(parse_num(abc[0], id), parse_num(abc[1], id), parse_num(abc[2], id));
  }

  if (kind == "corrupt") {
    std::size_t mode_at = 0;
    for (std::size_t i = 1; i < tok.size(); ++i)
      if (tok[i] == "pressure_shift" || tok[i] == "velocity_noise") {
        mode_at = i;
        break;
      }
    if (mode_at < 2 || mode_at + 1 >= tok.size())
      throw CatalogError("expected corrupt:<base>:<mode>:<delta>[:<seed>]");
    std::string base_id = tok[1];
    for (std::size_t i = 2; i < mode_at; ++i) base_id += ':' + tok[i];
    CorruptMode mode =
        (tok[mode_at] == "pressure_shift") ? CorruptMode::pressure_shift : CorruptMode::velocity_noise;
    double delta = parse_num(tok[mode_at + 1], id);
    std::uint64_t seed = 0;
    if (tok.size() > mode_at + 2) {
      if (tok.size() > mode_at + 3) throw CatalogError("trailing tokens in '" + id + "'");
      seed = static_cast<std::uint64_t>(std::strtoull(tok[mode_at + 2].c_str(), nullptr, 10));
    }
    return make_corrupt(make_field(base_id), mode, delta, seed);
  }

  throw CatalogError("unknown field id '" + id + "'");
}

std::vector<CatalogEntry> catalog_entries() {
  return {
      {"zero", "zero", "identically zero velocity and pressure"},
      {"abc:A,B,C", "abc:1,1,1",
       "periodic trigonometric field with curl u = u and p = -|u|^2/2"},
      {"rotation", "rotation",
       "rigid rotation about the x3 axis; solves the stationary equations but is not force-free"},
      {"spheromak", "spheromak",
       "localized field with curl u = u built from the first spherical Bessel function; |u| ~ 1/|x|"},
      {"corrupt:<base>:<mode>:<delta>[:<seed>]", "corrupt:abc:1,1,1:pressure_shift:0.1",
       "base field with a bump-supported defect; mode is pressure_shift or velocity_noise"},
  };
}

// ============================================================================
// pointwise operations
// ============================================================================

Decomposition decompose(const Vec3& u, const Vec3& x) {
  double x2 = norm2(x);
  if (x2 == 0.0) throw std::domain_error("decompose: undefined at x = 0");
  Vec3 n = (dot(u, x) / x2) * x;
  return {n, u - n};
}

Vec3 tangential_cross(const Vec3& u, const Vec3& x) {
  double r = norm(x);
  if (r == 0.0) throw std::domain_error("tangential_cross: undefined at x = 0");
  return cross(u, x / r);
}

Vec3 curl_fd(const AnalyticField& f, const Vec3& x, double h) {
  double inv = 1.0 / (2.0 * h);
  Vec3 dx[3];  // dx[j] = d u / d x_j
  const Vec3 e[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int j = 0; j < 3; ++j) {
    Vec3 up = f(x + h * e[j]).u;
    Vec3 um = f(x - h * e[j]).u;
    dx[j] = inv * (up - um);
  }
  return {dx[1].z - dx[2].y, dx[2].x - dx[0].z, dx[0].y - dx[1].x};
}

double divergence_fd(const AnalyticField& f, const Vec3& x, double h) {
  double inv = 1.0 / (2.0 * h);
  double d = 0.0;
  d += inv * (f(x + Vec3{h, 0, 0}).u.x - f(x - Vec3{h, 0, 0}).u.x);
  d += inv * (f(x + Vec3{0, h, 0}).u.y - f(x - Vec3{0, h, 0}).u.y);
  d += inv * (f(x + Vec3{0, 0, h}).u.z - f(x - Vec3{0, 0, h}).u.z);
  return d;
}

BeltramiResiduals beltrami_residuals(const AnalyticField& f, std::span<const Vec3> points,
                                     double h) {
  BeltramiResiduals out;
  if (f.lambda()) out.max_curl = 0.0;
  for (const Vec3& x : points) {
    FieldSample s = f(x);
    out.max_pressure = std::max(out.max_pressure, std::fabs(s.p + 0.5 * norm2(s.u)));
    if (f.lambda()) {
      Vec3 resid = curl_fd(f, x, h) - (*f.lambda()) * s.u;
      out.max_curl = std::max(*out.max_curl, norm(resid));
    }
  }
  return out;
}

}  // namespace bverify

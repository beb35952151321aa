#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bverify/vec3.hpp"

namespace bverify {

// ============================================================================
// Closed-form velocity/pressure fields on R^3, plus the pointwise operations
// the verification checks are built from: normal/tangential decomposition,
// finite-difference curl and divergence, and controlled corruption.
// ============================================================================

struct FieldSample {
  Vec3 u;
  double p{0.0};
};

enum class DecayKind { periodic, algebraic, zero };

struct DecayClass {
  DecayKind kind{DecayKind::zero};
  // for algebraic decay: |u(x)| ~ |x|^-rate as |x| -> infinity
  double rate{0.0};
};

struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class AnalyticField {
 public:
  using EvalFn = std::function<FieldSample(const Vec3&)>;

  AnalyticField(std::string id, EvalFn eval, bool beltrami, std::optional<double> lambda,
                DecayClass decay, bool oscillatory)
      : id_(std::move(id)),
        eval_(std::move(eval)),
        beltrami_(beltrami),
        lambda_(lambda),
        decay_(decay),
        oscillatory_(oscillatory) {}

  FieldSample operator()(const Vec3& x) const { return eval_(x); }

  const std::string& id() const { return id_; }
  bool beltrami() const { return beltrami_; }
  std::optional<double> lambda() const { return lambda_; }
  DecayClass decay() const { return decay_; }
  // true when the angular complexity of the field grows with the radius
  // (trigonometric fields); drives the automatic sphere-rule sizing
  bool oscillatory() const { return oscillatory_; }

 private:
  std::string id_;
  EvalFn eval_;
  bool beltrami_;
  std::optional<double> lambda_;
  DecayClass decay_;
  bool oscillatory_;
};

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

AnalyticField make_zero();
AnalyticField make_abc(double A, double B, double C);
AnalyticField make_rotation();
AnalyticField make_spheromak();

enum class CorruptMode { pressure_shift, velocity_noise };

// Perturbs the base field by delta times a fixed smooth bump supported in the
// unit ball.  pressure_shift adds delta*bump(x) to p; velocity_noise adds
// delta*bump(x) times a seeded constant unit direction to u.  The result is
// flagged as a non-solution (beltrami=false, no lambda).  Requires delta > 0.
AnalyticField make_corrupt(const AnalyticField& base, CorruptMode mode, double delta,
                           std::uint64_t seed = 0);

// String grammar:
//   zero | rotation | spheromak | abc:A,B,C |
//   corrupt:<base>:<mode>:<delta>[:<seed>]   mode in {pressure_shift, velocity_noise}
// Throws CatalogError on anything it cannot parse.
AnalyticField make_field(const std::string& id);

struct CatalogEntry {
  std::string pattern;
  std::string example;
  std::string description;
};
std::vector<CatalogEntry> catalog_entries();

// ---------------------------------------------------------------------------
// pointwise operations
// ---------------------------------------------------------------------------

struct Decomposition {
  Vec3 normal;      // (u . x / |x|^2) x
  Vec3 tangential;  // u - normal
};

// throws std::domain_error at x = 0
Decomposition decompose(const Vec3& u, const Vec3& x);

// u x x/|x|: same norm as the tangential part, kept as a cross-check
Vec3 tangential_cross(const Vec3& u, const Vec3& x);

// second-order central differences
Vec3 curl_fd(const AnalyticField& f, const Vec3& x, double h = 1e-4);
double divergence_fd(const AnalyticField& f, const Vec3& x, double h = 1e-4);

struct BeltramiResiduals {
  // max |curl u - lambda u| over the sample points; empty when the field
  // carries no proportionality constant
  std::optional<double> max_curl;
  // max |p + |u|^2/2|
  double max_pressure{0.0};
};

BeltramiResiduals beltrami_residuals(const AnalyticField& f, std::span<const Vec3> points,
                                     double h = 1e-4);

// ---------------------------------------------------------------------------
// spherical Bessel helpers backing the spheromak field
// ---------------------------------------------------------------------------

double spherical_j1(double r);
double spherical_j1_prime(double r);

}  // namespace bverify

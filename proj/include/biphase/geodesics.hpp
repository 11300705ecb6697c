#pragma once

// Ray-space geodesics: closed-form arcs between two states, residual checks of
// the geodesic and horizontality equations, lengths, parallel lifts, the
// two-level plate scenario and the harmonic condition Im(Q'' + 4Q) = 0.

#include <span>

#include "biphase/converters.hpp"
#include "biphase/phases.hpp"
#include "biphase/state_space.hpp"

namespace biphase {

/// Great-circle arc Psi(s) = a cos s + u sin s, s in [0, s0], where b has been
/// re-gauged so that <a|b> >= 0, u = (b - a<a|b>) / sqrt(1 - |<a|b>|^2) and
/// s0 = arccos <a|b>.
class GeodesicArc {
 public:
  /// Throws DegenerateGeodesicError when a and b lie on the same ray
  /// (ray_distance <= 1e-9) and UsageError on a basis mismatch.
  GeodesicArc(const StateVector& a, const StateVector& b);

  double length() const noexcept { return s0_; }
  const StateVector& start() const noexcept { return start_; }
  /// b multiplied by the phase that makes <a|b> real non-negative.
  const StateVector& end() const noexcept { return end_; }

  Amplitudes position(double s) const;
  Amplitudes velocity(double s) const;
  Amplitudes acceleration(double s) const;

  /// n uniform samples on [0, s0]; the last sample is exactly end().
  Curve sample(std::size_t n) const;

 private:
  StateVector start_;
  StateVector end_;
  Amplitudes normal_;
  double s0_;
};

Curve geodesic_between(const StateVector& a, const StateVector& b, std::size_t n);

struct AnalyticGeodesicResiduals {
  double geodesic = 0.0;     // max |Psi'' + <Psi'|Psi'> Psi|
  double horizontal = 0.0;   // max |<Psi|Psi'>|
};

/// Residuals of the arc's exact derivatives on `n` sample points.
AnalyticGeodesicResiduals analytic_residuals(const GeodesicArc& arc, std::size_t n);

struct FdResidual {
  double value = 0.0;
  double step = 0.0;
};

/// max over interior samples of |Psi'' + <Psi'|Psi'> Psi| from finite
/// differences. Requires a uniform curve with >= 5 samples.
FdResidual geodesic_residual(const Curve& curve);

/// max over samples of |<Psi|Psi'>|. Requires >= 3 samples.
double horizontality_residual(const Curve& curve);

/// Gauge transform with alpha(s) = -int_{s_1}^{s} Im <Psi|Psi'> ds', making
/// the curve horizontal while keeping every ray.
Curve parallel_lift(const Curve& curve);

/// int sqrt(<Psi'|Psi'> - |<Psi|Psi'>|^2) ds. Small negative radicands
/// (>= -1e-12) are clipped to zero; anything lower throws NumericError.
double curve_length(const Curve& curve);

/// Which pair of PMZ levels the two-level evolution mixes.
enum class TwoLevelFamily {
  PlusMinus,  // cos 2chi = 1 (chi = 0), d3 = 0: levels (Psi+, Psi-)
  PlusZero,   // sin 2chi = 1 (chi = pi/4), d2 = 0: levels (Psi+, Psi0)
};

/// Two-level state driven by a plate whose orientation couples only the two
/// occupied levels; s = 2 delta.
class GeodesicScenario {
 public:
  /// Throws InvalidInputError unless |first|^2 + |second|^2 = 1 within 1e-12.
  GeodesicScenario(Complex first, Complex second, double s_max,
                   TwoLevelFamily family = TwoLevelFamily::PlusMinus);

  /// Extracts the two amplitudes from a PMZ state whose third (PlusMinus) or
  /// second (PlusZero) amplitude vanishes within 1e-12.
  static GeodesicScenario from_state(const StateVector& state, double s_max);

  Complex first() const noexcept { return first_; }
  Complex second() const noexcept { return second_; }
  double s_max() const noexcept { return s_max_; }
  TwoLevelFamily family() const noexcept { return family_; }

  /// c = first* second + second* first, real with |c| <= 1.
  double coupling() const noexcept;

  GeodesicScenario with_s_max(double s) const;

  StateVector initial_state() const;
  PlateSpec plate(double s) const;
  /// n uniform samples of Q(s/2, chi) d over s in [0, s_max], parameterized
  /// by s. Throws UsageError unless s_max > 0.
  Curve sample(std::size_t n) const;
  double chi() const noexcept;

 private:
  Complex first_;
  Complex second_;
  double s_max_;
  TwoLevelFamily family_;
};

/// Phases of the two-level scenario at s = s_max.
///
/// `theta` solves tan(theta) = c tan(s) on the principal arctangent branch,
/// (-pi/2, pi/2), which is where the phase jump at s = pi/2 lives; for
/// |c| = 1 the solution is theta = c s exactly. `phi_g = theta - s c`.
///
/// `theta_continuous` is arg(cos s + i c sin s) unwrapped from theta(0) = 0,
/// i.e. the Pancharatnam phase of the evolved state; it is continuous
/// across s = pi/2 whenever c != 0.
struct TwoLevelPhases {
  double theta = 0.0;
  double phi_g = 0.0;
  double theta_continuous = 0.0;
  double phi_g_continuous = 0.0;
};

TwoLevelPhases two_level_scenario(const GeodesicScenario& scenario);

/// phi_g(pi/2 + epsilon) - phi_g(pi/2 - epsilon) on the arctangent branch.
/// Reports 0 for |c| = 1. Throws UsageError unless 0 < epsilon < 0.1.
double detect_phase_jump(const GeodesicScenario& scenario, double epsilon);

enum class DerivativeMethod { Analytic, FiniteDifference };

/// max |Im(d^2Q/ddelta^2 + 4Q)| over the grid and all entries. The
/// finite-difference path uses the grid spacing as the stencil step and
/// evaluates interior points only. Requires a uniform grid with >= 5 points.
double generalized_geodesic_check(double chi, std::span<const double> delta_grid,
                                  DerivativeMethod method = DerivativeMethod::Analytic);

/// Richardson-style check that a plate step is geodesic in the general
/// sense: the geometric phase of d -> Q(delta) d shrinks at least
/// quadratically with delta.
struct GeneralGeodesy {
  double step_phase = 0.0;       // geometric phase of d -> Q(delta) d
  double half_step_phase = 0.0;  // same with delta / 2
  double order = 0.0;            // log2(step_phase / half_step_phase)
};

GeneralGeodesy general_geodesy(const StateVector& d, const PlateSpec& spec);

}  // namespace biphase

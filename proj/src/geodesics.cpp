#include "biphase/geodesics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "biphase/curve_calculus.hpp"

namespace biphase {
namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_imag(const Matrix3c& m) { return m.imag().cwiseAbs().maxCoeff(); }

}  // namespace

GeodesicArc::GeodesicArc(const StateVector& a, const StateVector& b)
    : start_(a), end_(b), normal_(Amplitudes::Zero()), s0_(0.0) {
  const Complex overlap = inner(a, b);
  const Complex phase = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : 1.0;
  const Amplitudes regauged = b.amplitudes() * phase;
  const double cos_s0 = std::abs(overlap);
  const Amplitudes orthogonal = regauged - a.amplitudes() * cos_s0;
  const double sin_s0 = orthogonal.norm();
  if (sin_s0 <= 1e-9) {
    throw DegenerateGeodesicError("geodesic endpoints lie on the same ray");
  }
  end_ = StateVector(regauged, b.basis());
  normal_ = orthogonal / sin_s0;
  s0_ = std::atan2(sin_s0, cos_s0);
}

Amplitudes GeodesicArc::position(double s) const {
  return start_.amplitudes() * std::cos(s) + normal_ * std::sin(s);
}

Amplitudes GeodesicArc::velocity(double s) const {
  return -start_.amplitudes() * std::sin(s) + normal_ * std::cos(s);
}

Amplitudes GeodesicArc::acceleration(double s) const { return -position(s); }

Curve GeodesicArc::sample(std::size_t n) const {
  if (n < 2) throw UsageError("geodesic sampling needs at least 2 samples");
  std::vector<double> parameters = linspace(0.0, s0_, n);
  std::vector<StateVector> states;
  states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      states.push_back(start_);
    } else if (i + 1 == n) {
      states.push_back(end_);
    } else {
      states.push_back(StateVector::normalized(position(parameters[i]), start_.basis()));
    }
  }
  return Curve(std::move(parameters), std::move(states));
}

Curve geodesic_between(const StateVector& a, const StateVector& b, std::size_t n) {
  return GeodesicArc(a, b).sample(n);
}

AnalyticGeodesicResiduals analytic_residuals(const GeodesicArc& arc, std::size_t n) {
  AnalyticGeodesicResiduals out;
  for (double s : linspace(0.0, arc.length(), n)) {
    const Amplitudes psi = arc.position(s);
    const Amplitudes v = arc.velocity(s);
    const Amplitudes acc = arc.acceleration(s);
    out.geodesic = std::max(out.geodesic, (acc + v.squaredNorm() * psi).norm());
    out.horizontal = std::max(out.horizontal, std::abs(psi.dot(v)));
  }
  return out;
}

FdResidual geodesic_residual(const Curve& curve) {
  if (curve.size() < 5) throw UsageError("geodesic residual needs at least 5 samples");
  const double h = curve.step();
  const auto v = first_derivative(curve);
  const auto acc = second_derivative(curve);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const Amplitudes& psi = curve.state(i).amplitudes();
    worst = std::max(worst, (acc[i] + v[i].squaredNorm() * psi).norm());
  }
  return {worst, h};
}

double horizontality_residual(const Curve& curve) {
  double worst = 0.0;
  for (const Complex& a : connection(curve)) worst = std::max(worst, std::abs(a));
  return worst;
}

Curve parallel_lift(const Curve& curve) {
  const auto a = connection_im(curve);
  std::vector<double> alpha = cumulative_integral(a, curve.step());
  for (double& x : alpha) x = -x;
  return gauge_transform(curve, alpha);
}

double curve_length(const Curve& curve) {
  const auto v = first_derivative(curve);
  std::vector<double> speed(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Amplitudes& psi = curve.state(i).amplitudes();
    const double radicand = v[i].squaredNorm() - std::norm(psi.dot(v[i]));
    if (radicand < -1e-12) {
      throw NumericError("negative metric radicand " + std::to_string(radicand) +
                         " at s = " + std::to_string(curve.parameter(i)));
    }
    speed[i] = std::sqrt(std::max(radicand, 0.0));
  }
  return integrate_uniform(speed, curve.step());
}

GeodesicScenario::GeodesicScenario(Complex first, Complex second, double s_max,
                                   TwoLevelFamily family)
    : first_(first), second_(second), s_max_(s_max), family_(family) {
  const double norm2 = std::norm(first) + std::norm(second);
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kNormTolerance) {
    throw InvalidInputError("two-level amplitudes must satisfy |d1|^2 + |d2|^2 = 1");
  }
  if (!std::isfinite(s_max)) throw InvalidInputError("scenario s must be finite");
}

GeodesicScenario GeodesicScenario::from_state(const StateVector& state, double s_max) {
  if (state.basis() != Basis::Pmz) throw UsageError("two-level scenario expects a PMZ state");
  if (std::abs(state[2]) <= 1e-12) {
    return GeodesicScenario(state[0], state[1], s_max, TwoLevelFamily::PlusMinus);
  }
  if (std::abs(state[1]) <= 1e-12) {
    return GeodesicScenario(state[0], state[2], s_max, TwoLevelFamily::PlusZero);
  }
  throw InvalidInputError("two-level scenario needs d3 = 0 or d2 = 0");
}

double GeodesicScenario::coupling() const noexcept {
  return (std::conj(first_) * second_ + std::conj(second_) * first_).real();
}

GeodesicScenario GeodesicScenario::with_s_max(double s) const {
  return GeodesicScenario(first_, second_, s, family_);
}

StateVector GeodesicScenario::initial_state() const {
  if (family_ == TwoLevelFamily::PlusMinus) {
    return StateVector(first_, second_, 0.0, Basis::Pmz);
  }
  return StateVector(first_, 0.0, second_, Basis::Pmz);
}

double GeodesicScenario::chi() const noexcept {
  return family_ == TwoLevelFamily::PlusMinus ? 0.0 : kPi / 4.0;
}

PlateSpec GeodesicScenario::plate(double s) const { return {s / 2.0, chi()}; }

Curve GeodesicScenario::sample(std::size_t n) const {
  if (!(s_max_ > 0.0)) throw UsageError("scenario curve needs s > 0");
  const Curve by_delta = evolve(plate(s_max_), initial_state(), n);
  std::vector<double> parameters(by_delta.parameters().begin(), by_delta.parameters().end());
  for (double& p : parameters) p *= 2.0;
  return Curve(std::move(parameters),
               std::vector<StateVector>(by_delta.states().begin(), by_delta.states().end()));
}

TwoLevelPhases two_level_scenario(const GeodesicScenario& scenario) {
  const double s = scenario.s_max();
  const double c = scenario.coupling();
  TwoLevelPhases out;
  if (std::abs(std::abs(c) - 1.0) <= 1e-12) {
    out.theta = c * s;
  } else {
    out.theta = std::atan(c * std::tan(s));
  }
  if (c == 0.0) {
    out.theta_continuous = principal_angle(std::arg(Complex(std::cos(s), 0.0)));
  } else {
    // arg(cos s + i c sin s) is monotone in s; each half turn of s adds
    // sign(c) * pi.
    out.theta_continuous =
        std::atan(c * std::tan(s)) + std::copysign(kPi, c) * std::round(s / kPi);
  }
  out.phi_g = out.theta - s * c;
  out.phi_g_continuous = out.theta_continuous - s * c;
  return out;
}

double detect_phase_jump(const GeodesicScenario& scenario, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.1)) {
    throw UsageError("phase-jump epsilon must lie in (0, 0.1)");
  }
  if (std::abs(std::abs(scenario.coupling()) - 1.0) <= 1e-12) return 0.0;
  const double above = two_level_scenario(scenario.with_s_max(kPi / 2.0 + epsilon)).phi_g;
  const double below = two_level_scenario(scenario.with_s_max(kPi / 2.0 - epsilon)).phi_g;
  return above - below;
}

double generalized_geodesic_check(double chi, std::span<const double> delta_grid,
                                  DerivativeMethod method) {
  const std::size_t n = delta_grid.size();
  if (n < 5) throw UsageError("generalized geodesic check needs at least 5 grid points");
  const double h = (delta_grid.back() - delta_grid.front()) / static_cast<double>(n - 1);
  if (!(std::abs(h) > 0.0)) throw UsageError("delta grid must not be constant");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((delta_grid[i] - delta_grid[i - 1]) - h) > 1e-9 * std::abs(h)) {
      throw UsageError("delta grid must be uniform");
    }
  }

  double worst = 0.0;
  if (method == DerivativeMethod::Analytic) {
    for (double delta : delta_grid) {
      const PlateSpec spec{delta, chi};
      worst = std::max(worst, max_abs_imag(q_matrix_second_derivative(spec) +
                                           4.0 * q_matrix(spec).entries()));
    }
    return worst;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Matrix3c prev = q_matrix({delta_grid[i - 1], chi}).entries();
    const Matrix3c here = q_matrix({delta_grid[i], chi}).entries();
    const Matrix3c next = q_matrix({delta_grid[i + 1], chi}).entries();
    const Matrix3c second = (prev - 2.0 * here + next) / (h * h);
    worst = std::max(worst, max_abs_imag(second + 4.0 * here));
  }
  return worst;
}

GeneralGeodesy general_geodesy(const StateVector& d, const PlateSpec& spec) {
  auto step_phase = [&](double delta) {
    const PlateSpec step{delta, spec.chi};
    return principal_angle(transformation_phase(d, step).phase -
                           dynamical_phase_closed_form(d, step));
  };
  GeneralGeodesy out;
  out.step_phase = step_phase(spec.delta);
  out.half_step_phase = step_phase(spec.delta / 2.0);
  const double full = std::abs(out.step_phase);
  const double half = std::abs(out.half_step_phase);
  if (full < 1e-15 || half == 0.0) {
    out.order = std::numeric_limits<double>::infinity();
  } else {
    out.order = std::log2(full / half);
  }
  return out;
}

}  // namespace biphase

#include "biphase/phases.hpp"

#include <cmath>
#include <string>

#include "biphase/curve_calculus.hpp"

namespace biphase {
namespace {

Complex checked_overlap(const StateVector& a, const StateVector& b, double threshold,
                        const char* what) {
  const Complex z = inner(a, b);
  if (std::abs(z) < threshold) {
    throw IndeterminatePhaseError(std::string(what) + ": overlap |<a|b>| = " +
                                  std::to_string(std::abs(z)) +
                                  " is below the orthogonality threshold; phase is indeterminate");
  }
  return z;
}

void require_pmz(const StateVector& d) {
  if (d.basis() != Basis::Pmz) throw UsageError("plate phases expect a PMZ state");
}

}  // namespace

double pancharatnam(const StateVector& a, const StateVector& b, double threshold) {
  return principal_arg(checked_overlap(a, b, threshold, "pancharatnam"));
}

double visibility(const StateVector& a, const StateVector& b) {
  return std::min(std::abs(inner(a, b)), 1.0);
}

double interference_intensity(const StateVector& a, const StateVector& b, double phi) {
  const Complex z = inner(a, b);
  return 2.0 + 2.0 * std::abs(z) * std::cos(phi - std::arg(z));
}

double dynamical_phase_closed_form(const StateVector& d, const PlateSpec& spec) {
  require_pmz(d);
  const Complex d1 = d[0];
  const Complex d2 = d[1];
  const Complex d3 = d[2];
  const Complex integrand =
      2.0 * kI * std::cos(2.0 * spec.chi) * (d1 * std::conj(d2) + std::conj(d1) * d2) +
      2.0 * kI * std::sin(2.0 * spec.chi) * (d1 * std::conj(d3) + std::conj(d1) * d3);
  return spec.delta * integrand.imag();
}

double dynamical_phase_numeric(const Curve& curve) {
  if (curve.size() < 3) throw UsageError("dynamical phase quadrature needs at least 3 samples");
  return integrate_uniform(connection_im(curve), curve.step());
}

PhaseReport make_report(double pancharatnam_phase, double dynamical, double vis) {
  return PhaseReport{pancharatnam_phase, dynamical, principal_angle(pancharatnam_phase - dynamical),
                     vis};
}

PhaseReport geometric_phase(const Curve& curve) {
  const double p = pancharatnam(curve.front(), curve.back());
  return make_report(p, dynamical_phase_numeric(curve), visibility(curve.front(), curve.back()));
}

std::vector<double> pancharatnam_profile(const Curve& curve) {
  std::vector<double> angles(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    angles[i] = principal_arg(checked_overlap(curve.front(), curve.state(i),
                                              kOrthogonalityThreshold, "pancharatnam_profile"));
  }
  return unwrap(angles);
}

TransformationPhase transformation_phase(const StateVector& d, const PlateSpec& spec) {
  require_pmz(d);
  const StateVector out = q_matrix(spec).apply(d);
  const Complex z = checked_overlap(d, out, kOrthogonalityThreshold, "transformation_phase");
  return {principal_arg(z), z.imag()};
}

double transformation_imaginary_formula(const StateVector& d, const PlateSpec& spec) {
  require_pmz(d);
  const Complex d1 = d[0];
  const Complex d2 = d[1];
  const Complex d3 = d[2];
  const Complex bracket =
      std::cos(2.0 * spec.chi) * (std::conj(d1) * d2 + std::conj(d2) * d1) +
      std::sin(2.0 * spec.chi) * (std::conj(d1) * d3 + d1 * std::conj(d3));
  return std::sin(2.0 * spec.delta) * bracket.real();
}

double vertex_product(std::span<const StateVector> states) {
  if (states.size() < 2) throw UsageError("vertex product needs at least 2 states");
  const std::size_t n = states.size();
  // Each factor is rescaled to unit modulus; only the argument matters and
  // long products would otherwise underflow.
  Complex product = checked_overlap(states[n - 1], states[0], kOrthogonalityThreshold,
                                    "vertex_product closing leg");
  product /= std::abs(product);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Complex z =
        checked_overlap(states[k], states[k + 1], kOrthogonalityThreshold, "vertex_product");
    product *= z / std::abs(z);
  }
  return principal_angle(-std::arg(product));
}

double bargmann_limit(const Curve& curve) {
  if (curve.size() < 3) throw UsageError("bargmann_limit needs at least 3 samples");
  return vertex_product(curve.states());
}

}  // namespace biphase

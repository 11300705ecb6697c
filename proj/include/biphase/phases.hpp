#pragma once

// Pancharatnam, dynamical and geometric phases; visibility and two-beam
// interference; Bargmann-type products over polygons and sampled curves.

#include <span>
#include <vector>

#include "biphase/converters.hpp"
#include "biphase/state_space.hpp"

namespace biphase {

/// |<a|b>| below this makes arg <a|b> indeterminate.
inline constexpr double kOrthogonalityThreshold = 1e-9;

/// Phase decomposition of an open path. All angles in radians; geometric is
/// pancharatnam - dynamical reduced to (-pi, pi].
struct PhaseReport {
  double pancharatnam = 0.0;
  double dynamical = 0.0;
  double geometric = 0.0;
  double visibility = 0.0;
};

/// arg <a|b> on (-pi, pi]. Throws IndeterminatePhaseError when
/// |<a|b>| < threshold.
double pancharatnam(const StateVector& a, const StateVector& b,
                    double threshold = kOrthogonalityThreshold);

/// |<a|b>|
double visibility(const StateVector& a, const StateVector& b);

/// |e^{i phi} a + b|^2 = 2 + 2 |<a|b>| cos(phi - arg <a|b>).
double interference_intensity(const StateVector& a, const StateVector& b, double phi);

/// Dynamical phase picked up by `d` (PMZ) while a plate of orientation chi is
/// thickened from 0 to spec.delta. The integrand is constant in delta:
///   2 cos 2chi (d1 d2* + d1* d2) + 2 sin 2chi (d1 d3* + d1* d3).
double dynamical_phase_closed_form(const StateVector& d, const PlateSpec& spec);

/// Im int <Psi|dPsi/ds> ds by composite Simpson over the samples.
/// Requires a uniform curve with >= 3 samples.
double dynamical_phase_numeric(const Curve& curve);

/// Endpoint Pancharatnam phase, quadrature dynamical phase and their
/// difference. Throws IndeterminatePhaseError for orthogonal endpoints.
PhaseReport geometric_phase(const Curve& curve);

/// Combines a Pancharatnam phase with an already computed dynamical phase.
PhaseReport make_report(double pancharatnam, double dynamical, double visibility);

/// arg <Psi(s_0)|Psi(s_k)> at every sample, unwrapped by continuity from 0.
/// Throws IndeterminatePhaseError if any overlap vanishes.
std::vector<double> pancharatnam_profile(const Curve& curve);

struct TransformationPhase {
  double phase = 0.0;           // arg <d|Q d>
  double imaginary_part = 0.0;  // Im <d|Q d>
};

/// Phase of the single transformation d -> Q(spec) d.
TransformationPhase transformation_phase(const StateVector& d, const PlateSpec& spec);

/// sin 2delta { cos 2chi (d1* d2 + d2* d1) + sin 2chi (d1* d3 + d1 d3*) },
/// the closed form of Im <d|Q d>.
double transformation_imaginary_formula(const StateVector& d, const PlateSpec& spec);

/// -arg { <N|1> <1|2> <2|3> ... <N-1|N> } for a closed polygon of states.
/// Throws UsageError for fewer than two states and IndeterminatePhaseError
/// when any overlap vanishes.
double vertex_product(std::span<const StateVector> states);

/// vertex_product over all curve samples (closing factor <Psi(s2)|Psi(s1)>).
/// Tends to geometric_phase(curve).geometric as the sampling is refined.
double bargmann_limit(const Curve& curve);

}  // namespace biphase

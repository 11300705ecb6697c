#pragma once

// Finite-difference derivatives, quadrature and angle bookkeeping on
// uniformly sampled curves.
//
// Derivatives use central stencils with the curve's own step. First
// derivatives are five-point (O(h^4)) from five samples up, three-point
// (O(h^2)) below that; second derivatives are O(h^4) from six samples up.
// Boundary samples use one-sided stencils of the same order.

#include <span>
#include <vector>

#include "biphase/state_space.hpp"

namespace biphase {

/// d/ds Psi at every sample. Requires a uniform curve with >= 3 samples.
std::vector<Amplitudes> first_derivative(const Curve& curve);

/// d^2/ds^2 Psi at every sample. Requires a uniform curve with >= 5 samples.
std::vector<Amplitudes> second_derivative(const Curve& curve);

/// <Psi(s)|dPsi/ds> at every sample.
std::vector<Complex> connection(const Curve& curve);

/// Im <Psi(s)|dPsi/ds> at every sample.
std::vector<double> connection_im(const Curve& curve);

/// Composite Simpson integral of uniformly spaced samples. An odd interval
/// count closes with a 3/8 panel; two samples fall back to the trapezoid.
double integrate_uniform(std::span<const double> values, double step);

/// Running integral F_k = int_{s_0}^{s_k} f, fourth-order accurate per
/// interval for >= 4 samples. F_0 = 0.
std::vector<double> cumulative_integral(std::span<const double> values, double step);

/// Reduces an angle to the principal branch (-pi, pi].
double principal_angle(double angle);

/// arg z on (-pi, pi].
double principal_arg(Complex z);

/// Removes 2 pi jumps between consecutive angles.
std::vector<double> unwrap(std::span<const double> angles);

/// Values of start + (stop - start) * i / (count - 1).
std::vector<double> linspace(double start, double stop, std::size_t count);

}  // namespace biphase

#pragma once

// Three-level biphoton polarization states, the Fock <-> (Psi+, Psi-, Psi0)
// basis change, inner products, the ray-space distance and gauge transforms
// of sampled curves.

#include <complex>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "biphase/errors.hpp"

namespace biphase {

using Complex = std::complex<double>;
using Amplitudes = Eigen::Vector3cd;

inline constexpr Complex kI{0.0, 1.0};

/// Tolerance on | |c|^2 - 1 | for a StateVector.
inline constexpr double kNormTolerance = 1e-12;

/// Coefficient ordering of a three-level state.
///   Fock: (|2,0>, |1,1>, |0,2>)
///   Pmz:  (|Psi+>, |Psi->, |Psi0>)
enum class Basis { Fock, Pmz };

std::string_view to_string(Basis basis);
/// Accepts "FOCK" / "PMZ" (case-insensitive). Throws UsageError otherwise.
Basis basis_from_string(std::string_view name);

/// Unit-norm amplitude triple tagged with the basis it is expressed in.
class StateVector {
 public:
  /// Throws InvalidInputError unless the amplitudes are finite and of unit
  /// norm within kNormTolerance.
  StateVector(const Amplitudes& amplitudes, Basis basis);
  StateVector(Complex c1, Complex c2, Complex c3, Basis basis);

  /// Rescales a nonzero vector to unit norm.
  static StateVector normalized(const Amplitudes& amplitudes, Basis basis);

  const Amplitudes& amplitudes() const noexcept { return amplitudes_; }
  Basis basis() const noexcept { return basis_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_(i); }

  /// e^{i alpha} * this
  StateVector with_phase(double alpha) const;

 private:
  Amplitudes amplitudes_;
  Basis basis_;
};

/// The constant real orthogonal matrix A with (Psi+, Psi-, Psi0)^T = A (2,0; 1,1; 0,2)^T.
const Eigen::Matrix3d& basis_change();

StateVector to_pmz(const StateVector& state);
StateVector to_fock(const StateVector& state);

/// <a|b> = sum conj(a_i) b_i. Throws UsageError on a basis mismatch.
Complex inner(const StateVector& a, const StateVector& b);

/// sqrt(1 - |<a|b>|^2), in [0, 1].
double ray_distance(const StateVector& a, const StateVector& b);

/// Ordered samples (s_i, Psi(s_i)) of a one-parameter family of states.
///
/// Invariants: at least two samples, strictly increasing parameters, a
/// single basis tag shared by every state.
class Curve {
 public:
  Curve(std::vector<double> parameters, std::vector<StateVector> states);

  std::size_t size() const noexcept { return parameters_.size(); }
  Basis basis() const noexcept { return states_.front().basis(); }

  double parameter(std::size_t i) const { return parameters_.at(i); }
  const StateVector& state(std::size_t i) const { return states_.at(i); }
  const StateVector& front() const noexcept { return states_.front(); }
  const StateVector& back() const noexcept { return states_.back(); }

  std::span<const double> parameters() const noexcept { return parameters_; }
  std::span<const StateVector> states() const noexcept { return states_; }

  /// True when consecutive parameter gaps agree to a relative 1e-9.
  bool is_uniform() const;
  /// Common spacing of a uniform curve; throws UsageError otherwise.
  double step() const;

 private:
  std::vector<double> parameters_;
  std::vector<StateVector> states_;
};

/// Multiplies every sample by e^{i alpha(s)}. Throws NumericError when alpha
/// is not finite at a sample parameter.
Curve gauge_transform(const Curve& curve, const std::function<double(double)>& alpha);

/// Same, with alpha given per sample.
Curve gauge_transform(const Curve& curve, std::span<const double> alpha);

}  // namespace biphase

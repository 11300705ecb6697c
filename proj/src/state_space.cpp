#include "biphase/state_space.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace biphase {

std::string_view to_string(Basis basis) {
  switch (basis) {
    case Basis::Fock:
      return "FOCK";
    case Basis::Pmz:
      return "PMZ";
  }
  return "?";
}

Basis basis_from_string(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (upper == "FOCK") return Basis::Fock;
  if (upper == "PMZ") return Basis::Pmz;
  throw UsageError("unknown basis '" + std::string(name) + "' (expected FOCK or PMZ)");
}

StateVector::StateVector(const Amplitudes& amplitudes, Basis basis)
    : amplitudes_(amplitudes), basis_(basis) {
  if (!amplitudes_.allFinite()) throw InvalidInputError("state amplitudes must be finite");
  const double deviation = std::abs(amplitudes_.squaredNorm() - 1.0);
  if (deviation > kNormTolerance) {
    throw InvalidInputError("state is not unit norm (| |c|^2 - 1 | = " +
                            std::to_string(deviation) + ")");
  }
}

StateVector::StateVector(Complex c1, Complex c2, Complex c3, Basis basis)
    : StateVector(Amplitudes(c1, c2, c3), basis) {}

StateVector StateVector::normalized(const Amplitudes& amplitudes, Basis basis) {
  const double norm = amplitudes.norm();
  if (!std::isfinite(norm) || norm == 0.0) {
    throw InvalidInputError("cannot normalize a zero or non-finite vector");
  }
  return StateVector(amplitudes / norm, basis);
}

StateVector StateVector::with_phase(double alpha) const {
  return StateVector(amplitudes_ * std::polar(1.0, alpha), basis_);
}

const Eigen::Matrix3d& basis_change() {
  static const Eigen::Matrix3d a = [] {
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::Matrix3d m;
    m << h, 0.0, h,
         h, 0.0, -h,
         0.0, 1.0, 0.0;
    return m;
  }();
  return a;
}

StateVector to_pmz(const StateVector& state) {
  if (state.basis() != Basis::Fock) throw UsageError("to_pmz expects a FOCK state");
  return StateVector(basis_change().cast<Complex>() * state.amplitudes(), Basis::Pmz);
}

StateVector to_fock(const StateVector& state) {
  if (state.basis() != Basis::Pmz) throw UsageError("to_fock expects a PMZ state");
  return StateVector(basis_change().transpose().cast<Complex>() * state.amplitudes(),
                     Basis::Fock);
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.basis() != b.basis()) throw UsageError("inner product of states in different bases");
  return a.amplitudes().dot(b.amplitudes());
}

double ray_distance(const StateVector& a, const StateVector& b) {
  // |b - a<a|b>| equals sqrt(1 - |<a|b>|^2) for unit vectors and keeps full
  // precision when the rays nearly coincide.
  const Complex overlap = inner(a, b);
  return std::min((b.amplitudes() - a.amplitudes() * overlap).norm(), 1.0);
}

Curve::Curve(std::vector<double> parameters, std::vector<StateVector> states)
    : parameters_(std::move(parameters)), states_(std::move(states)) {
  if (parameters_.size() != states_.size()) {
    throw UsageError("curve needs one parameter per state");
  }
  if (parameters_.size() < 2) throw UsageError("curve needs at least 2 samples");
  for (std::size_t i = 0; i < parameters_.size(); ++i) {
    if (!std::isfinite(parameters_[i])) throw UsageError("curve parameters must be finite");
    if (i > 0 && !(parameters_[i] > parameters_[i - 1])) {
      throw UsageError("curve parameters must be strictly increasing");
    }
    if (states_[i].basis() != states_.front().basis()) {
      throw UsageError("curve samples must share one basis");
    }
  }
}

bool Curve::is_uniform() const {
  const double h = (parameters_.back() - parameters_.front()) /
                   static_cast<double>(parameters_.size() - 1);
  for (std::size_t i = 1; i < parameters_.size(); ++i) {
    if (std::abs((parameters_[i] - parameters_[i - 1]) - h) > 1e-9 * std::abs(h)) return false;
  }
  return true;
}

double Curve::step() const {
  if (!is_uniform()) throw UsageError("operation requires uniformly spaced curve samples");
  return (parameters_.back() - parameters_.front()) /
         static_cast<double>(parameters_.size() - 1);
}

Curve gauge_transform(const Curve& curve, std::span<const double> alpha) {
  if (alpha.size() != curve.size()) throw UsageError("gauge needs one value per sample");
  std::vector<StateVector> states;
  states.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!std::isfinite(alpha[i])) {
      throw NumericError("gauge function is not finite at s = " +
                         std::to_string(curve.parameter(i)));
    }
    states.push_back(curve.state(i).with_phase(alpha[i]));
  }
  return Curve({curve.parameters().begin(), curve.parameters().end()}, std::move(states));
}

Curve gauge_transform(const Curve& curve, const std::function<double(double)>& alpha) {
  std::vector<double> values;
  values.reserve(curve.size());
  for (double s : curve.parameters()) values.push_back(alpha(s));
  return gauge_transform(curve, values);
}

}  // namespace biphase

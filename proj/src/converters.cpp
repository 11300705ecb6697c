#include "biphase/converters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "biphase/curve_calculus.hpp"

namespace biphase {
namespace {

constexpr double kUnitaryTolerance = 1e-10;
constexpr double kResidualTolerance = 1e-9;

void require_finite(const PlateSpec& spec) {
  if (!std::isfinite(spec.delta) || !std::isfinite(spec.chi)) {
    throw InvalidInputError("plate delta and chi must be finite");
  }
}

Matrix3c a_matrix() { return basis_change().cast<Complex>(); }

}  // namespace

double unitarity_defect(const Matrix3c& u) {
  return (u.adjoint() * u - Matrix3c::Identity()).cwiseAbs().maxCoeff();
}

Unitary3::Unitary3(const Matrix3c& entries, Basis basis) : entries_(entries), basis_(basis) {
  if (!entries_.allFinite()) throw InvalidInputError("matrix entries must be finite");
  const double defect = unitarity_defect(entries_);
  if (defect > kUnitaryTolerance) {
    throw InvalidInputError("matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
  const double det_error = std::abs(entries_.determinant() - 1.0);
  if (det_error > kUnitaryTolerance) {
    throw InvalidInputError("matrix determinant differs from 1 by " + std::to_string(det_error));
  }
}

Unitary3 Unitary3::identity(Basis basis) { return Unitary3(Matrix3c::Identity(), basis); }

StateVector Unitary3::apply(const StateVector& state) const {
  if (state.basis() != basis_) {
    throw UsageError("matrix acts on " + std::string(to_string(basis_)) + " but state is " +
                     std::string(to_string(state.basis())));
  }
  return StateVector(entries_ * state.amplitudes(), basis_);
}

Unitary3 Unitary3::operator*(const Unitary3& rhs) const {
  if (basis_ != rhs.basis_) throw UsageError("cannot multiply matrices in different bases");
  return Unitary3(entries_ * rhs.entries_, basis_);
}

TransmissionPair plate_coefficients(const PlateSpec& spec) {
  require_finite(spec);
  const double c = std::cos(spec.delta);
  const double s = std::sin(spec.delta);
  return {Complex(c, s * std::cos(2.0 * spec.chi)), Complex(0.0, s * std::sin(2.0 * spec.chi))};
}

Unitary3 g_matrix(const TransmissionPair& tr) {
  const double norm2 = std::norm(tr.t) + std::norm(tr.r);
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > 1e-9) {
    throw InvalidInputError("|t|^2 + |r|^2 must equal 1 (got " + std::to_string(norm2) + ")");
  }
  const double scale = 1.0 / std::sqrt(norm2);
  const Complex t = tr.t * scale;
  const Complex r = tr.r * scale;
  const Complex tc = std::conj(t);
  const Complex rc = std::conj(r);
  const double rt2 = std::numbers::sqrt2;

  Matrix3c g;
  g << t * t, rt2 * t * r, r * r,
       -rt2 * t * rc, std::norm(t) - std::norm(r), rt2 * tc * r,
       rc * rc, -rt2 * tc * rc, tc * tc;
  return Unitary3(g, Basis::Fock);
}

Unitary3 q_matrix(const PlateSpec& spec) {
  const Matrix3c a = a_matrix();
  return Unitary3(a * g_matrix(plate_coefficients(spec)).entries() * a.transpose(), Basis::Pmz);
}

Matrix3c q_matrix_explicit(const PlateSpec& spec) {
  require_finite(spec);
  const double d = spec.delta;
  const double x = spec.chi;
  const double sd = std::sin(d);
  const double cd = std::cos(d);
  Matrix3c q;
  q << std::cos(2 * d), kI * std::sin(2 * d) * std::cos(2 * x), kI * sd * std::sin(2 * x),
       kI * std::sin(2 * d) * std::cos(2 * x), cd * cd - sd * sd * std::cos(4 * x),
       -std::sin(4 * x) * sd * sd,
       kI * std::sin(2 * d) * std::sin(2 * x), -std::sin(4 * x) * sd * sd,
       cd * cd + sd * sd * std::cos(4 * x);
  return q;
}

Matrix3c q_matrix_trigonometric(const PlateSpec& spec) {
  Matrix3c q = q_matrix_explicit(spec);
  q(0, 2) = kI * std::sin(2 * spec.delta) * std::sin(2 * spec.chi);
  return q;
}

Matrix3c q_matrix_second_derivative(const PlateSpec& spec) {
  require_finite(spec);
  const double c2d = std::cos(2 * spec.delta);
  const double s2d = std::sin(2 * spec.delta);
  const double c2x = std::cos(2 * spec.chi);
  const double s2x = std::sin(2 * spec.chi);
  const double c4x = std::cos(4 * spec.chi);
  const double s4x = std::sin(4 * spec.chi);
  // cos^2 d = (1 + cos 2d) / 2 and sin^2 d = (1 - cos 2d) / 2.
  Matrix3c q;
  q << -4.0 * c2d, -4.0 * kI * s2d * c2x, -4.0 * kI * s2d * s2x,
       -4.0 * kI * s2d * c2x, -2.0 * c2d * (1.0 + c4x), -2.0 * c2d * s4x,
       -4.0 * kI * s2d * s2x, -2.0 * c2d * s4x, -2.0 * c2d * (1.0 - c4x);
  return q;
}

std::vector<EntryDiscrepancy> explicit_form_discrepancies(const PlateSpec& spec,
                                                          double tolerance) {
  const Matrix3c explicit_form = q_matrix_explicit(spec);
  const Matrix3c derived = q_matrix(spec).entries();
  std::vector<EntryDiscrepancy> out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(explicit_form(i, j) - derived(i, j)) > tolerance) {
        out.push_back({i + 1, j + 1, explicit_form(i, j), derived(i, j)});
      }
    }
  }
  return out;
}

Unitary3 compose(std::span<const PlateSpec> plates) {
  if (plates.empty()) throw UsageError("compose needs at least one plate");
  Matrix3c total = Matrix3c::Identity();
  for (const auto& plate : plates) total = q_matrix(plate).entries() * total;
  return Unitary3(total, Basis::Pmz);
}

EigenSystem eigen(const Unitary3& u) {
  // A unitary is normal, so its complex Schur form is diagonal and the Schur
  // vectors are orthonormal eigenvectors, degenerate eigenspaces included.
  Eigen::ComplexSchur<Matrix3c> schur(u.entries());
  if (schur.info() != Eigen::Success) throw ConvergenceError("Schur factorization failed");
  const Matrix3c& t = schur.matrixT();
  const Matrix3c& z = schur.matrixU();

  struct Candidate {
    Complex value;
    Amplitudes vector;
    double argument;
    int lead_index;
    double lead_magnitude;
  };
  std::vector<Candidate> candidates;
  for (int k = 0; k < 3; ++k) {
    const Complex lambda = t(k, k);
    Amplitudes v = z.col(k).normalized();
    int lead = 0;
    while (lead < 2 && std::abs(v(lead)) <= 1e-10) ++lead;
    v *= std::polar(1.0, -std::arg(v(lead)));
    v(lead) = std::abs(v(lead));

    const double residual = (u.entries() * v - lambda * v).norm();
    if (residual > kResidualTolerance) {
      throw ConvergenceError("eigen residual " + std::to_string(residual) + " above tolerance");
    }
    double argument = principal_arg(lambda);
    if (argument <= -std::numbers::pi + 1e-12) argument = std::numbers::pi;
    candidates.push_back({lambda, v, argument, lead, std::abs(v(lead))});
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (std::abs(a.argument - b.argument) > 1e-9) return a.argument < b.argument;
    if (a.lead_index != b.lead_index) return a.lead_index < b.lead_index;
    return a.lead_magnitude > b.lead_magnitude;
  });

  auto pair = [&](int k) {
    return EigenPair{candidates[k].value, StateVector::normalized(candidates[k].vector, u.basis())};
  };
  return EigenSystem{{pair(0), pair(1), pair(2)}};
}

Curve evolve(const PlateSpec& spec, const StateVector& state, std::size_t n) {
  if (n < 2) throw UsageError("evolve needs at least 2 samples");
  if (state.basis() != Basis::Pmz) throw UsageError("evolve expects a PMZ state");
  require_finite(spec);

  const bool by_thickness = spec.delta > 0.0;
  std::vector<double> parameters(n);
  std::vector<StateVector> states;
  states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fraction = static_cast<double>(i) / static_cast<double>(n - 1);
    const double delta = spec.delta * fraction;
    parameters[i] = by_thickness ? delta : fraction;
    states.push_back(i == 0 ? state : q_matrix({delta, spec.chi}).apply(state));
  }
  return Curve(std::move(parameters), std::move(states));
}

std::vector<Curve> evolve_stack(std::span<const PlateSpec> plates, const StateVector& state,
                                std::size_t samples_per_plate) {
  if (plates.empty()) throw UsageError("plate stack is empty");
  std::vector<Curve> segments;
  segments.reserve(plates.size());
  StateVector current = state;
  double offset = 0.0;
  for (const auto& plate : plates) {
    const Curve local = evolve(plate, current, samples_per_plate);
    std::vector<double> parameters(local.parameters().begin(), local.parameters().end());
    for (double& s : parameters) s += offset;
    offset = parameters.back();
    current = local.back();
    segments.emplace_back(std::move(parameters),
                          std::vector<StateVector>(local.states().begin(), local.states().end()));
  }
  return segments;
}

Curve concatenate(std::span<const Curve> segments) {
  if (segments.empty()) throw UsageError("nothing to concatenate");
  std::vector<double> parameters(segments[0].parameters().begin(),
                                 segments[0].parameters().end());
  std::vector<StateVector> states(segments[0].states().begin(), segments[0].states().end());
  for (std::size_t k = 1; k < segments.size(); ++k) {
    const Curve& next = segments[k];
    if (next.parameter(0) != parameters.back() ||
        (next.front().amplitudes() - states.back().amplitudes()).norm() > 1e-12) {
      throw UsageError("segments do not join end to start");
    }
    parameters.insert(parameters.end(), next.parameters().begin() + 1, next.parameters().end());
    states.insert(states.end(), next.states().begin() + 1, next.states().end());
  }
  return Curve(std::move(parameters), std::move(states));
}

}  // namespace biphase

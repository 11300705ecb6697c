#pragma once

// Loss-free linear phase plates acting on the biphoton: transmission and
// reflection coefficients, the Fock-basis matrix G, its (Psi+, Psi-, Psi0)
// counterpart Q = A G A^{-1}, plate stacks and eigen-analysis.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "biphase/state_space.hpp"

namespace biphase {

using Matrix3c = Eigen::Matrix3cd;

/// Optical thickness `delta` and orientation `chi` (from the horizontal), radians.
struct PlateSpec {
  double delta = 0.0;
  double chi = 0.0;
};

/// Amplitude transmission and reflection of a plate, |t|^2 + |r|^2 = 1.
struct TransmissionPair {
  Complex t;
  Complex r;
};

/// 3x3 unitary with unit determinant acting on coefficient triples in `basis`.
class Unitary3 {
 public:
  /// Throws InvalidInputError unless max|U^dag U - I| <= 1e-10 and
  /// |det U - 1| <= 1e-10.
  Unitary3(const Matrix3c& entries, Basis basis);

  static Unitary3 identity(Basis basis);

  const Matrix3c& entries() const noexcept { return entries_; }
  Basis basis() const noexcept { return basis_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

  StateVector apply(const StateVector& state) const;

  /// this * rhs; both factors must share a basis.
  Unitary3 operator*(const Unitary3& rhs) const;

 private:
  Matrix3c entries_;
  Basis basis_;
};

/// Largest |(U^dag U - I)_ij|.
double unitarity_defect(const Matrix3c& u);

/// t = cos d + i sin d cos 2x, r = i sin d sin 2x. Throws InvalidInputError
/// for non-finite delta or chi.
TransmissionPair plate_coefficients(const PlateSpec& spec);

/// Fock-basis converter matrix
///   ( t^2           sqrt2 t r       r^2     )
///   ( -sqrt2 t r*   |t|^2 - |r|^2   sqrt2 t* r )
///   ( r*^2          -sqrt2 t* r*    t*^2    )
/// The pair is rescaled to unit norm first; a norm deviating from one by more
/// than 1e-9 is rejected with InvalidInputError.
Unitary3 g_matrix(const TransmissionPair& tr);

/// Q = A G A^T, acting on (Psi+, Psi-, Psi0) coefficients.
Unitary3 q_matrix(const PlateSpec& spec);

/// Closed trigonometric form of Q with entry (1,3) = i sin(delta) sin(2 chi).
/// This variant is not unitary in general, so a bare matrix is returned.
Matrix3c q_matrix_explicit(const PlateSpec& spec);

/// Trigonometric form of Q with entry (1,3) written as i sin(2 delta) sin(2 chi),
/// which agrees with A G A^T.
Matrix3c q_matrix_trigonometric(const PlateSpec& spec);

/// Analytic d^2 Q / d delta^2 of the trigonometric form.
Matrix3c q_matrix_second_derivative(const PlateSpec& spec);

struct EntryDiscrepancy {
  int row = 0;  // 1-based
  int col = 0;  // 1-based
  Complex explicit_form;
  Complex derived;
};

/// Entries where q_matrix_explicit differs from q_matrix by more than `tolerance`.
std::vector<EntryDiscrepancy> explicit_form_discrepancies(const PlateSpec& spec,
                                                          double tolerance = 1e-12);

/// Q(last) ... Q(first): plates are traversed in list order. Throws
/// UsageError for an empty list.
Unitary3 compose(std::span<const PlateSpec> plates);

struct EigenPair {
  Complex value;
  StateVector vector;
};

/// Eigen-decomposition of a unitary. Pairs are sorted by ascending principal
/// argument of the eigenvalue; each eigenvector is unit norm with its first
/// nonzero component real positive. Degenerate eigenspaces get an
/// orthonormal basis.
struct EigenSystem {
  std::array<EigenPair, 3> pairs;
};

/// Throws ConvergenceError when the factorization fails or any residual
/// |U v - lambda v| exceeds 1e-9.
EigenSystem eigen(const Unitary3& u);

/// Samples Q(s_i, chi) * state for s_i = delta * i / (n - 1). For delta <= 0
/// the samples are indexed by the traversal fraction u_i = i / (n - 1)
/// instead (states Q(u_i delta, chi) * state), since a curve needs strictly
/// increasing parameters. Throws UsageError for n < 2 or a non-PMZ state.
Curve evolve(const PlateSpec& spec, const StateVector& state, std::size_t n);

/// One evolve curve per plate, each starting from the previous end state.
/// Parameters of later segments continue from where the previous ended.
std::vector<Curve> evolve_stack(std::span<const PlateSpec> plates, const StateVector& state,
                                std::size_t samples_per_plate);

/// Joins curves whose end/start samples coincide, dropping the duplicate.
Curve concatenate(std::span<const Curve> segments);

}  // namespace biphase

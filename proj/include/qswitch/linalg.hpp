// linalg.hpp: exact few-qubit linear algebra (operators with subsystem dims,
// partial traces, XZ-plane projectors, Born rule).
//
// Subsystem order is fixed project-wide as B (Bob) ⊗ C (control) ⊗ T (target).
// Index 0 is the leftmost tensor factor, i.e. the most significant digit of a
// flattened basis index.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace qswitch {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kExactTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;

inline constexpr int kBob = 0;
inline constexpr int kControl = 1;
inline constexpr int kTarget = 2;

/// Square complex matrix tagged with the dimensions of its tensor factors.
class LinearOperator {
 public:
  LinearOperator(Matrix entries, std::vector<int> dims);

  /// |psi><psi| for a ket with the given factor dimensions.
  static LinearOperator from_ket(const Vector& ket, std::vector<int> dims);
  static LinearOperator identity(std::vector<int> dims);

  const Matrix& matrix() const { return entries_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  int num_subsystems() const { return static_cast<int>(dims_.size()); }

  Complex trace() const { return entries_.trace(); }
  bool is_hermitian(double tol = kExactTol) const;
  double min_eigenvalue() const;  // requires Hermitian

  LinearOperator adjoint() const { return {entries_.adjoint(), dims_}; }

  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator*(Complex s, const LinearOperator& a);

 private:
  Matrix entries_;
  std::vector<int> dims_;
};

/// One element of a two-outcome measurement.
struct Effect {
  LinearOperator op;
  int outcome;
};

/// Throws std::invalid_argument unless the operator is Hermitian and
/// unit-trace within 1e-12 with spectrum bounded below by -1e-10.
void validate_density(const LinearOperator& rho);
bool is_density(const LinearOperator& rho);

/// 0 <= E <= I within the positivity tolerance.
bool is_valid_effect(const LinearOperator& e);

LinearOperator tensor_product(const LinearOperator& a, const LinearOperator& b);

/// Reduced operator on the subsystems listed in `keep` (original order is
/// preserved regardless of the order in `keep`). Throws std::out_of_range
/// for bad indices.
LinearOperator partial_trace(const LinearOperator& state, std::span<const int> keep);
LinearOperator partial_trace(const LinearOperator& state, std::initializer_list<int> keep);

/// (I + (-1)^outcome (sin(theta) X + cos(theta) Z)) / 2.
/// Outcome 0 is the +1 eigenvalue.
Effect bloch_projector(double theta, int outcome);

/// Tr[rho E], clamped to [0, 1]. Throws std::invalid_argument on dimension
/// mismatch.
double born_probability(const LinearOperator& state, const LinearOperator& effect);

Matrix pauli_x();
Matrix pauli_z();

/// |row><col| on a single subsystem of dimension `dim`.
LinearOperator basis_operator(int dim, int row, int col);

/// (|00> + |11>) / sqrt(2) on B ⊗ C.
LinearOperator phi_plus();

}  // namespace qswitch

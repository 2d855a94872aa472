#include "qswitch/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qswitch {

namespace {

int product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

void check_dims(const std::vector<int>& dims, Eigen::Index rows, Eigen::Index cols) {
  if (dims.empty()) throw std::invalid_argument("LinearOperator: empty dimension list");
  for (int d : dims) {
    if (d < 2) throw std::invalid_argument("LinearOperator: subsystem dimension must be >= 2");
  }
  if (rows != cols) throw std::invalid_argument("LinearOperator: matrix is not square");
  if (product(dims) != rows) {
    throw std::invalid_argument("LinearOperator: dims product " + std::to_string(product(dims)) +
                                " does not match matrix size " + std::to_string(rows));
  }
}

}  // namespace

LinearOperator::LinearOperator(Matrix entries, std::vector<int> dims)
    : entries_(std::move(entries)), dims_(std::move(dims)) {
  check_dims(dims_, entries_.rows(), entries_.cols());
}

LinearOperator LinearOperator::from_ket(const Vector& ket, std::vector<int> dims) {
  return {ket * ket.adjoint(), std::move(dims)};
}

LinearOperator LinearOperator::identity(std::vector<int> dims) {
  const int n = product(dims);
  return {Matrix::Identity(n, n), std::move(dims)};
}

bool LinearOperator::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double LinearOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
  if (a.dims_ != b.dims_) throw std::invalid_argument("operator*: dims mismatch");
  return {a.entries_ * b.entries_, a.dims_};
}

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
  if (a.dims_ != b.dims_) throw std::invalid_argument("operator+: dims mismatch");
  return {a.entries_ + b.entries_, a.dims_};
}

LinearOperator operator*(Complex s, const LinearOperator& a) { return {s * a.entries_, a.dims_}; }

bool is_density(const LinearOperator& rho) {
  if (!rho.is_hermitian(kExactTol)) return false;
  const Complex tr = rho.trace();
  if (std::abs(tr.real() - 1.0) > kExactTol || std::abs(tr.imag()) > kExactTol) return false;
  return rho.min_eigenvalue() >= -kPositivityTol;
}

void validate_density(const LinearOperator& rho) {
  if (!rho.is_hermitian(kExactTol)) throw std::invalid_argument("density operator is not Hermitian");
  const Complex tr = rho.trace();
  if (std::abs(tr.real() - 1.0) > kExactTol || std::abs(tr.imag()) > kExactTol) {
    throw std::invalid_argument("density operator trace " + std::to_string(tr.real()) + " != 1");
  }
  if (rho.min_eigenvalue() < -kPositivityTol) {
    throw std::invalid_argument("density operator has a negative eigenvalue");
  }
}

bool is_valid_effect(const LinearOperator& e) {
  if (!e.is_hermitian(kExactTol)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(e.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -kPositivityTol &&
         solver.eigenvalues().maxCoeff() <= 1.0 + kPositivityTol;
}

LinearOperator tensor_product(const LinearOperator& a, const LinearOperator& b) {
  Matrix k = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return {std::move(k), std::move(dims)};
}

LinearOperator partial_trace(const LinearOperator& state, std::span<const int> keep) {
  const auto& dims = state.dims();
  const int n = state.num_subsystems();
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) {
      throw std::out_of_range("partial_trace: subsystem index " + std::to_string(k) +
                              " out of range for " + std::to_string(n) + " subsystems");
    }
    if (kept[k]) throw std::invalid_argument("partial_trace: duplicate subsystem index");
    kept[k] = true;
  }
  if (keep.empty()) throw std::invalid_argument("partial_trace: nothing kept");

  std::vector<int> kept_dims;
  std::vector<int> traced_dims;
  for (int i = 0; i < n; ++i) (kept[i] ? kept_dims : traced_dims).push_back(dims[i]);
  const int dk = product(kept_dims);
  const int dt = traced_dims.empty() ? 1 : product(traced_dims);

  // Splice a kept index and a traced index back into a full flat index.
  auto full_index = [&](int kidx, int tidx) {
    int full = 0;
    int kstride = dk;
    int tstride = dt;
    for (int i = 0; i < n; ++i) {
      int digit;
      if (kept[i]) {
        kstride /= dims[i];
        digit = (kidx / kstride) % dims[i];
      } else {
        tstride /= dims[i];
        digit = (tidx / tstride) % dims[i];
      }
      full = full * dims[i] + digit;
    }
    return full;
  };

  Matrix reduced = Matrix::Zero(dk, dk);
  const Matrix& m = state.matrix();
  for (int r = 0; r < dk; ++r) {
    for (int c = 0; c < dk; ++c) {
      Complex acc{0.0, 0.0};
      for (int t = 0; t < dt; ++t) acc += m(full_index(r, t), full_index(c, t));
      reduced(r, c) = acc;
    }
  }
  return {std::move(reduced), std::move(kept_dims)};
}

LinearOperator partial_trace(const LinearOperator& state, std::initializer_list<int> keep) {
  return partial_trace(state, std::span<const int>(keep.begin(), keep.size()));
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Effect bloch_projector(double theta, int outcome) {
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("bloch_projector: outcome must be 0 or 1");
  const double sign = outcome == 0 ? 1.0 : -1.0;
  Matrix m = 0.5 * (Matrix::Identity(2, 2) +
                    sign * (std::sin(theta) * pauli_x() + std::cos(theta) * pauli_z()));
  return {LinearOperator(std::move(m), {2}), outcome};
}

double born_probability(const LinearOperator& state, const LinearOperator& effect) {
  if (state.dims() != effect.dims()) {
    throw std::invalid_argument("born_probability: dimension mismatch");
  }
  // Tr[rho E] without forming the product.
  const double p = (state.matrix().transpose().cwiseProduct(effect.matrix())).sum().real();
  return std::clamp(p, 0.0, 1.0);
}

LinearOperator basis_operator(int dim, int row, int col) {
  if (row < 0 || row >= dim || col < 0 || col >= dim) {
    throw std::out_of_range("basis_operator: index out of range");
  }
  Matrix m = Matrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return {std::move(m), {dim}};
}

LinearOperator phi_plus() {
  Vector ket = Vector::Zero(4);
  ket(0) = ket(3) = 1.0 / std::sqrt(2.0);
  return LinearOperator::from_ket(ket, {2, 2});
}

}  // namespace qswitch

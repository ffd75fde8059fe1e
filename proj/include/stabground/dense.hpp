#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>

#include "stabground/hamiltonian.hpp"
#include "stabground/pauli.hpp"

namespace stabground {

using cplx = std::complex<double>;

// Largest qubit count for which dense 2^n x 2^n matrices are built.
inline constexpr std::size_t kDenseCap = 12;

// Amplitudes indexed by computational basis state; qubit q is bit q of the index.
struct StateVector {
  std::size_t n_qubits = 0;
  Eigen::VectorXcd amp;

  StateVector() = default;
  StateVector(std::size_t n, Eigen::VectorXcd a);
  static StateVector basis(std::size_t n, std::size_t index = 0);
  double norm() const { return amp.norm(); }
  void normalize();
};

// P|psi> for an arbitrary (possibly non-Hermitian-signed) Pauli string.
Eigen::VectorXcd apply_pauli(const PauliString& p, const Eigen::VectorXcd& psi);
Eigen::MatrixXcd pauli_matrix(const PauliString& p);
Eigen::MatrixXcd hamiltonian_matrix(const Hamiltonian& h);
// <psi|H|psi> without building the matrix.
double expectation(const Hamiltonian& h, const Eigen::VectorXcd& psi);

void check_dense_cap(std::size_t n, std::size_t cap, const char* what);

}  // namespace stabground

#include "stabground/dense.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "stabground/errors.hpp"

namespace stabground {

namespace {

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

std::uint64_t low_word(const std::vector<std::uint64_t>& w) { return w.empty() ? 0 : w[0]; }

}  // namespace

StateVector::StateVector(std::size_t n, Eigen::VectorXcd a) : n_qubits(n), amp(std::move(a)) {
  if (n >= 63 || static_cast<std::size_t>(amp.size()) != (std::size_t{1} << n))
    throw DimensionError("state vector size does not match 2^" + std::to_string(n));
}

StateVector StateVector::basis(std::size_t n, std::size_t index) {
  check_dense_cap(n, 30, "state vector");
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  if (index >= static_cast<std::size_t>(a.size())) throw DimensionError("basis index out of range");
  a[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(n, std::move(a));
}

void StateVector::normalize() {
  double nr = amp.norm();
  if (!(nr > 0)) throw DomainError("cannot normalize zero state");
  amp /= nr;
}

void check_dense_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap)
    throw CapacityError(std::string(what) + ": " + std::to_string(n) + " qubits exceeds the dense cap of " +
                        std::to_string(cap));
}

Eigen::VectorXcd apply_pauli(const PauliString& p, const Eigen::VectorXcd& psi) {
  std::size_t n = p.n_qubits();
  if (n >= 63 || static_cast<std::size_t>(psi.size()) != (std::size_t{1} << n))
    throw DimensionError("pauli/state dimension mismatch");
  std::uint64_t xm = low_word(p.x_words()), zm = low_word(p.z_words());
  cplx ph = kIPow[p.phase_exp()];
  Eigen::VectorXcd out(psi.size());
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(psi.size()); ++b) {
    double s = (std::popcount(zm & b) & 1) ? -1.0 : 1.0;
    out[static_cast<Eigen::Index>(b ^ xm)] = ph * s * psi[static_cast<Eigen::Index>(b)];
  }
  return out;
}

Eigen::MatrixXcd pauli_matrix(const PauliString& p) {
  std::size_t n = p.n_qubits();
  check_dense_cap(n, kDenseCap, "pauli matrix");
  auto dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  std::uint64_t xm = low_word(p.x_words()), zm = low_word(p.z_words());
  cplx ph = kIPow[p.phase_exp()];
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
    double s = (std::popcount(zm & b) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(b ^ xm), static_cast<Eigen::Index>(b)) = ph * s;
  }
  return m;
}

Eigen::MatrixXcd hamiltonian_matrix(const Hamiltonian& h) {
  std::size_t n = h.n_qubits();
  check_dense_cap(n, kDenseCap, "hamiltonian matrix");
  auto dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    std::uint64_t xm = low_word(t.pauli.x_words()), zm = low_word(t.pauli.z_words());
    cplx ph = kIPow[t.pauli.phase_exp()] * t.coeff;
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      double s = (std::popcount(zm & b) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ xm), static_cast<Eigen::Index>(b)) += ph * s;
    }
  }
  return m;
}

double expectation(const Hamiltonian& h, const Eigen::VectorXcd& psi) {
  double e = 0.0;
  for (const auto& t : h.terms()) e += t.coeff * psi.dot(apply_pauli(t.pauli, psi)).real();
  return e;
}

}  // namespace stabground

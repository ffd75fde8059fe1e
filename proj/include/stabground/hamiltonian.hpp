#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stabground/pauli.hpp"

namespace stabground {

struct Term {
  double coeff = 0.0;
  PauliString pauli;  // Hermitian, sign +1
};

// H = sum_p h_p P_p. Terms keep first-appearance order; duplicates are merged
// and zero coefficients dropped. An identity term is kept only when given.
class Hamiltonian {
 public:
  Hamiltonian() = default;
  explicit Hamiltonian(std::size_t n_qubits) : n_(n_qubits) {}
  Hamiltonian(std::size_t n_qubits, const std::vector<Term>& terms);

  // Adds coeff * p; the sign of p is absorbed into the coefficient.
  void add(double coeff, const PauliString& p);

  std::size_t n_qubits() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  double identity_coeff() const;
  // sum |h_p| over non-identity terms
  double abs_sum() const;
  // One "<coeff> <letters>" line per term, coefficients printed round-trip exact.
  std::string to_text() const;

 private:
  void prune();
  std::size_t n_ = 0;
  std::vector<Term> terms_;
};

Hamiltonian parse_hamiltonian(std::string_view text);
Hamiltonian load_hamiltonian(const std::filesystem::path& path);

// Open-boundary transverse-field Ising chain: sum Z_i Z_{i+1} + lambda sum X_j.
Hamiltonian tfim(int L, double lambda);

struct CandidateGeneratorSet {
  std::map<PauliString, double> entries;  // unsigned Pauli -> 2^N h_p
};

CandidateGeneratorSet candidate_generator_set(const Hamiltonian& h);

}  // namespace stabground

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stabground/gf2.hpp"
#include "stabground/hamiltonian.hpp"
#include "stabground/pauli.hpp"

namespace stabground {

// Independent, pairwise commuting, Hermitian signed Pauli strings. Holds any
// number l <= n of generators; GeneratorSet below requires l == n.
class StabilizerGroup {
 public:
  StabilizerGroup() = default;
  StabilizerGroup(std::size_t n_qubits, std::vector<PauliString> generators);

  std::size_t n_qubits() const { return n_; }
  std::size_t rank() const { return gens_.size(); }
  const std::vector<PauliString>& generators() const { return gens_; }

  // Product of the generators selected by `comb`, in index order, exact phase.
  PauliString product(const gf2::BitVec& comb) const;
  // Signed group element with the same letters as p, if any.
  std::optional<PauliString> element_like(const PauliString& p) const;
  bool contains_letters(const PauliString& p) const;
  bool in_span(const gf2::BitVec& symplectic_vec) const { return basis_.contains(symplectic_vec); }
  // All 2^rank signed elements, identity included (rank <= 20).
  std::vector<PauliString> elements() const;

  // Sum of sign * h_p over terms in the group; identity term contributes h_I.
  double energy(const Hamiltonian& h) const;

 private:
  std::size_t n_ = 0;
  std::vector<PauliString> gens_;
  gf2::Basis basis_{0};
};

class GeneratorSet {
 public:
  GeneratorSet() = default;
  // Validates: exactly n generators, Hermitian, commuting, independent.
  GeneratorSet(std::size_t n_qubits, std::vector<PauliString> generators);

  std::size_t n_qubits() const { return n_; }
  const std::vector<PauliString>& generators() const { return gens_; }
  std::size_t size() const { return gens_.size(); }
  StabilizerGroup group() const { return StabilizerGroup(n_, gens_); }

  // Row-reduced generators (x columns before z columns) with signs; equal for
  // two sets iff they stabilize the same state.
  GeneratorSet canonical() const;
  bool same_state(const GeneratorSet& o) const { return canonical() == o.canonical(); }

  friend bool operator==(const GeneratorSet& a, const GeneratorSet& b) {
    return a.n_ == b.n_ && a.gens_ == b.gens_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<PauliString> gens_;
};

// Throws ValidationError describing the first violated invariant.
void validate_generators(std::size_t n, const std::vector<PauliString>& gens, bool require_full = true);

std::string format_generator_set(const GeneratorSet& g);
std::vector<std::string> generator_strings(const GeneratorSet& g);
// Comma and/or whitespace separated signed Pauli strings.
GeneratorSet parse_generator_set(std::string_view text);

inline constexpr std::size_t kDefaultEnumerationCap = 4;
inline constexpr std::size_t kMaxEnumerationCap = 6;

// Number of signed stabilizer groups, 2^n prod_{k=1..n} (2^k + 1).
std::uint64_t stabilizer_state_count(std::size_t n);

// Canonical order: row-reduced matrices lexicographically, then sign vectors
// 0..2^n-1 with bit j set meaning generator j is negated.
void for_each_generator_set(std::size_t n, const std::function<void(const GeneratorSet&)>& visit,
                            std::size_t cap = kDefaultEnumerationCap);
std::vector<GeneratorSet> enumerate_generator_sets(std::size_t n, std::size_t cap = kDefaultEnumerationCap);

struct ContributingTerm {
  PauliString pauli;  // unsigned term
  int sign = 1;       // sign of the matching group element
  double coeff = 0.0;
};

struct GroupEnergyReport {
  double energy = 0.0;
  GeneratorSet generator_set;
  std::vector<ContributingTerm> contributing_terms;
};

GroupEnergyReport group_energy(const GeneratorSet& g, const Hamiltonian& h);
// Tr(H rho) with rho = 2^-N prod_j (I + g_j), dense; N <= 6.
double group_energy_oracle(const GeneratorSet& g, const Hamiltonian& h);

struct MinGroups {
  double e_min = 0.0;
  std::vector<GeneratorSet> groups;  // canonical order
};

MinGroups find_min_groups(const Hamiltonian& h, std::size_t cap = kDefaultEnumerationCap);

// 1 iff some generator commutes with every Hamiltonian term.
int filter_xi(const GeneratorSet& g, const Hamiltonian& h);
// Basis-independent variant: some non-identity group element commutes with every term.
bool group_commutes_with(const GeneratorSet& g, const Hamiltonian& h);

struct RefineReport {
  double e_min = 0.0;
  std::vector<GeneratorSet> minimizers;
  std::vector<GeneratorSet> kept;           // step 1
  std::vector<PauliString> common;          // signed common elements, identity excluded
  Hamiltonian sub_hamiltonian;
  std::vector<GeneratorSet> sub_kept;       // step 2 survivors on the sub-Hamiltonian
  std::vector<GeneratorSet> optimal;
  std::vector<std::string> warnings;
};

RefineReport refine_optimal_report(const Hamiltonian& h, std::size_t cap = kDefaultEnumerationCap);
std::vector<GeneratorSet> refine_optimal(const Hamiltonian& h, std::size_t cap = kDefaultEnumerationCap);

}  // namespace stabground

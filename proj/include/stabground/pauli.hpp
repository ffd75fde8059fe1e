#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace stabground {

// i^phase_exp * prod_q X_q^{x_q} Z_q^{z_q}, X to the left of Z on every qubit.
// Bits are packed 64 per word, qubit q at bit q%64 of word q/64.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_qubits);

  static PauliString identity(std::size_t n) { return PauliString(n); }
  // Single-qubit Hermitian Pauli ('X','Y','Z' or 'I') on qubit q.
  static PauliString single(std::size_t n, std::size_t q, char op);
  // Hermitian operator with sign +1 from raw symplectic bits.
  static PauliString from_bits(std::size_t n, const std::vector<std::uint64_t>& x,
                               const std::vector<std::uint64_t>& z);

  std::size_t n_qubits() const { return n_; }
  std::size_t n_words() const { return x_.size(); }
  bool x(std::size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1u; }
  bool z(std::size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1u; }
  const std::vector<std::uint64_t>& x_words() const { return x_; }
  const std::vector<std::uint64_t>& z_words() const { return z_; }
  int phase_exp() const { return phase_; }

  // Letter on qubit q: I, X, Y or Z (Y when both bits are set).
  char op(std::size_t q) const;
  std::size_t weight() const;
  std::size_t y_count() const;
  bool is_identity_op() const;  // ignores phase

  // Overall scalar in front of the letter form (I,X,Y,Z with Y Hermitian):
  // i^sign_exp with sign_exp = phase_exp - #Y mod 4.
  int sign_exp() const;
  bool is_hermitian() const { return sign_exp() % 2 == 0; }
  // +1 or -1; throws DomainError for +-i strings.
  int sign() const;

  // Same letters, overall sign +1.
  PauliString unsigned_part() const;
  PauliString with_sign(int s) const;
  PauliString negated() const;

  void set_x(std::size_t q, bool v);
  void set_z(std::size_t q, bool v);
  void set_phase_exp(int p) { phase_ = static_cast<std::uint8_t>(((p % 4) + 4) % 4); }
  void add_phase(int p) { set_phase_exp(phase_ + p); }

  // Letter-level equality (ignores phase).
  bool same_letters(const PauliString& o) const { return n_ == o.n_ && x_ == o.x_ && z_ == o.z_; }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n_ == b.n_ && a.phase_ == b.phase_ && a.x_ == b.x_ && a.z_ == b.z_;
  }
  friend bool operator!=(const PauliString& a, const PauliString& b) { return !(a == b); }
  // Total order: qubit count, x words, z words, phase.
  friend bool operator<(const PauliString& a, const PauliString& b);

  std::size_t hash() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> x_, z_;
  std::uint8_t phase_ = 0;
};

PauliString multiply(const PauliString& a, const PauliString& b);
bool commutes(const PauliString& a, const PauliString& b);
// Symplectic form <a,b> in {0,1}.
int symplectic_product(const PauliString& a, const PauliString& b);

// "[+|-]" then IXYZ letters, qubit 0 leftmost.
PauliString parse_pauli(std::string_view text);
// Canonical text; only +-1 signs are representable.
std::string format_pauli(const PauliString& p);
// Letters only, no sign.
std::string pauli_letters(const PauliString& p);

}  // namespace stabground

template <>
struct std::hash<stabground::PauliString> {
  std::size_t operator()(const stabground::PauliString& p) const noexcept { return p.hash(); }
};

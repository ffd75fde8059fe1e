#include "stabground/pauli.hpp"

#include <bit>

#include "stabground/errors.hpp"

namespace stabground {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

void check_same_size(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits())
    throw DimensionError("pauli length mismatch: " + std::to_string(a.n_qubits()) + " vs " +
                         std::to_string(b.n_qubits()));
}

}  // namespace

PauliString::PauliString(std::size_t n) : n_(n), x_(words_for(n), 0), z_(words_for(n), 0) {}

PauliString PauliString::single(std::size_t n, std::size_t q, char op) {
  if (q >= n) throw DimensionError("qubit index out of range");
  PauliString p(n);
  switch (op) {
    case 'I': break;
    case 'X': p.set_x(q, true); break;
    case 'Z': p.set_z(q, true); break;
    case 'Y':
      p.set_x(q, true);
      p.set_z(q, true);
      p.phase_ = 1;
      break;
    default: throw ParseError(std::string("illegal pauli letter '") + op + "'");
  }
  return p;
}

PauliString PauliString::from_bits(std::size_t n, const std::vector<std::uint64_t>& x,
                                   const std::vector<std::uint64_t>& z) {
  PauliString p(n);
  if (x.size() != p.x_.size() || z.size() != p.z_.size()) throw DimensionError("bit vector length mismatch");
  p.x_ = x;
  p.z_ = z;
  if (n % 64) {
    std::uint64_t mask = (std::uint64_t{1} << (n % 64)) - 1;
    p.x_.back() &= mask;
    p.z_.back() &= mask;
  }
  p.phase_ = static_cast<std::uint8_t>(p.y_count() % 4);
  return p;
}

char PauliString::op(std::size_t q) const {
  bool xb = x(q), zb = z(q);
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

std::size_t PauliString::weight() const {
  std::size_t w = 0;
  for (std::size_t i = 0; i < x_.size(); ++i) w += std::popcount(x_[i] | z_[i]);
  return w;
}

std::size_t PauliString::y_count() const {
  std::size_t w = 0;
  for (std::size_t i = 0; i < x_.size(); ++i) w += std::popcount(x_[i] & z_[i]);
  return w;
}

bool PauliString::is_identity_op() const {
  for (std::size_t i = 0; i < x_.size(); ++i)
    if (x_[i] | z_[i]) return false;
  return true;
}

int PauliString::sign_exp() const { return static_cast<int>((phase_ + 4 - y_count() % 4) % 4); }

int PauliString::sign() const {
  int s = sign_exp();
  if (s == 0) return 1;
  if (s == 2) return -1;
  throw DomainError("pauli string has imaginary sign");
}

PauliString PauliString::unsigned_part() const {
  PauliString p = *this;
  p.phase_ = static_cast<std::uint8_t>(y_count() % 4);
  return p;
}

PauliString PauliString::with_sign(int s) const {
  PauliString p = unsigned_part();
  if (s < 0) p.add_phase(2);
  return p;
}

PauliString PauliString::negated() const {
  PauliString p = *this;
  p.add_phase(2);
  return p;
}

void PauliString::set_x(std::size_t q, bool v) {
  std::uint64_t bit = std::uint64_t{1} << (q & 63);
  if (v)
    x_[q >> 6] |= bit;
  else
    x_[q >> 6] &= ~bit;
}

void PauliString::set_z(std::size_t q, bool v) {
  std::uint64_t bit = std::uint64_t{1} << (q & 63);
  if (v)
    z_[q >> 6] |= bit;
  else
    z_[q >> 6] &= ~bit;
}

bool operator<(const PauliString& a, const PauliString& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  if (a.x_ != b.x_) return a.x_ < b.x_;
  if (a.z_ != b.z_) return a.z_ < b.z_;
  return a.phase_ < b.phase_;
}

std::size_t PauliString::hash() const {
  std::size_t h = std::hash<std::size_t>{}(n_) ^ (std::size_t{phase_} << 1);
  auto mix = [&h](std::uint64_t w) { h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  for (auto w : x_) mix(w);
  for (auto w : z_) mix(w);
  return h;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  check_same_size(a, b);
  int extra = 0;
  std::vector<std::uint64_t> x(a.n_words()), z(a.n_words());
  for (std::size_t i = 0; i < a.n_words(); ++i) {
    // Z^{z_a} X^{x_b} -> (-1)^{z_a x_b} X^{x_b} Z^{z_a}
    extra += std::popcount(a.z_words()[i] & b.x_words()[i]);
    x[i] = a.x_words()[i] ^ b.x_words()[i];
    z[i] = a.z_words()[i] ^ b.z_words()[i];
  }
  PauliString r = PauliString::from_bits(a.n_qubits(), x, z);
  r.set_phase_exp(a.phase_exp() + b.phase_exp() + 2 * (extra % 2));
  return r;
}

int symplectic_product(const PauliString& a, const PauliString& b) {
  check_same_size(a, b);
  int s = 0;
  for (std::size_t i = 0; i < a.n_words(); ++i)
    s += std::popcount((a.x_words()[i] & b.z_words()[i]) ^ (a.z_words()[i] & b.x_words()[i]));
  return s & 1;
}

bool commutes(const PauliString& a, const PauliString& b) { return symplectic_product(a, b) == 0; }

PauliString parse_pauli(std::string_view text) {
  std::size_t i = 0;
  bool neg = false;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
    neg = text[0] == '-';
    i = 1;
  }
  if (i >= text.size()) throw ParseError("empty pauli string");
  PauliString p(text.size() - i);
  int phase = neg ? 2 : 0;
  for (std::size_t q = 0; i < text.size(); ++i, ++q) {
    switch (text[i]) {
      case 'I': break;
      case 'X': p.set_x(q, true); break;
      case 'Z': p.set_z(q, true); break;
      case 'Y':
        p.set_x(q, true);
        p.set_z(q, true);
        phase += 1;
        break;
      default: throw ParseError(std::string("illegal character '") + text[i] + "' in pauli string");
    }
  }
  p.set_phase_exp(phase);
  return p;
}

std::string pauli_letters(const PauliString& p) {
  std::string s;
  s.reserve(p.n_qubits());
  for (std::size_t q = 0; q < p.n_qubits(); ++q) s.push_back(p.op(q));
  return s;
}

std::string format_pauli(const PauliString& p) {
  int s = p.sign();
  return (s < 0 ? "-" : "") + pauli_letters(p);
}

}  // namespace stabground

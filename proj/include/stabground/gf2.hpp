#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "stabground/pauli.hpp"

namespace stabground::gf2 {

// Dense bit vector over GF(2).
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t nbits) : n_(nbits), w_((nbits + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true) {
    std::uint64_t b = std::uint64_t{1} << (i & 63);
    if (v)
      w_[i >> 6] |= b;
    else
      w_[i >> 6] &= ~b;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  BitVec& operator^=(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  // Index of the lowest set bit, or size() when zero.
  std::size_t first_set() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(w_[i]));
    return n_;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool dot(const BitVec& o) const {
    int s = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) s += std::popcount(w_[i] & o.w_[i]);
    return s & 1;
  }
  const std::vector<std::uint64_t>& words() const { return w_; }
  friend bool operator==(const BitVec& a, const BitVec& b) { return a.n_ == b.n_ && a.w_ == b.w_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Symplectic vector of a Pauli: columns x_0..x_{n-1}, z_0..z_{n-1}.
BitVec symplectic(const PauliString& p);
// Vector v' with v'.dot(symplectic(q)) == symplectic_product(p, q).
BitVec symplectic_dual(const PauliString& p);
// Hermitian sign-+ Pauli from a symplectic vector of length 2n.
PauliString pauli_from_symplectic(std::size_t n, const BitVec& v);

// Incremental row basis that remembers, for each stored row, which inputs it
// combines. Reduction processes rows in insertion order.
class Basis {
 public:
  explicit Basis(std::size_t ncols) : ncols_(ncols) {}

  // Accepted inputs are numbered 0..rank()-1 in acceptance order. Returns false
  // (storing nothing) when v is already in the span.
  bool add(const BitVec& v);
  // Combination of accepted inputs summing to v, or nullopt outside the span.
  std::optional<BitVec> solve(const BitVec& v) const;
  bool contains(const BitVec& v) const { return solve(v).has_value(); }
  std::size_t rank() const { return rows_.size(); }
  std::size_t ncols() const { return ncols_; }

 private:
  struct Row {
    BitVec v, comb;
    std::size_t pivot;
  };
  std::size_t ncols_;
  std::vector<Row> rows_;
  std::size_t reduce(BitVec& v, BitVec& comb) const;
};

// Basis of {x : row.dot(x) == 0 for every row}, rows of length ncols, deterministic order.
std::vector<BitVec> nullspace(const std::vector<BitVec>& rows, std::size_t ncols);
std::size_t rank(std::vector<BitVec> rows);

}  // namespace stabground::gf2

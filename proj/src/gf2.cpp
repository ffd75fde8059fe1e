#include "stabground/gf2.hpp"

#include "stabground/errors.hpp"

namespace stabground::gf2 {

BitVec symplectic(const PauliString& p) {
  std::size_t n = p.n_qubits();
  BitVec v(2 * n);
  for (std::size_t q = 0; q < n; ++q) {
    if (p.x(q)) v.set(q);
    if (p.z(q)) v.set(n + q);
  }
  return v;
}

BitVec symplectic_dual(const PauliString& p) {
  std::size_t n = p.n_qubits();
  BitVec v(2 * n);
  for (std::size_t q = 0; q < n; ++q) {
    if (p.z(q)) v.set(q);
    if (p.x(q)) v.set(n + q);
  }
  return v;
}

PauliString pauli_from_symplectic(std::size_t n, const BitVec& v) {
  if (v.size() != 2 * n) throw DimensionError("symplectic vector length mismatch");
  PauliString p(n);
  for (std::size_t q = 0; q < n; ++q) {
    p.set_x(q, v.get(q));
    p.set_z(q, v.get(n + q));
  }
  p.set_phase_exp(static_cast<int>(p.y_count()));
  return p;
}

std::size_t Basis::reduce(BitVec& v, BitVec& comb) const {
  for (const auto& r : rows_) {
    if (v.get(r.pivot)) {
      v ^= r.v;
      comb ^= r.comb;
    }
  }
  return v.first_set();
}

bool Basis::add(const BitVec& v) {
  if (v.size() != ncols_) throw DimensionError("basis column mismatch");
  if (rows_.size() == ncols_) return false;
  BitVec w = v, comb(ncols_);
  comb.set(rows_.size());
  std::size_t piv = reduce(w, comb);
  if (piv == ncols_) return false;
  rows_.push_back({std::move(w), std::move(comb), piv});
  return true;
}

std::optional<BitVec> Basis::solve(const BitVec& v) const {
  if (v.size() != ncols_) throw DimensionError("basis column mismatch");
  BitVec w = v, comb(ncols_);
  if (reduce(w, comb) != ncols_) return std::nullopt;
  return comb;
}

std::vector<BitVec> nullspace(const std::vector<BitVec>& rows, std::size_t ncols) {
  // Reduced row echelon form, then one basis vector per free column.
  std::vector<BitVec> m;
  for (const auto& r : rows) {
    if (r.size() != ncols) throw DimensionError("nullspace row length mismatch");
    m.push_back(r);
  }
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < ncols && row < m.size(); ++c) {
    std::size_t sel = row;
    while (sel < m.size() && !m[sel].get(c)) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    for (std::size_t k = 0; k < m.size(); ++k)
      if (k != row && m[k].get(c)) m[k] ^= m[row];
    pivots.push_back(c);
    ++row;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<BitVec> out;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    BitVec x(ncols);
    x.set(f);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (m[r].get(f)) x.set(pivots[r]);
    out.push_back(std::move(x));
  }
  return out;
}

std::size_t rank(std::vector<BitVec> rows) {
  if (rows.empty()) return 0;
  Basis b(rows.front().size());
  for (const auto& r : rows) b.add(r);
  return b.rank();
}

}  // namespace stabground::gf2

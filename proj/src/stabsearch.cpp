#include "stabground/stabsearch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "stabground/dense.hpp"
#include "stabground/errors.hpp"

namespace stabground {

// ---------------------------------------------------------------- groups

void validate_generators(std::size_t n, const std::vector<PauliString>& gens, bool require_full) {
  if (require_full && gens.size() != n)
    throw ValidationError("expected " + std::to_string(n) + " generators, got " + std::to_string(gens.size()));
  if (gens.size() > n) throw ValidationError("more than n generators");
  gf2::Basis basis(2 * n);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& g = gens[i];
    if (g.n_qubits() != n) throw DimensionError("generator " + std::to_string(i) + " has wrong qubit count");
    if (!g.is_hermitian()) throw ValidationError("generator " + std::to_string(i) + " has an imaginary sign");
    for (std::size_t j = 0; j < i; ++j)
      if (!commutes(g, gens[j]))
        throw ValidationError("generators " + std::to_string(j) + " and " + std::to_string(i) + " anticommute");
    if (!basis.add(gf2::symplectic(g)))
      throw ValidationError("generator " + std::to_string(i) + " is not independent");
  }
}

StabilizerGroup::StabilizerGroup(std::size_t n, std::vector<PauliString> generators)
    : n_(n), gens_(std::move(generators)), basis_(2 * n) {
  validate_generators(n, gens_, false);
  for (const auto& g : gens_) basis_.add(gf2::symplectic(g));
}

PauliString StabilizerGroup::product(const gf2::BitVec& comb) const {
  PauliString acc = PauliString::identity(n_);
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (comb.get(i)) acc = multiply(acc, gens_[i]);
  return acc;
}

std::optional<PauliString> StabilizerGroup::element_like(const PauliString& p) const {
  if (p.n_qubits() != n_) throw DimensionError("pauli/group qubit count mismatch");
  auto comb = basis_.solve(gf2::symplectic(p));
  if (!comb) return std::nullopt;
  return product(*comb);
}

bool StabilizerGroup::contains_letters(const PauliString& p) const {
  if (p.n_qubits() != n_) throw DimensionError("pauli/group qubit count mismatch");
  return basis_.contains(gf2::symplectic(p));
}

std::vector<PauliString> StabilizerGroup::elements() const {
  if (gens_.size() > 20) throw CapacityError("group too large to list");
  std::vector<PauliString> out;
  std::size_t r = gens_.size();
  out.reserve(std::size_t{1} << r);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << r); ++m) {
    gf2::BitVec c(2 * n_);
    for (std::size_t i = 0; i < r; ++i)
      if ((m >> i) & 1u) c.set(i);
    out.push_back(product(c));
  }
  return out;
}

double StabilizerGroup::energy(const Hamiltonian& h) const {
  if (h.n_qubits() != n_) throw DimensionError("hamiltonian/group qubit count mismatch");
  double e = 0.0;
  for (const auto& t : h.terms()) {
    if (t.pauli.is_identity_op()) {
      e += t.coeff;
      continue;
    }
    if (auto el = element_like(t.pauli)) e += el->sign() * t.coeff;
  }
  return e;
}

GeneratorSet::GeneratorSet(std::size_t n, std::vector<PauliString> generators) : n_(n), gens_(std::move(generators)) {
  validate_generators(n_, gens_, true);
}

GeneratorSet GeneratorSet::canonical() const {
  std::vector<PauliString> rows = gens_;
  std::vector<gf2::BitVec> vecs;
  for (const auto& g : rows) vecs.push_back(gf2::symplectic(g));
  std::size_t r = 0;
  for (std::size_t c = 0; c < 2 * n_ && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && !vecs[sel].get(c)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    std::swap(vecs[r], vecs[sel]);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k != r && vecs[k].get(c)) {
        rows[k] = multiply(rows[k], rows[r]);
        vecs[k] ^= vecs[r];
      }
    }
    ++r;
  }
  GeneratorSet out;
  out.n_ = n_;
  out.gens_ = std::move(rows);
  return out;
}

std::vector<std::string> generator_strings(const GeneratorSet& g) {
  std::vector<std::string> out;
  for (const auto& p : g.generators()) out.push_back(format_pauli(p));
  return out;
}

std::string format_generator_set(const GeneratorSet& g) {
  std::string s;
  for (const auto& p : g.generators()) {
    if (!s.empty()) s += ", ";
    s += format_pauli(p);
  }
  return "{" + s + "}";
}

GeneratorSet parse_generator_set(std::string_view text) {
  std::vector<PauliString> gens;
  std::string tok;
  auto flush = [&] {
    if (!tok.empty()) gens.push_back(parse_pauli(tok));
    tok.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '{' || ch == '}')
      flush();
    else
      tok.push_back(ch);
  }
  flush();
  if (gens.empty()) throw ParseError("empty generator set");
  std::size_t n = gens.front().n_qubits();
  return GeneratorSet(n, std::move(gens));
}

// ---------------------------------------------------------------- enumeration

std::uint64_t stabilizer_state_count(std::size_t n) {
  std::uint64_t c = std::uint64_t{1} << n;
  for (std::size_t k = 1; k <= n; ++k) c *= (std::uint64_t{1} << k) + 1;
  return c;
}

namespace {

using Mask = std::uint32_t;

struct Lagrangian {
  std::vector<Mask> rows;
  std::vector<int> pivots;
};

bool mask_commute(Mask a, Mask b, std::size_t n) {
  Mask lo = (Mask{1} << n) - 1;
  Mask ax = a & lo, az = a >> n, bx = b & lo, bz = b >> n;
  return (std::popcount((ax & bz) ^ (az & bx)) & 1) == 0;
}

Mask reverse_bits(Mask m, std::size_t width) {
  Mask r = 0;
  for (std::size_t i = 0; i < width; ++i)
    if ((m >> i) & 1u) r |= Mask{1} << (width - 1 - i);
  return r;
}

void extend_rows(std::size_t n, const std::vector<int>& piv, std::vector<Mask>& rows, std::size_t i,
                 std::vector<Lagrangian>& out) {
  if (i == n) {
    out.push_back({rows, piv});
    return;
  }
  std::size_t width = 2 * n;
  Mask pivmask = 0;
  for (int p : piv) pivmask |= Mask{1} << p;
  std::vector<int> free_cols;
  for (std::size_t c = static_cast<std::size_t>(piv[i]) + 1; c < width; ++c)
    if (!((pivmask >> c) & 1u)) free_cols.push_back(static_cast<int>(c));
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << free_cols.size()); ++a) {
    Mask row = Mask{1} << piv[i];
    for (std::size_t k = 0; k < free_cols.size(); ++k)
      if ((a >> k) & 1u) row |= Mask{1} << free_cols[k];
    bool ok = true;
    for (std::size_t j = 0; j < i && ok; ++j) ok = mask_commute(row, rows[j], n);
    if (!ok) continue;
    rows[i] = row;
    extend_rows(n, piv, rows, i + 1, out);
  }
}

std::vector<Lagrangian> build_lagrangians(std::size_t n) {
  std::vector<Lagrangian> out;
  std::size_t width = 2 * n;
  std::vector<int> piv;
  std::vector<Mask> rows(n);
  // pivot sets in increasing order via recursive combination
  std::function<void(int)> choose = [&](int start) {
    if (piv.size() == n) {
      extend_rows(n, piv, rows, 0, out);
      return;
    }
    for (int c = start; c < static_cast<int>(width); ++c) {
      piv.push_back(c);
      choose(c + 1);
      piv.pop_back();
    }
  };
  choose(0);
  std::sort(out.begin(), out.end(), [width](const Lagrangian& a, const Lagrangian& b) {
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      Mask ka = reverse_bits(a.rows[i], width), kb = reverse_bits(b.rows[i], width);
      if (ka != kb) return ka < kb;
    }
    return false;
  });
  return out;
}

const std::vector<Lagrangian>& lagrangians(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<Lagrangian>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_lagrangians(n)).first;
  return it->second;
}

void check_cap(std::size_t n, std::size_t cap) {
  if (cap > kMaxEnumerationCap)
    throw CapacityError("enumeration cap " + std::to_string(cap) + " exceeds the hard limit of " +
                        std::to_string(kMaxEnumerationCap));
  if (n > cap)
    throw CapacityError("enumeration of " + std::to_string(n) + " qubits exceeds the cap of " + std::to_string(cap));
  if (n == 0) throw DimensionError("enumeration needs at least one qubit");
}

PauliString mask_pauli(std::size_t n, Mask m, bool negative) {
  PauliString p(n);
  for (std::size_t q = 0; q < n; ++q) {
    p.set_x(q, (m >> q) & 1u);
    p.set_z(q, (m >> (n + q)) & 1u);
  }
  p.set_phase_exp(static_cast<int>(p.y_count()) + (negative ? 2 : 0));
  return p;
}

GeneratorSet materialize(std::size_t n, const Lagrangian& L, std::uint64_t signs) {
  std::vector<PauliString> gens;
  gens.reserve(n);
  for (std::size_t j = 0; j < n; ++j) gens.push_back(mask_pauli(n, L.rows[j], (signs >> j) & 1u));
  return GeneratorSet(n, std::move(gens));
}

Mask pauli_mask(const PauliString& p) {
  std::size_t n = p.n_qubits();
  Mask m = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (p.x(q)) m |= Mask{1} << q;
    if (p.z(q)) m |= Mask{1} << (n + q);
  }
  return m;
}

// i-exponent of the product of unsigned (Hermitian, sign +) rows selected by comb.
int product_phase(const Lagrangian& L, std::uint32_t comb, std::size_t n) {
  Mask lo = (Mask{1} << n) - 1;
  Mask ax = 0, az = 0;
  int ph = 0;
  for (std::size_t i = 0; i < L.rows.size(); ++i) {
    if (!((comb >> i) & 1u)) continue;
    Mask rx = L.rows[i] & lo, rz = L.rows[i] >> n;
    ph += std::popcount(rx & rz) + 2 * std::popcount(az & rx);
    ax ^= rx;
    az ^= rz;
  }
  return ph & 3;
}

}  // namespace

void for_each_generator_set(std::size_t n, const std::function<void(const GeneratorSet&)>& visit, std::size_t cap) {
  check_cap(n, cap);
  for (const auto& L : lagrangians(n))
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) visit(materialize(n, L, s));
}

std::vector<GeneratorSet> enumerate_generator_sets(std::size_t n, std::size_t cap) {
  check_cap(n, cap);
  std::vector<GeneratorSet> out;
  out.reserve(stabilizer_state_count(n));
  for_each_generator_set(n, [&](const GeneratorSet& g) { out.push_back(g); }, cap);
  return out;
}

// ---------------------------------------------------------------- energies

GroupEnergyReport group_energy(const GeneratorSet& g, const Hamiltonian& h) {
  if (g.n_qubits() != h.n_qubits()) throw DimensionError("generator set / hamiltonian qubit count mismatch");
  GroupEnergyReport rep;
  rep.generator_set = g;
  StabilizerGroup grp = g.group();
  for (const auto& t : h.terms()) {
    if (t.pauli.is_identity_op()) {
      rep.energy += t.coeff;
      rep.contributing_terms.push_back({t.pauli, 1, t.coeff});
      continue;
    }
    if (auto el = grp.element_like(t.pauli)) {
      int s = el->sign();
      rep.energy += s * t.coeff;
      rep.contributing_terms.push_back({t.pauli, s, t.coeff});
    }
  }
  return rep;
}

double group_energy_oracle(const GeneratorSet& g, const Hamiltonian& h) {
  if (g.n_qubits() != h.n_qubits()) throw DimensionError("generator set / hamiltonian qubit count mismatch");
  check_dense_cap(g.n_qubits(), 6, "group_energy_oracle");
  auto dim = Eigen::Index{1} << g.n_qubits();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& gen : g.generators())
    rho = rho * (Eigen::MatrixXcd::Identity(dim, dim) + pauli_matrix(gen));
  rho /= static_cast<double>(dim);
  return (hamiltonian_matrix(h) * rho).trace().real();
}

MinGroups find_min_groups(const Hamiltonian& h, std::size_t cap) {
  std::size_t n = h.n_qubits();
  check_cap(n, cap);
  const auto& Ls = lagrangians(n);

  struct T {
    Mask m;
    int phase;
    double c;
  };
  std::vector<T> terms;
  double e_id = 0.0, scale = 1.0;
  for (const auto& t : h.terms()) {
    scale += std::abs(t.coeff);
    if (t.pauli.is_identity_op())
      e_id += t.coeff;
    else
      terms.push_back({pauli_mask(t.pauli), static_cast<int>(t.pauli.y_count() & 3), t.coeff});
  }
  const double tol = 1e-10 * scale;
  const std::uint64_t nsign = std::uint64_t{1} << n;

  struct Member {
    std::uint32_t comb;
    double c;  // coefficient times base sign
  };
  std::vector<Member> members;
  struct Cand {
    std::size_t li;
    std::uint64_t s;
    double e;
  };
  std::vector<Cand> cand;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t li = 0; li < Ls.size(); ++li) {
    const auto& L = Ls[li];
    members.clear();
    for (const auto& t : terms) {
      std::uint32_t comb = 0;
      Mask acc = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if ((t.m >> L.pivots[i]) & 1u) {
          comb |= 1u << i;
          acc ^= L.rows[i];
        }
      }
      if (acc != t.m) continue;
      int diff = (product_phase(L, comb, n) - t.phase) & 3;
      members.push_back({comb, diff == 0 ? t.c : -t.c});
    }
    for (std::uint64_t s = 0; s < nsign; ++s) {
      double e = e_id;
      for (const auto& m : members) e += (std::popcount(m.comb & s) & 1) ? -m.c : m.c;
      if (e > best + tol) continue;
      if (e < best - tol) std::erase_if(cand, [&](const Cand& c) { return c.e > e + tol; });
      best = std::min(best, e);
      cand.push_back({li, s, e});
    }
  }
  MinGroups out;
  out.e_min = best;
  for (const auto& c : cand)
    if (c.e <= best + tol) out.groups.push_back(materialize(n, Ls[c.li], c.s));
  return out;
}

// ---------------------------------------------------------------- refinement

int filter_xi(const GeneratorSet& g, const Hamiltonian& h) {
  if (g.n_qubits() != h.n_qubits()) throw DimensionError("generator set / hamiltonian qubit count mismatch");
  for (const auto& gen : g.generators()) {
    bool all = true;
    for (const auto& t : h.terms())
      if (!commutes(gen, t.pauli)) {
        all = false;
        break;
      }
    if (all) return 1;
  }
  return 0;
}

bool group_commutes_with(const GeneratorSet& g, const Hamiltonian& h) {
  if (g.n_qubits() != h.n_qubits()) throw DimensionError("generator set / hamiltonian qubit count mismatch");
  std::size_t n = g.n_qubits();
  std::vector<gf2::BitVec> rows;
  for (const auto& t : h.terms()) {
    gf2::BitVec r(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!commutes(g.generators()[i], t.pauli)) r.set(i);
    if (r.any()) rows.push_back(std::move(r));
  }
  return !gf2::nullspace(rows, n).empty();
}

namespace {

bool commutes_with_all(const PauliString& p, const Hamiltonian& h) {
  for (const auto& t : h.terms())
    if (!commutes(p, t.pauli)) return false;
  return true;
}

std::set<PauliString> element_set(const GeneratorSet& g) {
  auto els = g.group().elements();
  return {els.begin(), els.end()};
}

}  // namespace

RefineReport refine_optimal_report(const Hamiltonian& h, std::size_t cap) {
  RefineReport rep;
  std::size_t n = h.n_qubits();
  MinGroups mg = find_min_groups(h, cap);
  rep.e_min = mg.e_min;
  rep.minimizers = mg.groups;

  for (const auto& g : mg.groups)
    if (group_commutes_with(g, h)) rep.kept.push_back(g);
  if (rep.kept.empty()) {
    rep.warnings.push_back("no minimizer has a group element commuting with H; keeping all minimizers");
    rep.kept = mg.groups;
  }

  const PauliString id = PauliString::identity(n);
  std::set<PauliString> common = element_set(mg.groups.front());
  for (std::size_t i = 1; i < mg.groups.size() && !common.empty(); ++i) {
    auto other = element_set(mg.groups[i]);
    std::set<PauliString> next;
    std::set_intersection(common.begin(), common.end(), other.begin(), other.end(), std::inserter(next, next.end()));
    common = std::move(next);
  }
  common.erase(id);
  rep.common.assign(common.begin(), common.end());

  Hamiltonian sub(n);
  for (const auto& t : h.terms()) {
    bool in_common = std::any_of(common.begin(), common.end(), [&](const PauliString& c) { return c.same_letters(t.pauli); });
    if (!in_common) sub.add(t.coeff, t.pauli);
  }
  rep.sub_hamiltonian = sub;

  bool sub_trivial = std::all_of(sub.terms().begin(), sub.terms().end(),
                                 [](const Term& t) { return t.pauli.is_identity_op(); });
  if (sub_trivial) {
    rep.optimal = rep.kept;
    return rep;
  }

  MinGroups smg = find_min_groups(sub, cap);
  for (const auto& s : smg.groups)
    if (group_commutes_with(s, h)) rep.sub_kept.push_back(s);
  if (rep.sub_kept.empty()) {
    rep.warnings.push_back("no sub-Hamiltonian minimizer has a group element commuting with H; keeping all");
    rep.sub_kept = smg.groups;
  }

  // With no common subgroup the sub-Hamiltonian is H itself and every set
  // would vouch for its own signs; require a partner describing another state.
  const bool need_other = common.empty();
  std::vector<std::set<PauliString>> sub_sets;
  std::vector<GeneratorSet> sub_canon;
  for (const auto& s : rep.sub_kept) {
    sub_sets.push_back(element_set(s));
    sub_canon.push_back(s.canonical());
  }
  for (const auto& g : rep.kept) {
    auto gs = element_set(g);
    auto gc = g.canonical();
    bool keep = false;
    for (std::size_t si = 0; si < sub_sets.size(); ++si) {
      if (need_other && sub_canon[si] == gc) continue;
      const auto& ss = sub_sets[si];
      for (const auto& e : gs) {
        if (e == id || common.count(e) || !ss.count(e)) continue;
        if (commutes_with_all(e, h)) {
          keep = true;
          break;
        }
      }
      if (keep) break;
    }
    if (keep) rep.optimal.push_back(g);
  }
  if (rep.optimal.empty()) {
    rep.warnings.push_back("sign ambiguity survives both refinement steps; returning all step-1 survivors");
    rep.optimal = rep.kept;
  }
  return rep;
}

std::vector<GeneratorSet> refine_optimal(const Hamiltonian& h, std::size_t cap) {
  return refine_optimal_report(h, cap).optimal;
}

}  // namespace stabground

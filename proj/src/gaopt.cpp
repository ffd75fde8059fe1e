#include "stabground/gaopt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "stabground/errors.hpp"
#include "stabground/gf2.hpp"
#include "stabground/rng.hpp"

namespace stabground {

CommutationMatrix commutation_matrix(const Hamiltonian& h) {
  CommutationMatrix c;
  c.size = h.size();
  c.bits.assign(c.size * c.size, 0);
  for (std::size_t i = 0; i < c.size; ++i)
    for (std::size_t j = i + 1; j < c.size; ++j)
      if (!commutes(h.terms()[i].pauli, h.terms()[j].pauli)) c.bits[i * c.size + j] = c.bits[j * c.size + i] = 1;
  return c;
}

GaConfig GaConfig::defaults_for(const Hamiltonian& h, std::uint64_t seed) {
  GaConfig c;
  std::size_t p = 0;
  for (const auto& t : h.terms())
    if (!t.pauli.is_identity_op()) ++p;
  c.generations = 200 * static_cast<int>(std::max<std::size_t>(1, h.n_qubits()));
  c.mutation_rate = p ? 1.0 / static_cast<double>(p) : 0.0;
  c.penalty_weight = 2.0 * h.abs_sum() + 1.0;
  c.rng_seed = seed;
  return c;
}

void GaConfig::validate(const Hamiltonian& h) const {
  if (population_size < 2) throw ConfigError("population_size must be >= 2");
  if (generations < 1) throw ConfigError("generations must be >= 1");
  if (!(crossover_rate >= 0 && crossover_rate <= 1)) throw ConfigError("crossover_rate must lie in [0,1]");
  if (!(mutation_rate >= 0 && mutation_rate <= 1)) throw ConfigError("mutation_rate must lie in [0,1]");
  if (!(penalty_weight > h.abs_sum())) throw ConfigError("penalty_weight must exceed sum |h_p|");
  if (elitism_count < 0 || elitism_count >= population_size)
    throw ConfigError("elitism_count must lie in [0, population_size)");
  if (tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
}

namespace {

constexpr double kTieTol = 1e-12;

// Scores term subsets. Genes are the non-identity terms.
class Evaluator {
 public:
  explicit Evaluator(const Hamiltonian& h) : n_(h.n_qubits()) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      const auto& t = h.terms()[i];
      if (t.pauli.is_identity_op()) {
        e_id_ += t.coeff;
        continue;
      }
      term_index_.push_back(i);
      paulis_.push_back(t.pauli);
      coeff_.push_back(t.coeff);
      vecs_.push_back(gf2::symplectic(t.pauli));
    }
    std::size_t p = paulis_.size();
    anti_.assign(p * p, 0);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j)
        if (!commutes(paulis_[i], paulis_[j])) anti_[i * p + j] = anti_[j * p + i] = 1;
    priority_.resize(p);
    std::iota(priority_.begin(), priority_.end(), 0);
    std::stable_sort(priority_.begin(), priority_.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(coeff_[a]) > std::abs(coeff_[b]); });
  }

  struct Eval {
    double energy = 0.0;
    std::size_t rank = 0;
    std::vector<int> member_sign;  // per gene: 0 outside the span, else +-1
  };

  std::size_t genes() const { return paulis_.size(); }
  std::size_t term_index(std::size_t g) const { return term_index_[g]; }
  bool anti(std::size_t a, std::size_t b) const { return anti_[a * genes() + b] != 0; }
  const std::vector<std::size_t>& priority() const { return priority_; }
  double abs_coeff(std::size_t g) const { return std::abs(coeff_[g]); }

  std::size_t pairs(const std::vector<std::uint8_t>& sel) const {
    std::size_t c = 0, p = genes();
    for (std::size_t i = 0; i < p; ++i) {
      if (!sel[i]) continue;
      for (std::size_t j = i + 1; j < p; ++j)
        if (sel[j] && anti_[i * p + j]) ++c;
    }
    return c;
  }

  // Energy of the group spanned by a commuting selection under the best sign
  // assignment (exhaustive up to 12 independent generators, local search above).
  Eval span(const std::vector<std::uint8_t>& sel) const {
    gf2::Basis basis(2 * n_);
    std::vector<PauliString> bp;
    std::vector<std::size_t> bgene;
    for (auto g : priority_) {
      if (sel[g] && basis.add(vecs_[g])) {
        bp.push_back(paulis_[g]);
        bgene.push_back(g);
      }
    }
    const std::size_t r = bp.size();
    struct Member {
      std::size_t gene;
      gf2::BitVec comb;
      double c;  // coeff times the sign of the unsigned-generator product
      int beta;
    };
    std::vector<Member> members;
    for (std::size_t t = 0; t < genes(); ++t) {
      auto comb = basis.solve(vecs_[t]);
      if (!comb) continue;
      PauliString prod = PauliString::identity(n_);
      for (std::size_t i = 0; i < r; ++i)
        if (comb->get(i)) prod = multiply(prod, bp[i]);
      int beta = prod.sign();
      members.push_back({t, std::move(*comb), beta * coeff_[t], beta});
    }
    auto energy_of = [&](const gf2::BitVec& chi) {
      double e = e_id_;
      for (const auto& m : members) e += m.comb.dot(chi) ? -m.c : m.c;
      return e;
    };
    // start from every generator contributing -|h|
    gf2::BitVec chi(2 * n_);
    for (std::size_t i = 0; i < r; ++i)
      if (coeff_[bgene[i]] > 0) chi.set(i);
    double best = energy_of(chi);
    if (r <= 12) {
      gf2::BitVec trial(2 * n_);
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << r); ++m) {
        for (std::size_t i = 0; i < r; ++i) trial.set(i, (m >> i) & 1u);
        double e = energy_of(trial);
        if (e < best - kTieTol) {
          best = e;
          chi = trial;
        }
      }
    } else {
      for (bool improved = true; improved;) {
        improved = false;
        for (std::size_t i = 0; i < r; ++i) {
          chi.flip(i);
          double e = energy_of(chi);
          if (e < best - kTieTol) {
            best = e;
            improved = true;
          } else {
            chi.flip(i);
          }
        }
      }
    }
    Eval out;
    out.energy = best;
    out.rank = r;
    out.member_sign.assign(genes(), 0);
    for (const auto& m : members) out.member_sign[m.gene] = m.beta * (m.comb.dot(chi) ? -1 : 1);
    return out;
  }

 private:
  std::size_t n_;
  double e_id_ = 0.0;
  std::vector<std::size_t> term_index_;
  std::vector<PauliString> paulis_;
  std::vector<double> coeff_;
  std::vector<gf2::BitVec> vecs_;
  std::vector<std::uint8_t> anti_;
  std::vector<std::size_t> priority_;
};

using Genome = std::vector<std::uint8_t>;

std::string key_of(const Genome& g) { return std::string(g.begin(), g.end()); }

CliqueResult to_result(const Evaluator& ev, const Evaluator::Eval& e) {
  CliqueResult r;
  r.energy = e.energy;
  r.rank = e.rank;
  for (std::size_t g = 0; g < ev.genes(); ++g) {
    if (!e.member_sign[g]) continue;
    r.selected_terms.push_back(ev.term_index(g));
    r.signs[ev.term_index(g)] = e.member_sign[g];
  }
  std::sort(r.selected_terms.begin(), r.selected_terms.end());
  r.is_maximal = true;
  for (std::size_t g = 0; g < ev.genes() && r.is_maximal; ++g) {
    if (e.member_sign[g]) continue;
    bool blocked = false;
    for (std::size_t m = 0; m < ev.genes() && !blocked; ++m) blocked = e.member_sign[m] && ev.anti(g, m);
    if (!blocked) r.is_maximal = false;
  }
  return r;
}

}  // namespace

CliqueResult ga_search(const Hamiltonian& h, const GaConfig& cfg) {
  cfg.validate(h);
  Evaluator ev(h);
  const std::size_t p = ev.genes();
  if (p == 0) {
    CliqueResult r;
    r.energy = h.identity_coeff();
    r.is_maximal = true;
    return r;
  }

  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto pop = static_cast<std::size_t>(cfg.population_size);

  std::unordered_map<std::string, double> memo;
  auto fitness = [&](const Genome& g) {
    auto key = key_of(g);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t pr = ev.pairs(g);
    double f;
    if (pr == 0) {
      f = ev.span(g).energy;
    } else {
      f = cfg.penalty_weight * static_cast<double>(pr);
      for (std::size_t i = 0; i < p; ++i)
        if (g[i]) f -= ev.abs_coeff(i);
    }
    memo.emplace(std::move(key), f);
    return f;
  };

  // greedy extension in priority order, never raising the energy
  auto grow = [&](const Genome& start) {
    auto cur = ev.span(start);
    for (auto g : ev.priority()) {
      if (cur.member_sign[g]) continue;
      bool ok = true;
      for (std::size_t m = 0; m < p && ok; ++m) ok = !(cur.member_sign[m] && ev.anti(g, m));
      if (!ok) continue;
      Genome trial(p, 0);
      for (std::size_t m = 0; m < p; ++m) trial[m] = cur.member_sign[m] != 0;
      trial[g] = 1;
      auto e = ev.span(trial);
      if (e.energy <= cur.energy + kTieTol) cur = std::move(e);
    }
    return cur;
  };

  // Max-weight clique greedy: take the candidate that keeps the most
  // compatible weight available, skipping any that would raise the energy.
  auto grow_lookahead = [&](std::size_t start) {
    Genome g(p, 0);
    g[start] = 1;
    auto cur = ev.span(g);
    std::vector<std::size_t> cand;
    for (std::size_t c = 0; c < p; ++c) {
      bool ok = !cur.member_sign[c];
      for (std::size_t m = 0; m < p && ok; ++m) ok = !(cur.member_sign[m] && ev.anti(c, m));
      if (ok) cand.push_back(c);
    }
    while (!cand.empty()) {
      std::size_t pick = 0;
      double pick_score = -1;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        double score = ev.abs_coeff(cand[i]);
        for (auto d : cand)
          if (d != cand[i] && !ev.anti(cand[i], d)) score += ev.abs_coeff(d);
        if (score > pick_score + kTieTol) {
          pick_score = score;
          pick = i;
        }
      }
      const std::size_t c = cand[pick];
      cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(pick));
      Genome trial = g;
      trial[c] = 1;
      auto e = ev.span(trial);
      if (e.energy > cur.energy + kTieTol) continue;
      g = std::move(trial);
      cur = std::move(e);
      std::erase_if(cand, [&](std::size_t d) { return cur.member_sign[d] != 0 || ev.anti(c, d); });
    }
    return g;
  };

  // seeds: look-ahead cliques from the largest terms, then bare singletons
  std::vector<Genome> popu;
  const std::size_t seeds = std::min(p, std::max<std::size_t>(1, pop / 4));
  for (std::size_t k = 0; k < seeds; ++k) popu.push_back(grow_lookahead(ev.priority()[k]));
  for (std::size_t k = 0; k < seeds && popu.size() < pop; ++k) {
    Genome g(p, 0);
    g[ev.priority()[k]] = 1;
    popu.push_back(std::move(g));
  }
  while (popu.size() < pop) {
    Genome g(p, 0);
    for (auto& b : g) b = unit(rng) < 0.5;
    popu.push_back(std::move(g));
  }

  bool have_best = false;
  double best_f = 0.0;
  Genome best;
  std::vector<double> fit(pop);
  std::vector<std::size_t> order(pop);

  for (int gen = 0; gen < cfg.generations; ++gen) {
    for (std::size_t i = 0; i < pop; ++i) fit[i] = fitness(popu[i]);
    for (std::size_t i = 0; i < pop; ++i) {
      if (ev.pairs(popu[i]) != 0) continue;
      if (!have_best || fit[i] < best_f - kTieTol) {
        have_best = true;
        best_f = fit[i];
        best = popu[i];
      }
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });

    std::uniform_int_distribution<std::size_t> pick(0, pop - 1);
    auto tournament = [&]() {
      std::size_t w = pick(rng);
      for (int k = 1; k < cfg.tournament_size; ++k) {
        std::size_t c = pick(rng);
        if (fit[c] < fit[w] || (fit[c] == fit[w] && c < w)) w = c;
      }
      return w;
    };

    std::vector<Genome> next;
    next.reserve(pop);
    for (int e = 0; e < cfg.elitism_count; ++e) next.push_back(popu[order[static_cast<std::size_t>(e)]]);
    while (next.size() < pop) {
      Genome a = popu[tournament()], b = popu[tournament()];
      if (unit(rng) < cfg.crossover_rate)
        for (std::size_t i = 0; i < p; ++i)
          if (unit(rng) < 0.5) std::swap(a[i], b[i]);
      for (auto* child : {&a, &b}) {
        for (std::size_t i = 0; i < p; ++i)
          if (unit(rng) < cfg.mutation_rate) (*child)[i] ^= 1;
        if (next.size() < pop) next.push_back(std::move(*child));
      }
    }
    popu = std::move(next);
  }
  for (std::size_t i = 0; i < pop; ++i) {
    if (ev.pairs(popu[i]) != 0) continue;
    double f = fitness(popu[i]);
    if (!have_best || f < best_f - kTieTol) {
      have_best = true;
      best_f = f;
      best = popu[i];
    }
  }
  if (!have_best) throw SearchFailure("no commuting term subset found");

  return to_result(ev, grow(best));
}

// ---------------------------------------------------------------- completion

std::string to_string(CompletionSource s) {
  switch (s) {
    case CompletionSource::clique: return "clique";
    case CompletionSource::gmax: return "gmax";
    case CompletionSource::commutant: return "commutant";
    case CompletionSource::complement: return "complement";
  }
  return "?";
}

namespace {

double partial_energy(std::size_t n, std::vector<PauliString> gens, const Hamiltonian& h) {
  return StabilizerGroup(n, std::move(gens)).energy(h);
}

// Signed generators from a clique: independent members in |h| order.
std::vector<PauliString> clique_generators(const CliqueResult& c, const Hamiltonian& h) {
  std::vector<std::size_t> order = c.selected_terms;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(h.terms()[a].coeff) > std::abs(h.terms()[b].coeff);
  });
  gf2::Basis basis(2 * h.n_qubits());
  std::vector<PauliString> out;
  for (auto t : order) {
    const auto& p = h.terms()[t].pauli;
    if (p.is_identity_op()) continue;
    if (basis.add(gf2::symplectic(p))) out.push_back(p.with_sign(c.signs.at(t)));
  }
  return out;
}

struct Choice {
  PauliString gen;
  double energy;
};

// Pick the lowest-energy candidate and sign; ties keep candidate order and the
// preferred sign (inherited when given, else +).
std::optional<Choice> choose(std::size_t n, const std::vector<PauliString>& current, const gf2::Basis& span,
                             const std::vector<PauliString>& candidates, const Hamiltonian& h) {
  std::optional<Choice> best;
  for (const auto& cand : candidates) {
    if (span.contains(gf2::symplectic(cand))) continue;
    auto with = [&](const PauliString& g) {
      auto gens = current;
      gens.push_back(g);
      return partial_energy(n, std::move(gens), h);
    };
    PauliString pref = cand, other = cand.negated();
    double ep = with(pref), eo = with(other);
    Choice c = eo < ep - kTieTol ? Choice{other, eo} : Choice{pref, ep};
    if (!best || c.energy < best->energy - kTieTol) best = c;
  }
  return best;
}

}  // namespace

Completion complete_generators_traced(const CliqueResult& clique, const Hamiltonian& h, const GaConfig& cfg) {
  const std::size_t n = h.n_qubits();
  for (auto t : clique.selected_terms)
    if (t >= h.size()) throw DimensionError("clique term index out of range");
  for (std::size_t a = 0; a < clique.selected_terms.size(); ++a)
    for (std::size_t b = a + 1; b < clique.selected_terms.size(); ++b)
      if (!commutes(h.terms()[clique.selected_terms[a]].pauli, h.terms()[clique.selected_terms[b]].pauli))
        throw ValidationError("clique terms do not commute");

  Completion out;
  std::vector<PauliString> gens = clique_generators(clique, h);
  out.sources.assign(gens.size(), CompletionSource::clique);

  // G^max: best commuting subset of the remaining terms, signed by its own search
  std::vector<PauliString> gmax;
  {
    Hamiltonian rest(n);
    std::vector<bool> in_clique(h.size(), false);
    for (auto t : clique.selected_terms) in_clique[t] = true;
    for (std::size_t i = 0; i < h.size(); ++i)
      if (!in_clique[i] && !h.terms()[i].pauli.is_identity_op()) rest.add(h.terms()[i].coeff, h.terms()[i].pauli);
    if (!rest.empty() && gens.size() < n) {
      GaConfig sub = GaConfig::defaults_for(rest, derive_seed(cfg.rng_seed, 1));
      sub.population_size = cfg.population_size;
      sub.crossover_rate = cfg.crossover_rate;
      sub.elitism_count = cfg.elitism_count;
      sub.tournament_size = cfg.tournament_size;
      sub.generations = cfg.generations;
      sub.penalty_weight = std::max(sub.penalty_weight, cfg.penalty_weight);
      auto sc = ga_search(rest, sub);
      gmax = clique_generators(sc, rest);
    }
  }

  while (gens.size() < n) {
    gf2::Basis span(2 * n);
    for (const auto& g : gens) span.add(gf2::symplectic(g));

    // (a)+(c) on the span of G^max: c with sum_i c_i <gmax_i, q> = 0 for q in gens and H
    if (!gmax.empty()) {
      std::vector<gf2::BitVec> rows;
      auto constrain = [&](const PauliString& q) {
        gf2::BitVec r(gmax.size());
        for (std::size_t i = 0; i < gmax.size(); ++i)
          if (!commutes(gmax[i], q)) r.set(i);
        if (r.any()) rows.push_back(std::move(r));
      };
      for (const auto& g : gens) constrain(g);
      for (const auto& t : h.terms()) constrain(t.pauli);
      std::vector<PauliString> cands;
      for (const auto& c : gf2::nullspace(rows, gmax.size())) {
        PauliString e = PauliString::identity(n);
        for (std::size_t i = 0; i < gmax.size(); ++i)
          if (c.get(i)) e = multiply(e, gmax[i]);
        cands.push_back(e);
      }
      if (auto ch = choose(n, gens, span, cands, h)) {
        gens.push_back(ch->gen);
        out.sources.push_back(CompletionSource::gmax);
        continue;
      }
    }

    // (a)+(c) over all Pauli strings: the commutant of the generators and H
    std::vector<gf2::BitVec> rows;
    for (const auto& g : gens) rows.push_back(gf2::symplectic_dual(g));
    const std::size_t n_gen_rows = rows.size();
    for (const auto& t : h.terms())
      if (!t.pauli.is_identity_op()) rows.push_back(gf2::symplectic_dual(t.pauli));
    std::vector<PauliString> cands;
    for (const auto& v : gf2::nullspace(rows, 2 * n)) cands.push_back(gf2::pauli_from_symplectic(n, v));
    if (auto ch = choose(n, gens, span, cands, h)) {
      gens.push_back(ch->gen);
      out.sources.push_back(CompletionSource::commutant);
      continue;
    }

    // (a) only: symplectic complement of the current generators
    rows.resize(n_gen_rows);
    cands.clear();
    for (const auto& v : gf2::nullspace(rows, 2 * n)) cands.push_back(gf2::pauli_from_symplectic(n, v));
    auto ch = choose(n, gens, span, cands, h);
    if (!ch) throw ValidationError("symplectic complement exhausted before completion");
    gens.push_back(ch->gen);
    out.sources.push_back(CompletionSource::complement);
    out.warnings.push_back("generator " + format_pauli(ch->gen) + " does not commute with H");
  }

  out.generators = GeneratorSet(n, gens);
  out.energy = group_energy(out.generators, h).energy;
  return out;
}

GeneratorSet complete_generators(const CliqueResult& clique, const Hamiltonian& h, const GaConfig& cfg) {
  return complete_generators_traced(clique, h, cfg).generators;
}

boost::multiprecision::cpp_int degeneracy_count(int n, int l) {
  if (l < 0 || l > n) throw DomainError("degeneracy_count needs 0 <= l <= n");
  using boost::multiprecision::cpp_int;
  int m = n - l;
  cpp_int c = cpp_int(1) << m;
  for (int i = 1; i <= m; ++i) c *= (cpp_int(1) << i) + 1;
  return c;
}

}  // namespace stabground

#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "stabground/errors.hpp"
#include "stabground/gaopt.hpp"

using namespace stabground;

namespace {

std::set<std::string> selected_letters(const CliqueResult& c, const Hamiltonian& h) {
  std::set<std::string> s;
  for (auto t : c.selected_terms) s.insert(format_pauli(h.terms()[t].pauli));
  return s;
}

bool pairwise_commuting(const CliqueResult& c, const Hamiltonian& h) {
  for (auto a : c.selected_terms)
    for (auto b : c.selected_terms)
      if (!commutes(h.terms()[a].pauli, h.terms()[b].pauli)) return false;
  return true;
}

double fidelity(const GeneratorSet& g, const Hamiltonian& h) {
  auto sp = oracle::spectrum(oracle::hamiltonian(h));
  return oracle::ground_fidelity(sp, oracle::stabilizer_state(generator_strings(g)));
}

}  // namespace

TEST_CASE("commutation matrix") {
  auto h = tfim(3, 1.0);
  auto c = commutation_matrix(h);
  REQUIRE(c.size == h.size());
  for (std::size_t i = 0; i < c.size; ++i) {
    CHECK_FALSE(c.anticommute(i, i));
    for (std::size_t j = 0; j < c.size; ++j) {
      CHECK(c.anticommute(i, j) == c.anticommute(j, i));
      auto a = oracle::from_text(format_pauli(h.terms()[i].pauli));
      auto b = oracle::from_text(format_pauli(h.terms()[j].pauli));
      bool anti = (a * b + b * a).norm() < 1e-12;
      CHECK(c.anticommute(i, j) == anti);
    }
  }
  // ZZ block vanishes; X_0 anticommutes with Z0Z1
  auto zz = parse_hamiltonian("1 ZZI\n1 IZZ\n1 ZIZ\n");
  auto cz = commutation_matrix(zz);
  for (auto b : cz.bits) CHECK(b == 0);
  auto single = commutation_matrix(parse_hamiltonian("0.5 XY\n"));
  CHECK(single.size == 1);
  CHECK(single.bits == std::vector<std::uint8_t>{0});
}

TEST_CASE("config defaults and validation") {
  auto h = tfim(5, 0.6);
  auto c = GaConfig::defaults_for(h, 7);
  CHECK(c.population_size == 64);
  CHECK(c.generations == 1000);
  CHECK(c.crossover_rate == doctest::Approx(0.7));
  CHECK(c.mutation_rate == doctest::Approx(1.0 / 9));
  CHECK(c.penalty_weight == doctest::Approx(2 * 7.0 + 1));
  CHECK(c.elitism_count == 2);
  CHECK_NOTHROW(c.validate(h));
  auto bad = c;
  bad.population_size = 1;
  CHECK_THROWS_AS(bad.validate(h), ConfigError);
  bad = c;
  bad.penalty_weight = h.abs_sum();
  CHECK_THROWS_AS(bad.validate(h), ConfigError);
  bad = c;
  bad.crossover_rate = 1.5;
  CHECK_THROWS_AS(bad.validate(h), ConfigError);
  bad = c;
  bad.elitism_count = 64;
  CHECK_THROWS_AS(ga_search(h, bad), ConfigError);
}

TEST_CASE("tfim cliques") {
  SUBCASE("ferromagnetic side picks the ZZ bonds") {
    auto h = tfim(5, 0.6);
    auto r = ga_search(h, GaConfig::defaults_for(h, 1));
    CHECK(selected_letters(r, h) == std::set<std::string>{"ZZIII", "IZZII", "IIZZI", "IIIZZ"});
    CHECK(r.energy == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(r.is_maximal);
    CHECK(r.rank == 4);
    for (auto& [t, s] : r.signs) CHECK(s * h.terms()[t].coeff < 0);
  }
  SUBCASE("paramagnetic side picks the X terms") {
    auto h = tfim(5, 0.9);
    auto r = ga_search(h, GaConfig::defaults_for(h, 1));
    CHECK(selected_letters(r, h) == std::set<std::string>{"XIIII", "IXIII", "IIXII", "IIIXI", "IIIIX"});
    CHECK(r.energy == doctest::Approx(-4.5).epsilon(1e-12));
    CHECK(r.is_maximal);
  }
}

TEST_CASE("near the crossover the smaller clique still wins") {
  for (int L : {5, 6}) {
    for (int k = 60; k <= 100; ++k) {
      const double lam = k / 100.0;
      auto h = tfim(L, lam);
      for (std::uint64_t seed : {1, 2, 3}) {
        auto r = ga_search(h, GaConfig::defaults_for(h, seed));
        CAPTURE(L);
        CAPTURE(lam);
        CAPTURE(seed);
        CHECK(r.energy == doctest::Approx(std::min(-(L - 1.0), -L * lam)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("same seed, same result") {
  std::mt19937_64 rng(99);
  auto h = oracle::random_hamiltonian(rng, 4, 14);
  auto a = ga_search(h, GaConfig::defaults_for(h, 5));
  auto b = ga_search(h, GaConfig::defaults_for(h, 5));
  CHECK(a.selected_terms == b.selected_terms);
  CHECK(a.signs == b.signs);
  CHECK(a.energy == b.energy);
}

TEST_CASE("exact on small random Hamiltonians") {
  std::mt19937_64 rng(20240611);
  int hits = 0;
  for (int inst = 0; inst < 50; ++inst) {
    std::uniform_int_distribution<int> nq(1, 3);
    auto n = static_cast<std::size_t>(nq(rng));
    auto h = oracle::random_hamiltonian(rng, n, 10);
    auto exact = find_min_groups(h, 3).e_min;
    auto cfg = GaConfig::defaults_for(h, static_cast<std::uint64_t>(inst) + 1);
    auto clique = ga_search(h, cfg);
    CHECK(pairwise_commuting(clique, h));
    auto comp = complete_generators_traced(clique, h, cfg);
    CHECK_NOTHROW(validate_generators(n, comp.generators.generators()));
    CHECK(comp.energy <= clique.energy + 1e-12);
    CHECK(comp.energy == doctest::Approx(group_energy_oracle(comp.generators, h)).epsilon(1e-10));
    if (std::abs(comp.energy - exact) <= 1e-9) ++hits;
  }
  CHECK(hits == 50);
}

TEST_CASE("completion examples") {
  SUBCASE("ZZ chain gets the inherited -XXXXX") {
    auto h = tfim(5, 0.6);
    auto cfg = GaConfig::defaults_for(h, 1);
    auto comp = complete_generators_traced(ga_search(h, cfg), h, cfg);
    CHECK(comp.generators.same_state(parse_generator_set("-ZZIII, -IZZII, -IIZZI, -IIIZZ, -XXXXX")));
    CHECK(comp.sources.back() == CompletionSource::gmax);
    CHECK(comp.energy == doctest::Approx(-4.0));
    CHECK(fidelity(comp.generators, h) == doctest::Approx(0.70763).epsilon(1e-4));
  }
  SUBCASE("full-rank clique is returned unchanged") {
    auto h = tfim(5, 0.9);
    auto cfg = GaConfig::defaults_for(h, 1);
    auto comp = complete_generators_traced(ga_search(h, cfg), h, cfg);
    CHECK(comp.generators.same_state(parse_generator_set("-XIIII, -IXIII, -IIXII, -IIIXI, -IIIIX")));
    for (auto s : comp.sources) CHECK(s == CompletionSource::clique);
  }
  SUBCASE("two qubits, H = -ZZ") {
    auto h = parse_hamiltonian("-1 ZZ\n");
    auto cfg = GaConfig::defaults_for(h, 1);
    auto clique = ga_search(h, cfg);
    auto comp = complete_generators_traced(clique, h, cfg);
    CHECK(format_generator_set(comp.generators) == "{ZZ, XX}");
    CHECK(comp.sources[1] == CompletionSource::commutant);
    auto mins = find_min_groups(h, 2);
    bool found = false;
    for (const auto& g : mins.groups) found = found || g.same_state(comp.generators);
    CHECK(found);
  }
  SUBCASE("classical chain completes on the commutant with fidelity 1") {
    auto h = tfim(4, 0.0);
    auto cfg = GaConfig::defaults_for(h, 3);
    auto comp = complete_generators_traced(ga_search(h, cfg), h, cfg);
    CHECK(comp.energy == doctest::Approx(-3.0));
    CHECK(fidelity(comp.generators, h) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("complement fallback warns") {
    // X and Z on one qubit: the clique keeps one, nothing else commutes with H
    auto h = parse_hamiltonian("1 X\n0.5 Z\n");
    auto cfg = GaConfig::defaults_for(h, 1);
    auto clique = ga_search(h, cfg);
    CHECK(clique.energy == doctest::Approx(-1.0));
    auto comp = complete_generators_traced(clique, h, cfg);
    CHECK(comp.generators.size() == 1);
    CHECK(comp.warnings.empty());
    auto h2 = parse_hamiltonian("1 XI\n0.5 ZI\n0.25 IX\n0.2 IZ\n");
    auto c2 = ga_search(h2, GaConfig::defaults_for(h2, 1));
    auto comp2 = complete_generators_traced(c2, h2, GaConfig::defaults_for(h2, 1));
    CHECK(comp2.energy == doctest::Approx(-1.25));
  }
  SUBCASE("non-commuting clique is rejected") {
    auto h = parse_hamiltonian("1 X\n1 Z\n");
    CliqueResult bad;
    bad.selected_terms = {0, 1};
    bad.signs = {{0, 1}, {1, 1}};
    CHECK_THROWS_AS(complete_generators(bad, h, GaConfig::defaults_for(h)), ValidationError);
  }
}

TEST_CASE("completion keeps the energy on random cliques") {
  std::mt19937_64 rng(31337);
  for (int inst = 0; inst < 30; ++inst) {
    auto h = oracle::random_hamiltonian(rng, 4, 12);
    auto cfg = GaConfig::defaults_for(h, static_cast<std::uint64_t>(inst) + 11);
    cfg.generations = 60;
    auto clique = ga_search(h, cfg);
    auto comp = complete_generators_traced(clique, h, cfg);
    CHECK_NOTHROW(validate_generators(4, comp.generators.generators()));
    CHECK(comp.energy <= clique.energy + 1e-12);
    CHECK(comp.sources.size() == 4);
  }
}

TEST_CASE("degeneracy count") {
  CHECK(degeneracy_count(5, 4) == 6);
  CHECK(degeneracy_count(3, 3) == 1);
  CHECK(degeneracy_count(4, 2) == 60);
  for (int n = 1; n <= 6; ++n) CHECK(degeneracy_count(n, 0) == stabilizer_state_count(static_cast<std::size_t>(n)));
  CHECK(degeneracy_count(40, 0) > boost::multiprecision::cpp_int(std::numeric_limits<std::uint64_t>::max()));
  CHECK_THROWS_AS(degeneracy_count(3, 4), DomainError);
  CHECK_THROWS_AS(degeneracy_count(3, -1), DomainError);
}

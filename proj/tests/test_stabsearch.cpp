#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "stabground/errors.hpp"
#include "stabground/stabsearch.hpp"

using namespace stabground;

namespace {

GeneratorSet gs(const std::string& text) { return parse_generator_set(text); }

oracle::Vec state_of(const GeneratorSet& g) { return oracle::stabilizer_state(generator_strings(g)); }

}  // namespace

TEST_CASE("generator set validation") {
  CHECK_NOTHROW(gs("ZI, IZ"));
  CHECK_THROWS_AS(gs("XI, ZI"), ValidationError);       // anticommute
  CHECK_THROWS_AS(gs("ZI, ZI"), ValidationError);       // dependent
  CHECK_THROWS_AS(gs("ZZ"), ValidationError);           // too few
  CHECK_THROWS_AS(gs("ZI, -ZI"), ValidationError);      // dependent (would give -I)
  CHECK_THROWS_AS(parse_generator_set("ZI, Z"), DimensionError);
}

TEST_CASE("canonical form identifies the stabilized state") {
  auto a = gs("-ZZIII, -IZZII, -IIZZI, -IIIZZ, -XXXXX");
  auto b = gs("-XXXXX, ZIZII, -ZZIII, -IIIZZ, ZIIIZ");
  CHECK(a.same_state(b));
  CHECK_FALSE(a.same_state(gs("-ZZIII, -IZZII, -IIZZI, -IIIZZ, XXXXX")));
  CHECK(a.canonical().canonical() == a.canonical());
}

TEST_CASE("enumeration counts and distinctness") {
  const std::uint64_t expect[] = {0, 6, 60, 1080, 36720};
  for (std::size_t n = 1; n <= 4; ++n) {
    auto sets = enumerate_generator_sets(n);
    CHECK(sets.size() == expect[n]);
    CHECK(stabilizer_state_count(n) == expect[n]);
    std::set<std::string> canon;
    for (const auto& g : sets) canon.insert(format_generator_set(g.canonical()));
    CHECK(canon.size() == sets.size());
  }
}

TEST_CASE("enumerated states are distinct as dense vectors, n <= 3") {
  for (std::size_t n = 1; n <= 3; ++n) {
    auto sets = enumerate_generator_sets(n);
    std::vector<oracle::Vec> states;
    for (const auto& g : sets) states.push_back(state_of(g));
    int clashes = 0;
    for (std::size_t i = 0; i < states.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::norm(states[i].dot(states[j])) > 1 - 1e-9) ++clashes;
    CHECK(clashes == 0);
  }
}

TEST_CASE("enumeration order is deterministic and sign-minor") {
  auto sets = enumerate_generator_sets(1);
  std::vector<std::string> got;
  for (const auto& g : sets) got.push_back(format_generator_set(g));
  std::vector<std::string> want = {"{Z}", "{-Z}", "{X}", "{-X}", "{Y}", "{-Y}"};
  CHECK(got == want);
}

TEST_CASE("capacity errors name the cap") {
  try {
    enumerate_generator_sets(5);
    FAIL("expected capacity error");
  } catch (const CapacityError& e) {
    CHECK(std::string(e.what()).find("cap of 4") != std::string::npos);
  }
  CHECK_THROWS_AS(find_min_groups(tfim(5, 0.6)), CapacityError);
  CHECK_THROWS_AS(enumerate_generator_sets(3, 9), CapacityError);
}

TEST_CASE("group energy examples") {
  auto h = parse_hamiltonian("-1 Z");
  CHECK(group_energy(gs("Z"), h).energy == -1);
  CHECK(group_energy(gs("-Z"), h).energy == 1);
  auto t = tfim(5, 0.6);
  auto zzx = group_energy(gs("-ZZIII, -IZZII, -IIZZI, -IIIZZ, -XXXXX"), t);
  CHECK(zzx.energy == doctest::Approx(-4.0).epsilon(1e-14));
  CHECK(zzx.contributing_terms.size() == 4);
  CHECK(group_energy(gs("-XIIII, -IXIII, -IIXII, -IIIXI, -IIIIX"), t).energy == doctest::Approx(-3.0));
  auto with_id = parse_hamiltonian("0.5 II\n1 ZZ\n");
  CHECK(group_energy(gs("ZI, IZ"), with_id).energy == 1.5);
  // element reached only through a product with a nontrivial phase
  auto yy = parse_hamiltonian("1 YY");
  CHECK(group_energy(gs("XX, ZZ"), yy).energy == -1);
  CHECK(group_energy(gs("XX, -ZZ"), yy).energy == 1);
}

TEST_CASE("group energy matches the dense oracle and the state expectation") {
  auto h1 = parse_hamiltonian("0.3 X\n-0.7 Z\n");
  for (const auto& g : enumerate_generator_sets(1)) {
    CHECK(std::abs(group_energy(g, h1).energy - group_energy_oracle(g, h1)) < 1e-10);
  }
  auto h3 = tfim(3, 0.5);
  oracle::Mat H3 = oracle::hamiltonian(h3);
  for (const auto& g : enumerate_generator_sets(3)) {
    double e = group_energy(g, h3).energy;
    REQUIRE(std::abs(e - group_energy_oracle(g, h3)) < 1e-10);
    auto psi = state_of(g);
    REQUIRE(std::abs(e - psi.dot(H3 * psi).real()) < 1e-10);
  }
}

TEST_CASE("stabilizer density matrices are normalized") {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const auto& g : enumerate_generator_sets(n)) {
      auto dim = Eigen::Index{1} << n;
      oracle::Mat rho = oracle::Mat::Identity(dim, dim);
      for (const auto& s : generator_strings(g)) rho = rho * (oracle::Mat::Identity(dim, dim) + oracle::from_text(s));
      rho /= static_cast<double>(dim);
      REQUIRE(std::abs(rho.trace() - oracle::cplx(1.0)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(group_energy_oracle(GeneratorSet(7, [] {
                                        std::vector<PauliString> v;
                                        for (std::size_t q = 0; q < 7; ++q) v.push_back(PauliString::single(7, q, 'Z'));
                                        return v;
                                      }()),
                                      Hamiltonian(7)),
                  CapacityError);
}

TEST_CASE("find_min_groups examples") {
  auto h = parse_hamiltonian("-1 ZI\n-1 IZ\n");
  auto mg = find_min_groups(h);
  CHECK(mg.e_min == -2);
  REQUIRE(mg.groups.size() == 1);
  CHECK(mg.groups[0].same_state(gs("ZI, IZ")));

  auto ising = find_min_groups(tfim(2, 0));
  CHECK(ising.e_min == -1);
  bool up_down = false, down_up = false;
  for (const auto& g : ising.groups) {
    if (g.same_state(gs("ZI, -IZ"))) up_down = true;
    if (g.same_state(gs("-ZI, IZ"))) down_up = true;
  }
  CHECK(up_down);
  CHECK(down_up);
}

TEST_CASE("find_min_groups agrees with a brute-force scan") {
  std::mt19937_64 rng(77);
  std::vector<Hamiltonian> hs = {tfim(3, 0.5)};
  for (int k = 0; k < 10; ++k) hs.push_back(oracle::random_hamiltonian(rng, 1 + rng() % 3, 8));
  for (const auto& h : hs) {
    auto mg = find_min_groups(h);
    double best = 1e300;
    auto all = enumerate_generator_sets(h.n_qubits());
    std::vector<double> e;
    for (const auto& g : all) {
      e.push_back(group_energy_oracle(g, h));
      best = std::min(best, e.back());
    }
    CHECK(std::abs(mg.e_min - best) < 1e-10);
    std::vector<std::string> want, got;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (e[i] <= best + 1e-9) want.push_back(format_generator_set(all[i]));
    for (const auto& g : mg.groups) got.push_back(format_generator_set(g));
    CHECK(got == want);
  }
}

TEST_CASE("filter function") {
  auto t = tfim(5, 0.6);
  CHECK(filter_xi(gs("-ZZIII, -IZZII, -IIZZI, -IIIZZ, -XXXXX"), t) == 1);
  CHECK(filter_xi(gs("Z"), parse_hamiltonian("1 X\n1 Z\n")) == 0);
  CHECK(filter_xi(gs("ZI, IZ"), parse_hamiltonian("1 ZI\n1 IZ\n")) == 1);
  // basis dependence: the all-X group contains -XXXXX but no generator commutes with H
  auto allx = gs("-XIIII, -IXIII, -IIXII, -IIIXI, -IIIIX");
  CHECK(filter_xi(allx, t) == 0);
  CHECK(group_commutes_with(allx, t));
  CHECK_FALSE(group_commutes_with(gs("Z"), parse_hamiltonian("1 X\n1 Z\n")));
}

TEST_CASE("refinement on the transverse-field chain") {
  auto r6 = refine_optimal_report(tfim(5, 0.6), 5);
  CHECK(r6.e_min == doctest::Approx(-4.0));
  CHECK(r6.minimizers.size() == 6);
  REQUIRE(r6.optimal.size() == 1);
  CHECK(r6.optimal[0].same_state(gs("-ZZIII, -IZZII, -IIZZI, -IIIZZ, -XXXXX")));
  CHECK(r6.warnings.empty());

  auto r9 = refine_optimal(tfim(5, 0.9), 5);
  REQUIRE(r9.size() == 1);
  CHECK(r9[0].same_state(gs("-XIIII, -IXIII, -IIXII, -IIIXI, -IIIIX")));

  auto z = refine_optimal(parse_hamiltonian("-1 Z"));
  REQUIRE(z.size() == 1);
  CHECK(z[0] == gs("Z"));
}

TEST_CASE("refined sets are minimizers with maximal ground-space fidelity, n <= 3") {
  std::vector<Hamiltonian> hs;
  for (double lam : {0.0, 0.2, 0.5, 0.7, 0.9, 1.2, 2.0, -0.6}) {
    hs.push_back(tfim(2, lam));
    hs.push_back(tfim(3, lam));
  }
  hs.push_back(parse_hamiltonian("1 XX\n1 YY\n1 ZZ\n"));
  hs.push_back(parse_hamiltonian("-1 ZZI\n-1 IZZ\n-0.4 XII\n-0.4 IXI\n-0.4 IIX\n"));
  for (const auto& h : hs) {
    auto rep = refine_optimal_report(h);
    auto spec = oracle::spectrum(oracle::hamiltonian(h));
    double best_f = 0;
    for (const auto& g : rep.minimizers) best_f = std::max(best_f, oracle::ground_fidelity(spec, state_of(g)));
    for (const auto& g : rep.optimal) {
      CHECK(std::abs(group_energy(g, h).energy - rep.e_min) < 1e-10);
      INFO(h.to_text());
      CHECK(oracle::ground_fidelity(spec, state_of(g)) >= best_f - 1e-9);
    }
  }
}

TEST_CASE("random hamiltonians: refined sets stay minimizers; fidelity shortfall rate reported") {
  std::mt19937_64 rng(123);
  int shortfall = 0, total = 0;
  for (int k = 0; k < 60; ++k) {
    auto h = oracle::random_hamiltonian(rng, 1 + rng() % 3, 8);
    auto rep = refine_optimal_report(h);
    auto spec = oracle::spectrum(oracle::hamiltonian(h));
    double best_f = 0;
    for (const auto& g : rep.minimizers) best_f = std::max(best_f, oracle::ground_fidelity(spec, state_of(g)));
    bool low = false;
    for (const auto& g : rep.optimal) {
      CHECK(std::abs(group_energy(g, h).energy - rep.e_min) < 1e-10);
      if (oracle::ground_fidelity(spec, state_of(g)) < best_f - 1e-9) low = true;
    }
    shortfall += low;
    ++total;
  }
  MESSAGE("refined lists containing a non-maximal-fidelity set: " << shortfall << "/" << total);
}

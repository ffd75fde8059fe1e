#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stabground/hamiltonian.hpp"
#include "stabground/stabsearch.hpp"

namespace stabground {

// Entry (i, j) is 1 iff terms i and j anticommute.
struct CommutationMatrix {
  std::size_t size = 0;
  std::vector<std::uint8_t> bits;

  bool anticommute(std::size_t i, std::size_t j) const { return bits[i * size + j] != 0; }
};

CommutationMatrix commutation_matrix(const Hamiltonian& h);

struct GaConfig {
  int population_size = 64;
  int generations = 200;
  double crossover_rate = 0.7;
  double mutation_rate = 0.1;
  double penalty_weight = 1.0;
  std::uint64_t rng_seed = 1;
  int elitism_count = 2;
  int tournament_size = 3;

  // Population 64, 200*N generations, crossover 0.7, mutation 1/p,
  // penalty 2*sum|h| + 1, elitism 2.
  static GaConfig defaults_for(const Hamiltonian& h, std::uint64_t seed = 1);
  // Throws ConfigError on violated invariants.
  void validate(const Hamiltonian& h) const;
};

struct CliqueResult {
  std::vector<std::size_t> selected_terms;  // term indices, ascending
  std::map<std::size_t, int> signs;         // term index -> +-1 of the matching group element
  double energy = 0.0;                      // sum over selected of sign * h (plus identity term)
  bool is_maximal = false;                  // every other term anticommutes with the selection
  std::size_t rank = 0;                     // independent generators spanned by the selection
};

// Genetic search over term subsets. A subset is scored by the energy of the
// group it spans with the best sign assignment; anticommuting pairs are
// penalized. The best penalty-free subset is extended greedily to maximality.
CliqueResult ga_search(const Hamiltonian& h, const GaConfig& cfg);

enum class CompletionSource { clique, gmax, commutant, complement };
std::string to_string(CompletionSource s);

struct Completion {
  GeneratorSet generators;
  std::vector<CompletionSource> sources;  // per generator
  double energy = 0.0;
  std::vector<std::string> warnings;
};

GeneratorSet complete_generators(const CliqueResult& clique, const Hamiltonian& h, const GaConfig& cfg);
Completion complete_generators_traced(const CliqueResult& clique, const Hamiltonian& h, const GaConfig& cfg);

// 2^{n-l} prod_{i=1}^{n-l} (2^i + 1)
boost::multiprecision::cpp_int degeneracy_count(int n, int l);

}  // namespace stabground

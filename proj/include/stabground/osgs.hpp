#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "stabground/gaopt.hpp"
#include "stabground/hamiltonian.hpp"
#include "stabground/stabsearch.hpp"

namespace stabground {

inline constexpr const char* kVersion = "0.1.0";

enum class SearchMode { automatic, exact, ga };

struct OsgsOptions {
  SearchMode mode = SearchMode::automatic;  // exact when n <= cap
  std::size_t cap = kDefaultEnumerationCap;
  std::uint64_t seed = 1;
  std::optional<int> population;
  std::optional<int> generations;
  bool fidelity = true;  // eigensolve when n <= kDenseCap
};

struct OsgsResult {
  std::string mode;  // "exact" or "ga"
  double e_min = 0.0;
  GeneratorSet chosen;
  std::vector<GeneratorSet> optimal;  // exact mode: all refined sets
  std::size_t minimizers = 0;         // exact mode
  int fixed_rank = 0;                 // generators pinned by H before the free choice
  boost::multiprecision::cpp_int degeneracy;
  std::optional<CliqueResult> clique;  // ga mode
  std::vector<CompletionSource> sources;
  std::optional<double> fidelity;  // squared projection onto the ground space
  std::optional<double> e0;
  std::vector<std::string> warnings;
};

OsgsResult solve_osgs(const Hamiltonian& h, const OsgsOptions& opt);

// Git blob id (SHA-1 over "blob <len>\0" + text) of the canonical Hamiltonian text.
std::string hamiltonian_digest(const Hamiltonian& h);
std::string git_blob_sha1(const std::string& content);

}  // namespace stabground

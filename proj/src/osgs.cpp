#include "stabground/osgs.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <memory>

#include "stabground/errors.hpp"
#include "stabground/mite.hpp"
#include "stabground/tableau.hpp"

namespace stabground {

OsgsResult solve_osgs(const Hamiltonian& h, const OsgsOptions& opt) {
  const std::size_t n = h.n_qubits();
  OsgsResult r;
  bool exact = opt.mode == SearchMode::exact || (opt.mode == SearchMode::automatic && n <= opt.cap);
  if (exact) {
    auto rep = refine_optimal_report(h, opt.cap);
    r.mode = "exact";
    r.e_min = rep.e_min;
    r.optimal = rep.optimal;
    r.chosen = rep.optimal.front();
    r.minimizers = rep.minimizers.size();
    std::size_t common = rep.common.size() + 1;
    while (common > 1) {
      common >>= 1;
      ++r.fixed_rank;
    }
    r.warnings = rep.warnings;
  } else {
    auto cfg = GaConfig::defaults_for(h, opt.seed);
    if (opt.population) cfg.population_size = *opt.population;
    if (opt.generations) cfg.generations = *opt.generations;
    auto clique = ga_search(h, cfg);
    auto comp = complete_generators_traced(clique, h, cfg);
    r.mode = "ga";
    r.e_min = comp.energy;
    r.chosen = comp.generators;
    r.optimal = {comp.generators};
    r.fixed_rank = static_cast<int>(clique.rank);
    r.clique = clique;
    r.sources = comp.sources;
    r.warnings = comp.warnings;
  }
  r.degeneracy = degeneracy_count(static_cast<int>(n), r.fixed_rank);
  if (opt.fidelity && n <= kDenseCap) {
    auto eig = eigensolve(h);
    r.e0 = eig.e0();
    r.fidelity = eig.ground_fidelity(prepare_state(r.chosen).amp);
  }
  return r;
}

std::string git_blob_sha1(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), blob.data(), blob.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
    throw Error("SHA-1 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string hamiltonian_digest(const Hamiltonian& h) { return git_blob_sha1(h.to_text()); }

}  // namespace stabground

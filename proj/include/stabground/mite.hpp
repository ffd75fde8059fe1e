#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stabground/dense.hpp"
#include "stabground/hamiltonian.hpp"

namespace stabground {

struct EigenDecomposition {
  std::size_t n_qubits = 0;
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // orthonormal columns
  int ground_space_dim = 0;

  double e0() const { return values[0]; }
  // First level above the ground space (equals e0 for a fully degenerate spectrum).
  double e1() const;
  double max_abs() const { return values.cwiseAbs().maxCoeff(); }
  Eigen::VectorXcd to_eigenbasis(const Eigen::VectorXcd& psi) const { return vectors.adjoint() * psi; }
  // Squared norm of the projection onto the ground space.
  double ground_fidelity(const Eigen::VectorXcd& psi) const;
};

EigenDecomposition eigensolve(const Hamiltonian& h, std::size_t cap = kDenseCap);

// Diagonal Kraus factors in the eigenbasis: cos(eps E + pi/4), sin(eps E + pi/4).
struct KrausPair {
  Eigen::VectorXd m0, m1;
  double completeness_error() const;  // max |m0^2 + m1^2 - 1|
};
KrausPair kraus_pair(const EigenDecomposition& eig, double epsilon);
// Dense operators V diag(m) V^dagger in the computational basis.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> kraus_matrices(const EigenDecomposition& eig, double epsilon);

struct WeakResult {
  int outcome = 0;
  StateVector state;
  double p0 = 0.0;
};
// Born-rule sample of one weak measurement; the state is renormalized.
WeakResult weak_measure(const StateVector& state, const EigenDecomposition& eig, double epsilon, std::mt19937_64& rng);
// M_outcome psi, renormalized (throws DomainError for a zero-probability branch).
StateVector apply_kraus(const StateVector& state, const EigenDecomposition& eig, double epsilon, int outcome);

// appendix_c: reset when k0 < ceil(k') k1 over the record since the last reset.
// sequential: after an outcome 1, ceil(k') outcomes 0 must precede the next 1.
enum class ResetPolicy { appendix_c, sequential, none };
// born: outcomes follow the state; threshold: P(0) = cos^2(eps E_th + pi/4) regardless of state.
enum class Sampling { born, threshold };

std::string to_string(ResetPolicy p);
std::string to_string(Sampling s);
ResetPolicy parse_reset_policy(const std::string& s);
Sampling parse_sampling(const std::string& s);

struct MiteConfig {
  double epsilon = 0.0;
  int max_steps = 1000;
  int trials = 1;
  double threshold_energy = 0.0;
  std::uint64_t rng_seed = 1;
  ResetPolicy reset_policy = ResetPolicy::appendix_c;
  Sampling sampling = Sampling::born;
  int record_stride = 1;
  double gap_guess = 0.0;
  double converge_fidelity = 0.999;
  int threads = 0;  // 0: STABGROUND_THREADS or hardware concurrency
  bool keep_trajectories = false;

  // eps = (pi/4)/(sum|h| + |h_I|), gap_guess = 0.1 sum|h| / N.
  static MiteConfig defaults_for(const Hamiltonian& h, double threshold_energy);
  // Throws ConfigError, including eps * max|E_n| > pi/4.
  void validate(const EigenDecomposition& eig) const;
  // Threshold k' used by the reset policies (infinite when the angles leave (0, pi/2)).
  double k_prime() const;
};

struct TrajectoryStep {
  int step = 0;
  int outcome = 0;
  double fidelity = 0.0;
  double energy = 0.0;
  bool reset = false;
};

struct Trajectory {
  double initial_fidelity = 0.0;
  double initial_energy = 0.0;
  std::vector<TrajectoryStep> steps;  // recorded steps only
  std::optional<int> converged_at;    // 0 when the input already qualifies
  double min_fidelity = 1.0;          // over every step, initial included
  int resets = 0;
};

Trajectory run_trajectory(const Hamiltonian& h, const StateVector& initial, const MiteConfig& cfg);
Trajectory run_trajectory(const EigenDecomposition& eig, const StateVector& initial, const MiteConfig& cfg,
                          std::mt19937_64& rng);

struct EnsembleResult {
  std::vector<int> steps;  // recorded step indices, 0 first
  std::vector<double> mean_fidelity;
  std::vector<double> stderr_fidelity;
  std::vector<double> reset_rate;  // resets per trial per step over the preceding window
  std::vector<std::optional<int>> converged_at;
  std::vector<double> initial_fidelity;
  double min_fidelity = 1.0;
  long long total_resets = 0;
  double k_prime = 0.0;
  std::vector<Trajectory> trajectories;  // when keep_trajectories
};

using InitialStateFn = std::function<StateVector(int trial)>;

EnsembleResult run_ensemble(const Hamiltonian& h, const StateVector& initial, const MiteConfig& cfg);
EnsembleResult run_ensemble(const EigenDecomposition& eig, const InitialStateFn& initial, const MiteConfig& cfg);

// Per-qubit Bloch-uniform product state.
StateVector random_product_state(std::size_t n, std::mt19937_64& rng);
// Trial t draws from substream(derive_seed(seed, 0x52414e44), t).
InitialStateFn random_product_states(std::size_t n, std::uint64_t seed);

int resolve_threads(int requested);

}  // namespace stabground

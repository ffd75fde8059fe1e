#include "stabground/mite.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <thread>

#include "stabground/analysis.hpp"
#include "stabground/errors.hpp"
#include "stabground/rng.hpp"

namespace stabground {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;

// 53-bit uniform in [0, 1), identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

double EigenDecomposition::e1() const {
  auto g = static_cast<Eigen::Index>(ground_space_dim);
  return g < values.size() ? values[g] : values[0];
}

double EigenDecomposition::ground_fidelity(const Eigen::VectorXcd& psi) const {
  double f = 0.0;
  for (int k = 0; k < ground_space_dim; ++k) f += std::norm(vectors.col(k).dot(psi));
  return f;
}

EigenDecomposition eigensolve(const Hamiltonian& h, std::size_t cap) {
  check_dense_cap(h.n_qubits(), std::min(cap, kDenseCap), "eigensolve");
  Eigen::MatrixXcd m = hamiltonian_matrix(h);
  EigenDecomposition e;
  e.n_qubits = h.n_qubits();
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real());
    if (es.info() != Eigen::Success) throw Error("eigensolver did not converge");
    e.values = es.eigenvalues();
    e.vectors = es.eigenvectors().cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) throw Error("eigensolver did not converge");
    e.values = es.eigenvalues();
    e.vectors = es.eigenvectors();
  }
  const double e0 = e.values[0];
  for (Eigen::Index k = 0; k < e.values.size(); ++k)
    if (std::abs(e.values[k] - e0) <= 1e-9 * std::max(1.0, std::abs(e0))) ++e.ground_space_dim;
  return e;
}

double KrausPair::completeness_error() const {
  return ((m0.array().square() + m1.array().square()) - 1.0).abs().maxCoeff();
}

KrausPair kraus_pair(const EigenDecomposition& eig, double epsilon) {
  KrausPair k;
  Eigen::ArrayXd x = epsilon * eig.values.array() + kQuarterPi;
  k.m0 = x.cos().matrix();
  k.m1 = x.sin().matrix();
  return k;
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> kraus_matrices(const EigenDecomposition& eig, double epsilon) {
  auto k = kraus_pair(eig, epsilon);
  const auto& v = eig.vectors;
  Eigen::MatrixXcd a = v * k.m0.cast<cplx>().asDiagonal() * v.adjoint();
  Eigen::MatrixXcd b = v * k.m1.cast<cplx>().asDiagonal() * v.adjoint();
  return {a, b};
}

StateVector apply_kraus(const StateVector& state, const EigenDecomposition& eig, double epsilon, int outcome) {
  if (outcome != 0 && outcome != 1) throw DomainError("outcome must be 0 or 1");
  if (state.n_qubits != eig.n_qubits) throw DimensionError("state and eigendecomposition differ in qubit count");
  auto k = kraus_pair(eig, epsilon);
  Eigen::VectorXcd c = eig.to_eigenbasis(state.amp);
  c = c.cwiseProduct((outcome == 0 ? k.m0 : k.m1).cast<cplx>());
  double nrm = c.norm();
  if (!(nrm > 0)) throw DomainError("measurement branch has zero probability");
  return StateVector(state.n_qubits, eig.vectors * (c / nrm));
}

WeakResult weak_measure(const StateVector& state, const EigenDecomposition& eig, double epsilon,
                        std::mt19937_64& rng) {
  if (state.n_qubits != eig.n_qubits) throw DimensionError("state and eigendecomposition differ in qubit count");
  auto k = kraus_pair(eig, epsilon);
  Eigen::VectorXcd c = eig.to_eigenbasis(state.amp);
  WeakResult r;
  r.p0 = c.cwiseAbs2().dot(k.m0.cwiseAbs2());
  r.outcome = unit(rng) < r.p0 ? 0 : 1;
  c = c.cwiseProduct((r.outcome == 0 ? k.m0 : k.m1).cast<cplx>());
  r.state = StateVector(state.n_qubits, eig.vectors * (c / c.norm()));
  return r;
}

std::string to_string(ResetPolicy p) {
  switch (p) {
    case ResetPolicy::appendix_c: return "appendix_c";
    case ResetPolicy::sequential: return "sequential";
    case ResetPolicy::none: return "none";
  }
  return "?";
}

std::string to_string(Sampling s) { return s == Sampling::born ? "born" : "threshold"; }

ResetPolicy parse_reset_policy(const std::string& s) {
  if (s == "appendix_c") return ResetPolicy::appendix_c;
  if (s == "sequential") return ResetPolicy::sequential;
  if (s == "none") return ResetPolicy::none;
  throw ConfigError("unknown reset policy '" + s + "' (appendix_c, sequential, none)");
}

Sampling parse_sampling(const std::string& s) {
  if (s == "born") return Sampling::born;
  if (s == "threshold") return Sampling::threshold;
  throw ConfigError("unknown sampling mode '" + s + "' (born, threshold)");
}

MiteConfig MiteConfig::defaults_for(const Hamiltonian& h, double threshold_energy) {
  MiteConfig c;
  double scale = h.abs_sum() + std::abs(h.identity_coeff());
  c.epsilon = scale > 0 ? kQuarterPi / scale : 1.0;
  c.threshold_energy = threshold_energy;
  c.gap_guess = h.abs_sum() > 0 ? 0.1 * h.abs_sum() / static_cast<double>(h.n_qubits()) : 0.1;
  return c;
}

void MiteConfig::validate(const EigenDecomposition& eig) const {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
  if (epsilon * eig.max_abs() > kQuarterPi * (1 + 1e-12))
    throw ConfigError("epsilon * max|E_n| = " + std::to_string(epsilon * eig.max_abs()) + " exceeds pi/4");
  if (max_steps < 0) throw ConfigError("max_steps must be >= 0");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
  if (reset_policy != ResetPolicy::none && !(gap_guess > 0)) throw ConfigError("gap_guess must be positive");
  if (!(converge_fidelity > 0 && converge_fidelity <= 1)) throw ConfigError("converge_fidelity must lie in (0, 1]");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (!std::isfinite(threshold_energy)) throw ConfigError("threshold energy must be finite");
}

double MiteConfig::k_prime() const {
  try {
    double k = k_prime_ratio(epsilon, threshold_energy, threshold_energy + gap_guess);
    return std::isfinite(k) && k > 0 ? k : std::numeric_limits<double>::infinity();
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

namespace {

// Populations over the eigenbasis suffice: the Kraus operators are diagonal there.
struct Engine {
  const EigenDecomposition& eig;
  const MiteConfig& cfg;
  Eigen::ArrayXd q0, q1;  // m0^2, m1^2
  Eigen::ArrayXd energies;
  double kp;
  double pinned_p0;

  Engine(const EigenDecomposition& e, const MiteConfig& c) : eig(e), cfg(c), kp(c.k_prime()) {
    auto k = kraus_pair(e, c.epsilon);
    q0 = k.m0.array().square();
    q1 = k.m1.array().square();
    energies = e.values.array();
    double x = c.epsilon * c.threshold_energy + kQuarterPi;
    pinned_p0 = std::cos(x) * std::cos(x);
  }

  Eigen::ArrayXd populations(const StateVector& s) const {
    if (s.n_qubits != eig.n_qubits) throw DimensionError("initial state and Hamiltonian differ in qubit count");
    if (std::abs(s.norm() - 1.0) > 1e-9) throw DomainError("initial state is not normalized");
    Eigen::ArrayXd w = eig.to_eigenbasis(s.amp).cwiseAbs2().array();
    return w / w.sum();
  }

  double fidelity(const Eigen::ArrayXd& w) const { return w.head(eig.ground_space_dim).sum(); }
  double energy(const Eigen::ArrayXd& w) const { return (w * energies).sum(); }

  // visit(step, outcome, fidelity, w, reset) after every measurement.
  template <class Visit>
  void run(const Eigen::ArrayXd& w_init, std::mt19937_64& rng, Visit&& visit) const {
    Eigen::ArrayXd w = w_init;
    long long k0 = 0, k1 = 0, pending = 0;
    const long long need =
        std::isfinite(kp) ? static_cast<long long>(std::ceil(kp)) : std::numeric_limits<long long>::max();
    for (int s = 1; s <= cfg.max_steps; ++s) {
      double p0 = cfg.sampling == Sampling::born ? (w * q0).sum() : pinned_p0;
      int outcome = unit(rng) < p0 ? 0 : 1;
      Eigen::ArrayXd nw = w * (outcome == 0 ? q0 : q1);
      double tot = nw.sum();
      if (tot > 0) w = nw / tot;
      bool reset = false;
      switch (cfg.reset_policy) {
        case ResetPolicy::appendix_c:
          (outcome == 0 ? k0 : k1) += 1;
          reset = k1 > 0 && (!std::isfinite(kp) || k0 < need * k1);
          break;
        case ResetPolicy::sequential:
          if (outcome == 1) {
            if (pending > 0) reset = true;
            else pending = need;
          } else if (pending > 0) {
            --pending;
          }
          break;
        case ResetPolicy::none: break;
      }
      if (reset) {
        w = w_init;
        k0 = k1 = pending = 0;
      }
      visit(s, outcome, w, reset);
    }
  }
};

Trajectory trajectory_from(const Engine& eng, const Eigen::ArrayXd& w0, std::mt19937_64& rng) {
  Trajectory t;
  t.initial_fidelity = eng.fidelity(w0);
  t.initial_energy = eng.energy(w0);
  t.min_fidelity = t.initial_fidelity;
  if (t.initial_fidelity >= eng.cfg.converge_fidelity) t.converged_at = 0;
  eng.run(w0, rng, [&](int s, int outcome, const Eigen::ArrayXd& w, bool reset) {
    double f = eng.fidelity(w);
    t.min_fidelity = std::min(t.min_fidelity, f);
    if (reset) ++t.resets;
    if (!t.converged_at && f >= eng.cfg.converge_fidelity) t.converged_at = s;
    if (s % eng.cfg.record_stride == 0) t.steps.push_back({s, outcome, f, eng.energy(w), reset});
  });
  return t;
}

}  // namespace

Trajectory run_trajectory(const EigenDecomposition& eig, const StateVector& initial, const MiteConfig& cfg,
                          std::mt19937_64& rng) {
  cfg.validate(eig);
  Engine eng(eig, cfg);
  return trajectory_from(eng, eng.populations(initial), rng);
}

Trajectory run_trajectory(const Hamiltonian& h, const StateVector& initial, const MiteConfig& cfg) {
  auto eig = eigensolve(h);
  auto rng = substream(cfg.rng_seed, 0);
  return run_trajectory(eig, initial, cfg, rng);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("STABGROUND_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

EnsembleResult run_ensemble(const EigenDecomposition& eig, const InitialStateFn& initial, const MiteConfig& cfg) {
  cfg.validate(eig);
  Engine eng(eig, cfg);
  const int trials = cfg.trials;
  const int stride = cfg.record_stride;
  const int nrec = cfg.max_steps / stride + 1;

  struct Slot {
    std::vector<double> fid;
    std::vector<int> resets;
    std::optional<int> converged_at;
    double min_fidelity = 1.0;
    double initial_fidelity = 0.0;
    int total_resets = 0;
    Trajectory traj;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(trials));

  auto work = [&](int t) {
    Slot& sl = slots[static_cast<std::size_t>(t)];
    auto rng = substream(cfg.rng_seed, static_cast<std::uint64_t>(t));
    Eigen::ArrayXd w0 = eng.populations(initial(t));
    if (cfg.keep_trajectories) {
      auto rng_copy = rng;
      sl.traj = trajectory_from(eng, w0, rng_copy);
    }
    sl.fid.assign(static_cast<std::size_t>(nrec), 0.0);
    sl.resets.assign(static_cast<std::size_t>(nrec), 0);
    sl.initial_fidelity = sl.fid[0] = eng.fidelity(w0);
    sl.min_fidelity = sl.fid[0];
    if (sl.fid[0] >= cfg.converge_fidelity) sl.converged_at = 0;
    eng.run(w0, rng, [&](int s, int, const Eigen::ArrayXd& w, bool reset) {
      double f = eng.fidelity(w);
      sl.min_fidelity = std::min(sl.min_fidelity, f);
      auto slot = static_cast<std::size_t>((s + stride - 1) / stride);
      if (reset) {
        ++sl.total_resets;
        ++sl.resets[slot];
      }
      if (!sl.converged_at && f >= cfg.converge_fidelity) sl.converged_at = s;
      if (s % stride == 0) sl.fid[static_cast<std::size_t>(s / stride)] = f;
    });
  };

  const int nthreads = std::min(resolve_threads(cfg.threads), trials);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nthreads));
  if (nthreads <= 1) {
    for (int t = 0; t < trials; ++t) work(t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i)
      pool.emplace_back([&, i] {
        try {
          for (int t = next++; t < trials; t = next++) work(t);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
          next = trials;
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  EnsembleResult r;
  r.k_prime = eng.kp;
  r.steps.resize(static_cast<std::size_t>(nrec));
  r.mean_fidelity.assign(static_cast<std::size_t>(nrec), 0.0);
  r.stderr_fidelity.assign(static_cast<std::size_t>(nrec), 0.0);
  r.reset_rate.assign(static_cast<std::size_t>(nrec), 0.0);
  for (int i = 0; i < nrec; ++i) {
    auto k = static_cast<std::size_t>(i);
    r.steps[k] = i * stride;
    double sum = 0.0, rs = 0.0;
    for (const auto& sl : slots) {
      sum += sl.fid[k];
      rs += sl.resets[k];
    }
    double mean = sum / trials;
    double var = 0.0;
    for (const auto& sl : slots) var += (sl.fid[k] - mean) * (sl.fid[k] - mean);
    r.mean_fidelity[k] = mean;
    r.stderr_fidelity[k] = trials > 1 ? std::sqrt(var / (trials - 1) / trials) : 0.0;
    r.reset_rate[k] = i == 0 ? 0.0 : rs / (static_cast<double>(trials) * stride);
  }
  for (auto& sl : slots) {
    r.converged_at.push_back(sl.converged_at);
    r.initial_fidelity.push_back(sl.initial_fidelity);
    r.min_fidelity = std::min(r.min_fidelity, sl.min_fidelity);
    r.total_resets += sl.total_resets;
    if (cfg.keep_trajectories) r.trajectories.push_back(std::move(sl.traj));
  }
  return r;
}

EnsembleResult run_ensemble(const Hamiltonian& h, const StateVector& initial, const MiteConfig& cfg) {
  auto eig = eigensolve(h);
  return run_ensemble(eig, [&](int) { return initial; }, cfg);
}

StateVector random_product_state(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::array<cplx, 2>> q(n);
  for (auto& a : q) {
    double theta = std::acos(1 - 2 * unit(rng));
    double phi = 2 * std::numbers::pi * unit(rng);
    a = {cplx(std::cos(theta / 2), 0), std::polar(std::sin(theta / 2), phi)};
  }
  const std::size_t dim = std::size_t{1} << n;
  Eigen::VectorXcd amp(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    cplx v = 1;
    for (std::size_t b = 0; b < n; ++b) v *= q[b][(i >> b) & 1u];
    amp[static_cast<Eigen::Index>(i)] = v;
  }
  StateVector s(n, amp);
  s.normalize();
  return s;
}

InitialStateFn random_product_states(std::size_t n, std::uint64_t seed) {
  const std::uint64_t base = derive_seed(seed, 0x52414e44);
  return [n, base](int trial) {
    auto rng = substream(base, static_cast<std::uint64_t>(trial));
    return random_product_state(n, rng);
  };
}

}  // namespace stabground

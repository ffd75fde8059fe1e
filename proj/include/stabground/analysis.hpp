#pragma once

namespace stabground {

struct SpectralParams {
  double e0 = 0.0;
  double e1 = 0.0;
  double e_th = 0.0;
  double epsilon = 0.0;
  double f0 = 1.0;  // fidelity with the ground state
  double f1 = 0.0;  // fidelity with the first excited state

  // Throws DomainError on a violated invariant.
  void validate() const;
};

// Non-negative number of consecutive M0 outcomes that lifts fidelity f0 to 1
// under pure cos^2 amplification: |ln f0| / (2 ln(1/q)), q = cos(eps*e0 + pi/4).
double k_min(const SpectralParams& p);

// [ln s(e1) - ln s(e0)] / [ln c(e0) - ln c(e1)] with c, s the cos/sin of
// eps*e + pi/4; both angles must lie in (0, pi/2). e0 == e1 gives the
// small-angle limit 1/(eps*e0 + pi/4)^2.
double k_prime_ratio(double epsilon, double e0, double e1);
double k_prime(const SpectralParams& p);
// cot^2(eps*e0 + pi/4): the exact e1 -> e0 limit of the ratio.
double k_prime_exact_limit(double epsilon, double e0);

// Sum over k_a = 1..floor(k') of k_a times the probability that the first M1
// lands on step k_a, restricted to the two lowest levels.
double t_fail(const SpectralParams& p, double k_prime_val);

// Closed-form worst-case total with q = cos(eps*e0 + pi/4), M = floor(1/(eps*e0 + pi/4)^2).
struct TotalCost {
  double fail_part = 0.0;
  double k_min = 0.0;
  double total = 0.0;
};
TotalCost t_total(const SpectralParams& p);

struct ConvergenceError {
  double raw = 0.0;
  double clamped = 0.0;
};
// (f1/f0) exp(2 k eps^2 (e0 - e1)(e0 + e1 - 2 e_th))
ConvergenceError convergence_error(const SpectralParams& p, long long k);
// 2 eps^2 (e0 - e1)(e0 + e1 - 2 e_th): log-error change per step.
double convergence_rate(const SpectralParams& p);

}  // namespace stabground

#include "stabground/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stabground/errors.hpp"

namespace stabground {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;

double angle(double eps, double e) { return eps * e + kQuarterPi; }

void require_angle(double x, const char* what) {
  if (!(x > 0.0 && x < std::numbers::pi / 2))
    throw DomainError(std::string(what) + ": eps*E + pi/4 = " + std::to_string(x) + " lies outside (0, pi/2)");
}

}  // namespace

void SpectralParams::validate() const {
  if (!std::isfinite(e0) || !std::isfinite(e1) || !std::isfinite(e_th) || !std::isfinite(epsilon))
    throw DomainError("spectral parameters must be finite");
  if (e0 > e1) throw DomainError("E0 must not exceed E1");
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  const double bound = kQuarterPi * (1 + 1e-12);
  if (epsilon * std::abs(e0) > bound || epsilon * std::abs(e1) > bound)
    throw DomainError("epsilon*|E| exceeds pi/4");
  if (!(f0 > 0 && f0 <= 1)) throw DomainError("F0 must lie in (0, 1]");
  if (!(f1 >= 0 && f1 < 1)) throw DomainError("F1 must lie in [0, 1)");
  if (f0 + f1 > 1 + 1e-12) throw DomainError("F0 + F1 exceeds 1");
}

double k_min(const SpectralParams& p) {
  p.validate();
  double q = std::cos(angle(p.epsilon, p.e0));
  if (!(q > 0 && q < 1)) throw DomainError("cos(eps*E0 + pi/4) must lie in (0, 1)");
  if (p.f0 == 1.0) return 0.0;
  return -std::log(p.f0) / (2 * std::log(1 / q));
}

double k_prime_ratio(double epsilon, double e0, double e1) {
  double x0 = angle(epsilon, e0), x1 = angle(epsilon, e1);
  require_angle(x0, "k_prime");
  require_angle(x1, "k_prime");
  if (e0 == e1) return 1 / (x0 * x0);
  double num = std::log(std::sin(x1)) - std::log(std::sin(x0));
  double den = std::log(std::cos(x0)) - std::log(std::cos(x1));
  return num / den;
}

double k_prime(const SpectralParams& p) {
  p.validate();
  if (p.e0 == p.e1) {
    double x0 = angle(p.epsilon, p.e0);
    if (x0 == 0.0) throw DomainError("k_prime limit needs eps*E0 + pi/4 != 0");
    require_angle(x0, "k_prime");
    return 1 / (x0 * x0);
  }
  return k_prime_ratio(p.epsilon, p.e0, p.e1);
}

double k_prime_exact_limit(double epsilon, double e0) {
  double x0 = angle(epsilon, e0);
  require_angle(x0, "k_prime");
  double t = std::tan(x0);
  return 1 / (t * t);
}

double t_fail(const SpectralParams& p, double k_prime_val) {
  p.validate();
  if (!(k_prime_val >= 1)) throw DomainError("t_fail needs k' >= 1");
  if (!std::isfinite(k_prime_val)) throw DomainError("t_fail needs a finite k'");
  double c0 = std::cos(angle(p.epsilon, p.e0)), c1 = std::cos(angle(p.epsilon, p.e1));
  double q0 = c0 * c0, q1 = c1 * c1;
  auto kmax = static_cast<long long>(std::floor(k_prime_val));
  double sum = 0.0, w0 = 1.0, w1 = 1.0;  // q^(k_a - 1)
  for (long long ka = 1; ka <= kmax; ++ka) {
    sum += static_cast<double>(ka) * (w0 * p.f0 + w1 * p.f1 - w0 * q0 * p.f0 - w1 * q1 * p.f1);
    w0 *= q0;
    w1 *= q1;
  }
  return sum;
}

TotalCost t_total(const SpectralParams& p) {
  p.validate();
  double x0 = angle(p.epsilon, p.e0);
  double q = std::cos(x0);
  if (!(q > 0 && q < 1)) throw DomainError("cos(eps*E0 + pi/4) must lie in (0, 1)");
  double m = std::floor(1 / (x0 * x0));
  TotalCost t;
  t.fail_part = (p.f0 + p.f1) * (1 + q) / (1 - q) * (m * std::pow(q, m) - (m + 1) * std::pow(q, m - 1) + 1 / q);
  t.k_min = k_min(p);
  t.total = t.fail_part + t.k_min;
  return t;
}

double convergence_rate(const SpectralParams& p) {
  return 2 * p.epsilon * p.epsilon * (p.e0 - p.e1) * (p.e0 + p.e1 - 2 * p.e_th);
}

ConvergenceError convergence_error(const SpectralParams& p, long long k) {
  p.validate();
  if (k < 0) throw DomainError("k must be non-negative");
  ConvergenceError e;
  if (p.f1 == 0.0) return e;
  e.raw = p.f1 / p.f0 * std::exp(static_cast<double>(k) * convergence_rate(p));
  e.clamped = std::clamp(e.raw, 0.0, 1.0);
  return e;
}

}  // namespace stabground

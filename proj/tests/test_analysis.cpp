#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "stabground/analysis.hpp"
#include "stabground/errors.hpp"

using namespace stabground;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralParams params(double e0, double e1, double eth, double eps, double f0, double f1) {
  SpectralParams p;
  p.e0 = e0;
  p.e1 = e1;
  p.e_th = eth;
  p.epsilon = eps;
  p.f0 = f0;
  p.f1 = f1;
  return p;
}

Big big_angle(double eps, double e) { return Big(eps) * Big(e) + boost::multiprecision::atan(Big(1)); }

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(params(-1, 1, 0, 0.3, 0.5, 0.5).validate());
  CHECK_THROWS_AS(params(1, -1, 0, 0.3, 0.5, 0.5).validate(), DomainError);
  CHECK_THROWS_AS(params(-1, 1, 0, 0.0, 0.5, 0.5).validate(), DomainError);
  CHECK_THROWS_AS(params(-1, 1, 0, 1.0, 0.5, 0.5).validate(), DomainError);
  CHECK_THROWS_AS(params(-1, 1, 0, 0.3, 0.0, 0.5).validate(), DomainError);
  CHECK_THROWS_AS(params(-1, 1, 0, 0.3, 0.7, 0.5).validate(), DomainError);
  CHECK_THROWS_AS(params(-1, 1, 0, 0.3, 0.5, 1.0).validate(), DomainError);
}

TEST_CASE("k_min") {
  CHECK(k_min(params(-1, 1, 0, 0.3, 1.0, 0.0)) == 0.0);
  // eps*E0 + pi/4 = pi/6
  double eps = 0.1, e0 = (kPi / 6 - kPi / 4) / eps;
  double k = k_min(params(e0, 1, 0, eps, 0.5, 0.0));
  CHECK(k == doctest::Approx(std::log(2.0) / (2 * std::log(2 / std::sqrt(3.0)))).epsilon(1e-12));
  CHECK(k > 0);
  CHECK(k_min(params(e0, 1, 0, eps, 0.25, 0.0)) == doctest::Approx(2 * k).epsilon(1e-12));
  // q = 1 at eps*E0 = -pi/4
  CHECK_THROWS_AS(k_min(params(-1, 1, 0, kPi / 4, 0.5, 0.0)), DomainError);
}

TEST_CASE("k_prime") {
  double eps = 0.1;
  double x0 = eps * -2 + kPi / 4;
  CHECK(k_prime(params(-2, -2, 0, eps, 0.5, 0.0)) == doctest::Approx(1 / (x0 * x0)).epsilon(1e-14));
  CHECK(k_prime(params(0, 0, 0, eps, 0.5, 0.0)) == doctest::Approx(16 / (kPi * kPi)).epsilon(1e-14));

  // high-precision evaluation at generic points
  for (auto [e0, e1] : {std::pair{-3.0, -2.5}, {-1.0, 2.0}, {0.5, 0.6}, {-7.0, 7.0}}) {
    Big a0 = big_angle(eps, e0), a1 = big_angle(eps, e1);
    Big want = (log(sin(a1)) - log(sin(a0))) / (log(cos(a0)) - log(cos(a1)));
    CHECK(k_prime(params(e0, e1, 0, eps, 0.5, 0.0)) == doctest::Approx(want.convert_to<double>()).epsilon(1e-11));
  }

  // continuity: the ratio tends to cot^2 of the angle; the small-angle value differs
  double e0 = -2.0, cot2 = k_prime_exact_limit(eps, e0);
  CHECK(cot2 == doctest::Approx(1 / std::pow(std::tan(x0), 2)));
  double gap3 = std::abs(k_prime(params(e0, e0 + 1e-3, 0, eps, 0.5, 0)) - cot2);
  double gap6 = std::abs(k_prime(params(e0, e0 + 1e-6, 0, eps, 0.5, 0)) - cot2);
  CHECK(gap3 < 1e-2 * cot2);
  CHECK(gap6 < 1e-5 * cot2);
  CHECK(gap6 < gap3);
  CHECK(std::abs(1 / (x0 * x0) - cot2) > 0.1);

  CHECK_THROWS_AS(k_prime(params(-1, 1, 0, kPi / 4, 0.5, 0)), DomainError);  // angle 0
  CHECK_THROWS_AS(k_prime_ratio(1.0, 1.0, 2.0), DomainError);                // angle beyond pi/2
}

TEST_CASE("t_fail") {
  double eps = 0.2;
  auto p = params(-1.5, -0.5, -1.0, eps, 1.0, 0.0);
  double q = std::pow(std::cos(eps * -1.5 + kPi / 4), 2);
  // single population: sum k (q^{k-1} - q^k) = (1 - q^K)/(1 - q) - K q^K
  for (int kk : {1, 2, 5, 9}) {
    double want = (1 - std::pow(q, kk)) / (1 - q) - kk * std::pow(q, kk);
    CHECK(t_fail(p, kk + 0.5) == doctest::Approx(want).epsilon(1e-12));
  }
  auto g = params(-1.5, -0.5, -1.0, eps, 0.6, 0.3);
  double q1 = std::pow(std::cos(eps * -0.5 + kPi / 4), 2);
  CHECK(t_fail(g, 1.0) == doctest::Approx(0.6 * (1 - q) + 0.3 * (1 - q1)).epsilon(1e-14));
  CHECK_THROWS_AS(t_fail(g, 0.5), DomainError);

  // stochastic oracle: first-M1 step of an eigenstate drawn from the populations
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0, 1);
  const double kp = 12.3;
  const int samples = 1000000;
  double acc = 0;
  for (int s = 0; s < samples; ++s) {
    double r = u(rng);
    if (r >= 0.9) continue;  // population outside the two lowest levels
    double stay = r < 0.6 ? q : q1;
    int step = 1;
    while (u(rng) < stay) ++step;
    if (step <= static_cast<int>(kp)) acc += step;
  }
  double mc = acc / samples;
  CHECK(std::abs(mc - t_fail(g, kp)) < 0.05 * t_fail(g, kp));
}

TEST_CASE("t_total") {
  double eps = 0.1;
  auto p = params(-3.0, -2.9, -2.95, eps, 0.7, 0.2);
  auto t = t_total(p);
  Big x0 = big_angle(eps, -3.0);
  Big q = cos(x0);
  Big m = floor(1 / (x0 * x0));
  Big bracket = m * pow(q, m) - (m + 1) * pow(q, m - 1) + 1 / q;
  Big fail = Big(0.9) * (1 + q) / (1 - q) * bracket;
  Big kmin = -log(Big(0.7)) / (2 * log(1 / q));
  CHECK(t.fail_part == doctest::Approx(fail.convert_to<double>()).epsilon(1e-10));
  CHECK(t.k_min == doctest::Approx(kmin.convert_to<double>()).epsilon(1e-12));
  CHECK(t.total == doctest::Approx((fail + kmin).convert_to<double>()).epsilon(1e-10));

  auto one = t_total(params(-3.0, -2.9, -2.95, eps, 1.0, 0.0));
  CHECK(one.k_min == 0.0);
  CHECK(one.total == one.fail_part);

  // monotone decreasing in F0 at fixed F1
  double prev = 1e300;
  for (double f0 = 0.01; f0 < 0.79; f0 += 0.01) {
    double v = t_total(params(-3.0, -2.9, -2.95, eps, f0, 0.2)).total;
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(t_total(params(-1, 1, 0, kPi / 4, 0.5, 0)), DomainError);
}

TEST_CASE("convergence error") {
  auto p = params(-1, 1, 0.4, 0.2, 0.6, 0.3);
  CHECK(convergence_error(p, 0).raw == doctest::Approx(0.5));
  // exponent 2 eps^2 (E0 - E1)(E0 + E1 - 2 E_th) = 2*0.04*(-2)*(-0.8) > 0: grows with k
  CHECK(convergence_rate(p) == doctest::Approx(0.128));
  CHECK(convergence_error(p, 10).raw == doctest::Approx(0.5 * std::exp(1.28)));
  CHECK(convergence_error(p, 10).clamped == 1.0);
  for (long long k = 0; k < 20; ++k) CHECK(convergence_error(p, k + 1).raw > convergence_error(p, k).raw);
  auto low = params(-1, 1, -0.4, 0.2, 0.6, 0.3);
  for (long long k = 0; k < 20; ++k) CHECK(convergence_error(low, k + 1).raw < convergence_error(low, k).raw);
  auto mid = params(-1, 1, 0.0, 0.2, 0.6, 0.3);
  for (long long k : {0LL, 5LL, 500LL}) CHECK(convergence_error(mid, k).raw == doctest::Approx(0.5));
  auto clean = params(-1, 1, 0.4, 0.2, 0.6, 0.0);
  for (long long k : {0LL, 7LL}) CHECK(convergence_error(clean, k).raw == 0.0);
  CHECK_THROWS_AS(convergence_error(params(-1, 1, 0, 0.2, 0.0, 0.3), 1), DomainError);
  CHECK_THROWS_AS(convergence_error(p, -1), DomainError);
}

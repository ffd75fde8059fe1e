#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "stabground/errors.hpp"
#include "stabground/pauli.hpp"

using namespace stabground;

namespace {

oracle::Mat dense(const PauliString& p) {
  std::vector<int> x(p.n_qubits()), z(p.n_qubits());
  for (std::size_t q = 0; q < p.n_qubits(); ++q) {
    x[q] = p.x(q);
    z[q] = p.z(q);
  }
  return oracle::from_bits(x, z, p.phase_exp());
}

PauliString random_pauli(std::mt19937_64& rng, std::size_t n) {
  PauliString p = parse_pauli(oracle::random_letters(rng, n));
  p.set_phase_exp(static_cast<int>(rng() % 4));
  return p;
}

std::vector<PauliString> all_paulis(std::size_t n) {
  std::vector<PauliString> out;
  const char* L = "IXYZ";
  std::size_t total = std::size_t{1} << (2 * n);
  for (std::size_t code = 0; code < total; ++code) {
    std::string s;
    for (std::size_t q = 0; q < n; ++q) s.push_back(L[(code >> (2 * q)) & 3]);
    out.push_back(parse_pauli(s));
  }
  return out;
}

}  // namespace

TEST_CASE("letters map to the dense matrices they name") {
  for (std::string s : {"X", "Y", "Z", "-XYZ", "YIZX", "+ZZ"})
    CHECK(dense(parse_pauli(s)).isApprox(oracle::from_text(s), 1e-14));
}

TEST_CASE("X times Z is -iY") {
  auto p = multiply(parse_pauli("X"), parse_pauli("Z"));
  CHECK(p.op(0) == 'Y');
  CHECK(p.sign_exp() == 3);
  CHECK(dense(p).isApprox(oracle::cplx(0, -1) * oracle::from_text("Y"), 1e-14));
  CHECK_FALSE(p.is_hermitian());
  CHECK_THROWS_AS(format_pauli(p), DomainError);
}

TEST_CASE("identity and involution") {
  auto g = parse_pauli("-XYZ");
  CHECK(multiply(PauliString::identity(3), g) == g);
  CHECK(multiply(g, PauliString::identity(3)) == g);
  auto zz = parse_pauli("ZZ");
  CHECK(multiply(zz, zz) == PauliString::identity(2));
}

TEST_CASE("commutation basics") {
  CHECK_FALSE(commutes(parse_pauli("X"), parse_pauli("Z")));
  CHECK(commutes(parse_pauli("XX"), parse_pauli("ZZ")));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    auto g = random_pauli(rng, 4);
    CHECK(commutes(g, g));
  }
  CHECK_THROWS_AS(commutes(parse_pauli("X"), parse_pauli("XX")), DimensionError);
  CHECK_THROWS_AS(multiply(parse_pauli("X"), parse_pauli("XX")), DimensionError);
}

TEST_CASE("text form") {
  auto p = parse_pauli("-ZZIII");
  CHECK(p.n_qubits() == 5);
  CHECK(p.sign() == -1);
  CHECK(p.op(0) == 'Z');
  CHECK(p.op(1) == 'Z');
  CHECK(p.op(2) == 'I');
  CHECK(format_pauli(parse_pauli("XIXII")) == "XIXII");
  CHECK(format_pauli(parse_pauli("+XY")) == "XY");
  CHECK(format_pauli(parse_pauli("-YY")) == "-YY");
  CHECK_THROWS_AS(parse_pauli("ZQ"), ParseError);
  CHECK_THROWS_AS(parse_pauli(""), ParseError);
  CHECK_THROWS_AS(parse_pauli("-"), ParseError);
}

TEST_CASE("exhaustive commutation and products against dense matrices, n <= 3") {
  for (std::size_t n = 1; n <= 3; ++n) {
    auto all = all_paulis(n);
    std::vector<oracle::Mat> mats;
    for (const auto& p : all) mats.push_back(dense(p));
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = 0; j < all.size(); ++j) {
        oracle::Mat comm = mats[i] * mats[j] - mats[j] * mats[i];
        REQUIRE(commutes(all[i], all[j]) == (comm.norm() < 1e-12));
        REQUIRE(dense(multiply(all[i], all[j])).isApprox(mats[i] * mats[j], 1e-12));
      }
    }
  }
}

TEST_CASE("random commutation against dense commutator, n <= 6") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    std::size_t n = 1 + rng() % 6;
    auto a = random_pauli(rng, n), b = random_pauli(rng, n);
    oracle::Mat A = dense(a), B = dense(b);
    REQUIRE(commutes(a, b) == ((A * B - B * A).norm() < 1e-9));
  }
}

TEST_CASE("associativity, cancellation and Hermitian squares") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 300; ++k) {
    std::size_t n = 1 + rng() % 3;
    auto a = random_pauli(rng, n), b = random_pauli(rng, n), c = random_pauli(rng, n);
    CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    auto aab = multiply(a, multiply(a, b));
    CHECK(aab.same_letters(b));
    CHECK(dense(aab).isApprox(dense(a) * dense(a) * dense(b), 1e-12));
    auto h = parse_pauli(oracle::random_letters(rng, n));
    if (rng() & 1) h = h.negated();
    CHECK(multiply(h, h) == PauliString::identity(n));
  }
}

TEST_CASE("words beyond 64 qubits") {
  std::string a(130, 'I'), b(130, 'I');
  a[0] = 'X';
  a[100] = 'Z';
  b[100] = 'X';
  auto pa = parse_pauli(a), pb = parse_pauli(b);
  CHECK_FALSE(commutes(pa, pb));
  auto prod = multiply(pa, pb);
  CHECK(prod.op(100) == 'Y');
  CHECK(prod.op(0) == 'X');
  CHECK(format_pauli(parse_pauli("-" + a)) == "-" + a);
}

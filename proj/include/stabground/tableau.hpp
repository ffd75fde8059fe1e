#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "stabground/dense.hpp"
#include "stabground/pauli.hpp"
#include "stabground/stabsearch.hpp"

namespace stabground {

enum class GateKind { H, S, CNOT, X, Z };

struct Gate {
  GateKind kind = GateKind::H;
  std::size_t q0 = 0;  // target, or control for CNOT
  std::size_t q1 = 0;  // CNOT target

  static Gate h(std::size_t q) { return {GateKind::H, q, 0}; }
  static Gate s(std::size_t q) { return {GateKind::S, q, 0}; }
  static Gate cnot(std::size_t c, std::size_t t) { return {GateKind::CNOT, c, t}; }
  static Gate x(std::size_t q) { return {GateKind::X, q, 0}; }
  static Gate z(std::size_t q) { return {GateKind::Z, q, 0}; }

  friend bool operator==(const Gate& a, const Gate& b) {
    return a.kind == b.kind && a.q0 == b.q0 && (a.kind != GateKind::CNOT || a.q1 == b.q1);
  }
};

struct CliffordCircuit {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;

  std::size_t size() const { return gates.size(); }
  // Throws DimensionError for an out-of-range index or CNOT with c == t.
  void validate() const;
};

// G P G^dagger, phase tracked exactly.
PauliString conjugate(const PauliString& p, const Gate& g);

// One gate per line: "H 0", "S 2", "CNOT 0 1", "X 3", "Z 4".
std::string format_circuit(const CliffordCircuit& c);
// Blank lines and '#' comments are skipped. Throws ParseError / DimensionError.
CliffordCircuit parse_circuit(std::string_view text, std::size_t n_qubits);

// Circuit C with C|0...0> stabilized by every generator of g.
CliffordCircuit synthesize_circuit(const GeneratorSet& g);

StateVector apply_circuit(StateVector state, const CliffordCircuit& c);
// |psi> = C|0...0> for the synthesized circuit (n <= kDenseCap).
StateVector prepare_state(const GeneratorSet& g);
// ||g_j psi - psi|| <= tol for every generator.
bool verify_stabilized(const StateVector& psi, const GeneratorSet& g, double tol = 1e-9);

// Destabilizer rows 0..n-1, stabilizer rows n..2n-1.
class Tableau {
 public:
  Tableau() = default;
  static Tableau identity(std::size_t n);
  // Tableau of C|0...0>.
  static Tableau from_circuit(const CliffordCircuit& c);

  std::size_t n_qubits() const { return n_; }
  const PauliString& destabilizer(std::size_t i) const { return rows_[i]; }
  const PauliString& stabilizer(std::size_t i) const { return rows_[n_ + i]; }
  const std::vector<PauliString>& rows() const { return rows_; }

  void apply(const Gate& g);
  GeneratorSet stabilizers() const;
  // Throws ValidationError on rank, commutation or pairing violations.
  void validate() const;

 private:
  std::size_t n_ = 0;
  std::vector<PauliString> rows_;
};

}  // namespace stabground

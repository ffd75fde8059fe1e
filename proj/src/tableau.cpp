#include "stabground/tableau.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

#include "stabground/errors.hpp"
#include "stabground/gf2.hpp"

namespace stabground {

void CliffordCircuit::validate() const {
  for (const auto& g : gates) {
    if (g.q0 >= n_qubits) throw DimensionError("gate qubit " + std::to_string(g.q0) + " out of range");
    if (g.kind == GateKind::CNOT) {
      if (g.q1 >= n_qubits) throw DimensionError("gate qubit " + std::to_string(g.q1) + " out of range");
      if (g.q0 == g.q1) throw DimensionError("CNOT control equals target");
    }
  }
}

PauliString conjugate(const PauliString& p, const Gate& g) {
  PauliString r = p;
  const std::size_t q = g.q0;
  switch (g.kind) {
    case GateKind::H: {
      bool x = p.x(q), z = p.z(q);
      r.set_x(q, z);
      r.set_z(q, x);
      if (x && z) r.add_phase(2);
      break;
    }
    case GateKind::S:
      if (p.x(q)) {
        r.set_z(q, !p.z(q));
        r.add_phase(1);
      }
      break;
    case GateKind::CNOT:
      r.set_x(g.q1, p.x(g.q1) != p.x(q));
      r.set_z(q, p.z(q) != p.z(g.q1));
      break;
    case GateKind::X:
      if (p.z(q)) r.add_phase(2);
      break;
    case GateKind::Z:
      if (p.x(q)) r.add_phase(2);
      break;
  }
  return r;
}

namespace {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::CNOT: return "CNOT";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
  }
  return "?";
}

}  // namespace

std::string format_circuit(const CliffordCircuit& c) {
  std::ostringstream os;
  for (const auto& g : c.gates) {
    os << gate_name(g.kind) << ' ' << g.q0;
    if (g.kind == GateKind::CNOT) os << ' ' << g.q1;
    os << '\n';
  }
  return os.str();
}

CliffordCircuit parse_circuit(std::string_view text, std::size_t n_qubits) {
  CliffordCircuit c;
  c.n_qubits = n_qubits;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    auto bad = [&](const std::string& why) {
      return ParseError("circuit line " + std::to_string(lineno) + ": " + why);
    };
    auto index = [&]() {
      std::string tok;
      if (!(ls >> tok)) throw bad("missing qubit index");
      std::size_t v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) throw bad("bad qubit index '" + tok + "'");
      return v;
    };
    Gate g;
    if (name == "H") g = Gate::h(index());
    else if (name == "S") g = Gate::s(index());
    else if (name == "X") g = Gate::x(index());
    else if (name == "Z") g = Gate::z(index());
    else if (name == "CNOT") {
      auto ctl = index();
      g = Gate::cnot(ctl, index());
    } else {
      throw bad("unknown gate '" + name + "'");
    }
    std::string extra;
    if (ls >> extra) throw bad("trailing token '" + extra + "'");
    c.gates.push_back(g);
  }
  c.validate();
  return c;
}

// Reduce the generators to +-Z on distinct qubits with a Clifford U, recording
// U gate by gate; the preparation circuit is X fixes followed by U^dagger.
CliffordCircuit synthesize_circuit(const GeneratorSet& gset) {
  const std::size_t n = gset.n_qubits();
  std::vector<PauliString> rows = gset.generators();
  std::vector<Gate> u;
  std::vector<bool> used(n, false);
  std::vector<std::size_t> pivot(n);

  auto emit = [&](const Gate& g) {
    u.push_back(g);
    for (auto& r : rows) r = conjugate(r, g);
  };

  for (std::size_t r = 0; r < n; ++r) {
    std::size_t pick = n, q = n;
    // a row that is already a lone Z costs nothing
    for (std::size_t k = r; k < n && pick == n; ++k) {
      if (rows[k].weight() != 1) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (rows[k].z(j) && !rows[k].x(j)) {
          pick = k;
          q = j;
        }
    }
    if (pick != n) {
      std::swap(rows[r], rows[pick]);
      for (std::size_t k = 0; k < n; ++k)
        if (k != r && rows[k].z(q)) rows[k] = multiply(rows[k], rows[r]);
      used[q] = true;
      pivot[r] = q;
      continue;
    }
    // row with X support on a free qubit, else rotate a Z into X
    for (std::size_t k = r; k < n && pick == n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        if (!used[j] && rows[k].x(j)) {
          pick = k;
          q = j;
          break;
        }
    if (pick == n) {
      for (std::size_t k = r; k < n && pick == n; ++k)
        for (std::size_t j = 0; j < n; ++j)
          if (!used[j] && rows[k].z(j)) {
            pick = k;
            q = j;
            break;
          }
      if (pick == n) throw ValidationError("generators are not independent");
      emit(Gate::h(q));
    }
    std::swap(rows[r], rows[pick]);

    for (std::size_t j = 0; j < n; ++j)
      if (j != q && !used[j] && rows[r].x(j)) emit(Gate::cnot(q, j));
    for (std::size_t j = 0; j < n; ++j)
      if (j != q && !used[j] && rows[r].z(j)) {
        emit(Gate::h(j));
        emit(Gate::cnot(q, j));
        emit(Gate::h(j));
      }
    if (rows[r].z(q)) emit(Gate::s(q));
    emit(Gate::h(q));

    for (std::size_t k = 0; k < n; ++k)
      if (k != r && rows[k].z(q)) rows[k] = multiply(rows[k], rows[r]);
    used[q] = true;
    pivot[r] = q;
  }

  CliffordCircuit c;
  c.n_qubits = n;
  for (std::size_t r = 0; r < n; ++r)
    if (rows[r].sign() < 0) c.gates.push_back(Gate::x(pivot[r]));
  for (auto it = u.rbegin(); it != u.rend(); ++it) {
    c.gates.push_back(*it);
    if (it->kind == GateKind::S) c.gates.push_back(Gate::z(it->q0));  // S^dagger = S Z
  }
  return c;
}

StateVector apply_circuit(StateVector state, const CliffordCircuit& c) {
  if (state.n_qubits != c.n_qubits)
    throw DimensionError("circuit acts on " + std::to_string(c.n_qubits) + " qubits, state has " +
                         std::to_string(state.n_qubits));
  c.validate();
  auto& a = state.amp;
  const auto dim = static_cast<std::size_t>(a.size());
  const double r2 = 1.0 / std::sqrt(2.0);
  for (const auto& g : c.gates) {
    const std::size_t m = std::size_t{1} << g.q0;
    switch (g.kind) {
      case GateKind::H:
        for (std::size_t i = 0; i < dim; ++i)
          if (!(i & m)) {
            cplx u = a[i], v = a[i | m];
            a[i] = (u + v) * r2;
            a[i | m] = (u - v) * r2;
          }
        break;
      case GateKind::S:
        for (std::size_t i = 0; i < dim; ++i)
          if (i & m) a[i] *= cplx(0, 1);
        break;
      case GateKind::X:
        for (std::size_t i = 0; i < dim; ++i)
          if (!(i & m)) std::swap(a[i], a[i | m]);
        break;
      case GateKind::Z:
        for (std::size_t i = 0; i < dim; ++i)
          if (i & m) a[i] = -a[i];
        break;
      case GateKind::CNOT: {
        const std::size_t t = std::size_t{1} << g.q1;
        for (std::size_t i = 0; i < dim; ++i)
          if ((i & m) && !(i & t)) std::swap(a[i], a[i | t]);
        break;
      }
    }
  }
  return state;
}

StateVector prepare_state(const GeneratorSet& g) {
  check_dense_cap(g.n_qubits(), kDenseCap, "state preparation");
  return apply_circuit(StateVector::basis(g.n_qubits(), 0), synthesize_circuit(g));
}

bool verify_stabilized(const StateVector& psi, const GeneratorSet& g, double tol) {
  if (psi.n_qubits != g.n_qubits()) throw DimensionError("state and generator set differ in qubit count");
  for (const auto& p : g.generators())
    if ((apply_pauli(p, psi.amp) - psi.amp).norm() > tol) return false;
  return true;
}

Tableau Tableau::identity(std::size_t n) {
  Tableau t;
  t.n_ = n;
  for (std::size_t q = 0; q < n; ++q) t.rows_.push_back(PauliString::single(n, q, 'X'));
  for (std::size_t q = 0; q < n; ++q) t.rows_.push_back(PauliString::single(n, q, 'Z'));
  return t;
}

Tableau Tableau::from_circuit(const CliffordCircuit& c) {
  c.validate();
  Tableau t = identity(c.n_qubits);
  for (const auto& g : c.gates) t.apply(g);
  return t;
}

void Tableau::apply(const Gate& g) {
  for (auto& r : rows_) r = conjugate(r, g);
}

GeneratorSet Tableau::stabilizers() const {
  return GeneratorSet(n_, std::vector<PauliString>(rows_.begin() + static_cast<std::ptrdiff_t>(n_), rows_.end()));
}

void Tableau::validate() const {
  if (rows_.size() != 2 * n_) throw ValidationError("tableau needs 2n rows");
  std::vector<gf2::BitVec> vs;
  for (const auto& r : rows_) {
    if (!r.is_hermitian()) throw ValidationError("tableau row is not Hermitian");
    vs.push_back(gf2::symplectic(r));
  }
  if (gf2::rank(vs) != 2 * n_) throw ValidationError("tableau rows are not independent");
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      if (!commutes(stabilizer(i), stabilizer(j))) throw ValidationError("stabilizer rows anticommute");
      if (!commutes(destabilizer(i), destabilizer(j))) throw ValidationError("destabilizer rows anticommute");
      if (commutes(destabilizer(i), stabilizer(j)) != (i != j))
        throw ValidationError("destabilizer " + std::to_string(i) + " pairs wrongly with stabilizer " +
                              std::to_string(j));
    }
}

}  // namespace stabground

#include "stabground/hamiltonian.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "stabground/errors.hpp"

namespace stabground {

Hamiltonian::Hamiltonian(std::size_t n_qubits, const std::vector<Term>& terms) : n_(n_qubits) {
  for (const auto& t : terms) add(t.coeff, t.pauli);
  prune();
}

void Hamiltonian::add(double coeff, const PauliString& p) {
  if (p.n_qubits() != n_)
    throw DimensionError("term has " + std::to_string(p.n_qubits()) + " qubits, hamiltonian has " +
                         std::to_string(n_));
  if (!std::isfinite(coeff)) throw ParseError("non-finite coefficient");
  double c = coeff * p.sign();
  PauliString key = p.unsigned_part();
  for (auto& t : terms_) {
    if (t.pauli == key) {
      t.coeff += c;
      prune();
      return;
    }
  }
  terms_.push_back({c, key});
  prune();
}

void Hamiltonian::prune() {
  std::erase_if(terms_, [](const Term& t) { return t.coeff == 0.0; });
}

double Hamiltonian::identity_coeff() const {
  for (const auto& t : terms_)
    if (t.pauli.is_identity_op()) return t.coeff;
  return 0.0;
}

double Hamiltonian::abs_sum() const {
  double s = 0.0;
  for (const auto& t : terms_)
    if (!t.pauli.is_identity_op()) s += std::abs(t.coeff);
  return s;
}

std::string Hamiltonian::to_text() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& t : terms_) os << t.coeff << ' ' << pauli_letters(t.pauli) << '\n';
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_coeff(std::string_view tok, int line_no) {
  std::string buf(tok);
  // tolerate U+2212 MINUS SIGN
  for (std::size_t pos; (pos = buf.find("\xE2\x88\x92")) != std::string::npos;) buf.replace(pos, 3, "-");
  std::string_view v = buf;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  double c = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), c);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || !std::isfinite(c))
    throw ParseError("line " + std::to_string(line_no) + ": malformed coefficient '" + std::string(tok) + "'");
  return c;
}

}  // namespace

Hamiltonian parse_hamiltonian(std::string_view text) {
  Hamiltonian h;
  bool have = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected '<coeff> <pauli>'");
    double c = parse_coeff(line.substr(0, sp), line_no);
    std::string_view ptxt = trim(line.substr(sp));
    if (ptxt.find_first_of(" \t") != std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) + ": trailing tokens");
    PauliString p;
    try {
      p = parse_pauli(ptxt);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!have) {
      h = Hamiltonian(p.n_qubits());
      have = true;
    } else if (p.n_qubits() != h.n_qubits()) {
      throw DimensionError("line " + std::to_string(line_no) + ": inconsistent qubit count " +
                           std::to_string(p.n_qubits()) + " (expected " + std::to_string(h.n_qubits()) + ")");
    }
    h.add(c, p);
  }
  if (!have) throw ParseError("empty hamiltonian");
  return h;
}

Hamiltonian load_hamiltonian(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open hamiltonian file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_hamiltonian(ss.str());
}

Hamiltonian tfim(int L, double lambda) {
  if (L < 2) throw DomainError("tfim needs L >= 2");
  auto n = static_cast<std::size_t>(L);
  Hamiltonian h(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    PauliString zz(n);
    zz.set_z(i, true);
    zz.set_z(i + 1, true);
    h.add(1.0, zz);
  }
  if (lambda != 0.0)
    for (std::size_t j = 0; j < n; ++j) h.add(lambda, PauliString::single(n, j, 'X'));
  return h;
}

CandidateGeneratorSet candidate_generator_set(const Hamiltonian& h) {
  CandidateGeneratorSet b;
  double scale = std::ldexp(1.0, static_cast<int>(h.n_qubits()));
  for (const auto& t : h.terms()) b.entries.emplace(t.pauli, scale * t.coeff);
  return b;
}

}  // namespace stabground

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stabground/analysis.hpp"
#include "stabground/cli.hpp"
#include "stabground/errors.hpp"
#include "stabground/gaopt.hpp"
#include "stabground/hamiltonian.hpp"
#include "stabground/mite.hpp"
#include "stabground/osgs.hpp"
#include "stabground/stabsearch.hpp"
#include "stabground/tableau.hpp"

namespace py = pybind11;
using namespace stabground;

namespace {

py::int_ big(const boost::multiprecision::cpp_int& v) {
  return py::int_(py::str(v.str()));
}

std::vector<std::string> strings(const GeneratorSet& g) { return generator_strings(g); }

GeneratorSet from_strings(const std::vector<std::string>& gens) {
  if (gens.empty()) throw ValidationError("empty generator list");
  std::vector<PauliString> ps;
  for (const auto& s : gens) ps.push_back(parse_pauli(s));
  return GeneratorSet(ps.front().n_qubits(), ps);
}

SpectralParams params(double e0, double e1, double e_th, double eps, double f0, double f1) {
  SpectralParams p{e0, e1, e_th, eps, f0, f1};
  p.validate();
  return p;
}

Eigen::VectorXcd state_from_generators(const std::vector<std::string>& gens) {
  return prepare_state(from_strings(gens)).amp;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stabilizer ground states and weak-measurement imaginary time evolution";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<SearchFailure>(m, "SearchFailure", base.ptr());

  py::class_<Hamiltonian>(m, "Hamiltonian")
      .def(py::init([](const std::string& text) { return parse_hamiltonian(text); }), py::arg("text"))
      .def_property_readonly("n_qubits", &Hamiltonian::n_qubits)
      .def_property_readonly("terms",
                             [](const Hamiltonian& h) {
                               std::vector<std::pair<double, std::string>> out;
                               for (const auto& t : h.terms()) out.emplace_back(t.coeff, pauli_letters(t.pauli));
                               return out;
                             })
      .def("abs_sum", &Hamiltonian::abs_sum)
      .def("to_text", &Hamiltonian::to_text)
      .def("matrix", [](const Hamiltonian& h) { return hamiltonian_matrix(h); })
      .def("__len__", &Hamiltonian::size)
      .def("__repr__", [](const Hamiltonian& h) {
        return "<Hamiltonian n_qubits=" + std::to_string(h.n_qubits()) + " terms=" + std::to_string(h.size()) + ">";
      });

  m.def("tfim", &tfim, py::arg("L"), py::arg("lam"));
  m.def("commutes", [](const std::string& a, const std::string& b) { return commutes(parse_pauli(a), parse_pauli(b)); });
  // (k, letters) with product = i^k * letters
  m.def("multiply", [](const std::string& a, const std::string& b) {
    auto p = multiply(parse_pauli(a), parse_pauli(b));
    return py::make_tuple(p.sign_exp(), pauli_letters(p));
  });

  m.def("stabilizer_state_count", &stabilizer_state_count, py::arg("n"));
  m.def(
      "enumerate_generator_sets",
      [](std::size_t n, std::size_t cap) {
        std::vector<std::vector<std::string>> out;
        for_each_generator_set(n, [&](const GeneratorSet& g) { out.push_back(strings(g)); }, cap);
        return out;
      },
      py::arg("n"), py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "group_energy", [](const std::vector<std::string>& gens, const Hamiltonian& h) {
        return group_energy(from_strings(gens), h).energy;
      },
      py::arg("generators"), py::arg("h"));
  m.def(
      "find_min_groups",
      [](const Hamiltonian& h, std::size_t cap) {
        auto r = find_min_groups(h, cap);
        std::vector<std::vector<std::string>> groups;
        for (const auto& g : r.groups) groups.push_back(strings(g));
        return py::make_tuple(r.e_min, groups);
      },
      py::arg("h"), py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "degeneracy_count", [](int n, int l) { return big(degeneracy_count(n, l)); }, py::arg("n"), py::arg("l"));

  m.def(
      "solve_osgs",
      [](const Hamiltonian& h, const std::string& mode, std::uint64_t seed, std::size_t cap, bool fidelity) {
        OsgsOptions opt;
        if (mode == "exact") opt.mode = SearchMode::exact;
        else if (mode == "ga") opt.mode = SearchMode::ga;
        else if (mode != "auto") throw ConfigError("mode must be auto, exact or ga");
        opt.seed = seed;
        opt.cap = cap;
        opt.fidelity = fidelity;
        auto r = solve_osgs(h, opt);
        py::dict d;
        d["mode"] = r.mode;
        d["e_min"] = r.e_min;
        d["generators"] = strings(r.chosen);
        d["fixed_rank"] = r.fixed_rank;
        d["degeneracy_count"] = big(r.degeneracy);
        std::vector<std::string> sources;
        for (auto s : r.sources) sources.push_back(to_string(s));
        d["sources"] = sources;
        d["fidelity"] = r.fidelity ? py::object(py::float_(*r.fidelity)) : py::object(py::none());
        d["e0"] = r.e0 ? py::object(py::float_(*r.e0)) : py::object(py::none());
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("h"), py::arg("mode") = "auto", py::arg("seed") = 1, py::arg("cap") = kDefaultEnumerationCap,
      py::arg("fidelity") = true);

  m.def(
      "preparation_circuit",
      [](const std::vector<std::string>& gens) { return format_circuit(synthesize_circuit(from_strings(gens))); },
      py::arg("generators"));
  m.def("prepare_state", &state_from_generators, py::arg("generators"));

  m.def(
      "eigenvalues", [](const Hamiltonian& h) { return eigensolve(h).values; }, py::arg("h"));

  m.def(
      "run_mite",
      [](const Hamiltonian& h, const Eigen::VectorXcd& initial, int trials, int steps, std::uint64_t seed,
         std::optional<double> threshold, std::optional<double> epsilon, const std::string& reset_policy,
         int stride, int threads) {
        auto eig = eigensolve(h);
        double e_th = threshold ? *threshold : solve_osgs(h, OsgsOptions{}).e_min;
        auto cfg = MiteConfig::defaults_for(h, e_th);
        if (epsilon) cfg.epsilon = *epsilon;
        cfg.trials = trials;
        cfg.max_steps = steps;
        cfg.rng_seed = seed;
        cfg.reset_policy = parse_reset_policy(reset_policy);
        cfg.record_stride = stride;
        cfg.threads = threads;
        StateVector psi;
        psi.n_qubits = h.n_qubits();
        psi.amp = initial;
        EnsembleResult r;
        {
          py::gil_scoped_release release;
          r = run_ensemble(eig, [&](int) { return psi; }, cfg);
        }
        py::dict d;
        d["steps"] = r.steps;
        d["mean_fidelity"] = r.mean_fidelity;
        d["stderr"] = r.stderr_fidelity;
        d["reset_rate"] = r.reset_rate;
        d["min_fidelity"] = r.min_fidelity;
        d["total_resets"] = r.total_resets;
        d["k_prime"] = r.k_prime;
        d["epsilon"] = cfg.epsilon;
        d["threshold"] = e_th;
        return d;
      },
      py::arg("h"), py::arg("initial"), py::arg("trials") = 100, py::arg("steps") = 1000, py::arg("seed") = 1,
      py::arg("threshold") = py::none(), py::arg("epsilon") = py::none(), py::arg("reset_policy") = "appendix_c",
      py::arg("stride") = 1, py::arg("threads") = 0);

  py::module_ an = m.def_submodule("analysis", "Step-count and error formulas");
  auto sp = [](auto f) {
    return [f](double e0, double e1, double e_th, double eps, double f0, double f1) {
      return f(params(e0, e1, e_th, eps, f0, f1));
    };
  };
#define SG_PARAMS py::arg("e0"), py::arg("e1"), py::arg("e_th"), py::arg("epsilon"), py::arg("f0"), py::arg("f1")
  an.def("k_min", sp([](const SpectralParams& p) { return k_min(p); }), SG_PARAMS);
  an.def("k_prime", sp([](const SpectralParams& p) { return k_prime(p); }), SG_PARAMS);
  an.def("t_fail", sp([](const SpectralParams& p) { return t_fail(p, k_prime(p)); }), SG_PARAMS);
  an.def("t_total", sp([](const SpectralParams& p) { return t_total(p).total; }), SG_PARAMS);
  an.def("convergence_rate", sp([](const SpectralParams& p) { return convergence_rate(p); }), SG_PARAMS);
#undef SG_PARAMS
  an.def("k_prime_exact_limit", &k_prime_exact_limit, py::arg("epsilon"), py::arg("e0"));

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}

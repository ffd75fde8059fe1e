#include "stabground/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "stabground/analysis.hpp"
#include "stabground/errors.hpp"
#include "stabground/mite.hpp"
#include "stabground/osgs.hpp"
#include "stabground/tableau.hpp"

namespace stabground::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Source {
  std::string path;
  std::string tfim;

  void add_to(CLI::App& app) {
    auto* a = app.add_option("--hamiltonian", path, "Hamiltonian file: one 'coeff PAULI' term per line");
    auto* b = app.add_option("--tfim", tfim, "Transverse-field Ising chain 'L,lambda'");
    a->excludes(b);
    b->excludes(a);
  }

  Hamiltonian load() const {
    if (!path.empty()) return load_hamiltonian(path);
    if (tfim.empty()) throw ConfigError("one of --hamiltonian or --tfim is required");
    auto comma = tfim.find(',');
    if (comma == std::string::npos) throw ParseError("--tfim expects 'L,lambda'");
    try {
      std::size_t used = 0;
      int l = std::stoi(tfim.substr(0, comma), &used);
      if (used != comma) throw ParseError("");
      std::string lam_text = tfim.substr(comma + 1);
      double lam = std::stod(lam_text, &used);
      if (used != lam_text.size()) throw ParseError("");
      return stabground::tfim(l, lam);
    } catch (const std::logic_error&) {
      throw ParseError("--tfim expects 'L,lambda', got '" + tfim + "'");
    } catch (const ParseError&) {
      throw ParseError("--tfim expects 'L,lambda', got '" + tfim + "'");
    }
  }
};

struct SearchOpts {
  bool exact = false, ga = false;
  std::size_t cap = kDefaultEnumerationCap;
  std::uint64_t seed = 1;
  int pop = 0, gens = 0;

  void add_to(CLI::App& app) {
    auto* e = app.add_flag("--exact", exact, "Exhaustive search (n <= cap)");
    auto* g = app.add_flag("--ga", ga, "Genetic clique search plus completion");
    e->excludes(g);
    app.add_option("--cap", cap, "Enumeration cap for exact search")->check(CLI::Range(1, 6));
    app.add_option("--seed", seed, "Random seed");
    app.add_option("--pop", pop, "GA population size")->check(CLI::PositiveNumber);
    app.add_option("--gens", gens, "GA generations")->check(CLI::PositiveNumber);
  }

  OsgsOptions options() const {
    OsgsOptions o;
    o.mode = exact ? SearchMode::exact : ga ? SearchMode::ga : SearchMode::automatic;
    o.cap = cap;
    o.seed = seed;
    if (pop) o.population = pop;
    if (gens) o.generations = gens;
    return o;
  }

  json to_json() const {
    json j;
    j["mode"] = exact ? "exact" : ga ? "ga" : "auto";
    j["cap"] = cap;
    j["seed"] = seed;
    j["pop"] = pop;
    j["gens"] = gens;
    return j;
  }

  void from_json(const json& j) {
    std::string m = j.at("mode");
    exact = m == "exact";
    ga = m == "ga";
    cap = j.at("cap");
    seed = j.at("seed");
    pop = j.at("pop");
    gens = j.at("gens");
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json osgs_json(const Hamiltonian& h, const OsgsResult& r) {
  json j;
  j["mode"] = r.mode;
  j["n_qubits"] = h.n_qubits();
  j["e_min"] = r.e_min;
  j["generators"] = generator_strings(r.chosen);
  json sets = json::array();
  for (const auto& g : r.optimal) sets.push_back(generator_strings(g));
  j["optimal_sets"] = sets;
  if (r.mode == "exact") j["minimizers"] = r.minimizers;
  j["fixed_rank"] = r.fixed_rank;
  j["degeneracy_count"] = r.degeneracy.str();
  if (r.clique) {
    json c;
    json terms = json::array();
    for (auto t : r.clique->selected_terms) {
      const auto& term = h.terms()[t];
      terms.push_back({{"index", t}, {"pauli", pauli_letters(term.pauli)}, {"coeff", term.coeff},
                       {"sign", r.clique->signs.at(t)}});
    }
    c["terms"] = terms;
    c["energy"] = r.clique->energy;
    c["rank"] = r.clique->rank;
    c["is_maximal"] = r.clique->is_maximal;
    j["clique"] = c;
    json src = json::array();
    for (auto s : r.sources) src.push_back(to_string(s));
    j["completion"] = {{"sources", src}};
  }
  if (r.fidelity) {
    j["fidelity"] = *r.fidelity;
    j["e0"] = *r.e0;
    j["fidelity_convention"] = "squared_projection";
  }
  j["warnings"] = r.warnings;
  return j;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + p.string());
  f << text;
  if (!f) throw ConfigError("failed writing " + p.string());
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

// ---------------------------------------------------------------- osgs

struct OsgsCmd {
  Source src;
  SearchOpts search;
  std::string circuit_path;
  bool no_fidelity = false;
};

int cmd_osgs(const OsgsCmd& c, bool as_json, std::ostream& out) {
  auto h = c.src.load();
  auto opt = c.search.options();
  opt.fidelity = !c.no_fidelity;
  auto r = solve_osgs(h, opt);
  if (!c.circuit_path.empty()) write_file(c.circuit_path, format_circuit(synthesize_circuit(r.chosen)));
  if (as_json) {
    out << osgs_json(h, r).dump(2) << '\n';
    return kOk;
  }
  out << "mode: " << r.mode << '\n';
  out << "n_qubits: " << h.n_qubits() << '\n';
  out << "E_min^S: " << short_fmt(r.e_min) << '\n';
  out << "generators: " << format_generator_set(r.chosen) << '\n';
  if (r.optimal.size() > 1) {
    out << "optimal sets: " << r.optimal.size() << '\n';
    for (const auto& g : r.optimal) out << "  " << format_generator_set(g) << '\n';
  }
  if (r.mode == "exact") out << "minimizers: " << r.minimizers << '\n';
  out << "degeneracy_count: " << r.degeneracy.str() << " (fixed rank " << r.fixed_rank << ")\n";
  if (r.fidelity) out << "fidelity: " << short_fmt(*r.fidelity) << " (E0 " << short_fmt(*r.e0) << ")\n";
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  return kOk;
}

// ---------------------------------------------------------------- mite

struct MiteCmd {
  Source src;
  SearchOpts search;
  int trials = 1000;
  int steps = 1000;
  std::string init = "osgs";
  std::string out_dir;
  std::string reset_policy = "appendix_c";
  std::string sampling = "born";
  std::optional<double> epsilon, threshold, gap_guess;
  int stride = 1;
  int threads = 0;
  bool trajectories = false;
  bool stamp = false;
  std::string replay;
};

json mite_config_json(const MiteCmd& c) {
  json j;
  j["trials"] = c.trials;
  j["steps"] = c.steps;
  j["init"] = c.init;
  j["reset_policy"] = c.reset_policy;
  j["sampling"] = c.sampling;
  j["epsilon"] = c.epsilon ? json(*c.epsilon) : json(nullptr);
  j["threshold"] = c.threshold ? json(*c.threshold) : json(nullptr);
  j["gap_guess"] = c.gap_guess ? json(*c.gap_guess) : json(nullptr);
  j["stride"] = c.stride;
  j["trajectories"] = c.trajectories;
  j["search"] = c.search.to_json();
  return j;
}

void mite_config_from_json(MiteCmd& c, const json& j) {
  c.trials = j.at("trials");
  c.steps = j.at("steps");
  c.init = j.at("init");
  c.reset_policy = j.at("reset_policy");
  c.sampling = j.at("sampling");
  auto opt = [&](const char* k) -> std::optional<double> {
    return j.at(k).is_null() ? std::nullopt : std::optional<double>(j.at(k).get<double>());
  };
  c.epsilon = opt("epsilon");
  c.threshold = opt("threshold");
  c.gap_guess = opt("gap_guess");
  c.stride = j.at("stride");
  c.trajectories = j.at("trajectories");
  c.search.from_json(j.at("search"));
}

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

int cmd_mite(MiteCmd c, bool as_json, std::ostream& out) {
  Hamiltonian h;
  if (!c.replay.empty()) {
    json m = parse_json_text(read_file(c.replay), "manifest");
    try {
      h = parse_hamiltonian(m.at("hamiltonian").get<std::string>());
      mite_config_from_json(c, m.at("config"));
      if (m.at("hamiltonian_digest") != hamiltonian_digest(h)) throw ValidationError("manifest digest mismatch");
      c.search.seed = m.at("seed");
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
  } else {
    h = c.src.load();
  }
  if (c.out_dir.empty()) throw ConfigError("--out is required");
  if (c.init != "osgs" && c.init != "zeros" && c.init != "random")
    throw ConfigError("--init must be osgs, zeros or random");
  const std::size_t n = h.n_qubits();
  check_dense_cap(n, kDenseCap, "mite");

  auto sopt = c.search.options();
  sopt.fidelity = false;
  auto osgs = solve_osgs(h, sopt);
  auto eig = eigensolve(h);

  MiteConfig cfg = MiteConfig::defaults_for(h, c.threshold.value_or(osgs.e_min));
  if (c.epsilon) cfg.epsilon = *c.epsilon;
  if (c.gap_guess) cfg.gap_guess = *c.gap_guess;
  cfg.max_steps = c.steps;
  cfg.trials = c.trials;
  cfg.rng_seed = c.search.seed;
  cfg.reset_policy = parse_reset_policy(c.reset_policy);
  cfg.sampling = parse_sampling(c.sampling);
  cfg.record_stride = c.stride;
  cfg.threads = c.threads;
  cfg.keep_trajectories = c.trajectories;
  cfg.validate(eig);

  InitialStateFn init;
  if (c.init == "osgs") {
    auto psi = prepare_state(osgs.chosen);
    init = [psi](int) { return psi; };
  } else if (c.init == "zeros") {
    auto psi = StateVector::basis(n, 0);
    init = [psi](int) { return psi; };
  } else {
    init = random_product_states(n, c.search.seed);
  }
  auto res = run_ensemble(eig, init, cfg);

  fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());

  std::string csv = "step,mean_fidelity,stderr,reset_rate\n";
  for (std::size_t i = 0; i < res.steps.size(); ++i)
    csv += std::to_string(res.steps[i]) + ',' + fmt(res.mean_fidelity[i]) + ',' + fmt(res.stderr_fidelity[i]) + ',' +
           fmt(res.reset_rate[i]) + '\n';
  write_file(dir / "curve.csv", csv);

  if (c.trajectories) {
    std::string lines;
    for (std::size_t t = 0; t < res.trajectories.size(); ++t) {
      const auto& tr = res.trajectories[t];
      json j;
      j["trial"] = t;
      j["initial_fidelity"] = tr.initial_fidelity;
      j["converged_at"] = tr.converged_at ? json(*tr.converged_at) : json(nullptr);
      j["resets"] = tr.resets;
      j["min_fidelity"] = tr.min_fidelity;
      json st = json::array();
      for (const auto& s : tr.steps) st.push_back({s.step, s.outcome, s.fidelity, s.energy, s.reset});
      j["steps"] = st;
      lines += j.dump() + '\n';
    }
    write_file(dir / "trajectories.jsonl", lines);
  }

  json m;
  m["tool"] = "stabground";
  m["version"] = kVersion;
  m["command"] = "mite";
  m["config"] = mite_config_json(c);
  m["seed"] = c.search.seed;
  m["hamiltonian"] = h.to_text();
  m["hamiltonian_digest"] = hamiltonian_digest(h);
  m["n_qubits"] = n;
  m["search_mode"] = osgs.mode;
  m["generators"] = generator_strings(osgs.chosen);
  m["e_min_stabilizer"] = osgs.e_min;
  m["epsilon"] = cfg.epsilon;
  m["threshold"] = cfg.threshold_energy;
  m["gap_guess"] = cfg.gap_guess;
  m["k_prime"] = std::isfinite(res.k_prime) ? json(res.k_prime) : json("inf");
  m["k_prime_note"] = "heuristic: evaluated at threshold and threshold + gap_guess, not the true spectrum";
  m["fidelity_convention"] = "squared_projection";
  m["e0"] = eig.e0();
  m["ground_space_dim"] = eig.ground_space_dim;
  m["initial_fidelity_osgs"] = eig.ground_fidelity(prepare_state(osgs.chosen).amp);
  m["outputs"] = {{"curve.csv", git_blob_sha1(csv)}};
  if (c.stamp) m["timestamp_utc"] = utc_now();
  write_file(dir / "manifest.json", m.dump(2) + '\n');

  // summary
  std::vector<int> conv;
  for (const auto& x : res.converged_at)
    if (x) conv.push_back(*x);
  std::sort(conv.begin(), conv.end());
  auto quant = [&](double q) -> json {
    if (conv.empty()) return nullptr;
    auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(c.trials))) - 1;
    return idx < conv.size() ? json(conv[idx]) : json(nullptr);
  };
  double rate = c.steps > 0 ? static_cast<double>(res.total_resets) / (static_cast<double>(c.trials) * c.steps) : 0.0;
  json s;
  s["final_mean_fidelity"] = res.mean_fidelity.back();
  s["final_stderr"] = res.stderr_fidelity.back();
  s["min_fidelity"] = res.min_fidelity;
  s["reset_rate"] = rate;
  s["converged_trials"] = conv.size();
  s["convergence_steps"] = {{"p50", quant(0.5)}, {"p90", quant(0.9)}, {"max", conv.empty() ? json(nullptr) : json(conv.back())}};
  s["out"] = dir.string();
  if (as_json) {
    out << s.dump(2) << '\n';
  } else {
    out << "final mean fidelity: " << short_fmt(res.mean_fidelity.back()) << " +- "
        << short_fmt(res.stderr_fidelity.back()) << '\n';
    out << "min fidelity: " << short_fmt(res.min_fidelity) << '\n';
    out << "reset rate: " << short_fmt(rate) << " per step\n";
    out << "converged: " << conv.size() << '/' << c.trials;
    if (!conv.empty()) out << " (p50 " << quant(0.5).dump() << ", p90 " << quant(0.9).dump() << ", max " << conv.back() << ")";
    out << '\n' << "wrote " << (dir / "curve.csv").string() << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const std::string& params_arg, std::optional<long long> k_arg, std::ostream& out) {
  std::string text = params_arg;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') text = read_file(params_arg);
  json in = parse_json_text(text, "params");
  SpectralParams p;
  long long k = 0;
  try {
    p.e0 = in.at("E0");
    p.e1 = in.at("E1");
    p.e_th = in.at("E_th");
    p.epsilon = in.at("epsilon");
    p.f0 = in.at("F0");
    p.f1 = in.value("F1", 0.0);
    if (in.contains("k")) k = in.at("k");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  if (k_arg) k = *k_arg;
  p.validate();

  json rep;
  rep["params"] = in;
  json errors = json::object();
  auto attempt = [&](const char* key, auto&& fn) {
    try {
      rep[key] = fn();
    } catch (const DomainError& e) {
      rep[key] = nullptr;
      errors[key] = e.what();
    }
  };
  attempt("k_min", [&] { return json(k_min(p)); });
  double kp = std::numeric_limits<double>::quiet_NaN();
  attempt("k_prime", [&] {
    kp = k_prime(p);
    return json(kp);
  });
  attempt("k_prime_exact_limit", [&] { return json(k_prime_exact_limit(p.epsilon, p.e0)); });
  attempt("t_fail", [&] {
    if (std::isnan(kp)) throw DomainError("needs k_prime");
    return json(t_fail(p, kp));
  });
  attempt("t_total", [&] {
    auto t = t_total(p);
    return json{{"fail_part", t.fail_part}, {"k_min", t.k_min}, {"total", t.total}};
  });
  attempt("convergence_error", [&] {
    auto e = convergence_error(p, k);
    return json{{"k", k}, {"raw", e.raw}, {"clamped", e.clamped}, {"rate_per_step", convergence_rate(p) + 0.0}};
  });
  if (!errors.empty()) rep["errors"] = errors;
  out << rep.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- enumerate

int cmd_enumerate(std::size_t n, std::size_t cap, bool count_only, bool as_json, std::ostream& out) {
  if (n == 0) throw DimensionError("n must be >= 1");
  if (n > cap) throw CapacityError("n = " + std::to_string(n) + " exceeds the cap of " + std::to_string(cap));
  if (count_only) {
    if (as_json)
      out << json{{"n", n}, {"count", stabilizer_state_count(n)}}.dump(2) << '\n';
    else
      out << stabilizer_state_count(n) << '\n';
    return kOk;
  }
  json sets = json::array();
  std::size_t count = 0;
  for_each_generator_set(
      n,
      [&](const GeneratorSet& g) {
        ++count;
        if (as_json)
          sets.push_back(format_generator_set(g));
        else
          out << format_generator_set(g) << '\n';
      },
      cap);
  if (as_json) out << json{{"n", n}, {"count", count}, {"sets", sets}}.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- errors

int code_for(const std::exception& e, std::string& type) {
  if (dynamic_cast<const CapacityError*>(&e)) {
    type = "capacity_error";
    return kCapacityError;
  }
  if (dynamic_cast<const ParseError*>(&e)) type = "parse_error";
  else if (dynamic_cast<const ConfigError*>(&e)) type = "config_error";
  else if (dynamic_cast<const DimensionError*>(&e)) type = "dimension_error";
  else if (dynamic_cast<const DomainError*>(&e)) type = "domain_error";
  else if (dynamic_cast<const ValidationError*>(&e)) type = "validation_error";
  else {
    type = dynamic_cast<const SearchFailure*>(&e) ? "search_failure" : "internal_error";
    return kInternalError;
  }
  return kUserError;
}

int report(const std::string& type, const std::string& msg, int code, bool as_json, std::ostream& out,
           std::ostream& err) {
  if (as_json)
    out << json{{"error", {{"type", type}, {"message", msg}}}, {"exit_code", code}}.dump(2) << '\n';
  else
    err << "error: " << msg << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  bool as_json = std::find(args.begin(), args.end(), "--json") != args.end();

  CLI::App app{"Stabilizer ground states and measurement-based imaginary time evolution", "stabground"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json_flag = false;
  app.add_flag("--json", json_flag, "Machine-readable output and errors");
  app.set_version_flag("--version", std::string("stabground ") + kVersion);

  OsgsCmd osgs;
  auto* s_osgs = app.add_subcommand("osgs", "Find the optimal stabilizer ground state");
  osgs.src.add_to(*s_osgs);
  osgs.search.add_to(*s_osgs);
  s_osgs->add_option("--emit-circuit", osgs.circuit_path, "Write the preparation circuit here");
  s_osgs->add_flag("--no-fidelity", osgs.no_fidelity, "Skip the exact eigensolve");

  MiteCmd mite;
  auto* s_mite = app.add_subcommand("mite", "Run a weak-measurement ensemble");
  mite.src.add_to(*s_mite);
  mite.search.add_to(*s_mite);
  s_mite->add_option("--trials", mite.trials, "Number of trajectories")->check(CLI::PositiveNumber);
  s_mite->add_option("--steps", mite.steps, "Measurements per trajectory")->check(CLI::NonNegativeNumber);
  s_mite->add_option("--init", mite.init, "Initial state: osgs, zeros or random");
  s_mite->add_option("--out", mite.out_dir, "Output directory");
  s_mite->add_option("--reset-policy", mite.reset_policy, "appendix_c, sequential or none");
  s_mite->add_option("--sampling", mite.sampling, "born or threshold");
  s_mite->add_option("--epsilon", mite.epsilon, "Measurement strength");
  s_mite->add_option("--threshold", mite.threshold, "Energy threshold (default: stabilizer energy)");
  s_mite->add_option("--gap-guess", mite.gap_guess, "Gap assumed when evaluating k'");
  s_mite->add_option("--stride", mite.stride, "Record every n-th step")->check(CLI::PositiveNumber);
  s_mite->add_option("--threads", mite.threads, "Worker threads (default: STABGROUND_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  s_mite->add_flag("--trajectories", mite.trajectories, "Also write trajectories.jsonl");
  s_mite->add_flag("--stamp", mite.stamp, "Record a UTC timestamp in the manifest");
  s_mite->add_option("--replay", mite.replay, "Re-run the configuration stored in a manifest");

  std::string params;
  std::optional<long long> k_arg;
  auto* s_an = app.add_subcommand("analyze", "Evaluate the convergence and cost formulas");
  s_an->add_option("--params", params, "JSON file or inline JSON object")->required();
  s_an->add_option("--k", k_arg, "Step count for the convergence error");

  std::size_t en_n = 1, en_cap = kDefaultEnumerationCap;
  bool en_count = false;
  auto* s_en = app.add_subcommand("enumerate", "List every stabilizer generator set");
  s_en->add_option("--n", en_n, "Number of qubits")->required();
  s_en->add_option("--cap", en_cap, "Enumeration cap")->check(CLI::Range(1, 6));
  s_en->add_flag("--count", en_count, "Print only the count");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "stabground " << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report("usage_error", e.what(), kUserError, as_json, out, err);
  }
  as_json = as_json || json_flag;

  try {
    if (s_osgs->parsed()) return cmd_osgs(osgs, as_json, out);
    if (s_mite->parsed()) return cmd_mite(mite, as_json, out);
    if (s_an->parsed()) return cmd_analyze(params, k_arg, out);
    if (s_en->parsed()) return cmd_enumerate(en_n, en_cap, en_count, as_json, out);
  } catch (const std::exception& e) {
    std::string type;
    int code = code_for(e, type);
    return report(type, e.what(), code, as_json, out, err);
  }
  return report("usage_error", "no subcommand", kUserError, as_json, out, err);
}

}  // namespace stabground::cli

#include "cheegerlab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "cheegerlab/error.hpp"
#include "cheegerlab/io.hpp"

namespace cheegerlab {

namespace {

using io::json;

struct Config {
  std::string command;
  std::string bank;
  std::string signal;
  std::string field = "real";
  std::string strategy = "exhaustive";
  std::string mode = "kernel";
  std::string bound = "auto";
  std::uint64_t budget = std::uint64_t{1} << 26;
  double tol = 1e-10;
  std::uint64_t seed = 20240601;
  std::size_t threads = 1;
  std::size_t restarts = 32;
  std::size_t samples = 300;
  std::string out;
  std::string csv;
  std::string save_bank;
  std::string save_signal;
  std::string emit;
  std::string parts;
  std::string signs;
  std::string spec;
  std::string shifts;
  bool expert = false;
  bool require_si = false;
  std::size_t n = 256;
  double eps = 0.05;
  double overlap = 0.25;
  double sigma = 1.0;
};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::parse, what); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::size_t to_size(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    config_error("expected a nonnegative integer, got '" + s + "'");
  }
}

long long to_ll(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    config_error("expected an integer, got '" + s + "'");
  }
}

double to_real(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    config_error("expected a number, got '" + s + "'");
  }
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

FilterBank make_bank(const Config& c) {
  if (c.bank.empty()) config_error("--bank is required");
  const auto p = split(c.bank, ':');
  const std::string& kind = p[0];
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (p.size() < lo + 1 || p.size() > hi + 1) config_error("wrong number of parameters in bank spec '" + c.bank + "'");
  };
  if (kind == "shannon" || kind == "shannon-nolow") {
    arity(1, 1);
    return build_shannon(to_size(p[1]), kind == "shannon");
  }
  if (kind == "overlap" || kind == "overlap-nolow" || kind == "overlap-literal") {
    arity(2, 2);
    return build_overlapping_shannon(to_size(p[1]), to_real(p[2]), kind != "overlap-nolow", kind == "overlap-literal");
  }
  if (kind == "random") {
    arity(3, 5);
    const Field f = p.size() > 4 ? field_from_string(p[4]) : field_from_string(c.field);
    const std::size_t cover = p.size() > 5 ? to_size(p[5]) : 2;
    return build_random_partition(to_size(p[1]), to_size(p[2]), f, to_size(p[3]), cover);
  }
  if (kind == "identity") {
    arity(1, 1);
    return build_identity(to_size(p[1]));
  }
  if (kind == "deltas") {
    arity(1, 1);
    return build_frequency_deltas(to_size(p[1]));
  }
  if (kind == "zero") {
    arity(1, 1);
    const auto n = to_size(p[1]);
    if (n == 0) config_error("bank order must be positive");
    return build_custom({"zero"}, {Spectrum(CVector(n, cplx(0.0, 0.0)))}, {1.0}, Field::real);
  }
  return io::bank_from_json(io::parse_json(io::read_file(c.bank)));
}

std::size_t label_of(const FilterBank& bank, const std::string& s) {
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
    const auto l = to_size(s);
    if (l >= bank.size()) throw Error(ErrorKind::invalid_spec, "label index " + s + " out of range");
    return l;
  }
  return bank.index_of(s);
}

Signal make_signal(const Config& c, const FilterBank& bank) {
  if (c.signal.empty()) config_error("--signal is required");
  const auto p = split(c.signal, ':');
  const std::string& kind = p[0];
  const Field field = field_from_string(c.field);
  if (kind == "random") {
    if (p.size() < 2 || p.size() > 3) config_error("random signal spec is random:N[:seed]");
    return random_signal(to_size(p[1]), field, p.size() > 2 ? to_size(p[2]) : c.seed);
  }
  if (kind == "delta") {
    if (p.size() != 3) config_error("delta signal spec is delta:N:k");
    const auto n = to_size(p[1]), k = to_size(p[2]);
    if (k >= n) config_error("delta position out of range");
    return Signal::delta(n, k, Field::real);
  }
  if (kind == "zero") {
    if (p.size() != 2) config_error("zero signal spec is zero:N");
    return Signal::zeros(to_size(p[1]), Field::real);
  }
  if (kind == "bands") {
    if (p.size() != 2) config_error("band signal spec is bands:l1,l2,...");
    Signal s = Signal::zeros(bank.n(), Field::real);
    for (const auto& l : split(p[1], ',')) s = add(s, bank.filter(label_of(bank, l)));
    return s;
  }
  if (kind == "bump") {
    if (p.size() < 2 || p.size() > 3) config_error("bump signal spec is bump:N[:sigma]");
    return localized_bump(to_size(p[1]), p.size() > 2 ? to_real(p[2]) : c.sigma);
  }
  if (kind == "packet") return band_interior_packet(bank);
  const auto text = io::read_file(c.signal);
  if (has_suffix(c.signal, ".csv")) return io::signal_from_csv(text);
  return io::signal_from_json(io::parse_json(text));
}

SearchOptions search_options(const Config& c) {
  SearchOptions o;
  o.budget = c.budget;
  o.restarts = c.restarts;
  o.seed = c.seed;
  o.threads = c.threads;
  return o;
}

void validate(const Config& c) {
  if (!(c.tol > 0.0)) config_error("--tol must be positive");
  if (c.budget < 1) config_error("--budget must be at least 1");
  if (c.threads < 1) config_error("--threads must be at least 1");
  if (!(c.eps > 0.0)) config_error("--eps must be positive");
  field_from_string(c.field);
  strategy_from_string(c.strategy);
  if (c.mode != "kernel" && c.mode != "graph") config_error("--mode must be kernel or graph");
  if (c.bound != "auto" && c.bound != "real" && c.bound != "temporal") config_error("--bound must be auto, real or temporal");
}

void save_inputs(const Config& c, const FilterBank* bank, const Signal* signal) {
  if (!c.save_bank.empty() && bank) io::write_file(c.save_bank, io::to_json(*bank).dump() + "\n");
  if (!c.save_signal.empty() && signal) {
    io::write_file(c.save_signal, has_suffix(c.save_signal, ".csv") ? io::signal_to_csv(*signal)
                                                                      : io::to_json(*signal).dump() + "\n");
  }
}

json cmd_check(const Config& c, int& code) {
  const auto bank = make_bank(c);
  save_inputs(c, &bank, nullptr);
  const auto cal = check_calderon(bank, c.tol);
  const auto si = check_spectral_injectivity(bank);
  code = cal.satisfied && (!c.require_si || si.full_rank) ? exit_ok : exit_check_failed;
  return {{"command", "check"},
          {"n", bank.n()},
          {"labels", bank.labels()},
          {"field", to_string(bank.field())},
          {"calderon", io::to_json(cal)},
          {"injectivity", io::to_json(si)},
          {"passed", code == exit_ok}};
}

json cmd_transform(const Config& c) {
  const auto bank = make_bank(c);
  const auto f = make_signal(c, bank);
  save_inputs(c, &bank, &f);
  const auto F = analyze(bank, f);
  const double fn = norm(f);
  const double defect = fn > 0.0 ? std::abs(norm(F) - fn) / fn : 0.0;
  const double inv = fn > 0.0 ? norm(subtract(synthesize(bank, F), f)) / fn : 0.0;
  return {{"command", "transform"},
          {"coefficients", io::to_json(F)},
          {"isometry_defect", io::number(defect)},
          {"inversion_residual", io::number(inv)}};
}

json cmd_cheeger(const Config& c) {
  const auto bank = make_bank(c);
  const auto f = make_signal(c, bank);
  save_inputs(c, &bank, &f);
  const Strategy strategy = strategy_from_string(c.strategy);
  if (c.mode == "graph") {
    const auto g = build_graph(bank, f, GraphOptions{c.tol});
    if (!c.csv.empty()) io::write_file(c.csv, io::graph_edges_csv(g));
    return {{"command", "cheeger"},
            {"mode", "graph"},
            {"result", io::to_json(graph_cheeger(g, strategy, search_options(c)))},
            {"graph", io::to_json(g)}};
  }
  KernelOperator k(bank);
  const auto F = analyze(bank, f);
  return {{"command", "cheeger"},
          {"mode", "kernel"},
          {"field", to_string(problem_field(k, F))},
          {"result", io::to_json(kernel_cheeger(k, F, strategy, search_options(c)))}};
}

json cmd_bounds(const Config& c) {
  const auto bank = make_bank(c);
  const auto f = make_signal(c, bank);
  save_inputs(c, &bank, &f);
  StabilityOptions o;
  o.samples = c.samples;
  o.seed = c.seed;
  o.search = search_options(c);
  o.graph.tol = c.tol;
  auto rep = empirical_stability(bank, f, o);
  if (c.bound == "real") {
    rep.upper_bound = stability_upper_bound_real(std::clamp(rep.cheeger.value, 0.0, 1.0), rep.field);
    rep.upper_source = "cheeger";
    if (!rep.cheeger.certified) throw Error(ErrorKind::inapplicable_bound, "the real upper bound needs a certified Cheeger value");
  } else if (c.bound == "temporal") {
    rep.upper_bound = complex_upper_bound(rep.max_degree, rep.temporal_connectivity);
    rep.upper_source = "temporal_graph";
  }
  json j = io::to_json(rep);
  j["command"] = "bounds";
  return j;
}

AmbiguitySpec ambiguity_spec(const Config& c, const FilterBank& bank, const EquivalenceDecomposition& d) {
  if (!c.spec.empty()) return io::spec_from_json(io::parse_json(io::read_file(c.spec)), bank);
  AmbiguitySpec spec;
  if (c.parts.empty()) {
    spec.parts = d.classes;
  } else {
    for (const auto& part : split(c.parts, ';')) {
      std::vector<std::size_t> labels;
      if (!part.empty())
        for (const auto& l : split(part, ',')) labels.push_back(label_of(bank, l));
      spec.parts.push_back(std::move(labels));
    }
  }
  if (c.signs.empty()) {
    for (std::size_t j = 0; j < spec.parts.size(); ++j) spec.signs.push_back(j % 2 ? -1.0 : 1.0);
  } else {
    for (const auto& s : split(c.signs, ',')) {
      const auto ri = split(s, ':');
      if (ri.size() > 2) config_error("signs are re or re:im");
      spec.signs.emplace_back(to_real(ri[0]), ri.size() > 1 ? to_real(ri[1]) : 0.0);
    }
  }
  return spec;
}

json cmd_ambiguity(const Config& c) {
  const auto bank = make_bank(c);
  const auto f = make_signal(c, bank);
  save_inputs(c, &bank, &f);
  const GraphOptions go{c.tol};
  const auto d = equivalence_decomposition(bank, f, go);
  const auto spec = ambiguity_spec(c, bank, d);
  AmbiguityOptions ao;
  ao.graph = go;
  ao.expert = c.expert;
  const auto cert = synthesize_ambiguity(bank, f, spec, ao);
  const auto prop = verify_phase_propagation(bank, f, cert.g, 1e-9, go);
  if (!c.emit.empty()) {
    io::write_file(c.emit, has_suffix(c.emit, ".csv") ? io::signal_to_csv(cert.g) : io::to_json(cert.g).dump() + "\n");
  }
  return {{"command", "ambiguity"},
          {"spec", io::to_json(spec, bank)},
          {"decomposition", io::to_json(d, bank)},
          {"certificate", io::to_json(cert)},
          {"propagation", io::to_json(prop)},
          {"nontrivial", cert.phase_distance >= 0.1 * norm(f)},
          {"g", io::to_json(cert.g)}};
}

std::string cmd_sweep(const Config& c) {
  const auto bank = make_bank(c);
  Config sc = c;
  if (sc.signal.empty()) sc.signal = "bump:" + std::to_string(bank.n());
  const auto h = make_signal(sc, bank);
  save_inputs(c, &bank, &h);
  std::vector<long long> shifts;
  if (c.shifts.empty()) {
    shifts.push_back(0);
    for (std::size_t x = 1; x <= bank.n() / 2; x *= 2) shifts.push_back(static_cast<long long>(x));
  } else {
    for (const auto& s : split(c.shifts, ',')) shifts.push_back(to_ll(s));
  }
  const auto cells = separation_sweep(bank, h, shifts, search_options(c));
  if (!c.csv.empty()) io::write_file(c.csv, io::separation_csv(cells));
  std::string out;
  for (const auto& cell : cells) out += io::to_json(cell).dump() + "\n";
  return out;
}

json cmd_witness(const Config& c) {
  json j = io::to_json(instability_witness(c.n, c.eps, c.overlap, c.sigma));
  j["command"] = "witness";
  return j;
}

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::budget: return exit_budget;
    case ErrorKind::inapplicable_bound: return exit_inapplicable;
    case ErrorKind::invalid_spec: return exit_invalid_spec;
    default: return exit_config;
  }
}

/// Turns a JSON config object into option tokens placed before the command line.
std::vector<std::string> config_tokens(const json& j, std::string& command) {
  if (!j.is_object()) config_error("config must be a JSON object");
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      if (!value.is_string()) config_error("config command must be a string");
      command = value.get<std::string>();
      continue;
    }
    std::string name = "--" + key;
    std::replace(name.begin(), name.end(), '_', '-');
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(name);
    } else if (value.is_string()) {
      out.push_back(name);
      out.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      out.push_back(name);
      out.push_back(value.is_number_float() ? io::number(value.get<double>()).dump() : value.dump());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& e : value) joined += (joined.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
      out.push_back(name);
      out.push_back(joined);
    } else {
      config_error("unsupported config value for '" + key + "'");
    }
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Cheeger constants and phase retrieval stability for filter banks on Z_N", "cheegerlab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  app.add_option("command", c.command, "check | transform | cheeger | bounds | ambiguity | sweep | witness");
  app.add_option("--config", config_path, "JSON file mirroring the flags");
  app.add_option("--bank", c.bank, "shannon:N, shannon-nolow:N, overlap:N:eps, overlap-nolow:N:eps, "
                                   "overlap-literal:N:eps, random:N:L:seed[:field[:cover]], identity:N, deltas:N, zero:N "
                                   "or a JSON file");
  app.add_option("--signal", c.signal, "random:N[:seed], delta:N:k, zero:N, bands:l1,l2, bump:N[:sigma], packet "
                                       "or a JSON/CSV file");
  app.add_option("--field", c.field, "real or complex");
  app.add_option("--strategy", c.strategy, "exhaustive, product or local");
  app.add_option("--mode", c.mode, "kernel or graph (cheeger)");
  app.add_option("--bound", c.bound, "auto, real or temporal (bounds)");
  app.add_option("--budget", c.budget, "maximum number of subset evaluations");
  app.add_option("--tol", c.tol, "tolerance for checks and positivity thresholds");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--threads", c.threads, "worker threads for exhaustive search");
  app.add_option("--restarts", c.restarts, "random restarts for local search");
  app.add_option("--samples", c.samples, "sampled test functions (bounds)");
  app.add_option("--out", c.out, "write the JSON output here instead of stdout");
  app.add_option("--csv", c.csv, "secondary CSV output (graph edges, sweep summary)");
  app.add_option("--save-bank", c.save_bank, "write the bank as JSON");
  app.add_option("--save-signal", c.save_signal, "write the input signal as JSON or CSV");
  app.add_option("--emit", c.emit, "write the synthesized signal (ambiguity)");
  app.add_option("--parts", c.parts, "label parts separated by ';', labels by ','");
  app.add_option("--signs", c.signs, "one sign per part, re or re:im, separated by ','");
  app.add_option("--spec", c.spec, "ambiguity spec JSON file");
  app.add_option("--shifts", c.shifts, "comma separated shifts (sweep)");
  app.add_flag("--expert", c.expert, "allow parts that split equivalence classes");
  app.add_flag("--require-si", c.require_si, "also fail check when spectral injectivity fails");
  app.add_option("--n", c.n, "order for witness");
  app.add_option("--eps", c.eps, "target modulus distance for witness");
  app.add_option("--overlap", c.overlap, "band overlap for witness");
  app.add_option("--sigma", c.sigma, "bump width");

  try {
    std::vector<std::string> all;
    std::string config_command;
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
      }
      if (!path.empty()) {
        const auto tokens = config_tokens(io::parse_json(io::read_file(path)), config_command);
        all.insert(all.end(), tokens.begin(), tokens.end());
      }
    }
    all.insert(all.end(), args.begin(), args.end());
    std::reverse(all.begin(), all.end());
    try {
      app.parse(all);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return exit_ok;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n";
      return exit_config;
    }
    if (c.command.empty()) c.command = config_command;
    validate(c);

    int code = exit_ok;
    std::string text;
    if (c.command == "check") {
      text = cmd_check(c, code).dump(2) + "\n";
    } else if (c.command == "transform") {
      text = cmd_transform(c).dump(2) + "\n";
    } else if (c.command == "cheeger") {
      text = cmd_cheeger(c).dump(2) + "\n";
    } else if (c.command == "bounds") {
      text = cmd_bounds(c).dump(2) + "\n";
    } else if (c.command == "ambiguity") {
      text = cmd_ambiguity(c).dump(2) + "\n";
    } else if (c.command == "sweep") {
      text = cmd_sweep(c);
    } else if (c.command == "witness") {
      text = cmd_witness(c).dump(2) + "\n";
    } else {
      config_error(c.command.empty() ? "no command given" : "unknown command '" + c.command + "'");
    }
    if (c.out.empty()) {
      out << text;
    } else {
      io::write_file(c.out, text);
    }
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  }
}

}  // namespace cheegerlab

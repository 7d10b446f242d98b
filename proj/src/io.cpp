#include "cheegerlab/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cheegerlab/error.hpp"

namespace cheegerlab::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::parse, what); }

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing key '") + key + "'");
  return j.at(key);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::size_t label_ref(const json& j, const FilterBank& bank) {
  if (j.is_string()) return bank.index_of(j.get<std::string>());
  if (j.is_number_unsigned()) {
    const auto l = j.get<std::size_t>();
    if (l >= bank.size()) throw Error(ErrorKind::invalid_spec, "label index out of range");
    return l;
  }
  bad("labels must be names or indices");
}

}  // namespace

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double to_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  bad("expected a number");
}

json to_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

cplx complex_from_json(const json& j) {
  if (j.is_number() || j.is_string()) return {to_double(j), 0.0};
  if (!j.is_array() || j.size() != 2) bad("expected a [re, im] pair");
  return {to_double(j[0]), to_double(j[1])};
}

json to_json(const Signal& f) {
  json a = json::array();
  for (const auto& z : f.values()) a.push_back(to_json(z));
  return a;
}

Signal signal_from_json(const json& j) {
  const json& arr = j.is_object() ? member(j, "values") : j;
  if (!arr.is_array() || arr.empty()) bad("signal must be a nonempty array of [re, im] pairs");
  CVector v;
  bool real = true;
  for (const auto& e : arr) {
    v.push_back(complex_from_json(e));
    real = real && v.back().imag() == 0.0;
  }
  return Signal(std::move(v), real ? Field::real : Field::complex);
}

std::string signal_to_csv(const Signal& f) {
  std::string out = "re,im\n";
  for (const auto& z : f.values()) out += fmt(z.real()) + "," + fmt(z.imag()) + "\n";
  return out;
}

Signal signal_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CVector v;
  bool real = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "re,im") continue;
    const auto comma = line.find(',');
    try {
      std::size_t used = 0;
      const double re = std::stod(line.substr(0, comma), &used);
      double im = 0.0;
      if (comma != std::string::npos) im = std::stod(line.substr(comma + 1));
      v.emplace_back(re, im);
      real = real && im == 0.0;
    } catch (const std::exception&) {
      bad("malformed CSV signal at line " + std::to_string(lineno));
    }
  }
  if (v.empty()) bad("CSV signal is empty");
  return Signal(std::move(v), real ? Field::real : Field::complex);
}

json to_json(const FilterBank& bank) {
  json profiles = json::array();
  for (const auto& p : bank.profiles()) {
    json a = json::array();
    for (const auto& z : p.values()) a.push_back(to_json(z));
    profiles.push_back(std::move(a));
  }
  return {{"n", bank.n()},
          {"labels", bank.labels()},
          {"nu", bank.nu()},
          {"profiles", std::move(profiles)},
          {"field", to_string(bank.field())}};
}

FilterBank bank_from_json(const json& j) {
  try {
    const auto labels = member(j, "labels").get<std::vector<std::string>>();
    const auto nu = member(j, "nu").get<std::vector<double>>();
    const Field field = field_from_string(member(j, "field").get<std::string>());
    std::vector<Spectrum> profiles;
    for (const auto& p : member(j, "profiles")) {
      CVector v;
      for (const auto& z : p) v.push_back(complex_from_json(z));
      profiles.emplace_back(std::move(v));
    }
    if (j.contains("n")) {
      const auto n = j.at("n").get<std::size_t>();
      for (const auto& p : profiles)
        if (p.n() != n) throw Error(ErrorKind::dimension, "profile length differs from n");
    }
    return FilterBank(labels, std::move(profiles), nu, field);
  } catch (const json::exception& e) {
    bad(std::string("malformed bank: ") + e.what());
  }
}

json to_json(const CoefficientField& f) {
  json values = json::array();
  for (const auto& z : f.values()) values.push_back(to_json(z));
  return {{"n", f.n()}, {"labels", f.labels()}, {"nu", f.nu()}, {"values", std::move(values)}};
}

CoefficientField field_from_json(const json& j) {
  try {
    CVector v;
    for (const auto& z : member(j, "values")) v.push_back(complex_from_json(z));
    return CoefficientField(member(j, "n").get<std::size_t>(), member(j, "labels").get<std::vector<std::string>>(),
                            member(j, "nu").get<std::vector<double>>(), std::move(v));
  } catch (const json::exception& e) {
    bad(std::string("malformed coefficient field: ") + e.what());
  }
}

json to_json(const CheegerResult& r) {
  return {{"value", number(r.value)},
          {"witness_bits", r.witness.to_hex()},
          {"size", r.witness.size()},
          {"strategy", to_string(r.strategy)},
          {"certified", r.certified},
          {"admissible_found", r.admissible_found},
          {"numerator", number(r.numerator)},
          {"denominator", number(r.denominator)},
          {"evaluations", r.evaluations}};
}

json to_json(const WeightedGraph& g) {
  json vertices = json::array(), edges = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) vertices.push_back({{"label", g.labels[i]}, {"w", number(g.vertex_weight[i])}});
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i; j < g.size(); ++j)
      if (g.has_edge(i, j)) edges.push_back({{"a", g.labels[i]}, {"b", g.labels[j]}, {"w", number(g.edge(i, j))}});
  return {{"vertices", std::move(vertices)},
          {"edges", std::move(edges)},
          {"threshold", number(g.threshold)},
          {"max_degree", g.max_degree()}};
}

std::string graph_edges_csv(const WeightedGraph& g) {
  std::string out = "a,b,w\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i; j < g.size(); ++j)
      if (g.has_edge(i, j)) out += g.labels[i] + "," + g.labels[j] + "," + fmt(g.edge(i, j)) + "\n";
  return out;
}

json to_json(const AmbiguitySpec& spec, const FilterBank& bank) {
  json parts = json::array(), signs = json::array();
  for (const auto& p : spec.parts) {
    json a = json::array();
    for (auto l : p) a.push_back(bank.labels()[l]);
    parts.push_back(std::move(a));
  }
  for (const auto& s : spec.signs) signs.push_back(to_json(s));
  return {{"parts", std::move(parts)}, {"signs", std::move(signs)}};
}

AmbiguitySpec spec_from_json(const json& j, const FilterBank& bank) {
  AmbiguitySpec spec;
  const auto& parts = member(j, "parts");
  const auto& signs = member(j, "signs");
  if (!parts.is_array() || !signs.is_array()) bad("parts and signs must be arrays");
  for (const auto& p : parts) {
    if (!p.is_array()) bad("each part must be an array of labels");
    std::vector<std::size_t> part;
    for (const auto& l : p) part.push_back(label_ref(l, bank));
    spec.parts.push_back(std::move(part));
  }
  for (const auto& s : signs) spec.signs.push_back(complex_from_json(s));
  return spec;
}

json to_json(const CalderonReport& r) {
  return {{"max_deviation", number(r.max_deviation)},
          {"worst_bin", r.worst_bin},
          {"tolerance", number(r.tolerance)},
          {"satisfied", r.satisfied}};
}

json to_json(const InjectivityReport& r) {
  json sv = json::array();
  for (double s : r.singular_values) sv.push_back(number(s));
  return {{"rank", r.rank}, {"columns", r.columns}, {"full_rank", r.full_rank}, {"singular_values", std::move(sv)}};
}

json to_json(const EquivalenceDecomposition& d, const FilterBank& bank) {
  json classes = json::array(), zero = json::array();
  for (const auto& c : d.classes) {
    json a = json::array();
    for (auto l : c) a.push_back(bank.labels()[l]);
    classes.push_back(std::move(a));
  }
  for (auto l : d.zero_set) zero.push_back(bank.labels()[l]);
  return {{"classes", std::move(classes)}, {"zero_set", std::move(zero)}};
}

json to_json(const AmbiguityCertificate& c) {
  json energy = json::array();
  for (double e : c.part_energy) energy.push_back(number(e));
  return {{"part_energy", std::move(energy)},
          {"modulus_residual", number(c.modulus_residual)},
          {"coefficient_residual", number(c.coefficient_residual)},
          {"orthogonality_residual", number(c.orthogonality_residual)},
          {"energy_residual", number(c.energy_residual)},
          {"phase_distance", number(c.phase_distance)}};
}

json to_json(const PhasePropagation& p) {
  json labels = json::array(), classes = json::array();
  for (const auto& s : p.label_phase) labels.push_back(to_json(s));
  for (const auto& s : p.class_phase) classes.push_back(to_json(s));
  return {{"consistent", p.consistent},
          {"modulus_residual", number(p.modulus_residual)},
          {"local_residual", number(p.local_residual)},
          {"worst_label", p.worst_label},
          {"class_residual", number(p.class_residual)},
          {"label_phase", std::move(labels)},
          {"class_phase", std::move(classes)}};
}

json to_json(const StabilityReport& r) {
  std::string verdict = "bracketed";
  if (std::isinf(r.lower_bound)) {
    verdict = "not stably retrievable";
  } else if (std::isinf(r.upper_bound)) {
    verdict = "upper bound uninformative";
  }
  return {{"field", to_string(r.field)},
          {"cheeger", to_json(r.cheeger)},
          {"lower_bound", number(r.lower_bound)},
          {"upper_bound", number(r.upper_bound)},
          {"upper_source", r.upper_source},
          {"temporal_connectivity", number(r.temporal_connectivity)},
          {"max_degree", r.max_degree},
          {"empirical_lower", number(r.empirical_lower)},
          {"witness_sampler", r.witness_sampler},
          {"witness", to_json(r.witness)},
          {"samples", r.samples_used},
          {"seed", r.seed},
          {"verdict", verdict}};
}

json to_json(const SeparationCell& c) {
  return {{"shift", c.shift}, {"kernel", to_json(c.kernel)}, {"graph", to_json(c.graph)}, {"quotient", number(c.quotient)}};
}

std::string separation_csv(const std::vector<SeparationCell>& cells) {
  std::string out = "shift,kernel_cheeger,kernel_certified,graph_cheeger,quotient\n";
  for (const auto& c : cells) {
    out += std::to_string(c.shift) + "," + fmt(c.kernel.value) + "," + (c.kernel.certified ? "true" : "false") + "," +
           fmt(c.graph.value) + "," + fmt(c.quotient) + "\n";
  }
  return out;
}

json to_json(const InstabilityWitness& w) {
  return {{"n", w.n},
          {"eps", number(w.eps)},
          {"construction", w.construction},
          {"phase_distance", number(w.phase_distance)},
          {"modulus_distance", number(w.modulus_distance)},
          {"reached", w.reached},
          {"f", to_json(w.f)},
          {"g", to_json(w.g)}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::parse, "cannot write " + path);
  out << text;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace cheegerlab::io

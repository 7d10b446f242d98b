#pragma once

#include <json.hpp>
#include <string>

#include "cheegerlab/experiments.hpp"

namespace cheegerlab::io {

using json = nlohmann::json;

/// Finite doubles as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
json number(double v);
double to_double(const json& j);

json to_json(cplx z);
cplx complex_from_json(const json& j);

/// Signals are arrays of [re, im] pairs. The field is inferred on reading:
/// real when every imaginary part is exactly zero.
json to_json(const Signal& f);
Signal signal_from_json(const json& j);
std::string signal_to_csv(const Signal& f);
Signal signal_from_csv(const std::string& text);

json to_json(const FilterBank& bank);
FilterBank bank_from_json(const json& j);

json to_json(const CoefficientField& f);
CoefficientField field_from_json(const json& j);

json to_json(const CheegerResult& r);
json to_json(const WeightedGraph& g);
std::string graph_edges_csv(const WeightedGraph& g);

json to_json(const AmbiguitySpec& spec, const FilterBank& bank);
/// Parts may list labels by name or by index.
AmbiguitySpec spec_from_json(const json& j, const FilterBank& bank);

json to_json(const CalderonReport& r);
json to_json(const InjectivityReport& r);
json to_json(const EquivalenceDecomposition& d, const FilterBank& bank);
json to_json(const AmbiguityCertificate& c);
json to_json(const PhasePropagation& p);
json to_json(const StabilityReport& r);
json to_json(const SeparationCell& c);
std::string separation_csv(const std::vector<SeparationCell>& cells);
json to_json(const InstabilityWitness& w);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
/// Parses JSON text, mapping syntax errors to ErrorKind::parse.
json parse_json(const std::string& text);

}  // namespace cheegerlab::io

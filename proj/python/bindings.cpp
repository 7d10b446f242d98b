#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cheegerlab/cli.hpp"
#include "cheegerlab/error.hpp"
#include "cheegerlab/experiments.hpp"

namespace py = pybind11;
using namespace cheegerlab;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

CVector to_cvector(const CArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return CVector(a.data(), a.data() + a.size());
}

CArray to_array(const CVector& v) { return CArray(static_cast<py::ssize_t>(v.size()), v.data()); }

CArray field_array(const CoefficientField& f) {
  CArray a({static_cast<py::ssize_t>(f.n()), static_cast<py::ssize_t>(f.num_labels())});
  std::copy(f.values().begin(), f.values().end(), a.mutable_data());
  return a;
}

std::vector<bool> label_flags(const FilterBank& bank, const std::vector<std::size_t>& labels) {
  std::vector<bool> in(bank.size(), false);
  for (auto l : labels) {
    if (l >= bank.size()) throw py::index_error("label index out of range");
    in[l] = true;
  }
  return in;
}

}  // namespace

PYBIND11_MODULE(_cheegerlab, m) {
  m.doc() = "Cheeger constants and phase retrieval stability for filter banks on Z_N";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = error;
      PyErr_SetObject(err.ptr(), py::make_tuple(e.what(), to_string(e.kind())).ptr());
    }
  });

  py::enum_<Field>(m, "Field").value("real", Field::real).value("complex", Field::complex);
  py::enum_<Strategy>(m, "Strategy")
      .value("exhaustive", Strategy::exhaustive)
      .value("product", Strategy::product_sets)
      .value("local", Strategy::local_search);

  py::class_<Signal>(m, "Signal")
      .def(py::init([](const CArray& values, Field field) { return Signal(to_cvector(values), field); }),
           py::arg("values"), py::arg("field") = Field::complex)
      .def_property_readonly("n", &Signal::n)
      .def_property_readonly("field", &Signal::field)
      .def_property_readonly("values", [](const Signal& s) { return to_array(s.values()); })
      .def("__len__", &Signal::n);

  m.def("dft", [](const Signal& f) { return to_array(dft(f).values()); });
  m.def("random_signal", &random_signal, py::arg("n"), py::arg("field") = Field::complex, py::arg("seed") = 7);
  m.def("localized_bump", &localized_bump, py::arg("n"), py::arg("sigma") = 1.0);
  m.def("translate", &translate);
  m.def("add", &add);
  m.def("subtract", &subtract);
  m.def("norm", py::overload_cast<const Signal&>(&norm));

  py::class_<FilterBank>(m, "FilterBank")
      .def(py::init([](std::vector<std::string> labels, const std::vector<CArray>& profiles, std::vector<double> nu,
                       Field field) {
             std::vector<Spectrum> p;
             for (const auto& a : profiles) p.emplace_back(to_cvector(a));
             return FilterBank(std::move(labels), std::move(p), std::move(nu), field);
           }),
           py::arg("labels"), py::arg("profiles"), py::arg("nu"), py::arg("field") = Field::complex)
      .def_property_readonly("n", &FilterBank::n)
      .def_property_readonly("size", &FilterBank::size)
      .def_property_readonly("field", &FilterBank::field)
      .def_property_readonly("labels", &FilterBank::labels)
      .def_property_readonly("nu", &FilterBank::nu)
      .def("profile", [](const FilterBank& b, std::size_t l) { return to_array(b.profile(l).values()); })
      .def("filter", [](const FilterBank& b, std::size_t l) { return b.filter(l); });

  m.def("build_shannon", &build_shannon, py::arg("n"), py::arg("with_lowpass") = true);
  m.def("build_overlapping_shannon", &build_overlapping_shannon, py::arg("n"), py::arg("eps"),
        py::arg("with_lowpass") = true, py::arg("paper_literal") = false);
  m.def("build_random_partition", &build_random_partition, py::arg("n"), py::arg("count"), py::arg("field"),
        py::arg("seed"), py::arg("max_cover") = 2);
  m.def("build_identity", &build_identity);
  m.def("build_frequency_deltas", &build_frequency_deltas);

  py::class_<CalderonReport>(m, "CalderonReport")
      .def_readonly("max_deviation", &CalderonReport::max_deviation)
      .def_readonly("worst_bin", &CalderonReport::worst_bin)
      .def_readonly("satisfied", &CalderonReport::satisfied);
  py::class_<InjectivityReport>(m, "InjectivityReport")
      .def_readonly("rank", &InjectivityReport::rank)
      .def_readonly("columns", &InjectivityReport::columns)
      .def_readonly("full_rank", &InjectivityReport::full_rank);
  m.def("check_calderon", &check_calderon, py::arg("bank"), py::arg("tol") = 1e-10);
  m.def("check_spectral_injectivity", &check_spectral_injectivity);

  py::class_<CoefficientField>(m, "CoefficientField")
      .def_property_readonly("n", &CoefficientField::n)
      .def_property_readonly("labels", &CoefficientField::labels)
      .def_property_readonly("values", &field_array)
      .def("norm", [](const CoefficientField& f) { return norm(f); });
  m.def("analyze", &analyze);
  m.def("synthesize", &synthesize);
  m.def("isometry_defect", &isometry_defect, py::arg("bank"), py::arg("trials"), py::arg("seed") = 7);
  m.def("inversion_residual", &inversion_residual, py::arg("bank"), py::arg("trials"), py::arg("seed") = 7);

  py::class_<KernelOperator>(m, "KernelOperator")
      .def(py::init<const FilterBank&>(), py::keep_alive<1, 2>())
      .def("apply", &KernelOperator::apply)
      .def("entry", py::overload_cast<std::size_t, std::size_t>(&KernelOperator::entry, py::const_));

  py::class_<SubsetMask>(m, "SubsetMask")
      .def(py::init<std::size_t>())
      .def_static("from_hex", &SubsetMask::from_hex)
      .def_static("product", [](std::size_t n, const std::vector<bool>& labels) { return SubsetMask::product(n, labels); })
      .def("to_hex", &SubsetMask::to_hex)
      .def("contains", &SubsetMask::contains)
      .def("set", &SubsetMask::set)
      .def("__len__", &SubsetMask::size)
      .def("count", &SubsetMask::count);

  py::class_<SearchOptions>(m, "SearchOptions")
      .def(py::init<>())
      .def_readwrite("budget", &SearchOptions::budget)
      .def_readwrite("restarts", &SearchOptions::restarts)
      .def_readwrite("seed", &SearchOptions::seed)
      .def_readwrite("threads", &SearchOptions::threads);

  py::class_<CheegerResult>(m, "CheegerResult")
      .def_readonly("value", &CheegerResult::value)
      .def_readonly("witness", &CheegerResult::witness)
      .def_readonly("strategy", &CheegerResult::strategy)
      .def_readonly("certified", &CheegerResult::certified)
      .def_readonly("admissible_found", &CheegerResult::admissible_found)
      .def_readonly("evaluations", &CheegerResult::evaluations);

  m.def("kernel_cheeger", &kernel_cheeger, py::arg("kernel"), py::arg("field"),
        py::arg("strategy") = Strategy::exhaustive, py::arg("options") = SearchOptions{});
  m.def("commutator_norm_sq", &commutator_norm_sq);
  m.def("build_test_function", &build_test_function);
  m.def("phase_infimum_sq", &phase_infimum_sq);
  m.def("modulus_distance", &modulus_distance);
  m.def("stability_lower_bound", &stability_lower_bound);
  m.def("stability_upper_bound_real", &stability_upper_bound_real, py::arg("cheeger_value"),
        py::arg("field") = Field::real);

  py::class_<GraphOptions>(m, "GraphOptions").def(py::init<>()).def_readwrite("tol", &GraphOptions::tol);
  py::class_<WeightedGraph>(m, "WeightedGraph")
      .def_static("from_weights", &WeightedGraph::from_weights)
      .def_readonly("labels", &WeightedGraph::labels)
      .def_readonly("label_index", &WeightedGraph::label_index)
      .def_readonly("vertex_weight", &WeightedGraph::vertex_weight)
      .def_readonly("edge_weight", &WeightedGraph::edge_weight)
      .def_readonly("threshold", &WeightedGraph::threshold)
      .def("edge", &WeightedGraph::edge)
      .def("max_degree", &WeightedGraph::max_degree)
      .def("__len__", &WeightedGraph::size);
  py::class_<EquivalenceDecomposition>(m, "EquivalenceDecomposition")
      .def_readonly("classes", &EquivalenceDecomposition::classes)
      .def_readonly("zero_set", &EquivalenceDecomposition::zero_set);
  py::class_<RetrievabilityDiagnosis>(m, "RetrievabilityDiagnosis")
      .def_readonly("locally_retrievable_assumed", &RetrievabilityDiagnosis::locally_retrievable_assumed)
      .def_readonly("single_class", &RetrievabilityDiagnosis::single_class)
      .def_readonly("verdict", &RetrievabilityDiagnosis::verdict)
      .def_readonly("decomposition", &RetrievabilityDiagnosis::decomposition);

  m.def("build_graph", &build_graph, py::arg("bank"), py::arg("f"), py::arg("options") = GraphOptions{});
  m.def("equivalence_decomposition", &equivalence_decomposition, py::arg("bank"), py::arg("f"),
        py::arg("options") = GraphOptions{});
  m.def("graph_cheeger", &graph_cheeger, py::arg("graph"), py::arg("strategy") = Strategy::exhaustive,
        py::arg("options") = SearchOptions{});
  m.def("algebraic_connectivity", &algebraic_connectivity);
  m.def("temporal_algebraic_connectivity", &temporal_algebraic_connectivity, py::arg("bank"), py::arg("f"),
        py::arg("options") = GraphOptions{});
  m.def("complex_upper_bound", &complex_upper_bound);
  m.def("retrievability_diagnosis", &retrievability_diagnosis, py::arg("bank"), py::arg("f"),
        py::arg("options") = GraphOptions{});
  m.def(
      "band_profile",
      [](const FilterBank& bank, const std::vector<std::size_t>& labels) {
        return band_profile(bank, label_flags(bank, labels)).values;
      },
      py::arg("bank"), py::arg("labels"));

  py::class_<AmbiguitySpec>(m, "AmbiguitySpec")
      .def(py::init([](std::vector<std::vector<std::size_t>> parts, std::vector<cplx> signs) {
             return AmbiguitySpec{std::move(parts), std::move(signs)};
           }),
           py::arg("parts"), py::arg("signs"))
      .def_readwrite("parts", &AmbiguitySpec::parts)
      .def_readwrite("signs", &AmbiguitySpec::signs);
  py::class_<AmbiguityCertificate>(m, "AmbiguityCertificate")
      .def_readonly("g", &AmbiguityCertificate::g)
      .def_readonly("part_energy", &AmbiguityCertificate::part_energy)
      .def_readonly("modulus_residual", &AmbiguityCertificate::modulus_residual)
      .def_readonly("coefficient_residual", &AmbiguityCertificate::coefficient_residual)
      .def_readonly("orthogonality_residual", &AmbiguityCertificate::orthogonality_residual)
      .def_readonly("energy_residual", &AmbiguityCertificate::energy_residual)
      .def_readonly("phase_distance", &AmbiguityCertificate::phase_distance);
  py::class_<PhasePropagation>(m, "PhasePropagation")
      .def_readonly("consistent", &PhasePropagation::consistent)
      .def_readonly("local_residual", &PhasePropagation::local_residual)
      .def_readonly("worst_label", &PhasePropagation::worst_label)
      .def_readonly("label_phase", &PhasePropagation::label_phase)
      .def_readonly("class_phase", &PhasePropagation::class_phase);
  m.def(
      "synthesize_ambiguity",
      [](const FilterBank& bank, const Signal& f, const AmbiguitySpec& spec, bool expert) {
        AmbiguityOptions o;
        o.expert = expert;
        return synthesize_ambiguity(bank, f, spec, o);
      },
      py::arg("bank"), py::arg("f"), py::arg("spec"), py::arg("expert") = false);
  m.def(
      "verify_phase_propagation",
      [](const FilterBank& bank, const Signal& f, const Signal& g, double tol) {
        return verify_phase_propagation(bank, f, g, tol);
      },
      py::arg("bank"), py::arg("f"), py::arg("g"), py::arg("tol") = 1e-9);
  m.def(
      "band_projection",
      [](const FilterBank& bank, const Signal& f, const std::vector<std::size_t>& labels) {
        return band_projection(bank, f, labels).signal;
      },
      py::arg("bank"), py::arg("f"), py::arg("labels"));

  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("field", &StabilityReport::field)
      .def_readonly("cheeger", &StabilityReport::cheeger)
      .def_readonly("lower_bound", &StabilityReport::lower_bound)
      .def_readonly("upper_bound", &StabilityReport::upper_bound)
      .def_readonly("upper_source", &StabilityReport::upper_source)
      .def_readonly("empirical_lower", &StabilityReport::empirical_lower)
      .def_readonly("witness_sampler", &StabilityReport::witness_sampler);
  m.def(
      "empirical_stability",
      [](const FilterBank& bank, const Signal& f, std::size_t samples, std::uint64_t seed, const SearchOptions& search) {
        StabilityOptions o;
        o.samples = samples;
        o.seed = seed;
        o.search = search;
        return empirical_stability(bank, f, o);
      },
      py::arg("bank"), py::arg("f"), py::arg("samples") = 600, py::arg("seed") = 20240601,
      py::arg("search") = SearchOptions{});

  py::class_<SeparationCell>(m, "SeparationCell")
      .def_readonly("shift", &SeparationCell::shift)
      .def_readonly("kernel", &SeparationCell::kernel)
      .def_readonly("graph", &SeparationCell::graph)
      .def_readonly("quotient", &SeparationCell::quotient);
  m.def("separation_sweep", &separation_sweep, py::arg("bank"), py::arg("h"), py::arg("shifts"),
        py::arg("options") = SearchOptions{});

  py::class_<InstabilityWitness>(m, "InstabilityWitness")
      .def_readonly("n", &InstabilityWitness::n)
      .def_readonly("f", &InstabilityWitness::f)
      .def_readonly("g", &InstabilityWitness::g)
      .def_readonly("phase_distance", &InstabilityWitness::phase_distance)
      .def_readonly("modulus_distance", &InstabilityWitness::modulus_distance)
      .def_readonly("reached", &InstabilityWitness::reached)
      .def_readonly("construction", &InstabilityWitness::construction);
  m.def("instability_witness", &instability_witness, py::arg("n"), py::arg("eps"), py::arg("overlap") = 0.25,
        py::arg("sigma") = 1.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a command-line invocation in process; returns (exit_code, stdout, stderr).");
}

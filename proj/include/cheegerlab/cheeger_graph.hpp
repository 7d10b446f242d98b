#pragma once

#include <string>
#include <vector>

#include "cheegerlab/cheeger_kernel.hpp"

namespace cheegerlab {

/// Weighted graph on a subset V of the labels. Edge weights are stored
/// densely over V x V; the diagonal holds self-loop weights, which count
/// toward degrees but never toward a cut.
struct WeightedGraph {
  std::vector<std::string> labels;
  /// Position of each vertex in the label list it was built from.
  std::vector<std::size_t> label_index;
  std::vector<double> vertex_weight;
  std::vector<double> edge_weight;
  /// Norm threshold used for the positivity tests (0 for graphs given by weights).
  double threshold = 0.0;
  /// ||f||^2 for graphs built from a signal.
  double signal_energy = 0.0;

  std::size_t size() const noexcept { return labels.size(); }
  double edge(std::size_t i, std::size_t j) const { return edge_weight[i * labels.size() + j]; }
  bool has_edge(std::size_t i, std::size_t j) const { return edge(i, j) > 0.0; }
  /// Largest neighbour count, self included when the self-loop is present.
  std::size_t max_degree() const;

  static WeightedGraph from_weights(std::vector<std::string> labels, std::vector<double> vertex_weight,
                                    std::vector<double> edge_weight);
};

struct GraphOptions {
  /// Relative positivity threshold; a norm counts as positive above
  /// tol * ||f|| * max ||psi_lambda||.
  double tol = 1e-10;
};

/// G(f): V = { l : ||f * psi_l|| > 0 }, edges where ||f * psi_l * psi_l'|| > 0,
/// w_l = nu_l ||f * psi_l||^2, w_ll' = nu_l nu_l' ||f * psi_l * psi_l'||^2.
WeightedGraph build_graph(const FilterBank& bank, const Signal& f, const GraphOptions& options = {});

struct GraphIdentityReport {
  double total_mass_residual = 0.0;  // |sum w_l - ||f||^2| / ||f||^2
  double row_sum_residual = 0.0;     // max_l' |sum_l w_ll' - w_l'| / w_l'
  bool holds = false;
};

GraphIdentityReport check_graph_identities(const WeightedGraph& g, double tol = 1e-9);

struct EquivalenceDecomposition {
  /// Classes of label indices, each sorted, ordered by their first element.
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> zero_set;
};

EquivalenceDecomposition equivalence_decomposition(const FilterBank& bank, const Signal& f,
                                                   const GraphOptions& options = {});
/// Connected components of a graph, as label indices.
std::vector<std::vector<std::size_t>> connected_components(const WeightedGraph& g);

/// Graph Cheeger constant over cuts of V; the witness is a mask over vertices.
/// The product strategy is the same as exhaustive here since every cut is a product set.
CheegerResult graph_cheeger(const WeightedGraph& g, Strategy strategy, const SearchOptions& options = {});

struct BandProfile {
  std::vector<double> values;
};

/// H_S(xi) = sum_{l in S} nu_l |psi_l(xi)|^2 for a label subset S.
BandProfile band_profile(const FilterBank& bank, const std::vector<bool>& labels);

struct BandProfileCheck {
  double partition_residual = 0.0;  // max |H_S + H_{S^c} - 1| on supp fhat
  double product_residual = 0.0;    // max |H_S H_{S^c}^2 + H_S^2 H_{S^c} - H_S H_{S^c}| on supp fhat
  double transfer_residual = 0.0;   // relative gap in sum_{l in S} nu_l ||f * psi_l||^2 = (1/N) sum |fhat|^2 H_S
  double range_excess = 0.0;        // max(0, H_S - 1, -H_S)
  bool holds = false;
};

BandProfileCheck check_band_profile(const FilterBank& bank, const Signal& f, const std::vector<bool>& labels,
                                    double tol = 1e-10);

struct ProductCommutatorCheck {
  double commutator = 0.0;  // ||[K, P_{A x S}] W f||^2
  double boundary = 0.0;    // sum over the cut of w_ll'
  double mass = 0.0;        // ||P_{A x S} W f||^2
  double vertex_mass = 0.0; // sum_{l in S} w_l
};

ProductCommutatorCheck product_commutator_check(const FilterBank& bank, const Signal& f,
                                                const std::vector<bool>& labels);

struct KernelVsGraph {
  double kernel_value = 0.0;
  double graph_value = 0.0;
  double product_value = 0.0;
  bool holds = false;
};

KernelVsGraph kernel_vs_graph(const FilterBank& bank, const Signal& f, const SearchOptions& options = {});

/// Smallest Rayleigh quotient of the Laplacian (summed over unordered edges)
/// over z orthogonal to constants in the w-weighted product.
double algebraic_connectivity(const WeightedGraph& g);

/// Temporal analogue on variables (x, l), l in V, with masses nu_l m_l(x)^2
/// and couplings nu_l nu_l' m_ll'(x)^2. Variables of zero mass are eliminated
/// exactly by a Schur complement.
double temporal_algebraic_connectivity(const FilterBank& bank, const Signal& f, const GraphOptions& options = {});

/// sqrt(32 D / A_t + 10); +inf when A_t = 0.
double complex_upper_bound(std::size_t max_degree, double temporal_connectivity);

struct RetrievabilityDiagnosis {
  bool locally_retrievable_assumed = false;
  bool single_class = false;
  std::string verdict;
  EquivalenceDecomposition decomposition;
};

RetrievabilityDiagnosis retrievability_diagnosis(const FilterBank& bank, const Signal& f,
                                                 const GraphOptions& options = {});

}  // namespace cheegerlab

#pragma once

#include <string>
#include <vector>

#include "cheegerlab/cheeger_graph.hpp"

namespace cheegerlab {

/// Partition of the active labels into parts U_j with unimodular signs.
struct AmbiguitySpec {
  std::vector<std::vector<std::size_t>> parts;
  std::vector<cplx> signs;
};

struct BandProjection {
  Signal signal;
  /// U is a union of equivalence classes, so the band identities were checked.
  bool checked = false;
  /// max over labels of ||f_U * psi_l^* - 1_U(l) f * psi_l^*|| / ||f||; 0 when unchecked.
  double residual = 0.0;
};

/// f_U = sum_{l in U} nu_l f * psi_l^* * psi_l.
BandProjection band_projection(const FilterBank& bank, const Signal& f, const std::vector<std::size_t>& labels,
                               const GraphOptions& options = {});

struct AmbiguityOptions {
  GraphOptions graph;
  /// Accept parts that split equivalence classes.
  bool expert = false;
};

struct AmbiguityCertificate {
  Signal g;
  std::vector<double> part_energy;
  /// || |W f| - |W g| || / ||f||
  double modulus_residual = 0.0;
  /// max over labels of ||W g(., l) - sigma_j W f(., l)|| / ||f||
  double coefficient_residual = 0.0;
  /// max_{j != k} |<f_Uj, f_Uk>| / ||f||^2
  double orthogonality_residual = 0.0;
  /// |sum_j ||f_Uj||^2 - ||f||^2| / ||f||^2
  double energy_residual = 0.0;
  /// min over trivial ambiguities alpha of ||f - alpha g||
  double phase_distance = 0.0;
};

/// g = sum_j sigma_j f_{U_j}. Throws invalid_spec for overlapping parts, a
/// partition not covering the active labels, non-unimodular (or, in the real
/// case, non-real) signs, or parts splitting a class unless `expert` is set.
AmbiguityCertificate synthesize_ambiguity(const FilterBank& bank, const Signal& f, const AmbiguitySpec& spec,
                                          const AmbiguityOptions& options = {});

struct PhasePropagation {
  bool consistent = false;
  double modulus_residual = 0.0;
  /// Largest ||g * psi_l^* - sigma_l f * psi_l^*|| / ||f||.
  double local_residual = 0.0;
  std::size_t worst_label = 0;
  /// Largest spread of sigma_l within a class.
  double class_residual = 0.0;
  /// sigma_l per label; 1 on the zero set.
  std::vector<cplx> label_phase;
  EquivalenceDecomposition decomposition;
  std::vector<cplx> class_phase;
};

PhasePropagation verify_phase_propagation(const FilterBank& bank, const Signal& f, const Signal& g,
                                          double tol = 1e-9, const GraphOptions& options = {});

/// min over alpha in the unit circle (or {+1,-1} for real) of ||f - alpha g||.
double phase_distance(const Signal& f, const Signal& g, Field field);

}  // namespace cheegerlab

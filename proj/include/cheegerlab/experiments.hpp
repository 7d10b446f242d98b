#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cheegerlab/ambiguity.hpp"

namespace cheegerlab {

struct StabilityOptions {
  /// Total number of sampled test functions.
  std::size_t samples = 600;
  std::uint64_t seed = 20240601;
  SearchOptions search;
  GraphOptions graph;
};

struct StabilityReport {
  Field field = Field::complex;
  CheegerResult cheeger;
  /// sqrt(1/C - 1) from the best Cheeger value found; valid even when uncertified.
  double lower_bound = 0.0;
  /// Real: 2 sqrt(1/C - 1) + 1 with certified C. Complex: the temporal-graph
  /// bound. +inf when unavailable.
  double upper_bound = std::numeric_limits<double>::infinity();
  std::string upper_source = "none";
  double temporal_connectivity = 0.0;
  std::size_t max_degree = 0;
  double empirical_lower = 0.0;
  /// Test function attaining empirical_lower.
  CoefficientField witness;
  std::string witness_sampler;
  std::size_t samples_used = 0;
  std::uint64_t seed = 0;
};

/// Strategy picked for a kernel Cheeger computation: exhaustive on grids
/// within the cap, otherwise the better of product and local search.
CheegerResult best_kernel_cheeger(const KernelOperator& k, const CoefficientField& f, const SearchOptions& options);

/// min_alpha ||F - alpha G|| / || |F| - |G| ||; 0 when the denominator is at
/// or below 1e-12 ||F||.
double stability_quotient(const CoefficientField& f, const CoefficientField& g, Field field);

StabilityReport empirical_stability(const FilterBank& bank, const Signal& f, const StabilityOptions& options = {});

/// Zero-mean derivative-of-Gaussian bump centred at 0, effective support 4 sigma.
Signal localized_bump(std::size_t n, double sigma = 1.0);

struct SeparationCell {
  long long shift = 0;
  CheegerResult kernel;
  CheegerResult graph;
  /// stability_quotient(W(h + T_x h), W(h - T_x h)).
  double quotient = 0.0;
};

std::vector<SeparationCell> separation_sweep(const FilterBank& bank, const Signal& h, const std::vector<long long>& shifts,
                                             const SearchOptions& options = {});

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

struct InstabilityWitness {
  std::size_t n = 0;
  double eps = 0.0;
  Signal f;
  Signal g;
  /// min_alpha ||W f - alpha W g||, normalized to 1.
  double phase_distance = 0.0;
  /// || |W f| - |W g| || after normalization.
  double modulus_distance = 0.0;
  bool reached = false;
  /// Bump used: "gaussian_derivative" or "band_interior_packet".
  std::string construction;
};

/// Real wave packet whose spectrum is a Hann window inside the part of the
/// highest band not shared with any other filter.
Signal band_interior_packet(const FilterBank& bank);

/// Two bumps at distance n/2 on the overlapping dyadic bank of order n,
/// f = c (h + T h), g = c (h - T h) scaled so that the phase distance is 1.
/// Both the Gaussian-derivative bump and the band-interior packet are tried;
/// the pair with the smaller modulus distance is returned.
InstabilityWitness instability_witness(std::size_t n, double eps, double overlap = 0.25, double sigma = 1.0);

}  // namespace cheegerlab

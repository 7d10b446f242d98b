#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cheegerlab/transform.hpp"

namespace cheegerlab {

/// Subset of a finite index set, one byte per element.
class SubsetMask {
 public:
  SubsetMask() = default;
  explicit SubsetMask(std::size_t size) : bits_(size, 0) {}
  explicit SubsetMask(std::vector<std::uint8_t> bits);

  static SubsetMask full(std::size_t size);
  /// A x T on the grid Z_N x Lambda, for the label subset T.
  static SubsetMask product(std::size_t n, const std::vector<bool>& labels);
  /// Parses the hex form produced by to_hex(); element p is bit p.
  static SubsetMask from_hex(const std::string& hex, std::size_t size);

  std::size_t size() const noexcept { return bits_.size(); }
  bool contains(std::size_t p) const { return bits_[p] != 0; }
  void set(std::size_t p, bool in) { bits_[p] = in ? 1 : 0; }
  std::size_t count() const;
  SubsetMask complement() const;
  std::string to_hex() const;
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  bool operator==(const SubsetMask&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

enum class Strategy { exhaustive, product_sets, local_search };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

struct SearchOptions {
  /// Maximum number of subset evaluations.
  std::uint64_t budget = std::uint64_t{1} << 26;
  std::size_t restarts = 32;
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
};

struct CheegerResult {
  double value = 1.0;
  SubsetMask witness;
  Strategy strategy = Strategy::exhaustive;
  bool certified = false;
  /// False when no admissible subset exists and the value is the convention.
  bool admissible_found = false;
  double numerator = 0.0;
  double denominator = 0.0;
  std::uint64_t evaluations = 0;
};

/// Largest grid accepted by the exhaustive strategy.
constexpr std::size_t kExhaustiveCap = 24;

CoefficientField restrict_to(const CoefficientField& f, const SubsetMask& s);

/// ||P_S K P_{S^c} F||^2 + ||P_{S^c} K P_S F||^2.
double commutator_norm_sq(const KernelOperator& k, const CoefficientField& f, const SubsetMask& s);
/// ||K P_S F - P_S K F||^2, the same quantity written as a single commutator.
double commutator_direct_sq(const KernelOperator& k, const CoefficientField& f, const SubsetMask& s);

struct QuotientParts {
  double commutator = 0.0;
  double mass_in = 0.0;
  double mass_out = 0.0;
  bool admissible = false;
  double value = 0.0;
};

/// Terms of the kernel Cheeger quotient at S. Admissibility requires both
/// ||P_S F|| and ||P_{S^c} F|| above 1e-12 ||F||.
QuotientParts kernel_quotient(const KernelOperator& k, const CoefficientField& f, const SubsetMask& s);

CheegerResult kernel_cheeger(const KernelOperator& k, const CoefficientField& f, Strategy strategy,
                             const SearchOptions& options = {});

/// G_S = K(P_S F - P_{S^c} F). F must lie in the range of K.
CoefficientField build_test_function(const KernelOperator& k, const CoefficientField& f, const SubsetMask& s);

struct GsIdentities {
  double lemma34_lhs = 0.0;  // || |F| - |G_S| ||^2
  double lemma34_rhs = 0.0;  // 4 ||[K,P_S]F||^2
  double lemma35_lhs = 0.0;  // inf_alpha ||F - alpha G_S||^2
  double lemma35_rhs = 0.0;  // 4 (min(||P_S F||^2, ||P_{S^c} F||^2) - ||[K,P_S]F||^2)
};

GsIdentities verify_gs_identities(const KernelOperator& k, const CoefficientField& f, const SubsetMask& s);

/// inf over unimodular alpha of ||F - alpha G||^2 in closed form; alpha ranges
/// over {+1,-1} for the real field.
double phase_infimum_sq(const CoefficientField& f, const CoefficientField& g, Field field);
/// || |F| - |G| ||.
double modulus_distance(const CoefficientField& f, const CoefficientField& g);

/// sqrt(1/C - 1); +inf at C = 0.
double stability_lower_bound(double cheeger_value);
/// 2 sqrt(1/C - 1) + 1; +inf at C = 0. Only meaningful for real problems.
double stability_upper_bound_real(double cheeger_value, Field field = Field::real);

/// Symmetric nonnegative weight on X x X, stored densely.
class Weight {
 public:
  Weight(std::size_t size, std::vector<double> values);

  /// omega(p,q) = |k(p,q)|.
  static Weight kernel_modulus(const KernelOperator& k);

  std::size_t size() const noexcept { return size_; }
  double operator()(std::size_t p, std::size_t q) const { return values_[p * size_ + q]; }
  const std::vector<double>& values() const noexcept { return values_; }
  /// max_q sum_p omega(p,q) mu_p.
  double uniform_l1(const std::vector<double>& mu) const;

 private:
  std::size_t size_;
  std::vector<double> values_;
};

CheegerResult weighted_kernel_cheeger(const CoefficientField& f, const Weight& w, Strategy strategy,
                                      const SearchOptions& options = {});

/// { p : F(p) H(p) >= 0 } for real fields.
SubsetMask sign_alignment_mask(const CoefficientField& f, const CoefficientField& h);

/// Real iff both the bank and the field values are real.
Field problem_field(const KernelOperator& k, const CoefficientField& f);

}  // namespace cheegerlab

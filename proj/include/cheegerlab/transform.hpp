#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cheegerlab/filterbank.hpp"

namespace cheegerlab {

/// Complex array F(x, lambda) on X = Z_N x Lambda, stored row-major with
/// point index p = x * |Lambda| + lambda. The measure of a point is nu_lambda.
class CoefficientField {
 public:
  CoefficientField() = default;
  CoefficientField(std::size_t n, std::vector<std::string> labels, std::vector<double> nu,
                   CVector values = {});

  static CoefficientField zeros_like(const FilterBank& bank);

  std::size_t n() const noexcept { return n_; }
  std::size_t num_labels() const noexcept { return labels_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& nu() const noexcept { return nu_; }

  std::size_t point(std::size_t x, std::size_t label) const { return x * labels_.size() + label; }
  std::size_t x_of(std::size_t p) const { return p / labels_.size(); }
  std::size_t label_of(std::size_t p) const { return p % labels_.size(); }
  double measure(std::size_t p) const { return nu_[label_of(p)]; }

  cplx& at(std::size_t x, std::size_t label) { return values_[point(x, label)]; }
  const cplx& at(std::size_t x, std::size_t label) const { return values_[point(x, label)]; }
  cplx& operator[](std::size_t p) { return values_[p]; }
  const cplx& operator[](std::size_t p) const { return values_[p]; }
  const CVector& values() const noexcept { return values_; }
  CVector& values() noexcept { return values_; }

  /// Column F(., lambda) as a signal on Z_N.
  CVector slab(std::size_t label) const;
  void set_slab(std::size_t label, const CVector& column);

  bool same_shape(const CoefficientField& other) const;
  bool is_real() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> nu_;
  CVector values_;
};

/// Weighted inner product sum_p nu_p F(p) conj(G(p)).
cplx inner(const CoefficientField& f, const CoefficientField& g);
double norm_sq(const CoefficientField& f);
double norm(const CoefficientField& f);
CoefficientField operator+(const CoefficientField& a, const CoefficientField& b);
CoefficientField operator-(const CoefficientField& a, const CoefficientField& b);
CoefficientField operator*(cplx alpha, const CoefficientField& a);
/// Pointwise modulus |F|.
CoefficientField modulus(const CoefficientField& f);

/// W f (x, lambda) = (f * psi_lambda^*)(x).
CoefficientField analyze(const FilterBank& bank, const Signal& f);
/// W^* F = sum_lambda nu_lambda F(., lambda) * psi_lambda.
Signal synthesize(const FilterBank& bank, const CoefficientField& field);

/// Projection K = W W^* onto the range of the transform.
///
/// apply() is matrix-free. The kernel k((x,l),(x',l')) = (psi_l' * psi_l^*)(x - x')
/// is tabulated once per label pair so single entries and columns are O(1)
/// lookups.
class KernelOperator {
 public:
  explicit KernelOperator(const FilterBank& bank);

  const FilterBank& bank() const noexcept { return *bank_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t num_labels() const noexcept { return num_labels_; }
  std::size_t num_points() const noexcept { return n_ * num_labels_; }
  Field field() const noexcept { return bank_->field(); }

  CoefficientField apply(const CoefficientField& g) const;

  /// k(p, q) for points p = (x, l), q = (x', l').
  cplx entry(std::size_t p, std::size_t q) const;
  cplx entry(std::size_t x, std::size_t l, std::size_t xp, std::size_t lp) const;
  /// Row of N values d -> k((d, l), (0, lp)), i.e. (psi_lp * psi_l^*)(d).
  const cplx* correlation(std::size_t l, std::size_t lp) const {
    return corr_.data() + (l * num_labels_ + lp) * n_;
  }
  /// k(p, p) = ||psi_l||^2, independent of x.
  double diagonal(std::size_t label) const { return diag_[label]; }

  /// Dense |X| x |X| matrix of the integral operator, M(p,q) = k(p,q) nu_q.
  /// Only for |X| <= 4096.
  std::vector<cplx> dense() const;

 private:
  const FilterBank* bank_;
  std::size_t n_;
  std::size_t num_labels_;
  // corr_[(l * L + lp) * N + d] = (psi_lp * psi_l^*)(d)
  CVector corr_;
  std::vector<double> diag_;
};

CoefficientField apply_kernel(const FilterBank& bank, const CoefficientField& g);
cplx kernel_entry(const FilterBank& bank, std::size_t x, std::size_t label, std::size_t xp, std::size_t labelp);

/// max over random signals of | ||W f|| - ||f|| | / ||f||.
double isometry_defect(const FilterBank& bank, std::size_t trials, std::uint64_t seed = 7);
/// max over random signals of ||W^* W f - f|| / ||f||.
double inversion_residual(const FilterBank& bank, std::size_t trials, std::uint64_t seed = 7);

Signal random_signal(std::size_t n, Field field, std::uint64_t seed);

}  // namespace cheegerlab

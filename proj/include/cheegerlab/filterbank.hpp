#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cheegerlab/harmonic.hpp"

namespace cheegerlab {

/// Finite family of filters given by their frequency profiles, with a
/// positive weight per filter.
///
/// Immutable after construction. Each filter also records its frequency
/// support (bins where the profile is exactly nonzero) so disjointness
/// questions can be answered without a floating-point threshold.
class FilterBank {
 public:
  FilterBank(std::vector<std::string> labels, std::vector<Spectrum> profiles,
             std::vector<double> nu, Field field);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return labels_.size(); }
  Field field() const noexcept { return field_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& nu() const noexcept { return nu_; }
  const Spectrum& profile(std::size_t label) const { return profiles_[label]; }
  const std::vector<Spectrum>& profiles() const noexcept { return profiles_; }
  const std::vector<std::size_t>& support(std::size_t label) const { return supports_[label]; }
  std::size_t index_of(const std::string& label) const;

  /// Spatial filter psi_lambda = idft(profile).
  const Signal& filter(std::size_t label) const { return filters_[label]; }

 private:
  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<Spectrum> profiles_;
  std::vector<double> nu_;
  Field field_ = Field::complex;
  std::vector<std::vector<std::size_t>> supports_;
  std::vector<Signal> filters_;
};

struct CalderonReport {
  double max_deviation = 0.0;
  std::size_t worst_bin = 0;
  double tolerance = 0.0;
  bool satisfied = false;
};

struct InjectivityReport {
  std::size_t rank = 0;
  std::size_t columns = 0;
  bool full_rank = false;
  std::vector<double> singular_values;
};

struct FourierMagnitudeReport {
  bool premise_holds = false;
  bool conclusion_i = false;
  bool conclusion_ii = false;
  double premise_residual = 0.0;
  double fourier_residual = 0.0;
  double per_label_residual = 0.0;
};

/// Dyadic band B_j = { xi : 2^{j-1} <= |xi|_cyc < 2^j } for j = 1 .. log2(n) - 1.
std::vector<std::size_t> dyadic_band(std::size_t n, int j);

/// Indicator bank over the dyadic bands. With the low-pass filter the DC and
/// Nyquist bins are covered as well; without it those bins are left empty.
FilterBank build_shannon(std::size_t n, bool with_lowpass = true);

/// Band supports of the widened construction, bandpass first then low-pass.
/// Band j covers lo <= |xi| < hi with lo = floor(2^{j-1}(1-eps)), hi = ceil(2^j(1+eps)),
/// clamped to 1 <= |xi| <= n/2; the low-pass covers |xi| < ceil(1+eps).
std::vector<std::vector<std::size_t>> overlapping_band_supports(std::size_t n, double eps,
                                                                bool with_lowpass);

/// Widened dyadic bands normalized bin-wise so the Calderon sum is exactly one.
/// `paper_literal` divides by the sum of squares instead of its square root.
FilterBank build_overlapping_shannon(std::size_t n, double eps, bool with_lowpass = true,
                                     bool paper_literal = false);

FilterBank build_custom(std::vector<std::string> labels, std::vector<Spectrum> profiles,
                        std::vector<double> nu, Field field);

/// Random bank on any order n with `count` filters, normalized to satisfy the
/// Calderon condition. Each bin is covered by a random subset of at least one
/// and at most `max_cover` filters. Real banks get even, real profiles.
FilterBank build_random_partition(std::size_t n, std::size_t count, Field field,
                                  std::uint64_t seed, std::size_t max_cover = 2);

/// One filter per frequency bin, |psi_xi|^2 = delta_xi.
FilterBank build_frequency_deltas(std::size_t n);

/// Single all-pass filter; the transform is the identity.
FilterBank build_identity(std::size_t n);

FilterBank scale_profiles(const FilterBank& bank, double factor);

CalderonReport check_calderon(const FilterBank& bank, double tol = 1e-10);
InjectivityReport check_spectral_injectivity(const FilterBank& bank);

FourierMagnitudeReport fourier_magnitude_consequences(const FilterBank& bank, const Signal& f,
                                                      const Signal& g, double tol);

}  // namespace cheegerlab

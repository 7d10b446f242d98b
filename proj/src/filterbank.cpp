#include "cheegerlab/filterbank.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "cheegerlab/error.hpp"

namespace cheegerlab {

namespace {

constexpr double kHermitianTol = 1e-12;

int log2_exact(std::size_t n) {
  int j = 0;
  while ((std::size_t{1} << j) < n) ++j;
  return j;
}

Spectrum indicator(const std::vector<std::size_t>& bins, std::size_t n) {
  CVector v(n, 0.0);
  for (auto xi : bins) v[xi] = 1.0;
  return Spectrum(std::move(v));
}

}  // namespace

FilterBank::FilterBank(std::vector<std::string> labels, std::vector<Spectrum> profiles,
                       std::vector<double> nu, Field field)
    : labels_(std::move(labels)), profiles_(std::move(profiles)), nu_(std::move(nu)), field_(field) {
  if (labels_.empty()) throw Error(ErrorKind::invalid_input, "filter bank needs at least one label");
  if (profiles_.size() != labels_.size() || nu_.size() != labels_.size()) {
    throw Error(ErrorKind::dimension, "labels, profiles and weights must have equal length");
  }
  n_ = profiles_.front().n();
  if (n_ == 0) throw Error(ErrorKind::invalid_input, "empty profile");
  std::set<std::string> seen;
  for (std::size_t l = 0; l < labels_.size(); ++l) {
    if (!seen.insert(labels_[l]).second) throw Error(ErrorKind::invalid_input, "duplicate label " + labels_[l]);
    if (profiles_[l].n() != n_) throw Error(ErrorKind::dimension, "profile length mismatch at " + labels_[l]);
    if (!(nu_[l] > 0.0) || !std::isfinite(nu_[l])) {
      throw Error(ErrorKind::invalid_input, "nonpositive weight for " + labels_[l]);
    }
  }
  if (field_ == Field::real) {
    for (std::size_t l = 0; l < labels_.size(); ++l) {
      const auto& p = profiles_[l];
      for (std::size_t xi = 0; xi < n_; ++xi) {
        if (std::abs(p[negate_index(xi, n_)] - std::conj(p[xi])) > kHermitianTol) {
          throw Error(ErrorKind::invalid_input, "real bank profile " + labels_[l] + " is not Hermitian");
        }
      }
    }
  }
  supports_.resize(labels_.size());
  filters_.reserve(labels_.size());
  for (std::size_t l = 0; l < labels_.size(); ++l) {
    for (std::size_t xi = 0; xi < n_; ++xi) {
      if (profiles_[l][xi] != cplx(0.0)) supports_[l].push_back(xi);
    }
    filters_.push_back(idft(profiles_[l], field_));
  }
}

std::size_t FilterBank::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error(ErrorKind::invalid_input, "unknown label " + label);
  return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<std::size_t> dyadic_band(std::size_t n, int j) {
  std::set<std::size_t> bins;
  const std::size_t lo = std::size_t{1} << (j - 1);
  const std::size_t hi = std::size_t{1} << j;
  for (std::size_t xi = 0; xi < n; ++xi) {
    const auto a = cyclic_abs(xi, n);
    if (a >= lo && a < hi) bins.insert(xi);
  }
  return {bins.begin(), bins.end()};
}

FilterBank build_shannon(std::size_t n, bool with_lowpass) {
  if (!is_power_of_two(n) || n < 4) {
    throw Error(ErrorKind::unsupported_order, "Shannon bank needs a power of two >= 4, got " + std::to_string(n));
  }
  const int levels = log2_exact(n) - 1;
  std::vector<std::string> labels;
  std::vector<Spectrum> profiles;
  for (int j = 1; j <= levels; ++j) {
    labels.push_back("psi" + std::to_string(j));
    profiles.push_back(indicator(dyadic_band(n, j), n));
  }
  if (with_lowpass) {
    labels.push_back("low");
    profiles.push_back(indicator({0, n / 2}, n));
  }
  std::vector<double> nu(labels.size(), 1.0);
  return FilterBank(std::move(labels), std::move(profiles), std::move(nu), Field::real);
}

std::vector<std::vector<std::size_t>> overlapping_band_supports(std::size_t n, double eps,
                                                                bool with_lowpass) {
  if (!is_power_of_two(n) || n < 4) {
    throw Error(ErrorKind::unsupported_order, "overlapping bank needs a power of two >= 4");
  }
  if (!(eps >= 0.0 && eps < 1.0)) throw Error(ErrorKind::invalid_input, "overlap fraction must lie in [0,1)");
  // slack absorbs rounding in the products so that eps = 0 reproduces the dyadic edges
  constexpr double slack = 1e-9;
  const int levels = log2_exact(n) - 1;
  const std::size_t half = n / 2;
  std::vector<std::vector<std::size_t>> out;
  auto band = [&](std::size_t lo, std::size_t hi) {
    std::set<std::size_t> bins;
    for (std::size_t xi = 0; xi < n; ++xi) {
      const auto a = cyclic_abs(xi, n);
      if (a >= lo && a < hi) bins.insert(xi);
    }
    return std::vector<std::size_t>(bins.begin(), bins.end());
  };
  for (int j = 1; j <= levels; ++j) {
    const double lo_edge = std::ldexp(1.0, j - 1) * (1.0 - eps);
    const double hi_edge = std::ldexp(1.0, j) * (1.0 + eps);
    auto lo = static_cast<std::size_t>(std::floor(lo_edge + slack));
    auto hi = static_cast<std::size_t>(std::ceil(hi_edge - slack));
    lo = std::max<std::size_t>(lo, 1);
    hi = std::min<std::size_t>(hi, half + 1);
    out.push_back(band(lo, hi));
  }
  if (with_lowpass) {
    auto hi = static_cast<std::size_t>(std::ceil(1.0 + eps - slack));
    auto low = band(0, std::max<std::size_t>(hi, 1));
    const bool nyquist_covered = std::any_of(out.begin(), out.end(), [&](const auto& b) {
      return std::find(b.begin(), b.end(), half) != b.end();
    });
    if (!nyquist_covered) low.push_back(half);
    std::sort(low.begin(), low.end());
    low.erase(std::unique(low.begin(), low.end()), low.end());
    out.push_back(std::move(low));
  }
  return out;
}

FilterBank build_overlapping_shannon(std::size_t n, double eps, bool with_lowpass, bool paper_literal) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::invalid_input, "overlap fraction must lie in (0,1)");
  const auto supports = overlapping_band_supports(n, eps, with_lowpass);
  const int levels = log2_exact(n) - 1;

  // adjacent bands (and low-pass with the first band) must share a bin
  auto shares = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    return !common.empty();
  };
  for (int j = 0; j + 1 < levels; ++j) {
    if (!shares(supports[j], supports[j + 1])) {
      throw Error(ErrorKind::degenerate_overlap, "eps too small to overlap bands at n=" + std::to_string(n));
    }
  }
  if (with_lowpass && !shares(supports.back(), supports.front())) {
    throw Error(ErrorKind::degenerate_overlap, "low-pass does not overlap the first band");
  }

  std::vector<double> cover(n, 0.0);
  for (const auto& s : supports) {
    for (auto xi : s) cover[xi] += 1.0;
  }
  std::vector<std::string> labels;
  std::vector<Spectrum> profiles;
  for (std::size_t b = 0; b < supports.size(); ++b) {
    const bool is_low = with_lowpass && b + 1 == supports.size();
    labels.push_back(is_low ? "low" : "psi" + std::to_string(b + 1));
    CVector v(n, 0.0);
    for (auto xi : supports[b]) v[xi] = paper_literal ? 1.0 / cover[xi] : 1.0 / std::sqrt(cover[xi]);
    profiles.emplace_back(std::move(v));
  }
  std::vector<double> nu(labels.size(), 1.0);
  return FilterBank(std::move(labels), std::move(profiles), std::move(nu), Field::real);
}

FilterBank build_custom(std::vector<std::string> labels, std::vector<Spectrum> profiles,
                        std::vector<double> nu, Field field) {
  return FilterBank(std::move(labels), std::move(profiles), std::move(nu), field);
}

FilterBank build_random_partition(std::size_t n, std::size_t count, Field field, std::uint64_t seed,
                                  std::size_t max_cover) {
  if (n == 0 || count == 0) throw Error(ErrorKind::invalid_input, "random bank needs n, count > 0");
  max_cover = std::clamp<std::size_t>(max_cover, 1, count);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(0.3, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979323846);
  std::uniform_int_distribution<std::size_t> pick(0, count - 1);
  std::uniform_int_distribution<std::size_t> cover_count(1, max_cover);

  // Independent bins: all bins for complex banks, 0..n/2 for real ones.
  std::vector<std::size_t> free_bins;
  for (std::size_t xi = 0; xi < n; ++xi) {
    if (field == Field::complex || xi <= negate_index(xi, n)) free_bins.push_back(xi);
  }
  std::vector<std::size_t> perm(count);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<std::set<std::size_t>> owners(free_bins.size());
  std::vector<bool> used(count, false);
  for (std::size_t b = 0; b < free_bins.size(); ++b) {
    const std::size_t primary = perm[b % count];
    owners[b].insert(primary);
    used[primary] = true;
    const std::size_t want = cover_count(rng);
    while (owners[b].size() < want) {
      const auto extra = pick(rng);
      owners[b].insert(extra);
      used[extra] = true;
    }
  }
  std::uniform_int_distribution<std::size_t> pick_bin(0, free_bins.size() - 1);
  for (std::size_t l = 0; l < count; ++l) {
    if (!used[l]) owners[pick_bin(rng)].insert(l);
  }

  std::vector<CVector> raw(count, CVector(n, 0.0));
  for (std::size_t b = 0; b < free_bins.size(); ++b) {
    const std::size_t xi = free_bins[b];
    const std::size_t mirror = negate_index(xi, n);
    for (auto l : owners[b]) {
      const double a = amp(rng);
      if (field == Field::real) {
        raw[l][xi] = a;
        raw[l][mirror] = a;
      } else {
        raw[l][xi] = std::polar(a, phase(rng));
      }
    }
  }
  for (std::size_t xi = 0; xi < n; ++xi) {
    double total = 0.0;
    for (std::size_t l = 0; l < count; ++l) total += std::norm(raw[l][xi]);
    const double s = 1.0 / std::sqrt(total);
    for (std::size_t l = 0; l < count; ++l) raw[l][xi] *= s;
  }
  std::vector<std::string> labels;
  std::vector<Spectrum> profiles;
  for (std::size_t l = 0; l < count; ++l) {
    labels.push_back("b" + std::to_string(l));
    profiles.emplace_back(std::move(raw[l]));
  }
  return FilterBank(std::move(labels), std::move(profiles), std::vector<double>(count, 1.0), field);
}

FilterBank build_frequency_deltas(std::size_t n) {
  std::vector<std::string> labels;
  std::vector<Spectrum> profiles;
  for (std::size_t xi = 0; xi < n; ++xi) {
    labels.push_back("xi" + std::to_string(xi));
    CVector v(n, 0.0);
    v[xi] = 1.0;
    profiles.emplace_back(std::move(v));
  }
  return FilterBank(std::move(labels), std::move(profiles), std::vector<double>(n, 1.0), Field::complex);
}

FilterBank build_identity(std::size_t n) {
  return FilterBank({"id"}, {Spectrum(CVector(n, 1.0))}, {1.0}, Field::real);
}

FilterBank scale_profiles(const FilterBank& bank, double factor) {
  std::vector<Spectrum> profiles;
  for (const auto& p : bank.profiles()) {
    CVector v = p.values();
    for (auto& z : v) z *= factor;
    profiles.emplace_back(std::move(v));
  }
  return FilterBank(bank.labels(), std::move(profiles), bank.nu(), bank.field());
}

CalderonReport check_calderon(const FilterBank& bank, double tol) {
  CalderonReport r;
  r.tolerance = tol;
  for (std::size_t xi = 0; xi < bank.n(); ++xi) {
    double sum = 0.0;
    for (std::size_t l = 0; l < bank.size(); ++l) sum += bank.nu()[l] * std::norm(bank.profile(l)[xi]);
    const double dev = std::abs(sum - 1.0);
    if (dev > r.max_deviation) {
      r.max_deviation = dev;
      r.worst_bin = xi;
    }
  }
  r.satisfied = r.max_deviation <= tol;
  return r;
}

InjectivityReport check_spectral_injectivity(const FilterBank& bank) {
  const auto rows = static_cast<Eigen::Index>(bank.size());
  const auto cols = static_cast<Eigen::Index>(bank.n());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index l = 0; l < rows; ++l) {
    for (Eigen::Index xi = 0; xi < cols; ++xi) {
      m(l, xi) = std::norm(bank.profile(static_cast<std::size_t>(l))[static_cast<std::size_t>(xi)]);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  InjectivityReport r;
  r.columns = bank.n();
  r.singular_values.assign(s.data(), s.data() + s.size());
  const double top = s.size() > 0 ? s(0) : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (top > 0.0 && s(i) > 1e-10 * top) ++r.rank;
  }
  r.full_rank = r.rank == bank.n();
  return r;
}

FourierMagnitudeReport fourier_magnitude_consequences(const FilterBank& bank, const Signal& f,
                                                      const Signal& g, double tol) {
  if (f.n() != bank.n() || g.n() != bank.n()) throw Error(ErrorKind::dimension, "signal/bank order mismatch");
  const double scale = std::max({norm(f), norm(g), 1e-300});
  const double root_n = std::sqrt(static_cast<double>(bank.n()));
  const auto fh = dft(f);
  const auto gh = dft(g);

  FourierMagnitudeReport r;
  for (std::size_t xi = 0; xi < bank.n(); ++xi) {
    r.fourier_residual = std::max(r.fourier_residual, std::abs(std::abs(fh[xi]) - std::abs(gh[xi])));
  }
  for (std::size_t l = 0; l < bank.size(); ++l) {
    CVector a(bank.n()), b(bank.n());
    for (std::size_t xi = 0; xi < bank.n(); ++xi) {
      const cplx p = std::conj(bank.profile(l)[xi]);
      a[xi] = fh[xi] * p;
      b[xi] = gh[xi] * p;
    }
    // moduli of the band-filtered spectra
    for (std::size_t xi = 0; xi < bank.n(); ++xi) {
      r.per_label_residual = std::max(r.per_label_residual, std::abs(std::abs(a[xi]) - std::abs(b[xi])) / root_n);
    }
    const CVector fa = idft(std::span<const cplx>(a));
    const CVector gb = idft(std::span<const cplx>(b));
    for (std::size_t x = 0; x < bank.n(); ++x) {
      r.premise_residual = std::max(r.premise_residual, std::abs(std::abs(fa[x]) - std::abs(gb[x])));
    }
  }
  r.premise_holds = r.premise_residual <= tol * scale;
  r.conclusion_i = r.fourier_residual <= tol * scale * root_n;
  r.conclusion_ii = r.premise_holds && r.per_label_residual <= tol * scale;
  return r;
}

}  // namespace cheegerlab

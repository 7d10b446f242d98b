#include "cheegerlab/transform.hpp"

#include <cmath>
#include <random>

#include "cheegerlab/error.hpp"

namespace cheegerlab {

namespace {

void require_bank_shape(const FilterBank& bank, const CoefficientField& f) {
  if (f.n() != bank.n() || f.num_labels() != bank.size()) {
    throw Error(ErrorKind::dimension, "coefficient field does not match the filter bank");
  }
}

void require_same_shape(const CoefficientField& a, const CoefficientField& b) {
  if (!a.same_shape(b)) throw Error(ErrorKind::dimension, "coefficient field shapes differ");
}

}  // namespace

CoefficientField::CoefficientField(std::size_t n, std::vector<std::string> labels, std::vector<double> nu,
                                   CVector values)
    : n_(n), labels_(std::move(labels)), nu_(std::move(nu)), values_(std::move(values)) {
  if (nu_.size() != labels_.size()) throw Error(ErrorKind::dimension, "labels and weights differ in length");
  if (values_.empty()) values_.assign(n_ * labels_.size(), 0.0);
  if (values_.size() != n_ * labels_.size()) throw Error(ErrorKind::dimension, "values do not fill N x |Lambda|");
  for (const auto& z : values_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error(ErrorKind::invalid_input, "non-finite coefficient");
  }
}

CoefficientField CoefficientField::zeros_like(const FilterBank& bank) {
  return CoefficientField(bank.n(), bank.labels(), bank.nu());
}

CVector CoefficientField::slab(std::size_t label) const {
  CVector out(n_);
  for (std::size_t x = 0; x < n_; ++x) out[x] = at(x, label);
  return out;
}

void CoefficientField::set_slab(std::size_t label, const CVector& column) {
  for (std::size_t x = 0; x < n_; ++x) at(x, label) = column[x];
}

bool CoefficientField::same_shape(const CoefficientField& other) const {
  return n_ == other.n_ && labels_.size() == other.labels_.size();
}

bool CoefficientField::is_real() const {
  for (const auto& z : values_) {
    if (z.imag() != 0.0) return false;
  }
  return true;
}

cplx inner(const CoefficientField& f, const CoefficientField& g) {
  require_same_shape(f, g);
  cplx acc = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) acc += f.measure(p) * f[p] * std::conj(g[p]);
  return acc;
}

double norm_sq(const CoefficientField& f) {
  double acc = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) acc += f.measure(p) * std::norm(f[p]);
  return acc;
}

double norm(const CoefficientField& f) { return std::sqrt(norm_sq(f)); }

CoefficientField operator+(const CoefficientField& a, const CoefficientField& b) {
  require_same_shape(a, b);
  CoefficientField out = a;
  for (std::size_t p = 0; p < a.size(); ++p) out[p] += b[p];
  return out;
}

CoefficientField operator-(const CoefficientField& a, const CoefficientField& b) {
  require_same_shape(a, b);
  CoefficientField out = a;
  for (std::size_t p = 0; p < a.size(); ++p) out[p] -= b[p];
  return out;
}

CoefficientField operator*(cplx alpha, const CoefficientField& a) {
  CoefficientField out = a;
  for (auto& z : out.values()) z *= alpha;
  return out;
}

CoefficientField modulus(const CoefficientField& f) {
  CoefficientField out = f;
  for (auto& z : out.values()) z = std::abs(z);
  return out;
}

CoefficientField analyze(const FilterBank& bank, const Signal& f) {
  if (f.n() != bank.n()) throw Error(ErrorKind::dimension, "signal/bank order mismatch");
  const auto fh = dft(f);
  const bool real_out = f.is_real() && bank.field() == Field::real;
  CoefficientField out = CoefficientField::zeros_like(bank);
  CVector spec(bank.n());
  for (std::size_t l = 0; l < bank.size(); ++l) {
    for (std::size_t xi = 0; xi < bank.n(); ++xi) spec[xi] = fh[xi] * std::conj(bank.profile(l)[xi]);
    CVector col = idft(std::span<const cplx>(spec));
    if (real_out) {
      for (auto& z : col) z = z.real();
    }
    out.set_slab(l, col);
  }
  return out;
}

Signal synthesize(const FilterBank& bank, const CoefficientField& field) {
  require_bank_shape(bank, field);
  const std::size_t n = bank.n();
  CVector acc(n, 0.0);
  for (std::size_t l = 0; l < bank.size(); ++l) {
    const CVector colhat = dft(std::span<const cplx>(field.slab(l)));
    for (std::size_t xi = 0; xi < n; ++xi) acc[xi] += bank.nu()[l] * colhat[xi] * bank.profile(l)[xi];
  }
  Signal out(idft(std::span<const cplx>(acc)));
  return (bank.field() == Field::real && field.is_real()) ? Signal::real_part(out) : out;
}

KernelOperator::KernelOperator(const FilterBank& bank)
    : bank_(&bank), n_(bank.n()), num_labels_(bank.size()), corr_(n_ * num_labels_ * num_labels_),
      diag_(num_labels_) {
  CVector spec(n_);
  for (std::size_t l = 0; l < num_labels_; ++l) {
    for (std::size_t lp = 0; lp < num_labels_; ++lp) {
      for (std::size_t xi = 0; xi < n_; ++xi) spec[xi] = bank.profile(lp)[xi] * std::conj(bank.profile(l)[xi]);
      const CVector c = idft(std::span<const cplx>(spec));
      std::copy(c.begin(), c.end(), corr_.begin() + static_cast<std::ptrdiff_t>((l * num_labels_ + lp) * n_));
    }
    double e = 0.0;
    for (std::size_t xi = 0; xi < n_; ++xi) e += std::norm(bank.profile(l)[xi]);
    diag_[l] = e / static_cast<double>(n_);
  }
}

CoefficientField KernelOperator::apply(const CoefficientField& g) const {
  require_bank_shape(*bank_, g);
  const bool real_out = bank_->field() == Field::real && g.is_real();
  CoefficientField out = analyze(*bank_, synthesize(*bank_, g));
  if (real_out) {
    for (auto& z : out.values()) z = z.real();
  }
  return out;
}

cplx KernelOperator::entry(std::size_t x, std::size_t l, std::size_t xp, std::size_t lp) const {
  if (x >= n_ || xp >= n_ || l >= num_labels_ || lp >= num_labels_) {
    throw Error(ErrorKind::invalid_input, "kernel index out of range");
  }
  const std::size_t d = (x + n_ - xp) % n_;
  return corr_[(l * num_labels_ + lp) * n_ + d];
}

cplx KernelOperator::entry(std::size_t p, std::size_t q) const {
  return entry(p / num_labels_, p % num_labels_, q / num_labels_, q % num_labels_);
}

std::vector<cplx> KernelOperator::dense() const {
  const std::size_t m = num_points();
  if (m > 4096) throw Error(ErrorKind::budget, "dense kernel limited to |X| <= 4096");
  std::vector<cplx> out(m * m);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) out[p * m + q] = entry(p, q) * bank_->nu()[q % num_labels_];
  }
  return out;
}

CoefficientField apply_kernel(const FilterBank& bank, const CoefficientField& g) {
  return KernelOperator(bank).apply(g);
}

cplx kernel_entry(const FilterBank& bank, std::size_t x, std::size_t label, std::size_t xp, std::size_t labelp) {
  return KernelOperator(bank).entry(x, label, xp, labelp);
}

Signal random_signal(std::size_t n, Field field, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  CVector v(n);
  for (auto& z : v) {
    const double re = gauss(rng);
    const double im = field == Field::complex ? gauss(rng) : 0.0;
    z = {re, im};
  }
  return Signal(std::move(v), field);
}

double isometry_defect(const FilterBank& bank, std::size_t trials, std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Signal f = random_signal(bank.n(), Field::complex, seed + t);
    const double nf = norm(f);
    worst = std::max(worst, std::abs(norm(analyze(bank, f)) - nf) / nf);
  }
  return worst;
}

double inversion_residual(const FilterBank& bank, std::size_t trials, std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Signal f = random_signal(bank.n(), Field::complex, seed + t);
    const Signal back = synthesize(bank, analyze(bank, f));
    worst = std::max(worst, norm(subtract(back, f)) / norm(f));
  }
  return worst;
}

}  // namespace cheegerlab

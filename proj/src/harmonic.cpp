#include "cheegerlab/harmonic.hpp"

#include <cmath>
#include <numbers>

#include "cheegerlab/error.hpp"

namespace cheegerlab {

const char* to_string(Field field) { return field == Field::real ? "real" : "complex"; }

Field field_from_string(const std::string& name) {
  if (name == "real") return Field::real;
  if (name == "complex") return Field::complex;
  throw Error(ErrorKind::invalid_input, "unknown field '" + name + "'");
}

namespace {

void require_finite(std::span<const cplx> v) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::invalid_input, "non-finite entry");
    }
  }
}

void require_same_order(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorKind::dimension,
                "group orders differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

// exp(-2 pi i k / n) for k = 0..n-1, evaluated from the exact index.
CVector twiddles(std::size_t n) {
  CVector w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    w[k] = {std::cos(angle), std::sin(angle)};
  }
  return w;
}

void fft_radix2(CVector& a, const CVector& w) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w[k * stride];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

CVector forward(std::span<const cplx> f) {
  const std::size_t n = f.size();
  if (n == 0) return {};
  const CVector w = twiddles(n);
  if (is_power_of_two(n)) {
    CVector a(f.begin(), f.end());
    fft_radix2(a, w);
    return a;
  }
  CVector out(n);
  for (std::size_t xi = 0; xi < n; ++xi) {
    cplx acc = 0.0;
    for (std::size_t x = 0; x < n; ++x) acc += f[x] * w[(x * xi) % n];
    out[xi] = acc;
  }
  return out;
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t cyclic_abs(std::size_t xi, std::size_t n) {
  xi %= n;
  return std::min(xi, n - xi);
}

std::size_t negate_index(std::size_t xi, std::size_t n) { return (n - xi % n) % n; }

Signal::Signal(CVector values, Field field) : values_(std::move(values)), field_(field) {
  require_finite(values_);
  if (field_ == Field::real) {
    for (const auto& z : values_) {
      if (z.imag() != 0.0) throw Error(ErrorKind::invalid_input, "real signal with imaginary part");
    }
  }
}

Signal Signal::zeros(std::size_t n, Field field) { return Signal(CVector(n, 0.0), field); }

Signal Signal::delta(std::size_t n, std::size_t at, Field field) {
  if (at >= n) throw Error(ErrorKind::invalid_input, "delta position out of range");
  CVector v(n, 0.0);
  v[at] = 1.0;
  return Signal(std::move(v), field);
}

Signal Signal::from_real(std::span<const double> values) {
  CVector v(values.begin(), values.end());
  return Signal(std::move(v), Field::real);
}

Signal Signal::real_part(const Signal& s) {
  CVector v(s.n());
  for (std::size_t i = 0; i < s.n(); ++i) v[i] = s[i].real();
  return Signal(std::move(v), Field::real);
}

Spectrum::Spectrum(CVector values) : values_(std::move(values)) { require_finite(values_); }

CVector dft(std::span<const cplx> f) { return forward(f); }

CVector idft(std::span<const cplx> fhat) {
  // conj(DFT(conj(F))) / N
  const std::size_t n = fhat.size();
  CVector c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = std::conj(fhat[i]);
  CVector out = forward(c);
  for (auto& z : out) z = std::conj(z) / static_cast<double>(n);
  return out;
}

Spectrum dft(const Signal& f) { return Spectrum(dft(std::span<const cplx>(f.values()))); }

Signal idft(const Spectrum& fhat) { return Signal(idft(std::span<const cplx>(fhat.values()))); }

Signal idft(const Spectrum& fhat, Field field) {
  Signal s = idft(fhat);
  return field == Field::real ? Signal::real_part(s) : s;
}

Signal convolve(const Signal& f, const Signal& g) {
  require_same_order(f.n(), g.n());
  CVector a = dft(std::span<const cplx>(f.values()));
  const CVector b = dft(std::span<const cplx>(g.values()));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  Signal out(idft(std::span<const cplx>(a)));
  return (f.is_real() && g.is_real()) ? Signal::real_part(out) : out;
}

Signal involute(const Signal& g) {
  const std::size_t n = g.n();
  CVector v(n);
  for (std::size_t x = 0; x < n; ++x) v[x] = std::conj(g[negate_index(x, n)]);
  return Signal(std::move(v), g.field());
}

Signal translate(const Signal& f, long long x0) {
  const auto n = static_cast<long long>(f.n());
  if (n == 0) return f;
  const long long shift = ((x0 % n) + n) % n;
  CVector v(f.n());
  for (long long x = 0; x < n; ++x) v[static_cast<std::size_t>((x + shift) % n)] = f[static_cast<std::size_t>(x)];
  return Signal(std::move(v), f.field());
}

Signal add(const Signal& f, const Signal& g) {
  require_same_order(f.n(), g.n());
  CVector v(f.n());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] + g[i];
  return Signal(std::move(v), f.is_real() && g.is_real() ? Field::real : Field::complex);
}

Signal subtract(const Signal& f, const Signal& g) { return add(f, scale(g, -1.0)); }

Signal scale(const Signal& f, cplx alpha) {
  CVector v(f.n());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = alpha * f[i];
  const bool stays_real = f.is_real() && alpha.imag() == 0.0;
  return Signal(std::move(v), stays_real ? Field::real : Field::complex);
}

cplx inner(const Signal& f, const Signal& g) {
  require_same_order(f.n(), g.n());
  cplx acc = 0.0;
  for (std::size_t i = 0; i < f.n(); ++i) acc += f[i] * std::conj(g[i]);
  return acc;
}

double norm_sq(const Signal& f) {
  double acc = 0.0;
  for (const auto& z : f.values()) acc += std::norm(z);
  return acc;
}

double norm(const Signal& f) { return std::sqrt(norm_sq(f)); }

}  // namespace cheegerlab

#pragma once

// Harmonic analysis on the cyclic group Z_N with counting measure.
//
// Conventions: the forward DFT is unnormalized,
//   fhat(xi) = sum_x f(x) exp(-2 pi i x xi / N),
// so Plancherel reads <f,g> = (1/N) <fhat,ghat>.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cheegerlab {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

enum class Field { real, complex };

const char* to_string(Field field);
Field field_from_string(const std::string& name);

/// Complex-valued function on Z_N with a real/complex field flag.
///
/// A real signal stores exact zeros in every imaginary part; constructing a
/// real signal from data with nonzero imaginary parts is rejected.
class Signal {
 public:
  Signal() = default;
  explicit Signal(CVector values, Field field = Field::complex);

  static Signal zeros(std::size_t n, Field field = Field::complex);
  static Signal delta(std::size_t n, std::size_t at, Field field = Field::real);
  static Signal from_real(std::span<const double> values);

  /// Drops imaginary parts and marks the signal real.
  static Signal real_part(const Signal& s);

  std::size_t n() const noexcept { return values_.size(); }
  Field field() const noexcept { return field_; }
  bool is_real() const noexcept { return field_ == Field::real; }
  const CVector& values() const noexcept { return values_; }
  const cplx& operator[](std::size_t x) const { return values_[x]; }

 private:
  CVector values_;
  Field field_ = Field::complex;
};

/// Function on the dual group, indexed by frequency xi in Z_N.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(CVector values);

  std::size_t n() const noexcept { return values_.size(); }
  const CVector& values() const noexcept { return values_; }
  const cplx& operator[](std::size_t xi) const { return values_[xi]; }

 private:
  CVector values_;
};

// Raw transforms on vectors; the Signal/Spectrum overloads wrap these.
CVector dft(std::span<const cplx> f);
CVector idft(std::span<const cplx> fhat);

Spectrum dft(const Signal& f);
/// Inverse DFT; the result is tagged complex.
Signal idft(const Spectrum& fhat);
/// Inverse DFT projected to the requested field (imaginary parts dropped for real).
Signal idft(const Spectrum& fhat, Field field);

/// Circular convolution (f*g)(x) = sum_y f(y) g(x-y).
Signal convolve(const Signal& f, const Signal& g);
/// g*(x) = conj(g(-x)).
Signal involute(const Signal& g);
/// (T_{x0} f)(x) = f(x - x0).
Signal translate(const Signal& f, long long x0);

Signal add(const Signal& f, const Signal& g);
Signal subtract(const Signal& f, const Signal& g);
Signal scale(const Signal& f, cplx alpha);

/// <f,g> = sum_x f(x) conj(g(x)).
cplx inner(const Signal& f, const Signal& g);
double norm(const Signal& f);
double norm_sq(const Signal& f);

/// Cyclic frequency magnitude min(xi, N - xi).
std::size_t cyclic_abs(std::size_t xi, std::size_t n);
/// -xi mod N.
std::size_t negate_index(std::size_t xi, std::size_t n);
bool is_power_of_two(std::size_t n);

}  // namespace cheegerlab

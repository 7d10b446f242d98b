#include <doctest.h>

#include <random>

#include "cheegerlab/error.hpp"
#include "cheegerlab/harmonic.hpp"
#include "oracles.hpp"

using namespace cheegerlab;

namespace {

CVector cv(std::initializer_list<cplx> xs) { return CVector(xs); }

void check_close(const CVector& a, const CVector& b, double tol) {
  REQUIRE(a.size() == b.size());
  CHECK(oracle::dist(a, b) <= tol);
}

}  // namespace

TEST_CASE("dft small cases") {
  check_close(dft(Signal(cv({1, 0, 0, 0}))).values(), cv({1, 1, 1, 1}), 1e-15);
  check_close(dft(Signal(cv({1, 1, 1, 1}))).values(), cv({4, 0, 0, 0}), 1e-15);
  check_close(dft(Signal(cv({0, 1, 0, 0}))).values(), cv({1, {0, -1}, -1, {0, 1}}), 1e-15);
}

TEST_CASE("idft small cases") {
  check_close(idft(Spectrum(cv({1, 1, 1, 1}))).values(), cv({1, 0, 0, 0}), 1e-15);
  check_close(idft(Spectrum(cv({0, 0}))).values(), cv({0, 0}), 0.0);
  check_close(idft(Spectrum(cv({4, 0, 0, 0}))).values(), cv({1, 1, 1, 1}), 1e-15);
}

TEST_CASE("dft matches direct summation for radix-2 and other orders") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 12u, 64u, 97u, 256u}) {
    const auto f = oracle::random_cvec(n, rng);
    const auto ref = oracle::naive_dft(f);
    CHECK(oracle::dist(dft(std::span<const cplx>(f)), ref) <= 1e-11 * oracle::l2(ref) + 1e-15);
    const auto back = idft(std::span<const cplx>(ref));
    CHECK(oracle::dist(back, f) <= 1e-12 * oracle::l2(f));
  }
}

TEST_CASE("convolution") {
  const Signal a(cv({1, 1, 0, 0}));
  check_close(convolve(a, a).values(), cv({1, 2, 1, 0}), 1e-14);

  std::mt19937_64 rng(3);
  for (std::size_t n : {4u, 7u, 32u}) {
    const Signal f(oracle::random_cvec(n, rng)), g(oracle::random_cvec(n, rng));
    const auto fg = convolve(f, g);
    check_close(fg.values(), oracle::naive_convolve(f.values(), g.values()), 1e-10 * norm(f) * norm(g));
    check_close(fg.values(), convolve(g, f).values(), 1e-10 * norm(f) * norm(g));
    check_close(convolve(f, Signal::delta(n, 0)).values(), f.values(), 1e-12 * norm(f));

    CVector prod(n);
    const auto fh = dft(f), gh = dft(g);
    for (std::size_t i = 0; i < n; ++i) prod[i] = fh[i] * gh[i];
    check_close(dft(fg).values(), prod, 1e-9 * norm(f) * norm(g));
    CHECK(std::abs(norm(fg) - norm(convolve(f, involute(g)))) <= 1e-9 * norm(fg) + 1e-12);
  }
  CHECK_THROWS_AS(convolve(Signal::zeros(3), Signal::zeros(4)), Error);
}

TEST_CASE("convolution of real signals stays real") {
  const auto f = Signal::from_real(std::vector<double>{1.0, -2.0, 0.5});
  const auto g = Signal::from_real(std::vector<double>{0.25, 3.0, 1.0});
  CHECK(convolve(f, g).is_real());
}

TEST_CASE("involution") {
  check_close(involute(Signal(cv({0, {0, 1}, 0, 0}))).values(), cv({0, 0, 0, {0, -1}}), 0.0);
  const auto even = Signal::from_real(std::vector<double>{2.0, 1.0, 5.0, 1.0});
  check_close(involute(even).values(), even.values(), 0.0);
  std::mt19937_64 rng(5);
  const Signal g(oracle::random_cvec(9, rng));
  check_close(involute(involute(g)).values(), g.values(), 0.0);
  check_close(involute(g).values(), oracle::naive_involute(g.values()), 0.0);
  const auto gh = dft(g), ih = dft(involute(g));
  for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(ih[i] - std::conj(gh[i])) <= 1e-12 * norm(g) * 3);
}

TEST_CASE("translation") {
  check_close(translate(Signal::delta(5, 0), 1).values(), Signal::delta(5, 1).values(), 0.0);
  std::mt19937_64 rng(9);
  const Signal f(oracle::random_cvec(10, rng));
  check_close(translate(f, 0).values(), f.values(), 0.0);
  CHECK(norm(translate(f, 7)) == doctest::Approx(norm(f)).epsilon(1e-15));
  check_close(translate(translate(f, 6), 7).values(), translate(f, 3).values(), 0.0);
  check_close(translate(f, -3).values(), translate(f, 7).values(), 0.0);
}

TEST_CASE("inner products and Plancherel") {
  CHECK(inner(Signal::delta(3, 0), Signal::delta(3, 1)) == cplx(0.0));
  CHECK(norm(Signal(cv({3, 4}))) == doctest::Approx(5.0));
  std::mt19937_64 rng(21);
  for (std::size_t n : {2u, 16u, 33u, 1024u}) {
    const Signal f(oracle::random_cvec(n, rng)), g(oracle::random_cvec(n, rng));
    CHECK(std::abs(inner(f, g) - std::conj(inner(g, f))) <= 1e-12 * norm(f) * norm(g));
    const auto fh = dft(f), gh = dft(g);
    cplx spec = 0.0;
    for (std::size_t i = 0; i < n; ++i) spec += fh[i] * std::conj(gh[i]);
    CHECK(std::abs(inner(f, g) - spec / static_cast<double>(n)) <= 1e-9 * norm(f) * norm(g));
  }
}

TEST_CASE("signal invariants") {
  CHECK_THROWS_AS(Signal(cv({{0, 1}}), Field::real), Error);
  CHECK_THROWS_AS(Signal(cv({std::nan("")})), Error);
  CHECK_THROWS_AS(Spectrum(cv({std::numeric_limits<double>::infinity()})), Error);
  CHECK(Signal(cv({1, 2}), Field::real).is_real());
}

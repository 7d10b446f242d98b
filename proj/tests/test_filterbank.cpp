#include <doctest.h>

#include <algorithm>
#include <random>

#include "cheegerlab/error.hpp"
#include "cheegerlab/filterbank.hpp"
#include "cheegerlab/transform.hpp"
#include "oracles.hpp"

using namespace cheegerlab;

namespace {

bool hermitian(const FilterBank& bank) {
  for (std::size_t l = 0; l < bank.size(); ++l)
    for (std::size_t xi = 0; xi < bank.n(); ++xi) {
      if (bank.profile(l)[xi] != std::conj(bank.profile(l)[negate_index(xi, bank.n())])) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("shannon bands") {
  const auto bank = build_shannon(16);
  const auto i2 = bank.index_of("psi2");
  CHECK(bank.support(i2) == std::vector<std::size_t>{2, 3, 13, 14});
  CHECK(bank.support(bank.index_of("low")) == std::vector<std::size_t>{0, 8});
  CHECK(check_calderon(bank).max_deviation <= 1e-12);
  CHECK(bank.field() == Field::real);
  CHECK(hermitian(bank));

  for (std::size_t j = 0; j < bank.size(); ++j)
    for (std::size_t k = 0; k < bank.size(); ++k) {
      if (j == k || bank.labels()[j] == "low" || bank.labels()[k] == "low") continue;
      CHECK(norm(convolve(bank.filter(j), bank.filter(k))) <= 1e-12);
    }

  const auto nolow = build_shannon(16, false);
  const auto rep = check_calderon(nolow);
  CHECK_FALSE(rep.satisfied);
  CHECK(rep.max_deviation == doctest::Approx(1.0));
  CHECK((rep.worst_bin == 0 || rep.worst_bin == 8));

  CHECK_THROWS_AS(build_shannon(12), Error);
  try {
    build_shannon(24);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported_order);
  }
}

TEST_CASE("overlapping shannon") {
  for (std::size_t n : {16u, 64u, 256u}) {
    for (double eps : {0.25, 0.5, 0.9}) {
      const auto bank = build_overlapping_shannon(n, eps);
      CHECK(check_calderon(bank).max_deviation <= 1e-12);
      CHECK(hermitian(bank));
    }
  }
  const auto bank = build_overlapping_shannon(64, 0.25);
  std::vector<std::size_t> band;
  for (std::size_t l = 0; l < bank.size(); ++l)
    if (bank.labels()[l] != "low") band.push_back(l);
  for (std::size_t i = 0; i + 1 < band.size(); ++i) {
    CHECK(norm(convolve(bank.filter(band[i]), bank.filter(band[i + 1]))) > 1e-6);
  }

  // The limit of vanishing widening is the disjoint dyadic partition.
  const auto limit = overlapping_band_supports(64, 1e-12, true);
  const auto shannon = build_shannon(64);
  REQUIRE(limit.size() == shannon.size());
  for (std::size_t l = 0; l < limit.size(); ++l) CHECK(limit[l] == shannon.support(l));

  // Outward rounding overlaps neighbours for any widening above the rounding slack.
  CHECK_NOTHROW(build_overlapping_shannon(64, 1e-3));
  CHECK_THROWS_AS(build_overlapping_shannon(64, 1e-12), Error);
  CHECK_THROWS_AS(build_overlapping_shannon(64, 0.0), Error);
  try {
    build_overlapping_shannon(64, 1e-12);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_overlap);
  }
  CHECK_THROWS_AS(build_overlapping_shannon(48, 0.25), Error);

  // Dividing by the plain sum leaves a bin covered c times at 1/c.
  const auto literal = build_overlapping_shannon(64, 0.25, true, true);
  std::vector<int> cover(64, 0);
  for (const auto& s : overlapping_band_supports(64, 0.25, true))
    for (auto xi : s) ++cover[xi];
  const int worst = *std::max_element(cover.begin(), cover.end());
  CHECK(worst == 3);
  const auto rep = check_calderon(literal);
  CHECK_FALSE(rep.satisfied);
  CHECK(rep.max_deviation == doctest::Approx(1.0 - 1.0 / worst));
}

TEST_CASE("custom banks") {
  const std::size_t n = 6;
  const Spectrum ones(CVector(n, 1.0));
  CHECK(check_calderon(build_custom({"a"}, {ones}, {1.0}, Field::real)).satisfied);
  CHECK(check_calderon(build_custom({"a", "b"}, {ones, ones}, {0.5, 0.5}, Field::real)).satisfied);
  CHECK_THROWS_AS(build_custom({}, {}, {}, Field::real), Error);
  CHECK_THROWS_AS(build_custom({"a"}, {ones}, {0.0}, Field::real), Error);
  CHECK_THROWS_AS(build_custom({"a"}, {ones}, {-1.0}, Field::real), Error);
  CHECK_THROWS_AS(build_custom({"a", "b"}, {ones}, {1.0, 1.0}, Field::real), Error);
  CHECK_THROWS_AS(build_custom({"a", "b"}, {ones, Spectrum(CVector(5, 1.0))}, {1.0, 1.0}, Field::real), Error);
  CVector skew(n, 0.0);
  skew[1] = 1.0;
  CHECK_THROWS_AS(build_custom({"a"}, {Spectrum(skew)}, {1.0}, Field::real), Error);
  CHECK_NOTHROW(build_custom({"a"}, {Spectrum(skew)}, {1.0}, Field::complex));
}

TEST_CASE("calderon report") {
  const auto zero = build_custom({"z"}, {Spectrum(CVector(8, 0.0))}, {1.0}, Field::real);
  const auto rz = check_calderon(zero);
  CHECK(rz.max_deviation == 1.0);
  CHECK_FALSE(rz.satisfied);
  const auto doubled = scale_profiles(build_shannon(16), 2.0);
  CHECK(check_calderon(doubled).max_deviation == doctest::Approx(3.0));
  for (double tol : {0.5, 3.0, 4.0}) {
    const auto r = check_calderon(doubled, tol);
    CHECK(r.satisfied == (r.max_deviation <= tol));
  }
}

TEST_CASE("spectral injectivity") {
  const auto sh = check_spectral_injectivity(build_shannon(16));
  CHECK_FALSE(sh.full_rank);
  CHECK(sh.rank == build_shannon(16).size());
  CHECK(check_spectral_injectivity(build_frequency_deltas(16)).full_rank);
  CHECK(check_spectral_injectivity(build_frequency_deltas(7)).rank == 7);

  const auto real_bank = build_random_partition(9, 12, Field::real, 4, 3);
  CHECK_FALSE(check_spectral_injectivity(real_bank).full_rank);

  // Appending filters never lowers the rank.
  const auto base = build_random_partition(8, 3, Field::complex, 2);
  std::vector<std::string> labels = base.labels();
  std::vector<Spectrum> profiles = base.profiles();
  std::vector<double> nu = base.nu();
  std::size_t last = check_spectral_injectivity(base).rank;
  for (std::size_t xi = 0; xi < 8; ++xi) {
    CVector d(8, 0.0);
    d[xi] = 1.0;
    labels.push_back("d" + std::to_string(xi));
    profiles.push_back(Spectrum(d));
    nu.push_back(1.0);
    const auto r = check_spectral_injectivity(build_custom(labels, profiles, nu, Field::complex)).rank;
    CHECK(r >= last);
    last = r;
  }
  CHECK(last == 8);
}

TEST_CASE("built-in constructors satisfy the Calderon condition") {
  for (std::size_t n : {4u, 8u, 32u}) {
    CHECK(check_calderon(build_shannon(n)).satisfied);
    CHECK(check_calderon(build_overlapping_shannon(n, 0.5)).satisfied);
  }
  CHECK(check_calderon(build_identity(10)).satisfied);
  CHECK(check_calderon(build_frequency_deltas(10)).satisfied);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = build_random_partition(5 + seed % 4, 4, seed % 2 ? Field::real : Field::complex, seed);
    CHECK(check_calderon(r).satisfied);
    if (r.field() == Field::real) CHECK(hermitian(r));
  }
}

TEST_CASE("fourier magnitude consequences") {
  const auto bank = build_overlapping_shannon(32, 0.5);
  const auto f = random_signal(32, Field::complex, 3);
  const auto rot = fourier_magnitude_consequences(bank, f, scale(f, std::polar(1.0, 0.7)), 1e-9);
  CHECK(rot.premise_holds);
  CHECK(rot.conclusion_i);
  CHECK(rot.conclusion_ii);

  const auto far = fourier_magnitude_consequences(bank, f, add(f, scale(random_signal(32, Field::complex, 4), 2.0)), 1e-9);
  CHECK_FALSE(far.premise_holds);

  // Two disjoint bands with one sign flipped: all moduli are preserved.
  const auto sh = build_shannon(32);
  const auto a = sh.filter(sh.index_of("psi2")), b = sh.filter(sh.index_of("psi4"));
  const auto flip = fourier_magnitude_consequences(sh, add(a, b), subtract(a, b), 1e-9);
  CHECK(flip.premise_holds);
  CHECK(flip.conclusion_ii);

  // Under full spectral injectivity the Fourier modulus is determined.
  const auto deltas = build_frequency_deltas(12);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto g = random_signal(12, Field::complex, 100 + s);
    auto gh = dft(g).values();
    std::mt19937_64 rng(s);
    std::uniform_real_distribution<double> ph(0.0, 6.28);
    for (auto& z : gh) z *= std::polar(1.0, ph(rng));
    const Signal g2 = idft(Spectrum(gh));
    const auto rep = fourier_magnitude_consequences(deltas, g, g2, 1e-9);
    CHECK(rep.premise_holds);
    CHECK(rep.conclusion_i);
  }
}

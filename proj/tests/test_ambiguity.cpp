#include <doctest.h>

#include <cmath>
#include <random>

#include "cheegerlab/ambiguity.hpp"
#include "cheegerlab/error.hpp"

using namespace cheegerlab;

namespace {

/// Real signal with unit spectral modulus and random phases.
Signal flat_real_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  CVector spec(n);
  for (std::size_t xi = 0; xi <= n / 2; ++xi) {
    const bool self_conj = xi == 0 || 2 * xi == n;
    spec[xi] = self_conj ? cplx(1.0, 0.0) : std::polar(1.0, ph(rng));
    spec[(n - xi) % n] = std::conj(spec[xi]);
  }
  return Signal::real_part(idft(Spectrum(spec)));
}

std::vector<std::size_t> all_labels(const FilterBank& bank) {
  std::vector<std::size_t> v(bank.size());
  for (std::size_t l = 0; l < v.size(); ++l) v[l] = l;
  return v;
}

void expect_kind(ErrorKind kind, const auto& fn) {
  try {
    fn();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
  }
}

}  // namespace

TEST_CASE("band projection examples") {
  const auto bank = build_overlapping_shannon(64, 0.25);
  const auto f = random_signal(64, Field::complex, 2);
  const auto full = band_projection(bank, f, all_labels(bank));
  CHECK(full.checked);
  CHECK(norm(subtract(full.signal, f)) < 1e-12 * norm(f));
  CHECK(full.residual < 1e-12);
  const auto none = band_projection(bank, f, {});
  CHECK(norm(none.signal) < 1e-15);

  const auto sh = build_shannon(64);
  const auto two = add(sh.filter(0), sh.filter(1));
  const auto p = band_projection(sh, two, {0});
  CHECK(p.checked);
  CHECK(p.residual < 1e-12);
  CHECK(norm(subtract(p.signal, sh.filter(0))) < 1e-12);
  CHECK(p.signal.is_real());

  // splitting the single class of a full-spectrum signal skips the check
  const auto split = band_projection(bank, f, {0, 2});
  CHECK_FALSE(split.checked);

  expect_kind(ErrorKind::precondition, [] {
    const auto holey = build_shannon(32, false);
    band_projection(holey, random_signal(32, Field::real, 1), {0});
  });
}

TEST_CASE("two-band sign flip is a nontrivial ambiguity") {
  const auto sh = build_shannon(64);
  const auto f = add(sh.filter(0), sh.filter(1));
  const auto cert = synthesize_ambiguity(sh, f, {{{0}, {1}}, {1.0, -1.0}});
  CHECK(norm(subtract(cert.g, subtract(sh.filter(0), sh.filter(1)))) < 1e-12);
  CHECK(cert.modulus_residual < 1e-10);
  CHECK(cert.coefficient_residual < 1e-12);
  CHECK(cert.orthogonality_residual < 1e-12);
  CHECK(cert.energy_residual < 1e-12);
  CHECK(cert.g.is_real());
  const double expect = 2.0 * std::min(norm(sh.filter(0)), norm(sh.filter(1)));
  CHECK(cert.phase_distance == doctest::Approx(expect).epsilon(1e-12));
  CHECK(cert.phase_distance >= 0.1 * norm(f));

  const auto same = synthesize_ambiguity(sh, f, {{{0}, {1}}, {1.0, 1.0}});
  CHECK(norm(subtract(same.g, f)) < 1e-12);
  CHECK(same.phase_distance < 1e-12);
}

TEST_CASE("invalid ambiguity specs are rejected") {
  const auto bank = build_overlapping_shannon(64, 0.25);
  const auto f = random_signal(64, Field::real, 5);
  const auto all = all_labels(bank);
  std::vector<std::size_t> a(all.begin(), all.begin() + 3), b(all.begin() + 3, all.end());
  // single class: any split is rejected
  expect_kind(ErrorKind::invalid_spec, [&] { synthesize_ambiguity(bank, f, {{a, b}, {1.0, -1.0}}); });
  // trivial spec is fine
  CHECK(synthesize_ambiguity(bank, f, {{all}, {-1.0}}).phase_distance < 1e-10);
  // the expert flag demonstrates the failure of the band identities
  AmbiguityOptions expert;
  expert.expert = true;
  const auto broken = synthesize_ambiguity(bank, f, {{a, b}, {1.0, -1.0}}, expert);
  CHECK(broken.modulus_residual > 1e-3);

  const auto sh = build_shannon(64);
  const auto two = add(sh.filter(0), sh.filter(1));
  expect_kind(ErrorKind::invalid_spec, [&] { synthesize_ambiguity(sh, two, {{{0}, {0, 1}}, {1.0, 1.0}}); });
  expect_kind(ErrorKind::invalid_spec, [&] { synthesize_ambiguity(sh, two, {{{0}}, {1.0}}); });
  expect_kind(ErrorKind::invalid_spec, [&] { synthesize_ambiguity(sh, two, {{{0}, {1}}, {1.0, 0.5}}); });
  expect_kind(ErrorKind::invalid_spec, [&] { synthesize_ambiguity(sh, two, {{{0}, {1}}, {1.0, cplx(0, 1)}}); });
  expect_kind(ErrorKind::invalid_spec, [&] { synthesize_ambiguity(sh, two, {{{0}, {1}}, {1.0}}); });
  // complex problems accept unimodular phases
  const auto ctwo = scale(two, cplx(0.0, 1.0));
  CHECK(synthesize_ambiguity(sh, ctwo, {{{0}, {1}}, {1.0, cplx(0, 1)}}).modulus_residual < 1e-10);
}

TEST_CASE("phase propagation round trip on random specs") {
  const auto sh = build_shannon(64);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 20; ++trial) {
    const bool real = trial % 2 == 0;
    const auto f = real ? flat_real_signal(64, 100 + trial) : random_signal(64, Field::complex, 100 + trial);
    const std::size_t parts = 2 + trial % 3;
    AmbiguitySpec spec;
    spec.parts.resize(parts);
    for (std::size_t l = 0; l < sh.size(); ++l) spec.parts[rng() % parts].push_back(l);
    for (std::size_t j = 0; j < parts; ++j)
      spec.signs.push_back(real ? cplx(rng() % 2 ? 1.0 : -1.0, 0.0) : std::polar(1.0, ph(rng)));
    const auto cert = synthesize_ambiguity(sh, f, spec);
    CHECK(cert.modulus_residual < 1e-9);
    CHECK(cert.orthogonality_residual < 1e-9);
    CHECK(cert.energy_residual < 1e-9);

    const auto prop = verify_phase_propagation(sh, f, cert.g);
    CHECK(prop.consistent);
    for (std::size_t j = 0; j < parts; ++j)
      for (auto l : spec.parts[j]) CHECK(std::abs(prop.label_phase[l] - spec.signs[j]) < 1e-8);
  }
}

TEST_CASE("phase propagation on trivial and perturbed pairs") {
  const auto bank = build_overlapping_shannon(64, 0.25);
  const auto f = random_signal(64, Field::complex, 3);
  const cplx alpha = std::polar(1.0, 0.7);
  const auto prop = verify_phase_propagation(bank, f, scale(f, alpha));
  CHECK(prop.consistent);
  REQUIRE(prop.class_phase.size() == 1);
  CHECK(std::abs(prop.class_phase[0] - alpha) < 1e-12);
  for (auto s : prop.label_phase) CHECK(std::abs(s - alpha) < 1e-12);

  const auto noisy = add(f, scale(random_signal(64, Field::complex, 4), 0.05));
  const auto bad = verify_phase_propagation(bank, f, noisy);
  CHECK_FALSE(bad.consistent);
  CHECK(bad.local_residual > 1e-3);
  CHECK(bad.worst_label < bank.size());
}

TEST_CASE("distinct sign patterns give distinct signals") {
  const auto sh = build_shannon(64);
  const auto f = flat_real_signal(64, 8);
  const std::size_t L = sh.size();
  std::vector<Signal> gs;
  // fix the first sign to quotient out the global one
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (L - 1)); ++bits) {
    AmbiguitySpec spec;
    for (std::size_t l = 0; l < L; ++l) {
      spec.parts.push_back({l});
      spec.signs.push_back(l > 0 && ((bits >> (l - 1)) & 1U) ? -1.0 : 1.0);
    }
    gs.push_back(synthesize_ambiguity(sh, f, spec).g);
  }
  double worst = 1e300;
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j) worst = std::min(worst, phase_distance(gs[i], gs[j], Field::real));
  CHECK(worst > 0.1 * norm(f));
}

#include "cheegerlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cheegerlab/error.hpp"

namespace cheegerlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SubsetMask random_mask(std::size_t m, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  SubsetMask s(m);
  for (std::size_t p = 0; p < m; ++p) s.set(p, coin(rng));
  return s;
}

CoefficientField random_range_element(const FilterBank& bank, Field field, std::mt19937_64& rng) {
  return analyze(bank, random_signal(bank.n(), field, rng()));
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j);
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

CheegerResult best_kernel_cheeger(const KernelOperator& k, const CoefficientField& f, const SearchOptions& options) {
  if (f.size() <= kExhaustiveCap && (std::uint64_t{1} << (f.size() - 1)) <= options.budget) {
    return kernel_cheeger(k, f, Strategy::exhaustive, options);
  }
  const auto local = kernel_cheeger(k, f, Strategy::local_search, options);
  try {
    const auto product = kernel_cheeger(k, f, Strategy::product_sets, options);
    if (product.value < local.value) {
      auto r = product;
      r.certified = r.value == 0.0;
      return r;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::budget) throw;
  }
  return local;
}

double stability_quotient(const CoefficientField& f, const CoefficientField& g, Field field) {
  const double den = modulus_distance(f, g);
  if (den <= 1e-12 * norm(f)) return 0.0;
  return std::sqrt(phase_infimum_sq(f, g, field)) / den;
}

StabilityReport empirical_stability(const FilterBank& bank, const Signal& f, const StabilityOptions& options) {
  if (f.n() != bank.n()) throw Error(ErrorKind::dimension, "signal/bank order mismatch");
  if (!(norm(f) > 0.0)) throw Error(ErrorKind::undefined_input, "stability of the zero signal is undefined");
  StabilityReport rep;
  rep.seed = options.seed;
  KernelOperator k(bank);
  const auto F = analyze(bank, f);
  rep.field = problem_field(k, F);
  rep.cheeger = best_kernel_cheeger(k, F, options.search);
  rep.lower_bound = stability_lower_bound(std::clamp(rep.cheeger.value, 0.0, 1.0));

  if (rep.field == Field::real) {
    if (rep.cheeger.certified) {
      rep.upper_bound = stability_upper_bound_real(std::clamp(rep.cheeger.value, 0.0, 1.0));
      rep.upper_source = "cheeger";
    }
  }
  try {
    const auto g = build_graph(bank, f, options.graph);
    rep.max_degree = g.max_degree();
    rep.temporal_connectivity = temporal_algebraic_connectivity(bank, f, options.graph);
    const double t = complex_upper_bound(rep.max_degree, rep.temporal_connectivity);
    if (t < rep.upper_bound) {
      rep.upper_bound = t;
      rep.upper_source = "temporal_graph";
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::inapplicable_bound && e.kind() != ErrorKind::precondition) throw;
  }

  std::mt19937_64 rng(options.seed);
  rep.witness = CoefficientField::zeros_like(bank);
  auto consider = [&](const CoefficientField& g, const char* sampler) {
    ++rep.samples_used;
    const double q = stability_quotient(F, g, rep.field);
    if (q > rep.empirical_lower) {
      rep.empirical_lower = q;
      rep.witness = g;
      rep.witness_sampler = sampler;
    }
  };
  const std::size_t total = std::max<std::size_t>(options.samples, 3);
  const std::size_t per = total / 3;
  const double fn = norm(F);

  // (a) test functions G_S around the Cheeger witness and at random masks
  const auto& w = rep.cheeger.witness;
  if (rep.cheeger.admissible_found) consider(build_test_function(k, F, w), "test_function");
  for (std::size_t i = 1; i < per; ++i) {
    SubsetMask s = random_mask(F.size(), rng);
    if (rep.cheeger.admissible_found && i % 2 == 1) {
      s = w;
      const std::size_t flips = 1 + rng() % 3;
      for (std::size_t t = 0; t < flips; ++t) {
        const std::size_t p = rng() % F.size();
        s.set(p, !s.contains(p));
      }
    }
    consider(build_test_function(k, F, s), "test_function");
  }

  // (b) perturbations of a per-class sign ambiguity
  const auto d = equivalence_decomposition(bank, f, options.graph);
  const Field sign_field = rep.field;
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  for (std::size_t i = 0; i < per; ++i) {
    CoefficientField base = F;
    if (d.classes.size() >= 2) {
      AmbiguitySpec spec;
      spec.parts = d.classes;
      spec.signs.push_back(1.0);
      for (std::size_t j = 1; j < d.classes.size(); ++j)
        spec.signs.push_back(sign_field == Field::real ? cplx(rng() % 2 ? 1.0 : -1.0, 0.0) : std::polar(1.0, phase(rng)));
      base = analyze(bank, synthesize_ambiguity(bank, f, spec).g);
    }
    const double delta = fn * std::pow(10.0, -1.0 - 9.0 * static_cast<double>(i) / static_cast<double>(per));
    const auto e = random_range_element(bank, sign_field, rng);
    consider(base + cplx(delta / norm(e), 0.0) * e, "ambiguity_perturbation");
  }

  // (c) random range elements near F
  std::uniform_real_distribution<double> scale_exp(-4.0, 0.5);
  for (std::size_t i = 0; i < total - 2 * per; ++i) {
    const auto e = random_range_element(bank, sign_field, rng);
    const double delta = fn * std::pow(10.0, scale_exp(rng));
    consider(F + cplx(delta / norm(e), 0.0) * e, "random_neighbour");
  }
  return rep;
}

Signal localized_bump(std::size_t n, double sigma) {
  if (n == 0) throw Error(ErrorKind::dimension, "empty domain");
  if (!(sigma > 0.0)) throw Error(ErrorKind::invalid_input, "bump width must be positive");
  CVector v(n);
  for (std::size_t x = 0; x < n; ++x) {
    const double t = x <= n / 2 ? static_cast<double>(x) : static_cast<double>(x) - static_cast<double>(n);
    v[x] = (2 * x == n) ? 0.0 : t * std::exp(-t * t / (2.0 * sigma * sigma));
  }
  return Signal(std::move(v), Field::real);
}

std::vector<SeparationCell> separation_sweep(const FilterBank& bank, const Signal& h, const std::vector<long long>& shifts,
                                             const SearchOptions& options) {
  if (shifts.empty()) throw Error(ErrorKind::invalid_input, "shift list is empty");
  if (h.n() != bank.n()) throw Error(ErrorKind::dimension, "signal/bank order mismatch");
  KernelOperator k(bank);
  std::vector<SeparationCell> out;
  for (long long x : shifts) {
    SeparationCell c;
    c.shift = x;
    const auto moved = translate(h, x);
    const auto f = add(h, moved);
    const auto g = subtract(h, moved);
    const auto F = analyze(bank, f);
    c.kernel = best_kernel_cheeger(k, F, options);
    c.graph = graph_cheeger(build_graph(bank, f), Strategy::exhaustive, options);
    c.quotient = stability_quotient(F, analyze(bank, g), problem_field(k, F));
    out.push_back(std::move(c));
  }
  return out;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw Error(ErrorKind::dimension, "rank correlation needs two equal samples");
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

Signal band_interior_packet(const FilterBank& bank) {
  const std::size_t n = bank.n();
  std::size_t top = 0, reach = 0;
  for (std::size_t l = 0; l < bank.size(); ++l)
    for (auto xi : bank.support(l))
      if (cyclic_abs(xi, n) > reach) reach = cyclic_abs(xi, n), top = l;
  // smallest |xi| from which the top filter alone covers the spectrum up to n/2
  std::vector<bool> only(bank.size(), false);
  only[top] = true;
  const auto h = band_profile(bank, only).values;
  std::size_t a = n / 2;
  while (a > 0 && std::abs(h[a - 1] - 1.0) <= 1e-12) --a;
  if (n - 2 * a + 2 < 3) throw Error(ErrorKind::degenerate_overlap, "the top band has no exclusive interior");
  CVector spec(n, cplx(0.0, 0.0));
  const double width = static_cast<double>(n - 2 * a + 2);
  for (std::size_t xi = a; xi <= n - a; ++xi) {
    const double s = std::sin(M_PI * static_cast<double>(xi - a + 1) / width);
    spec[xi] = s * s;
  }
  return Signal::real_part(idft(Spectrum(std::move(spec))));
}

namespace {

InstabilityWitness two_bump_pair(const FilterBank& bank, const Signal& h, double eps, const char* construction) {
  const std::size_t n = bank.n();
  const auto moved = translate(h, static_cast<long long>(n / 2));
  InstabilityWitness w;
  w.n = n;
  w.eps = eps;
  w.construction = construction;
  Signal f = add(h, moved), g = subtract(h, moved);
  const auto F = analyze(bank, f), G = analyze(bank, g);
  const double phase = std::sqrt(phase_infimum_sq(F, G, Field::real));
  if (!(phase > 0.0)) throw Error(ErrorKind::degenerate_overlap, "bumps coincide at this order");
  const double c = 1.0 / phase;
  w.f = scale(f, c);
  w.g = scale(g, c);
  w.phase_distance = phase * c;
  w.modulus_distance = modulus_distance(F, G) * c;
  w.reached = w.modulus_distance < eps;
  return w;
}

}  // namespace

InstabilityWitness instability_witness(std::size_t n, double eps, double overlap, double sigma) {
  if (!(eps > 0.0)) throw Error(ErrorKind::invalid_input, "eps must be positive");
  if (n < 8) throw Error(ErrorKind::dimension, "order too small for two separated bumps");
  const auto bank = build_overlapping_shannon(n, overlap);
  auto best = two_bump_pair(bank, localized_bump(n, sigma), eps, "gaussian_derivative");
  try {
    auto packet = two_bump_pair(bank, band_interior_packet(bank), eps, "band_interior_packet");
    if (packet.modulus_distance < best.modulus_distance) best = std::move(packet);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_overlap) throw;
  }
  return best;
}

}  // namespace cheegerlab

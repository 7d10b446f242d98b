#include "cheegerlab/cheeger_graph.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cheegerlab/error.hpp"
#include "subset_search.hpp"

namespace cheegerlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Raw {
  double threshold = 0.0;
  double energy = 0.0;
  std::vector<double> vnorm2;  // ||f * psi_l||^2
  std::vector<double> enorm2;  // ||f * psi_l * psi_l'||^2, L x L
  std::vector<std::size_t> vertices;
};

double max_filter_norm(const FilterBank& bank) {
  double best = 0.0;
  for (std::size_t l = 0; l < bank.size(); ++l) best = std::max(best, norm(bank.filter(l)));
  return best;
}

Raw raw_weights(const FilterBank& bank, const Signal& f, double tol) {
  if (f.n() != bank.n()) throw Error(ErrorKind::dimension, "signal/bank order mismatch");
  Raw r;
  r.energy = norm_sq(f);
  if (!(r.energy > 0.0)) throw Error(ErrorKind::undefined_input, "the zero signal has no graph");
  const std::size_t n = bank.n(), L = bank.size();
  const auto fh = dft(f);
  std::vector<double> pw(n);
  for (std::size_t xi = 0; xi < n; ++xi) pw[xi] = std::norm(fh[xi]);
  std::vector<std::vector<double>> mag(L, std::vector<double>(n));
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t xi = 0; xi < n; ++xi) mag[l][xi] = std::norm(bank.profile(l)[xi]);

  r.threshold = tol * std::sqrt(r.energy) * max_filter_norm(bank);
  const double inv_n = 1.0 / static_cast<double>(n);
  r.vnorm2.assign(L, 0.0);
  r.enorm2.assign(L * L, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    double s = 0.0;
    for (std::size_t xi = 0; xi < n; ++xi) s += pw[xi] * mag[l][xi];
    r.vnorm2[l] = s * inv_n;
    for (std::size_t lp = l; lp < L; ++lp) {
      double e = 0.0;
      for (std::size_t xi = 0; xi < n; ++xi) e += pw[xi] * mag[l][xi] * mag[lp][xi];
      r.enorm2[l * L + lp] = r.enorm2[lp * L + l] = e * inv_n;
    }
  }
  for (std::size_t l = 0; l < L; ++l)
    if (std::sqrt(r.vnorm2[l]) > r.threshold) r.vertices.push_back(l);
  return r;
}

bool edge_positive(const Raw& r, std::size_t l, std::size_t lp, std::size_t L) {
  return std::sqrt(r.enorm2[l * L + lp]) > r.threshold;
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

std::vector<std::vector<std::size_t>> group(UnionFind& uf, const std::vector<std::size_t>& ids) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> root_of_class;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto r = uf.find(i);
    auto it = std::find(root_of_class.begin(), root_of_class.end(), r);
    if (it == root_of_class.end()) {
      root_of_class.push_back(r);
      out.push_back({ids[i]});
    } else {
      out[static_cast<std::size_t>(it - root_of_class.begin())].push_back(ids[i]);
    }
  }
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end());
  return out;
}

double snap(double v, double scale) {
  if (std::abs(v) <= 1e-13 * scale) return 0.0;
  return std::max(0.0, v);
}

// Eigenvalues of M^{-1/2} L M^{-1/2} for a Laplacian L and positive masses.
Eigen::VectorXd normalized_spectrum(const Eigen::MatrixXd& lap, const Eigen::VectorXd& mass) {
  const Eigen::VectorXd s = mass.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd b = s.asDiagonal() * lap * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

std::size_t WeightedGraph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    std::size_t d = 0;
    for (std::size_t j = 0; j < size(); ++j) d += has_edge(i, j) ? 1 : 0;
    best = std::max(best, d);
  }
  return best;
}

WeightedGraph WeightedGraph::from_weights(std::vector<std::string> labels, std::vector<double> vertex_weight,
                                          std::vector<double> edge_weight) {
  const std::size_t k = labels.size();
  if (vertex_weight.size() != k || edge_weight.size() != k * k) {
    throw Error(ErrorKind::dimension, "graph weight arrays do not match the vertex count");
  }
  for (double w : vertex_weight)
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorKind::invalid_input, "vertex weights must be positive");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double w = edge_weight[i * k + j];
      if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::invalid_input, "edge weights must be nonnegative");
      if (w != edge_weight[j * k + i]) throw Error(ErrorKind::invalid_input, "edge weights must be symmetric");
    }
  WeightedGraph g;
  g.labels = std::move(labels);
  g.label_index.resize(k);
  std::iota(g.label_index.begin(), g.label_index.end(), 0);
  g.vertex_weight = std::move(vertex_weight);
  g.edge_weight = std::move(edge_weight);
  return g;
}

WeightedGraph build_graph(const FilterBank& bank, const Signal& f, const GraphOptions& options) {
  if (!check_calderon(bank, 1e-10).satisfied) {
    throw Error(ErrorKind::precondition, "graph weights need a bank satisfying the Calderon condition");
  }
  const Raw r = raw_weights(bank, f, options.tol);
  const std::size_t L = bank.size(), k = r.vertices.size();
  WeightedGraph g;
  g.threshold = r.threshold;
  g.signal_energy = r.energy;
  g.edge_weight.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t l = r.vertices[i];
    g.labels.push_back(bank.labels()[l]);
    g.label_index.push_back(l);
    g.vertex_weight.push_back(bank.nu()[l] * r.vnorm2[l]);
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t lp = r.vertices[j];
      if (edge_positive(r, l, lp, L)) g.edge_weight[i * k + j] = bank.nu()[l] * bank.nu()[lp] * r.enorm2[l * L + lp];
    }
  }
  return g;
}

GraphIdentityReport check_graph_identities(const WeightedGraph& g, double tol) {
  GraphIdentityReport rep;
  const std::size_t k = g.size();
  double total = 0.0;
  for (double w : g.vertex_weight) total += w;
  if (g.signal_energy > 0.0) rep.total_mass_residual = std::abs(total - g.signal_energy) / g.signal_energy;
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += g.edge(i, j);
    rep.row_sum_residual = std::max(rep.row_sum_residual, std::abs(s - g.vertex_weight[j]) / g.vertex_weight[j]);
  }
  rep.holds = rep.total_mass_residual <= tol && rep.row_sum_residual <= tol;
  return rep;
}

EquivalenceDecomposition equivalence_decomposition(const FilterBank& bank, const Signal& f,
                                                   const GraphOptions& options) {
  const Raw r = raw_weights(bank, f, options.tol);
  const std::size_t L = bank.size(), k = r.vertices.size();
  UnionFind uf(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (edge_positive(r, r.vertices[i], r.vertices[j], L)) uf.unite(i, j);
  EquivalenceDecomposition d;
  d.classes = group(uf, r.vertices);
  for (std::size_t l = 0; l < L; ++l)
    if (!std::binary_search(r.vertices.begin(), r.vertices.end(), l)) d.zero_set.push_back(l);
  return d;
}

std::vector<std::vector<std::size_t>> connected_components(const WeightedGraph& g) {
  UnionFind uf(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g.has_edge(i, j)) uf.unite(i, j);
  return group(uf, g.label_index);
}

CheegerResult graph_cheeger(const WeightedGraph& g, Strategy strategy, const SearchOptions& options) {
  const std::size_t k = g.size();
  if (k == 0) throw Error(ErrorKind::undefined_input, "graph has no vertices");
  CheegerResult res;
  res.strategy = strategy;
  res.certified = strategy != Strategy::local_search;
  res.witness = SubsetMask(k);
  if (k == 1) {
    res.value = 1.0;
    return res;
  }

  std::vector<double> cut(g.edge_weight);
  for (std::size_t i = 0; i < k; ++i) cut[i * k + i] = 0.0;
  detail::CutEngine engine(&cut, &g.vertex_weight);
  detail::SearchSettings s;
  s.budget = options.budget;
  s.threads = options.threads;
  s.restarts = options.restarts;
  s.seed = options.seed;

  detail::SearchOutcome out;
  if (strategy == Strategy::local_search) {
    out = detail::local_search(engine, {}, s);
  } else {
    if (k > kExhaustiveCap) throw Error(ErrorKind::budget, "graph too large for exhaustive search");
    if ((std::uint64_t{1} << (k - 1)) > options.budget) {
      throw Error(ErrorKind::budget, "exhaustive search needs more evaluations than the budget allows");
    }
    out = detail::exhaustive(engine, s);
  }
  res.evaluations = out.evaluations;
  if (!out.found) {
    res.value = 1.0;
    return res;
  }
  res.admissible_found = true;
  res.witness = SubsetMask(out.mask);
  double num = 0.0, in = 0.0, rest = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const bool si = res.witness.contains(i);
    (si ? in : rest) += g.vertex_weight[i];
    if (!si) continue;
    for (std::size_t j = 0; j < k; ++j)
      if (!res.witness.contains(j)) num += g.edge(i, j);
  }
  res.numerator = num;
  res.denominator = std::min(in, rest);
  res.value = num / res.denominator;
  if (res.value == 0.0) res.certified = true;
  return res;
}

BandProfile band_profile(const FilterBank& bank, const std::vector<bool>& labels) {
  if (labels.size() != bank.size()) throw Error(ErrorKind::dimension, "label subset size differs from the bank");
  BandProfile h;
  h.values.assign(bank.n(), 0.0);
  for (std::size_t l = 0; l < bank.size(); ++l) {
    if (!labels[l]) continue;
    for (std::size_t xi = 0; xi < bank.n(); ++xi) h.values[xi] += bank.nu()[l] * std::norm(bank.profile(l)[xi]);
  }
  return h;
}

BandProfileCheck check_band_profile(const FilterBank& bank, const Signal& f, const std::vector<bool>& labels,
                                    double tol) {
  if (f.n() != bank.n()) throw Error(ErrorKind::dimension, "signal/bank order mismatch");
  std::vector<bool> rest(labels.size());
  for (std::size_t l = 0; l < labels.size(); ++l) rest[l] = !labels[l];
  const auto hs = band_profile(bank, labels).values;
  const auto hc = band_profile(bank, rest).values;
  const auto fh = dft(f);
  const double cutoff = 1e-10 * std::sqrt(static_cast<double>(bank.n())) * norm(f);
  BandProfileCheck c;
  double spectral = 0.0;
  for (std::size_t xi = 0; xi < bank.n(); ++xi) {
    c.range_excess = std::max({c.range_excess, hs[xi] - 1.0, -hs[xi]});
    spectral += std::norm(fh[xi]) * hs[xi];
    if (std::abs(fh[xi]) <= cutoff) continue;
    c.partition_residual = std::max(c.partition_residual, std::abs(hs[xi] + hc[xi] - 1.0));
    const double prod = hs[xi] * hc[xi] * hc[xi] + hs[xi] * hs[xi] * hc[xi];
    c.product_residual = std::max(c.product_residual, std::abs(prod - hs[xi] * hc[xi]));
  }
  spectral /= static_cast<double>(bank.n());
  double direct = 0.0;
  for (std::size_t l = 0; l < bank.size(); ++l)
    if (labels[l]) direct += bank.nu()[l] * norm_sq(convolve(f, bank.filter(l)));
  const double e = norm_sq(f);
  c.transfer_residual = e > 0.0 ? std::abs(direct - spectral) / e : std::abs(direct - spectral);
  c.holds = c.partition_residual <= tol && c.product_residual <= tol && c.transfer_residual <= tol &&
            c.range_excess <= 1e-12;
  return c;
}

ProductCommutatorCheck product_commutator_check(const FilterBank& bank, const Signal& f,
                                                const std::vector<bool>& labels) {
  if (labels.size() != bank.size()) throw Error(ErrorKind::dimension, "label subset size differs from the bank");
  const auto g = build_graph(bank, f);
  KernelOperator k(bank);
  const auto field = analyze(bank, f);
  const auto mask = SubsetMask::product(bank.n(), labels);
  ProductCommutatorCheck c;
  c.commutator = commutator_norm_sq(k, field, mask);
  c.mass = norm_sq(restrict_to(field, mask));
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!labels[g.label_index[i]]) continue;
    c.vertex_mass += g.vertex_weight[i];
    for (std::size_t j = 0; j < g.size(); ++j)
      if (!labels[g.label_index[j]]) c.boundary += g.edge(i, j);
  }
  return c;
}

KernelVsGraph kernel_vs_graph(const FilterBank& bank, const Signal& f, const SearchOptions& options) {
  KernelOperator k(bank);
  const auto field = analyze(bank, f);
  KernelVsGraph r;
  r.kernel_value = kernel_cheeger(k, field, Strategy::exhaustive, options).value;
  r.product_value = kernel_cheeger(k, field, Strategy::product_sets, options).value;
  r.graph_value = graph_cheeger(build_graph(bank, f), Strategy::exhaustive, options).value;
  r.holds = r.kernel_value <= r.graph_value + 1e-9;
  return r;
}

double algebraic_connectivity(const WeightedGraph& g) {
  const std::size_t k = g.size();
  if (k < 2) throw Error(ErrorKind::inapplicable_bound, "algebraic connectivity needs at least two vertices");
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  Eigen::VectorXd mass(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    mass(ii) = g.vertex_weight[i];
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const auto jj = static_cast<Eigen::Index>(j);
      lap(ii, ii) += g.edge(i, j);
      lap(ii, jj) -= g.edge(i, j);
    }
  }
  const Eigen::VectorXd ev = normalized_spectrum(lap, mass);
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return snap(ev(1), scale);
}

double temporal_algebraic_connectivity(const FilterBank& bank, const Signal& f, const GraphOptions& options) {
  const auto g = build_graph(bank, f, options);
  const std::size_t k = g.size(), n = bank.n();
  if (k < 2) throw Error(ErrorKind::inapplicable_bound, "temporal connectivity needs at least two vertices");
  const auto fh = dft(f);

  // m_l(x) and m_ll'(x) from spectral products.
  std::vector<CVector> single(k);
  std::vector<CVector> pair(k * k);
  CVector spec(n);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& pi = bank.profile(g.label_index[i]);
    for (std::size_t xi = 0; xi < n; ++xi) spec[xi] = fh[xi] * std::conj(pi[xi]);
    single[i] = idft(std::span<const cplx>(spec));
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!g.has_edge(i, j)) continue;
      const auto& pj = bank.profile(g.label_index[j]);
      for (std::size_t xi = 0; xi < n; ++xi) spec[xi] = fh[xi] * std::conj(pi[xi]) * std::conj(pj[xi]);
      pair[i * k + j] = idft(std::span<const cplx>(spec));
    }
  }

  const double thr = g.threshold;
  std::vector<double> all;
  std::size_t free_vars = 0;
  double scale = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<std::size_t> pos, zero;
    std::vector<double> mass(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const double m = std::abs(single[i][x]);
      if (m > thr) {
        mass[i] = bank.nu()[g.label_index[i]] * m * m;
        pos.push_back(i);
      } else {
        zero.push_back(i);
      }
    }
    if (pos.empty()) continue;
    free_vars += pos.size();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        if (!g.has_edge(i, j)) continue;
        const double m = std::abs(pair[i * k + j][x]);
        if (!(m > thr)) continue;
        const double c = bank.nu()[g.label_index[i]] * bank.nu()[g.label_index[j]] * m * m;
        const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
        lap(ii, ii) += c;
        lap(jj, jj) += c;
        lap(ii, jj) -= c;
        lap(jj, ii) -= c;
      }
    const auto np = static_cast<Eigen::Index>(pos.size()), nz = static_cast<Eigen::Index>(zero.size());
    Eigen::MatrixXd app(np, np), apz(np, nz), azz(nz, nz);
    for (Eigen::Index a = 0; a < np; ++a) {
      for (Eigen::Index b = 0; b < np; ++b) app(a, b) = lap(static_cast<Eigen::Index>(pos[a]), static_cast<Eigen::Index>(pos[b]));
      for (Eigen::Index b = 0; b < nz; ++b) apz(a, b) = lap(static_cast<Eigen::Index>(pos[a]), static_cast<Eigen::Index>(zero[b]));
    }
    for (Eigen::Index a = 0; a < nz; ++a)
      for (Eigen::Index b = 0; b < nz; ++b) azz(a, b) = lap(static_cast<Eigen::Index>(zero[a]), static_cast<Eigen::Index>(zero[b]));
    Eigen::MatrixXd reduced = app;
    if (nz > 0) reduced -= apz * azz.completeOrthogonalDecomposition().pseudoInverse() * apz.transpose();
    reduced = 0.5 * (reduced + reduced.transpose());
    Eigen::VectorXd m(np);
    for (Eigen::Index a = 0; a < np; ++a) m(a) = mass[pos[static_cast<std::size_t>(a)]];
    const Eigen::VectorXd ev = normalized_spectrum(reduced, m);
    for (Eigen::Index a = 0; a < ev.size(); ++a) {
      all.push_back(ev(a));
      scale = std::max(scale, std::abs(ev(a)));
    }
  }
  if (free_vars < 2) throw Error(ErrorKind::inapplicable_bound, "fewer than two temporal variables carry mass");
  // Every block has the constants in its kernel; one zero direction is
  // removed by the global orthogonality constraint.
  std::sort(all.begin(), all.end());
  return snap(all[1], std::max(1.0, scale));
}

double complex_upper_bound(std::size_t max_degree, double temporal_connectivity) {
  if (!(temporal_connectivity >= 0.0)) throw Error(ErrorKind::invalid_input, "connectivity must be nonnegative");
  if (temporal_connectivity == 0.0) return kInf;
  return std::sqrt(32.0 * static_cast<double>(max_degree) / temporal_connectivity + 10.0);
}

RetrievabilityDiagnosis retrievability_diagnosis(const FilterBank& bank, const Signal& f,
                                                 const GraphOptions& options) {
  RetrievabilityDiagnosis d;
  d.decomposition = equivalence_decomposition(bank, f, options);
  d.locally_retrievable_assumed = bank.field() == Field::real && f.is_real();
  d.single_class = d.decomposition.classes.size() == 1;
  if (!d.single_class) {
    d.verdict = "not_retrievable";
  } else {
    d.verdict = d.locally_retrievable_assumed ? "retrievable" : "inconclusive";
  }
  return d;
}

}  // namespace cheegerlab

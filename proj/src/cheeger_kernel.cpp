#include "cheegerlab/cheeger_kernel.hpp"

#include <cmath>
#include <limits>

#include "cheegerlab/error.hpp"
#include "kernel_engine.hpp"
#include "subset_search.hpp"

namespace cheegerlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// norms below 1e-12 ||F|| count as zero
constexpr double kRelFloorSq = 1e-24;

void require_shape(const KernelOperator& k, const CoefficientField& f) {
  if (f.n() != k.n() || f.num_labels() != k.num_labels()) {
    throw Error(ErrorKind::dimension, "coefficient field does not match the kernel");
  }
}

void require_mask(const CoefficientField& f, const SubsetMask& s) {
  if (s.size() != f.size()) throw Error(ErrorKind::dimension, "mask size differs from |X|");
}

void require_in_range(const KernelOperator& k, const CoefficientField& f) {
  const double nf = norm(f);
  if (norm(k.apply(f) - f) > 1e-9 * nf) {
    throw Error(ErrorKind::precondition, "field is not in the range of the kernel projection");
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

detail::SearchSettings settings_for(const SearchOptions& o, double total) {
  detail::SearchSettings s;
  s.budget = o.budget;
  s.threads = o.threads;
  s.restarts = o.restarts;
  s.seed = o.seed;
  s.mass_floor = kRelFloorSq * total;
  s.zero_floor = kRelFloorSq * total;
  return s;
}

void check_exhaustive_size(std::size_t m, const SearchOptions& o, const char* what) {
  if (m > kExhaustiveCap) {
    throw Error(ErrorKind::budget, std::string(what) + " has " + std::to_string(m) +
                                       " elements; exhaustive search is capped at " +
                                       std::to_string(kExhaustiveCap));
  }
  if (m >= 1 && (std::uint64_t{1} << (m - 1)) > o.budget) {
    throw Error(ErrorKind::budget, "exhaustive search needs more evaluations than the budget allows");
  }
}

// Best A x T over label subsets T, evaluated directly.
template <class Eval>
std::pair<bool, SubsetMask> best_product(std::size_t n, std::size_t labels, const SearchOptions& o, Eval eval,
                                         std::uint64_t& evaluations) {
  if (labels > 30 || (labels >= 1 && (std::uint64_t{1} << (labels - 1)) > o.budget)) {
    throw Error(ErrorKind::budget, "too many labels for the product-set search");
  }
  bool found = false;
  double best = kInf;
  SubsetMask arg;
  const std::uint64_t count = labels == 0 ? 0 : std::uint64_t{1} << (labels - 1);
  for (std::uint64_t i = 1; i < count; ++i) {
    const std::uint64_t g = i ^ (i >> 1);
    std::vector<bool> t(labels, false);
    for (std::size_t b = 0; b + 1 < labels; ++b) t[b] = (g >> b) & 1U;
    SubsetMask s = SubsetMask::product(n, t);
    double v;
    ++evaluations;
    if (eval(s, v) && (!found || v < best)) {
      found = true;
      best = v;
      arg = s;
    }
  }
  return {found, arg};
}

std::vector<detail::Mask> arc_seeds(std::size_t n, std::size_t labels) {
  std::vector<detail::Mask> out;
  if (n < 2) return out;
  const std::size_t offsets = std::min<std::size_t>(8, n);
  for (std::size_t o = 0; o < offsets; ++o) {
    const std::size_t start = o * n / offsets;
    detail::Mask m(n * labels, 0);
    for (std::size_t x = 0; x < n; ++x) {
      if ((x + n - start) % n < n / 2) {
        for (std::size_t l = 0; l < labels; ++l) m[x * labels + l] = 1;
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

SubsetMask::SubsetMask(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

SubsetMask SubsetMask::full(std::size_t size) { return SubsetMask(std::vector<std::uint8_t>(size, 1)); }

SubsetMask SubsetMask::product(std::size_t n, const std::vector<bool>& labels) {
  SubsetMask s(n * labels.size());
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t l = 0; l < labels.size(); ++l) s.set(x * labels.size() + l, labels[l]);
  return s;
}

SubsetMask SubsetMask::from_hex(const std::string& hex, std::size_t size) {
  std::string h = hex;
  if (h.rfind("0x", 0) == 0 || h.rfind("0X", 0) == 0) h = h.substr(2);
  SubsetMask s(size);
  std::size_t bit = 0;
  for (auto it = h.rbegin(); it != h.rend(); ++it, bit += 4) {
    const int v = hex_value(*it);
    if (v < 0) throw Error(ErrorKind::parse, "invalid hex digit in mask");
    for (int b = 0; b < 4; ++b) {
      if (!((v >> b) & 1)) continue;
      if (bit + b >= size) throw Error(ErrorKind::parse, "mask has bits beyond its size");
      s.set(bit + b, true);
    }
  }
  return s;
}

std::size_t SubsetMask::count() const {
  std::size_t c = 0;
  for (auto b : bits_) c += b;
  return c;
}

SubsetMask SubsetMask::complement() const {
  SubsetMask s = *this;
  for (auto& b : s.bits_) b ^= 1U;
  return s;
}

std::string SubsetMask::to_hex() const {
  static const char* digits = "0123456789abcdef";
  const std::size_t len = std::max<std::size_t>(1, (bits_.size() + 3) / 4);
  std::string out(len, '0');
  for (std::size_t d = 0; d < len; ++d) {
    int v = 0;
    for (int b = 0; b < 4; ++b) {
      const std::size_t p = d * 4 + b;
      if (p < bits_.size() && bits_[p]) v |= 1 << b;
    }
    out[len - 1 - d] = digits[v];
  }
  return out;
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::exhaustive: return "exhaustive";
    case Strategy::product_sets: return "product";
    case Strategy::local_search: return "local";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "exhaustive") return Strategy::exhaustive;
  if (name == "product" || name == "product_sets") return Strategy::product_sets;
  if (name == "local" || name == "local_search") return Strategy::local_search;
  throw Error(ErrorKind::parse, "unknown strategy '" + name + "'");
}

CoefficientField restrict_to(const CoefficientField& f, const SubsetMask& s) {
  require_mask(f, s);
  CoefficientField out = f;
  for (std::size_t p = 0; p < f.size(); ++p)
    if (!s.contains(p)) out[p] = 0.0;
  return out;
}

double commutator_norm_sq(const KernelOperator& k, const CoefficientField& f, const SubsetMask& s) {
  require_shape(k, f);
  require_mask(f, s);
  const auto sc = s.complement();
  const auto a = restrict_to(k.apply(restrict_to(f, sc)), s);
  const auto b = restrict_to(k.apply(restrict_to(f, s)), sc);
  return norm_sq(a) + norm_sq(b);
}

double commutator_direct_sq(const KernelOperator& k, const CoefficientField& f, const SubsetMask& s) {
  require_shape(k, f);
  require_mask(f, s);
  return norm_sq(k.apply(restrict_to(f, s)) - restrict_to(k.apply(f), s));
}

QuotientParts kernel_quotient(const KernelOperator& k, const CoefficientField& f, const SubsetMask& s) {
  require_shape(k, f);
  require_mask(f, s);
  QuotientParts q;
  const double total = norm_sq(f);
  for (std::size_t p = 0; p < f.size(); ++p) {
    (s.contains(p) ? q.mass_in : q.mass_out) += f.measure(p) * std::norm(f[p]);
  }
  q.commutator = commutator_norm_sq(k, f, s);
  if (q.commutator <= kRelFloorSq * total) q.commutator = 0.0;
  const double floor = kRelFloorSq * total;
  q.admissible = q.mass_in > floor && q.mass_out > floor;
  if (q.admissible) q.value = std::clamp(q.commutator / std::min(q.mass_in, q.mass_out), 0.0, 1.0);
  return q;
}

CheegerResult kernel_cheeger(const KernelOperator& k, const CoefficientField& f, Strategy strategy,
                             const SearchOptions& options) {
  require_shape(k, f);
  const double total = norm_sq(f);
  if (!(total > 0.0)) throw Error(ErrorKind::undefined_input, "Cheeger constant of the zero field is undefined");
  const std::size_t m = f.size();
  CheegerResult res;
  res.strategy = strategy;
  res.certified = strategy == Strategy::exhaustive;

  bool found = false;
  SubsetMask witness(m);
  switch (strategy) {
    case Strategy::exhaustive: {
      check_exhaustive_size(m, options, "grid");
      if (m >= 2) {
        detail::KernelEngine engine(k, f);
        const auto out = detail::exhaustive(engine, settings_for(options, total));
        res.evaluations = out.evaluations;
        found = out.found;
        if (found) witness = SubsetMask(out.mask);
      }
      break;
    }
    case Strategy::product_sets: {
      auto [ok, s] = best_product(
          f.n(), f.num_labels(), options,
          [&](const SubsetMask& mask, double& v) {
            const auto q = kernel_quotient(k, f, mask);
            v = q.value;
            return q.admissible;
          },
          res.evaluations);
      found = ok;
      if (found) witness = s;
      break;
    }
    case Strategy::local_search: {
      auto seeds = arc_seeds(f.n(), f.num_labels());
      if (f.num_labels() >= 2 && f.num_labels() <= 16) {
        std::uint64_t ev = 0;
        auto [ok, s] = best_product(
            f.n(), f.num_labels(), options,
            [&](const SubsetMask& mask, double& v) {
              const auto q = kernel_quotient(k, f, mask);
              v = q.value;
              return q.admissible;
            },
            ev);
        res.evaluations += ev;
        if (ok) seeds.push_back(s.bits());
      }
      detail::KernelEngine engine(k, f);
      const auto out = detail::local_search(engine, seeds, settings_for(options, total));
      res.evaluations += out.evaluations;
      found = out.found;
      if (found) witness = SubsetMask(out.mask);
      break;
    }
  }

  if (found) {
    const auto q = kernel_quotient(k, f, witness);
    found = q.admissible;
    res.value = q.value;
    res.numerator = q.commutator;
    res.denominator = std::min(q.mass_in, q.mass_out);
  }
  res.admissible_found = found;
  res.witness = found ? witness : SubsetMask(m);
  if (!found) res.value = 1.0;
  // a zero quotient is the infimum whichever strategy found it
  if (found && res.value == 0.0) res.certified = true;
  return res;
}

CoefficientField build_test_function(const KernelOperator& k, const CoefficientField& f, const SubsetMask& s) {
  require_shape(k, f);
  require_mask(f, s);
  require_in_range(k, f);
  return k.apply(restrict_to(f, s) - restrict_to(f, s.complement()));
}

double modulus_distance(const CoefficientField& f, const CoefficientField& g) {
  return norm(modulus(f) - modulus(g));
}

double phase_infimum_sq(const CoefficientField& f, const CoefficientField& g, Field field) {
  const cplx ip = inner(f, g);
  cplx alpha(1.0, 0.0);
  if (field == Field::real) {
    alpha = ip.real() < 0.0 ? -1.0 : 1.0;
  } else if (std::abs(ip) > 0.0) {
    alpha = ip / std::abs(ip);
  }
  // evaluated at the optimal alpha rather than expanded, to avoid cancellation
  return norm_sq(f - alpha * g);
}

Field problem_field(const KernelOperator& k, const CoefficientField& f) {
  return (k.field() == Field::real && f.is_real()) ? Field::real : Field::complex;
}

GsIdentities verify_gs_identities(const KernelOperator& k, const CoefficientField& f, const SubsetMask& s) {
  const auto g = build_test_function(k, f, s);
  const double comm = commutator_norm_sq(k, f, s);
  double in = 0.0, out = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) (s.contains(p) ? in : out) += f.measure(p) * std::norm(f[p]);
  GsIdentities r;
  const double d = modulus_distance(f, g);
  r.lemma34_lhs = d * d;
  r.lemma34_rhs = 4.0 * comm;
  r.lemma35_lhs = phase_infimum_sq(f, g, problem_field(k, f));
  r.lemma35_rhs = 4.0 * (std::min(in, out) - comm);
  return r;
}

double stability_lower_bound(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorKind::invalid_input, "Cheeger value must lie in [0,1]");
  if (c == 0.0) return kInf;
  return std::sqrt(std::max(0.0, 1.0 / c - 1.0));
}

double stability_upper_bound_real(double c, Field field) {
  if (field != Field::real) {
    throw Error(ErrorKind::inapplicable_bound, "the Cheeger upper bound holds for real problems only");
  }
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorKind::invalid_input, "Cheeger value must lie in [0,1]");
  if (c == 0.0) return kInf;
  return 2.0 * std::sqrt(std::max(0.0, 1.0 / c - 1.0)) + 1.0;
}

Weight::Weight(std::size_t size, std::vector<double> values) : size_(size), values_(std::move(values)) {
  if (values_.size() != size_ * size_) throw Error(ErrorKind::dimension, "weight must be a square matrix");
  bool any = false;
  for (std::size_t p = 0; p < size_; ++p)
    for (std::size_t q = 0; q < size_; ++q) {
      const double w = values_[p * size_ + q];
      if (!std::isfinite(w) || w < 0.0) throw Error(ErrorKind::invalid_input, "weight entries must be finite and nonnegative");
      if (w != values_[q * size_ + p]) throw Error(ErrorKind::invalid_input, "weight must be symmetric");
      any = any || w > 0.0;
    }
  if (!any) throw Error(ErrorKind::invalid_input, "weight vanishes identically");
}

Weight Weight::kernel_modulus(const KernelOperator& k) {
  const std::size_t m = k.num_points();
  if (m > 4096) throw Error(ErrorKind::budget, "dense weights limited to |X| <= 4096");
  std::vector<double> w(m * m);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = p; q < m; ++q) {
      const double v = std::abs(k.entry(p, q));
      w[p * m + q] = v;
      w[q * m + p] = v;
    }
  return Weight(m, std::move(w));
}

double Weight::uniform_l1(const std::vector<double>& mu) const {
  double best = 0.0;
  for (std::size_t q = 0; q < size_; ++q) {
    double s = 0.0;
    for (std::size_t p = 0; p < size_; ++p) s += values_[p * size_ + q] * mu[p];
    best = std::max(best, s);
  }
  return best;
}

CheegerResult weighted_kernel_cheeger(const CoefficientField& f, const Weight& w, Strategy strategy,
                                      const SearchOptions& options) {
  const std::size_t m = f.size();
  if (w.size() != m) throw Error(ErrorKind::dimension, "weight size differs from |X|");
  if (!(norm_sq(f) > 0.0)) throw Error(ErrorKind::undefined_input, "Cheeger constant of the zero field is undefined");

  std::vector<double> mu(m), a(m), mass(m), pair(m * m, 0.0);
  for (std::size_t p = 0; p < m; ++p) {
    mu[p] = f.measure(p);
    a[p] = mu[p] * std::norm(f[p]);
  }
  for (std::size_t y = 0; y < m; ++y) {
    double col = 0.0;
    for (std::size_t x = 0; x < m; ++x) col += w(x, y) * mu[x];
    mass[y] = a[y] * col;
  }
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      if (x != y) pair[x * m + y] = w(x, y) * (mu[x] * a[y] + mu[y] * a[x]);

  double total = 0.0;
  for (double v : mass) total += v;
  const double l1 = w.uniform_l1(mu);

  detail::CutEngine engine(&pair, &mass);
  detail::SearchSettings s;
  s.budget = options.budget;
  s.threads = options.threads;
  s.restarts = options.restarts;
  s.seed = options.seed;
  s.mass_floor = kRelFloorSq * total;
  s.zero_floor = 0.0;

  CheegerResult res;
  res.strategy = strategy;
  res.certified = strategy == Strategy::exhaustive;
  bool found = false;
  SubsetMask witness(m);

  auto eval = [&](const SubsetMask& mask, double& v) {
    engine.reset(mask.bits());
    return detail::quotient(engine.current(), total, s, v);
  };

  switch (strategy) {
    case Strategy::exhaustive: {
      check_exhaustive_size(m, options, "grid");
      if (m >= 2 && total > 0.0) {
        const auto out = detail::exhaustive(engine, s);
        res.evaluations = out.evaluations;
        found = out.found;
        if (found) witness = SubsetMask(out.mask);
      }
      break;
    }
    case Strategy::product_sets: {
      auto [ok, best] = best_product(f.n(), f.num_labels(), options, eval, res.evaluations);
      found = ok;
      if (found) witness = best;
      break;
    }
    case Strategy::local_search: {
      auto seeds = arc_seeds(f.n(), f.num_labels());
      const auto out = detail::local_search(engine, seeds, s);
      res.evaluations = out.evaluations;
      found = out.found;
      if (found) witness = SubsetMask(out.mask);
      break;
    }
  }

  res.admissible_found = found;
  res.witness = witness;
  if (found) {
    double num = 0.0, in = 0.0, out = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
      (witness.contains(p) ? in : out) += mass[p];
      if (!witness.contains(p)) continue;
      for (std::size_t q = 0; q < m; ++q)
        if (!witness.contains(q)) num += pair[p * m + q];
    }
    res.numerator = num;
    res.denominator = std::min(in, out);
    res.value = num / res.denominator;
    if (res.value == 0.0) res.certified = true;
  } else {
    res.value = 1.0 / (l1 * l1);
  }
  return res;
}

SubsetMask sign_alignment_mask(const CoefficientField& f, const CoefficientField& h) {
  if (!f.same_shape(h)) throw Error(ErrorKind::dimension, "fields differ in shape");
  if (!f.is_real() || !h.is_real()) throw Error(ErrorKind::invalid_input, "sign alignment needs real fields");
  SubsetMask s(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) s.set(p, f[p].real() * h[p].real() >= 0.0);
  return s;
}

}  // namespace cheegerlab

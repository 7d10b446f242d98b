#include "cheegerlab/ambiguity.hpp"

#include <algorithm>
#include <cmath>

#include "cheegerlab/error.hpp"

namespace cheegerlab {

namespace {

Field signal_field(const FilterBank& bank, const Signal& f) {
  return bank.field() == Field::real && f.is_real() ? Field::real : Field::complex;
}

void require_calderon(const FilterBank& bank) {
  if (!check_calderon(bank, 1e-10).satisfied) {
    throw Error(ErrorKind::precondition, "band projections need a bank satisfying the Calderon condition");
  }
}

Signal project(const FilterBank& bank, const Signal& f, const std::vector<bool>& in) {
  const auto fh = dft(f);
  const auto h = band_profile(bank, in).values;
  CVector spec(bank.n());
  for (std::size_t xi = 0; xi < bank.n(); ++xi) spec[xi] = fh[xi] * h[xi];
  return idft(Spectrum(std::move(spec)), signal_field(bank, f));
}

std::vector<bool> membership(std::size_t size, const std::vector<std::size_t>& labels) {
  std::vector<bool> in(size, false);
  for (auto l : labels) {
    if (l >= size) throw Error(ErrorKind::invalid_input, "label index out of range");
    in[l] = true;
  }
  return in;
}

bool is_union_of_classes(const EquivalenceDecomposition& d, const std::vector<bool>& in) {
  for (const auto& c : d.classes)
    for (auto l : c)
      if (in[l] != in[c.front()]) return false;
  return true;
}

Signal band(const FilterBank& bank, const Signal& f, std::size_t l) { return convolve(f, involute(bank.filter(l))); }

}  // namespace

double phase_distance(const Signal& f, const Signal& g, Field field) {
  if (f.n() != g.n()) throw Error(ErrorKind::dimension, "signal orders differ");
  const cplx c = inner(f, g);
  cplx alpha(1.0, 0.0);
  if (field == Field::real) {
    alpha = c.real() < 0.0 ? -1.0 : 1.0;
  } else if (std::abs(c) > 0.0) {
    alpha = c / std::abs(c);
  }
  return norm(subtract(f, scale(g, alpha)));
}

BandProjection band_projection(const FilterBank& bank, const Signal& f, const std::vector<std::size_t>& labels,
                               const GraphOptions& options) {
  if (f.n() != bank.n()) throw Error(ErrorKind::dimension, "signal/bank order mismatch");
  require_calderon(bank);
  const auto in = membership(bank.size(), labels);
  BandProjection out{project(bank, f, in), false, 0.0};
  const double fn = norm(f);
  if (fn == 0.0) {
    out.checked = true;
    return out;
  }
  if (!is_union_of_classes(equivalence_decomposition(bank, f, options), in)) return out;
  out.checked = true;
  for (std::size_t l = 0; l < bank.size(); ++l) {
    const auto lhs = band(bank, out.signal, l);
    const auto rhs = in[l] ? band(bank, f, l) : Signal::zeros(bank.n());
    out.residual = std::max(out.residual, norm(subtract(lhs, rhs)) / fn);
  }
  return out;
}

AmbiguityCertificate synthesize_ambiguity(const FilterBank& bank, const Signal& f, const AmbiguitySpec& spec,
                                          const AmbiguityOptions& options) {
  if (f.n() != bank.n()) throw Error(ErrorKind::dimension, "signal/bank order mismatch");
  require_calderon(bank);
  if (spec.parts.size() != spec.signs.size()) throw Error(ErrorKind::invalid_spec, "one sign per part is required");
  if (spec.parts.empty()) throw Error(ErrorKind::invalid_spec, "the partition is empty");
  const Field field = signal_field(bank, f);
  for (const auto& s : spec.signs) {
    if (std::abs(std::abs(s) - 1.0) > 1e-12) throw Error(ErrorKind::invalid_spec, "signs must be unimodular");
    if (field == Field::real && std::abs(s.imag()) > 1e-12) {
      throw Error(ErrorKind::invalid_spec, "real problems only admit signs +1 and -1");
    }
  }
  const auto d = equivalence_decomposition(bank, f, options.graph);
  std::vector<int> owner(bank.size(), -1);
  std::vector<std::vector<bool>> members;
  for (std::size_t j = 0; j < spec.parts.size(); ++j) {
    for (auto l : spec.parts[j]) {
      if (l >= bank.size()) throw Error(ErrorKind::invalid_spec, "label index out of range");
      if (owner[l] >= 0) throw Error(ErrorKind::invalid_spec, "parts overlap at label " + bank.labels()[l]);
      owner[l] = static_cast<int>(j);
    }
    members.push_back(membership(bank.size(), spec.parts[j]));
    if (!options.expert && !is_union_of_classes(d, members.back())) {
      throw Error(ErrorKind::invalid_spec, "part " + std::to_string(j) + " splits an equivalence class");
    }
  }
  for (const auto& c : d.classes)
    for (auto l : c)
      if (owner[l] < 0) throw Error(ErrorKind::invalid_spec, "label " + bank.labels()[l] + " is not covered");

  AmbiguityCertificate cert;
  const double e = norm_sq(f);
  std::vector<Signal> pieces;
  CVector acc(bank.n(), cplx(0.0, 0.0));
  double total = 0.0;
  for (std::size_t j = 0; j < spec.parts.size(); ++j) {
    pieces.push_back(project(bank, f, members[j]));
    cert.part_energy.push_back(norm_sq(pieces.back()));
    total += cert.part_energy.back();
    for (std::size_t x = 0; x < bank.n(); ++x) acc[x] += spec.signs[j] * pieces.back()[x];
  }
  cert.g = Signal(std::move(acc), field);
  if (field == Field::real) cert.g = Signal::real_part(cert.g);
  for (std::size_t j = 0; j < pieces.size(); ++j)
    for (std::size_t k = j + 1; k < pieces.size(); ++k)
      cert.orthogonality_residual = std::max(cert.orthogonality_residual, std::abs(inner(pieces[j], pieces[k])) / e);
  cert.energy_residual = std::abs(total - e) / e;

  const auto wf = analyze(bank, f);
  const auto wg = analyze(bank, cert.g);
  const double fn = std::sqrt(e);
  cert.modulus_residual = modulus_distance(wf, wg) / fn;
  for (std::size_t l = 0; l < bank.size(); ++l) {
    const cplx sigma = owner[l] >= 0 ? spec.signs[static_cast<std::size_t>(owner[l])] : cplx(0.0, 0.0);
    double r = 0.0;
    for (std::size_t x = 0; x < bank.n(); ++x) r += std::norm(wg.at(x, l) - sigma * wf.at(x, l));
    if (owner[l] < 0 && d.zero_set.end() != std::find(d.zero_set.begin(), d.zero_set.end(), l)) continue;
    cert.coefficient_residual = std::max(cert.coefficient_residual, std::sqrt(r) / fn);
  }
  cert.phase_distance = phase_distance(f, cert.g, field);
  return cert;
}

PhasePropagation verify_phase_propagation(const FilterBank& bank, const Signal& f, const Signal& g, double tol,
                                          const GraphOptions& options) {
  if (f.n() != bank.n() || g.n() != bank.n()) throw Error(ErrorKind::dimension, "signal/bank order mismatch");
  PhasePropagation out;
  out.decomposition = equivalence_decomposition(bank, f, options);
  const double fn = norm(f);
  const auto wf = analyze(bank, f);
  const auto wg = analyze(bank, g);
  out.modulus_residual = modulus_distance(wf, wg) / fn;

  out.label_phase.assign(bank.size(), cplx(1.0, 0.0));
  std::vector<bool> active(bank.size(), false);
  for (const auto& c : out.decomposition.classes)
    for (auto l : c) active[l] = true;
  for (std::size_t l = 0; l < bank.size(); ++l) {
    cplx a(0.0, 0.0);
    for (std::size_t x = 0; x < bank.n(); ++x) a += wg.at(x, l) * std::conj(wf.at(x, l));
    if (active[l] && std::abs(a) > 0.0) out.label_phase[l] = a / std::abs(a);
    const cplx sigma = active[l] ? out.label_phase[l] : cplx(0.0, 0.0);
    double r = 0.0;
    for (std::size_t x = 0; x < bank.n(); ++x) r += std::norm(wg.at(x, l) - sigma * wf.at(x, l));
    r = std::sqrt(r) / fn;
    if (r > out.local_residual) {
      out.local_residual = r;
      out.worst_label = l;
    }
  }
  for (const auto& c : out.decomposition.classes) {
    const cplx ref = out.label_phase[c.front()];
    out.class_phase.push_back(ref);
    for (auto l : c) out.class_residual = std::max(out.class_residual, std::abs(out.label_phase[l] - ref));
  }
  out.consistent = out.modulus_residual <= tol && out.local_residual <= tol && out.class_residual <= tol;
  return out;
}

}  // namespace cheegerlab

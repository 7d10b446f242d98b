// Acceptance run: one PASS/FAIL line per criterion.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cheegerlab/experiments.hpp"

using namespace cheegerlab;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail, Clock::time_point start) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%s [%2d] %s: %s (%.2f s)\n", ok ? "PASS" : "FAIL", id, name, detail.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

SubsetMask random_mask(std::size_t m, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  SubsetMask s(m);
  for (std::size_t p = 0; p < m; ++p) s.set(p, coin(rng));
  return s;
}

struct Instance {
  FilterBank bank;
  Signal f;
};

/// Small banks and signals with N |Lambda| <= 20, half real and half complex.
std::vector<Instance> small_corpus() {
  const std::array<std::pair<std::size_t, std::size_t>, 5> shapes{{{5, 4}, {4, 5}, {4, 4}, {6, 3}, {10, 2}}};
  std::vector<Instance> out;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto [n, l] = shapes[i % shapes.size()];
    const Field field = i % 2 == 0 ? Field::real : Field::complex;
    out.push_back({build_random_partition(n, l, field, 100 + i, 3), random_signal(n, field, 200 + i)});
  }
  return out;
}

/// Graph with self-loops closing the row sums, so that sum_i w_ij = w_j.
WeightedGraph random_graph(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::bernoulli_distribution keep(0.5);
  std::vector<double> w(k, 0.0), e(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (keep(rng)) e[i * k + j] = e[j * k + i] = u(rng);
  for (std::size_t i = 0; i < k; ++i) {
    e[i * k + i] = u(rng);
    for (std::size_t j = 0; j < k; ++j) w[i] += e[i * k + j];
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) labels.push_back("v" + std::to_string(i));
  return WeightedGraph::from_weights(labels, w, e);
}

bool cheeger_inequality(const WeightedGraph& g, double& worst) {
  if (g.size() < 2) return true;
  const double h = graph_cheeger(g, Strategy::exhaustive).value;
  const double a = algebraic_connectivity(g);
  const double d = static_cast<double>(g.max_degree());
  const double upper_gap = a - 2.0 * h;
  const double lower_gap = h * h / (2.0 * d) - a;
  worst = std::max({worst, upper_gap, lower_gap});
  return upper_gap <= 1e-9 && lower_gap <= 1e-9;
}

std::string run_command(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return out + "\n<status " + std::to_string(status) + ">";
}

void criterion_isometry() {
  const auto start = Clock::now();
  double defect = 0.0, residual = 0.0;
  for (std::size_t n : {16, 64, 256}) {
    for (const auto& bank : {build_shannon(n), build_overlapping_shannon(n, 0.25)}) {
      defect = std::max(defect, isometry_defect(bank, 100, n));
      residual = std::max(residual, inversion_residual(bank, 100, n + 1));
    }
  }
  const bool fast = std::chrono::duration<double>(Clock::now() - start).count() < 5.0;
  report(1, "isometry and inversion", defect <= 1e-9 && residual <= 1e-9 && fast,
         fmt("max defect %.3g, max inversion residual %.3g", defect, residual), start);
}

void criterion_gs_identities() {
  const auto start = Clock::now();
  const auto bank = build_random_partition(5, 4, Field::real, 2024, 3);
  KernelOperator k(bank);
  std::mt19937_64 rng(31);
  double eq = 0.0, ineq = -1e300;
  for (int t = 0; t < 50; ++t) {
    const auto F = analyze(bank, random_signal(5, Field::real, 1000 + t));
    const double scale = norm_sq(F);
    for (int s = 0; s < 200; ++s) {
      const auto id = verify_gs_identities(k, F, random_mask(F.size(), rng));
      const double denom = std::max(std::abs(id.lemma35_rhs), scale * 1e-12);
      eq = std::max(eq, std::abs(id.lemma35_lhs - id.lemma35_rhs) / denom);
      ineq = std::max(ineq, (id.lemma34_lhs - id.lemma34_rhs) / scale);
    }
  }
  const bool fast = std::chrono::duration<double>(Clock::now() - start).count() < 10.0;
  report(2, "test-function identities", eq <= 1e-9 && ineq <= 1e-12 && fast,
         fmt("max relative equality gap %.3g, max inequality excess %.3g", eq, ineq), start);
}

void criterion_witness_and_real_bound(const std::vector<Instance>& corpus) {
  auto start = Clock::now();
  double worst3 = 1e300;
  std::size_t positive = 0;
  bool ok3 = true;
  std::vector<std::pair<const Instance*, CheegerResult>> certified;
  for (const auto& inst : corpus) {
    KernelOperator k(inst.bank);
    const auto F = analyze(inst.bank, inst.f);
    const auto r = kernel_cheeger(k, F, Strategy::exhaustive);
    ok3 = ok3 && r.certified;
    certified.emplace_back(&inst, r);
    if (!(r.value > 0.0) || !r.admissible_found) continue;
    ++positive;
    const auto G = build_test_function(k, F, r.witness);
    const double num = std::sqrt(phase_infimum_sq(F, G, problem_field(k, F)));
    const double den = modulus_distance(F, G);
    const double q = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
    const double margin = q - (stability_lower_bound(r.value) - 1e-6);
    worst3 = std::min(worst3, margin);
    ok3 = ok3 && margin >= 0.0;
  }
  const bool fast3 = std::chrono::duration<double>(Clock::now() - start).count() < 120.0;
  report(3, "witness lower bound", ok3 && fast3 && positive > 0,
         fmt("%g instances with positive constant, smallest margin %.3g", static_cast<double>(positive), worst3), start);

  start = Clock::now();
  bool ok4 = true;
  double worst4 = -1e300;
  std::size_t real_instances = 0;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> expo(-6.0, 0.5);
  for (const auto& [inst, r] : certified) {
    if (inst->bank.field() != Field::real) continue;
    ++real_instances;
    KernelOperator k(inst->bank);
    const auto F = analyze(inst->bank, inst->f);
    const double bound = stability_upper_bound_real(r.value);
    for (int t = 0; t < 1000; ++t) {
      auto H = analyze(inst->bank, random_signal(inst->bank.n(), Field::real, rng()));
      if (t % 2 == 1) {
        // perturbations of +-F probe the regime where both sides are small
        const double sign = t % 4 == 1 ? 1.0 : -1.0;
        H = cplx(sign, 0.0) * F + cplx(std::pow(10.0, expo(rng)) * norm(F) / norm(H), 0.0) * H;
      }
      const double lhs = std::min(norm(F - H), norm(F + H));
      const double md = modulus_distance(F, H);
      if (std::isinf(bound)) continue;
      const double excess = lhs - (bound * md + 1e-9);
      worst4 = std::max(worst4, excess);
      ok4 = ok4 && excess <= 0.0;
    }
  }
  const bool fast4 = std::chrono::duration<double>(Clock::now() - start).count() < 120.0;
  report(4, "real upper bound", ok4 && fast4 && real_instances > 0,
         fmt("%g real instances x 1000 samples, largest excess %.3g", static_cast<double>(real_instances), worst4),
         start);
}

void criterion_kernel_vs_graph(const std::vector<Instance>& corpus) {
  const auto start = Clock::now();
  bool ok = true;
  double gap = -1e300, product_gap = 0.0;
  for (const auto& inst : corpus) {
    const auto r = kernel_vs_graph(inst.bank, inst.f);
    gap = std::max(gap, r.kernel_value - r.graph_value);
    product_gap = std::max(product_gap, std::abs(r.product_value - r.graph_value));
    ok = ok && r.holds && std::abs(r.product_value - r.graph_value) <= 1e-9;
  }
  report(5, "kernel constant below graph constant", ok,
         fmt("max(kernel - graph) %.3g, max |product - graph| %.3g", gap, product_gap), start);
}

std::vector<Instance> graph_corpus(const std::vector<Instance>& small) {
  std::vector<Instance> out = small;
  for (std::size_t n : {16, 64, 256}) {
    out.push_back({build_shannon(n), random_signal(n, Field::real, n)});
    out.push_back({build_overlapping_shannon(n, 0.25), random_signal(n, Field::complex, n + 1)});
    out.push_back({build_overlapping_shannon(n, 0.25), localized_bump(n)});
  }
  const auto sh = build_shannon(64);
  out.push_back({sh, add(sh.filter(0), sh.filter(1))});
  return out;
}

void criterion_graph_inequality(const std::vector<Instance>& corpus) {
  const auto start = Clock::now();
  std::mt19937_64 rng(5);
  bool ok = true;
  double worst = -1e300;
  for (int t = 0; t < 100; ++t) ok = cheeger_inequality(random_graph(2 + t % 9, rng), worst) && ok;
  std::size_t built = 0;
  for (const auto& inst : corpus) {
    ok = cheeger_inequality(build_graph(inst.bank, inst.f), worst) && ok;
    ++built;
  }
  report(6, "graph Cheeger inequality", ok,
         fmt("100 random graphs and %g corpus graphs, largest violation %.3g", static_cast<double>(built), worst), start);
}

void criterion_ambiguity() {
  const auto start = Clock::now();
  const auto sh = build_shannon(64);
  const auto f = add(sh.filter(0), sh.filter(1));
  const auto cert = synthesize_ambiguity(sh, f, {{{0}, {1}}, {1.0, -1.0}});
  const double fn = norm(f);
  bool ok = cert.modulus_residual <= 1e-9 && cert.phase_distance >= 0.1 * fn;

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const bool real = t % 2 == 0;
    const auto g0 = random_signal(64, real ? Field::real : Field::complex, 300 + t);
    const std::size_t parts = 2 + t % 4;
    AmbiguitySpec spec;
    spec.parts.resize(parts);
    for (std::size_t l = 0; l < sh.size(); ++l) spec.parts[rng() % parts].push_back(l);
    for (std::size_t j = 0; j < parts; ++j)
      spec.signs.push_back(real ? cplx(rng() % 2 ? 1.0 : -1.0, 0.0) : std::polar(1.0, ph(rng)));
    const auto c = synthesize_ambiguity(sh, g0, spec);
    const auto prop = verify_phase_propagation(sh, g0, c.g);
    ok = ok && prop.consistent;
    for (std::size_t j = 0; j < parts; ++j)
      for (auto l : spec.parts[j]) worst = std::max(worst, std::abs(prop.label_phase[l] - spec.signs[j]));
  }
  ok = ok && worst <= 1e-8;
  report(7, "ambiguity certificate", ok,
         fmt("modulus residual %.3g, phase distance %.3g ||f||, round-trip sign error %.3g", cert.modulus_residual,
             cert.phase_distance / fn, worst),
         start);
}

void criterion_separation() {
  const auto start = Clock::now();
  const std::size_t n = 256;
  const auto bank = build_overlapping_shannon(n, 0.25);
  const auto h = localized_bump(n);
  const auto gh = build_graph(bank, h);
  const bool connected = connected_components(gh).size() == 1;
  const double ch = graph_cheeger(gh, Strategy::exhaustive).value;
  const auto cells = separation_sweep(bank, h, {1, static_cast<long long>(n / 2)});
  const auto& near = cells[0];
  const auto& far = cells[1];
  const bool fast = std::chrono::duration<double>(Clock::now() - start).count() < 60.0;
  const bool ok = connected && far.kernel.value <= 0.1 && far.graph.value >= ch / 4.0 - 1e-9 &&
                  far.quotient >= 5.0 * near.quotient && fast;
  report(8, "separation", ok,
         fmt("kernel %.4g at N/2, graph %.4g vs C_G(h)/4 = ", far.kernel.value, far.graph.value) +
             fmt("%.4g, quotient ratio %.3g", ch / 4.0, far.quotient / near.quotient),
         start);
}

void criterion_graph_identities(const std::vector<Instance>& corpus) {
  const auto start = Clock::now();
  bool ok = true;
  double total = 0.0, row = 0.0;
  std::size_t count = 0;
  for (const auto& inst : corpus) {
    if (!check_calderon(inst.bank).satisfied) continue;
    const auto rep = check_graph_identities(build_graph(inst.bank, inst.f));
    total = std::max(total, rep.total_mass_residual);
    row = std::max(row, rep.row_sum_residual);
    ok = ok && rep.holds;
    ++count;
  }
  report(9, "graph identities", ok && count > 0,
         fmt("%g instances, total-mass residual %.3g, row-sum residual %.3g", static_cast<double>(count), total, row),
         start);
}

void criterion_determinism(const std::string& cli) {
  const auto start = Clock::now();
  const std::vector<std::string> commands{
      "check --bank overlap:64:0.25",
      "transform --bank shannon:16 --signal random:16 --field complex --seed 3",
      "cheeger --bank random:5:4:1 --signal random:5 --seed 5",
      "cheeger --bank random:5:4:1 --signal random:5 --seed 5 --threads 2",
      "cheeger --bank overlap:32:0.25 --signal random:32 --strategy local --restarts 4 --seed 5",
      "cheeger --bank overlap:64:0.25 --signal random:64 --mode graph",
      "bounds --bank random:5:4:2:real:3 --signal random:5 --samples 100 --seed 8",
      "ambiguity --bank shannon:64 --signal bands:0,1 --signs 1,-1",
      "sweep --bank overlap:32:0.25 --shifts 0,4,16 --budget 200000 --restarts 2",
      "witness --n 64 --eps 0.05",
  };
  bool ok = true;
  std::string bad;
  for (const auto& c : commands) {
    const std::string line = cli + " " + c + " 2>&1";
    const auto a = run_command(line), b = run_command(line);
    if (a != b || a.find("<status 0>") == std::string::npos) {
      ok = false;
      bad = c;
    }
  }
  // thread count must not change the output
  const auto one = run_command(cli + " " + commands[2] + " 2>&1");
  const auto two = run_command(cli + " " + commands[3] + " 2>&1");
  if (one != two) {
    ok = false;
    bad = "thread count";
  }
  report(10, "CLI determinism", ok,
         ok ? fmt("%g commands byte-identical across runs and thread counts", static_cast<double>(commands.size()))
            : "mismatch in: " + bad,
         start);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = CHEEGERLAB_CLI_PATH;
  if (argc > 1) cli = argv[1];
  const auto small = small_corpus();
  const auto corpus = graph_corpus(small);
  const std::vector<std::function<void()>> criteria{
      [] { criterion_isometry(); },
      [] { criterion_gs_identities(); },
      [&] { criterion_witness_and_real_bound(small); },
      [&] { criterion_kernel_vs_graph(small); },
      [&] { criterion_graph_inequality(corpus); },
      [] { criterion_ambiguity(); },
      [] { criterion_separation(); },
      [&] { criterion_graph_identities(corpus); },
      [&] { criterion_determinism(cli); },
  };
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion aborted: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}

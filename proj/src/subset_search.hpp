#pragma once

// Search drivers shared by the kernel and graph Cheeger computations.
//
// An engine tracks a subset S of {0..m-1} together with the numerator and
// the mass of S of a Cheeger-type quotient num / min(mass(S), mass(S^c)).
// It must provide
//   size(), total_mass(), reset(mask), flip(p), current(), candidate(p)
// where candidate(p) predicts current() after flip(p) without applying it.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "cheegerlab/error.hpp"

namespace cheegerlab::detail {

using Mask = std::vector<std::uint8_t>;

struct Evaluation {
  double num = 0.0;
  double mass_in = 0.0;
};

struct SearchSettings {
  std::uint64_t budget = 0;
  unsigned threads = 1;
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  double mass_floor = 0.0;
  double zero_floor = 0.0;
};

struct SearchOutcome {
  bool found = false;
  double value = std::numeric_limits<double>::infinity();
  Mask mask;
  std::uint64_t evaluations = 0;
  bool budget_exhausted = false;
};

inline bool quotient(const Evaluation& ev, double total, const SearchSettings& s, double& out) {
  const double in = ev.mass_in;
  const double rest = total - in;
  if (!(in > s.mass_floor) || !(rest > s.mass_floor)) return false;
  const double num = ev.num <= s.zero_floor ? 0.0 : ev.num;
  out = num / std::min(in, rest);
  return true;
}

inline Mask gray_mask(std::uint64_t i, std::size_t m) {
  const std::uint64_t g = i ^ (i >> 1);
  Mask mask(m, 0);
  for (std::size_t b = 0; b + 1 < m; ++b) mask[b] = (g >> b) & 1U;
  return mask;
}

constexpr std::uint64_t kChunk = std::uint64_t{1} << 14;
constexpr std::uint64_t kRefresh = std::uint64_t{1} << 10;

/// All 2^(m-1) complementary pairs, with the last element kept out of S.
/// Chunks have a fixed size so the floating-point trajectory does not depend
/// on the thread count; ties go to the smallest Gray index.
template <class Engine>
SearchOutcome exhaustive(const Engine& proto, const SearchSettings& s) {
  const std::size_t m = proto.size();
  const std::uint64_t count = std::uint64_t{1} << (m - 1);
  const std::uint64_t chunks = (count + kChunk - 1) / kChunk;
  const double total = proto.total_mass();

  struct Best {
    bool found = false;
    double value = 0.0;
    std::uint64_t index = 0;
  };
  std::vector<Best> best(chunks);
  std::atomic<std::uint64_t> next{0};

  auto work = [&]() {
    Engine e = proto;
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      const std::uint64_t start = c * kChunk;
      const std::uint64_t stop = std::min(count, start + kChunk);
      Best b;
      Mask mask = gray_mask(start, m);
      e.reset(mask);
      for (std::uint64_t i = start; i < stop; ++i) {
        if (i != start) {
          const auto bit = static_cast<std::size_t>(std::countr_zero(i));
          if ((i - start) % kRefresh == 0) {
            mask[bit] ^= 1U;
            e.reset(mask);
          } else {
            mask[bit] ^= 1U;
            e.flip(bit);
          }
        }
        double q;
        if (i != 0 && quotient(e.current(), total, s, q) && (!b.found || q < b.value)) {
          b = {true, q, i};
        }
      }
      best[c] = b;
    }
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(s.threads, static_cast<unsigned>(chunks)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  SearchOutcome out;
  out.evaluations = count;
  for (const auto& b : best) {
    if (b.found && (!out.found || b.value < out.value)) {
      out.found = true;
      out.value = b.value;
      out.mask = gray_mask(b.index, m);
    }
  }
  return out;
}

/// Steepest single-flip descent from each seed, then from `restarts` random
/// masks. Stops early once `budget` candidate evaluations have been spent.
template <class Engine>
SearchOutcome local_search(Engine& e, const std::vector<Mask>& seeds, const SearchSettings& s) {
  const std::size_t m = e.size();
  const double total = e.total_mass();
  SearchOutcome out;
  std::mt19937_64 rng(s.seed);
  std::bernoulli_distribution coin(0.5);

  auto descend = [&](Mask mask) {
    e.reset(mask);
    double cur;
    if (!quotient(e.current(), total, s, cur)) return;
    std::size_t flips = 0;
    for (;;) {
      if (out.evaluations >= s.budget) {
        out.budget_exhausted = true;
        break;
      }
      out.evaluations += m;
      double best = cur;
      std::size_t arg = m;
      for (std::size_t p = 0; p < m; ++p) {
        double q;
        if (quotient(e.candidate(p), total, s, q) && q < best) {
          best = q;
          arg = p;
        }
      }
      if (arg == m || !(best < cur - 1e-14 * cur)) break;
      mask[arg] ^= 1U;
      if (++flips % 256 == 0) {
        e.reset(mask);
      } else {
        e.flip(arg);
      }
      if (!quotient(e.current(), total, s, cur)) {
        mask[arg] ^= 1U;
        break;
      }
    }
    e.reset(mask);
    double fin;
    if (quotient(e.current(), total, s, fin) && (!out.found || fin < out.value)) {
      out.found = true;
      out.value = fin;
      out.mask = mask;
    }
  };

  for (const auto& seed : seeds) {
    if (out.budget_exhausted) break;
    descend(seed);
  }
  for (std::size_t r = 0; r < s.restarts && !out.budget_exhausted; ++r) {
    Mask mask(m);
    for (auto& b : mask) b = coin(rng) ? 1 : 0;
    descend(mask);
  }
  return out;
}

/// Dense symmetric cut problem: num = sum over unordered pairs across the cut
/// of w(p,q), mass(S) = sum_{p in S} mass(p).
class CutEngine {
 public:
  CutEngine(const std::vector<double>* w, const std::vector<double>* mass)
      : w_(w), mass_(mass), m_(mass->size()), deg_(m_, 0.0), din_(m_, 0.0), mask_(m_, 0) {
    for (std::size_t p = 0; p < m_; ++p) {
      for (std::size_t q = 0; q < m_; ++q)
        if (q != p) deg_[p] += (*w_)[p * m_ + q];
      total_ += (*mass_)[p];
    }
  }

  std::size_t size() const { return m_; }
  double total_mass() const { return total_; }

  void reset(const Mask& mask) {
    mask_ = mask;
    std::fill(din_.begin(), din_.end(), 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      if (!mask_[r]) continue;
      for (std::size_t q = 0; q < m_; ++q)
        if (q != r) din_[q] += (*w_)[q * m_ + r];
    }
    recount();
  }

  Evaluation current() const { return {cut_, mass_in_}; }

  Evaluation candidate(std::size_t p) const {
    const double out_edges = deg_[p] - din_[p];
    double mass = mask_[p] ? mass_in_ - (*mass_)[p] : mass_in_ + (*mass_)[p];
    if (mass < 1e-9 * total_ || total_ - mass < 1e-9 * total_) {
      mass = 0.0;
      for (std::size_t q = 0; q < m_; ++q)
        if ((q == p) != (mask_[q] != 0)) mass += (*mass_)[q];
    }
    if (mask_[p]) return {cut_ - out_edges + din_[p], mass};
    return {cut_ - din_[p] + out_edges, mass};
  }

  void flip(std::size_t p) {
    const double sign = mask_[p] ? -1.0 : 1.0;
    mask_[p] ^= 1U;
    for (std::size_t q = 0; q < m_; ++q)
      if (q != p) din_[q] += sign * (*w_)[q * m_ + p];
    recount();
  }

 private:
  void recount() {
    cut_ = 0.0;
    mass_in_ = 0.0;
    for (std::size_t q = 0; q < m_; ++q) {
      if (!mask_[q]) continue;
      cut_ += deg_[q] - din_[q];
      mass_in_ += (*mass_)[q];
    }
    if (cut_ < 0.0) cut_ = 0.0;
  }

  const std::vector<double>* w_;
  const std::vector<double>* mass_;
  std::size_t m_;
  double total_ = 0.0;
  std::vector<double> deg_;
  std::vector<double> din_;
  Mask mask_;
  double mass_in_ = 0.0;
  double cut_ = 0.0;
};

}  // namespace cheegerlab::detail

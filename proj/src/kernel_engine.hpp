#pragma once

#include "cheegerlab/transform.hpp"
#include "subset_search.hpp"

namespace cheegerlab::detail {

// Incremental state for the kernel quotient. With u = K P_S F, v = K F and
// e = P_S (v - u) + P_{S^c} u, the commutator energy is ||e||^2. A flip of
// point p moves P_S F by a delta_p and u by a kappa_p, where
// kappa_p = K(delta_p) = k(., p) mu_p. Predicting ||e||^2 after a flip needs
// t = K(s e) with s = +1 on S and -1 off S.
class KernelEngine {
 public:
  KernelEngine(const KernelOperator& k, const CoefficientField& f)
      : k_(&k), f_(&f), m_(f.size()), n_(f.n()), labels_(f.num_labels()), v_(k.apply(f).values()),
        mu_(m_), u_(m_), e_(m_), t_(m_), mask_(m_, 0) {
    for (std::size_t p = 0; p < m_; ++p) {
      mu_[p] = f.measure(p);
      total_ += mu_[p] * std::norm(f[p]);
    }
  }

  std::size_t size() const { return m_; }
  double total_mass() const { return total_; }

  void reset(const Mask& mask) {
    mask_ = mask;
    CoefficientField ps = CoefficientField::zeros_like(k_->bank());
    for (std::size_t p = 0; p < m_; ++p)
      if (mask_[p]) ps[p] = (*f_)[p];
    u_ = k_->apply(ps).values();
    CoefficientField se = CoefficientField::zeros_like(k_->bank());
    for (std::size_t q = 0; q < m_; ++q) {
      e_[q] = mask_[q] ? v_[q] - u_[q] : u_[q];
      se[q] = mask_[q] ? e_[q] : -e_[q];
    }
    t_ = k_->apply(se).values();
    recount();
  }

  Evaluation current() const { return {energy_, mass_in_}; }

  Evaluation candidate(std::size_t p) const {
    const bool in = mask_[p] != 0;
    const cplx a = in ? -(*f_)[p] : (*f_)[p];
    const double sp = in ? 1.0 : -1.0;
    const double mp = mu_[p];
    const double kpp = k_->diagonal(p % labels_);
    const double kap = kpp * mp;
    const cplx ep = in ? u_[p] + a * kap : v_[p] - u_[p] - a * kap;
    const cplx x = mp * t_[p] - mp * sp * e_[p] * kap;
    const double q = mp * mp * kpp * (1.0 - mp * kpp);
    double next = energy_ - mp * std::norm(e_[p]) - 2.0 * std::real(std::conj(a) * x) + std::norm(a) * q +
                  mp * std::norm(ep);
    if (next < 0.0) next = 0.0;
    const double dm = mp * std::norm((*f_)[p]);
    double mass = in ? mass_in_ - dm : mass_in_ + dm;
    if (mass < kNearEmpty * total_ || total_ - mass < kNearEmpty * total_) mass = exact_mass_with_flip(p);
    return {next, mass};
  }

  void flip(std::size_t p) {
    const bool in = mask_[p] != 0;
    const cplx a = in ? -(*f_)[p] : (*f_)[p];
    const double sp = in ? 1.0 : -1.0;
    const double mp = mu_[p];
    const std::size_t xp = p / labels_, lp = p % labels_;
    const double kap = k_->diagonal(lp) * mp;
    const cplx ep = in ? u_[p] + a * kap : v_[p] - u_[p] - a * kap;
    const cplx r = -sp * ep - sp * e_[p] + a * kap;
    for (std::size_t lq = 0; lq < labels_; ++lq) {
      const cplx* row = k_->correlation(lq, lp);
      for (std::size_t xq = 0; xq < n_; ++xq) {
        const std::size_t q = xq * labels_ + lq;
        const cplx kq = row[(xq + n_ - xp) % n_] * mp;
        u_[q] += a * kq;
        if (q != p) e_[q] -= (mask_[q] ? a : -a) * kq;
        t_[q] += (r - a) * kq;
      }
    }
    e_[p] = ep;
    mask_[p] ^= 1U;
    recount();
  }

 private:
  static constexpr double kNearEmpty = 1e-9;

  // Sums are recomputed rather than updated so that a side holding only zeros
  // of F has mass exactly zero.
  void recount() {
    energy_ = 0.0;
    mass_in_ = 0.0;
    for (std::size_t q = 0; q < m_; ++q) {
      energy_ += mu_[q] * std::norm(e_[q]);
      if (mask_[q]) mass_in_ += mu_[q] * std::norm((*f_)[q]);
    }
  }

  double exact_mass_with_flip(std::size_t p) const {
    double mass = 0.0;
    for (std::size_t q = 0; q < m_; ++q) {
      const bool in = q == p ? !mask_[q] : mask_[q] != 0;
      if (in) mass += mu_[q] * std::norm((*f_)[q]);
    }
    return mass;
  }

  const KernelOperator* k_;
  const CoefficientField* f_;
  std::size_t m_, n_, labels_;
  CVector v_;
  std::vector<double> mu_;
  double total_ = 0.0;
  CVector u_, e_, t_;
  Mask mask_;
  double mass_in_ = 0.0;
  double energy_ = 0.0;
};

}  // namespace cheegerlab::detail

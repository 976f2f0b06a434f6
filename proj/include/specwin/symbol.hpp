#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "mobius.hpp"
#include "numeric.hpp"
#include "polynomial.hpp"

namespace specwin {

// Weight psi = B * p / q: p, q polynomials with q zero-free on the closed disk and B a finite
// Blaschke product given by its zeros. Analytic on a neighbourhood of the closed disk.
class SymbolSpec {
 public:
  SymbolSpec() : SymbolSpec(Polynomial({1.0})) {}

  explicit SymbolSpec(Polynomial numerator, Polynomial denominator = Polynomial({1.0}),
                      std::vector<cplx> blaschke = {})
      : num_(std::move(numerator)), den_(std::move(denominator)), blaschke_(std::move(blaschke)) {
    if (num_.is_zero()) throw error(errc::invalid_input, "numerator is identically zero");
    if (den_.is_zero()) throw error(errc::invalid_input, "denominator is identically zero");
    for (cplx r : den_.roots())
      if (!(std::abs(r) > 1.0 + 1e-9))
        throw error(errc::invalid_input, "denominator vanishes on the closed disk");
    for (cplx w : blaschke_)
      if (!(std::abs(w) < 1.0)) throw error(errc::invalid_input, "Blaschke zero outside D");
    zeros_ = num_.roots();
    zeros_.insert(zeros_.end(), blaschke_.begin(), blaschke_.end());
  }

  static SymbolSpec constant(cplx c) { return SymbolSpec(Polynomial({c})); }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  const std::vector<cplx>& blaschke_zeros() const { return blaschke_; }
  // Numerator roots followed by the Blaschke zeros, with multiplicity.
  const std::vector<cplx>& zeros() const { return zeros_; }

  template <class C>
  C value(const C& z) const {
    C v = num_(z) / den_(z);
    for (cplx w : blaschke_) {
      const C wc = lift<C>(w);
      v *= (z - wc) / (C(1) - lift<C>(std::conj(w)) * z);
    }
    return v;
  }
  cplx operator()(cplx z) const { return value(z); }

 private:
  Polynomial num_, den_;
  std::vector<cplx> blaschke_;
  std::vector<cplx> zeros_;
};

inline cplx evaluate(const SymbolSpec& s, cplx z) {
  if (!(std::abs(z) <= 1.0 + 1e-12)) throw error(errc::outside_closed_disk, "weight evaluated outside the closed disk");
  return s(z);
}

inline SymbolSpec multiply(const SymbolSpec& f, const SymbolSpec& g) {
  std::vector<cplx> bz = f.blaschke_zeros();
  bz.insert(bz.end(), g.blaschke_zeros().begin(), g.blaschke_zeros().end());
  return SymbolSpec(f.numerator() * g.numerator(), f.denominator() * g.denominator(), std::move(bz));
}

// psi o g for a disk automorphism g, again in B * p / q form.
inline SymbolSpec compose(const SymbolSpec& s, const MobiusMap& g) {
  const auto [al, be, ga, de] = g.coefficients();
  const Polynomial top({be, al}), bottom({de, ga});
  const int deg = std::max(s.numerator().degree(), s.denominator().degree());
  // p(g(z)) (gamma z + delta)^deg, expanded.
  auto homogenize = [&](const Polynomial& p) {
    Polynomial acc({0.0});
    const auto& c = p.coefficients();
    for (int k = 0; k <= p.degree(); ++k) {
      Polynomial term({c[k]});
      for (int i = 0; i < k; ++i) term = term * top;
      for (int i = k; i < deg; ++i) term = term * bottom;
      std::vector<cplx> sum(std::max(acc.coefficients().size(), term.coefficients().size()), cplx{});
      for (std::size_t i = 0; i < acc.coefficients().size(); ++i) sum[i] += acc.coefficients()[i];
      for (std::size_t i = 0; i < term.coefficients().size(); ++i) sum[i] += term.coefficients()[i];
      acc = Polynomial(std::move(sum));
    }
    return acc;
  };
  Polynomial p = homogenize(s.numerator());
  const Polynomial q = homogenize(s.denominator());

  std::vector<cplx> bz;
  const MobiusMap ginv = g.inverse();
  for (cplx w : s.blaschke_zeros()) bz.push_back(ginv(w));
  if (!bz.empty()) {
    // B(g(z)) equals the Blaschke product on the pulled-back zeros up to a unimodular constant.
    cplx probe{0.0};
    for (int k = 0; k < 16; ++k) {
      probe = std::polar(0.5, 0.7 * k);
      bool clear = true;
      for (cplx w : bz) clear = clear && std::abs(probe - w) > 0.1;
      if (clear) break;
    }
    cplx b_outer{1.0}, b_inner{1.0};
    const cplx gp = g(probe);
    for (cplx w : s.blaschke_zeros()) b_outer *= (gp - w) / (1.0 - std::conj(w) * gp);
    for (cplx w : bz) b_inner *= (probe - w) / (1.0 - std::conj(w) * probe);
    p = (b_outer / b_inner) * p;
  }
  return SymbolSpec(std::move(p), q, std::move(bz));
}

// psi_(n) = prod_{k<n} psi o phi_k as a symbol (degrees grow linearly in n).
inline SymbolSpec cocycle_symbol(const SymbolSpec& s, const MobiusMap& m, int n) {
  if (n < 1) throw error(errc::invalid_input, "cocycle order must be positive");
  SymbolSpec acc = s;
  for (int k = 1; k < n; ++k) acc = multiply(acc, compose(s, m.power(k)));
  return acc;
}

// ---------------------------------------------------------------- zeros

struct ZeroReport {
  std::vector<cplx> interior, boundary, exterior;
  double min_inner_radius = 1.0;  // smallest modulus of a zero in the closed disk, 1 if none
};

inline ZeroReport zero_report(const SymbolSpec& s, double tol = 1e-8) {
  ZeroReport r;
  for (cplx z : s.zeros()) {
    const double mod = std::abs(z);
    if (mod < 1.0 - tol)
      r.interior.push_back(z);
    else if (mod <= 1.0 + tol)
      r.boundary.push_back(z);
    else
      r.exterior.push_back(z);
  }
  auto by_modulus = [](cplx a, cplx b) { return std::abs(a) < std::abs(b); };
  std::sort(r.interior.begin(), r.interior.end(), by_modulus);
  std::sort(r.boundary.begin(), r.boundary.end(), by_modulus);
  std::sort(r.exterior.begin(), r.exterior.end(), by_modulus);
  if (!r.interior.empty())
    r.min_inner_radius = std::abs(r.interior.front());
  else if (!r.boundary.empty())
    r.min_inner_radius = std::min(1.0, std::abs(r.boundary.front()));
  return r;
}

inline bool is_invertible_weight(const SymbolSpec& s, double tol = 1e-8) {
  const ZeroReport r = zero_report(s, tol);
  return r.interior.empty() && r.boundary.empty();
}

// ---------------------------------------------------------------- circle means

struct QuadratureOptions {
  double tol = 1e-8;
  std::size_t initial_nodes = 64;
  std::size_t max_nodes = std::size_t{1} << 20;
  double on_circle_tol = 1e-12;  // a zero this close to the circle switches to closed forms
  double boundary_tol = 1e-8;    // zeros this close to the unit circle are factored out exactly
};

// Mean of a smooth 2pi-periodic function by the trapezoid rule, doubling nodes until stable.
inline double periodic_mean(const std::function<double(double)>& f, const QuadratureOptions& opt) {
  std::size_t n = opt.initial_nodes;
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += f(two_pi * static_cast<double>(j) / static_cast<double>(n));
  double mean = sum / static_cast<double>(n);
  while (true) {
    if (2 * n > opt.max_nodes)
      throw error(errc::quadrature_nonconvergence, "trapezoid rule unstable at the node cap");
    for (std::size_t j = 1; j < 2 * n; j += 2)
      sum += f(two_pi * static_cast<double>(j) / static_cast<double>(2 * n));
    n *= 2;
    const double next = sum / static_cast<double>(n);
    if (std::abs(next - mean) <= opt.tol * std::max(1.0, std::abs(next))) return next;
    mean = next;
  }
}

// Delta_psi(r) = exp(mean of log|psi(r e^{it})|) from the factorization psi = z^m g:
// log Delta = log|g(0)| + m log r + sum over zeros 0 < |z_k| < r of log(r / |z_k|).
inline double jensen_delta(const SymbolSpec& s, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw error(errc::invalid_input, "radius must lie in [0,1]");
  const Polynomial& p = s.numerator();
  int m = p.zero_order_at_origin();
  double log_g0 = std::log(std::abs(p.coefficients()[m])) - std::log(std::abs(s.denominator().coefficients()[0]));
  for (cplx w : s.blaschke_zeros()) {
    if (w == cplx{})
      ++m;
    else
      log_g0 += std::log(std::abs(w));
  }
  if (r == 0.0) return m > 0 ? 0.0 : std::exp(log_g0);
  double log_delta = log_g0 + m * std::log(r);
  for (cplx z : s.zeros()) {
    const double mod = std::abs(z);
    if (z != cplx{} && mod < r) log_delta += std::log(r / mod);
  }
  return std::exp(log_delta);
}

inline double delta_psi(const SymbolSpec& s, double r, const QuadratureOptions& opt = {}) {
  if (!(r >= 0.0 && r <= 1.0)) throw error(errc::invalid_input, "radius must lie in [0,1]");
  if (r == 0.0) return std::abs(s(cplx{0.0}));
  for (cplx z : s.zeros())
    if (std::abs(std::abs(z) - r) <= opt.on_circle_tol) return jensen_delta(s, r);
  const double mean = periodic_mean([&](double t) { return std::log(std::abs(s(std::polar(r, t)))); }, opt);
  return std::exp(mean);
}

// |v(a)| for the outer factor v of psi: exp of the Poisson integral of log|psi| on the circle.
// Zeros on (or within boundary_tol of) the circle are integrated in closed form.
inline double outer_modulus_at(const SymbolSpec& s, cplx a, const QuadratureOptions& opt = {}) {
  if (!(std::abs(a) < 1.0)) throw error(errc::outside_disk, "outer factor evaluated outside D");
  const Polynomial& p = s.numerator();
  const Polynomial& q = s.denominator();
  std::vector<cplx> smooth_zeros;
  double closed = std::log(std::abs(p.leading()));
  for (cplx z : p.roots()) {
    const double mod = std::abs(z);
    if (std::abs(mod - 1.0) <= opt.boundary_tol)
      closed += mod >= 1.0 ? std::log(std::abs(a - z)) : std::log(std::abs(1.0 - std::conj(z) * a));
    else
      smooth_zeros.push_back(z);
  }
  const double pa = 1.0 - std::norm(a);
  const double integral = periodic_mean(
      [&](double t) {
        const cplx e = unit(t);
        double v = -std::log(std::abs(q(e)));
        for (cplx z : smooth_zeros) v += std::log(std::abs(e - z));
        return v * pa / std::norm(e - a);
      },
      opt);
  return std::exp(closed + integral);
}

// ---------------------------------------------------------------- cocycle and averages

struct CocycleLog {
  double log_modulus = 0.0;  // -inf when some factor vanishes
  double argument = 0.0;     // sum of the factor arguments, not reduced mod 2pi
  bool vanishes = false;
};

inline CocycleLog cocycle_log(const SymbolSpec& s, const MobiusMap& m, long n, cplx z) {
  if (n < 0) throw error(errc::invalid_input, "cocycle order must be nonnegative");
  if (!(std::abs(z) <= 1.0 + 1e-12)) throw error(errc::outside_closed_disk, "cocycle needs |z| <= 1");
  CocycleLog out;
  for (long k = 0; k < n; ++k) {
    const cplx v = s(z);
    if (v == cplx{}) {
      out.vanishes = true;
      out.log_modulus = -INFINITY;
    } else if (!out.vanishes) {
      out.log_modulus += std::log(std::abs(v));
      out.argument += std::arg(v);
    }
    z = m(z);
  }
  return out;
}

// psi_(n)(z) = prod_{k<n} psi(phi_k(z)); long products are accumulated in log form.
inline cplx cocycle(const SymbolSpec& s, const MobiusMap& m, long n, cplx z) {
  if (n <= 10000) {
    if (n < 0) throw error(errc::invalid_input, "cocycle order must be nonnegative");
    if (!(std::abs(z) <= 1.0 + 1e-12)) throw error(errc::outside_closed_disk, "cocycle needs |z| <= 1");
    cplx acc{1.0};
    for (long k = 0; k < n; ++k) {
      acc *= s(z);
      z = m(z);
    }
    return acc;
  }
  const CocycleLog l = cocycle_log(s, m, n, z);
  if (l.vanishes) return cplx{0.0};
  return std::polar(std::exp(l.log_modulus), l.argument);
}

// Orbits are computed in floating point, so "psi vanishes on the orbit" means below this.
inline constexpr double kOrbitZeroTol = 1e-13;

inline void require_centered_irrational(const MobiusMap& m, const ClassifyOptions& opt) {
  const Classification cl = classify(m, opt);
  if (cl.kind != MapKind::elliptic_irrational || std::abs(cl.interior_fixed_point()) > 1e-12)
    throw error(errc::wrong_kind, "needs an irrational rotation about 0");
}

// Running Birkhoff averages (1/k) sum_{i=1..k} log|psi(phi_i(z))|, sampled every `every` steps.
inline std::vector<std::pair<long, double>> ergodic_series(const SymbolSpec& s, const MobiusMap& m, cplx z,
                                                           long n, long every,
                                                           const ClassifyOptions& opt = {}) {
  require_centered_irrational(m, opt);
  if (n < 1 || every < 1) throw error(errc::invalid_input, "orbit length and stride must be positive");
  std::vector<std::pair<long, double>> out;
  long double sum = 0.0L;
  for (long k = 1; k <= n; ++k) {
    z = m(z);
    const double mod = std::abs(s(z));
    if (mod <= kOrbitZeroTol) throw error(errc::zero_on_orbit, "weight vanishes on the orbit");
    sum += std::log(mod);
    if (k % every == 0 || k == n) out.emplace_back(k, static_cast<double>(sum / k));
  }
  return out;
}

inline double ergodic_average(const SymbolSpec& s, const MobiusMap& m, cplx z, long n,
                              const ClassifyOptions& opt = {}) {
  return ergodic_series(s, m, z, n, n, opt).back().second;
}

// max over boundary samples of |psi_(n)(zeta)|^{1/n}.
inline double sup_cocycle_root(const SymbolSpec& s, const MobiusMap& m, long n, int samples) {
  if (n < 1 || samples < 1) throw error(errc::invalid_input, "order and sample count must be positive");
  double best = 0.0;
  for (int j = 0; j < samples; ++j) {
    const CocycleLog l = cocycle_log(s, m, n, unit(two_pi * j / samples));
    if (!l.vanishes) best = std::max(best, std::exp(l.log_modulus / static_cast<double>(n)));
  }
  return best;
}

}  // namespace specwin

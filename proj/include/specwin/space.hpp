#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "errors.hpp"
#include "mobius.hpp"
#include "numeric.hpp"
#include "symbol.hpp"

namespace specwin {

// Hardy space H^2, or weighted Bergman space A^2_alpha with (alpha+1)(1-|z|^2)^alpha dA/pi.
struct SpaceSpec {
  enum class Kind { hardy, bergman };
  Kind kind = Kind::hardy;
  double alpha = 0.0;

  static SpaceSpec hardy() { return {}; }
  static SpaceSpec bergman(double alpha) {
    if (!(alpha > -1.0) || !std::isfinite(alpha)) throw error(errc::invalid_input, "Bergman weight needs alpha > -1");
    return {Kind::bergman, alpha};
  }

  // K_z(w) = (1 - conj(z) w)^{-kernel_exponent()}
  double kernel_exponent() const { return kind == Kind::hardy ? 1.0 : alpha + 2.0; }

  std::string name() const { return kind == Kind::hardy ? "hardy" : "bergman(" + std::to_string(alpha) + ")"; }

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

// ||z^n||
inline double basis_norm(const SpaceSpec& sp, long n) {
  if (n < 0) throw error(errc::invalid_input, "basis index must be nonnegative");
  if (sp.kind == SpaceSpec::Kind::hardy) return 1.0;
  const double a = sp.alpha;
  return std::exp(0.5 * (std::lgamma(n + 1.0) + std::lgamma(a + 2.0) - std::lgamma(n + a + 2.0)));
}

inline std::vector<double> basis_norms(const SpaceSpec& sp, int count) {
  std::vector<double> out(count);
  for (int n = 0; n < count; ++n) out[n] = basis_norm(sp, n);
  return out;
}

// base^{kernel exponent}; integer exponents avoid the logarithm.
template <class C>
C kernel_power(const SpaceSpec& sp, const C& base) {
  const double p = sp.kernel_exponent();
  if (is_integer(p)) return ipow(base, std::lround(p));
  using std::exp;
  using std::log;
  return exp(real_t<C>(p) * log(base));
}

template <class C>
C kernel_eval_unchecked(const SpaceSpec& sp, const C& z, const C& w) {
  using std::conj;
  return kernel_power(sp, C(1) / (C(1) - conj(z) * w));
}

inline cplx kernel_eval(const SpaceSpec& sp, cplx z, cplx w) {
  if (!(std::abs(z) < 1.0)) throw error(errc::outside_disk, "kernel center must lie in D");
  if (!(std::abs(w) <= 1.0 + 1e-12)) throw error(errc::outside_closed_disk, "kernel evaluated outside the closed disk");
  const cplx den = 1.0 - std::conj(z) * w;
  if (std::abs(den) == 0.0) throw error(errc::kernel_singularity, "1 - conj(z) w vanishes");
  return kernel_eval_unchecked(sp, z, w);
}

// ||K_z|| = (1 - |z|^2)^{-p/2}
template <class R>
R kernel_norm(const SpaceSpec& sp, const complex_t<R>& z) {
  using std::pow;
  const R delta = R(1) - abs2(z);
  if (!(delta > R(0))) throw error(errc::kernel_singularity, "kernel norm at a boundary point");
  return pow(delta, R(-0.5 * sp.kernel_exponent()));
}
inline double kernel_norm(const SpaceSpec& sp, cplx z) { return kernel_norm<double>(sp, z); }

// Coordinates of K_z in the orthonormal basis z^n / ||z^n||: conj(z)^n / ||z^n||.
inline Eigen::VectorXcd kernel_coefficients(const SpaceSpec& sp, cplx z, int count) {
  Eigen::VectorXcd v(count);
  cplx zn{1.0};
  for (int n = 0; n < count; ++n) {
    v(n) = std::conj(zn) / basis_norm(sp, n);
    zn *= z;
  }
  return v;
}

// ---------------------------------------------------------------- kernel combinations

enum class KernelBasis {
  raw,        // terms are multiples of K_w
  normalized  // terms are multiples of K_w / ||K_w||
};

template <class C = cplx>
struct KernelTerm {
  C coef;
  C point;
};

template <class C = cplx>
struct KernelCombination {
  SpaceSpec space;
  KernelBasis basis = KernelBasis::raw;
  std::vector<KernelTerm<C>> terms;

  void add(const C& coef, const C& point) { terms.push_back({coef, point}); }

  // this + factor * other (terms are concatenated; see merged()).
  KernelCombination& add_scaled(const KernelCombination& other, const C& factor) {
    if (!(other.space == space) || other.basis != basis)
      throw error(errc::invalid_input, "combining kernels from different spaces or bases");
    for (const auto& t : other.terms) terms.push_back({factor * t.coef, t.point});
    return *this;
  }
};

// Sums the coefficients of terms whose points lie within pseudo-hyperbolic distance tol.
template <class C>
KernelCombination<C> merged(const KernelCombination<C>& h, double tol = 1e-9) {
  const std::size_t n = h.terms.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return h.terms[i].point.real() < h.terms[j].point.real(); });
  std::vector<char> used(n, 0);
  KernelCombination<C> out{h.space, h.basis, {}};
  const real_t<C> window(2.0 * tol);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t i = order[a];
    if (used[i]) continue;
    used[i] = 1;
    KernelTerm<C> acc = h.terms[i];
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t j = order[b];
      if (h.terms[j].point.real() - acc.point.real() > window) break;
      if (!used[j] && pseudo_hyperbolic_unchecked(acc.point, h.terms[j].point) < real_t<C>(tol)) {
        acc.coef += h.terms[j].coef;
        used[j] = 1;
      }
    }
    out.terms.push_back(acc);
  }
  return out;
}

// || sum_j c_j K_{w_j} || from the Gram form sum_{j,k} c_j conj(c_k) K_{w_j}(w_k).
template <class C>
real_t<C> combo_norm(const KernelCombination<C>& h) {
  using R = real_t<C>;
  using std::abs;
  using std::conj;
  using std::sqrt;
  const std::size_t n = h.terms.size();
  std::vector<C> f(n);
  R scale(0);
  for (std::size_t j = 0; j < n; ++j) {
    const R knorm = kernel_norm<R>(h.space, h.terms[j].point);
    f[j] = h.basis == KernelBasis::raw ? h.terms[j].coef : h.terms[j].coef / knorm;
    scale += abs(f[j]) * knorm;
  }
  R value(0);
  for (std::size_t j = 0; j < n; ++j) {
    const C& wj = h.terms[j].point;
    value += abs2(f[j]) * kernel_power(h.space, C(1) / C(R(1) - abs2(wj))).real();
    const C cwj = conj(wj);
    C off(0);
    for (std::size_t k = j + 1; k < n; ++k)
      off += conj(f[k]) * kernel_power(h.space, C(1) / (C(1) - cwj * h.terms[k].point));
    value += R(2) * (f[j] * off).real();
  }
  if (value < R(-1e-8) * scale * scale)
    throw error(errc::numerically_indefinite, "Gram form of a kernel combination is negative");
  return value > R(0) ? R(sqrt(value)) : R(0);
}

// C* K_w = conj(psi(w)) K_{phi(w)}; for normalized kernels the norm ratio is |phi'(w)|^{-p/2}.
template <class C>
KernelCombination<C> adjoint_on_kernels(const KernelCombination<C>& h, const SymbolSpec& s, const MobiusMap& m) {
  using R = real_t<C>;
  using std::abs;
  using std::conj;
  using std::pow;
  KernelCombination<C> out{h.space, h.basis, {}};
  out.terms.reserve(h.terms.size());
  const R half_p(0.5 * h.space.kernel_exponent());
  for (const auto& t : h.terms) {
    C coef = t.coef * conj(s.value(t.point));
    if (h.basis == KernelBasis::normalized) coef *= pow(R(abs(m.mobius().derivative(t.point))), -half_p);
    out.terms.push_back({coef, m.apply(t.point)});
  }
  return out;
}

// Coordinates of a combination in the orthonormal monomial basis, truncated to `count` terms.
inline Eigen::VectorXcd expansion(const KernelCombination<cplx>& h, int count) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(count);
  for (const auto& t : h.terms) {
    const double scale = h.basis == KernelBasis::raw ? 1.0 : 1.0 / kernel_norm(h.space, t.point);
    v += t.coef * scale * kernel_coefficients(h.space, t.point, count);
  }
  return v;
}

}  // namespace specwin

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace specwin {

// z -> (a z + b) / (c z + d), stored with a d - b c = 1.
class Mobius {
 public:
  Mobius() = default;

  Mobius(cplx a, cplx b, cplx c, cplx d) {
    const cplx det = a * d - b * c;
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (!(scale > 0.0) || !std::isfinite(scale) || std::abs(det) <= 1e-14 * scale * scale)
      throw error(errc::degenerate_map, "a*d - b*c vanishes");
    const cplx s = std::sqrt(det);
    a_ = a / s;
    b_ = b / s;
    c_ = c / s;
    d_ = d / s;
  }

  std::array<cplx, 4> coefficients() const { return {a_, b_, c_, d_}; }

  template <class C>
  C apply(const C& z) const {
    return (lift<C>(a_) * z + lift<C>(b_)) / (lift<C>(c_) * z + lift<C>(d_));
  }
  cplx operator()(cplx z) const { return apply(z); }

  template <class C>
  C derivative(const C& z) const {
    const C den = lift<C>(c_) * z + lift<C>(d_);
    return C(1) / (den * den);
  }

  cplx pole() const {
    if (c_ == cplx{}) return {INFINITY, INFINITY};
    return -d_ / c_;
  }

  Mobius inverse() const { return raw(d_, -b_, -c_, a_); }

  Mobius power(long n) const {
    Mobius base = n < 0 ? inverse() : *this;
    unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    Mobius result;
    while (k > 0) {
      if (k & 1) result = result * base;
      base = base * base;
      k >>= 1;
    }
    return result.renormalized();
  }

  // Composition: (f * g)(z) = f(g(z)).
  friend Mobius operator*(const Mobius& f, const Mobius& g) {
    return raw(f.a_ * g.a_ + f.b_ * g.c_, f.a_ * g.b_ + f.b_ * g.d_, f.c_ * g.a_ + f.d_ * g.c_,
               f.c_ * g.b_ + f.d_ * g.d_);
  }

 private:
  static Mobius raw(cplx a, cplx b, cplx c, cplx d) {
    Mobius m;
    m.a_ = a;
    m.b_ = b;
    m.c_ = c;
    m.d_ = d;
    return m;
  }
  // Powers of hyperbolic matrices have large entries, so no relative determinant test here.
  Mobius renormalized() const {
    const cplx s = std::sqrt(a_ * d_ - b_ * c_);
    return raw(a_ / s, b_ / s, c_ / s, d_ / s);
  }

  cplx a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
};

// A Mobius transform known to map the unit disk onto itself.
class MobiusMap {
 public:
  MobiusMap() = default;

  explicit MobiusMap(const Mobius& m) : m_(m) { validate(); }
  MobiusMap(cplx a, cplx b, cplx c, cplx d) : MobiusMap(Mobius(a, b, c, d)) {}

  // z -> e^{2 pi i turns} z
  static MobiusMap rotation(double turns) {
    const cplx h = unit(pi * turns);
    return trusted(Mobius(h, 0.0, 0.0, std::conj(h)));
  }
  static MobiusMap rotation_by(cplx eta) {
    if (std::abs(std::abs(eta) - 1.0) > 1e-12)
      throw error(errc::not_automorphism, "rotation multiplier must be unimodular");
    return rotation(std::arg(eta) / two_pi);
  }
  // z -> (w - z) / (1 - conj(w) z), swaps 0 and w and is its own inverse.
  static MobiusMap involution(cplx w) {
    if (!(std::abs(w) < 1.0)) throw error(errc::outside_disk, "involution center must lie in D");
    return trusted(Mobius(-1.0, w, -std::conj(w), 1.0));
  }
  // z -> e^{i radians} (z - w) / (1 - conj(w) z)
  static MobiusMap disk_automorphism(cplx w, double radians) {
    if (!(std::abs(w) < 1.0)) throw error(errc::outside_disk, "automorphism zero must lie in D");
    const cplx h = unit(radians / 2);
    return trusted(Mobius(h, -w * h, -std::conj(w) * std::conj(h), std::conj(h)));
  }
  // Rotation by `radians` about an interior fixed point.
  static MobiusMap elliptic(cplx fixed, double radians) {
    const MobiusMap g = involution(fixed);
    return trusted(g.mobius() * rotation(radians / two_pi).mobius() * g.mobius());
  }
  // z -> (z + r) / (1 + r z): fixed points +-1, attracting at 1 with multiplier (1-r)/(1+r).
  static MobiusMap hyperbolic(double r) {
    if (!(r > 0.0 && r < 1.0)) throw error(errc::invalid_input, "hyperbolic parameter must lie in (0,1)");
    return trusted(Mobius(1.0, r, r, 1.0));
  }
  // Cayley conjugate of w -> w + s; parabolic with fixed point 1.
  static MobiusMap parabolic_cayley(double s) {
    if (s == 0.0) throw error(errc::invalid_input, "parabolic translation must be nonzero");
    const cplx two_i{0.0, 2.0};
    return trusted(Mobius(two_i - s, s, -s, two_i + s));
  }

  const Mobius& mobius() const { return m_; }
  std::array<cplx, 4> coefficients() const { return m_.coefficients(); }

  template <class C>
  C apply(const C& z) const {
    return m_.apply(z);
  }
  cplx operator()(cplx z) const { return m_.apply(z); }

  MobiusMap inverse() const { return trusted(m_.inverse()); }
  MobiusMap power(long n) const { return trusted(m_.power(n)); }

  friend MobiusMap operator*(const MobiusMap& f, const MobiusMap& g) {
    return trusted(f.m_ * g.m_);
  }

 private:
  static MobiusMap trusted(const Mobius& m) {
    MobiusMap out;
    out.m_ = m;
    return out;
  }

  void validate() const {
    if (std::abs(m_(cplx{0.0})) >= 1.0)
      throw error(errc::not_automorphism, "image of 0 is not inside the disk");
    for (int k = 0; k < 8; ++k) {
      const cplx zeta = unit(two_pi * (k + 0.37) / 8.0);
      const double mod = std::abs(m_(zeta));
      if (!(std::abs(mod - 1.0) <= 1e-9))
        throw error(errc::not_automorphism, "unit circle is not mapped onto itself");
    }
  }

  Mobius m_;
};

inline MobiusMap compose(const MobiusMap& f, const MobiusMap& g) { return f * g; }

inline cplx evaluate(const MobiusMap& m, cplx z) {
  const auto [a, b, c, d] = m.coefficients();
  if (std::abs(c * z + d) <= 1e-300) throw error(errc::pole_at_point, "evaluation at the pole");
  return m(z);
}

inline cplx derivative(const MobiusMap& m, cplx z) {
  const auto [a, b, c, d] = m.coefficients();
  if (std::abs(c * z + d) <= 1e-300) throw error(errc::pole_at_point, "derivative at the pole");
  return m.mobius().derivative(z);
}

inline cplx iterate(const MobiusMap& m, long n, cplx z) {
  if (std::abs(z) > 1.0 + 1e-12) throw error(errc::outside_closed_disk, "iterate needs |z| <= 1");
  return m.power(n)(z);
}

template <class C>
real_t<C> pseudo_hyperbolic_unchecked(const C& z, const C& w) {
  using std::abs;
  return abs(z - w) / abs(C(1) - conj(w) * z);
}

inline double pseudo_hyperbolic(cplx z, cplx w) {
  if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0))
    throw error(errc::outside_disk, "pseudo-hyperbolic distance needs points in D");
  return pseudo_hyperbolic_unchecked(z, w);
}

// ---------------------------------------------------------------- classification

enum class MapKind { identity, elliptic_rational, elliptic_irrational, hyperbolic, parabolic };

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::identity: return "Identity";
    case MapKind::elliptic_rational: return "EllipticRational";
    case MapKind::elliptic_irrational: return "EllipticIrrational";
    case MapKind::hyperbolic: return "Hyperbolic";
    case MapKind::parabolic: return "Parabolic";
  }
  return "?";
}

struct ClassifyOptions {
  // A unimodular multiplier counts as rational when eta^n = 1 within rational_tol for some
  // n <= max_period. Floating point cannot decide rationality, so this is a declared cutoff.
  int max_period = 512;
  double rational_tol = 1e-9;
  double boundary_tol = 1e-8;
  double parabolic_tol = 1e-8;
};

struct Classification {
  MapKind kind = MapKind::identity;
  std::vector<cplx> fixed_points;
  std::optional<cplx> denjoy_wolff;
  cplx multiplier{1.0};
  int period = 0;  // n0 for rational rotations, 1 for the identity
  ClassifyOptions options;

  bool is_elliptic() const {
    return kind == MapKind::elliptic_rational || kind == MapKind::elliptic_irrational;
  }
  cplx interior_fixed_point() const { return fixed_points.empty() ? cplx{} : fixed_points.front(); }
  // The repelling boundary fixed point of a hyperbolic map.
  std::optional<cplx> repelling_point() const {
    if (kind != MapKind::hyperbolic) return std::nullopt;
    for (cplx z : fixed_points)
      if (std::abs(z - *denjoy_wolff) > 1e-6) return z;
    return std::nullopt;
  }
};

inline int rational_period(cplx eta, const ClassifyOptions& opt) {
  cplx w{1.0};
  for (int n = 1; n <= opt.max_period; ++n) {
    w *= eta;
    if (std::abs(w - 1.0) < opt.rational_tol) return n;
  }
  return 0;
}

inline Classification classify(const MobiusMap& m, const ClassifyOptions& opt = {}) {
  const auto [a, b, c, d] = m.coefficients();
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  Classification out;
  out.options = opt;

  if (std::abs(b) <= 1e-14 * scale && std::abs(c) <= 1e-14 * scale &&
      std::abs(a - d) <= 1e-14 * scale) {
    out.kind = MapKind::identity;
    out.fixed_points = {cplx{0.0}};
    out.multiplier = 1.0;
    out.period = 1;
    return out;
  }

  // Fixed points solve c z^2 + (d - a) z - b = 0.
  const cplx qa = c, qb = d - a, qc = -b;
  std::vector<cplx> roots;
  bool double_root = false;
  if (std::abs(qa) <= 1e-14 * scale) {
    roots.push_back(-qc / qb);
  } else {
    const cplx disc = qb * qb - 4.0 * qa * qc;
    if (std::abs(disc) < opt.parabolic_tol * scale * scale) {
      roots.push_back(-qb / (2.0 * qa));
      double_root = true;
    } else {
      cplx sq = std::sqrt(disc);
      if ((std::conj(qb) * sq).real() < 0.0) sq = -sq;
      const cplx q = -0.5 * (qb + sq);
      roots.push_back(q / qa);
      roots.push_back(qc / q);
    }
  }

  auto on_circle = [&](cplx z) { return std::abs(std::abs(z) - 1.0) <= opt.boundary_tol; };

  if (double_root) {
    if (!on_circle(roots[0])) throw error(errc::not_automorphism, "double fixed point off the circle");
    const cplx p = roots[0] / std::abs(roots[0]);
    out.kind = MapKind::parabolic;
    out.fixed_points = {p};
    out.denjoy_wolff = p;
    out.multiplier = m.mobius().derivative(p);
    return out;
  }

  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
  if (std::abs(roots[0]) < 1.0 - opt.boundary_tol) {
    const cplx z0 = roots[0];
    cplx eta = m.mobius().derivative(z0);
    eta /= std::abs(eta);
    out.fixed_points = roots;
    out.multiplier = eta;
    out.period = rational_period(eta, opt);
    out.kind = out.period > 0 ? MapKind::elliptic_rational : MapKind::elliptic_irrational;
    return out;
  }
  if (roots.size() == 2 && on_circle(roots[0]) && on_circle(roots[1])) {
    for (cplx& z : roots) z /= std::abs(z);
    const cplx d0 = m.mobius().derivative(roots[0]);
    const cplx d1 = m.mobius().derivative(roots[1]);
    const bool first = std::abs(d0) < std::abs(d1);
    out.kind = MapKind::hyperbolic;
    out.fixed_points = roots;
    out.denjoy_wolff = first ? roots[0] : roots[1];
    out.multiplier = first ? d0 : d1;
    return out;
  }
  throw error(errc::not_automorphism, "fixed point configuration of a non-automorphism");
}

// ---------------------------------------------------------------- half-plane model

enum class CanonicalKind { dilation, translation };

struct HalfPlaneModel {
  Mobius sigma;  // maps D onto the upper half-plane
  CanonicalKind kind = CanonicalKind::dilation;
  double parameter = 1.0;  // dilation factor s, or translation +-1
  double max_error = 0.0;  // worst deviation of sigma phi sigma^-1 from the canonical form
};

inline HalfPlaneModel half_plane_model(const MobiusMap& m) {
  const Classification cl = classify(m);
  const cplx i{0.0, 1.0};
  HalfPlaneModel out;
  if (cl.kind == MapKind::hyperbolic) {
    // sigma(a) = 0 and sigma(b) = infinity, so sigma phi = phi'(a) sigma.
    const cplx a = *cl.denjoy_wolff, b = *cl.repelling_point();
    const cplx zeta = unit(0.5 * (std::arg(a) + std::arg(b)));
    const cplx w1 = (zeta - a) / (zeta - b);
    cplx k = std::conj(w1) / std::abs(w1);
    if ((k * a / b).imag() < 0.0) k = -k;
    out.sigma = Mobius(k, -k * a, 1.0, -b);
    out.kind = CanonicalKind::dilation;
    out.parameter = cl.multiplier.real();
  } else if (cl.kind == MapKind::parabolic) {
    const cplx a = *cl.denjoy_wolff;
    const Mobius s0(i, i * a, -1.0, a);
    const double t = (s0.apply(m(s0.inverse().apply(i))) - i).real();
    out.sigma = Mobius(i / std::abs(t), i * a / std::abs(t), -1.0, a);
    out.kind = CanonicalKind::translation;
    out.parameter = t > 0 ? 1.0 : -1.0;
  } else {
    throw error(errc::wrong_kind, "half-plane model needs a hyperbolic or parabolic map");
  }

  const Mobius conj = out.sigma * m.mobius() * out.sigma.inverse();
  for (int k = 0; k < 8; ++k) {
    const cplx w{-2.0 + 0.6 * k, 0.3 + 0.4 * k};
    const cplx expected = out.kind == CanonicalKind::dilation ? out.parameter * w : w + out.parameter;
    out.max_error = std::max(out.max_error, std::abs(conj(w) - expected) / std::max(1.0, std::abs(w)));
  }
  if (!(out.max_error <= 1e-9))
    throw error(errc::precision_exhausted, "half-plane conjugate deviates from canonical form");
  return out;
}

// ---------------------------------------------------------------- return times

// Continued-fraction convergent denominators of arg(eta)/2pi: the record return times of the
// rotation orbit of any point to its starting position.
inline std::vector<long> return_times(cplx eta, std::size_t count, const ClassifyOptions& opt = {}) {
  if (std::abs(std::abs(eta) - 1.0) > 1e-9) throw error(errc::invalid_input, "multiplier must be unimodular");
  if (rational_period(eta, opt) > 0)
    throw error(errc::rational_multiplier, "multiplier is a root of unity within the cutoff");
  long double theta = std::arg(eta) / two_pi;
  theta -= std::floor(theta);
  std::vector<long> out;
  long q_prev = 0, q = 1;
  out.push_back(1);
  long double x = theta;
  while (out.size() < count) {
    const long double frac = x - std::floor(x);
    if (frac <= 0.0L) break;
    x = 1.0L / frac;
    const long double step = std::floor(x);
    if (static_cast<long double>(q) * step > 1e8L)
      throw error(errc::precision_exhausted, "convergents beyond double precision of the angle");
    const long q_next = static_cast<long>(step) * q + q_prev;
    q_prev = q;
    q = q_next;
    if (q > out.back()) out.push_back(q);
  }
  return out;
}

}  // namespace specwin

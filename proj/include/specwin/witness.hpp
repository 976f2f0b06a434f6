#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "errors.hpp"
#include "mobius.hpp"
#include "numeric.hpp"
#include "space.hpp"
#include "symbol.hpp"

namespace specwin {

// Approximate eigenvectors h of the adjoint C*, built from reproducing kernels. A stage with a
// small residual ||(C* - mu) h|| / ||h|| certifies mu in the approximate point spectrum of C*,
// hence conj(mu) in the spectrum of C.

enum class Construction {
  elliptic_boundary_zero,
  elliptic_inner_zero,
  elliptic_level_circle,
  rational_rotation_exact,
  backward_orbit
};

inline const char* to_string(Construction c) {
  switch (c) {
    case Construction::elliptic_boundary_zero: return "EllipticBoundaryZero";
    case Construction::elliptic_inner_zero: return "EllipticInnerZero";
    case Construction::elliptic_level_circle: return "EllipticLevelCircle";
    case Construction::rational_rotation_exact: return "RationalRotationExact";
    case Construction::backward_orbit: return "BackwardOrbit";
  }
  return "?";
}

struct WitnessStage {
  int index = 0;
  int n_terms = 0;
  cplx base_point;
  cplx eigenvalue;  // mu in ||(C* - mu) h||
  double residual = 0.0;
  double norm = 0.0;   // ||h||
  double floor = 0.0;  // certified lower bound for ||h||
  double bound = std::numeric_limits<double>::quiet_NaN();  // the construction's residual bound
  double q = std::numeric_limits<double>::quiet_NaN();      // geometric-mean growth used in `bound`
  double radius = std::numeric_limits<double>::quiet_NaN();
  int selected_root = -1;
  KernelCombination<cplx> h;
};

struct WitnessRun {
  Construction construction = Construction::backward_orbit;
  cplx lambda;
  SpaceSpec space;
  std::vector<WitnessStage> stages;
  bool schedule_exhausted = false;
  bool conjugated = false;  // stages live in the frame where the elliptic fixed point is 0
  std::string note;
};

// Concrete choices for the selections the constructions leave open; all logged in the stages.
struct WitnessSchedule {
  int stages = 12;
  int candidates = 40;          // base points tried per stage
  long max_orbit_steps = 10000; // Birkhoff scan budget
  double birkhoff_fraction = 0.95;
  double angle_scale = 0.25;    // first angular offset from the zero, halved every stage
  int terms_step = 4;           // stage j needs at least j * terms_step orbit terms
  long max_return_time = 10000;
  double start_angle = 0.0;
  int max_radius_halvings = 34;
  bool enforce_guarantee = true;
  double merge_tol = 1e-9;
};

// ---------------------------------------------------------------- Blaschke helpers

template <class C>
C blaschke_value(const std::vector<C>& zeros, const C& z) {
  using std::conj;
  C v(1);
  for (const C& w : zeros) v *= (z - w) / (C(1) - conj(w) * z);
  return v;
}
inline cplx blaschke_eval(const std::vector<cplx>& zeros, cplx z) {
  for (cplx w : zeros)
    if (!(std::abs(w) < 1.0)) throw error(errc::outside_disk, "Blaschke zeros must lie in D");
  if (!(std::abs(z) <= 1.0 + 1e-12)) throw error(errc::outside_closed_disk, "Blaschke product evaluated outside the closed disk");
  return blaschke_value(zeros, z);
}

// prod_{k=1}^{n} (1 - s^k) / (1 + s^k): lower bound for the forward-orbit products of a
// hyperbolic map with multiplier s at its attracting point.
inline double hyperbolic_floor(double s, int n_terms) {
  double v = 1.0, sk = 1.0;
  for (int k = 1; k <= n_terms; ++k) {
    sk *= s;
    v *= (1.0 - sk) / (1.0 + sk);
  }
  return v;
}

// prod_{k=1}^{n_terms} d(z, phi_k(z)): the value at z of the Blaschke product vanishing on the
// first n_terms points of the forward orbit.
inline double blaschke_lower_bound(const MobiusMap& m, cplx z, int n_terms, double parabolic_eps = 1e-6) {
  if (!(std::abs(z) < 1.0)) throw error(errc::outside_disk, "orbit start must lie in D");
  if (n_terms < 0) throw error(errc::invalid_input, "n_terms must be nonnegative");
  const Classification cl = classify(m);
  if (cl.kind == MapKind::parabolic && std::abs(z - *cl.denjoy_wolff) < parabolic_eps)
    throw error(errc::too_close_to_parabolic_fixed_point, "start point within eps of the parabolic fixed point");
  if (cl.kind != MapKind::parabolic && cl.kind != MapKind::hyperbolic)
    throw error(errc::wrong_kind, "orbit interpolation bound needs a hyperbolic or parabolic map");
  double v = 1.0;
  cplx w = z;
  for (int k = 1; k <= n_terms; ++k) {
    w = m(w);
    v *= pseudo_hyperbolic_unchecked(z, w);
  }
  return v;
}

// ---------------------------------------------------------------- shared internals

namespace detail {

template <class C>
real_t<C> residual_norm(const KernelCombination<C>& h, const SymbolSpec& s, const MobiusMap& m, const C& mu,
                        double merge_tol) {
  KernelCombination<C> r = adjoint_on_kernels(h, s, m);
  r.add_scaled(h, -mu);
  return combo_norm(merged(r, merge_tol));
}

template <class C>
KernelCombination<cplx> lowered(const KernelCombination<C>& h) {
  KernelCombination<cplx> out{h.space, h.basis, {}};
  for (const auto& t : h.terms) out.terms.push_back({lower(t.coef), lower(t.point)});
  return out;
}

// An elliptic map conjugated so its fixed point is 0: psi o g and the rotation g o phi o g,
// with g the involution swapping 0 and the fixed point.
struct CenteredRotation {
  SymbolSpec symbol;
  MobiusMap rotation;
  cplx eta;
  cplx fixed_point;
  bool conjugated = false;
  MapKind kind = MapKind::elliptic_irrational;
};

inline CenteredRotation centered(const SymbolSpec& s, const MobiusMap& m, const ClassifyOptions& opt) {
  const Classification cl = classify(m, opt);
  if (!cl.is_elliptic()) throw error(errc::wrong_kind, "construction needs an elliptic map");
  CenteredRotation out{s, MobiusMap::rotation_by(cl.multiplier), cl.multiplier, cl.interior_fixed_point(), false, cl.kind};
  if (std::abs(out.fixed_point) > 1e-15) {
    out.symbol = compose(s, MobiusMap::involution(out.fixed_point));
    out.conjugated = true;
  }
  return out;
}

// Index m maximising || sum_s a_s w^{s m} e_{x_s} || over the n-th roots of unity w = e^{-2 pi i/n}
// (or e^{+2 pi i/n} when `conjugate_roots`), for points x_s on one circle |x| = r. Uses the
// monomial expansion of the kernels: one FFT over s per Taylor degree.
inline int select_max_norm_root(const std::vector<cplx>& a, const std::vector<cplx>& x, const SpaceSpec& sp,
                                double r, bool conjugate_roots) {
  const std::size_t n = a.size();
  if (n <= 1) return 0;
  std::vector<cplx> pw(n), in(n), out;
  for (std::size_t s = 0; s < n; ++s) pw[s] = conjugate_roots ? std::conj(a[s]) : a[s];
  std::vector<double> score(n, 0.0);
  Eigen::FFT<double> fft;
  double r2k = 1.0, first = -1.0;
  for (int deg = 0; deg < 4000; ++deg) {
    const double beta = basis_norm(sp, deg);
    const double weight = r2k / (beta * beta);
    if (first > 0.0 && weight * first < 1e-18 * first) break;
    fft.fwd(out, pw);
    double total = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double v = std::norm(out[m]) / (beta * beta);
      score[m] += v;
      total += v;
    }
    if (first < 0.0) first = total;
    for (std::size_t s = 0; s < n; ++s) pw[s] *= conjugate_roots ? x[s] : std::conj(x[s]);
    r2k *= r * r;
  }
  return static_cast<int>(std::max_element(score.begin(), score.end()) - score.begin());
}

inline void require_lambda(bool enforce, double modulus, double guarantee, const char* what) {
  if (enforce && !(modulus < guarantee || modulus == 0.0))
    throw error(errc::lambda_outside_guarantee,
                std::string("|lambda| = ") + std::to_string(modulus) + " is not below " + what + " = " +
                    std::to_string(guarantee));
}

}  // namespace detail

// ---------------------------------------------------------------- rational rotation

// Exact eigenvector of C* when phi^{n0} = id: h = sum_k prod_{s<k} conj(psi(x_s)) / conj(l0)^k K_{x_k}
// along the orbit x_k = phi_k(z0), with l0^{n0} = psi_(n0)(z0).
inline WitnessRun witness_rational_rotation(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp, cplx z0,
                                            int root_index = 0, const ClassifyOptions& opt = {}) {
  const Classification cl = classify(m, opt);
  if (cl.kind != MapKind::elliptic_rational && cl.kind != MapKind::identity)
    throw error(errc::wrong_kind, "exact eigenvector needs a map of finite order");
  if (!(std::abs(z0) < 1.0)) throw error(errc::outside_disk, "z0 must lie in D");
  const int n0 = cl.period;
  std::vector<cplx> orbit{z0}, values;
  for (int k = 1; k < n0; ++k) orbit.push_back(m(orbit.back()));
  for (cplx x : orbit) values.push_back(s(x));

  WitnessRun run;
  run.construction = Construction::rational_rotation_exact;
  run.space = sp;
  WitnessStage st;
  st.index = 1;
  st.base_point = z0;
  st.h = {sp, KernelBasis::raw, {}};

  const auto zero = std::find_if(values.begin(), values.end(), [](cplx v) { return std::abs(v) <= kOrbitZeroTol; });
  if (zero != values.end()) {
    // C* K_x = conj(psi(x)) K_{phi(x)} = 0 at a zero of psi on the orbit.
    const cplx x = orbit[zero - values.begin()];
    st.h.add(1.0, x);
    st.eigenvalue = 0.0;
    run.lambda = 0.0;
    run.note = "weight vanishes on the orbit: kernel eigenvector for 0";
  } else {
    cplx product{1.0};
    for (cplx v : values) product *= v;
    const cplx l0 = std::polar(std::pow(std::abs(product), 1.0 / n0), (std::arg(product) + two_pi * root_index) / n0);
    const cplx mu = std::conj(l0);
    cplx coef{1.0};
    for (int k = 0; k < n0; ++k) {
      st.h.add(coef, orbit[k]);
      coef *= std::conj(values[k]) / mu;
    }
    st.eigenvalue = mu;
    run.lambda = l0;
  }
  st.n_terms = static_cast<int>(st.h.terms.size());
  st.norm = combo_norm(st.h);
  st.residual = detail::residual_norm(st.h, s, m, st.eigenvalue, 1e-9) / st.norm;
  // ||h|| >= |B(x_0)| ||K_{x_0}|| for the Blaschke product vanishing on the other orbit points.
  std::vector<cplx> others;
  for (std::size_t k = 1; k < st.h.terms.size(); ++k) others.push_back(st.h.terms[k].point);
  st.floor = std::abs(blaschke_value(others, st.h.terms[0].point)) * kernel_norm(sp, st.h.terms[0].point);
  st.bound = 0.0;
  run.stages.push_back(std::move(st));
  return run;
}

// ---------------------------------------------------------------- backward orbits

enum class RaySpacing { harmonic, geometric };

// Points approaching the zero of psi of least modulus in the closed disk along the ray from 0, at
// distance t_j |zeta| from it (t_j from the origin when the zero is 0): t_j = 1/(j+1), or 2^{-j}.
inline std::vector<cplx> ray_base_points(const SymbolSpec& s, int count, RaySpacing spacing = RaySpacing::harmonic,
                                         double zero_tol = 1e-8) {
  const ZeroReport zr = zero_report(s, zero_tol);
  std::vector<cplx> inside = zr.interior;
  inside.insert(inside.end(), zr.boundary.begin(), zr.boundary.end());
  if (inside.empty()) throw error(errc::unsupported_kind, "weight has no zero in the closed disk");
  cplx zeta = inside.front();
  if (std::abs(zeta) > 1.0) zeta /= std::abs(zeta);
  std::vector<cplx> out;
  for (int j = 1; j <= count; ++j) {
    const double t = spacing == RaySpacing::harmonic ? 1.0 / (j + 1) : std::ldexp(1.0, -j);
    out.push_back(std::abs(zeta) < 1e-15 ? cplx(t) : zeta * (1.0 - t));
  }
  return out;
}

struct BackwardOrbitOptions {
  bool enforce_guarantee = true;
  double merge_tol = 1e-12;
  ClassifyOptions classify;
};

// |psi(b)| |phi'(b)|^{-p/2} at the attracting point b of phi^{-1}: the disk radius certified by
// backward-orbit witnesses.
inline double backward_orbit_guarantee(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp,
                                       const ClassifyOptions& opt = {}) {
  const Classification cl = classify(m, opt);
  if (cl.kind != MapKind::hyperbolic && cl.kind != MapKind::parabolic)
    throw error(errc::wrong_kind, "backward orbits need a hyperbolic or parabolic map");
  const cplx b = cl.kind == MapKind::hyperbolic ? *cl.repelling_point() : *cl.denjoy_wolff;
  return std::abs(s(b)) * std::pow(std::abs(m.mobius().derivative(b)), -0.5 * sp.kernel_exponent());
}

namespace detail {

// One backward-orbit stage in scalar type C; nullopt when psi vanishes on the orbit.
template <class C>
std::optional<WitnessStage> backward_stage(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp, cplx lambda,
                                           cplx zb, int n_terms, double merge_tol) {
  using R = real_t<C>;
  using std::abs;
  using std::log;
  using std::pow;
  const MobiusMap inv = m.inverse();
  const R half_p(0.5 * sp.kernel_exponent());
  const C lam = lift<C>(lambda);
  std::vector<C> z{lift<C>(zb)};
  for (int k = 1; k < n_terms; ++k) z.push_back(inv.apply(z.back()));
  std::vector<C> u;
  for (int k = 0; k < n_terms; ++k) {
    const C v = s.value(z[k]);
    // At lambda = 0 only the first term is used, so later zeros are harmless.
    if (k > 0 && lambda != cplx{} && abs(v) <= R(kOrbitZeroTol)) return std::nullopt;
    u.push_back(conj(v) * R(pow(R(abs(m.mobius().derivative(z[k]))), -half_p)));
  }

  KernelCombination<C> h{sp, KernelBasis::normalized, {}};
  C coef(1);
  R log_prod(0);
  h.add(coef, z[0]);
  for (int k = 1; k < n_terms; ++k) {
    coef = lambda == cplx{} ? C(0) : C(coef * lam / u[k]);
    log_prod += log(R(abs(u[k])));
    h.add(coef, z[k]);
  }

  WitnessStage st;
  st.n_terms = n_terms;
  st.base_point = zb;
  st.eigenvalue = lambda;
  const R norm = combo_norm(h);
  st.norm = lower(norm);
  st.residual = lower(R(residual_norm(h, s, m, lam, merge_tol) / norm));
  R floor(1);
  for (int k = 1; k < n_terms; ++k) floor *= pseudo_hyperbolic_unchecked(z[0], z[k]);
  st.floor = lower(floor);
  const double u0 = lower(R(abs(u[0])));
  if (n_terms > 1) {
    st.q = std::exp(lower(log_prod) / (n_terms - 1));
    st.bound = u0 + std::exp(n_terms * std::log(std::abs(lambda)) - lower(log_prod));
  } else {
    st.bound = u0 + std::abs(lambda);
  }
  st.h = lowered(h);
  return st;
}

// Smallest 1 - |z|^2 along the first n_terms backward-orbit points, in 50 digits.
inline mp_real backward_orbit_depth(const MobiusMap& m, cplx zb, int n_terms) {
  const MobiusMap inv = m.inverse();
  mp_complex z = lift<mp_complex>(zb);
  mp_real depth = mp_real(1) - abs2(z);
  for (int k = 1; k < n_terms; ++k) {
    z = inv.apply(z);
    depth = std::min(depth, mp_real(mp_real(1) - abs2(z)));
  }
  return depth;
}

}  // namespace detail

// Largest n <= cap whose backward orbits from every base point stay 1e-30 away from the circle.
inline int backward_orbit_terms(const MobiusMap& m, const std::vector<cplx>& base_points, int cap = 160) {
  const MobiusMap inv = m.inverse();
  int n = cap;
  for (cplx zb : base_points) {
    mp_complex z = lift<mp_complex>(zb);
    for (int k = 1; k < n; ++k) {
      z = inv.apply(z);
      if (!(mp_real(1) - abs2(z) > mp_real("1e-30"))) {
        n = k;
        break;
      }
    }
  }
  return n;
}

// h = e_0 + sum_{k=1}^{n-1} lambda^k (prod_{s<=k} u_s)^{-1} e_k over the normalized kernels at
// z_k = phi^{-k}(z_j), with C* e_k = u_k e_{k-1}. Orbits reaching within 1e-6 of the circle
// (hyperbolic maps: 1 - |z_k| ~ s^k) run in 50-digit arithmetic, the rest in double.
inline WitnessRun witness_backward_orbit(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp, cplx lambda,
                                         const std::vector<cplx>& base_points, int n_terms,
                                         const BackwardOrbitOptions& opt = {}) {
  const double guarantee = backward_orbit_guarantee(s, m, sp, opt.classify);
  detail::require_lambda(opt.enforce_guarantee, std::abs(lambda), guarantee, "|psi(b)| phi'(b)^(-p/2)");
  if (n_terms < 1) throw error(errc::invalid_input, "n_terms must be positive");

  WitnessRun run;
  run.construction = Construction::backward_orbit;
  run.lambda = lambda;
  run.space = sp;
  run.note = "guarantee radius " + std::to_string(guarantee);

  int index = 0, skipped = 0;
  for (cplx zb : base_points) {
    ++index;
    if (!(std::abs(zb) < 1.0)) throw error(errc::outside_disk, "base points must lie in D");
    const mp_real depth = detail::backward_orbit_depth(m, zb, n_terms);
    if (!(depth > mp_real("1e-35")))
      throw error(errc::precision_exhausted, "backward orbit too close to the boundary for 50 digits");
    std::optional<WitnessStage> st =
        depth > mp_real("1e-6") ? detail::backward_stage<cplx>(s, m, sp, lambda, zb, n_terms, opt.merge_tol)
                                : detail::backward_stage<mp_complex>(s, m, sp, lambda, zb, n_terms, opt.merge_tol);
    if (!st) {
      ++skipped;
      continue;
    }
    st->index = index;
    run.stages.push_back(std::move(*st));
  }
  if (skipped > 0) {
    if (run.stages.empty()) throw error(errc::zero_on_backward_orbit, "weight vanishes on every backward orbit");
    run.note += "; skipped " + std::to_string(skipped) + " base point(s) whose backward orbit meets a zero";
  }
  return run;
}

// ---------------------------------------------------------------- elliptic constructions

namespace detail {

// First n >= n_min (within budget) with sum_{k=1}^{n} log|psi(x_k)| > n log(level) along the
// orbit x_k = rot^k(start); 0 if none.
inline long birkhoff_scan(const SymbolSpec& s, const MobiusMap& rot, cplx start, long n_min, long budget,
                          double level) {
  const double log_level = std::log(level);
  double sum = 0.0;
  cplx x = start;
  for (long n = 1; n <= budget; ++n) {
    x = rot(x);
    const double v = std::abs(s(x));
    if (v <= kOrbitZeroTol) return 0;
    sum += std::log(v);
    if (n >= n_min && sum > n * log_level) return n;
  }
  return 0;
}

inline std::vector<cplx> rotation_orbit(const MobiusMap& rot, cplx start, long n) {
  std::vector<cplx> x{start};
  for (long k = 1; k <= n; ++k) x.push_back(rot(x.back()));
  return x;
}

}  // namespace detail

// Boundary-zero construction: z_j = r_j zeta_j with zeta_j -> zeta (a zero of psi on the circle),
// h_j = e_{z_j} + sum_{k=1}^{n_j} lambda^k u_{j,k} e_{conj(eta)^k z_j}.
inline WitnessRun witness_elliptic_boundary(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp, cplx lambda,
                                            const WitnessSchedule& sch = {}, const ClassifyOptions& opt = {}) {
  const detail::CenteredRotation c = detail::centered(s, m, opt);
  if (c.kind != MapKind::elliptic_irrational) throw error(errc::wrong_kind, "construction needs an irrational rotation");
  const ZeroReport zr = zero_report(c.symbol);
  if (zr.boundary.empty()) throw error(errc::no_boundary_zero, "weight has no zero on the unit circle");
  const cplx zeta = zr.boundary.front() / std::abs(zr.boundary.front());
  const double target = outer_modulus_at(c.symbol, 0.0);
  const double lam_abs = std::abs(lambda);
  detail::require_lambda(sch.enforce_guarantee, lam_abs, target, "|v(a)|");
  double q = sch.birkhoff_fraction * target;
  if (lam_abs >= q) q = 0.5 * (lam_abs + target);
  const double p = 0.5 * (lam_abs + q);
  const MobiusMap back = c.rotation.inverse();

  WitnessRun run;
  run.construction = Construction::elliptic_boundary_zero;
  run.lambda = lambda;
  run.space = sp;
  run.conjugated = c.conjugated;
  run.note = "target |v(a)| = " + std::to_string(target) + ", q = " + std::to_string(q) + ", p = " + std::to_string(p);

  for (int j = 1; j <= sch.stages; ++j) {
    const double eps = sch.angle_scale * std::pow(0.5, j - 1);
    const long n_min = static_cast<long>(j) * sch.terms_step;
    long n = 0;
    cplx zeta_j;
    for (int cand = 0; cand < sch.candidates && n == 0; ++cand) {
      const double offset = eps * (1.0 + static_cast<double>(cand / 2) / sch.candidates) * (cand % 2 ? -1.0 : 1.0);
      zeta_j = zeta * unit(offset);
      n = detail::birkhoff_scan(c.symbol, back, zeta_j, n_min, sch.max_orbit_steps, q);
    }
    if (n == 0) {
      run.schedule_exhausted = true;
      break;
    }
    // Radius: push r toward 1 until the orbit product clears p^n and the Blaschke guard holds.
    double gap = 0.5 * eps, r = 0.0, guard = 0.0;
    std::vector<cplx> x;
    bool ok = false;
    for (int halving = 0; halving <= sch.max_radius_halvings && gap >= 1e-10; ++halving, gap *= 0.5) {
      r = 1.0 - gap;
      bool zero_on_circle = false;
      for (cplx zz : c.symbol.zeros()) zero_on_circle = zero_on_circle || std::abs(std::abs(zz) - r) < 1e-12;
      if (zero_on_circle) continue;
      x = detail::rotation_orbit(back, r * zeta_j, n);
      double log_prod = 0.0;
      for (long k = 1; k <= n; ++k) log_prod += std::log(std::abs(c.symbol(x[k])));
      guard = 1.0;
      for (long k = 1; k <= n; ++k) guard *= pseudo_hyperbolic_unchecked(x[0], x[k]);
      if (log_prod > n * std::log(p) && guard > 0.5) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      run.schedule_exhausted = true;
      break;
    }

    KernelCombination<cplx> h{sp, KernelBasis::normalized, {}};
    h.add(1.0, x[0]);
    if (lambda != cplx{}) {
      cplx coef{1.0};
      for (long k = 1; k <= n; ++k) {
        coef *= lambda / std::conj(c.symbol(x[k]));
        h.add(coef, x[k]);
      }
    }
    WitnessStage st;
    st.index = j;
    st.n_terms = static_cast<int>(h.terms.size());
    st.base_point = x[0];
    st.radius = r;
    st.eigenvalue = lambda;
    st.norm = combo_norm(h);
    st.residual = detail::residual_norm(h, c.symbol, c.rotation, lambda, sch.merge_tol) / st.norm;
    st.floor = guard;
    st.q = q;
    st.bound = 2.0 * std::abs(c.symbol(x[0])) +
               (lambda == cplx{} ? 0.0 : 2.0 * lam_abs * std::exp(n * (std::log(lam_abs) - std::log(p))));
    st.h = std::move(h);
    run.stages.push_back(std::move(st));
  }
  return run;
}

// Level-circle construction at z0 on |z| = r0: at each return time n of the rotation,
// lambda runs over the n-th roots of P_n = prod_{k<n} conj(psi(eta^k z0)) and
// h = sum_{s<n} P_s / lambda^s e_{eta^s z0}, so (C* - lambda) h = lambda (e_{eta^n z0} - e_{z0}).
inline WitnessRun witness_level_circle(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp, double r0,
                                       const WitnessSchedule& sch = {}, const ClassifyOptions& opt = {}) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw error(errc::invalid_input, "r0 must lie in (0,1)");
  const detail::CenteredRotation c = detail::centered(s, m, opt);
  if (c.kind != MapKind::elliptic_irrational)
    throw error(errc::rational_multiplier, "return times unavailable for a rational rotation");
  std::vector<long> times;
  for (int count = 1;; ++count) {
    const std::vector<long> t = return_times(c.eta, count, opt);
    if (t.back() > sch.max_return_time || t.size() < static_cast<std::size_t>(count)) break;
    times = t;
  }
  if (times.empty()) throw error(errc::invalid_input, "max_return_time below the first return time");
  const long n_max = times.back();

  // z0 on the circle with psi nonvanishing along the orbit.
  std::vector<cplx> x;
  std::vector<double> logs, args;
  bool found = false;
  for (int cand = 0; cand < sch.candidates && !found; ++cand) {
    x = detail::rotation_orbit(c.rotation, std::polar(r0, sch.start_angle + 0.1 * cand), n_max);
    logs.assign(1, 0.0);
    args.assign(1, 0.0);
    found = true;
    for (long k = 0; k < n_max; ++k) {
      const cplx v = std::conj(c.symbol(x[k]));
      if (std::abs(v) <= kOrbitZeroTol) {
        found = false;
        break;
      }
      logs.push_back(logs.back() + std::log(std::abs(v)));
      args.push_back(args.back() + std::arg(v));
    }
  }
  if (!found) throw error(errc::zero_on_orbit, "weight vanishes on every candidate orbit");

  WitnessRun run;
  run.construction = Construction::elliptic_level_circle;
  run.space = sp;
  run.conjugated = c.conjugated;
  run.note = "Delta_psi(r0) = " + std::to_string(delta_psi(c.symbol, r0));

  int index = 0;
  for (long n : times) {
    ++index;
    const double log_rho = logs[n] / n;
    const double theta = args[n] / n;
    std::vector<cplx> base(n), pts(x.begin(), x.begin() + n);
    for (long k = 0; k < n; ++k) base[k] = std::polar(std::exp(logs[k] - k * log_rho), args[k] - k * theta);
    const int root = detail::select_max_norm_root(base, pts, sp, r0, false);
    const cplx lambda = std::polar(std::exp(log_rho), theta + two_pi * root / n);

    KernelCombination<cplx> h{sp, KernelBasis::normalized, {}};
    for (long k = 0; k < n; ++k) h.add(base[k] * unit(-two_pi * static_cast<double>(k) * root / n), pts[k]);
    WitnessStage st;
    st.index = index;
    st.n_terms = static_cast<int>(n);
    st.base_point = x[0];
    st.radius = r0;
    st.eigenvalue = lambda;
    st.selected_root = root;
    st.norm = combo_norm(h);
    st.residual = detail::residual_norm(h, c.symbol, c.rotation, lambda, sch.merge_tol) / st.norm;
    st.floor = 1.0;
    KernelCombination<cplx> gap{sp, KernelBasis::normalized, {}};
    gap.add(lambda, x[n]);
    gap.add(-lambda, x[0]);
    st.bound = combo_norm(gap) / st.norm;
    st.h = std::move(h);
    run.lambda = lambda;
    run.stages.push_back(std::move(st));
  }
  return run;
}

// Inner-zero construction on the circle through the smallest zero of psi: z_j -> that zero,
// lambda ranges over t0 times the (n_j+1)-th roots of unity and the root of largest ||h|| is used.
inline WitnessRun witness_inner_zero(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp, double t0,
                                     const WitnessSchedule& sch = {}, const ClassifyOptions& opt = {}) {
  const detail::CenteredRotation c = detail::centered(s, m, opt);
  if (c.kind != MapKind::elliptic_irrational) throw error(errc::wrong_kind, "construction needs an irrational rotation");
  const ZeroReport zr = zero_report(c.symbol);
  if (zr.interior.empty()) throw error(errc::no_inner_zero, "weight has no zero inside the disk");
  const double delta_r = std::abs(c.symbol(cplx{0.0}));
  if (delta_r == 0.0 || zr.min_inner_radius == 0.0)
    throw error(errc::unsupported_kind, "weight vanishes at the fixed point: no inner-zero annulus");
  if (!(t0 >= 0.0)) throw error(errc::invalid_input, "t0 must be nonnegative");
  detail::require_lambda(sch.enforce_guarantee, t0, delta_r, "|psi(a)|");
  double p = sch.birkhoff_fraction * delta_r;
  if (t0 >= p) p = 0.5 * (t0 + delta_r);
  const cplx zstar = zr.interior.front();
  const double big_r = std::abs(zstar);
  const MobiusMap back = c.rotation.inverse();

  WitnessRun run;
  run.construction = Construction::elliptic_inner_zero;
  run.lambda = t0;
  run.space = sp;
  run.conjugated = c.conjugated;
  run.note = "R = " + std::to_string(big_r) + ", Delta_psi(R) = " + std::to_string(delta_r);

  for (int j = 1; j <= sch.stages; ++j) {
    const double eps = sch.angle_scale * std::pow(0.5, j - 1);
    const long n_min = static_cast<long>(j) * sch.terms_step;
    long n = 0;
    cplx zj;
    for (int cand = 0; cand < sch.candidates && n == 0; ++cand) {
      const double offset = eps * (1.0 + static_cast<double>(cand / 2) / sch.candidates) * (cand % 2 ? -1.0 : 1.0);
      zj = zstar * unit(offset);
      n = detail::birkhoff_scan(c.symbol, back, zj, n_min, sch.max_orbit_steps, p);
    }
    if (n == 0) {
      run.schedule_exhausted = true;
      break;
    }
    const std::vector<cplx> x = detail::rotation_orbit(back, zj, n);
    std::vector<cplx> base(n + 1);
    cplx u{1.0};
    double tk = 1.0;
    base[0] = 1.0;
    for (long k = 1; k <= n; ++k) {
      u /= std::conj(c.symbol(x[k]));
      tk *= t0;
      base[k] = tk * u;
    }
    const int root = detail::select_max_norm_root(base, x, sp, big_r, true);
    const cplx lambda = std::polar(t0, two_pi * root / static_cast<double>(n + 1));
    KernelCombination<cplx> h{sp, KernelBasis::normalized, {}};
    for (long k = 0; k <= n; ++k) h.add(base[k] * unit(two_pi * static_cast<double>(k) * root / (n + 1)), x[k]);

    WitnessStage st;
    st.index = j;
    st.n_terms = static_cast<int>(n + 1);
    st.base_point = zj;
    st.radius = big_r;
    st.eigenvalue = lambda;
    st.selected_root = root;
    st.norm = combo_norm(h);
    st.residual = detail::residual_norm(h, c.symbol, c.rotation, lambda, sch.merge_tol) / st.norm;
    st.floor = 1.0;
    st.q = p;
    st.bound = std::abs(c.symbol(zj)) + (t0 == 0.0 ? 0.0 : t0 * std::exp(n * (std::log(t0) - std::log(p))));
    st.h = std::move(h);
    run.stages.push_back(std::move(st));
  }
  return run;
}

}  // namespace specwin

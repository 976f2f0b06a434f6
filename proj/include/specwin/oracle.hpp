#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "mobius.hpp"
#include "numeric.hpp"
#include "space.hpp"
#include "symbol.hpp"

namespace specwin {

enum class SpectrumShape { disk, circle, annulus, sampled_closure };

inline const char* to_string(SpectrumShape s) {
  switch (s) {
    case SpectrumShape::disk: return "Disk";
    case SpectrumShape::circle: return "Circle";
    case SpectrumShape::annulus: return "Annulus";
    case SpectrumShape::sampled_closure: return "SampledClosure";
  }
  return "?";
}

struct Provenance {
  std::string rule;    // e.g. "hyperbolic_noninvertible_disk"
  std::string source;  // "noninvertible_theorem", "invertible_prior_result" or "multiplier_closure"
  std::map<std::string, double> inputs;
};

struct SpectrumSet {
  SpectrumShape shape = SpectrumShape::disk;
  double radius = 0.0;              // disk, circle
  double r_min = 0.0, r_max = 0.0;  // annulus
  std::vector<cplx> points;         // sampled closure, grouped in runs of `period` roots
  int period = 0;                   // n0 for sampled closures
  double membership_tol = 1e-2;
  Provenance provenance;

  double outer_radius() const {
    switch (shape) {
      case SpectrumShape::disk:
      case SpectrumShape::circle: return radius;
      case SpectrumShape::annulus: return r_max;
      case SpectrumShape::sampled_closure: {
        double r = 0.0;
        for (cplx p : points) r = std::max(r, std::abs(p));
        return r;
      }
    }
    return 0.0;
  }

  // Sampled closures answer by distance to the nearest sample (at least membership_tol).
  bool contains(cplx lambda, double tol = 1e-9) const {
    const double mod = std::abs(lambda);
    switch (shape) {
      case SpectrumShape::disk: return mod <= radius + tol;
      case SpectrumShape::circle: return std::abs(mod - radius) <= tol;
      case SpectrumShape::annulus: return mod >= r_min - tol && mod <= r_max + tol;
      case SpectrumShape::sampled_closure: {
        const double t = std::max(tol, membership_tol);
        for (cplx p : points)
          if (std::abs(p - lambda) <= t) return true;
        return false;
      }
    }
    return false;
  }
};

enum class RadiusKind { elliptic_outer, parabolic_weight_at_dw, hyperbolic_max };

inline const char* to_string(RadiusKind k) {
  switch (k) {
    case RadiusKind::elliptic_outer: return "EllipticOuter";
    case RadiusKind::parabolic_weight_at_dw: return "ParabolicWeightAtDW";
    case RadiusKind::hyperbolic_max: return "HyperbolicMax";
  }
  return "?";
}

struct RadiusBound {
  double value = 0.0;
  RadiusKind kind = RadiusKind::elliptic_outer;
  std::map<std::string, double> details;
};

struct SamplingSpec {
  int radii = 64;
  int angles = 256;
  double boundary_gap = 1e-6;  // innermost-to-boundary spacing of the geometric radius grid
  double membership_tol = 1e-2;
};

struct OracleOptions {
  ClassifyOptions classify;
  SamplingSpec sampling;
  double zero_tol = 1e-8;
  QuadratureOptions quadrature;
};

inline bool is_invertible_operator(const SymbolSpec& s, const MobiusMap&, double zero_tol = 1e-8) {
  return is_invertible_weight(s, zero_tol);
}

namespace detail {

// |psi(p)| |phi'(p)|^{-e} at a boundary fixed point, e = kernel exponent / 2.
inline double boundary_weight(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp, cplx p) {
  const double e = 0.5 * sp.kernel_exponent();
  return std::abs(s(p)) * std::pow(std::abs(m.mobius().derivative(p)), -e);
}

}  // namespace detail

inline RadiusBound spectral_radius_bound(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp,
                                         const OracleOptions& opt = {}) {
  const Classification cl = classify(m, opt.classify);
  RadiusBound out;
  switch (cl.kind) {
    case MapKind::elliptic_irrational: {
      const cplx a = cl.interior_fixed_point();
      out.kind = RadiusKind::elliptic_outer;
      out.value = outer_modulus_at(s, a, opt.quadrature);
      out.details = {{"fixed_point_re", a.real()}, {"fixed_point_im", a.imag()}, {"outer_modulus", out.value}};
      return out;
    }
    case MapKind::parabolic: {
      const cplx a = *cl.denjoy_wolff;
      out.kind = RadiusKind::parabolic_weight_at_dw;
      out.value = std::abs(s(a));
      out.details = {{"dw_re", a.real()}, {"dw_im", a.imag()}, {"psi_abs_at_dw", out.value}};
      return out;
    }
    case MapKind::hyperbolic: {
      const cplx a = *cl.denjoy_wolff, b = *cl.repelling_point();
      const double wa = detail::boundary_weight(s, m, sp, a), wb = detail::boundary_weight(s, m, sp, b);
      out.kind = RadiusKind::hyperbolic_max;
      out.value = std::max(wa, wb);
      out.details = {{"weight_at_dw", wa},
                     {"weight_at_repelling", wb},
                     {"phi_prime_dw", std::abs(m.mobius().derivative(a))},
                     {"phi_prime_repelling", std::abs(m.mobius().derivative(b))},
                     {"exponent", 0.5 * sp.kernel_exponent()}};
      return out;
    }
    default:
      throw error(errc::unsupported_kind, std::string("no radius bound for ") + to_string(cl.kind) +
                                              " maps; use predict_spectrum");
  }
}

// Half the radii uniform on [0, 1 - 1/U), the rest geometric in 1 - r from 1/U down to the
// boundary gap, then r = 1; psi_(n0) does most of its varying near the circle.
inline std::vector<double> closure_radii(const SamplingSpec& sampling) {
  if (sampling.radii < 4 || sampling.angles < 1) throw error(errc::invalid_input, "sampling grid too small");
  const int uniform = sampling.radii / 2;
  const int geometric = sampling.radii - uniform - 1;
  std::vector<double> r;
  r.reserve(sampling.radii);
  for (int k = 0; k < uniform; ++k) r.push_back(static_cast<double>(k) / uniform);
  const double start = 1.0 / uniform;
  for (int i = 1; i <= geometric; ++i)
    r.push_back(1.0 - start * std::pow(sampling.boundary_gap / start, static_cast<double>(i) / geometric));
  r.push_back(1.0);
  return r;
}

// All n0-th roots of psi_(n0)(z) over the polar sampling grid.
inline SpectrumSet sampled_closure(const SymbolSpec& s, const MobiusMap& m, int n0, const SamplingSpec& sampling) {
  SpectrumSet out;
  out.shape = SpectrumShape::sampled_closure;
  out.period = n0;
  out.membership_tol = sampling.membership_tol;
  const std::vector<double> radii = closure_radii(sampling);
  for (double r : radii) {
    const int angles = r == 0.0 ? 1 : sampling.angles;
    for (int j = 0; j < angles; ++j) {
      const cplx z = std::polar(r, two_pi * j / sampling.angles);
      const cplx w = cocycle(s, m, n0, z);
      const double mod = std::pow(std::abs(w), 1.0 / n0);
      const double arg = std::arg(w);
      for (int k = 0; k < n0; ++k) out.points.push_back(std::polar(mod, (arg + two_pi * k) / n0));
    }
  }
  return out;
}

inline SpectrumSet predict_spectrum(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp,
                                    const OracleOptions& opt = {}) {
  const Classification cl = classify(m, opt.classify);
  const bool invertible = is_invertible_weight(s, opt.zero_tol);
  SpectrumSet out;

  if (cl.kind == MapKind::identity || cl.kind == MapKind::elliptic_rational) {
    out = sampled_closure(s, m, cl.kind == MapKind::identity ? 1 : cl.period, opt.sampling);
    out.provenance = {cl.kind == MapKind::identity ? "identity_multiplier_closure" : "rational_rotation_closure",
                      cl.kind == MapKind::identity ? "multiplier_closure" : "noninvertible_theorem",
                      {{"period", static_cast<double>(out.period)}, {"samples", static_cast<double>(out.points.size())}}};
    return out;
  }

  const std::string source = invertible ? "invertible_prior_result" : "noninvertible_theorem";
  switch (cl.kind) {
    case MapKind::elliptic_irrational: {
      const cplx a = cl.interior_fixed_point();
      if (invertible) {
        out.shape = SpectrumShape::circle;
        out.radius = std::abs(s(a));
        out.provenance = {"elliptic_invertible_circle", source, {{"psi_abs_at_fixed_point", out.radius}}};
      } else {
        out.shape = SpectrumShape::disk;
        out.radius = outer_modulus_at(s, a, opt.quadrature);
        out.provenance = {"elliptic_noninvertible_disk", source, {{"outer_modulus_at_fixed_point", out.radius}}};
      }
      out.provenance.inputs["fixed_point_re"] = a.real();
      out.provenance.inputs["fixed_point_im"] = a.imag();
      return out;
    }
    case MapKind::parabolic: {
      const cplx a = *cl.denjoy_wolff;
      out.shape = invertible ? SpectrumShape::circle : SpectrumShape::disk;
      out.radius = std::abs(s(a));
      out.provenance = {invertible ? "parabolic_invertible_circle" : "parabolic_noninvertible_disk",
                        source,
                        {{"psi_abs_at_dw", out.radius}, {"dw_re", a.real()}, {"dw_im", a.imag()}}};
      return out;
    }
    case MapKind::hyperbolic: {
      const cplx a = *cl.denjoy_wolff, b = *cl.repelling_point();
      const double e = 0.5 * sp.kernel_exponent();
      const double wa = detail::boundary_weight(s, m, sp, a), wb = detail::boundary_weight(s, m, sp, b);
      std::map<std::string, double> inputs{{"weight_at_dw", wa},
                                           {"weight_at_repelling", wb},
                                           {"phi_prime_dw", std::abs(m.mobius().derivative(a))},
                                           {"exponent", e}};
      if (invertible) {
        out.shape = SpectrumShape::annulus;
        out.r_min = std::min(wa, wb);
        out.r_max = std::max(wa, wb);
        out.provenance = {"hyperbolic_invertible_annulus", source, inputs};
      } else {
        out.shape = SpectrumShape::disk;
        out.radius = std::max(wa, wb);
        out.provenance = {"hyperbolic_noninvertible_disk", source, inputs};
      }
      return out;
    }
    default: break;
  }
  throw error(errc::unsupported_kind, "unclassified map");
}

}  // namespace specwin

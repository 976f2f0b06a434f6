#pragma once

#include <random>
#include <string>
#include <vector>

#include "io.hpp"
#include "oracle.hpp"
#include "truncation.hpp"
#include "witness.hpp"

namespace specwin {

// ---------------------------------------------------------------- witness dispatch

// The construction the configured triple calls for ("auto"), or the configured one.
inline std::string choose_construction(const RunConfig& cfg) {
  if (cfg.witness.construction != "auto") return cfg.witness.construction;
  const SymbolSpec& s = cfg.require_symbol();
  const Classification cl = classify(cfg.require_map(), cfg.oracle.classify);
  switch (cl.kind) {
    case MapKind::identity:
    case MapKind::elliptic_rational: return "rational_rotation";
    case MapKind::hyperbolic:
    case MapKind::parabolic: return "backward_orbit";
    case MapKind::elliptic_irrational: {
      const detail::CenteredRotation c = detail::centered(s, cfg.require_map(), cfg.oracle.classify);
      const ZeroReport zr = zero_report(c.symbol, cfg.oracle.zero_tol);
      if (!zr.boundary.empty()) return "elliptic_boundary";
      if (!zr.interior.empty() && std::abs(c.symbol(cplx{0.0})) > 0.0) return "inner_zero";
      return "level_circle";
    }
  }
  return "rational_rotation";
}

// Runs the configured witness; unset lambda / t0 default to lambda_fraction times the radius the
// construction can reach.
inline WitnessRun run_witness(const RunConfig& cfg) {
  const SymbolSpec& s = cfg.require_symbol();
  const MobiusMap& m = cfg.require_map();
  const WitnessConfig& w = cfg.witness;
  const std::string kind = choose_construction(cfg);
  if (kind == "rational_rotation") return witness_rational_rotation(s, m, cfg.space, w.z0, w.root_index, cfg.oracle.classify);
  if (kind == "backward_orbit") {
    BackwardOrbitOptions opt;
    opt.enforce_guarantee = w.schedule.enforce_guarantee;
    opt.classify = cfg.oracle.classify;
    const cplx lambda = w.lambda ? *w.lambda : cplx(w.lambda_fraction * backward_orbit_guarantee(s, m, cfg.space, cfg.oracle.classify));
    const std::vector<cplx> base = w.base_points.empty() ? ray_base_points(s, w.ray_count, w.ray_spacing, cfg.oracle.zero_tol) : w.base_points;
    return witness_backward_orbit(s, m, cfg.space, lambda, base, w.n_terms ? *w.n_terms : backward_orbit_terms(m, base), opt);
  }
  if (kind == "elliptic_boundary") {
    cplx lambda;
    if (w.lambda) {
      lambda = *w.lambda;
    } else {
      const detail::CenteredRotation c = detail::centered(s, m, cfg.oracle.classify);
      lambda = w.lambda_fraction * outer_modulus_at(c.symbol, 0.0, cfg.oracle.quadrature);
    }
    return witness_elliptic_boundary(s, m, cfg.space, lambda, w.schedule, cfg.oracle.classify);
  }
  if (kind == "inner_zero") {
    double t0;
    if (w.t0) {
      t0 = *w.t0;
    } else {
      const detail::CenteredRotation c = detail::centered(s, m, cfg.oracle.classify);
      t0 = w.lambda_fraction * std::abs(c.symbol(cplx{0.0}));
    }
    return witness_inner_zero(s, m, cfg.space, t0, w.schedule, cfg.oracle.classify);
  }
  return witness_level_circle(s, m, cfg.space, w.r0, w.schedule, cfg.oracle.classify);
}

// ---------------------------------------------------------------- verification battery

enum class Verdict { pass, fail, warn, skip };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::warn: return "WARN";
    case Verdict::skip: return "SKIP";
  }
  return "?";
}

struct Check {
  std::string name;
  Verdict verdict = Verdict::skip;
  double measured = 0.0;
  double threshold = 0.0;
  bool hard = true;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;

  const Check* first_hard_failure() const {
    for (const Check& c : checks)
      if (c.hard && c.verdict == Verdict::fail) return &c;
    return nullptr;
  }
  bool passed() const { return first_hard_failure() == nullptr; }
};

inline json to_json(const VerifyReport& r) {
  json checks = json::array();
  for (const Check& c : r.checks)
    checks.push_back(json{{"name", c.name},
                          {"verdict", to_string(c.verdict)},
                          {"measured", detail::nullable(c.measured)},
                          {"threshold", detail::nullable(c.threshold)},
                          {"hard", c.hard},
                          {"detail", c.detail}});
  return json{{"verdict", r.passed() ? "PASS" : "FAIL"}, {"checks", checks}};
}

namespace detail {

inline Check threshold_check(std::string name, double measured, double threshold, bool hard, std::string info = {}) {
  Check c{std::move(name), Verdict::pass, measured, threshold, hard, std::move(info)};
  if (!(measured <= threshold)) c.verdict = hard ? Verdict::fail : Verdict::warn;
  return c;
}

// max over random z (|z| <= 0.9) of ||A^H k_z - conj(psi(z)) k_{phi(z)}|| / ||rhs||
// Sample radius for the adjoint check: the truncated kernel tail scales like r^N, so small N
// needs points nearer the origin.
inline double adjoint_radius(int N) { return std::min(0.9, std::pow(1e-10, 1.0 / N)); }

inline double adjoint_error(const Eigen::MatrixXcd& A, const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp,
                            std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = static_cast<int>(A.rows());
  const double r = adjoint_radius(n);
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    const cplx z = std::polar(r * std::sqrt(u(rng)), two_pi * u(rng));
    const Eigen::VectorXcd lhs = A.adjoint() * kernel_coefficients(sp, z, n);
    const Eigen::VectorXcd rhs = std::conj(s(z)) * kernel_coefficients(sp, m(z), n);
    worst = std::max(worst, (lhs - rhs).norm() / rhs.norm());
  }
  return worst;
}

}  // namespace detail

// Battery for the configured triple: truncation adjoint identity, oracle radius consistency,
// witness residual for the predicted set, and a soft pseudospectrum direction check.
inline VerifyReport run_verification(const RunConfig& cfg) {
  const SymbolSpec& s = cfg.require_symbol();
  const MobiusMap& m = cfg.require_map();
  VerifyReport report;

  TruncationMatrix t = build_truncation(s, m, cfg.space, cfg.N);
  if (cfg.fault.enabled) {
    if (cfg.fault.row < 0 || cfg.fault.col < 0 || cfg.fault.row >= cfg.N || cfg.fault.col >= cfg.N)
      throw error(errc::invalid_input, "/fault_injection/corrupt_entry: outside the truncation");
    t.A(cfg.fault.row, cfg.fault.col) += cfg.fault.amount;
  }
  report.checks.push_back(detail::threshold_check("adjoint_identity", detail::adjoint_error(t.A, s, m, cfg.space, cfg.seed, 20),
                                                  1e-6, true, "N = " + std::to_string(cfg.N) + ", 20 points with |z| <= " +
                                                      format_double(detail::adjoint_radius(cfg.N))));

  const SpectrumSet set = predict_spectrum(s, m, cfg.space, cfg.oracle);
  if (set.shape != SpectrumShape::sampled_closure) {
    const RadiusBound bound = spectral_radius_bound(s, m, cfg.space, cfg.oracle);
    const double gap = set.shape == SpectrumShape::circle ? std::max(0.0, set.radius - bound.value)
                                                          : std::abs(set.outer_radius() - bound.value);
    report.checks.push_back(detail::threshold_check("radius_consistency", gap, 1e-10, true,
                                                    std::string(to_string(set.shape)) + " against " + to_string(bound.kind)));
  }

  const bool invertible_band = set.shape == SpectrumShape::annulus ||
                               (set.shape == SpectrumShape::circle && classify(m, cfg.oracle.classify).kind == MapKind::parabolic);
  if (invertible_band) {
    report.checks.push_back({"witness", Verdict::skip, 0.0, 0.0, false, "invertible band: no witness construction"});
  } else {
    const WitnessRun run = run_witness(cfg);
    if (run.stages.empty()) {
      report.checks.push_back({"witness", Verdict::fail, 0.0, 0.05, true, "no stage recorded"});
    } else {
      const WitnessStage& last = run.stages.back();
      const double tol = run.construction == Construction::rational_rotation_exact ? 1e-10 : 0.05;
      report.checks.push_back(detail::threshold_check("witness", last.residual, tol, true,
                                                      std::string(to_string(run.construction)) + " at |lambda| = " +
                                                          format_double(std::abs(last.eigenvalue))));
      double floor_gap = 0.0;
      for (const WitnessStage& st : run.stages) floor_gap = std::max(floor_gap, st.floor - st.norm);
      report.checks.push_back(detail::threshold_check("witness_floor", floor_gap, 1e-9, true, "max(floor - norm)"));
      // The witness certifies conj(mu) for the adjoint eigenvalue mu.
      const cplx lambda = std::conj(last.eigenvalue);
      const bool inside = set.contains(lambda, 1e-6);
      report.checks.push_back({"witness_in_prediction", inside ? Verdict::pass : Verdict::fail, std::abs(lambda),
                               set.outer_radius(), true, "|lambda| against the predicted set"});
      if (run.construction == Construction::elliptic_level_circle) {
        const double target = delta_psi(detail::centered(s, m, cfg.oracle.classify).symbol, cfg.witness.r0);
        report.checks.push_back(
            detail::threshold_check("level_circle_modulus", std::abs(std::abs(lambda) - target), 0.02, true, "| |lambda| - Delta(r0) |"));
      }
    }
  }

  // sigma_min should be much smaller inside the predicted set than outside (compressions: soft).
  cplx in, out;
  switch (set.shape) {
    case SpectrumShape::disk: in = 0.5 * set.radius; out = 2.0 * set.radius; break;
    case SpectrumShape::circle: in = set.radius; out = 2.0 * set.radius; break;
    case SpectrumShape::annulus: in = 0.5 * (set.r_min + set.r_max); out = 2.0 * set.r_max; break;
    case SpectrumShape::sampled_closure:
      in = set.points.empty() ? cplx{} : set.points.front();
      out = 1.5 * std::max(set.outer_radius(), 0.1);
      break;
  }
  if (std::abs(out) > 0.0) {
    const double ratio = sigma_min(t.A, in) / sigma_min(t.A, out);
    report.checks.push_back(detail::threshold_check("pseudospectrum_direction", ratio, 0.1, false, "sigma_min(in) / sigma_min(out)"));
  }
  return report;
}

}  // namespace specwin

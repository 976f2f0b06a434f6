#pragma once

#include <stdexcept>
#include <string>

namespace specwin {

enum class errc {
  invalid_input,
  not_automorphism,
  degenerate_map,
  pole_at_point,
  outside_disk,
  outside_closed_disk,
  wrong_kind,
  rational_multiplier,
  unsupported_kind,
  root_finding_failure,
  quadrature_nonconvergence,
  coefficient_extraction_unstable,
  eigensolver_nonconvergence,
  precision_exhausted,
  numerically_indefinite,
  kernel_singularity,
  zero_on_orbit,
  zero_on_backward_orbit,
  lambda_outside_guarantee,
  no_boundary_zero,
  no_inner_zero,
  too_close_to_parabolic_fixed_point,
};

// Coarse grouping used by the CLI for exit codes.
enum class error_category { input, unsupported, numerical };

inline const char* to_string(errc c) noexcept {
  switch (c) {
    case errc::invalid_input: return "InvalidInput";
    case errc::not_automorphism: return "NotAutomorphism";
    case errc::degenerate_map: return "DegenerateMap";
    case errc::pole_at_point: return "PoleAtPoint";
    case errc::outside_disk: return "OutsideDisk";
    case errc::outside_closed_disk: return "OutsideClosedDisk";
    case errc::wrong_kind: return "WrongKind";
    case errc::rational_multiplier: return "RationalMultiplier";
    case errc::unsupported_kind: return "UnsupportedKind";
    case errc::root_finding_failure: return "RootFindingFailure";
    case errc::quadrature_nonconvergence: return "QuadratureNonConvergence";
    case errc::coefficient_extraction_unstable: return "CoefficientExtractionUnstable";
    case errc::eigensolver_nonconvergence: return "EigensolverNonconvergence";
    case errc::precision_exhausted: return "PrecisionExhausted";
    case errc::numerically_indefinite: return "NumericallyIndefinite";
    case errc::kernel_singularity: return "KernelSingularity";
    case errc::zero_on_orbit: return "ZeroOnOrbit";
    case errc::zero_on_backward_orbit: return "ZeroOnBackwardOrbit";
    case errc::lambda_outside_guarantee: return "LambdaOutsideGuarantee";
    case errc::no_boundary_zero: return "NoBoundaryZero";
    case errc::no_inner_zero: return "NoInnerZero";
    case errc::too_close_to_parabolic_fixed_point: return "TooCloseToParabolicFixedPoint";
  }
  return "Unknown";
}

inline error_category category_of(errc c) noexcept {
  switch (c) {
    case errc::wrong_kind:
    case errc::rational_multiplier:
    case errc::unsupported_kind:
    case errc::no_boundary_zero:
    case errc::no_inner_zero:
    case errc::zero_on_orbit:
    case errc::zero_on_backward_orbit:
    case errc::lambda_outside_guarantee:
    case errc::too_close_to_parabolic_fixed_point:
      return error_category::unsupported;
    case errc::root_finding_failure:
    case errc::quadrature_nonconvergence:
    case errc::coefficient_extraction_unstable:
    case errc::eigensolver_nonconvergence:
    case errc::precision_exhausted:
    case errc::numerically_indefinite:
      return error_category::numerical;
    default:
      return error_category::input;
  }
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  errc code() const noexcept { return code_; }
  // The text without the code prefix.
  const std::string& message() const noexcept { return message_; }
  error_category category() const noexcept { return category_of(code_); }

 private:
  errc code_;
  std::string message_;
};

}  // namespace specwin

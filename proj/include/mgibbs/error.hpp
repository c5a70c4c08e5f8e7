#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mgibbs {

enum class ErrorKind {
  duplicate_position,
  region_out_of_bounds,
  size_limit,
  ground_mismatch,
  not_in_ideal,
  not_normalized,
  overlapping_configurations,
  quadrature_failure,
  stability_violation,
  infinite_c_beta,
  outside_radius,
  integration_failure,
  scheme_mismatch,
  non_finite_integrand,
  acceptance_too_low,
  requires_finite_range,
  unsupported_boundary,
  invalid_argument,
  config_error,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::duplicate_position: return "DuplicatePosition";
    case ErrorKind::region_out_of_bounds: return "RegionOutOfBounds";
    case ErrorKind::size_limit: return "SizeLimit";
    case ErrorKind::ground_mismatch: return "GroundMismatch";
    case ErrorKind::not_in_ideal: return "NotInIdeal";
    case ErrorKind::not_normalized: return "NotNormalized";
    case ErrorKind::overlapping_configurations: return "OverlappingConfigurations";
    case ErrorKind::quadrature_failure: return "QuadratureFailure";
    case ErrorKind::stability_violation: return "StabilityViolation";
    case ErrorKind::infinite_c_beta: return "InfiniteCBeta";
    case ErrorKind::outside_radius: return "OutsideRadius";
    case ErrorKind::integration_failure: return "IntegrationFailure";
    case ErrorKind::scheme_mismatch: return "SchemeMismatch";
    case ErrorKind::non_finite_integrand: return "NonFiniteIntegrand";
    case ErrorKind::acceptance_too_low: return "AcceptanceTooLow";
    case ErrorKind::requires_finite_range: return "RequiresFiniteRange";
    case ErrorKind::unsupported_boundary: return "UnsupportedBoundary";
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::config_error: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace mgibbs

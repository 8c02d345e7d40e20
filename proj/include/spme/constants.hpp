#pragma once

#include "spme/errors.hpp"

namespace spme {

/// Faraday constant [C/mol], CODATA 2018.
inline constexpr double faraday_constant = 96485.33212;
/// Ideal gas constant [J/(mol K)], CODATA 2018 (exact).
inline constexpr double gas_constant = 8.31446261815324;

/// Physical constants plus the one configurable quantity, the ambient
/// temperature. F and R are fixed; only T varies between cells/experiments.
struct PhysicalConstants {
  double faraday = faraday_constant;     // [C/mol]
  double gas = gas_constant;             // [J/(mol K)]
  double temperature = 298.15;           // [K]

  /// Thermal voltage scale 2RT/F [V].
  double thermal_voltage() const { return 2.0 * gas * temperature / faraday; }

  void validate() const {
    if (!(faraday > 0.0)) throw DomainError("PhysicalConstants: faraday must be > 0");
    if (!(gas > 0.0)) throw DomainError("PhysicalConstants: gas must be > 0");
    if (!(temperature > 0.0)) throw DomainError("PhysicalConstants: temperature must be > 0");
  }
};

} // namespace spme

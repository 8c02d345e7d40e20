#pragma once

// Tabulated open-circuit potential of one electrode. Monotone piecewise
// cubic (Fritsch-Carlson) interpolation: reproduces the samples exactly,
// never overshoots monotone data, and has a continuous first derivative --
// the derivative is what sets the low-frequency diffusion tail, so kinks
// or overshoot in U(c) would show up directly in the impedance.

#include <cstddef>
#include <utility>
#include <vector>

#include "spme/errors.hpp"

namespace spme {

class OcpCurve {
public:
  /// Build from (stoichiometry, potential) samples. Stoichiometries must be
  /// strictly increasing and lie inside (0,1).
  OcpCurve(std::vector<double> stoichiometry, std::vector<double> potential);

  /// Potential [V] at stoichiometry c. Throws DomainError outside the table.
  double eval(double c) const;

  /// Potential and its derivative (U, dU/dc) at c.
  std::pair<double, double> eval_with_slope(double c) const;

  double domain_min() const { return s_.front(); }
  double domain_max() const { return s_.back(); }
  std::size_t size() const { return s_.size(); }
  const std::vector<double>& stoichiometries() const { return s_; }
  const std::vector<double>& potentials() const { return u_; }

private:
  std::size_t interval(double c) const;

  std::vector<double> s_;
  std::vector<double> u_;
  std::vector<double> d_; // knot derivatives
};

/// Smooth synthetic positive-electrode curve (layered-oxide-like, gently
/// sloped over the whole window). Tabulated on [0.002, 0.998].
OcpCurve synthetic_ocp_pos();

/// Smooth synthetic negative-electrode curve (graphite-like: steep rise at
/// low stoichiometry, a wide plateau through the middle, and a step near
/// c = 0.72). Tabulated on [0.002, 0.998].
OcpCurve synthetic_ocp_neg();

} // namespace spme

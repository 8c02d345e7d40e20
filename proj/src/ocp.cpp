#include "spme/ocp.hpp"

#include <algorithm>
#include <cmath>

namespace spme {

namespace {

// Fritsch-Carlson knot derivatives: shape-preserving for monotone data.
std::vector<double> pchip_derivatives(const std::vector<double>& x,
                                      const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), d(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0)
      s = 0.0;
    else if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0))
      s = 3.0 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

} // namespace

OcpCurve::OcpCurve(std::vector<double> stoichiometry, std::vector<double> potential)
    : s_(std::move(stoichiometry)), u_(std::move(potential)) {
  if (s_.size() != u_.size()) throw DomainError("OcpCurve: column length mismatch");
  if (s_.size() < 2) throw DomainError("OcpCurve: need at least two samples");
  if (!(s_.front() > 0.0 && s_.back() < 1.0))
    throw DomainError("OcpCurve: stoichiometries must lie inside (0,1)");
  for (std::size_t i = 0; i + 1 < s_.size(); ++i)
    if (!(s_[i] < s_[i + 1]))
      throw DomainError("OcpCurve: stoichiometries must be strictly increasing");
  d_ = pchip_derivatives(s_, u_);
}

std::size_t OcpCurve::interval(double c) const {
  if (!(c >= s_.front() && c <= s_.back()))
    throw DomainError("OcpCurve: stoichiometry outside table domain");
  const auto it = std::upper_bound(s_.begin(), s_.end(), c);
  std::size_t i = static_cast<std::size_t>(it - s_.begin());
  if (i > 0) --i;
  if (i + 1 >= s_.size()) i = s_.size() - 2;
  return i;
}

double OcpCurve::eval(double c) const { return eval_with_slope(c).first; }

std::pair<double, double> OcpCurve::eval_with_slope(double c) const {
  const std::size_t i = interval(c);
  const double h = s_[i + 1] - s_[i];
  const double t = (c - s_[i]) / h;
  const double y0 = u_[i], y1 = u_[i + 1], d0 = d_[i], d1 = d_[i + 1];

  const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
  const double h10 = t * (1.0 - t) * (1.0 - t);
  const double h01 = t * t * (3.0 - 2.0 * t);
  const double h11 = t * t * (t - 1.0);
  const double value = h00 * y0 + h * (h10 * d0 + h11 * d1) + h01 * y1;

  const double g00 = 6.0 * t * (t - 1.0) / h;
  const double g10 = (1.0 - t) * (1.0 - 3.0 * t);
  const double g01 = -g00;
  const double g11 = t * (3.0 * t - 2.0);
  const double slope = g00 * y0 + g10 * d0 + g01 * y1 + g11 * d1;

  return {value, slope};
}

namespace {

OcpCurve tabulate(double (*f)(double), int n = 241) {
  std::vector<double> s(n), u(n);
  const double lo = 0.002, hi = 0.998;
  for (int i = 0; i < n; ++i) {
    s[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    u[i] = f(s[i]);
  }
  return OcpCurve(std::move(s), std::move(u));
}

double pos_form(double c) { return 4.6 - 1.1 * c - 0.2 * c * c; }

double neg_form(double c) {
  return 0.10 + 0.50 * std::exp(-25.0 * c) +
         0.035 * (1.0 - std::tanh(30.0 * (c - 0.72)));
}

} // namespace

OcpCurve synthetic_ocp_pos() { return tabulate(&pos_form); }

OcpCurve synthetic_ocp_neg() { return tabulate(&neg_form); }

} // namespace spme

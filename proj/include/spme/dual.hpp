#pragma once

// First-order dual number for forward-mode differentiation. One derivative
// channel: seed der = 1 on the input of interest, propagate through the
// residual, read the derivative off the output. Only the operations the
// model residual actually uses are provided.

#include <cmath>

namespace spme {

struct Dual {
  double val = 0.0;
  double der = 0.0;

  Dual() = default;
  Dual(double v) : val(v) {}
  Dual(double v, double d) : val(v), der(d) {}

  Dual operator-() const { return {-val, -der}; }

  Dual& operator+=(const Dual& o) { val += o.val; der += o.der; return *this; }
  Dual& operator-=(const Dual& o) { val -= o.val; der -= o.der; return *this; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.val + b.val, a.der + b.der}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.val - b.val, a.der - b.der}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.val * b.val, a.der * b.val + a.val * b.der};
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const double inv = 1.0 / b.val;
    return {a.val * inv, (a.der - a.val * inv * b.der) * inv};
  }

  friend Dual operator+(const Dual& a, double b) { return {a.val + b, a.der}; }
  friend Dual operator+(double a, const Dual& b) { return {a + b.val, b.der}; }
  friend Dual operator-(const Dual& a, double b) { return {a.val - b, a.der}; }
  friend Dual operator-(double a, const Dual& b) { return {a - b.val, -b.der}; }
  friend Dual operator*(const Dual& a, double b) { return {a.val * b, a.der * b}; }
  friend Dual operator*(double a, const Dual& b) { return {a * b.val, a * b.der}; }
  friend Dual operator/(const Dual& a, double b) { return {a.val / b, a.der / b}; }
  friend Dual operator/(double a, const Dual& b) {
    const double inv = 1.0 / b.val;
    return {a * inv, -a * inv * inv * b.der};
  }

  friend bool operator<(const Dual& a, const Dual& b) { return a.val < b.val; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.val > b.val; }

  friend Dual sqrt(const Dual& a) {
    const double s = std::sqrt(a.val);
    return {s, 0.5 * a.der / s};
  }
  friend Dual log(const Dual& a) { return {std::log(a.val), a.der / a.val}; }
  friend Dual exp(const Dual& a) {
    const double e = std::exp(a.val);
    return {e, a.der * e};
  }
  friend Dual sinh(const Dual& a) { return {std::sinh(a.val), a.der * std::cosh(a.val)}; }
  friend Dual cosh(const Dual& a) { return {std::cosh(a.val), a.der * std::sinh(a.val)}; }
};

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.val; }

/// Compose an externally differentiated primitive u(c) with derivative du
/// into the dual chain (used for tabulated curves inside the residual).
inline double chain(double u, double /*du*/, double /*c*/) { return u; }
inline Dual chain(double u, double du, const Dual& c) { return {u, du * c.der}; }

} // namespace spme

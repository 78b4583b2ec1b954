#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace biscat {

/// Truncated Taylor series of a univariate function, used to propagate exact
/// derivatives through radial profile evaluations. Coefficients are Taylor
/// coefficients c[k] = f^(k)/k! about the expansion point.
struct Jet {
  static constexpr int kOrder = 8;  // highest derivative carried
  std::array<double, kOrder + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  /// Seed jet for the independent variable itself.
  static Jet variable(double v) {
    Jet j;
    j.c[0] = v;
    j.c[1] = 1.0;
    return j;
  }

  double value() const { return c[0]; }
  /// k-th derivative (not Taylor coefficient).
  double deriv(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Jet operator-() const {
    Jet r;
    for (int k = 0; k <= kOrder; ++k) r.c[k] = -c[k];
    return r;
  }
  Jet operator+(const Jet& o) const {
    Jet r;
    for (int k = 0; k <= kOrder; ++k) r.c[k] = c[k] + o.c[k];
    return r;
  }
  Jet operator-(const Jet& o) const {
    Jet r;
    for (int k = 0; k <= kOrder; ++k) r.c[k] = c[k] - o.c[k];
    return r;
  }
  Jet operator*(const Jet& o) const {
    Jet r;
    for (int k = 0; k <= kOrder; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += c[j] * o.c[k - j];
      r.c[k] = s;
    }
    return r;
  }
  Jet operator*(double a) const {
    Jet r;
    for (int k = 0; k <= kOrder; ++k) r.c[k] = c[k] * a;
    return r;
  }
  Jet operator+(double a) const {
    Jet r = *this;
    r.c[0] += a;
    return r;
  }
  Jet operator-(double a) const {
    Jet r = *this;
    r.c[0] -= a;
    return r;
  }
};

inline Jet operator*(double a, const Jet& j) { return j * a; }
inline Jet operator+(double a, const Jet& j) { return j + a; }
inline Jet operator-(double a, const Jet& j) { return (-j) + a; }

/// b = x / y via the standard Taylor division recurrence.
inline Jet div(const Jet& x, const Jet& y) {
  if (y.c[0] == 0.0) throw std::domain_error("jet division by zero value");
  Jet b;
  for (int k = 0; k <= Jet::kOrder; ++k) {
    double s = x.c[k];
    for (int j = 1; j <= k; ++j) s -= y.c[j] * b.c[k - j];
    b.c[k] = s / y.c[0];
  }
  return b;
}

inline Jet recip(const Jet& y) { return div(Jet::constant(1.0), y); }

inline Jet exp(const Jet& x) {
  Jet b;
  b.c[0] = std::exp(x.c[0]);
  for (int k = 1; k <= Jet::kOrder; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * x.c[j] * b.c[k - j];
    b.c[k] = s / k;
  }
  return b;
}

inline Jet sqrt(const Jet& x) {
  if (x.c[0] <= 0.0) throw std::domain_error("jet sqrt needs positive value");
  Jet b;
  b.c[0] = std::sqrt(x.c[0]);
  for (int k = 1; k <= Jet::kOrder; ++k) {
    double s = x.c[k];
    for (int j = 1; j < k; ++j) s -= b.c[j] * b.c[k - j];
    b.c[k] = s / (2.0 * b.c[0]);
  }
  return b;
}

}  // namespace biscat

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace biscat {

/// Raised when a quadrature cannot reach its tolerance within budget. Carries
/// the error estimate actually achieved.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved error estimate " +
                           std::to_string(achieved) + ")"),
        achieved_error(achieved) {}
  double achieved_error;
};

namespace detail {
inline double abs_of(double x) { return std::abs(x); }
inline double abs_of(const std::complex<double>& x) { return std::abs(x); }
}  // namespace detail

/// 15-point Gauss-Kronrod rule with embedded 7-point Gauss error estimate.
/// Returns the Kronrod value; err gets |K15 - G7|.
template <typename T, typename F>
T gauss_kronrod_15(F&& f, double a, double b, double& err) {
  static const double xgk[8] = {
      0.991455371120813, 0.949107912342759, 0.864864423359769,
      0.741531185599394, 0.586087235467691, 0.405845151377397,
      0.207784955007898, 0.0};
  static const double wgk[8] = {
      0.022935322010529, 0.063092092629979, 0.104790010322250,
      0.140653259715525, 0.169004726639267, 0.190350578064785,
      0.204432940075298, 0.209482141084728};
  static const double wg[4] = {0.129484966168870, 0.279705391489277,
                               0.381830050505119, 0.417959183673469};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T fc = f(c);
  T kron = fc * wgk[7];
  T gauss = fc * wg[3];
  for (int i = 0; i < 7; ++i) {
    T f1 = f(c - h * xgk[i]);
    T f2 = f(c + h * xgk[i]);
    kron = kron + (f1 + f2) * wgk[i];
    if (i % 2 == 1) gauss = gauss + (f1 + f2) * wg[i / 2];
  }
  kron = kron * h;
  gauss = gauss * h;
  err = detail::abs_of(kron - gauss);
  return kron;
}

struct QuadratureCounter {
  std::int64_t evals = 0;
  std::int64_t budget = 20'000'000;
};

/// Globally adaptive bisection built on GK15. Tolerance is absolute.
template <typename T, typename F>
T integrate_adaptive(F&& f, double a, double b, double abs_tol,
                     QuadratureCounter* counter = nullptr) {
  struct Seg {
    double a, b, err;
    T val;
  };
  double err0;
  T v0 = gauss_kronrod_15<T>(f, a, b, err0);
  std::vector<Seg> segs{{a, b, err0, v0}};
  std::int64_t local_evals = 15;
  double total_err = err0;
  for (;;) {
    if (total_err <= abs_tol) break;
    // split the worst segment
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].err > segs[worst].err) worst = i;
    if (segs[worst].err <= abs_tol / std::max<std::size_t>(segs.size(), 1))
      break;
    Seg s = segs[worst];
    double m = 0.5 * (s.a + s.b);
    if (m == s.a || m == s.b)
      throw AccuracyError("adaptive quadrature interval collapsed", total_err);
    double e1, e2;
    T v1 = gauss_kronrod_15<T>(f, s.a, m, e1);
    T v2 = gauss_kronrod_15<T>(f, m, s.b, e2);
    local_evals += 30;
    if (counter) {
      counter->evals += 30;
      if (counter->evals > counter->budget)
        throw AccuracyError("quadrature evaluation budget exhausted",
                            total_err);
    }
    if (local_evals > 4'000'000)
      throw AccuracyError("1-d quadrature did not converge", total_err);
    segs[worst] = {s.a, m, e1, v1};
    segs.push_back({m, s.b, e2, v2});
    total_err = 0.0;
    for (const auto& sg : segs) total_err += sg.err;
  }
  T sum{};
  for (const auto& sg : segs) sum = sum + sg.val;
  return sum;
}

/// Chebyshev interpolant/antiderivative machinery on an interval [a,b], used
/// for cumulative line integrals. Coefficients are for T_n(t), t in [-1,1].
struct ChebSeries {
  double a = -1.0, b = 1.0;
  std::vector<double> coef;

  double to_t(double x) const { return (2.0 * x - (a + b)) / (b - a); }

  double eval(double x) const {
    const double t = to_t(x);
    // Clenshaw
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t i = coef.size(); i-- > 1;) {
      double bn = 2.0 * t * b1 - b2 + coef[i];
      b2 = b1;
      b1 = bn;
    }
    return t * b1 - b2 + (coef.empty() ? 0.0 : coef[0]);
  }
};

/// Chebyshev-Lobatto nodes (m+1 of them) on [a,b], endpoint-first ordering
/// x_j = midpoint + half*cos(pi j / m).
inline std::vector<double> chebyshev_nodes(double a, double b, int m) {
  std::vector<double> x(m + 1);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int j = 0; j <= m; ++j) x[j] = mid + half * std::cos(M_PI * j / m);
  return x;
}

/// Fit coefficients from samples at chebyshev_nodes (direct cosine transform).
inline ChebSeries chebyshev_fit(double a, double b,
                                const std::vector<double>& samples) {
  const int m = static_cast<int>(samples.size()) - 1;
  ChebSeries s;
  s.a = a;
  s.b = b;
  s.coef.assign(m + 1, 0.0);
  for (int n = 0; n <= m; ++n) {
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
      double w = (j == 0 || j == m) ? 0.5 : 1.0;
      acc += w * samples[j] * std::cos(M_PI * n * j / m);
    }
    s.coef[n] = 2.0 * acc / m;
  }
  s.coef[0] *= 0.5;
  if (!s.coef.empty()) s.coef[m] *= 0.5;
  return s;
}

/// Antiderivative series F with F(a) = 0.
inline ChebSeries chebyshev_antiderivative(const ChebSeries& s) {
  const int m = static_cast<int>(s.coef.size()) - 1;
  ChebSeries r;
  r.a = s.a;
  r.b = s.b;
  r.coef.assign(m + 2, 0.0);
  const double half = 0.5 * (s.b - s.a);
  auto c = [&](int n) { return (n >= 0 && n <= m) ? s.coef[n] : 0.0; };
  for (int n = 1; n <= m + 1; ++n)
    r.coef[n] = half * (c(n - 1) - c(n + 1)) / (2.0 * n);
  r.coef[1] += half * c(0);  // integral of T_0 is T_1
  // fix constant so F(a)=0; T_n(-1) = (-1)^n
  double at_a = 0.0;
  for (int n = 0; n <= m + 1; ++n)
    at_a += r.coef[n] * ((n % 2 == 0) ? 1.0 : -1.0);
  r.coef[0] -= at_a;
  return r;
}

/// Least-squares slope of log|y| versus log x. Used for decay-exponent fits.
inline double log_log_slope(const std::vector<double>& x,
                            const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("log_log_slope needs >= 2 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw std::invalid_argument("log_log_slope needs positive samples");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace biscat

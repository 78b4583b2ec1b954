#include "biscat/transport.hpp"

#include <cmath>
#include <stdexcept>

#include "biscat/quadrature.hpp"

namespace biscat {

namespace {

constexpr double kInnerTol = 1e-10;   // field-level ray integrals
constexpr double kMiddleTol = 1e-9;   // first nesting level
constexpr double kOuterTol = 1e-8;    // outermost recursion integrals
constexpr double kFdStep = 1e-4;

/// Clip the backward ray {x + s theta, s <= 0} to the support ball |y| <= R.
/// Returns false if the ray never meets the ball at s <= 0.
bool backward_chord(const Vec3& x, const Vec3& theta, double R, double& s0,
                    double& s1) {
  const double b = x.dot(theta);
  const double c = x.squaredNorm() - R * R;
  const double disc = b * b - c;
  if (disc <= 0.0) return false;
  const double rt = std::sqrt(disc);
  s0 = -b - rt;
  s1 = std::min(-b + rt, 0.0);
  return s0 < s1;
}

template <typename F>
auto ray_integral(F&& f, const Vec3& x, const Vec3& theta, double R,
                  double abs_tol) -> decltype(f(Vec3())) {
  using T = decltype(f(Vec3()));
  double s0, s1;
  if (!backward_chord(x, theta, R, s0, s1)) return T{};
  return integrate_adaptive<T>(
      [&](double s) { return f(Vec3(x + s * theta)); }, s0, s1, abs_tol);
}

double theta_dot_a(const FieldPair& pair, const Vec3& y, const Vec3& theta) {
  return theta.dot(pair.A.eval(y));
}

double lap_theta_a(const FieldPair& pair, const Vec3& y, const Vec3& theta) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    if (theta[i] != 0.0) acc += theta[i] * pair.A.component(i).laplacian(y);
  return acc;
}

double bilap_theta_a(const FieldPair& pair, const Vec3& y, const Vec3& theta) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    if (theta[i] != 0.0) acc += theta[i] * pair.A.component(i).bilaplacian(y);
  return acc;
}

/// (theta.grad)(theta.A) at y.
double dir1_theta_a(const FieldPair& pair, const Vec3& y, const Vec3& theta) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    if (theta[i] != 0.0) acc += theta[i] * theta.dot(pair.A.component(i).grad(y));
  return acc;
}

/// (theta.grad)^2 (theta.A) at y.
double dir2_theta_a(const FieldPair& pair, const Vec3& y, const Vec3& theta) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    if (theta[i] != 0.0)
      acc += theta[i] * theta.dot(pair.A.component(i).hessian(y) * theta);
  return acc;
}

/// Delta^2 a2 as a function of y: 1/4 * int Delta^2(theta.A) ds.
double bilaplacian_a2(const FieldPair& pair, const Vec3& y,
                      const Vec3& theta) {
  const double R = pair.support_radius();
  return 0.25 * ray_integral(
                    [&](const Vec3& p) { return bilap_theta_a(pair, p, theta); },
                    y, theta, R, kInnerTol);
}

}  // namespace

void check_unit(const Vec3& theta) {
  if (std::abs(theta.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("direction must be a unit vector");
}

double xray_a2(const FieldPair& pair, const Ray& ray) {
  check_unit(ray.theta);
  const double R = pair.support_radius();
  return 0.25 *
         ray_integral([&](const Vec3& p) { return theta_dot_a(pair, p, ray.theta); },
                      ray.x, ray.theta, R, kInnerTol);
}

double laplacian_a2(const FieldPair& pair, const Vec3& x, const Vec3& theta) {
  const double R = pair.support_radius();
  return 0.25 *
         ray_integral([&](const Vec3& p) { return lap_theta_a(pair, p, theta); },
                      x, theta, R, kInnerTol);
}

Vec3 grad_a2(const FieldPair& pair, const Vec3& x, const Vec3& theta) {
  const double R = pair.support_radius();
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    out[i] = 0.25 * ray_integral(
                        [&](const Vec3& p) {
                          double acc = 0.0;
                          for (int j = 0; j < 3; ++j)
                            if (theta[j] != 0.0)
                              acc += theta[j] * pair.A.component(j).grad(p)[i];
                          return acc;
                        },
                        x, theta, R, kInnerTol);
  }
  return out;
}

Complex a3_closed_form(const FieldPair& pair, const Ray& ray) {
  check_unit(ray.theta);
  const double R = pair.support_radius();
  const double line = ray_integral(
      [&](const Vec3& p) {
        return pair.V.eval(p) - 2.0 * laplacian_a2(pair, p, ray.theta);
      },
      ray.x, ray.theta, R, kMiddleTol);
  const double ta = theta_dot_a(pair, ray.x, ray.theta);
  // 1/(4i) = -i/4
  return Complex(0.0, -0.25) * line + Complex(0.0, 0.25) * ta;
}

Complex laplacian_a3(const FieldPair& pair, const Vec3& x, const Vec3& theta) {
  const double R = pair.support_radius();
  const double line = ray_integral(
      [&](const Vec3& p) {
        return pair.V.laplacian(p) - 2.0 * bilaplacian_a2(pair, p, theta);
      },
      x, theta, R, kMiddleTol);
  return Complex(0.0, -0.25) * line +
         Complex(0.0, 0.25) * lap_theta_a(pair, x, theta);
}

namespace {

/// (theta.grad)^2 a3 at y, fully pointwise via the transport recursion.
Complex dir2_a3(const FieldPair& pair, const Vec3& y, const Vec3& theta) {
  const double val = -0.5 * lap_theta_a(pair, y, theta) -
                     dir2_theta_a(pair, y, theta) +
                     theta.dot(pair.V.grad(y));
  return Complex(0.0, -0.25) * val;
}

/// Right-hand side of the order-th transport equation divided by 4i, i.e. the
/// directional derivative (theta.grad) a_order at y.
Complex transport_rhs_over_4i(const FieldPair& pair, const Vec3& y,
                              const Vec3& theta, int order) {
  switch (order) {
    case 2:
      // 4 (theta.grad) a2 = theta.A  (real equation, no 1/i)
      return Complex(0.25 * theta_dot_a(pair, y, theta), 0.0);
    case 3: {
      // -2(Delta + 2(theta.grad)^2) a2 + V with (theta.grad)^2 a2 = dir1/4
      const double rhs = -2.0 * laplacian_a2(pair, y, theta) -
                         dir1_theta_a(pair, y, theta) + pair.V.eval(y);
      return Complex(0.0, -0.25) * rhs;
    }
    case 4: {
      const Complex lap3 = laplacian_a3(pair, y, theta);
      const Complex dir3 = dir2_a3(pair, y, theta);
      const double a2v = xray_a2(pair, Ray{y, theta});
      const Complex rhs =
          -2.0 * (lap3 + 2.0 * dir3) +
          Complex(0.0, 1.0) *
              (lap_theta_a(pair, y, theta) + theta_dot_a(pair, y, theta) * a2v);
      return rhs * Complex(0.0, -0.25);
    }
    default:
      throw std::invalid_argument("transport order must be 2, 3 or 4");
  }
}

// 8-point Gauss-Legendre panel rule; doubling the panel count until two
// successive refinements agree gives a quadrature path independent of the
// adaptive Gauss-Kronrod used by the closed forms.
const double kGl8X[4] = {0.1834346424956498, 0.5255324099163290,
                         0.7966664774136267, 0.9602898564975363};
const double kGl8W[4] = {0.3626837833783620, 0.3137066458778873,
                         0.2223810344533745, 0.1012285362903763};

template <typename F>
Complex composite_gl(F&& f, double a, double b, int panels) {
  Complex acc(0.0, 0.0);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (int i = 0; i < 4; ++i) {
      acc += kGl8W[i] * (f(c - 0.5 * h * kGl8X[i]) + f(c + 0.5 * h * kGl8X[i]));
    }
  }
  return acc * (0.5 * h);
}

}  // namespace

Complex transport_integrate(const FieldPair& pair, const Ray& ray, int order) {
  check_unit(ray.theta);
  const double R = pair.support_radius();
  double s0, s1;
  if (!backward_chord(ray.x, ray.theta, R, s0, s1)) return Complex(0.0, 0.0);
  auto f = [&](double s) {
    return transport_rhs_over_4i(pair, Vec3(ray.x + s * ray.theta), ray.theta,
                                 order);
  };
  const double tol = (order == 4) ? kOuterTol : 1e-9;
  Complex prev = composite_gl(f, s0, s1, 4);
  for (int panels = 8; panels <= 512; panels *= 2) {
    const Complex cur = composite_gl(f, s0, s1, panels);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  throw AccuracyError("transport panel refinement did not converge",
                      std::abs(prev));
}

double transport_residual(const FieldPair& pair, const Vec3& x,
                          const Vec3& theta, int order) {
  check_unit(theta);
  const double h = kFdStep;
  if (order == 2) {
    const double ap = xray_a2(pair, Ray{Vec3(x + h * theta), theta});
    const double am = xray_a2(pair, Ray{Vec3(x - h * theta), theta});
    const double lhs = 4.0 * (ap - am) / (2.0 * h);
    return std::abs(lhs - theta_dot_a(pair, x, theta));
  }
  if (order == 3) {
    const Complex ap = a3_closed_form(pair, Ray{Vec3(x + h * theta), theta});
    const Complex am = a3_closed_form(pair, Ray{Vec3(x - h * theta), theta});
    const Complex lhs = Complex(0.0, 4.0) * (ap - am) / (2.0 * h);
    const double rhs = -2.0 * laplacian_a2(pair, x, theta) -
                       dir1_theta_a(pair, x, theta) + pair.V.eval(x);
    return std::abs(lhs - rhs);
  }
  throw std::invalid_argument("residual order must be 2 or 3");
}

}  // namespace biscat

#pragma once

#include "biscat/fields.hpp"

namespace biscat {

/// A point and a unit direction; coefficients are integrals along x + s*theta.
struct Ray {
  Vec3 x;
  Vec3 theta;
};

/// Throws std::invalid_argument unless |theta| = 1 within 1e-12.
void check_unit(const Vec3& theta);

/// a2(x) = 1/4 * int_{-inf}^0 theta.A(x + s theta) ds  (X-ray transform of the
/// tangential component; real-valued). Adaptive quadrature, truncation exact
/// because the integrand vanishes outside the support ball.
double xray_a2(const FieldPair& pair, const Ray& ray);

/// Laplacian of a2 as a function of x, by differentiation under the ray
/// integral: 1/4 * int Delta(theta.A) ds.
double laplacian_a2(const FieldPair& pair, const Vec3& x, const Vec3& theta);

/// Gradient of a2: 1/4 * int grad(theta.A) ds.
Vec3 grad_a2(const FieldPair& pair, const Vec3& x, const Vec3& theta);

/// a3(x) = (1/4i) int [V - 2 Delta a2] ds + (i/4) theta.A(x).
Complex a3_closed_form(const FieldPair& pair, const Ray& ray);

/// Laplacian of a3 (needs up to 4th derivatives of A through Delta^2 a2).
Complex laplacian_a3(const FieldPair& pair, const Vec3& x, const Vec3& theta);

/// Integrates the order-th transport equation along the ray with zero data at
/// s = -inf, re-deriving a_order from the recursion instead of the closed
/// forms. order in {2, 3, 4}. Panel-doubling composite Gauss rule, so the
/// order-2 result is an independent quadrature path against xray_a2.
Complex transport_integrate(const FieldPair& pair, const Ray& ray, int order);

/// |LHS - RHS| of the order-th transport equation at x, with the directional
/// derivative of the computed coefficient taken by central differences
/// (step 1e-4) and lower-order data evaluated analytically. order in {2, 3}.
double transport_residual(const FieldPair& pair, const Vec3& x,
                          const Vec3& theta, int order);

}  // namespace biscat

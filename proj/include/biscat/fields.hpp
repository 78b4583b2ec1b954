#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace biscat {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Complex = std::complex<double>;

/// Smooth compactly supported radial profile H(s), s = |y|^2:
/// amplitude * exp(-s/width^2) inside the plateau, multiplied by a C-infinity
/// mollifier ramp between plateau_radius and cutoff_radius, identically zero
/// beyond. Exposes s-derivatives to order Jet::kOrder.
struct RadialProfile {
  double amplitude = 1.0;
  double width = 1.0;
  double plateau_radius = 5.0;
  double cutoff_radius = 6.0;

  /// out[k] = d^k H / ds^k for k = 0..upto (upto <= Jet::kOrder).
  void derivs(double s, int upto, double* out) const;
  double value(double s) const;
};

/// One monomial-times-profile-derivative term: coef * x^ex y^ey z^ez * H^(k)(s).
struct Term {
  std::int8_t ex, ey, ez, k;
  double coef;
};

struct TermList {
  std::vector<Term> terms;
  int max_k = 0;
  int max_deg = 0;
};

TermList differentiate(const TermList& list, int axis);

enum EvalFlags : unsigned {
  kValue = 1u,
  kGrad = 2u,
  kHess = 4u,
  kLap = 8u,
  kGradLap = 16u,
  kBilap = 32u,
};

struct FieldEval {
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
  Mat3 hess = Mat3::Zero();
  double lap = 0.0;
  Vec3 grad_lap = Vec3::Zero();
  double bilap = 0.0;
};

/// Compactly supported scalar field with exact analytic derivatives.
/// Value semantics; cheap to copy (shared immutable state); all evaluation
/// paths are pure and safe to call concurrently.
class ScalarField {
 public:
  ScalarField();  // identically zero

  double eval(const Vec3& x) const;
  Vec3 grad(const Vec3& x) const;
  Mat3 hessian(const Vec3& x) const;
  double laplacian(const Vec3& x) const;
  Vec3 grad_laplacian(const Vec3& x) const;
  double bilaplacian(const Vec3& x) const;
  void eval_into(const Vec3& x, unsigned flags, FieldEval& out) const;

  double support_radius() const;
  /// Frequency above which the field's Fourier transform is below
  /// tol * (L1 mass); used to choose oscillatory grid resolutions.
  double bandwidth_hint(double tol = 1e-9) const;
  /// Rough integral of |f|, used to anchor absolute quadrature tolerances.
  double l1_hint() const;

  bool is_zero() const;

  ScalarField operator+(const ScalarField& other) const;
  ScalarField operator*(double a) const;

  struct Impl;
  explicit ScalarField(std::shared_ptr<const Impl> impl);
  const Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

inline ScalarField operator*(double a, const ScalarField& f) { return f * a; }

class VectorField {
 public:
  VectorField();
  VectorField(ScalarField a1, ScalarField a2, ScalarField a3);

  const ScalarField& component(int i) const { return comp_[i]; }
  Vec3 eval(const Vec3& x) const;
  /// jac(i,j) = d A_i / d x_j
  Mat3 jacobian(const Vec3& x) const;
  double support_radius() const;
  double bandwidth_hint(double tol = 1e-9) const;

  VectorField operator+(const VectorField& other) const;
  VectorField operator*(double a) const;

 private:
  ScalarField comp_[3];
};

inline VectorField operator*(double a, const VectorField& f) { return f * a; }

struct FieldPair {
  VectorField A;
  ScalarField V;
  double support_radius() const;
  double bandwidth_hint(double tol = 1e-9) const;
};

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

/// Gaussian bump with explicit plateau/cutoff radii (measured from center).
ScalarField make_gaussian_bump(const Vec3& center, double width,
                               double amplitude, double plateau_radius,
                               double cutoff_radius);

/// Standard bump: plateau at 5*width, support cut at 6*width from the center,
/// so support_radius = |center| + 6*width.
ScalarField make_bump_scalar(const Vec3& center, double width,
                             double amplitude);

/// Vector bump: one shared Gaussian envelope, per-component amplitudes.
VectorField make_vector_bump(const Vec3& center, double width,
                             const Vec3& amplitudes);

/// amplitude * (-(y-c)_2, (y-c)_1, 0) * envelope: a smooth rotation about the
/// axis (0,0,1) through the center; curl at the center is (0,0,2*amplitude).
VectorField make_rotation_field(const Vec3& center, double width,
                                double amplitude);

/// d/dx_axis of a scalar field, itself an exact analytic field.
ScalarField derivative_field(const ScalarField& f, int axis);
ScalarField laplacian_field(const ScalarField& f);
VectorField gradient_field(const ScalarField& f);

// ---------------------------------------------------------------------------
// Differential / gauge operations
// ---------------------------------------------------------------------------

Vec3 curl(const VectorField& a, const Vec3& x);
double divergence(const VectorField& a, const Vec3& x);
double laplacian(const ScalarField& f, const Vec3& x);

/// (A, V) -> (A + grad phi, V + laplacian(phi)/2).
FieldPair gauge_transform(const FieldPair& pair, const ScalarField& phi);

// ---------------------------------------------------------------------------
// Integral operations
// ---------------------------------------------------------------------------

/// Fourier transform  f_hat(xi) = int exp(-i xi.y) f(y) dy  by adaptive
/// quadrature over the support cube, relative tolerance tol.
/// Throws AccuracyError if the evaluation budget (2e7) is exhausted.
Complex fourier_transform(const ScalarField& f, const Vec3& xi,
                          double tol = 1e-8);

/// Same transform through the radial reduction (1-d integrals); fast path for
/// oracles. Falls back to the cube quadrature for monomial degree > 2.
Complex fourier_transform_radial(const ScalarField& f, const Vec3& xi,
                                 double abs_tol = 1e-10);

/// Weighted Sobolev norm: ( int (1+|x|)^(delta p) (|f|^p + [s=1]|grad f|^p) )^(1/p)
/// with p = 2 and s in {0, 1}.
double weighted_norm(const ScalarField& f, double delta, int p = 2, int s = 0);

}  // namespace biscat

#include <doctest.h>

#include <cmath>
#include <random>

#include "biscat/fields.hpp"
#include "biscat/quadrature.hpp"

using namespace biscat;

namespace {

std::mt19937& rng() {
  static std::mt19937 gen(20250811);
  return gen;
}

Vec3 random_unit() {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v(n(rng()), n(rng()), n(rng()));
  return v.normalized();
}

Vec3 random_in_ball(double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::cbrt(u(rng())) * radius * random_unit();
}

FieldPair sample_pair() {
  VectorField a = make_rotation_field(Vec3(0.1, -0.2, 0.05), 0.8, 1.3) +
                  make_vector_bump(Vec3(-0.3, 0.2, 0.1), 0.7, Vec3(0.9, -0.4, 0.6));
  ScalarField v = make_bump_scalar(Vec3(0.2, 0.1, -0.1), 0.75, 1.1);
  return FieldPair{a, v};
}

}  // namespace

TEST_SUITE("fields") {
  TEST_CASE("bump basics") {
    CHECK_THROWS_AS(make_bump_scalar(Vec3::Zero(), -1.0, 1.0),
                    std::invalid_argument);

    auto zero_amp = make_bump_scalar(Vec3(0.5, 0, 0), 1.0, 0.0);
    for (int i = 0; i < 20; ++i) {
      const Vec3 x = random_in_ball(5.0);
      CHECK(zero_amp.eval(x) == 0.0);
      CHECK(zero_amp.grad(x).norm() == 0.0);
    }

    auto f = make_bump_scalar(Vec3::Zero(), 1.0, 1.0);
    CHECK(f.eval(Vec3::Zero()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.grad(Vec3::Zero()).norm() < 1e-14);
    CHECK(f.support_radius() == doctest::Approx(6.0));

    // exactly zero outside the support
    for (int i = 0; i < 20; ++i) {
      const Vec3 x = (f.support_radius() + 1.0 + i * 0.37) * random_unit();
      CHECK(f.eval(x) == 0.0);
    }

    auto shifted = make_bump_scalar(Vec3(1.0, 2.0, -2.0), 0.5, 2.0);
    CHECK(shifted.support_radius() == doctest::Approx(3.0 + 3.0));
  }

  TEST_CASE("laplacian of the unit gaussian at the center is -6") {
    auto f = make_bump_scalar(Vec3::Zero(), 1.0, 1.0);
    CHECK(f.laplacian(Vec3::Zero()) == doctest::Approx(-6.0).epsilon(1e-13));
    // scaled: width w, amplitude a -> -6 a / w^2
    auto g = make_bump_scalar(Vec3(0.2, 0, 0), 0.5, 1.7);
    CHECK(g.laplacian(Vec3(0.2, 0, 0)) ==
          doctest::Approx(-6.0 * 1.7 / 0.25).epsilon(1e-13));
  }

  TEST_CASE("gradient and hessian match finite differences") {
    auto f = make_bump_scalar(Vec3(0.3, -0.1, 0.2), 0.9, 1.4);
    const double h = 1e-4;
    // sample where the bump carries mass (plateau + half the ramp)
    const double rmax = 0.9 * (5.0 + 0.5);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
      const Vec3 x = Vec3(0.3, -0.1, 0.2) + random_in_ball(rmax);
      const Vec3 g = f.grad(x);
      for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = h;
        const double fd = (f.eval(x + e) - f.eval(x - e)) / (2.0 * h);
        CHECK(g[j] == doctest::Approx(fd).epsilon(1e-6).scale(1e-9));
        const Vec3 hd = (f.grad(x + e) - f.grad(x - e)) / (2.0 * h);
        const Vec3 hcol = f.hessian(x).col(j);
        for (int k = 0; k < 3; ++k)
          CHECK(hcol[k] == doctest::Approx(hd[k]).epsilon(1e-6).scale(1e-9));
      }
      const Mat3 hess = f.hessian(x);
      CHECK((hess - hess.transpose()).norm() == 0.0);
      ++checked;
    }
    CHECK(checked == 200);
  }

  TEST_CASE("derived fields agree with direct derivative evaluation") {
    auto phi = make_bump_scalar(Vec3(0.1, 0.4, -0.2), 0.8, 0.9);
    auto dphi0 = derivative_field(phi, 0);
    auto lap = laplacian_field(phi);
    for (int i = 0; i < 40; ++i) {
      const Vec3 x = random_in_ball(5.0);
      CHECK(dphi0.eval(x) == doctest::Approx(phi.grad(x)[0]).epsilon(1e-13));
      CHECK(lap.eval(x) == doctest::Approx(phi.laplacian(x)).epsilon(1e-13));
      // third/fourth derivative surfaces against finite differences of lap
      const double h = 1e-4;
      Vec3 gl = phi.grad_laplacian(x);
      for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = h;
        const double fd = (phi.laplacian(x + e) - phi.laplacian(x - e)) / (2 * h);
        CHECK(gl[j] == doctest::Approx(fd).epsilon(1e-5).scale(1e-7));
      }
      CHECK(phi.bilaplacian(x) ==
            doctest::Approx(lap.laplacian(x)).epsilon(1e-12).scale(1e-12));
    }
  }

  TEST_CASE("curl examples") {
    // curl of a gradient vanishes
    auto phi = make_bump_scalar(Vec3(0.2, -0.3, 0.1), 0.7, 1.2);
    auto grad_phi = gradient_field(phi);
    for (int i = 0; i < 30; ++i) {
      const Vec3 x = random_in_ball(4.0);
      CHECK(curl(grad_phi, x).norm() < 1e-12);
    }
    // rotation field: curl at center is (0, 0, 2 amplitude)
    auto rot = make_rotation_field(Vec3::Zero(), 1.0, 1.0);
    const Vec3 c = curl(rot, Vec3::Zero());
    CHECK(c[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(c[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(c[2] == doctest::Approx(2.0).epsilon(1e-13));
    // zero field
    VectorField z;
    CHECK(curl(z, random_in_ball(2.0)).norm() == 0.0);
    CHECK(divergence(z, random_in_ball(2.0)) == 0.0);
  }

  TEST_CASE("gauge transform identities") {
    auto pair = sample_pair();
    auto phi = make_bump_scalar(Vec3(-0.1, 0.25, 0.2), 0.85, 0.8);

    // phi == 0 leaves the pair unchanged
    auto same = gauge_transform(pair, ScalarField());
    for (int i = 0; i < 10; ++i) {
      const Vec3 x = random_in_ball(3.0);
      CHECK((same.A.eval(x) - pair.A.eval(x)).norm() == 0.0);
      CHECK(same.V.eval(x) == pair.V.eval(x));
    }

    auto primed = gauge_transform(pair, phi);
    CHECK(primed.support_radius() >=
          doctest::Approx(std::max(pair.support_radius(), phi.support_radius())));
    for (int i = 0; i < 100; ++i) {
      const Vec3 x = random_in_ball(0.95 * primed.support_radius());
      // curl A is invariant
      CHECK((curl(primed.A, x) - curl(pair.A, x)).norm() < 1e-10);
      // V - div A / 2 is invariant
      const double lhs = primed.V.eval(x) - 0.5 * divergence(primed.A, x);
      const double rhs = pair.V.eval(x) - 0.5 * divergence(pair.A, x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11).scale(1e-12));
    }
  }

  TEST_CASE("fourier transform of the zero field") {
    CHECK(fourier_transform(ScalarField(), Vec3(1, 2, 3)) == Complex(0, 0));
  }

  TEST_CASE("fourier transform of a wide-cutoff gaussian") {
    // cutoff wide enough that truncation is far below the quadrature tolerance
    auto g = make_gaussian_bump(Vec3::Zero(), 1.0, 1.0, 6.0, 8.0);
    const double pi32 = std::pow(M_PI, 1.5);
    const Complex at0 = fourier_transform(g, Vec3::Zero(), 1e-9);
    CHECK(at0.real() == doctest::Approx(pi32).epsilon(1e-8));
    CHECK(std::abs(at0.imag()) < 1e-9);

    const Complex at2 = fourier_transform(g, Vec3(2, 0, 0), 1e-9);
    CHECK(at2.real() == doctest::Approx(pi32 * std::exp(-1.0)).epsilon(1e-8));
    CHECK(std::abs(at2.imag()) < 1e-9);
  }

  TEST_CASE("fourier conjugate symmetry for real fields") {
    auto f = make_bump_scalar(Vec3(0.4, 0.2, -0.3), 0.8, 1.3);
    for (const Vec3& xi : {Vec3(1.2, -0.7, 0.4), Vec3(0.3, 2.0, -1.1)}) {
      const Complex plus = fourier_transform(f, xi, 1e-8);
      const Complex minus = fourier_transform(f, Vec3(-xi), 1e-8);
      CHECK(minus.real() == doctest::Approx(plus.real()).epsilon(1e-7));
      CHECK(minus.imag() == doctest::Approx(-plus.imag()).epsilon(1e-7).scale(1e-10));
    }
  }

  TEST_CASE("radial fourier path agrees with cube quadrature") {
    auto bump = make_bump_scalar(Vec3(0.4, -0.1, 0.3), 0.7, 1.2);
    auto rot = make_rotation_field(Vec3(0.1, 0.2, 0.0), 0.8, 1.1);
    auto dphi = derivative_field(make_bump_scalar(Vec3(0, 0.3, 0), 0.6, 0.9), 1);
    for (const Vec3& xi :
         {Vec3::Zero().eval(), Vec3(0.05, 0, 0).eval(), Vec3(1.5, -0.8, 0.6).eval(),
          Vec3(-3.0, 1.0, 2.2).eval()}) {
      for (const ScalarField* f : {&bump, &rot.component(0), &dphi}) {
        const Complex cube = fourier_transform(*f, xi, 1e-9);
        const Complex rad = fourier_transform_radial(*f, xi, 1e-11);
        CHECK(std::abs(cube - rad) < 2e-7 * (1.0 + std::abs(cube)));
      }
    }
  }

  TEST_CASE("weighted norms") {
    CHECK(weighted_norm(ScalarField(), 0.7) == 0.0);
    auto g = make_gaussian_bump(Vec3::Zero(), 1.0, 1.0, 6.0, 8.0);
    // || e^{-|x|^2} ||_L2 = (pi/2)^{3/4}
    CHECK(weighted_norm(g, 0.0, 2, 0) ==
          doctest::Approx(std::pow(M_PI / 2.0, 0.75)).epsilon(1e-7));
    // monotone in delta
    const double n0 = weighted_norm(g, 0.1, 2, 0);
    const double n1 = weighted_norm(g, 0.8, 2, 0);
    const double n2 = weighted_norm(g, 1.5, 2, 0);
    CHECK(n0 <= n1);
    CHECK(n1 <= n2);
    // s = 1 adds the gradient term, so it dominates the s = 0 norm
    CHECK(weighted_norm(g, 0.3, 2, 1) > weighted_norm(g, 0.3, 2, 0));
  }
}

#include "biscat/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "biscat/jet.hpp"
#include "biscat/quadrature.hpp"

namespace biscat {

// ---------------------------------------------------------------------------
// RadialProfile
// ---------------------------------------------------------------------------

namespace {
// Below this mollifier argument the ramp value (< e^-50) is indistinguishable
// from zero at double precision once multiplied by the Gaussian envelope.
constexpr double kRampEps = 0.02;
}  // namespace

void RadialProfile::derivs(double s, int upto, double* out) const {
  const double rc2 = cutoff_radius * cutoff_radius;
  const double r02 = plateau_radius * plateau_radius;
  if (s >= rc2) {
    for (int k = 0; k <= upto; ++k) out[k] = 0.0;
    return;
  }
  const double inv_w2 = 1.0 / (width * width);
  if (s < r02) {
    const double e = amplitude * std::exp(-s * inv_w2);
    double fk = 1.0;
    for (int k = 0; k <= upto; ++k) {
      out[k] = e * fk;
      fk *= -inv_w2;
    }
    return;
  }
  // Ramp region: amplitude * exp(-s/w^2) * S(u), u = (rc - r)/(rc - r0),
  // S(u) = psi(u) / (psi(u) + psi(1-u)), psi(t) = exp(-1/t).
  const Jet sj = Jet::variable(s);
  const Jet r = sqrt(sj);
  const double ramp_len = cutoff_radius - plateau_radius;
  const Jet u = (Jet::constant(cutoff_radius) - r) * (1.0 / ramp_len);
  const double uv = u.value();
  if (uv <= kRampEps) {
    for (int k = 0; k <= upto; ++k) out[k] = 0.0;
    return;
  }
  Jet total;
  const Jet gauss = exp(sj * (-inv_w2)) * amplitude;
  if (uv >= 1.0 - kRampEps) {
    total = gauss;  // mollifier is 1 to beyond double precision here
  } else {
    const Jet psi_u = exp(-recip(u));
    const Jet psi_cu = exp(-recip(1.0 - u));
    const Jet ramp = div(psi_u, psi_u + psi_cu);
    total = gauss * ramp;
  }
  double fact = 1.0;
  for (int k = 0; k <= upto; ++k) {
    out[k] = total.c[k] * fact;
    fact *= (k + 1);
  }
}

double RadialProfile::value(double s) const {
  double v[1];
  derivs(s, 0, v);
  return v[0];
}

// ---------------------------------------------------------------------------
// Term lists
// ---------------------------------------------------------------------------

namespace {

void refresh_bounds(TermList& l) {
  l.max_k = 0;
  l.max_deg = 0;
  for (const auto& t : l.terms) {
    l.max_k = std::max<int>(l.max_k, t.k);
    l.max_deg = std::max<int>(l.max_deg, t.ex + t.ey + t.ez);
  }
}

TermList merged(TermList l) {
  std::sort(l.terms.begin(), l.terms.end(), [](const Term& a, const Term& b) {
    return std::tie(a.k, a.ex, a.ey, a.ez) < std::tie(b.k, b.ex, b.ey, b.ez);
  });
  TermList out;
  for (const auto& t : l.terms) {
    if (!out.terms.empty()) {
      Term& last = out.terms.back();
      if (last.k == t.k && last.ex == t.ex && last.ey == t.ey &&
          last.ez == t.ez) {
        last.coef += t.coef;
        continue;
      }
    }
    out.terms.push_back(t);
  }
  std::erase_if(out.terms, [](const Term& t) { return t.coef == 0.0; });
  refresh_bounds(out);
  return out;
}

TermList add_lists(const TermList& a, const TermList& b) {
  TermList r = a;
  r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
  return merged(std::move(r));
}

}  // namespace

TermList differentiate(const TermList& list, int axis) {
  TermList out;
  for (const auto& t : list.terms) {
    std::int8_t e[3] = {t.ex, t.ey, t.ez};
    if (e[axis] > 0) {
      Term d = t;
      std::int8_t de[3] = {t.ex, t.ey, t.ez};
      de[axis] -= 1;
      d.ex = de[0];
      d.ey = de[1];
      d.ez = de[2];
      d.coef = t.coef * e[axis];
      out.terms.push_back(d);
    }
    // chain rule through s = |y|^2
    Term c = t;
    std::int8_t ce[3] = {t.ex, t.ey, t.ez};
    ce[axis] += 1;
    c.ex = ce[0];
    c.ey = ce[1];
    c.ez = ce[2];
    c.k = static_cast<std::int8_t>(t.k + 1);
    c.coef = 2.0 * t.coef;
    out.terms.push_back(c);
  }
  return merged(std::move(out));
}

// ---------------------------------------------------------------------------
// ScalarField implementation
// ---------------------------------------------------------------------------

struct ScalarField::Impl {
  struct Atom {
    Vec3 center;
    RadialProfile prof;
    double cut2 = 0.0;
    TermList value;
    TermList d[3];
    TermList hess[6];  // xx, xy, xz, yy, yz, zz
    TermList lap;
    TermList dlap[3];
    TermList bilap;
    int k_value, k_grad, k_hess, k_lap, k_dlap, k_bilap;
    int deg_all = 0;
  };
  std::vector<Atom> atoms;
  double support_radius = 0.0;
  double l1 = 0.0;
};

namespace {

using Atom = ScalarField::Impl::Atom;

Atom make_atom(const Vec3& center, const RadialProfile& prof, TermList base) {
  Atom a;
  a.center = center;
  a.prof = prof;
  a.cut2 = prof.cutoff_radius * prof.cutoff_radius;
  a.value = merged(std::move(base));
  for (int i = 0; i < 3; ++i) a.d[i] = differentiate(a.value, i);
  int idx = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) a.hess[idx++] = differentiate(a.d[i], j);
  a.lap = add_lists(add_lists(a.hess[0], a.hess[3]), a.hess[5]);
  for (int i = 0; i < 3; ++i) a.dlap[i] = differentiate(a.lap, i);
  TermList bl = differentiate(a.dlap[0], 0);
  bl = add_lists(bl, differentiate(a.dlap[1], 1));
  bl = add_lists(bl, differentiate(a.dlap[2], 2));
  a.bilap = std::move(bl);

  a.k_value = a.value.max_k;
  a.k_grad = std::max({a.d[0].max_k, a.d[1].max_k, a.d[2].max_k});
  a.k_hess = 0;
  for (const auto& h : a.hess) a.k_hess = std::max(a.k_hess, h.max_k);
  a.k_lap = a.lap.max_k;
  a.k_dlap = std::max({a.dlap[0].max_k, a.dlap[1].max_k, a.dlap[2].max_k});
  a.k_bilap = a.bilap.max_k;
  if (a.k_bilap > Jet::kOrder)
    throw std::logic_error("field derivative order exceeds jet capacity");

  a.deg_all = a.bilap.max_deg;
  for (const auto& h : a.hess) a.deg_all = std::max(a.deg_all, h.max_deg);
  for (int i = 0; i < 3; ++i)
    a.deg_all = std::max({a.deg_all, a.d[i].max_deg, a.dlap[i].max_deg});
  a.deg_all = std::max({a.deg_all, a.value.max_deg, a.lap.max_deg});
  return a;
}

double atom_l1(const Atom& a) {
  // crude scale estimate for tolerance anchoring only
  const double w = a.prof.width;
  double acc = 0.0;
  for (const auto& t : a.value.terms) {
    const int deg = t.ex + t.ey + t.ez;
    acc += std::abs(t.coef) * std::abs(a.prof.amplitude) * 5.6 *
           std::pow(w, 3 + deg - 2 * t.k);
  }
  return acc;
}

void finalize(ScalarField::Impl& impl) {
  impl.support_radius = 0.0;
  impl.l1 = 0.0;
  for (const auto& a : impl.atoms) {
    impl.support_radius = std::max(impl.support_radius,
                                   a.center.norm() + a.prof.cutoff_radius);
    impl.l1 += atom_l1(a);
  }
}

double eval_list(const TermList& list, const double* px, const double* py,
                 const double* pz, const double* H) {
  double acc = 0.0;
  for (const auto& t : list.terms)
    acc += t.coef * px[t.ex] * py[t.ey] * pz[t.ez] * H[t.k];
  return acc;
}

}  // namespace

ScalarField::ScalarField() : impl_(std::make_shared<Impl>()) {}
ScalarField::ScalarField(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

void ScalarField::eval_into(const Vec3& x, unsigned flags,
                            FieldEval& out) const {
  out = FieldEval{};
  double H[Jet::kOrder + 1];
  double px[10], py[10], pz[10];
  for (const auto& a : impl_->atoms) {
    const double yx = x[0] - a.center[0];
    const double yy = x[1] - a.center[1];
    const double yz = x[2] - a.center[2];
    const double s = yx * yx + yy * yy + yz * yz;
    if (s >= a.cut2) continue;

    int need_k = 0;
    if (flags & kValue) need_k = std::max(need_k, a.k_value);
    if (flags & kGrad) need_k = std::max(need_k, a.k_grad);
    if (flags & kHess) need_k = std::max(need_k, a.k_hess);
    if (flags & kLap) need_k = std::max(need_k, a.k_lap);
    if (flags & kGradLap) need_k = std::max(need_k, a.k_dlap);
    if (flags & kBilap) need_k = std::max(need_k, a.k_bilap);
    a.prof.derivs(s, need_k, H);

    px[0] = py[0] = pz[0] = 1.0;
    for (int d = 1; d <= a.deg_all; ++d) {
      px[d] = px[d - 1] * yx;
      py[d] = py[d - 1] * yy;
      pz[d] = pz[d - 1] * yz;
    }

    if (flags & kValue) out.value += eval_list(a.value, px, py, pz, H);
    if (flags & kGrad)
      for (int i = 0; i < 3; ++i)
        out.grad[i] += eval_list(a.d[i], px, py, pz, H);
    if (flags & kHess) {
      int idx = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          const double v = eval_list(a.hess[idx++], px, py, pz, H);
          out.hess(i, j) += v;
          if (i != j) out.hess(j, i) += v;
        }
    }
    if (flags & kLap) out.lap += eval_list(a.lap, px, py, pz, H);
    if (flags & kGradLap)
      for (int i = 0; i < 3; ++i)
        out.grad_lap[i] += eval_list(a.dlap[i], px, py, pz, H);
    if (flags & kBilap) out.bilap += eval_list(a.bilap, px, py, pz, H);
  }
}

double ScalarField::eval(const Vec3& x) const {
  FieldEval e;
  eval_into(x, kValue, e);
  return e.value;
}
Vec3 ScalarField::grad(const Vec3& x) const {
  FieldEval e;
  eval_into(x, kGrad, e);
  return e.grad;
}
Mat3 ScalarField::hessian(const Vec3& x) const {
  FieldEval e;
  eval_into(x, kHess, e);
  return e.hess;
}
double ScalarField::laplacian(const Vec3& x) const {
  FieldEval e;
  eval_into(x, kLap, e);
  return e.lap;
}
Vec3 ScalarField::grad_laplacian(const Vec3& x) const {
  FieldEval e;
  eval_into(x, kGradLap, e);
  return e.grad_lap;
}
double ScalarField::bilaplacian(const Vec3& x) const {
  FieldEval e;
  eval_into(x, kBilap, e);
  return e.bilap;
}

double ScalarField::support_radius() const { return impl_->support_radius; }
double ScalarField::l1_hint() const { return impl_->l1; }
bool ScalarField::is_zero() const {
  if (impl_->atoms.empty()) return true;
  for (const auto& a : impl_->atoms)
    if (a.prof.amplitude != 0.0 && !a.value.terms.empty()) return false;
  return true;
}

double ScalarField::bandwidth_hint(double tol) const {
  double hint = 0.0;
  const double logfac = 2.0 * std::sqrt(std::max(1.0, std::log(1.0 / tol)));
  for (const auto& a : impl_->atoms) {
    const double h = (logfac + 0.5 * a.value.max_deg) / a.prof.width;
    hint = std::max(hint, h);
  }
  return 1.1 * hint;
}

ScalarField ScalarField::operator+(const ScalarField& other) const {
  auto impl = std::make_shared<Impl>();
  impl->atoms = impl_->atoms;
  impl->atoms.insert(impl->atoms.end(), other.impl_->atoms.begin(),
                     other.impl_->atoms.end());
  finalize(*impl);
  return ScalarField(std::move(impl));
}

ScalarField ScalarField::operator*(double a) const {
  auto impl = std::make_shared<Impl>(*impl_);
  for (auto& atom : impl->atoms) {
    auto scale = [a](TermList& l) {
      for (auto& t : l.terms) t.coef *= a;
    };
    scale(atom.value);
    for (auto& l : atom.d) scale(l);
    for (auto& l : atom.hess) scale(l);
    scale(atom.lap);
    for (auto& l : atom.dlap) scale(l);
    scale(atom.bilap);
  }
  finalize(*impl);
  return ScalarField(std::move(impl));
}

// ---------------------------------------------------------------------------
// VectorField / FieldPair
// ---------------------------------------------------------------------------

VectorField::VectorField() = default;
VectorField::VectorField(ScalarField a1, ScalarField a2, ScalarField a3)
    : comp_{std::move(a1), std::move(a2), std::move(a3)} {}

Vec3 VectorField::eval(const Vec3& x) const {
  return Vec3(comp_[0].eval(x), comp_[1].eval(x), comp_[2].eval(x));
}

Mat3 VectorField::jacobian(const Vec3& x) const {
  Mat3 j;
  for (int i = 0; i < 3; ++i) j.row(i) = comp_[i].grad(x).transpose();
  return j;
}

double VectorField::support_radius() const {
  return std::max({comp_[0].support_radius(), comp_[1].support_radius(),
                   comp_[2].support_radius()});
}

double VectorField::bandwidth_hint(double tol) const {
  return std::max({comp_[0].bandwidth_hint(tol), comp_[1].bandwidth_hint(tol),
                   comp_[2].bandwidth_hint(tol)});
}

VectorField VectorField::operator+(const VectorField& other) const {
  return VectorField(comp_[0] + other.comp_[0], comp_[1] + other.comp_[1],
                     comp_[2] + other.comp_[2]);
}
VectorField VectorField::operator*(double a) const {
  return VectorField(comp_[0] * a, comp_[1] * a, comp_[2] * a);
}

double FieldPair::support_radius() const {
  return std::max(A.support_radius(), V.support_radius());
}
double FieldPair::bandwidth_hint(double tol) const {
  return std::max(A.bandwidth_hint(tol), V.bandwidth_hint(tol));
}

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

ScalarField make_gaussian_bump(const Vec3& center, double width,
                               double amplitude, double plateau_radius,
                               double cutoff_radius) {
  if (width <= 0.0) throw std::invalid_argument("bump width must be positive");
  if (!(0.0 < plateau_radius && plateau_radius < cutoff_radius))
    throw std::invalid_argument("need 0 < plateau_radius < cutoff_radius");
  RadialProfile prof{amplitude, width, plateau_radius, cutoff_radius};
  TermList base;
  base.terms.push_back(Term{0, 0, 0, 0, 1.0});
  auto impl = std::make_shared<ScalarField::Impl>();
  impl->atoms.push_back(make_atom(center, prof, base));
  finalize(*impl);
  return ScalarField(std::move(impl));
}

ScalarField make_bump_scalar(const Vec3& center, double width,
                             double amplitude) {
  return make_gaussian_bump(center, width, amplitude, 5.0 * width,
                            6.0 * width);
}

VectorField make_vector_bump(const Vec3& center, double width,
                             const Vec3& amplitudes) {
  return VectorField(make_bump_scalar(center, width, amplitudes[0]),
                     make_bump_scalar(center, width, amplitudes[1]),
                     make_bump_scalar(center, width, amplitudes[2]));
}

VectorField make_rotation_field(const Vec3& center, double width,
                                double amplitude) {
  if (width <= 0.0) throw std::invalid_argument("width must be positive");
  RadialProfile prof{amplitude, width, 5.0 * width, 6.0 * width};
  TermList b1, b2;
  b1.terms.push_back(Term{0, 1, 0, 0, -1.0});
  b2.terms.push_back(Term{1, 0, 0, 0, 1.0});
  auto i1 = std::make_shared<ScalarField::Impl>();
  i1->atoms.push_back(make_atom(center, prof, b1));
  finalize(*i1);
  auto i2 = std::make_shared<ScalarField::Impl>();
  i2->atoms.push_back(make_atom(center, prof, b2));
  finalize(*i2);
  return VectorField(ScalarField(std::move(i1)), ScalarField(std::move(i2)),
                     ScalarField());
}

ScalarField derivative_field(const ScalarField& f, int axis) {
  auto impl = std::make_shared<ScalarField::Impl>();
  for (const auto& a : f.impl().atoms)
    impl->atoms.push_back(make_atom(a.center, a.prof, a.d[axis]));
  finalize(*impl);
  return ScalarField(std::move(impl));
}

ScalarField laplacian_field(const ScalarField& f) {
  auto impl = std::make_shared<ScalarField::Impl>();
  for (const auto& a : f.impl().atoms)
    impl->atoms.push_back(make_atom(a.center, a.prof, a.lap));
  finalize(*impl);
  return ScalarField(std::move(impl));
}

VectorField gradient_field(const ScalarField& f) {
  return VectorField(derivative_field(f, 0), derivative_field(f, 1),
                     derivative_field(f, 2));
}

// ---------------------------------------------------------------------------
// Differential / gauge operations
// ---------------------------------------------------------------------------

Vec3 curl(const VectorField& a, const Vec3& x) {
  const Mat3 j = a.jacobian(x);
  return Vec3(j(2, 1) - j(1, 2), j(0, 2) - j(2, 0), j(1, 0) - j(0, 1));
}

double divergence(const VectorField& a, const Vec3& x) {
  return a.jacobian(x).trace();
}

double laplacian(const ScalarField& f, const Vec3& x) {
  return f.laplacian(x);
}

FieldPair gauge_transform(const FieldPair& pair, const ScalarField& phi) {
  return FieldPair{pair.A + gradient_field(phi),
                   pair.V + laplacian_field(phi) * 0.5};
}

// ---------------------------------------------------------------------------
// Fourier transform (cube quadrature)
// ---------------------------------------------------------------------------

Complex fourier_transform(const ScalarField& f, const Vec3& xi, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  if (f.is_zero()) return Complex(0.0, 0.0);
  const double R = f.support_radius();
  const double L = 2.0 * R;
  const double abs_tol = tol * std::max(f.l1_hint(), 1e-30);
  QuadratureCounter counter;

  auto inner_x = [&](double y, double z, double tol1) {
    return integrate_adaptive<Complex>(
        [&](double x) {
          counter.evals++;
          if (counter.evals > counter.budget)
            throw AccuracyError("fourier quadrature budget exhausted", tol1);
          const Vec3 p(x, y, z);
          const double phase = -xi.dot(p);
          return f.eval(p) * Complex(std::cos(phase), std::sin(phase));
        },
        -R, R, tol1);
  };
  const double t1 = abs_tol / (3.0 * L * L);
  const double t2 = abs_tol / (3.0 * L);
  const double t3 = abs_tol / 3.0;
  auto inner_yx = [&](double z) {
    return integrate_adaptive<Complex>(
        [&](double y) { return inner_x(y, z, t1); }, -R, R, t2);
  };
  return integrate_adaptive<Complex>(inner_yx, -R, R, t3);
}

// ---------------------------------------------------------------------------
// Fourier transform (radial reduction)
// ---------------------------------------------------------------------------

namespace {

struct RadialFt {
  // F0(k), F0'(k)/k, and F0''(k) for one radial factor G(r) = H^(kd)(r^2).
  double f0, f0p_over_k, f0pp;
};

RadialFt radial_ft(const RadialProfile& prof, int kd, double k,
                   double abs_tol, bool need2) {
  const double rc = prof.cutoff_radius;
  auto G = [&](double r) {
    double H[Jet::kOrder + 1];
    prof.derivs(r * r, kd, H);
    return H[kd];
  };
  RadialFt out{0.0, 0.0, 0.0};
  const double fourpi = 4.0 * M_PI;
  if (k * rc < 0.4) {
    auto moment = [&](int m) {
      return integrate_adaptive<double>(
          [&](double r) { return std::pow(r, m) * G(r); }, 0.0, rc, abs_tol);
    };
    const double M2 = moment(2), M4 = moment(4), M6 = moment(6),
                 M8 = moment(8), M10 = moment(10);
    const double k2 = k * k, k4 = k2 * k2, k6 = k4 * k2, k8 = k4 * k4;
    out.f0 = fourpi *
             (M2 - k2 * M4 / 6.0 + k4 * M6 / 120.0 - k6 * M8 / 5040.0 +
              k8 * M10 / 362880.0);
    out.f0p_over_k = fourpi * (-M4 / 3.0 + k2 * M6 / 30.0 - k4 * M8 / 840.0 +
                               k6 * M10 / 45360.0);
    if (need2)
      out.f0pp = fourpi * (-M4 / 3.0 + k2 * M6 / 10.0 - k4 * M8 / 168.0 +
                           k6 * M10 / 6480.0);
    return out;
  }
  const double W1 = integrate_adaptive<double>(
      [&](double r) { return r * std::sin(k * r) * G(r); }, 0.0, rc, abs_tol);
  out.f0 = fourpi * W1 / k;
  const double W2 = integrate_adaptive<double>(
      [&](double r) { return r * r * std::cos(k * r) * G(r); }, 0.0, rc,
      abs_tol);
  const double f0p = fourpi * W2 / k - out.f0 / k;
  out.f0p_over_k = f0p / k;
  if (need2) {
    const double W3 = integrate_adaptive<double>(
        [&](double r) { return r * r * r * std::sin(k * r) * G(r); }, 0.0, rc,
        abs_tol);
    out.f0pp = -fourpi * W3 / k - 2.0 * f0p / k;
  }
  return out;
}

}  // namespace

Complex fourier_transform_radial(const ScalarField& f, const Vec3& xi,
                                 double abs_tol) {
  if (f.is_zero()) return Complex(0.0, 0.0);
  const double k = xi.norm();
  const Vec3 kh = (k > 0.0) ? Vec3(xi / k) : Vec3(0, 0, 1);
  Complex total(0.0, 0.0);
  for (const auto& a : f.impl().atoms) {
    if (a.value.max_deg > 2)
      return fourier_transform(f, xi, 1e-8);  // generic fallback
    // cache radial transforms per profile-derivative order
    RadialFt cache[Jet::kOrder + 1];
    bool have[Jet::kOrder + 1] = {};
    bool need2 = false;
    for (const auto& t : a.value.terms)
      if (t.ex + t.ey + t.ez == 2) need2 = true;
    Complex atom_sum(0.0, 0.0);
    for (const auto& t : a.value.terms) {
      if (!have[t.k]) {
        cache[t.k] = radial_ft(a.prof, t.k, k, abs_tol, need2);
        have[t.k] = true;
      }
      const RadialFt& rf = cache[t.k];
      const int deg = t.ex + t.ey + t.ez;
      if (deg == 0) {
        atom_sum += t.coef * rf.f0;
      } else if (deg == 1) {
        const int j = (t.ex == 1) ? 0 : (t.ey == 1 ? 1 : 2);
        // FT[y_j G] = i d/dxi_j FT[G] = i * xihat_j * F0'(k)
        atom_sum += Complex(0.0, t.coef * kh[j] * rf.f0p_over_k * k);
      } else {
        int j = -1, l = -1;
        const int e[3] = {t.ex, t.ey, t.ez};
        for (int i = 0; i < 3; ++i) {
          if (e[i] == 2) j = l = i;
          if (e[i] == 1) (j < 0 ? j : l) = i;
        }
        // FT[y_j y_l G] = -d_j d_l F0 = -(delta_jl - xh_j xh_l) F0'/k
        //                - xh_j xh_l F0''
        const double djl = (j == l) ? 1.0 : 0.0;
        atom_sum += t.coef * (-(djl - kh[j] * kh[l]) * rf.f0p_over_k -
                              kh[j] * kh[l] * rf.f0pp);
      }
    }
    const double ph = -xi.dot(a.center);
    total += atom_sum * Complex(std::cos(ph), std::sin(ph));
  }
  return total;
}

// ---------------------------------------------------------------------------
// Weighted norms
// ---------------------------------------------------------------------------

double weighted_norm(const ScalarField& f, double delta, int p, int s) {
  if (p != 2) throw std::invalid_argument("weighted_norm: only p = 2");
  if (s != 0 && s != 1) throw std::invalid_argument("weighted_norm: s in {0,1}");
  if (f.is_zero()) return 0.0;
  const double R = f.support_radius();
  auto density = [&](const Vec3& x) {
    const double w = std::pow(1.0 + x.norm(), 2.0 * delta);
    FieldEval e;
    f.eval_into(x, s == 1 ? (kValue | kGrad) : kValue, e);
    double g = e.value * e.value;
    if (s == 1) g += e.grad.squaredNorm();
    return w * g;
  };
  const double scale = std::max(f.l1_hint(), 1e-30);
  const double abs_tol = 1e-9 * scale * scale;
  const double L = 2.0 * R;
  const double t1 = abs_tol / (3.0 * L * L);
  const double t2 = abs_tol / (3.0 * L);
  auto inner_x = [&](double y, double z) {
    return integrate_adaptive<double>(
        [&](double x) { return density(Vec3(x, y, z)); }, -R, R, t1);
  };
  auto inner_yx = [&](double z) {
    return integrate_adaptive<double>([&](double y) { return inner_x(y, z); },
                                      -R, R, t2);
  };
  const double total =
      integrate_adaptive<double>(inner_yx, -R, R, abs_tol / 3.0);
  return std::sqrt(std::max(total, 0.0));
}

}  // namespace biscat

#pragma once

#include "sdeq/clifford.hpp"
#include "sdeq/grid.hpp"
#include "sdeq/spectral.hpp"
#include "sdeq/specfun.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdeq {

/// Charge e, field B along the third axis, mass m, spin label s = +-1 and
/// level index n.
struct LandauParams {
  double e = 1, B = 1, m = 0;
  int s = 1;
  int n = 0;

  double eB() const { return e * B; }

  void validate() const {
    if (!(eB() > 0)) throw std::domain_error("eB must be positive for bound levels");
    if (s != 1 && s != -1) throw std::invalid_argument("spin label s must be +1 or -1");
    if (n < 0) throw std::invalid_argument("level index n must be >= 0");
  }
};

struct SpectrumRow {
  int n = 0, s = 1;
  double eB = 1;
  int k = 1;
  double kappa = 0;           // lambda^2 + s eB
  double lambda2_paper = 0;   // eB (2n + 1 + s)
  double lambda2_oracle = 0;  // kappa - s eB = eB (2n + 1 - s)
};

/// Terminating solutions require 1 - k = -2n. kappa = eB k follows from
/// k = (lambda^2 + s eB)/eB; the published closed form carries +s instead.
inline SpectrumRow spectrum(const LandauParams& p) {
  p.validate();
  SpectrumRow r;
  r.n = p.n;
  r.s = p.s;
  r.eB = p.eB();
  r.k = 2 * p.n + 1;
  r.kappa = r.eB * r.k;
  r.lambda2_paper = r.eB * (2 * p.n + 1 + p.s);
  r.lambda2_oracle = r.kappa - p.s * r.eB;
  return r;
}

/// z = px^2 + py^2 + eB (y px - x py) + (eB)^2/4 (x^2 + y^2),
/// evaluated as the sum of squares (px + eB y/2)^2 + (py - eB x/2)^2.
inline double z_variable(double x, double y, double px, double py, const LandauParams& p) {
  const double eB = p.eB();
  const double u = px + 0.5 * eB * y, v = py - 0.5 * eB * x;
  return u * u + v * v;
}

/// Expanded form of z_variable, for cross-checking the completed square.
inline double z_variable_expanded(double x, double y, double px, double py, const LandauParams& p) {
  const double eB = p.eB();
  return px * px + py * py + eB * (y * px - x * py) + 0.25 * eB * eB * (x * x + y * y);
}

/// A function of z with its first two derivatives.
struct ZFunction {
  std::function<double(double)> value, d1, d2;
};

/// phi_n(z) = exp(-z/eB) M(-n, 1, 2z/eB), unnormalised. The polynomial
/// factor is built from exact coefficients in z.
class LandauEigenfunction {
 public:
  LandauEigenfunction(int n, double eB) : n_(n), eB_(eB) {
    if (n < 0) throw std::invalid_argument("level index n must be >= 0");
    if (!(eB > 0)) throw std::domain_error("eB must be positive");
    const Rational scale = Rational(2) / Rational::from_double(eB);
    Rational power(1);
    for (const auto& c : kummer_m_polynomial(n, Rational(1))) {
      coeff_.push_back((c * power).to_double());
      power *= scale;
    }
  }

  int n() const { return n_; }
  double eB() const { return eB_; }
  const std::vector<double>& coefficients() const { return coeff_; }

  double operator()(double z) const { return std::exp(-z / eB_) * poly(z, 0); }
  double d1(double z) const { return std::exp(-z / eB_) * (poly(z, 1) - poly(z, 0) / eB_); }
  double d2(double z) const {
    return std::exp(-z / eB_) * (poly(z, 2) - 2 * poly(z, 1) / eB_ + poly(z, 0) / (eB_ * eB_));
  }

  ZFunction as_zfunction() const {
    auto self = *this;
    return {[self](double z) { return self(z); }, [self](double z) { return self.d1(z); },
            [self](double z) { return self.d2(z); }};
  }

 private:
  /// order-th derivative of the polynomial factor, by Horner.
  double poly(double z, int order) const {
    double acc = 0;
    for (int k = static_cast<int>(coeff_.size()) - 1; k >= order; --k) {
      double falling = 1;
      for (int j = 0; j < order; ++j) falling *= (k - j);
      acc = acc * z + falling * coeff_[static_cast<std::size_t>(k)];
    }
    return acc;
  }

  int n_;
  double eB_;
  std::vector<double> coeff_;
};

inline LandauEigenfunction eigenfunction(int n, const LandauParams& p) { return {n, p.eB()}; }

/// B with integral_0^inf (B phi_n)^2 dz = 1 for every n.
inline double normalization(const LandauParams& p) {
  p.validate();
  return std::sqrt(2 / p.eB());
}

/// z phi - (eB)^2 phi' - (eB)^2 z phi'' at one point.
inline double reduced_ode_apply(const ZFunction& f, double z, double eB) {
  return z * f.value(z) - eB * eB * f.d1(z) - eB * eB * z * f.d2(z);
}

/// Sampled form: samples phi(z0 + j dz), derivatives by fourth-order finite
/// differences (one-sided near the ends).
inline std::vector<double> reduced_ode_apply(const std::vector<double>& phi, double z0, double dz, double eB) {
  const std::size_t N = phi.size();
  if (N < 5) throw std::invalid_argument("reduced_ode_apply needs at least 5 samples");
  if (!(dz > 0)) throw std::invalid_argument("sample spacing must be positive");
  std::vector<double> out(N);
  for (std::size_t j = 0; j < N; ++j) {
    // five-point stencil positioned to stay inside the samples
    std::size_t c = std::clamp<std::size_t>(j, 2, N - 3);
    const double f[5] = {phi[c - 2], phi[c - 1], phi[c], phi[c + 1], phi[c + 2]};
    const double t = static_cast<double>(j) - static_cast<double>(c);  // offset in -2..2
    // derivatives of the quartic interpolant through the five points at t
    double d1 = 0, d2 = 0;
    for (int a = 0; a < 5; ++a) {
      const double xa = a - 2.0;
      double denom = 1;
      for (int b = 0; b < 5; ++b)
        if (b != a) denom *= xa - (b - 2.0);
      double s1 = 0, s2 = 0;
      for (int b = 0; b < 5; ++b) {
        if (b == a) continue;
        double p1 = 1;
        for (int c2 = 0; c2 < 5; ++c2)
          if (c2 != a && c2 != b) p1 *= t - (c2 - 2.0);
        s1 += p1;
        for (int c2 = 0; c2 < 5; ++c2) {
          if (c2 == a || c2 == b) continue;
          double p2 = 1;
          for (int d = 0; d < 5; ++d)
            if (d != a && d != b && d != c2) p2 *= t - (d - 2.0);
          s2 += p2;
        }
      }
      d1 += f[a] * s1 / denom;
      d2 += f[a] * s2 / denom;
    }
    d1 /= dz;
    d2 /= dz * dz;
    const double z = z0 + static_cast<double>(j) * dz;
    out[j] = z * phi[j] - eB * eB * d1 - eB * eB * z * d2;
  }
  return out;
}

namespace detail {

/// Composite Gauss-Legendre on [0, omega_max].
inline double integrate_omega(const std::function<double(double)>& f, double omega_max) {
  constexpr int panels = 60;
  const double h = omega_max / panels;
  double s = 0;
  for (int k = 0; k < panels; ++k)
    s += boost::math::quadrature::gauss<double, 20>::integrate(f, k * h, (k + 1) * h);
  return s;
}

}  // namespace detail

/// Rayleigh quotient of the reduced operator. With omega = z/eB the operator
/// is eB [omega phi - (omega phi_omega)_omega], symmetric under unit weight
/// in omega, so
///   R = eB [int omega (phi + phi_omega)^2 + int phi^2] / int phi^2,
/// which is the Laguerre form int omega e^{-2 omega} F'^2 for phi = e^{-omega} F.
inline double rayleigh_quotient(const ZFunction& f, const LandauParams& p, double omega_max = 30) {
  const double eB = p.eB();
  if (!(eB > 0)) throw std::domain_error("eB must be positive");
  auto phi = [&](double w) { return f.value(eB * w); };
  auto phi_w = [&](double w) { return eB * f.d1(eB * w); };
  const double den = detail::integrate_omega([&](double w) { return phi(w) * phi(w); }, omega_max);
  if (!(den > 0)) throw std::domain_error("Rayleigh quotient of a vanishing function");
  const double kin = detail::integrate_omega(
      [&](double w) {
        double u = phi(w) + phi_w(w);
        return w * u * u;
      },
      omega_max);
  return eB * (kin + den) / den;
}

/// integral_0^{omega_max eB} f g dz.
inline double overlap(const ZFunction& f, const ZFunction& g, const LandauParams& p, double omega_max = 30) {
  const double eB = p.eB();
  return eB * detail::integrate_omega([&](double w) { return f.value(eB * w) * g.value(eB * w); }, omega_max);
}

/// -(E - alpha/2)^2 - m^2: the lambda^2 for which phi = e^{i alpha t} solves
/// (-E^2 - iE d/dt + (1/4) d^2/dt^2 - m^2) phi = lambda^2 phi.
inline double temporal_factor_residual(double E, double alpha, double m) {
  const double d = E - alpha / 2;
  return -d * d - m * m;
}

struct TemporalCheck {
  double lambda2 = 0;   // Rayleigh quotient of the sampled operator
  double residual = 0;  // max|O phi - lambda2 phi| / max|phi|
};

/// Applies the temporal operator to e^{i alpha t} sampled on a periodic t grid
/// holding whole periods, with spectral derivatives.
inline TemporalCheck temporal_factor_numeric(double E, double alpha, double m, int points = 64) {
  const double period = alpha == 0 ? 2 * std::numbers::pi : 2 * std::numbers::pi * 4 / std::fabs(alpha);
  GridSpec spec({{"t", points, 0.0, period, true}});
  Field phi = Field::sample(spec, [&](const std::array<double, 4>& t) { return std::polar(1.0, alpha * t[0]); });
  Field op = cplx(-E * E - m * m) * phi;
  op += cplx(0, -E) * fourier_derivative(phi, 0, 1);
  op += cplx(0.25) * fourier_derivative(phi, 0, 2);
  TemporalCheck r;
  r.lambda2 = (inner_product(phi, op) / inner_product(phi, phi)).real();
  r.residual = (op - cplx(r.lambda2) * phi).max_abs() / phi.max_abs();
  return r;
}

/// Sign of the angular-kinetic term. Corrected: -i(px d/dx + py d/dy), the
/// cross term of (p - (i/2) d/dq)^2. Literal: -i(py d/dy - px d/dx), as
/// printed in the source of the two-component equation.
enum class KineticForm { corrected, literal };

struct LandauAxes {
  int x, y, px, py;
};

inline LandauAxes landau_axes(const GridSpec& spec) {
  auto need = [&](const char* name) {
    auto k = spec.find(name);
    if (!k) throw std::invalid_argument(std::string("Landau grid needs an axis named '") + name + "'");
    return *k;
  };
  if (spec.rank() != 4) throw DimensionMismatch("Landau grid must have exactly the axes x, y, px, py");
  return {need("x"), need("y"), need("px"), need("py")};
}

/// Box and resolution adapted to the eigenfunction envelope: the Gaussian
/// decay is (2/eB)(px^2 + py^2) + (eB/2)(x^2 + y^2), so the momentum range
/// is half the position range at eB = 1 and the two scale as sqrt(eB).
inline GridSpec default_landau_grid(int points, double eB) {
  const double lx = 5 / std::sqrt(eB), lp = 2.5 * std::sqrt(eB);
  return GridSpec({{"x", points, -lx, lx, true},
                   {"y", points, -lx, lx, true},
                   {"px", points, -lp, lp, true},
                   {"py", points, -lp, lp, true}});
}

/// Left side of the planar two-component equation for one component, with
/// i sigma^{12} replaced by -s (spin term -s eB when include_spin).
inline Field full_operator_apply(const Field& phi, const LandauParams& p, KineticForm form = KineticForm::corrected,
                                 bool include_spin = true) {
  const GridSpec& spec = phi.spec();
  const LandauAxes ax = landau_axes(spec);
  const double eB = p.eB();
  auto d = [&](int a, int oa, int b = -1, int ob = 0) {
    std::array<int, 4> orders{};
    orders[static_cast<std::size_t>(a)] += oa;
    if (b >= 0) orders[static_cast<std::size_t>(b)] += ob;
    return spectral_derivative(phi, orders);
  };
  const Field fx = d(ax.x, 1), fy = d(ax.y, 1), fpx = d(ax.px, 1), fpy = d(ax.py, 1);
  const Field fxx = d(ax.x, 2), fyy = d(ax.y, 2), fpxpx = d(ax.px, 2), fpypy = d(ax.py, 2);
  const Field fy_px = d(ax.y, 1, ax.px, 1), fx_py = d(ax.x, 1, ax.py, 1);

  Field out(spec);
  const cplx I(0, 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto c = spec.coordinates(i);
    const double x = c[static_cast<std::size_t>(ax.x)], y = c[static_cast<std::size_t>(ax.y)];
    const double px = c[static_cast<std::size_t>(ax.px)], py = c[static_cast<std::size_t>(ax.py)];
    cplx v = (px * px + py * py) * phi[i] - 0.25 * (fxx[i] + fyy[i]);
    if (form == KineticForm::corrected) {
      v += -I * (px * fx[i] + py * fy[i]);
    } else {
      v += -I * (py * fy[i] - px * fx[i]);
    }
    v -= eB * ((x * py - y * px) * phi[i] + 0.5 * I * (py * fpx[i] - px * fpy[i]) - 0.5 * I * (x * fy[i] - y * fx[i]) +
               0.25 * (fy_px[i] - fx_py[i]));
    v += 0.25 * eB * eB *
         ((x * x + y * y) * phi[i] + I * (x * fpx[i] + y * fpy[i]) - 0.25 * (fpxpx[i] + fpypy[i]));
    if (include_spin) v -= static_cast<double>(p.s) * eB * phi[i];
    out[i] = v;
  }
  return out;
}

/// Both components of chi = phi xi, with the same scalar operator.
inline std::array<Field, 2> full_operator_apply(const std::array<Field, 2>& chi, const LandauParams& p,
                                                KineticForm form = KineticForm::corrected) {
  return {full_operator_apply(chi[0], p, form), full_operator_apply(chi[1], p, form)};
}

/// phi_n(z) G on a Landau grid, with the guiding-centre envelope
/// G = exp(-c (w1^2 + w2^2)/eB), w1 = px - eB y/2, w2 = py + eB x/2, c the
/// envelope strength (0 disables it). The operator does not involve w1, w2,
/// so G keeps the eigenvalue while making the state decay in all four
/// directions.
inline Field sample_landau_state(int n, const LandauParams& p, const GridSpec& spec, double envelope = 1.0,
                                 bool normalized = true) {
  const LandauAxes ax = landau_axes(spec);
  const LandauEigenfunction phi = eigenfunction(n, p);
  const double eB = p.eB();
  const double scale = normalized ? normalization(p) : 1.0;
  return Field::sample(spec, [&](const std::array<double, 4>& c) {
    const double x = c[static_cast<std::size_t>(ax.x)], y = c[static_cast<std::size_t>(ax.y)];
    const double px = c[static_cast<std::size_t>(ax.px)], py = c[static_cast<std::size_t>(ax.py)];
    double v = scale * phi(z_variable(x, y, px, py, p));
    if (envelope != 0) {
      const double w1 = px - 0.5 * eB * y, w2 = py + 0.5 * eB * x;
      v *= std::exp(-envelope * (w1 * w1 + w2 * w2) / eB);
    }
    return cplx(v);
  });
}

struct ReductionReport {
  int n = 0;
  std::string grid;
  double kappa = 0;
  double relative_difference = 0;  // max|O0 phi - kappa phi| / max|kappa phi|, interior
  double imaginary_ratio = 0;      // max|Im O0 phi| / max|phi|, interior
  double imaginary_ratio_full = 0; // same over the whole grid
  double max_phi = 0;
};

/// Compares the full planar operator (spin term excluded) applied to
/// phi_n(z) G with kappa_n phi_n(z) G, kappa_n = eB(2n+1). Interior points
/// have every coordinate within interior_fraction of the half-width; the
/// outer shell carries the truncation error of the periodic box.
inline ReductionReport reduction_equivalence_check(int n, const LandauParams& p, const GridSpec& spec,
                                                   KineticForm form = KineticForm::corrected,
                                                   double interior_fraction = 0.75) {
  LandauParams q = p;
  q.n = n;
  q.validate();
  const Field phi = sample_landau_state(n, q, spec);
  const Field op = full_operator_apply(phi, q, form, false);
  const double kappa = spectrum(q).kappa;
  ReductionReport r;
  r.n = n;
  r.grid = spec.to_string();
  r.kappa = kappa;
  r.max_phi = phi.max_abs();
  double diff = 0, ref = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const auto c = spec.coordinates(i);
    bool interior = true;
    for (int k = 0; k < spec.rank(); ++k) {
      const auto& a = spec.axis(k);
      const double mid = 0.5 * (a.min + a.max), half = 0.5 * (a.max - a.min);
      if (std::fabs(c[static_cast<std::size_t>(k)] - mid) > interior_fraction * half) interior = false;
    }
    r.imaginary_ratio_full = std::max(r.imaginary_ratio_full, std::abs(op[i].imag()));
    if (!interior) continue;
    r.imaginary_ratio = std::max(r.imaginary_ratio, std::abs(op[i].imag()));
    diff = std::max(diff, std::abs(op[i] - kappa * phi[i]));
    ref = std::max(ref, std::abs(kappa * phi[i]));
  }
  r.relative_difference = ref > 0 ? diff / ref : diff;
  if (r.max_phi > 0) {
    r.imaginary_ratio /= r.max_phi;
    r.imaginary_ratio_full /= r.max_phi;
  }
  return r;
}

/// Two-component: f_W = sum_a chi_a * conj(chi_a) with chi = Phi xi_s and
/// |xi_s| = 1, which reduces to Phi * conj(Phi). DiracAdjoint: the
/// four-component psi = (I + gamma_5)/2 (chi, 0) contracted with
/// gamma^0 psi^dagger.
enum class WignerMode { two_component, dirac_adjoint };

inline Field wigner_landau(int n, const LandauParams& p, const GridSpec& spec,
                           WignerMode mode = WignerMode::two_component) {
  LandauParams q = p;
  q.n = n;
  q.validate();
  const Field amp = sample_landau_state(n, q, spec);
  StarOptions opts;
  opts.pairs = {{landau_axes(spec).x, landau_axes(spec).px, 1}, {landau_axes(spec).y, landau_axes(spec).py, 1}};
  if (mode == WignerMode::two_component) return grid_star(amp, amp.conj(), opts);

  const GammaRep rep = standard_gamma_rep();
  // Sigma^3 eigenvector for the spin label: upper slot for s = +1.
  std::array<Field, 4> big{Field(spec), Field(spec), Field(spec), Field(spec)};
  big[q.s == 1 ? 0 : 1] = amp;
  const Matrix4 proj = chiral_projector(1, rep);
  std::array<Field, 4> psi{Field(spec), Field(spec), Field(spec), Field(spec)};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const auto& e = proj(a, b);
      if (!e.is_zero())
        psi[static_cast<std::size_t>(a)] += cplx(e.real().to_double(), e.imag().to_double()) * big[static_cast<std::size_t>(b)];
    }
  return wigner_from_spinor(psi, rep, opts);
}

}  // namespace sdeq

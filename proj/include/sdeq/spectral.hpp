#pragma once

#include "sdeq/clifford.hpp"
#include "sdeq/grid.hpp"
#include "sdeq/metric.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sdeq {

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place multidimensional DFT. sign = FFTW_FORWARD or FFTW_BACKWARD,
/// unnormalised.
inline void fft_inplace(std::vector<cplx>& data, const GridSpec& spec, int sign) {
  std::array<int, 4> dims{};
  for (int k = 0; k < spec.rank(); ++k) dims[static_cast<std::size_t>(k)] = spec.axis(k).n;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft(spec.rank(), dims.data(), buf, buf, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("FFTW could not create a plan");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

/// Signed mode number of DFT index j on n points.
inline int mode_number(int j, int n) { return j < (n + 1) / 2 ? j : j - n; }

inline bool is_nyquist(int j, int n) { return n % 2 == 0 && j == n / 2; }

inline double wavenumber(const GridAxis& a, int j) {
  return 2 * std::numbers::pi * mode_number(j, a.n) / a.period();
}

inline unsigned worker_count() { return std::max(1u, std::min(16u, std::thread::hardware_concurrency())); }

/// Runs body(begin, end) over [0, n) in contiguous chunks on worker threads.
template <class Body>
void parallel_for(std::size_t n, Body body) {
  unsigned workers = worker_count();
  if (workers == 1 || n < 4096) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t b = w * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([=] { body(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Forward transform scaled so that f(x) = sum_k F(k) exp(i k x).
inline std::vector<cplx> fourier_coefficients(const Field& f) {
  std::vector<cplx> c = f.values();
  detail::fft_inplace(c, f.spec(), FFTW_FORWARD);
  const double inv = 1.0 / static_cast<double>(f.size());
  for (auto& v : c) v *= inv;
  return c;
}

/// Inverse of fourier_coefficients.
inline Field from_fourier_coefficients(const GridSpec& spec, std::vector<cplx> c) {
  detail::fft_inplace(c, spec, FFTW_BACKWARD);
  return Field(spec, std::move(c));
}

/// Spectral partial derivative with per-axis orders (unused axes 0). The
/// Nyquist mode of an axis differentiated an odd number of times is dropped.
inline Field spectral_derivative(const Field& f, const std::array<int, 4>& orders) {
  const GridSpec& spec = f.spec();
  for (int k = 0; k < 4; ++k) {
    if (orders[static_cast<std::size_t>(k)] < 0) throw std::invalid_argument("derivative order must be >= 0");
    if (orders[static_cast<std::size_t>(k)] > 0 && k >= spec.rank())
      throw IndexOutOfRange("derivative axis " + std::to_string(k) + " out of range");
  }
  std::vector<cplx> c = fourier_coefficients(f);
  for (std::size_t flat = 0; flat < c.size(); ++flat) {
    auto idx = spec.unflatten(flat);
    cplx m = 1;
    for (int k = 0; k < spec.rank(); ++k) {
      int ord = orders[static_cast<std::size_t>(k)];
      if (ord == 0) continue;
      const auto& a = spec.axis(k);
      int j = idx[static_cast<std::size_t>(k)];
      if (ord % 2 == 1 && detail::is_nyquist(j, a.n)) {
        m = 0;
        break;
      }
      cplx ik(0, detail::wavenumber(a, j));
      for (int r = 0; r < ord; ++r) m *= ik;
    }
    c[flat] *= m;
  }
  return from_fourier_coefficients(spec, std::move(c));
}

/// d^order f / d(axis)^order by FFT, order 1 or 2.
inline Field fourier_derivative(const Field& f, int axis, int order = 1) {
  if (axis < 0 || axis >= f.spec().rank()) throw IndexOutOfRange("derivative axis " + std::to_string(axis) + " out of range");
  if (order != 1 && order != 2) throw std::invalid_argument("derivative order must be 1 or 2");
  std::array<int, 4> orders{};
  orders[static_cast<std::size_t>(axis)] = order;
  return spectral_derivative(f, orders);
}

/// Conjugate axis pair of a numerical star product, with the sign of its
/// Poisson term: f*g = fg + (i/2) sign (df/dq dg/dp - df/dp dg/dq) + ...
struct AxisPair {
  int q = 0, p = 0;
  int sign = 1;
};

/// Pairs position-like axes with their momenta by name: "q<k>" (or "q") with
/// "p<k>" (or "p"), any other name "x" with "px". Throws if an axis is left unpaired.
inline std::vector<AxisPair> conjugate_pairs(const GridSpec& spec) {
  std::vector<AxisPair> pairs;
  std::vector<bool> used(static_cast<std::size_t>(spec.rank()), false);
  for (int k = 0; k < spec.rank(); ++k) {
    const std::string& name = spec.axis(k).name;
    std::string partner = (!name.empty() && name[0] == 'q') ? "p" + name.substr(1) : "p" + name;
    if (auto j = spec.find(partner)) {
      if (used[static_cast<std::size_t>(k)] || used[static_cast<std::size_t>(*j)])
        throw std::invalid_argument("axis '" + name + "' appears in two conjugate pairs");
      pairs.push_back({k, *j, 1});
      used[static_cast<std::size_t>(k)] = used[static_cast<std::size_t>(*j)] = true;
    }
  }
  for (int k = 0; k < spec.rank(); ++k)
    if (!used[static_cast<std::size_t>(k)])
      throw std::invalid_argument("axis '" + spec.axis(k).name + "' has no conjugate partner");
  return pairs;
}

struct StarOptions {
  /// Explicit pairs; empty means conjugate_pairs(spec).
  std::vector<AxisPair> pairs;
  /// Fourier modes of the left factor below this fraction of its largest
  /// mode are skipped.
  double prune = 1e-16;
};

/// Moyal product of two sampled fields: the exact star product of their
/// trigonometric interpolants, sampled back on the grid. Plane waves multiply
/// as
///   e^{ik.x} * e^{ik'.x} = e^{i(k+k').x} exp(-(i/2) sum sign (k_q k'_p - k_p k'_q)),
/// a twisted convolution of the Fourier coefficients; for one mode of f the
/// twist is a product of one factor per axis. An even axis splits its
/// Nyquist coefficient evenly between +k and -k so that real samples have a
/// real interpolant and psi * conj(psi) stays real.
inline Field grid_star(const Field& f, const Field& g, const StarOptions& options = {}) {
  f.require_same(g);
  const GridSpec& spec = f.spec();
  const std::vector<AxisPair> pairs = options.pairs.empty() ? conjugate_pairs(spec) : options.pairs;
  const int rank = spec.rank();

  // partner axis and twist sign per axis: q axes carry +(1/2) s k_p k'_q,
  // p axes -(1/2) s k_q k'_p.
  std::array<int, 4> partner{-1, -1, -1, -1};
  std::array<double, 4> twist{};
  for (const auto& pr : pairs) {
    if (pr.q < 0 || pr.q >= rank || pr.p < 0 || pr.p >= rank || pr.q == pr.p)
      throw std::invalid_argument("invalid conjugate axis pair");
    partner[static_cast<std::size_t>(pr.q)] = pr.p;
    partner[static_cast<std::size_t>(pr.p)] = pr.q;
    twist[static_cast<std::size_t>(pr.q)] = 0.5 * pr.sign;
    twist[static_cast<std::size_t>(pr.p)] = -0.5 * pr.sign;
  }
  for (int k = 0; k < rank; ++k)
    if (partner[static_cast<std::size_t>(k)] < 0)
      throw std::invalid_argument("axis '" + spec.axis(k).name + "' has no conjugate partner");

  const std::vector<cplx> F = fourier_coefficients(f);
  const std::vector<cplx> G = fourier_coefficients(g);

  // Loops run over four slots; the grid axes occupy the last `rank` of them.
  const int off = 4 - rank;
  std::array<int, 4> n{1, 1, 1, 1};
  std::array<std::size_t, 4> stride{0, 0, 0, 0};
  for (int k = 0; k < rank; ++k) n[static_cast<std::size_t>(k + off)] = spec.axis(k).n;
  {
    std::size_t s = 1;
    for (int k = 3; k >= 0; --k) {
      stride[static_cast<std::size_t>(k)] = s;
      s *= static_cast<std::size_t>(n[static_cast<std::size_t>(k)]);
    }
  }
  auto wave = [&](int axis, int j) { return detail::wavenumber(spec.axis(axis), j); };

  // Modes of f above the pruning threshold, expanded over Nyquist halves.
  struct Mode {
    std::array<int, 4> idx{};
    std::array<double, 4> k{};
    cplx value;
  };
  double fmax = 0;
  for (const auto& v : F) fmax = std::max(fmax, std::abs(v));
  std::vector<Mode> modes;
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (!(fmax > 0 && std::abs(F[i]) > options.prune * fmax)) continue;
    std::vector<Mode> variants(1);
    variants[0].idx = spec.unflatten(i);
    variants[0].value = F[i];
    for (int a = 0; a < rank; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      std::vector<Mode> next;
      for (auto v : variants) {
        int j = v.idx[ua];
        v.k[ua] = wave(a, j);
        if (detail::is_nyquist(j, spec.axis(a).n)) {
          v.value *= 0.5;
          next.push_back(v);
          v.k[ua] = -v.k[ua];
        }
        next.push_back(v);
      }
      variants = std::move(next);
    }
    modes.insert(modes.end(), variants.begin(), variants.end());
  }

  std::vector<cplx> H(F.size());
  const std::size_t n0 = static_cast<std::size_t>(n[0]);
  detail::parallel_for(n0 * 4096, [&](std::size_t begin, std::size_t end) {
    const std::size_t k0_begin = begin / 4096, k0_end = (end + 4095) / 4096;
    if (k0_begin >= k0_end) return;
    std::array<std::vector<cplx>, 4> v;
    std::array<std::vector<std::size_t>, 4> gi;
    for (std::size_t a = 0; a < 4; ++a) {
      v[a].resize(static_cast<std::size_t>(n[a]));
      gi[a].resize(static_cast<std::size_t>(n[a]));
    }
    for (const auto& m : modes) {
      for (int slot = 0; slot < 4; ++slot) {
        const auto us = static_cast<std::size_t>(slot);
        const int a = slot - off;  // grid axis, negative for padding
        if (a < 0) {
          v[us][0] = 1;
          gi[us][0] = 0;
          continue;
        }
        const auto ua = static_cast<std::size_t>(a);
        for (int K = 0; K < n[us]; ++K) {
          int jr = K - m.idx[ua];
          if (jr < 0) jr += n[us];
          gi[us][static_cast<std::size_t>(K)] = static_cast<std::size_t>(jr) * stride[us];
          const double theta = twist[ua] * m.k[static_cast<std::size_t>(partner[ua])];
          const double kr = wave(a, jr);
          v[us][static_cast<std::size_t>(K)] =
              detail::is_nyquist(jr, n[us]) ? cplx(std::cos(theta * kr)) : std::polar(1.0, theta * kr);
        }
      }
      for (std::size_t K0 = k0_begin; K0 < k0_end; ++K0) {
        const cplx p0 = m.value * v[0][K0];
        const std::size_t g0 = gi[0][K0];
        for (std::size_t K1 = 0; K1 < static_cast<std::size_t>(n[1]); ++K1) {
          const cplx p1 = p0 * v[1][K1];
          const std::size_t g1 = g0 + gi[1][K1];
          for (std::size_t K2 = 0; K2 < static_cast<std::size_t>(n[2]); ++K2) {
            const cplx p2 = p1 * v[2][K2];
            const std::size_t g2 = g1 + gi[2][K2];
            cplx* out = &H[K0 * stride[0] + K1 * stride[1] + K2 * stride[2]];
            const cplx* v3 = v[3].data();
            const std::size_t* gi3 = gi[3].data();
            for (std::size_t K3 = 0; K3 < static_cast<std::size_t>(n[3]); ++K3)
              out[K3] += p2 * v3[K3] * G[g2 + gi3[K3]];
          }
        }
      }
    }
  });
  return from_fourier_coefficients(spec, std::move(H));
}

/// Scalar Wigner function psi * conj(psi).
inline Field wigner_from_amplitude(const Field& psi, const StarOptions& options = {}) {
  return grid_star(psi, psi.conj(), options);
}

/// Four-component Wigner function sum_a psi_a * (gamma^0 psi^dagger)_a.
inline Field wigner_from_spinor(const std::array<Field, 4>& psi, const GammaRep& rep = standard_gamma_rep(),
                                const StarOptions& options = {}) {
  for (const auto& c : psi) psi[0].require_same(c);
  Field out(psi[0].spec());
  for (int a = 0; a < 4; ++a) {
    Field adj(psi[0].spec());
    bool any = false;
    for (int b = 0; b < 4; ++b) {
      const auto& e = rep.gamma[0](a, b);
      if (e.is_zero()) continue;
      adj += cplx(e.real().to_double(), e.imag().to_double()) * psi[static_cast<std::size_t>(b)].conj();
      any = true;
    }
    if (any) out += grid_star(psi[static_cast<std::size_t>(a)], adj, options);
  }
  return out;
}

struct KgTwoRouteReport {
  Field route_a;  // expanded stencil
  Field route_b;  // nested Bopp shifts
  double discrepancy = 0;  // max|A - B| / max|A|
  double residual = 0;     // max|(A - m^2) phi| / max|phi|
};

/// Applies P^mu P_mu to phi(q^0, ..., q^{r-1}) at fixed momenta p^mu in two
/// ways: the expanded form
///   g_mumu (p^mu)^2 - i p^mu d_mu - (1/4) g^mumu d_mu^2
/// with second-order spectral derivatives, and the nested Bopp form
///   g_mumu (p^mu - (i/2) g^mumu d_mu)(p^mu - (i/2) g^mumu d_mu)
/// with first-order ones.
inline KgTwoRouteReport kg_two_route_check(const Field& phi, const std::vector<double>& p, double mass,
                                           const MetricSignature& metric = {}) {
  const GridSpec& spec = phi.spec();
  if (static_cast<int>(p.size()) != spec.rank())
    throw DimensionMismatch("need one momentum per grid axis (" + std::to_string(spec.rank()) + ")");
  KgTwoRouteReport r{Field(spec), Field(spec), 0, 0};
  for (int mu = 0; mu < spec.rank(); ++mu) {
    const double g = metric[mu];
    const double pm = p[static_cast<std::size_t>(mu)];
    const Field d1 = fourier_derivative(phi, mu, 1);
    const Field d2 = fourier_derivative(phi, mu, 2);
    r.route_a += cplx(g * pm * pm) * phi;
    r.route_a += cplx(0, -pm) * d1;
    r.route_a += cplx(-0.25 * g) * d2;

    auto bopp = [&](const Field& x) { return cplx(pm) * x + cplx(0, -0.5 * g) * fourier_derivative(x, mu, 1); };
    r.route_b += cplx(g) * bopp(bopp(phi));
  }
  const double amax = r.route_a.max_abs();
  r.discrepancy = amax > 0 ? (r.route_a - r.route_b).max_abs() / amax : (r.route_a - r.route_b).max_abs();
  const double pmax = phi.max_abs();
  const double res = (r.route_a - cplx(mass * mass) * phi).max_abs();
  r.residual = pmax > 0 ? res / pmax : res;
  return r;
}

}  // namespace sdeq

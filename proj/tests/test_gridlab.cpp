#include "sdeq/field_io.hpp"
#include "sdeq/operator.hpp"
#include "sdeq/parser.hpp"
#include "sdeq/spectral.hpp"
#include "sdeq/star.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace sdeq;

namespace {

constexpr double kPi = std::numbers::pi;

GridSpec square(const std::string& a, const std::string& b, int n, double lo, double hi) {
  return GridSpec({{a, n, lo, hi, true}, {b, n, lo, hi, true}});
}

/// Smooth plateau equal to 1 for |x| well inside `edge`.
double window(double x, double edge = 12) { return 0.5 * (std::erf(x + edge) - std::erf(x - edge)); }

double max_diff_interior(const Field& a, const std::function<cplx(const std::array<double, 4>&)>& exact, double radius,
                         double* scale = nullptr) {
  double err = 0, mag = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto x = a.spec().coordinates(i);
    bool inside = true;
    for (int k = 0; k < a.spec().rank(); ++k) inside &= std::abs(x[static_cast<std::size_t>(k)]) <= radius;
    if (!inside) continue;
    cplx e = exact(x);
    err = std::max(err, std::abs(a[i] - e));
    mag = std::max(mag, std::abs(e));
  }
  if (scale) *scale = mag;
  return err;
}

Field random_field(const GridSpec& spec, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  return Field::sample(spec, [&](const std::array<double, 4>&) { return cplx(d(rng), d(rng)); });
}

}  // namespace

TEST(GridSpec, ValidationAndParsing) {
  GridSpec s = GridSpec::parse("q:8:-1:1,p:16:0:2:open");
  EXPECT_EQ(s.rank(), 2);
  EXPECT_EQ(s.size(), 128u);
  EXPECT_DOUBLE_EQ(s.axis(0).spacing(), 0.25);
  EXPECT_DOUBLE_EQ(s.axis(1).spacing(), 2.0 / 15);
  EXPECT_FALSE(s.axis(1).periodic);
  EXPECT_EQ(GridSpec::parse(s.to_string()), s);
  EXPECT_THROW(GridSpec::parse("q:3:0:1"), std::invalid_argument);
  EXPECT_THROW(GridSpec::parse("q:8:1:1"), std::invalid_argument);
  EXPECT_THROW(GridSpec::parse("q:8:0"), std::invalid_argument);
  EXPECT_THROW(GridSpec::parse("q:8x:0:1"), std::invalid_argument);
  EXPECT_THROW(GridSpec::parse("q:8:0:1,q:8:0:1"), std::invalid_argument);
  EXPECT_THROW(GridSpec::parse("a:4:0:1,b:4:0:1,c:4:0:1,d:4:0:1,e:4:0:1"), std::invalid_argument);
  EXPECT_THROW(s.axis(2), IndexOutOfRange);
}

TEST(GridSpec, BudgetIsEnforced) {
  EXPECT_THROW(GridSpec::cube({"a", "b", "c", "d"}, 64, 0, 1), std::length_error);
  EXPECT_THROW(GridSpec({{"a", 100, 0, 1, true}, {"b", 100, 0, 1, true}}, 5000), std::length_error);
  EXPECT_NO_THROW(GridSpec::cube({"a", "b", "c", "d"}, 32, 0, 1));
}

TEST(InnerProduct, UnitCell) {
  GridSpec s = square("q", "p", 16, 0, 1);
  Field one = Field::sample(s, [](const auto&) { return cplx(1); });
  EXPECT_NEAR(inner_product(one, one).real(), 1.0, 1e-15);
  GridSpec closed({{"q", 11, 0, 1, false}, {"p", 11, 0, 1, false}});
  Field one_c = Field::sample(closed, [](const auto&) { return cplx(1); });
  EXPECT_NEAR(integrate(one_c).real(), 1.0, 1e-15);
}

TEST(InnerProduct, ConjugateSymmetry) {
  GridSpec s = square("q", "p", 12, -1, 1);
  for (unsigned seed = 1; seed < 6; ++seed) {
    Field f = random_field(s, seed), g = random_field(s, seed + 100);
    cplx fg = inner_product(f, g), gf = inner_product(g, f);
    EXPECT_NEAR(std::abs(fg - std::conj(gf)), 0.0, 1e-12);
    EXPECT_GE(norm(f), 0.0);
  }
}

TEST(InnerProduct, GaussianNorm) {
  GridSpec s = square("q", "p", 128, -8, 8);
  Field f = Field::sample(s, [](const auto& x) { return cplx(std::exp(-x[0] * x[0] - x[1] * x[1])); });
  EXPECT_NEAR(norm(f) * norm(f), kPi / 2, 1e-10);
}

TEST(InnerProduct, SpecMismatchThrows) {
  Field a(square("q", "p", 8, 0, 1)), b(square("q", "p", 8, 0, 2));
  EXPECT_THROW(inner_product(a, b), DimensionMismatch);
  EXPECT_THROW(a + b, DimensionMismatch);
}

TEST(FourierDerivative, SineMode) {
  GridSpec s({{"q", 64, 0, 1, true}});
  Field f = Field::sample(s, [](const auto& x) { return cplx(std::sin(2 * kPi * x[0])); });
  Field d = fourier_derivative(f, 0);
  Field exact = Field::sample(s, [](const auto& x) { return cplx(2 * kPi * std::cos(2 * kPi * x[0])); });
  EXPECT_LE((d - exact).max_abs(), 1e-10);
}

TEST(FourierDerivative, ConstantGivesZero) {
  Field f = Field::sample(square("q", "p", 16, -2, 2), [](const auto&) { return cplx(3.5, -1); });
  EXPECT_LE(fourier_derivative(f, 0).max_abs(), 1e-14);
  EXPECT_LE(fourier_derivative(f, 1, 2).max_abs(), 1e-14);
}

TEST(FourierDerivative, GaussianSecondDerivative) {
  GridSpec s({{"q", 256, -8, 8, true}});
  Field f = Field::sample(s, [](const auto& x) { return cplx(std::exp(-x[0] * x[0])); });
  Field exact =
      Field::sample(s, [](const auto& x) { return cplx((4 * x[0] * x[0] - 2) * std::exp(-x[0] * x[0])); });
  EXPECT_LE((fourier_derivative(f, 0, 2) - exact).max_abs(), 1e-8);
}

TEST(FourierDerivative, MixedPartialsCommute) {
  GridSpec s({{"a", 48, -6, 6, true}, {"b", 40, -6, 6, true}, {"c", 8, 0, 1, true}});
  Field f = Field::sample(s, [](const auto& x) {
    return cplx(std::exp(-x[0] * x[0] - 0.5 * x[1] * x[1] + x[0] * x[1] / 3) * std::cos(2 * kPi * x[2]),
                std::sin(x[0]) * std::exp(-x[1] * x[1]));
  });
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      Field ab = fourier_derivative(fourier_derivative(f, a), b);
      Field ba = fourier_derivative(fourier_derivative(f, b), a);
      EXPECT_LE((ab - ba).max_abs(), 1e-10);
    }
}

TEST(FourierDerivative, Errors) {
  Field f(square("q", "p", 8, 0, 1));
  EXPECT_THROW(fourier_derivative(f, 2), IndexOutOfRange);
  EXPECT_THROW(fourier_derivative(f, 0, 3), std::invalid_argument);
}

TEST(GridStar, UnitLeftFactor) {
  GridSpec s = square("q", "p", 32, -6, 6);
  Field one = Field::sample(s, [](const auto&) { return cplx(1); });
  Field g = Field::sample(s, [](const auto& x) { return cplx(std::exp(-x[0] * x[0] - (x[1] - 1) * (x[1] - 1)), x[0]); });
  EXPECT_LE((grid_star(one, g) - g).max_abs(), 1e-13);
  EXPECT_LE((grid_star(g, one) - g).max_abs(), 1e-13);
}

TEST(GridStar, Bilinear) {
  GridSpec s = square("q", "p", 16, -4, 4);
  Field f = random_field(s, 1), g = random_field(s, 2), h = random_field(s, 3);
  cplx a(0.5, -2);
  Field lhs = grid_star(f + a * h, g);
  Field rhs = grid_star(f, g) + a * grid_star(h, g);
  EXPECT_LE((lhs - rhs).max_abs(), 1e-12 * rhs.max_abs());
}

TEST(GridStar, UnpairedAxisAndMismatch) {
  GridSpec s = square("q", "z", 8, 0, 1);
  Field f(s);
  EXPECT_THROW(grid_star(f, f), std::invalid_argument);
  Field g(square("q", "p", 8, 0, 1)), h(square("q", "p", 8, 0, 2));
  EXPECT_THROW(grid_star(g, h), DimensionMismatch);
}

TEST(GridStar, PairingByName) {
  auto pairs = conjugate_pairs(GridSpec::parse("x:4:0:1,q0:4:0:1,px:4:0:1,p0:4:0:1"));
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].q, 0);
  EXPECT_EQ(pairs[0].p, 2);
  EXPECT_EQ(pairs[1].q, 1);
  EXPECT_EQ(pairs[1].p, 3);
}

TEST(GridStar, WindowedPolynomialsMatchExactProduct) {
  GridSpec s = square("q", "p", 160, -20, 20);
  auto win = [](const std::array<double, 4>& x) { return window(x[0]) * window(x[1]); };
  Field q = Field::sample(s, [&](const auto& x) { return cplx(x[0] * win(x)); });
  Field p = Field::sample(s, [&](const auto& x) { return cplx(x[1] * win(x)); });
  Field qp = grid_star(q, p);
  PhasePolynomial exact = moyal_star(parse_expression("q0", 1), parse_expression("p0", 1));
  auto oracle = [&](const std::array<double, 4>& x) {
    std::array<double, 8> pt{x[0], 0, 0, 0, x[1], 0, 0, 0};
    return evaluate(exact, pt);
  };
  double scale = 0;
  double err = max_diff_interior(qp, oracle, 4, &scale);
  EXPECT_LE(err, 1e-6 * scale);

  // Degree three: q^2 * (q p) with a second-order term in the series.
  Field q2 = Field::sample(s, [&](const auto& x) { return cplx(x[0] * x[0] * win(x)); });
  Field qpw = Field::sample(s, [&](const auto& x) { return cplx(x[0] * x[1] * win(x)); });
  PhasePolynomial exact3 = moyal_star(parse_expression("q0^2", 1), parse_expression("q0*p0", 1));
  auto oracle3 = [&](const std::array<double, 4>& x) {
    std::array<double, 8> pt{x[0], 0, 0, 0, x[1], 0, 0, 0};
    return evaluate(exact3, pt);
  };
  err = max_diff_interior(grid_star(q2, qpw), oracle3, 4, &scale);
  EXPECT_GT(scale, 1.0);
  EXPECT_LE(err, 1e-6 * scale);
}

TEST(GridStar, GaussianIdempotent) {
  // 2 exp(-q^2 - p^2) is a star projector.
  GridSpec s = square("q", "p", 64, -8, 8);
  Field f = Field::sample(s, [](const auto& x) { return cplx(2 * std::exp(-x[0] * x[0] - x[1] * x[1])); });
  EXPECT_LE((grid_star(f, f) - f).max_abs(), 1e-10);
}

TEST(GridStar, ShiftedGaussiansAgainstIntegralKernel) {
  // f * g (x, p) = pi^-2 int f(x', p') g(x'', p'')
  //   exp(-2i [p (x' - x'') + p' (x'' - x) + p'' (x - x')]) dx' dp' dx'' dp'',
  // evaluated by dense trapezoid quadrature.
  const double a = 0.5, b = -0.3;
  auto fx = [&](double x) { return 2 * std::exp(-(x - a) * (x - a)); };
  auto fp = [&](double p) { return std::exp(-p * p); };
  auto gx = [&](double x) { return std::exp(-x * x); };
  auto gp = [&](double p) { return std::exp(-(p - b) * (p - b)); };
  GridSpec s = square("q", "p", 32, -6, 6);
  Field f = Field::sample(s, [&](const auto& x) { return cplx(fx(x[0]) * fp(x[1])); });
  Field g = Field::sample(s, [&](const auto& x) { return cplx(gx(x[0]) * gp(x[1])); });
  Field star = grid_star(f, g);

  const int m = 96;
  const double lo = -7, h = 14.0 / (m - 1);
  std::vector<double> t(m);
  for (int k = 0; k < m; ++k) t[k] = lo + k * h;
  double worst = 0;
  for (std::size_t i = 0; i < star.size(); ++i) {
    auto xo = s.coordinates(i);
    const double x = xo[0], p = xo[1];
    // A(x'') = int fp(p') e^{-2i p' (x'' - x)} dp', B(x') = int gp(p'') e^{-2i p'' (x - x')} dp''.
    std::vector<cplx> A(m), B(m);
    for (int k = 0; k < m; ++k) {
      cplx sa = 0, sb = 0;
      for (int l = 0; l < m; ++l) {
        sa += fp(t[l]) * std::exp(cplx(0, -2 * t[l] * (t[k] - x)));
        sb += gp(t[l]) * std::exp(cplx(0, -2 * t[l] * (x - t[k])));
      }
      A[k] = sa * h;
      B[k] = sb * h;
    }
    cplx total = 0;
    for (int k1 = 0; k1 < m; ++k1)      // x'
      for (int k2 = 0; k2 < m; ++k2)    // x''
        total += fx(t[k1]) * gx(t[k2]) * B[k1] * A[k2] * std::exp(cplx(0, -2 * p * (t[k1] - t[k2])));
    total *= h * h / (kPi * kPi);
    worst = std::max(worst, std::abs(total - star[i]));
  }
  EXPECT_LE(worst, 1e-6 * star.max_abs());
}

TEST(Wigner, ConstantAmplitude) {
  GridSpec s = square("q", "p", 16, -3, 3);
  cplx c(0.6, -0.8);
  Field psi = Field::sample(s, [&](const auto&) { return c; });
  Field w = wigner_from_amplitude(psi);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(std::abs(w[i] - std::norm(c)), 0.0, 1e-14);
}

TEST(Wigner, RealGaussianIsRealAndTraceMatchesNorm) {
  GridSpec s = square("q", "p", 64, -8, 8);
  Field psi = Field::sample(s, [](const auto& x) {
    return cplx(std::exp(-0.7 * (x[0] - 0.4) * (x[0] - 0.4) - 1.3 * x[1] * x[1] + 0.2 * x[0] * x[1]));
  });
  Field w = wigner_from_amplitude(psi);
  EXPECT_LE(w.max_abs_imag(), 1e-8 * w.max_abs());
  double n2 = inner_product(psi, psi).real();
  EXPECT_LE(std::abs(integrate(w).real() - n2), 1e-6 * n2);
}

TEST(Wigner, ComplexAmplitudeTrace) {
  GridSpec s = square("q", "p", 64, -8, 8);
  Field psi = Field::sample(s, [](const auto& x) {
    return std::exp(cplx(-x[0] * x[0] - 0.5 * x[1] * x[1], 1.5 * x[0] - 0.3 * x[1] * x[1]));
  });
  Field w = wigner_from_amplitude(psi);
  EXPECT_LE(w.max_abs_imag(), 1e-8 * w.max_abs());
  double n2 = inner_product(psi, psi).real();
  EXPECT_LE(std::abs(integrate(w).real() - n2), 1e-6 * n2);
}

TEST(Wigner, ConstantSpinorUsesDiracAdjoint) {
  GridSpec s = square("q", "p", 8, -1, 1);
  std::array<cplx, 4> c{cplx(1, 0), cplx(0, 2), cplx(0.5, 0), cplx(1, 1)};
  std::array<Field, 4> psi;
  for (int a = 0; a < 4; ++a) psi[a] = Field::sample(s, [&](const auto&) { return c[a]; });
  Field w = wigner_from_spinor(psi);
  double expected = std::norm(c[0]) + std::norm(c[1]) - std::norm(c[2]) - std::norm(c[3]);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(std::abs(w[i] - expected), 0.0, 1e-13);
}

TEST(KleinGordon, ZeroField) {
  Field phi(square("q0", "q1", 16, -4, 4));
  auto r = kg_two_route_check(phi, {1.0, 0.5}, 1.0);
  EXPECT_EQ(r.route_a.max_abs(), 0.0);
  EXPECT_EQ(r.route_b.max_abs(), 0.0);
  EXPECT_THROW(kg_two_route_check(phi, {1.0}, 1.0), DimensionMismatch);
}

TEST(KleinGordon, GaussianRoutesAgreeAndConverge) {
  auto run = [](int n) {
    GridSpec s = square("q0", "q1", n, -8, 8);
    Field phi = Field::sample(s, [](const auto& x) { return cplx(std::exp(-2 * (x[0] * x[0] + x[1] * x[1]))); });
    return kg_two_route_check(phi, {1.2, -0.7}, 0.5).discrepancy;
  };
  double coarse = run(64), fine = run(128);
  EXPECT_LE(fine, 1e-8);
  EXPECT_LE(fine * 10, coarse);
}

TEST(KleinGordon, WindowedPolynomialMatchesExactOperator) {
  GridSpec s = square("q0", "q1", 160, -20, 20);
  const std::vector<double> p{0.8, -1.1};
  Field phi = Field::sample(s, [](const auto& x) { return cplx(x[0] * x[1] * window(x[0]) * window(x[1])); });
  auto r = kg_two_route_check(phi, p, 0.0);
  OperatorExpr p2;
  for (int mu = 0; mu < 2; ++mu) p2 += bopp_momentum(mu) * lowered_momentum(mu);
  PhasePolynomial exact = apply_operator(p2, parse_expression("q0*q1", 2));
  auto oracle = [&](const std::array<double, 4>& x) {
    std::array<double, 8> pt{x[0], x[1], 0, 0, p[0], p[1], 0, 0};
    return evaluate(exact, pt);
  };
  double scale = 0;
  double err_a = max_diff_interior(r.route_a, oracle, 4, &scale);
  double err_b = max_diff_interior(r.route_b, oracle, 4);
  EXPECT_GT(scale, 1.0);
  EXPECT_LE(err_a, 1e-6 * scale);
  EXPECT_LE(err_b, 1e-6 * scale);
}

TEST(FieldIo, CsvLayout) {
  GridSpec s({{"q", 4, 0, 1, true}, {"p", 4, 0, 1, true}});
  Field f = Field::sample(s, [](const auto& x) { return cplx(x[0], x[1]); });
  std::ostringstream os;
  write_csv(os, f);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "q,p,re,im");
  std::getline(is, line);
  EXPECT_EQ(line, "0,0,0,0");
  std::getline(is, line);
  EXPECT_EQ(line, "0,0.25,0,0.25");
  int rows = 2;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 16);
}

TEST(FieldIo, BinaryRoundTrip) {
  GridSpec s({{"a0", 6, -1.5, 2, true}, {"a1", 5, 0, 3, true}, {"a2", 4, -1, 1, true}});
  Field f = random_field(s, 42);
  std::stringstream ss;
  write_binary(ss, f);
  EXPECT_EQ(ss.str().size(), 4u + 2 + 2 + 3 * 20 + f.size() * 16);
  EXPECT_EQ(ss.str().substr(0, 4), "SDEQ");
  EXPECT_EQ(static_cast<unsigned char>(ss.str()[4]), 1u);
  Field g = read_binary(ss);
  EXPECT_EQ(g.spec(), s);
  EXPECT_EQ(g.values(), f.values());
}

TEST(FieldIo, BinaryRejectsGarbage) {
  std::istringstream bad("NOPE");
  EXPECT_THROW(read_binary(bad), std::runtime_error);
  std::istringstream truncated(std::string("SDEQ\x01\x00\x01\x00", 8));
  EXPECT_THROW(read_binary(truncated), std::runtime_error);
}

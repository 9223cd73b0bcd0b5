#include "sdeq/operator.hpp"
#include "sdeq/parser.hpp"
#include "sdeq/star.hpp"
#include "sdeq/symplectic.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sdeq;

namespace {

PhasePolynomial P(const char* text) { return parse_expression(text); }

const MetricSignature kMinus = MetricSignature::mostly_minus();
const MetricSignature kPlus = MetricSignature::mostly_plus();

PhasePolynomial random_poly(std::mt19937& rng, int max_degree, int terms) {
  std::uniform_int_distribution<int> coef(-3, 3), gen(0, 7), deg(0, max_degree);
  PhasePolynomial f;
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    int d = deg(rng);
    for (int k = 0; k < d; ++k) ++m.exp[static_cast<std::size_t>(gen(rng))];
    f.add_term(m, ExactComplex(Rational(coef(rng), 1 + t % 2), Rational(coef(rng))));
  }
  return f;
}

}  // namespace

TEST(MoyalStar, CanonicalPairs) {
  EXPECT_EQ(moyal_star(P("q0"), P("p0")), P("q0*p0 + i/2"));
  EXPECT_EQ(moyal_star(P("q1"), P("p1")), P("q1*p1 - i/2"));
  EXPECT_EQ(moyal_star(P("q1"), P("p1"), kPlus), P("q1*p1 + i/2"));
  EXPECT_EQ(moyal_star(P("q0"), P("p0")) - moyal_star(P("p0"), P("q0")), P("i"));
}

TEST(MoyalStar, ConstantFactorIsPointwise) {
  std::mt19937 rng(1);
  for (int t = 0; t < 20; ++t) {
    PhasePolynomial g = random_poly(rng, 4, 5);
    PhasePolynomial c = P("3/7 - 2*i");
    EXPECT_EQ(moyal_star(c, g), c * g);
    EXPECT_EQ(moyal_star(g, c), c * g);
  }
}

TEST(MoyalStar, HigherOrderTermsTerminate) {
  // q0^2 * p0^2 expands to second order: q0^2 p0^2 + 2i q0 p0 - 1/2.
  EXPECT_EQ(moyal_star(P("q0^2"), P("p0^2")), P("q0^2*p0^2 + 2*i*q0*p0 - 1/2"));
}

TEST(MoyalStar, DimensionMismatch) {
  EXPECT_THROW(moyal_star(parse_expression("q0", 1), parse_expression("q0", 2)), DimensionMismatch);
}

TEST(MoyalStar, AssociativityOnRandomPolynomials) {
  std::mt19937 rng(2024);
  for (const auto& metric : {kMinus, kPlus}) {
    for (int t = 0; t < 200; ++t) {
      PhasePolynomial f = random_poly(rng, 4, 3), g = random_poly(rng, 4, 3), h = random_poly(rng, 4, 3);
      EXPECT_EQ(moyal_star(moyal_star(f, g, metric), h, metric), moyal_star(f, moyal_star(g, h, metric), metric))
          << to_string(f) << " | " << to_string(g) << " | " << to_string(h);
    }
  }
}

TEST(MoyalStar, BracketIsPoissonForQuadratics) {
  std::mt19937 rng(99);
  for (const auto& metric : {kMinus, kPlus}) {
    for (int t = 0; t < 100; ++t) {
      PhasePolynomial f = random_poly(rng, 2, 4), g = random_poly(rng, 2, 4);
      PhasePolynomial moyal = moyal_star(f, g, metric) - moyal_star(g, f, metric);
      EXPECT_EQ(moyal, ExactComplex::i() * poisson_bracket(f, g, metric));
    }
  }
}

TEST(Bopp, Examples) {
  EXPECT_EQ(apply_operator(bopp_momentum(0), P("1")), P("p0"));
  EXPECT_EQ(apply_operator(bopp_momentum(0), P("q0")), P("p0*q0 - i/2"));
  EXPECT_EQ(apply_operator(bopp_position(1), P("p1")), P("q1*p1 - i/2"));
  EXPECT_THROW(bopp_momentum(4), IndexOutOfRange);
  EXPECT_THROW(bopp_position(-1), IndexOutOfRange);
}

TEST(Bopp, AgreesWithLeftStarMultiplication) {
  for (const auto& metric : {kMinus, kPlus}) {
    for (const auto& f : monomial_basis(5)) {
      for (int mu = 0; mu < 4; ++mu) {
        EXPECT_EQ(apply_operator(bopp_momentum(mu, metric), f),
                  moyal_star(PhasePolynomial::generator(p_gen(mu)), f, metric));
        EXPECT_EQ(apply_operator(bopp_position(mu, metric), f),
                  moyal_star(PhasePolynomial::generator(q_gen(mu)), f, metric));
      }
    }
  }
}

TEST(OperatorExpr, ApplicationExamples) {
  PhasePolynomial f = P("q0*p2 + 3*q3^2");
  EXPECT_EQ(apply_operator(OperatorExpr::identity(), f), f);
  EXPECT_TRUE(apply_operator(OperatorExpr::zero(), f).is_zero());
  EXPECT_EQ(apply_operator(bopp_momentum(0) * bopp_momentum(0), P("1")), P("p0^2"));
  EXPECT_EQ(apply_operator(ExactComplex(2) * bopp_position(1), P("p1")), P("2*q1*p1 - i"));
  EXPECT_EQ(apply_operator(OperatorExpr::multiply_by(P("q2")), f), P("q2") * f);
}

TEST(OperatorExpr, ProductAppliesRightToLeft) {
  OperatorExpr a = bopp_momentum(0), b = OperatorExpr::multiply_by(P("q0"));
  // (a b) 1 = P0 (q0) = p0 q0 - i/2, while (b a) 1 = q0 p0.
  EXPECT_EQ(apply_operator(a * b, P("1")), P("p0*q0 - i/2"));
  EXPECT_EQ(apply_operator(b * a, P("1")), P("q0*p0"));
}

TEST(Commutator, CanonicalRelation) {
  for (const auto& metric : {kMinus, kPlus}) {
    for (const auto& f : monomial_basis(3)) {
      for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
          PhasePolynomial expected =
              mu == nu ? ExactComplex(Rational(0), Rational(metric[mu])) * f : PhasePolynomial();
          EXPECT_EQ(commutator_on(bopp_position(mu, metric), bopp_momentum(nu, metric), f), expected);
          EXPECT_TRUE(commutator_on(bopp_momentum(mu, metric), bopp_momentum(nu, metric), f).is_zero());
          EXPECT_TRUE(commutator_on(bopp_position(mu, metric), bopp_position(nu, metric), f).is_zero());
        }
      }
    }
  }
}

TEST(Commutator, SelfCommutatorVanishes) {
  OperatorExpr a = bopp_momentum(2) * bopp_position(2) + OperatorExpr::multiply_by(P("q1*p3"));
  for (const auto& f : monomial_basis(2)) EXPECT_TRUE(commutator_on(a, a, f).is_zero());
}

TEST(MonomialBasis, Counts) {
  EXPECT_EQ(monomial_basis(0).size(), 1u);
  EXPECT_EQ(monomial_basis(1).size(), 9u);
  EXPECT_EQ(monomial_basis(2).size(), 45u);
  EXPECT_EQ(monomial_basis(2, 2).size(), 15u);
}

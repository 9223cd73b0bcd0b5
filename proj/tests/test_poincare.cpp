#include "sdeq/parser.hpp"
#include "sdeq/poincare.hpp"

#include <gtest/gtest.h>

using namespace sdeq;

namespace {

PhasePolynomial P(const char* text) { return parse_expression(text); }

const MetricSignature kMinus = MetricSignature::mostly_minus();
const MetricSignature kPlus = MetricSignature::mostly_plus();

}  // namespace

TEST(LeviCivita, Convention) {
  EXPECT_EQ(levi_civita(0, 1, 2, 3), 1);
  EXPECT_EQ(levi_civita(1, 0, 2, 3), -1);
  EXPECT_EQ(levi_civita(1, 2, 3, 0), -1);
  EXPECT_EQ(levi_civita(0, 0, 2, 3), 0);
}

TEST(AngularGenerator, Examples) {
  // Lowered components under (+,-,-,-): q_0 = q0, p_1 = -p1, q_1 = -q1, p_0 = p0.
  EXPECT_EQ(apply_operator(angular_generator(0, 1), P("1")), P("-q0*p1 + q1*p0"));
  // q_1 p_2 - q_2 p_1 with both lowered spatial signs cancelling.
  EXPECT_EQ(apply_operator(angular_generator(1, 2), P("1")), P("q1*p2 - q2*p1"));
  for (int mu = 0; mu < 4; ++mu) EXPECT_TRUE(apply_operator(angular_generator(mu, mu), P("q0*p3")).is_zero());
  EXPECT_THROW(angular_generator(0, 4), IndexOutOfRange);
}

TEST(AngularGenerator, Antisymmetry) {
  for (const auto& metric : {kMinus, kPlus}) {
    AlgebraReport r = check_antisymmetry(3, metric);
    EXPECT_TRUE(r.pass()) << to_json(r).dump();
    EXPECT_GT(r.records.size(), 0u);
  }
}

TEST(Algebra, FullCheckBothMetrics) {
  for (const auto& metric : {kMinus, kPlus}) {
    AlgebraReport r = check_poincare_algebra(3, metric);
    EXPECT_TRUE(r.pass()) << metric.to_string() << ": " << to_json(r).dump();
    EXPECT_EQ(r.violations(), 0u);
  }
}

TEST(Algebra, MomentaCommuteOnExample) {
  PhasePolynomial f = P("q0*p1");
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      EXPECT_TRUE(commutator_on(lowered_momentum(mu), lowered_momentum(nu), f).is_zero());
}

TEST(Algebra, ReportDetectsABrokenRelation) {
  // [Q_0, P_0] is i, so treating it as zero must produce violations.
  AlgebraReport r;
  for (const auto& f : monomial_basis(1))
    r.records.push_back({"broken", to_string(f), commutator_on(lowered_position(0), lowered_momentum(0), f)});
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.violations(), 9u);
  auto j = to_json(r);
  EXPECT_EQ(j["violations"], 9);
  bool has_constant = false;
  for (const auto& rec : j["records"]) has_constant |= rec["residual"] == "i";
  EXPECT_TRUE(has_constant);
}

TEST(Algebra, CanonicalCommutator) {
  for (const auto& metric : {kMinus, kPlus}) EXPECT_TRUE(check_canonical_commutator(3, metric).pass());
}

TEST(PauliLubanski, Transversality) {
  for (const auto& metric : {kMinus, kPlus}) {
    AlgebraReport r = check_pauli_lubanski(2, metric);
    EXPECT_TRUE(r.pass()) << to_json(r).dump();
  }
  OperatorExpr contraction;
  for (int mu = 0; mu < 4; ++mu)
    contraction += ExactComplex(kMinus[mu]) * (pauli_lubanski(mu) * bopp_momentum(mu));
  EXPECT_TRUE(apply_operator(contraction, P("1")).is_zero());
}

TEST(PauliLubanski, W0OnConstant) {
  // W_0 1 = (1/2) eps_{0 nu rho sigma} M^{nu sigma} p^rho, expanded by hand:
  // the spatial triple product p . (q x p) vanishes, leaving zero.
  PhasePolynomial w0 = apply_operator(pauli_lubanski(0), P("1"));
  PhasePolynomial expected;
  for (int nu = 1; nu < 4; ++nu)
    for (int rho = 1; rho < 4; ++rho)
      for (int sigma = 1; sigma < 4; ++sigma) {
        int eps = levi_civita(0, nu, rho, sigma);
        if (eps == 0) continue;
        PhasePolynomial m = PhasePolynomial::generator(q_gen(nu)) * PhasePolynomial::generator(p_gen(sigma)) -
                            PhasePolynomial::generator(q_gen(sigma)) * PhasePolynomial::generator(p_gen(nu));
        expected += ExactComplex(Rational(eps, 2)) * (m * PhasePolynomial::generator(p_gen(rho)));
      }
  EXPECT_EQ(w0, expected);
  EXPECT_TRUE(w0.is_zero());
}

TEST(PauliLubanski, CommutesWithMomentum) {
  for (const auto& f : monomial_basis(2))
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        EXPECT_TRUE(commutator_on(pauli_lubanski(mu), lowered_momentum(nu), f).is_zero());
}

TEST(Casimirs, Examples) {
  EXPECT_TRUE(commutator_on(casimir_p2(), angular_generator(0, 1), P("q0")).is_zero());
  for (const auto& f : monomial_basis(2)) EXPECT_TRUE(commutator_on(casimir_p2(), lowered_momentum(2), f).is_zero());
  EXPECT_TRUE(commutator_on(casimir_w2(), lowered_momentum(0), P("1")).is_zero());
  EXPECT_EQ(apply_operator(casimir_p2(), P("1")), P("p0^2 - p1^2 - p2^2 - p3^2"));
}

TEST(Casimirs, FullCheckBothMetrics) {
  for (const auto& metric : {kMinus, kPlus}) {
    AlgebraReport r = check_casimirs(2, 1, metric);
    EXPECT_TRUE(r.pass()) << to_json(r).dump();
  }
}

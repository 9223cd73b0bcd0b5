#pragma once

#include "sdeq/metric.hpp"
#include "sdeq/operator.hpp"
#include "sdeq/parser.hpp"

#include <json.hpp>

#include <array>
#include <string>
#include <vector>

namespace sdeq {

/// Levi-Civita symbol with lowered indices, epsilon_{0123} = +1.
inline int levi_civita(int a, int b, int c, int d) {
  std::array<int, 4> idx{a, b, c, d};
  for (int k = 0; k < 4; ++k)
    for (int j = k + 1; j < 4; ++j)
      if (idx[static_cast<std::size_t>(k)] == idx[static_cast<std::size_t>(j)]) return 0;
  int sign = 1;
  for (int k = 0; k < 4; ++k)
    for (int j = k + 1; j < 4; ++j)
      if (idx[static_cast<std::size_t>(k)] > idx[static_cast<std::size_t>(j)]) sign = -sign;
  return sign;
}

/// P_mu = g_{mu mu} P^mu.
inline OperatorExpr lowered_momentum(int mu, const MetricSignature& metric = {}) {
  return ExactComplex(metric[mu]) * bopp_momentum(mu, metric);
}

/// Q_mu = g_{mu mu} Q^mu.
inline OperatorExpr lowered_position(int mu, const MetricSignature& metric = {}) {
  return ExactComplex(metric[mu]) * bopp_position(mu, metric);
}

/// Lorentz generator M_{mu nu} = Q_mu P_nu - Q_nu P_mu (lower indices).
inline OperatorExpr angular_generator(int mu, int nu, const MetricSignature& metric = {}) {
  check_index(mu);
  check_index(nu);
  if (mu == nu) return OperatorExpr::zero();
  return lowered_position(mu, metric) * lowered_momentum(nu, metric) -
         lowered_position(nu, metric) * lowered_momentum(mu, metric);
}

/// M^{mu nu} = g^{mu mu} g^{nu nu} M_{mu nu}.
inline OperatorExpr raised_angular_generator(int mu, int nu, const MetricSignature& metric = {}) {
  return ExactComplex(metric[mu] * metric[nu]) * angular_generator(mu, nu, metric);
}

/// Pauli-Lubanski vector W_mu = (1/2) epsilon_{mu nu rho sigma} M^{nu sigma} P^rho.
inline OperatorExpr pauli_lubanski(int mu, const MetricSignature& metric = {}) {
  check_index(mu);
  OperatorExpr w;
  for (int nu = 0; nu < 4; ++nu)
    for (int rho = 0; rho < 4; ++rho)
      for (int sigma = 0; sigma < 4; ++sigma) {
        int eps = levi_civita(mu, nu, rho, sigma);
        if (eps == 0) continue;
        w += ExactComplex(Rational(eps, 2)) *
             (raised_angular_generator(nu, sigma, metric) * bopp_momentum(rho, metric));
      }
  return w;
}

/// P^2 = P^mu P_mu.
inline OperatorExpr casimir_p2(const MetricSignature& metric = {}) {
  OperatorExpr r;
  for (int mu = 0; mu < 4; ++mu) r += bopp_momentum(mu, metric) * lowered_momentum(mu, metric);
  return r;
}

/// W^2 = W^mu W_mu.
inline OperatorExpr casimir_w2(const MetricSignature& metric = {}) {
  OperatorExpr r;
  for (int mu = 0; mu < 4; ++mu) {
    OperatorExpr w = pauli_lubanski(mu, metric);
    r += ExactComplex(metric[mu]) * (w * w);
  }
  return r;
}

struct AlgebraRecord {
  std::string relation;
  std::string monomial;
  PhasePolynomial residual;
};

/// Outcome of an exact operator-identity check over a monomial basis.
struct AlgebraReport {
  std::vector<AlgebraRecord> records;

  bool pass() const {
    for (const auto& r : records)
      if (!r.residual.is_zero()) return false;
    return true;
  }
  std::size_t violations() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.residual.is_zero() ? 0 : 1;
    return n;
  }
  void append(const AlgebraReport& o) { records.insert(records.end(), o.records.begin(), o.records.end()); }
};

/// Serialises a report. By default only violating records are listed.
inline nlohmann::json to_json(const AlgebraReport& report, bool include_all = false) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) {
    if (!include_all && r.residual.is_zero()) continue;
    records.push_back({{"relation", r.relation},
                       {"monomial", r.monomial},
                       {"residual", to_string(r.residual)},
                       {"pass", r.residual.is_zero()}});
  }
  return {{"pass", report.pass()},
          {"checked", report.records.size()},
          {"violations", report.violations()},
          {"records", records}};
}

namespace detail {

inline std::string relation_id(const char* family, std::initializer_list<int> idx) {
  std::string s = family;
  s += '[';
  bool first = true;
  for (int i : idx) {
    if (!first) s += ',';
    s += std::to_string(i);
    first = false;
  }
  return s + ']';
}

inline int pair_index(int mu, int nu) { return 4 * mu + nu; }

}  // namespace detail

/// Checks the Poincare algebra generated by M_{mu nu} and P_mu:
///
///   [M_{mu nu}, P_sigma]     = i (g_{mu sigma} P_nu - g_{nu sigma} P_mu)
///   [P_mu, P_nu]             = 0
///   [M_{mu nu}, M_{sigma rho}] = -i (g_{mu rho} M_{nu sigma} - g_{nu rho} M_{mu sigma}
///                                  + g_{mu sigma} M_{rho nu} - g_{nu sigma} M_{rho mu})
///
/// for every index combination on every monomial of degree <= max_degree.
/// The sign of the first relation is the one fixed by [Q_mu, P_nu] = i g_{mu nu}.
/// Operator actions on each basis monomial are computed once and reused.
inline AlgebraReport check_poincare_algebra(int max_degree, const MetricSignature& metric = {}) {
  if (max_degree < 1) throw std::invalid_argument("max_degree must be >= 1");
  std::array<OperatorExpr, 4> P;
  std::array<OperatorExpr, 16> M;
  for (int mu = 0; mu < 4; ++mu) P[static_cast<std::size_t>(mu)] = lowered_momentum(mu, metric);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      M[static_cast<std::size_t>(detail::pair_index(mu, nu))] = angular_generator(mu, nu, metric);

  const ExactComplex i = ExactComplex::i();
  AlgebraReport report;
  for (const auto& f : monomial_basis(max_degree)) {
    const std::string mono = to_string(f);
    std::array<PhasePolynomial, 4> Pf;
    std::array<PhasePolynomial, 16> Mf;
    for (std::size_t a = 0; a < 4; ++a) Pf[a] = P[a].apply(f);
    for (std::size_t a = 0; a < 16; ++a) Mf[a] = M[a].apply(f);
    auto g = [&](int a, int b) { return ExactComplex(metric.diag(a, b)); };
    auto Pm = [&](int a) -> const PhasePolynomial& { return Pf[static_cast<std::size_t>(a)]; };
    auto Mm = [&](int a, int b) -> const PhasePolynomial& {
      return Mf[static_cast<std::size_t>(detail::pair_index(a, b))];
    };

    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        const auto& Mop = M[static_cast<std::size_t>(detail::pair_index(mu, nu))];
        for (int sg = 0; sg < 4; ++sg) {
          PhasePolynomial lhs = Mop.apply(Pm(sg)) - P[static_cast<std::size_t>(sg)].apply(Mm(mu, nu));
          PhasePolynomial rhs = i * (g(mu, sg) * Pm(nu) - g(nu, sg) * Pm(mu));
          report.records.push_back({detail::relation_id("MP", {mu, nu, sg}), mono, lhs - rhs});
        }
      }

    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        PhasePolynomial lhs = P[static_cast<std::size_t>(mu)].apply(Pm(nu)) -
                              P[static_cast<std::size_t>(nu)].apply(Pm(mu));
        report.records.push_back({detail::relation_id("PP", {mu, nu}), mono, lhs});
      }

    // MMf[a][b] = M_a (M_b f)
    std::vector<PhasePolynomial> MMf(256);
    for (std::size_t a = 0; a < 16; ++a)
      for (std::size_t b = 0; b < 16; ++b) MMf[16 * a + b] = M[a].apply(Mf[b]);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        for (int sg = 0; sg < 4; ++sg)
          for (int rh = 0; rh < 4; ++rh) {
            auto a = static_cast<std::size_t>(detail::pair_index(mu, nu));
            auto b = static_cast<std::size_t>(detail::pair_index(sg, rh));
            PhasePolynomial lhs = MMf[16 * a + b] - MMf[16 * b + a];
            PhasePolynomial rhs = ExactComplex(-1) * i *
                                  (g(mu, rh) * Mm(nu, sg) - g(nu, rh) * Mm(mu, sg) + g(mu, sg) * Mm(rh, nu) -
                                   g(nu, sg) * Mm(rh, mu));
            report.records.push_back({detail::relation_id("MM", {mu, nu, sg, rh}), mono, lhs - rhs});
          }
  }
  return report;
}

/// [Q^mu, P^nu] - i g^{mu nu} on every monomial of degree <= max_degree.
inline AlgebraReport check_canonical_commutator(int max_degree, const MetricSignature& metric = {}) {
  AlgebraReport report;
  const ExactComplex i = ExactComplex::i();
  for (const auto& f : monomial_basis(max_degree)) {
    const std::string mono = to_string(f);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        PhasePolynomial r = commutator_on(bopp_position(mu, metric), bopp_momentum(nu, metric), f) -
                            (i * ExactComplex(metric.diag(mu, nu))) * f;
        report.records.push_back({detail::relation_id("QP", {mu, nu}), mono, r});
      }
  }
  return report;
}

/// M_{mu nu} + M_{nu mu} = 0 as operators on the monomial basis.
inline AlgebraReport check_antisymmetry(int max_degree, const MetricSignature& metric = {}) {
  AlgebraReport report;
  for (const auto& f : monomial_basis(max_degree)) {
    const std::string mono = to_string(f);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        PhasePolynomial r = angular_generator(mu, nu, metric).apply(f) + angular_generator(nu, mu, metric).apply(f);
        report.records.push_back({detail::relation_id("M+M^T", {mu, nu}), mono, r});
      }
  }
  return report;
}

/// W^mu P_mu = 0 and [W_mu, P_nu] = 0 on the monomial basis.
inline AlgebraReport check_pauli_lubanski(int max_degree, const MetricSignature& metric = {}) {
  AlgebraReport report;
  std::array<OperatorExpr, 4> W;
  for (int mu = 0; mu < 4; ++mu) W[static_cast<std::size_t>(mu)] = pauli_lubanski(mu, metric);
  OperatorExpr transverse;
  for (int mu = 0; mu < 4; ++mu)
    transverse += ExactComplex(metric[mu]) * (W[static_cast<std::size_t>(mu)] * lowered_momentum(mu, metric));
  for (const auto& f : monomial_basis(max_degree)) {
    const std::string mono = to_string(f);
    report.records.push_back({"WP", mono, transverse.apply(f)});
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        report.records.push_back({detail::relation_id("[W,P]", {mu, nu}), mono,
                                  commutator_on(W[static_cast<std::size_t>(mu)], lowered_momentum(nu, metric), f)});
  }
  return report;
}

/// Centrality of P^2 (basis degree <= p2_degree) and W^2 (basis degree <=
/// w2_degree): their commutators with every P_mu and M_{mu nu} vanish.
inline AlgebraReport check_casimirs(int p2_degree, int w2_degree, const MetricSignature& metric = {}) {
  if (p2_degree < 1 && w2_degree < 1) throw std::invalid_argument("casimir check needs a degree >= 1");
  AlgebraReport report;
  const OperatorExpr p2 = casimir_p2(metric);
  const OperatorExpr w2 = casimir_w2(metric);
  auto run = [&](const OperatorExpr& c, const char* name, int degree) {
    if (degree < 0) return;
    std::string pfam = std::string("[") + name + ",P]";
    std::string mfam = std::string("[") + name + ",M]";
    for (const auto& f : monomial_basis(degree)) {
      const std::string mono = to_string(f);
      PhasePolynomial cf = c.apply(f);
      for (int mu = 0; mu < 4; ++mu) {
        OperatorExpr p = lowered_momentum(mu, metric);
        report.records.push_back(
            {detail::relation_id(pfam.c_str(), {mu}), mono, c.apply(p.apply(f)) - p.apply(cf)});
      }
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          OperatorExpr m = angular_generator(mu, nu, metric);
          report.records.push_back(
              {detail::relation_id(mfam.c_str(), {mu, nu}), mono, c.apply(m.apply(f)) - m.apply(cf)});
        }
    }
  };
  run(p2, "P2", p2_degree);
  run(w2, "W2", w2_degree);
  return report;
}

inline AlgebraReport check_casimirs(int max_degree, const MetricSignature& metric = {}) {
  return check_casimirs(max_degree, max_degree, metric);
}

}  // namespace sdeq

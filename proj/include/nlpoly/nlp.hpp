#pragma once

// Nilpotent linearized polynomials (NLPs): nilpotency testing with exact
// index, certified constructions from a prescribed value set, from traces,
// from the alpha/beta binomial family, and from base-field coefficients, plus
// the divisibility criterion x^n - 1 | l(x)^t for the base-field case.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "linpoly.hpp"

namespace nlpoly {

enum class NlpFamily { valueset, trace, alpha_beta, base_field, custom };

constexpr std::string_view family_string(NlpFamily f) {
  switch (f) {
    case NlpFamily::valueset: return "valueset";
    case NlpFamily::trace: return "trace";
    case NlpFamily::alpha_beta: return "alpha_beta";
    case NlpFamily::base_field: return "base_field";
    case NlpFamily::custom: return "custom";
  }
  return "custom";
}

// A verified t-NLP: L^{(t)} = 0, L^{(t-1)} != 0, and a concrete element
// witnessing L != 0 as a map.
struct NlpCertificate {
  LinearizedPoly L;
  std::uint32_t t;
  FieldElement witness_nonzero;
  NlpFamily family;
};

// Smallest t >= 1 with L^{(t)} = 0, or absent if L is not nilpotent. A
// nilpotent F_q-linear operator on an n-dimensional space has index <= n, so
// the search stops there. t = 1 means L is the zero map, which is not an NLP.
inline std::optional<std::uint32_t> nilpotency_index(const LinearizedPoly& L) {
  const std::uint32_t n = L.ctx().n();
  LinearizedPoly power = L;
  for (std::uint32_t t = 1; t <= n; ++t) {
    if (power.is_zero()) return t;
    if (t < n) power = symbolic_product(L, power);
  }
  return std::nullopt;
}

// Same computation on the F_q matrix representation; cross-check oracle.
inline std::optional<std::uint32_t> nilpotency_index_matrix(const LinearizedPoly& L) {
  const FieldCtx& F = L.ctx();
  const FqMatrix M = to_matrix(L, Basis::polynomial(F));
  const FqMatrix zero(F.n(), F.n());
  FqMatrix power = M;
  for (std::uint32_t t = 1; t <= F.n(); ++t) {
    if (power == zero) return t;
    if (t < F.n()) power = fq_mat_mul(F, M, power);
  }
  return std::nullopt;
}

// First polynomial-basis element that L does not annihilate.
inline FieldElement nonzero_witness(const LinearizedPoly& L) {
  const FieldCtx& F = L.ctx();
  for (std::uint32_t j = 0; j < F.n(); ++j) {
    std::vector<fq_t> d(F.n(), 0);
    d[j] = 1;
    FieldElement e = F.from_digits(std::move(d));
    if (!L(e).is_zero()) return e;
  }
  fail(errc::not_nilpotent, "the zero map has no nonzero witness");
}

inline NlpCertificate certify(const LinearizedPoly& L, NlpFamily family = NlpFamily::custom) {
  const auto t = nilpotency_index(L);
  check(t.has_value(), errc::not_nilpotent, "polynomial is not nilpotent");
  check(*t >= 2, errc::not_nilpotent, "the zero polynomial is excluded (index 1)");
  return NlpCertificate{L, *t, nonzero_witness(L), family};
}

// Realize any proper nonzero F_q-subspace V as the exact value set of an NLP:
// extend a basis of V = <w_1..w_k> to <w_1..w_n>, then map
// w_n -> w_1, w_i -> w_{i+1} (i < k), w_k..w_{n-1} -> 0. The chain
// w_n -> w_1 -> ... -> w_k -> 0 forces nilpotency index exactly k+1.
inline NlpCertificate nlp_from_valueset(const Subspace& V) {
  const FieldCtx& F = V.ctx();
  const std::size_t n = F.n(), k = V.dim();
  check(k != 0 && k != n, errc::trivial_value_set,
        "value set must be a proper nonzero subspace");
  std::vector<FieldElement> omega = V.basis_elements();
  // Greedy extension over the polynomial-basis units in index order.
  FqMatrix probe(n, n);
  auto fill_probe = [&](const std::vector<FieldElement>& v) {
    probe = FqMatrix(v.size(), n);
    for (std::size_t r = 0; r < v.size(); ++r)
      for (std::size_t c = 0; c < n; ++c) probe.at(r, c) = v[r].digits()[c];
  };
  for (std::uint32_t j = 0; j < n && omega.size() < n; ++j) {
    std::vector<fq_t> d(n, 0);
    d[j] = 1;
    FieldElement cand = F.from_digits(std::move(d));
    omega.push_back(cand);
    fill_probe(omega);
    if (fq_rank(F, probe) != omega.size()) omega.pop_back();
  }
  check(omega.size() == n, errc::internal_inconsistency, "basis extension failed");
  const Basis B(F, omega);
  FqMatrix M(n, n);  // column i = B-coordinates of the image of w_{i+1}
  for (std::size_t i = 0; i + 1 < k; ++i) M.at(i + 1, i) = 1;
  M.at(0, n - 1) = 1;
  NlpCertificate cert = certify(from_matrix(M, B), NlpFamily::valueset);
  check(cert.t == k + 1, errc::internal_inconsistency, "value-set chain has wrong index");
  return cert;
}

// theta * Tr_{F_{q^n}/F_{q^m'}}(x): a 2-NLP whenever the relative trace of
// theta vanishes (then L(L(z)) = Tr(z) * theta * Tr(theta) * ... = 0 because
// Tr is F_{q^m'}-linear and Tr(theta) = 0).
inline NlpCertificate nlp_trace(const FieldElement& theta, std::uint32_t m_sub) {
  const FieldCtx& F = theta.ctx();
  check(!theta.is_zero(), errc::zero_theta, "theta must be nonzero");
  const FieldElement tr = F.rel_trace(theta, m_sub);  // validates m_sub | n
  check(tr.is_zero(), errc::trace_not_zero, "relative trace of theta must vanish");
  std::vector<FieldElement> coeffs(F.n(), F.zero());
  for (std::uint32_t i = 0; i < F.n(); i += m_sub) coeffs[i] = theta;
  NlpCertificate cert = certify(LinearizedPoly(F, coeffs), NlpFamily::trace);
  check(cert.t == 2, errc::internal_inconsistency, "trace family must have index 2");
  return cert;
}

// alpha*beta*x^{q^m} + alpha*x over F_{q^{2m}} with alpha^{q^m} = -alpha and
// beta^{q^m + 1} = 1; always a 2-NLP.
inline NlpCertificate nlp_alpha_beta(const FieldElement& alpha, const FieldElement& beta) {
  const FieldCtx& F = FieldCtx::require_same(alpha.ctx(), beta.ctx());
  check(F.n() % 2 == 0, errc::odd_extension, "binomial family needs even n");
  const std::uint32_t m_half = F.n() / 2;
  check(!alpha.is_zero() && (F.frobenius(alpha, m_half) + alpha).is_zero(),
        errc::condition_violated_alpha, "alpha must be nonzero with alpha^{q^m} + alpha = 0");
  check(F.frobenius(beta, m_half) * beta == F.one(), errc::condition_violated_beta,
        "beta must satisfy beta^{q^m + 1} = 1");
  const LinearizedPoly L = LinearizedPoly::monomial(F, m_half, alpha * beta) +
                           LinearizedPoly::monomial(F, 0, alpha);
  NlpCertificate cert = certify(L, NlpFamily::alpha_beta);
  check(cert.t == 2, errc::internal_inconsistency, "binomial family must have index 2");
  return cert;
}

struct AlphaBetaCandidates {
  std::vector<FieldElement> alphas;  // nonzero, alpha^{q^m} + alpha = 0
  std::vector<FieldElement> betas;   // beta^{q^m + 1} = 1
};

// Direct scan over the whole field; every (alpha, beta) pair yields a distinct
// 2-NLP and all q^n - 1 of them arise this way.
inline AlphaBetaCandidates alpha_beta_candidates(const FieldCtx& F) {
  check(F.n() % 2 == 0, errc::odd_extension, "binomial family needs even n");
  const auto size = F.size();
  check(size.has_value() && *size <= (idx_t{1} << 20), errc::field_too_large,
        "candidate scan is limited to fields of at most 2^20 elements");
  const std::uint32_t m_half = F.n() / 2;
  AlphaBetaCandidates out;
  for (idx_t i = 0; i < *size; ++i) {
    const FieldElement z = F.from_index(i);
    if (!z.is_zero() && (F.frobenius(z, m_half) + z).is_zero()) out.alphas.push_back(z);
    if (F.frobenius(z, m_half) * z == F.one()) out.betas.push_back(z);
  }
  return out;
}

// r(x) * (x^u - 1)^ceil(p^s / t) with n = p^s * u, gcd(u, p) = 1: its t-th
// power is divisible by (x^u - 1)^{p^s} = x^n - 1, so the linearized
// associate is nilpotent of index at most t (with coefficients in F_q).
inline NlpCertificate nlp_base_field(const ConventionalPoly& r, std::uint32_t t) {
  const FieldCtx& F = r.ctx();
  check(t >= 2, errc::bad_family, "nilpotency target t must be at least 2");
  check(!r.is_zero(), errc::zero_r, "r must be nonzero");
  std::uint32_t u = F.n(), ps = 1;
  while (u % F.p() == 0) {
    u /= F.p();
    ps *= F.p();
  }
  check(ps > 1, errc::p_not_dividing_n,
        "no base-field NLP exists when the characteristic does not divide n");
  const std::uint32_t d = (ps + t - 1) / t;  // ceil(p^s / t)
  const std::int64_t v = static_cast<std::int64_t>(F.n()) - 1 -
                         static_cast<std::int64_t>(u) * d;
  check(r.degree() <= v, errc::degree_too_large,
        "deg r must be at most n - 1 - u * ceil(p^s / t)");
  std::vector<fq_t> xu_minus_1(u + 1, 0);
  xu_minus_1[0] = F.fq_neg(1);
  xu_minus_1[u] = 1;
  ConventionalPoly factor(F, std::move(xu_minus_1));
  ConventionalPoly l = r;
  for (std::uint32_t i = 0; i < d; ++i) l = conv_mul(l, factor);
  NlpCertificate cert = certify(linearized_associate(l), NlpFamily::base_field);
  check(cert.t <= t, errc::internal_inconsistency, "base-field index exceeds target");
  return cert;
}

// For L with all coefficients in F_q: L is a t-NLP (index <= t) if and only
// if x^n - 1 divides l(x)^t, where l is the conventional associate.
inline bool base_field_criterion(const LinearizedPoly& L, std::uint32_t t) {
  const ConventionalPoly l = conventional_associate(L);
  return conv_pow_mod(l, t, conv_xn_minus_1(L.ctx())).is_zero();
}

}  // namespace nlpoly

#pragma once

// Permutation synthesis: for a t-NLP L and a commuting linearized permutation
// k, the sum L + k is a permutation with the closed-form compositional
// inverse  sum_{i=0}^{t-1} (-1)^i L^{(i)}(k^{((s-1-i) mod s)}(x)),  s = O(k).
// Also: complete-permutation testing, order prediction, and the base-field
// family L_r + alpha*Tr + beta*x.

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "nlp.hpp"

namespace nlpoly {

namespace detail {

inline std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> fs;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) {
      fs.push_back(d);
      while (v % d == 0) v /= d;
    }
  if (v > 1) fs.push_back(v);
  return fs;
}

}  // namespace detail

// Multiplicative order of a nonzero F_q element (divisor ladder over q - 1).
inline std::uint64_t fq_mult_order(const FieldCtx& F, fq_t c) {
  check(c != 0, errc::division_by_zero, "multiplicative order of zero is undefined");
  std::uint64_t o = F.q() - 1;
  for (auto l : detail::prime_factors(o))
    while (o % l == 0 && F.fq_pow(c, o / l) == 1) o /= l;
  return o;
}

// Order of a linearized permutation under composition. Strategy: trivial and
// scalar cases in closed form; enumerable fields (<= 2^20 elements) by orbit
// lcm; otherwise bounded symbolic iteration.
inline idx_t linear_perm_order(const LinearizedPoly& k, idx_t iteration_cap = idx_t{1} << 20) {
  const FieldCtx& F = k.ctx();
  check(is_permutation(k), errc::k_not_permutation, "polynomial does not permute the field");
  const LinearizedPoly id = LinearizedPoly::identity(F);
  if (k == id) return 1;

  // k = c x with c in F_q^*: order of k is the multiplicative order of c.
  bool scalar = !k.coeff(0).is_zero();
  for (std::size_t i = 1; i < F.n() && scalar; ++i) scalar = k.coeff(i).is_zero();
  if (scalar)
    if (const auto c = F.as_fq(k.coeff(0))) return fq_mult_order(F, *c);

  if (const auto size = F.size(); size && *size <= (idx_t{1} << 20)) {
    const FpLinearMap M = fp_matrix(k);
    std::vector<bool> visited(*size, false);
    std::vector<std::uint32_t> src(F.coord_dim()), dst(F.coord_dim());
    idx_t order = 1;
    for (idx_t start = 0; start < *size; ++start) {
      if (visited[start]) continue;
      idx_t len = 0, cur = start;
      do {
        visited[cur] = true;
        ++len;
        F.to_coords(F.from_index(cur), src);
        M.apply(src, dst);
        cur = F.index(F.from_coords(dst));
      } while (cur != start);
      order = std::lcm(order, len);
    }
    return order;
  }

  LinearizedPoly power = k;
  for (idx_t d = 1; d <= iteration_cap; ++d) {
    if (power == id) return d;
    power = symbolic_product(k, power);
  }
  fail(errc::order_search_exceeded,
       "order of k not found within the iteration budget on a non-enumerable field");
}

// Binary symbolic powering (composition is associative).
inline LinearizedPoly symbolic_power_log(const LinearizedPoly& L, idx_t e) {
  LinearizedPoly result = LinearizedPoly::identity(L.ctx());
  LinearizedPoly base = L;
  while (e) {
    if (e & 1) result = symbolic_product(result, base);
    e >>= 1;
    if (e) base = symbolic_product(base, base);
  }
  return result;
}

// A verified commuting pair (L, k) with k a permutation of order s.
struct PermSpec {
  NlpCertificate nlp;
  LinearizedPoly k;
  idx_t s;
  bool commuting;

  const LinearizedPoly& L() const { return nlp.L; }
  std::uint32_t t() const { return nlp.t; }
  LinearizedPoly combined() const { return nlp.L + k; }
};

// Affine map z -> linear(z) + shift with an invertible linear part; the
// F_p-coordinate matrix is cached for fast whole-field sweeps.
class AffinePerm {
 public:
  AffinePerm(const LinearizedPoly& linear, const FieldElement& shift)
      : linear_(linear), shift_(shift), matrix_(fp_matrix(linear)) {
    FieldCtx::require_same(linear.ctx(), shift.ctx());
    check(is_permutation(linear), errc::k_not_permutation,
          "affine map needs an invertible linear part");
  }
  explicit AffinePerm(const LinearizedPoly& linear) : AffinePerm(linear, linear.ctx().zero()) {}

  const FieldCtx& ctx() const { return linear_.ctx(); }
  const LinearizedPoly& linear() const { return linear_; }
  const FieldElement& shift() const { return shift_; }
  const FpLinearMap& matrix() const { return matrix_; }

  FieldElement operator()(const FieldElement& z) const {
    const FieldCtx& F = ctx();
    F.same(z);
    std::vector<std::uint32_t> src(F.coord_dim()), dst(F.coord_dim());
    F.to_coords(z, src);
    matrix_.apply(src, dst);
    return F.from_coords(dst) + shift_;
  }

 private:
  LinearizedPoly linear_;
  FieldElement shift_;
  FpLinearMap matrix_;
};

inline PermSpec build_perm(const NlpCertificate& nlp, const LinearizedPoly& k,
                           idx_t order_cap = idx_t{1} << 20) {
  FieldCtx::require_same(nlp.L.ctx(), k.ctx());
  check(is_permutation(k), errc::k_not_permutation, "k must be a linearized permutation");
  check(symbolic_product(nlp.L, k) == symbolic_product(k, nlp.L), errc::not_commuting,
        "L and k must commute under composition");
  const idx_t s = linear_perm_order(k, order_cap);
  // Guaranteed by nilpotency of L; a failure would disprove the construction.
  check(is_permutation(nlp.L + k), errc::internal_inconsistency,
        "L + k failed the rank test despite a nilpotent L");
  return PermSpec{nlp, k, s, true};
}

// Closed-form compositional inverse of L + k.
inline LinearizedPoly comp_inverse(const PermSpec& spec) {
  const FieldCtx& F = spec.k.ctx();
  const FieldElement minus_one = -F.one();
  LinearizedPoly sum = LinearizedPoly::zero(F);
  LinearizedPoly l_power = LinearizedPoly::identity(F);  // L^{(i)}
  FieldElement sign = F.one();                           // (-1)^i
  for (std::uint32_t i = 0; i < spec.t(); ++i) {
    if (i) {
      l_power = symbolic_product(spec.nlp.L, l_power);
      sign = sign * minus_one;
    }
    const idx_t e = (spec.s - 1 - (i % spec.s) + spec.s) % spec.s;  // (s-1-i) mod s
    sum = sum + sign * symbolic_product(l_power, symbolic_power_log(spec.k, e));
  }
  return sum;
}

// L + k is complete iff L + k + x is also a bijection.
inline bool is_complete(const PermSpec& spec) {
  return is_permutation(spec.combined() + LinearizedPoly::identity(spec.k.ctx()));
}

struct OrderPrediction {
  std::uint64_t divisor_bound;        // O(L + k) divides lcm(s, p^e), e = ceil(log_p t)
  std::optional<std::uint64_t> exact;  // p*s when t = 2 and gcd(s, p) = 1
};

inline OrderPrediction predicted_order(const PermSpec& spec) {
  const std::uint64_t p = spec.k.ctx().p();
  std::uint64_t pe = 1;
  while (pe < spec.t()) pe *= p;  // p^{ceil(log_p t)}
  OrderPrediction out{std::lcm<std::uint64_t>(spec.s, pe), std::nullopt};
  if (spec.t() == 2 && spec.s % p != 0) out.exact = p * spec.s;
  return out;
}

// Absolute trace to F_q as a linearized polynomial: sum_{i=0}^{n-1} x^{q^i}.
inline LinearizedPoly absolute_trace(const FieldCtx& F) {
  return LinearizedPoly(F, std::vector<FieldElement>(F.n(), F.one()));
}

// The base-field permutation family L_r + alpha*Tr + beta*x with
// alpha, beta in F_q^*; complete whenever beta != -1.
inline PermSpec build_general(const ConventionalPoly& r, std::uint32_t t,
                              const FieldElement& alpha, const FieldElement& beta) {
  const FieldCtx& F = r.ctx();
  FieldCtx::require_same(F, FieldCtx::require_same(alpha.ctx(), beta.ctx()));
  check(!alpha.is_zero() && F.in_base_field(alpha) && !beta.is_zero() && F.in_base_field(beta),
        errc::alpha_beta_not_in_base_field, "alpha and beta must lie in F_q^*");
  const NlpCertificate cert = nlp_base_field(r, t);
  const LinearizedPoly k =
      alpha * absolute_trace(F) + LinearizedPoly::monomial(F, 0, beta);
  return build_perm(cert, k);
}

}  // namespace nlpoly

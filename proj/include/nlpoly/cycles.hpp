#pragma once

// Cycle decomposition of affine permutations of F_{q^n}, the closed-form
// structure of L + gamma*x for a 2-NLP L, and the per-element cycle-lifting
// relation between the graphs of k and L + k.

#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "perm.hpp"

namespace nlpoly {

struct CycleStructure {
  std::vector<std::pair<idx_t, idx_t>> cycles;  // (length, count), ascending by length
  idx_t total = 0;

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& [len, cnt] : cycles) o = std::lcm<std::uint64_t>(o, len);
    return o;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [len, cnt] : cycles) {
      if (!first) os << ' ';
      os << len << '^' << cnt;
      first = false;
    }
    return os.str();
  }

  bool operator==(const CycleStructure& o) const {
    return cycles == o.cycles && total == o.total;
  }
};

// Exact decomposition by orbit-following over the element index space.
inline CycleStructure cycle_structure(const AffinePerm& f, idx_t budget = idx_t{1} << 28) {
  const FieldCtx& F = f.ctx();
  const auto size = F.size();
  check(size.has_value() && *size <= budget, errc::field_too_large,
        "field exceeds the enumeration budget for cycle decomposition");
  const idx_t total = *size;
  std::map<idx_t, idx_t> counts;
  std::vector<bool> visited(total, false);

  if (F.p() == 2 && F.coord_dim() <= 64) {
    // Packed fast path: the index word is the coordinate vector.
    const FpLinearMap& M = f.matrix();
    std::uint64_t shift_word = 0;
    {
      std::vector<std::uint64_t> w(M.blocks(), 0);
      F.to_bits(f.shift(), w);
      shift_word = w[0];
    }
    for (idx_t start = 0; start < total; ++start) {
      if (visited[start]) continue;
      idx_t len = 0;
      std::uint64_t cur = start;
      do {
        visited[cur] = true;
        ++len;
        std::uint64_t next = 0;
        M.apply_bits(&cur, &next);
        cur = next ^ shift_word;
      } while (cur != start);
      ++counts[len];
    }
  } else {
    const FpLinearMap& M = f.matrix();
    const std::uint32_t dim = F.coord_dim(), p = F.p();
    std::vector<std::uint32_t> shift_coords(dim), src(dim), dst(dim);
    F.to_coords(f.shift(), shift_coords);
    for (idx_t start = 0; start < total; ++start) {
      if (visited[start]) continue;
      idx_t len = 0;
      idx_t cur = start;
      do {
        visited[cur] = true;
        ++len;
        F.to_coords(F.from_index(cur), src);
        M.apply(src, dst);
        for (std::uint32_t i = 0; i < dim; ++i) dst[i] = (dst[i] + shift_coords[i]) % p;
        cur = F.index(F.from_coords(dst));
      } while (cur != start);
      ++counts[len];
    }
  }

  CycleStructure out;
  out.total = total;
  for (const auto& [len, cnt] : counts) out.cycles.emplace_back(len, cnt);
  return out;
}

inline CycleStructure cycle_structure(const PermSpec& spec, idx_t budget = idx_t{1} << 28) {
  return cycle_structure(AffinePerm(spec.combined()), budget);
}

// Closed form for f = L + gamma*x with L a 2-NLP and gamma in F_q^*:
// one fixed point, (z_L - 1)/s cycles of length s and (q^n - z_L)/(p s)
// cycles of length p*s, where z_L = q^{dim Z_L} and s = ord(gamma).
// For s = 1 the first two entries merge into z_L fixed points.
inline CycleStructure predict_linear_case(const NlpCertificate& cert, const FieldElement& gamma) {
  const FieldCtx& F = cert.L.ctx();
  F.same(gamma);
  check(cert.t == 2, errc::not_a_2nlp, "cycle prediction requires a 2-NLP");
  const auto g = F.as_fq(gamma);
  check(g.has_value() && *g != 0, errc::gamma_not_in_base_field_star,
        "gamma must be a nonzero base-field element");
  const auto size = F.size();
  check(size.has_value(), errc::field_too_large, "cycle counts exceed the index range");
  const std::uint64_t s = fq_mult_order(F, *g);
  const std::uint64_t p = F.p();

  const std::size_t zdim = kernel_image(cert.L).kernel.dim();
  idx_t z_count = 1;
  for (std::size_t i = 0; i < zdim; ++i) z_count *= F.q();

  check((z_count - 1) % s == 0 && (*size - z_count) % (p * s) == 0,
        errc::internal_inconsistency, "predicted cycle counts are not integral");
  const idx_t c_s = (z_count - 1) / s;
  const idx_t c_ps = (*size - z_count) / (p * s);

  CycleStructure out;
  out.total = *size;
  if (s == 1) {
    out.cycles.emplace_back(1, 1 + c_s);
  } else {
    out.cycles.emplace_back(1, 1);
    out.cycles.emplace_back(s, c_s);
  }
  out.cycles.emplace_back(p * s, c_ps);
  return out;
}

// Length of the cycle through `start` in the functional graph of f.
inline idx_t orbit_length(const AffinePerm& f, const FieldElement& start) {
  f.ctx().same(start);
  idx_t len = 1;
  FieldElement cur = f(start);
  while (!(cur == start)) {
    cur = f(cur);
    ++len;
  }
  return len;
}

struct LiftCheck {
  idx_t m_base;    // cycle length of a under k
  idx_t m_lifted;  // cycle length of a under L + k
  bool relation_ok;
};

// Per-element lifting law: m_a' | lcm(m_a, p) always;
// m_a' = m_a exactly when L(a) = 0; and with gcd(s, p) = 1 the off-kernel
// lengths are exactly p * m_a.
inline LiftCheck verify_lift(const NlpCertificate& cert, const LinearizedPoly& k,
                             const FieldElement& a, idx_t order_cap = idx_t{1} << 20) {
  const FieldCtx& F = FieldCtx::require_same(cert.L.ctx(), k.ctx());
  F.same(a);
  check(cert.t == 2, errc::not_a_2nlp, "cycle lifting requires a 2-NLP");
  check(is_permutation(k), errc::k_not_permutation, "k must be a permutation");
  check(symbolic_product(cert.L, k) == symbolic_product(k, cert.L), errc::not_commuting,
        "L and k must commute under composition");

  const idx_t m = orbit_length(AffinePerm(k), a);
  const idx_t ml = orbit_length(AffinePerm(cert.L + k), a);
  const std::uint64_t p = F.p();
  const idx_t s = linear_perm_order(k, order_cap);
  const bool in_kernel = cert.L(a).is_zero();

  bool ok = std::lcm<std::uint64_t>(m, p) % ml == 0;
  if (in_kernel) ok = ok && ml == m;
  if (s % p != 0) ok = ok && ml == (in_kernel ? m : p * m);
  return LiftCheck{m, ml, ok};
}

}  // namespace nlpoly

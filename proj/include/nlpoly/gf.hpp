#pragma once

// Exact arithmetic in the tower F_p < F_q = F_p[y]/(g) < F_{q^n} = F_q[x]/(f).
//
// An element of F_q is encoded by its index sum(c_i p^i) over the coordinates
// of its residue in the y-basis.  An element of F_{q^n} is a vector of n such
// digits (coordinates in the x-basis), and its global index is sum(d_j q^j).
// Both moduli default to the lexicographically smallest monic irreducible of
// the required degree, coefficients compared low-degree-first.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace nlpoly {

using fq_t = std::uint32_t;   // element of F_q by index
using idx_t = std::uint64_t;  // element of F_{q^n} by index

namespace detail {

inline bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

// p^e with overflow detection; absent when the value does not fit in 64 bits.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b) return std::nullopt;
    r *= b;
  }
  return r;
}

// Dense polynomials with coefficients in a small field presented by an
// arithmetic object A (add/sub/mul/neg/inv/size on fq_t indices).
// Low-degree-first, kept trimmed (no trailing zero coefficients).
using Poly = std::vector<fq_t>;

inline void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int poly_deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

template <class A>
Poly poly_add(const A& F, Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.add(a[i], b[i]);
  poly_trim(a);
  return a;
}

template <class A>
Poly poly_sub(const A& F, Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
  poly_trim(a);
  return a;
}

template <class A>
Poly poly_scale(const A& F, Poly a, fq_t c) {
  for (auto& v : a) v = F.mul(v, c);
  poly_trim(a);
  return a;
}

template <class A>
Poly poly_mul(const A& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  poly_trim(r);
  return r;
}

template <class A>
void poly_divmod(const A& F, Poly num, const Poly& den, Poly* quot, Poly* rem) {
  check(!den.empty(), errc::division_by_zero, "polynomial division by zero");
  const int dd = poly_deg(den);
  const fq_t lead_inv = F.inv(den.back());
  Poly q;
  if (poly_deg(num) >= dd) q.assign(static_cast<std::size_t>(poly_deg(num) - dd) + 1, 0);
  while (poly_deg(num) >= dd) {
    const int shift = poly_deg(num) - dd;
    const fq_t c = F.mul(num.back(), lead_inv);
    q[static_cast<std::size_t>(shift)] = c;
    for (int i = 0; i <= dd; ++i) {
      auto& t = num[static_cast<std::size_t>(shift + i)];
      t = F.sub(t, F.mul(c, den[static_cast<std::size_t>(i)]));
    }
    poly_trim(num);
  }
  if (quot) { poly_trim(q); *quot = std::move(q); }
  if (rem) *rem = std::move(num);
}

template <class A>
Poly poly_mod(const A& F, Poly num, const Poly& den) {
  Poly r;
  poly_divmod(F, std::move(num), den, nullptr, &r);
  return r;
}

template <class A>
Poly poly_mulmod(const A& F, const Poly& a, const Poly& b, const Poly& mod) {
  return poly_mod(F, poly_mul(F, a, b), mod);
}

template <class A>
Poly poly_powmod(const A& F, Poly base, std::uint64_t e, const Poly& mod) {
  Poly r{1};
  base = poly_mod(F, std::move(base), mod);
  while (e) {
    if (e & 1) r = poly_mulmod(F, r, base, mod);
    e >>= 1;
    if (e) base = poly_mulmod(F, base, base, mod);
  }
  return r;
}

template <class A>
Poly poly_monic(const A& F, Poly a) {
  if (!a.empty() && a.back() != 1) a = poly_scale(F, std::move(a), F.inv(a.back()));
  return a;
}

template <class A>
Poly poly_gcd(const A& F, Poly a, Poly b) {
  while (!b.empty()) {
    Poly r = poly_mod(F, std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(F, std::move(a));
}

// Inverse of a modulo `mod` (extended Euclid). Returns false when not coprime.
template <class A>
bool poly_invmod(const A& F, const Poly& a, const Poly& mod, Poly* out) {
  Poly r0 = mod, r1 = poly_mod(F, a, mod);
  Poly s0{}, s1{1};
  while (!r1.empty()) {
    Poly q;
    Poly r2;
    poly_divmod(F, r0, r1, &q, &r2);
    Poly s2 = poly_sub(F, s0, poly_mul(F, q, s1));
    r0 = std::move(r1); r1 = std::move(r2);
    s0 = std::move(s1); s1 = std::move(s2);
  }
  if (poly_deg(r0) != 0) return false;
  const fq_t u = F.inv(r0[0]);
  if (out) *out = poly_scale(F, std::move(s0), u);
  return true;
}

// Rabin irreducibility test for a monic polynomial h over a field of `order`
// elements: x^{order^d} = x (mod h) and gcd(x^{order^{d/l}} - x, h) = 1 for
// every prime l dividing d.
template <class A>
bool poly_is_irreducible(const A& F, std::uint64_t order, const Poly& h) {
  const int d = poly_deg(h);
  if (d < 1) return false;
  if (d == 1) return true;
  // xq[e] = x^{order^e} mod h; each step raises to `order`.
  std::vector<Poly> xq(static_cast<std::size_t>(d) + 1);
  xq[0] = poly_mod(F, Poly{0, 1}, h);
  for (int e = 1; e <= d; ++e)
    xq[static_cast<std::size_t>(e)] =
        poly_powmod(F, xq[static_cast<std::size_t>(e - 1)], order, h);
  const Poly x = poly_mod(F, Poly{0, 1}, h);
  if (xq[static_cast<std::size_t>(d)] != x) return false;
  for (int l = 2, rest = d; rest > 1; ++l) {
    if (rest % l != 0) continue;
    while (rest % l == 0) rest /= l;
    Poly diff = poly_sub(F, xq[static_cast<std::size_t>(d / l)], x);
    Poly g = poly_gcd(F, diff, h);
    if (poly_deg(g) != 0) return false;
  }
  return true;
}

// Arithmetic over F_p (prime field); values are residues.
struct ZpArith {
  std::uint32_t p;
  fq_t add(fq_t a, fq_t b) const { return (a + b) % p; }
  fq_t sub(fq_t a, fq_t b) const { return (a + p - b % p) % p; }
  fq_t neg(fq_t a) const { return a == 0 ? 0 : p - a; }
  fq_t mul(fq_t a, fq_t b) const {
    return static_cast<fq_t>((static_cast<std::uint64_t>(a) * b) % p);
  }
  fq_t inv(fq_t a) const {
    check(a % p != 0, errc::division_by_zero, "inverse of zero in F_p");
    fq_t r = 1, base = a % p;
    for (std::uint32_t e = p - 2; e; e >>= 1) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
    }
    return r;
  }
  std::uint64_t size() const { return p; }
};

}  // namespace detail

// F_p-linear map on the mn-dimensional coordinate space of F_{q^n}. For p = 2
// rows are bit-packed and applied with popcount parity; other characteristics
// use a plain row-major matrix.
class FpLinearMap {
 public:
  FpLinearMap() = default;
  FpLinearMap(std::uint32_t p, std::uint32_t dim) : p_(p), dim_(dim) {
    if (p_ == 2) {
      blocks_ = (dim_ + 63) / 64;
      bits_.assign(static_cast<std::size_t>(dim_) * blocks_, 0);
    } else {
      a_.assign(static_cast<std::size_t>(dim_) * dim_, 0);
    }
  }

  static FpLinearMap identity(std::uint32_t p, std::uint32_t dim) {
    FpLinearMap m(p, dim);
    for (std::uint32_t i = 0; i < dim; ++i) m.set(i, i, 1);
    return m;
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t dim() const { return dim_; }
  std::size_t blocks() const { return blocks_; }

  void set(std::uint32_t r, std::uint32_t c, std::uint32_t v) {
    if (p_ == 2) {
      const std::size_t w = static_cast<std::size_t>(r) * blocks_ + c / 64;
      const std::uint64_t bit = 1ull << (c % 64);
      if (v & 1) bits_[w] |= bit; else bits_[w] &= ~bit;
    } else {
      a_[static_cast<std::size_t>(r) * dim_ + c] = v % p_;
    }
  }

  std::uint32_t get(std::uint32_t r, std::uint32_t c) const {
    if (p_ == 2)
      return static_cast<std::uint32_t>(
          (bits_[static_cast<std::size_t>(r) * blocks_ + c / 64] >> (c % 64)) & 1);
    return a_[static_cast<std::size_t>(r) * dim_ + c];
  }

  // dst = M * src on plain coordinate vectors (any characteristic).
  void apply(std::span<const std::uint32_t> src, std::span<std::uint32_t> dst) const {
    if (p_ == 2) {
      std::vector<std::uint64_t> s(blocks_, 0), d(blocks_, 0);
      for (std::uint32_t c = 0; c < dim_; ++c)
        if (src[c] & 1) s[c / 64] |= 1ull << (c % 64);
      apply_bits(s.data(), d.data());
      for (std::uint32_t r = 0; r < dim_; ++r)
        dst[r] = static_cast<std::uint32_t>((d[r / 64] >> (r % 64)) & 1);
      return;
    }
    for (std::uint32_t r = 0; r < dim_; ++r) {
      std::uint64_t acc = 0;
      const std::uint32_t* row = &a_[static_cast<std::size_t>(r) * dim_];
      for (std::uint32_t c = 0; c < dim_; ++c) acc += static_cast<std::uint64_t>(row[c]) * src[c];
      dst[r] = static_cast<std::uint32_t>(acc % p_);
    }
  }

  // p = 2 fast path; src/dst are bit-packed coordinate vectors of blocks() words.
  void apply_bits(const std::uint64_t* src, std::uint64_t* dst) const {
    for (std::size_t b = 0; b < blocks_; ++b) dst[b] = 0;
    const std::uint64_t* row = bits_.data();
    for (std::uint32_t r = 0; r < dim_; ++r, row += blocks_) {
      std::uint64_t par = 0;
      for (std::size_t b = 0; b < blocks_; ++b) par ^= row[b] & src[b];
      dst[r / 64] |= static_cast<std::uint64_t>(std::popcount(par) & 1) << (r % 64);
    }
  }

  // this ∘ inner (matrix product this * inner).
  FpLinearMap compose(const FpLinearMap& inner) const {
    FpLinearMap out(p_, dim_);
    if (p_ == 2) {
      // row r of product = xor of inner rows selected by bits of our row r.
      for (std::uint32_t r = 0; r < dim_; ++r) {
        std::uint64_t* orow = &out.bits_[static_cast<std::size_t>(r) * blocks_];
        const std::uint64_t* arow = &bits_[static_cast<std::size_t>(r) * blocks_];
        for (std::uint32_t k = 0; k < dim_; ++k) {
          if ((arow[k / 64] >> (k % 64)) & 1) {
            const std::uint64_t* brow = &inner.bits_[static_cast<std::size_t>(k) * blocks_];
            for (std::size_t b = 0; b < blocks_; ++b) orow[b] ^= brow[b];
          }
        }
      }
      return out;
    }
    for (std::uint32_t r = 0; r < dim_; ++r)
      for (std::uint32_t c = 0; c < dim_; ++c) {
        std::uint64_t acc = 0;
        for (std::uint32_t k = 0; k < dim_; ++k)
          acc += static_cast<std::uint64_t>(get(r, k)) * inner.get(k, c);
        out.set(r, c, static_cast<std::uint32_t>(acc % p_));
      }
    return out;
  }

  bool is_identity() const {
    for (std::uint32_t r = 0; r < dim_; ++r)
      for (std::uint32_t c = 0; c < dim_; ++c)
        if (get(r, c) != (r == c ? 1u : 0u)) return false;
    return true;
  }

  bool operator==(const FpLinearMap& o) const {
    return p_ == o.p_ && dim_ == o.dim_ && bits_ == o.bits_ && a_ == o.a_;
  }

 private:
  std::uint32_t p_ = 0, dim_ = 0;
  std::size_t blocks_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> a_;
};

class FieldCtx;

class FieldElement {
 public:
  FieldElement() = default;

  const FieldCtx& ctx() const {
    check(ctx_ != nullptr, errc::internal_inconsistency, "element without field context");
    return *ctx_;
  }
  const FieldCtx* ctx_ptr() const { return ctx_; }
  std::span<const fq_t> digits() const { return d_; }
  bool is_zero() const {
    return std::all_of(d_.begin(), d_.end(), [](fq_t v) { return v == 0; });
  }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inv() const;
  FieldElement pow(std::uint64_t e) const;
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

 private:
  friend class FieldCtx;
  FieldElement(const FieldCtx* c, std::vector<fq_t> d) : ctx_(c), d_(std::move(d)) {}
  const FieldCtx* ctx_ = nullptr;
  std::vector<fq_t> d_;
};

// Parsed form of a field specification string "p^m:n[:g=<hex>][:f=<hex list>]".
struct FieldSpec {
  std::uint32_t p = 0, m = 0, n = 0;
  std::optional<std::vector<std::uint32_t>> g;  // F_p coefficients, low-first, incl. lead
  std::optional<std::vector<fq_t>> f;           // F_q indices, low-first, incl. lead

  static FieldSpec parse(std::string_view s);
  std::unique_ptr<FieldCtx> create() const;
};

class FieldCtx {
 public:
  FieldCtx(std::uint32_t p, std::uint32_t m, std::uint32_t n,
           std::optional<std::vector<std::uint32_t>> g_coeffs = std::nullopt,
           std::optional<std::vector<fq_t>> f_coeffs = std::nullopt)
      : p_(p), m_(m), n_(n) {
    check(detail::is_prime(p_), errc::not_prime,
          "characteristic must be prime, got " + std::to_string(p_));
    check(m_ >= 1, errc::degree_mismatch, "subfield degree m must be at least 1");
    check(n_ >= 2, errc::n_too_small, "extension degree n must be at least 2");
    auto qv = detail::checked_pow(p_, m_);
    check(qv.has_value() && *qv <= (1ull << 32), errc::field_too_large,
          "q = p^m must fit in 32 bits");
    q_ = *qv;
    size_ = detail::checked_pow(q_, n_);

    const detail::ZpArith zp{p_};
    if (g_coeffs) {
      detail::Poly g = std::move(*g_coeffs);
      for (auto& c : g) c %= p_;
      detail::poly_trim(g);
      check(detail::poly_deg(g) == static_cast<int>(m_), errc::degree_mismatch,
            "g must have degree m = " + std::to_string(m_));
      g = detail::poly_monic(zp, std::move(g));
      check(detail::poly_is_irreducible(zp, p_, g), errc::not_irreducible,
            "g is reducible over F_p");
      g_ = std::move(g);
    } else {
      g_ = smallest_irreducible(zp, p_, m_);
    }

    build_fq_tables();

    const FqView fv{this};
    if (f_coeffs) {
      detail::Poly f = std::move(*f_coeffs);
      for (auto& c : f)
        check(c < q_, errc::bad_field_spec, "f coefficient out of range for F_q");
      detail::poly_trim(f);
      check(detail::poly_deg(f) == static_cast<int>(n_), errc::degree_mismatch,
            "f must have degree n = " + std::to_string(n_));
      f = detail::poly_monic(fv, std::move(f));
      check(detail::poly_is_irreducible(fv, q_, f), errc::not_irreducible,
            "f is reducible over F_q");
      f_ = std::move(f);
    } else {
      f_ = smallest_irreducible(fv, q_, n_);
    }

    build_frobenius();
  }

  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  std::uint32_t p() const { return p_; }
  std::uint32_t m() const { return m_; }
  std::uint32_t n() const { return n_; }
  std::uint64_t q() const { return q_; }
  std::uint32_t coord_dim() const { return m_ * n_; }
  // q^n when it fits in 64 bits.
  std::optional<idx_t> size() const { return size_; }
  const std::vector<std::uint32_t>& modulus_g() const { return g_; }
  const std::vector<fq_t>& modulus_f() const { return f_; }

  // ---- F_q arithmetic on indices ----
  fq_t fq_add(fq_t a, fq_t b) const {
    if (tabbed()) return add_tab_[a * q_ + b];
    return fq_encode(coord_add(fq_decode(a), fq_decode(b)));
  }
  fq_t fq_sub(fq_t a, fq_t b) const { return fq_add(a, fq_neg(b)); }
  fq_t fq_neg(fq_t a) const {
    if (tabbed()) return neg_tab_[a];
    auto c = fq_decode(a);
    for (auto& v : c) v = v ? p_ - v : 0;
    return fq_encode(c);
  }
  fq_t fq_mul(fq_t a, fq_t b) const {
    if (tabbed()) return mul_tab_[a * q_ + b];
    const detail::ZpArith zp{p_};
    return fq_encode_poly(detail::poly_mod(zp, detail::poly_mul(zp, fq_decode_poly(a), fq_decode_poly(b)), g_));
  }
  fq_t fq_inv(fq_t a) const {
    check(a != 0, errc::division_by_zero, "inverse of zero in F_q");
    if (tabbed()) return inv_tab_[a];
    const detail::ZpArith zp{p_};
    detail::Poly out;
    const bool ok = detail::poly_invmod(zp, fq_decode_poly(a), g_, &out);
    check(ok, errc::internal_inconsistency, "F_q inverse failed");
    return fq_encode_poly(out);
  }
  fq_t fq_div(fq_t a, fq_t b) const { return fq_mul(a, fq_inv(b)); }
  fq_t fq_pow(fq_t a, std::uint64_t e) const {
    fq_t r = 1, base = a;
    while (e) {
      if (e & 1) r = fq_mul(r, base);
      e >>= 1;
      if (e) base = fq_mul(base, base);
    }
    return r;
  }
  // F_p scalar c as an element of F_q (constant polynomial in y).
  fq_t fq_from_fp(std::uint32_t c) const { return c % p_; }

  // Arithmetic view of F_q used by generic polynomial helpers.
  struct FqView {
    const FieldCtx* c;
    fq_t add(fq_t a, fq_t b) const { return c->fq_add(a, b); }
    fq_t sub(fq_t a, fq_t b) const { return c->fq_sub(a, b); }
    fq_t neg(fq_t a) const { return c->fq_neg(a); }
    fq_t mul(fq_t a, fq_t b) const { return c->fq_mul(a, b); }
    fq_t inv(fq_t a) const { return c->fq_inv(a); }
    std::uint64_t size() const { return c->q_; }
  };
  FqView fq_view() const { return FqView{this}; }

  // ---- elements ----
  FieldElement zero() const { return FieldElement(this, std::vector<fq_t>(n_, 0)); }
  FieldElement one() const {
    std::vector<fq_t> d(n_, 0);
    d[0] = 1;
    return FieldElement(this, std::move(d));
  }
  // The x-coset generator of the extension.
  FieldElement gen() const {
    std::vector<fq_t> d(n_, 0);
    d[1] = 1;
    return FieldElement(this, std::move(d));
  }
  FieldElement embed_fq(fq_t c) const {
    check(c < q_, errc::index_out_of_range, "F_q index out of range");
    std::vector<fq_t> d(n_, 0);
    d[0] = c;
    return FieldElement(this, std::move(d));
  }
  FieldElement from_digits(std::vector<fq_t> d) const {
    check(d.size() == n_, errc::degree_mismatch, "digit vector must have length n");
    for (auto v : d)
      check(v < q_, errc::index_out_of_range, "digit out of range for F_q");
    return FieldElement(this, std::move(d));
  }
  FieldElement from_index(idx_t i) const {
    check(!size_ || i < *size_, errc::index_out_of_range,
          "element index exceeds field size");
    std::vector<fq_t> d(n_, 0);
    for (std::uint32_t j = 0; j < n_; ++j) {
      d[j] = static_cast<fq_t>(i % q_);
      i /= q_;
    }
    check(i == 0, errc::index_out_of_range, "element index exceeds field size");
    return FieldElement(this, std::move(d));
  }
  idx_t index(const FieldElement& z) const {
    same(z);
    check(size_.has_value(), errc::field_too_large, "field size exceeds 64-bit indexing");
    idx_t v = 0;
    for (std::uint32_t j = n_; j-- > 0;) v = v * q_ + z.digits()[j];
    return v;
  }

  // ---- element arithmetic backend ----
  FieldElement add(const FieldElement& a, const FieldElement& b) const {
    same(a); same(b);
    std::vector<fq_t> d(n_);
    for (std::uint32_t i = 0; i < n_; ++i) d[i] = fq_add(a.d_[i], b.d_[i]);
    return FieldElement(this, std::move(d));
  }
  FieldElement sub(const FieldElement& a, const FieldElement& b) const {
    same(a); same(b);
    std::vector<fq_t> d(n_);
    for (std::uint32_t i = 0; i < n_; ++i) d[i] = fq_sub(a.d_[i], b.d_[i]);
    return FieldElement(this, std::move(d));
  }
  FieldElement neg(const FieldElement& a) const {
    same(a);
    std::vector<fq_t> d(n_);
    for (std::uint32_t i = 0; i < n_; ++i) d[i] = fq_neg(a.d_[i]);
    return FieldElement(this, std::move(d));
  }
  FieldElement mul(const FieldElement& a, const FieldElement& b) const {
    same(a); same(b);
    std::vector<fq_t> t(2 * n_ - 1, 0);
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (a.d_[i] == 0) continue;
      for (std::uint32_t j = 0; j < n_; ++j)
        t[i + j] = fq_add(t[i + j], fq_mul(a.d_[i], b.d_[j]));
    }
    reduce_mod_f(t);
    t.resize(n_);
    return FieldElement(this, std::move(t));
  }
  FieldElement inv(const FieldElement& a) const {
    same(a);
    check(!a.is_zero(), errc::division_by_zero, "inverse of zero");
    detail::Poly ap(a.d_.begin(), a.d_.end());
    detail::poly_trim(ap);
    detail::Poly out;
    const bool ok = detail::poly_invmod(fq_view(), ap, f_, &out);
    check(ok, errc::internal_inconsistency, "field inverse failed");
    out.resize(n_, 0);
    return FieldElement(this, std::move(out));
  }
  FieldElement pow(const FieldElement& a, std::uint64_t e) const {
    same(a);
    FieldElement r = one(), base = a;
    while (e) {
      if (e & 1) r = mul(r, base);
      e >>= 1;
      if (e) base = mul(base, base);
    }
    return r;
  }

  // ---- Frobenius and traces ----
  // Matrix of z -> z^{q^i} on F_p coordinates, 0 <= i < n.
  const FpLinearMap& frobenius_power(std::uint32_t i) const { return frob_[i % n_]; }

  FieldElement frobenius(const FieldElement& z, std::int64_t i) const {
    same(z);
    const std::uint32_t k = static_cast<std::uint32_t>(((i % n_) + n_) % n_);
    if (k == 0) return z;
    std::vector<std::uint32_t> src(coord_dim()), dst(coord_dim());
    to_coords(z, src);
    frob_[k].apply(src, dst);
    return from_coords(dst);
  }

  // Relative trace onto F_{q^m'}: sum of z^{q^{m' i}}, i < n/m'. m' must divide n.
  FieldElement rel_trace(const FieldElement& z, std::uint32_t m_sub) const {
    same(z);
    check(m_sub >= 1 && n_ % m_sub == 0, errc::not_a_divisor,
          "trace target degree must divide n");
    FieldElement acc = z;
    for (std::uint32_t i = m_sub; i < n_; i += m_sub) acc = add(acc, frobenius(z, i));
    return acc;
  }

  bool in_subfield(const FieldElement& z, std::uint32_t m_sub) const {
    same(z);
    check(m_sub >= 1 && n_ % m_sub == 0, errc::not_a_divisor,
          "subfield degree must divide n");
    return frobenius(z, m_sub) == z;
  }
  // Fixed under the q-Frobenius, i.e. a coefficient-field constant.
  bool in_base_field(const FieldElement& z) const { return frobenius(z, 1) == z; }
  std::optional<fq_t> as_fq(const FieldElement& z) const {
    if (!in_base_field(z)) return std::nullopt;
    return z.digits()[0];
  }

  // ---- coordinates ----
  void to_coords(const FieldElement& z, std::span<std::uint32_t> out) const {
    for (std::uint32_t j = 0; j < n_; ++j) {
      fq_t v = z.digits()[j];
      for (std::uint32_t i = 0; i < m_; ++i) {
        out[j * m_ + i] = v % p_;
        v /= p_;
      }
    }
  }
  FieldElement from_coords(std::span<const std::uint32_t> in) const {
    std::vector<fq_t> d(n_, 0);
    for (std::uint32_t j = 0; j < n_; ++j) {
      fq_t v = 0;
      for (std::uint32_t i = m_; i-- > 0;) v = v * p_ + in[j * m_ + i] % p_;
      d[j] = v;
    }
    return FieldElement(this, std::move(d));
  }
  // p = 2: bit-packed coordinates coincide with the binary digits of the index.
  void to_bits(const FieldElement& z, std::span<std::uint64_t> out) const {
    const std::size_t blocks = (coord_dim() + 63) / 64;
    for (std::size_t b = 0; b < blocks; ++b) out[b] = 0;
    for (std::uint32_t j = 0; j < n_; ++j) {
      const std::uint64_t v = z.digits()[j];
      const std::uint32_t base = j * m_;
      for (std::uint32_t i = 0; i < m_; ++i)
        out[(base + i) / 64] |= ((v >> i) & 1) << ((base + i) % 64);
    }
  }
  FieldElement from_bits(std::span<const std::uint64_t> in) const {
    std::vector<fq_t> d(n_, 0);
    for (std::uint32_t j = 0; j < n_; ++j) {
      fq_t v = 0;
      const std::uint32_t base = j * m_;
      for (std::uint32_t i = m_; i-- > 0;)
        v = static_cast<fq_t>((v << 1) | ((in[(base + i) / 64] >> ((base + i) % 64)) & 1));
      d[j] = v;
    }
    return FieldElement(this, std::move(d));
  }

  // ---- context identity ----
  bool compatible(const FieldCtx& o) const {
    return this == &o || (p_ == o.p_ && m_ == o.m_ && n_ == o.n_ && g_ == o.g_ && f_ == o.f_);
  }
  void same(const FieldElement& z) const {
    check(z.ctx_ptr() != nullptr, errc::ctx_mismatch, "uninitialised element");
    check(z.ctx_ptr() == this || compatible(*z.ctx_ptr()), errc::ctx_mismatch,
          "element belongs to a different field");
  }
  static const FieldCtx& require_same(const FieldCtx& a, const FieldCtx& b) {
    check(a.compatible(b), errc::ctx_mismatch, "mixed field contexts");
    return a;
  }

  // ---- spec strings ----
  std::string spec_string() const {
    std::ostringstream os;
    os << p_ << '^' << m_ << ':' << n_;
    if (m_ > 1) {
      std::uint64_t v = 0;
      for (std::size_t i = g_.size(); i-- > 0;) v = v * p_ + g_[i];
      os << ":g=" << std::hex << v << std::dec;
    }
    os << ":f=";
    for (std::size_t i = 0; i < f_.size(); ++i) {
      if (i) os << ',';
      os << std::hex << f_[i] << std::dec;
    }
    return os.str();
  }

  static FieldCtx parse(std::string_view s) {
    const FieldSpec fs = FieldSpec::parse(s);
    return FieldCtx(fs.p, fs.m, fs.n, fs.g, fs.f);
  }

 private:
  bool tabbed() const { return !mul_tab_.empty(); }

  std::vector<std::uint32_t> fq_decode(fq_t v) const {
    std::vector<std::uint32_t> c(m_);
    for (std::uint32_t i = 0; i < m_; ++i) {
      c[i] = v % p_;
      v /= p_;
    }
    return c;
  }
  detail::Poly fq_decode_poly(fq_t v) const {
    detail::Poly c = fq_decode(v);
    detail::poly_trim(c);
    return c;
  }
  fq_t fq_encode(const std::vector<std::uint32_t>& c) const {
    fq_t v = 0;
    for (std::uint32_t i = m_; i-- > 0;) v = v * p_ + (i < c.size() ? c[i] % p_ : 0);
    return v;
  }
  fq_t fq_encode_poly(const detail::Poly& c) const {
    std::vector<std::uint32_t> full(c.begin(), c.end());
    full.resize(m_, 0);
    return fq_encode(full);
  }
  std::vector<std::uint32_t> coord_add(std::vector<std::uint32_t> a,
                                       const std::vector<std::uint32_t>& b) const {
    for (std::uint32_t i = 0; i < m_; ++i) a[i] = (a[i] + b[i]) % p_;
    return a;
  }

  template <class A>
  static detail::Poly smallest_irreducible(const A& F, std::uint64_t order, std::uint32_t deg) {
    // Scan monic candidates by increasing value of the free-coefficient word,
    // low-degree digit least significant.
    detail::Poly h(deg + 1, 0);
    h[deg] = 1;
    for (std::uint64_t v = 0;; ++v) {
      std::uint64_t t = v;
      for (std::uint32_t i = 0; i < deg; ++i) {
        h[i] = static_cast<fq_t>(t % order);
        t /= order;
      }
      if (t != 0)
        fail(errc::internal_inconsistency, "no irreducible polynomial found");
      if (detail::poly_is_irreducible(F, order, h)) return h;
    }
  }

  void build_fq_tables() {
    if (q_ > kFqTableLimit) return;
    const auto q = static_cast<std::size_t>(q_);
    const detail::ZpArith zp{p_};
    std::vector<detail::Poly> dec(q);
    for (std::size_t v = 0; v < q; ++v) dec[v] = fq_decode_poly(static_cast<fq_t>(v));
    add_tab_.resize(q * q);
    mul_tab_.resize(q * q);
    neg_tab_.resize(q);
    inv_tab_.resize(q);
    for (std::size_t a = 0; a < q; ++a) {
      neg_tab_[a] = fq_encode_poly(detail::poly_scale(zp, dec[a], zp.neg(1)));
      for (std::size_t b = 0; b < q; ++b) {
        add_tab_[a * q + b] = fq_encode_poly(detail::poly_add(zp, dec[a], dec[b]));
        mul_tab_[a * q + b] =
            fq_encode_poly(detail::poly_mod(zp, detail::poly_mul(zp, dec[a], dec[b]), g_));
      }
    }
    inv_tab_[0] = 0;
    for (std::size_t a = 1; a < q; ++a) {
      detail::Poly out;
      const bool ok = detail::poly_invmod(zp, dec[a], g_, &out);
      check(ok, errc::internal_inconsistency, "F_q table inverse failed");
      inv_tab_[a] = fq_encode_poly(out);
    }
  }

  void reduce_mod_f(std::vector<fq_t>& t) const {
    // f monic of degree n: x^n = -(f_0 + f_1 x + ... + f_{n-1} x^{n-1}).
    for (std::size_t k = t.size(); k-- > n_;) {
      const fq_t c = t[k];
      if (c == 0) continue;
      t[k] = 0;
      for (std::uint32_t j = 0; j < n_; ++j)
        t[k - n_ + j] = fq_sub(t[k - n_ + j], fq_mul(c, f_[j]));
    }
  }

  void build_frobenius() {
    const std::uint32_t d = coord_dim();
    frob_.clear();
    frob_.reserve(n_);
    frob_.push_back(FpLinearMap::identity(p_, d));
    FpLinearMap mq(p_, d);
    std::vector<std::uint32_t> unit(d, 0), img(d);
    for (std::uint32_t k = 0; k < d; ++k) {
      std::fill(unit.begin(), unit.end(), 0);
      unit[k] = 1;
      const FieldElement e = from_coords(unit);
      const FieldElement eq = pow(e, q_);
      to_coords(eq, img);
      for (std::uint32_t r = 0; r < d; ++r) mq.set(r, k, img[r]);
    }
    for (std::uint32_t i = 1; i < n_; ++i) frob_.push_back(mq.compose(frob_.back()));
  }

  static constexpr std::uint64_t kFqTableLimit = 512;

  std::uint32_t p_, m_, n_;
  std::uint64_t q_ = 0;
  std::optional<idx_t> size_;
  std::vector<std::uint32_t> g_;
  std::vector<fq_t> f_;
  std::vector<fq_t> add_tab_, mul_tab_, neg_tab_, inv_tab_;
  std::vector<FpLinearMap> frob_;
};

// ---- FieldElement operator bodies ----
inline FieldElement FieldElement::operator+(const FieldElement& o) const { return ctx().add(*this, o); }
inline FieldElement FieldElement::operator-(const FieldElement& o) const { return ctx().sub(*this, o); }
inline FieldElement FieldElement::operator*(const FieldElement& o) const { return ctx().mul(*this, o); }
inline FieldElement FieldElement::operator/(const FieldElement& o) const { return ctx().mul(*this, ctx().inv(o)); }
inline FieldElement FieldElement::operator-() const { return ctx().neg(*this); }
inline FieldElement FieldElement::inv() const { return ctx().inv(*this); }
inline FieldElement FieldElement::pow(std::uint64_t e) const { return ctx().pow(*this, e); }
inline bool FieldElement::operator==(const FieldElement& o) const {
  ctx().same(o);
  return d_ == o.d_;
}

// ---- field spec parsing ----
inline FieldSpec FieldSpec::parse(std::string_view s) {
  auto bad = [&](const std::string& why) -> void {
    fail(errc::bad_field_spec, why + " in field spec '" + std::string(s) + "'");
  };
  std::vector<std::string> parts;
  {
    std::string cur;
    for (char ch : s) {
      if (ch == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    parts.push_back(cur);
  }
  if (parts.size() < 2) bad("expected p^m:n");
  FieldSpec out;
  const std::string& head = parts[0];
  const auto caret = head.find('^');
  auto parse_u32 = [&](const std::string& t, const char* what) -> std::uint32_t {
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
      bad(std::string("bad ") + what);
    unsigned long v = 0;
    try {
      v = std::stoul(t);
    } catch (const std::exception&) {
      bad(std::string("bad ") + what);
    }
    if (v > 0xfffffffful) bad(std::string("bad ") + what);
    return static_cast<std::uint32_t>(v);
  };
  if (caret == std::string::npos) {
    out.p = parse_u32(head, "p");
    out.m = 1;
  } else {
    out.p = parse_u32(head.substr(0, caret), "p");
    out.m = parse_u32(head.substr(caret + 1), "m");
  }
  out.n = parse_u32(parts[1], "n");
  auto parse_hex = [&](const std::string& t) -> std::uint64_t {
    if (t.empty() || t.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
      bad("bad hex value");
    return std::stoull(t, nullptr, 16);
  };
  for (std::size_t i = 2; i < parts.size(); ++i) {
    const std::string& seg = parts[i];
    if (seg.rfind("g=", 0) == 0) {
      std::uint64_t v = parse_hex(seg.substr(2));
      std::vector<std::uint32_t> coeffs;
      while (v) {
        coeffs.push_back(static_cast<std::uint32_t>(v % out.p));
        v /= out.p;
      }
      out.g = std::move(coeffs);
    } else if (seg.rfind("f=", 0) == 0) {
      std::vector<fq_t> coeffs;
      std::string cur;
      const std::string body = seg.substr(2);
      for (std::size_t j = 0; j <= body.size(); ++j) {
        if (j == body.size() || body[j] == ',') {
          coeffs.push_back(static_cast<fq_t>(parse_hex(cur)));
          cur.clear();
        } else {
          cur.push_back(body[j]);
        }
      }
      out.f = std::move(coeffs);
    } else {
      bad("unknown segment '" + seg + "'");
    }
  }
  return out;
}

inline std::unique_ptr<FieldCtx> FieldSpec::create() const {
  return std::make_unique<FieldCtx>(p, m, n, g, f);
}

}  // namespace nlpoly

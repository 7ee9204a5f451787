#pragma once

// Linearized polynomials L(x) = sum a_i x^{q^i} over F_{q^n}, kept in reduced
// form (q-degree < n, i.e. reduced mod x^{q^n} - x), together with the
// conventional q-associate l(x) = sum a_i x^i, matrix representations in a
// chosen F_q-basis, and canonical F_q-subspaces (row-reduced echelon basis).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gf.hpp"

namespace nlpoly {

// ---------------------------------------------------------------------------
// Small dense matrices over F_q (entries are F_q indices, row-major).

struct FqMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<fq_t> a;

  FqMatrix() = default;
  FqMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

  fq_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  fq_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  bool operator==(const FqMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline FqMatrix fq_identity(std::size_t n) {
  FqMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

inline FqMatrix fq_mat_mul(const FieldCtx& F, const FqMatrix& A, const FqMatrix& B) {
  check(A.cols == B.rows, errc::degree_mismatch, "matrix shape mismatch");
  FqMatrix C(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      const fq_t v = A.at(i, k);
      if (v == 0) continue;
      for (std::size_t j = 0; j < B.cols; ++j)
        C.at(i, j) = F.fq_add(C.at(i, j), F.fq_mul(v, B.at(k, j)));
    }
  return C;
}

inline std::vector<fq_t> fq_mat_vec(const FieldCtx& F, const FqMatrix& A,
                                    std::span<const fq_t> v) {
  check(A.cols == v.size(), errc::degree_mismatch, "matrix/vector shape mismatch");
  std::vector<fq_t> out(A.rows, 0);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j)
      if (A.at(i, j) && v[j]) out[i] = F.fq_add(out[i], F.fq_mul(A.at(i, j), v[j]));
  return out;
}

// In-place reduced row echelon form; returns the rank.
inline std::size_t fq_rref(const FieldCtx& F, FqMatrix& M,
                           std::vector<std::size_t>* pivots = nullptr) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < M.cols && rank < M.rows; ++col) {
    std::size_t sel = M.rows;
    for (std::size_t r = rank; r < M.rows; ++r)
      if (M.at(r, col) != 0) { sel = r; break; }
    if (sel == M.rows) continue;
    if (sel != rank)
      for (std::size_t c = 0; c < M.cols; ++c) std::swap(M.at(sel, c), M.at(rank, c));
    const fq_t piv_inv = F.fq_inv(M.at(rank, col));
    for (std::size_t c = col; c < M.cols; ++c) M.at(rank, c) = F.fq_mul(M.at(rank, c), piv_inv);
    for (std::size_t r = 0; r < M.rows; ++r) {
      if (r == rank) continue;
      const fq_t v = M.at(r, col);
      if (v == 0) continue;
      for (std::size_t c = col; c < M.cols; ++c)
        M.at(r, c) = F.fq_sub(M.at(r, c), F.fq_mul(v, M.at(rank, c)));
    }
    if (pivots) pivots->push_back(col);
    ++rank;
  }
  return rank;
}

inline std::size_t fq_rank(const FieldCtx& F, FqMatrix M) { return fq_rref(F, M); }

inline std::optional<FqMatrix> fq_inverse(const FieldCtx& F, const FqMatrix& A) {
  check(A.rows == A.cols, errc::degree_mismatch, "inverse of non-square matrix");
  const std::size_t n = A.rows;
  FqMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, n + i) = 1;
  }
  std::vector<std::size_t> pivots;
  fq_rref(F, aug, &pivots);
  // Invertible iff elimination finds a pivot in every column of the left block.
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  FqMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

// Basis of the right nullspace {v : Mv = 0}; rows of the result are vectors.
inline FqMatrix fq_nullspace(const FieldCtx& F, FqMatrix M) {
  std::vector<std::size_t> pivots;
  const std::size_t rank = fq_rref(F, M, &pivots);
  std::vector<bool> is_pivot(M.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  FqMatrix out(M.cols - rank, M.cols);
  std::size_t row = 0;
  for (std::size_t free = 0; free < M.cols; ++free) {
    if (is_pivot[free]) continue;
    out.at(row, free) = 1;
    for (std::size_t r = 0; r < rank; ++r)
      out.at(row, pivots[r]) = F.fq_neg(M.at(r, free));
    ++row;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical F_q-subspace of F_{q^n}: basis rows in RREF over the x-basis.

class Subspace {
 public:
  Subspace(const FieldCtx& F, FqMatrix spanning) : ctx_(&F) {
    check(spanning.cols == F.n() || spanning.rows == 0, errc::degree_mismatch,
          "subspace vectors must have length n");
    if (spanning.rows == 0) spanning = FqMatrix(0, F.n());
    const std::size_t rank = fq_rref(F, spanning);
    mat_ = FqMatrix(rank, F.n());
    for (std::size_t r = 0; r < rank; ++r)
      for (std::size_t c = 0; c < F.n(); ++c) mat_.at(r, c) = spanning.at(r, c);
  }

  static Subspace zero(const FieldCtx& F) { return Subspace(F, FqMatrix(0, F.n())); }
  static Subspace full(const FieldCtx& F) { return Subspace(F, fq_identity(F.n())); }
  static Subspace span_of(const FieldCtx& F, const std::vector<FieldElement>& elems) {
    FqMatrix m(elems.size(), F.n());
    for (std::size_t i = 0; i < elems.size(); ++i) {
      F.same(elems[i]);
      for (std::size_t j = 0; j < F.n(); ++j) m.at(i, j) = elems[i].digits()[j];
    }
    return Subspace(F, std::move(m));
  }

  const FieldCtx& ctx() const { return *ctx_; }
  std::size_t dim() const { return mat_.rows; }
  const FqMatrix& basis() const { return mat_; }

  std::vector<FieldElement> basis_elements() const {
    std::vector<FieldElement> out;
    out.reserve(mat_.rows);
    for (std::size_t r = 0; r < mat_.rows; ++r) {
      std::vector<fq_t> d(mat_.cols);
      for (std::size_t c = 0; c < mat_.cols; ++c) d[c] = mat_.at(r, c);
      out.push_back(ctx_->from_digits(std::move(d)));
    }
    return out;
  }

  bool contains(const FieldElement& z) const {
    ctx_->same(z);
    std::vector<fq_t> v(z.digits().begin(), z.digits().end());
    reduce(v);
    return std::all_of(v.begin(), v.end(), [](fq_t x) { return x == 0; });
  }

  bool contains(const Subspace& other) const {
    for (const auto& e : other.basis_elements())
      if (!contains(e)) return false;
    return true;
  }

  bool operator==(const Subspace& o) const {
    return ctx_->compatible(*o.ctx_) && mat_ == o.mat_;
  }

  // Visit every element (q^dim of them); intended for small spaces in tests.
  template <class Fn>
  void for_each_element(Fn&& fn) const {
    const auto q = ctx_->q();
    std::vector<fq_t> sel(mat_.rows, 0);
    std::vector<fq_t> acc(mat_.cols, 0);
    while (true) {
      std::vector<fq_t> d(acc);
      fn(ctx_->from_digits(std::move(d)));
      std::size_t i = 0;
      for (; i < sel.size(); ++i) {
        sel[i]++;
        for (std::size_t c = 0; c < mat_.cols; ++c)
          acc[c] = ctx_->fq_add(acc[c], mat_.at(i, c));
        if (sel[i] < q) break;
        sel[i] = 0;  // acc has wrapped around to the previous value for digit i
      }
      if (i == sel.size()) break;
    }
  }

 private:
  void reduce(std::vector<fq_t>& v) const {
    for (std::size_t r = 0; r < mat_.rows; ++r) {
      std::size_t pc = 0;
      while (pc < mat_.cols && mat_.at(r, pc) == 0) ++pc;
      if (pc == mat_.cols) continue;
      const fq_t c = v[pc];
      if (c == 0) continue;
      for (std::size_t j = pc; j < mat_.cols; ++j)
        v[j] = ctx_->fq_sub(v[j], ctx_->fq_mul(c, mat_.at(r, j)));
    }
  }

  const FieldCtx* ctx_;
  FqMatrix mat_;
};

// ---------------------------------------------------------------------------
// Ordered F_q-basis of F_{q^n} with coordinate extraction.

class Basis {
 public:
  Basis(const FieldCtx& F, std::vector<FieldElement> elems) : ctx_(&F), elems_(std::move(elems)) {
    check(elems_.size() == F.n(), errc::not_a_basis, "basis needs exactly n elements");
    FqMatrix P(F.n(), F.n());
    for (std::size_t j = 0; j < elems_.size(); ++j) {
      F.same(elems_[j]);
      for (std::size_t i = 0; i < F.n(); ++i) P.at(i, j) = elems_[j].digits()[i];
    }
    auto inv = fq_inverse(F, P);
    check(inv.has_value(), errc::not_a_basis, "elements are F_q-dependent");
    inv_ = std::move(*inv);
  }

  static Basis polynomial(const FieldCtx& F) {
    std::vector<FieldElement> e;
    e.reserve(F.n());
    for (std::uint32_t j = 0; j < F.n(); ++j) {
      std::vector<fq_t> d(F.n(), 0);
      d[j] = 1;
      e.push_back(F.from_digits(std::move(d)));
    }
    return Basis(F, std::move(e));
  }

  const FieldCtx& ctx() const { return *ctx_; }
  const std::vector<FieldElement>& elements() const { return elems_; }

  std::vector<fq_t> coordinates(const FieldElement& z) const {
    ctx_->same(z);
    return fq_mat_vec(*ctx_, inv_, z.digits());
  }

  FieldElement combine(std::span<const fq_t> coords) const {
    check(coords.size() == elems_.size(), errc::degree_mismatch, "coordinate count");
    FieldElement acc = ctx_->zero();
    for (std::size_t j = 0; j < elems_.size(); ++j)
      if (coords[j]) acc = acc + ctx_->embed_fq(coords[j]) * elems_[j];
    return acc;
  }

 private:
  const FieldCtx* ctx_;
  std::vector<FieldElement> elems_;
  FqMatrix inv_;
};

// ---------------------------------------------------------------------------
// Conventional polynomials over F_q (the q-associate side).

class ConventionalPoly {
 public:
  ConventionalPoly(const FieldCtx& F, std::vector<fq_t> coeffs) : ctx_(&F), c_(std::move(coeffs)) {
    for (auto v : c_)
      check(v < F.q(), errc::index_out_of_range, "coefficient index out of range for F_q");
    detail::poly_trim(c_);
  }
  static ConventionalPoly zero(const FieldCtx& F) { return ConventionalPoly(F, {}); }
  static ConventionalPoly one(const FieldCtx& F) { return ConventionalPoly(F, {1}); }

  const FieldCtx& ctx() const { return *ctx_; }
  const std::vector<fq_t>& coeffs() const { return c_; }
  int degree() const { return detail::poly_deg(c_); }
  bool is_zero() const { return c_.empty(); }
  fq_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }

  bool operator==(const ConventionalPoly& o) const {
    return ctx_->compatible(*o.ctx_) && c_ == o.c_;
  }

 private:
  const FieldCtx* ctx_;
  std::vector<fq_t> c_;
};

inline ConventionalPoly conv_add(const ConventionalPoly& a, const ConventionalPoly& b) {
  const FieldCtx& F = FieldCtx::require_same(a.ctx(), b.ctx());
  return ConventionalPoly(F, detail::poly_add(F.fq_view(), a.coeffs(), b.coeffs()));
}

inline ConventionalPoly conv_mul(const ConventionalPoly& a, const ConventionalPoly& b) {
  const FieldCtx& F = FieldCtx::require_same(a.ctx(), b.ctx());
  return ConventionalPoly(F, detail::poly_mul(F.fq_view(), a.coeffs(), b.coeffs()));
}

inline ConventionalPoly conv_mod(const ConventionalPoly& a, const ConventionalPoly& mod) {
  const FieldCtx& F = FieldCtx::require_same(a.ctx(), mod.ctx());
  return ConventionalPoly(F, detail::poly_mod(F.fq_view(), a.coeffs(), mod.coeffs()));
}

inline ConventionalPoly conv_pow_mod(const ConventionalPoly& a, std::uint64_t e,
                                     const ConventionalPoly& mod) {
  const FieldCtx& F = FieldCtx::require_same(a.ctx(), mod.ctx());
  return ConventionalPoly(F, detail::poly_powmod(F.fq_view(), a.coeffs(), e, mod.coeffs()));
}

// x^n - 1 over F_q.
inline ConventionalPoly conv_xn_minus_1(const FieldCtx& F) {
  std::vector<fq_t> c(F.n() + 1, 0);
  c[0] = F.fq_neg(1);
  c[F.n()] = 1;
  return ConventionalPoly(F, std::move(c));
}

// ---------------------------------------------------------------------------
// Linearized polynomials, reduced mod x^{q^n} - x.

class LinearizedPoly {
 public:
  // Terms with q-degree i >= n fold onto i mod n (x^{q^{n+r}} = x^{q^r} mod
  // x^{q^n}-x), so any coefficient list is accepted.
  LinearizedPoly(const FieldCtx& F, const std::vector<FieldElement>& coeffs) : ctx_(&F) {
    a_.assign(F.n(), F.zero());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      F.same(coeffs[i]);
      const std::size_t k = i % F.n();
      a_[k] = a_[k] + coeffs[i];
    }
  }

  static LinearizedPoly zero(const FieldCtx& F) { return LinearizedPoly(F, {}); }
  static LinearizedPoly identity(const FieldCtx& F) { return monomial(F, 0, F.one()); }
  static LinearizedPoly monomial(const FieldCtx& F, std::uint32_t qdeg, const FieldElement& c) {
    std::vector<FieldElement> v(static_cast<std::size_t>(qdeg % F.n()) + 1, F.zero());
    v.back() = c;
    return LinearizedPoly(F, v);
  }

  const FieldCtx& ctx() const { return *ctx_; }
  const std::vector<FieldElement>& coeffs() const { return a_; }
  const FieldElement& coeff(std::size_t i) const { return a_[i]; }

  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const FieldElement& c) { return c.is_zero(); });
  }
  bool coeffs_in_base_field() const {
    return std::all_of(a_.begin(), a_.end(),
                       [&](const FieldElement& c) { return ctx_->in_base_field(c); });
  }

  // Evaluation: sum a_i z^{q^i} via iterated Frobenius.
  FieldElement operator()(const FieldElement& z) const {
    ctx_->same(z);
    FieldElement acc = ctx_->zero();
    FieldElement conj = z;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i) conj = ctx_->frobenius(conj, 1);
      if (!a_[i].is_zero()) acc = acc + a_[i] * conj;
    }
    return acc;
  }

  LinearizedPoly operator+(const LinearizedPoly& o) const {
    FieldCtx::require_same(*ctx_, *o.ctx_);
    LinearizedPoly r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = r.a_[i] + o.a_[i];
    return r;
  }
  LinearizedPoly operator-(const LinearizedPoly& o) const {
    FieldCtx::require_same(*ctx_, *o.ctx_);
    LinearizedPoly r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = r.a_[i] - o.a_[i];
    return r;
  }
  LinearizedPoly operator-() const {
    LinearizedPoly r = *this;
    for (auto& c : r.a_) c = -c;
    return r;
  }
  friend LinearizedPoly operator*(const FieldElement& s, const LinearizedPoly& L) {
    LinearizedPoly r = L;
    for (auto& c : r.a_) c = s * c;
    return r;
  }
  bool operator==(const LinearizedPoly& o) const {
    return ctx_->compatible(*o.ctx_) && a_ == o.a_;
  }
  bool operator!=(const LinearizedPoly& o) const { return !(*this == o); }

 private:
  const FieldCtx* ctx_;
  std::vector<FieldElement> a_;
};

// Composition as reduced symbolic product:
// (L ∘ M)_k = sum_{i+j = k mod n} L_i * M_j^{q^i}.
inline LinearizedPoly symbolic_product(const LinearizedPoly& L, const LinearizedPoly& M) {
  const FieldCtx& F = FieldCtx::require_same(L.ctx(), M.ctx());
  const std::uint32_t n = F.n();
  std::vector<FieldElement> c(n, F.zero());
  std::vector<FieldElement> conj(M.coeffs().begin(), M.coeffs().end());  // M_j^{q^i}
  for (std::uint32_t i = 0; i < n; ++i) {
    if (i)
      for (auto& v : conj) v = F.frobenius(v, 1);
    if (L.coeff(i).is_zero()) continue;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (conj[j].is_zero()) continue;
      const std::uint32_t k = (i + j) % n;
      c[k] = c[k] + L.coeff(i) * conj[j];
    }
  }
  return LinearizedPoly(F, c);
}

inline LinearizedPoly symbolic_power(const LinearizedPoly& L, std::uint32_t t) {
  LinearizedPoly r = LinearizedPoly::identity(L.ctx());
  for (std::uint32_t i = 0; i < t; ++i) r = symbolic_product(L, r);
  return r;
}

// q-associate maps. The linearized -> conventional direction requires all
// coefficients in F_q.
inline ConventionalPoly conventional_associate(const LinearizedPoly& L) {
  const FieldCtx& F = L.ctx();
  std::vector<fq_t> c(F.n(), 0);
  for (std::size_t i = 0; i < F.n(); ++i) {
    const auto v = F.as_fq(L.coeff(i));
    check(v.has_value(), errc::coefficients_not_in_base_field,
          "coefficient outside F_q has no conventional associate");
    c[i] = *v;
  }
  return ConventionalPoly(F, std::move(c));
}

inline LinearizedPoly linearized_associate(const ConventionalPoly& l) {
  const FieldCtx& F = l.ctx();
  std::vector<FieldElement> c;
  c.reserve(l.coeffs().size());
  for (auto v : l.coeffs()) c.push_back(F.embed_fq(v));
  return LinearizedPoly(F, c);  // folds degrees >= n
}

// Matrix of the induced F_q-linear map in basis B (column j = coords of L(w_j)).
inline FqMatrix to_matrix(const LinearizedPoly& L, const Basis& B) {
  const FieldCtx& F = FieldCtx::require_same(L.ctx(), B.ctx());
  FqMatrix M(F.n(), F.n());
  for (std::size_t j = 0; j < F.n(); ++j) {
    const auto col = B.coordinates(L(B.elements()[j]));
    for (std::size_t i = 0; i < F.n(); ++i) M.at(i, j) = col[i];
  }
  return M;
}

// Unique linearized polynomial inducing the map M in basis B: solve the
// Moore-type system D a = b over F_{q^n}, D_{ij} = w_i^{q^j}, b_i = M(w_i).
inline LinearizedPoly from_matrix(const FqMatrix& M, const Basis& B) {
  const FieldCtx& F = B.ctx();
  const std::size_t n = F.n();
  check(M.rows == n && M.cols == n, errc::degree_mismatch, "matrix must be n x n");
  std::vector<std::vector<FieldElement>> D(n);
  std::vector<FieldElement> b;
  b.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    D[i].reserve(n + 1);
    for (std::size_t j = 0; j < n; ++j) D[i].push_back(F.frobenius(B.elements()[i], static_cast<std::int64_t>(j)));
    std::vector<fq_t> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = M.at(r, i);
    b.push_back(B.combine(col));
  }
  // Gaussian elimination over the extension field.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = n;
    for (std::size_t r = col; r < n; ++r)
      if (!D[r][col].is_zero()) { sel = r; break; }
    check(sel != n, errc::internal_inconsistency, "Moore matrix unexpectedly singular");
    std::swap(D[col], D[sel]);
    std::swap(b[col], b[sel]);
    const FieldElement piv_inv = D[col][col].inv();
    for (std::size_t c = col; c < n; ++c) D[col][c] = piv_inv * D[col][c];
    b[col] = piv_inv * b[col];
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || D[r][col].is_zero()) continue;
      const FieldElement f = D[r][col];
      for (std::size_t c = col; c < n; ++c) D[r][c] = D[r][c] - f * D[col][c];
      b[r] = b[r] - f * b[col];
    }
  }
  return LinearizedPoly(F, b);
}

struct KernelImage {
  Subspace kernel;
  Subspace image;
};

inline KernelImage kernel_image(const LinearizedPoly& L) {
  const FieldCtx& F = L.ctx();
  const FqMatrix M = to_matrix(L, Basis::polynomial(F));
  FqMatrix cols_as_rows(F.n(), F.n());
  for (std::size_t i = 0; i < F.n(); ++i)
    for (std::size_t j = 0; j < F.n(); ++j) cols_as_rows.at(j, i) = M.at(i, j);
  return KernelImage{Subspace(F, fq_nullspace(F, M)), Subspace(F, std::move(cols_as_rows))};
}

inline bool is_permutation(const LinearizedPoly& L) {
  return fq_rank(L.ctx(), to_matrix(L, Basis::polynomial(L.ctx()))) == L.ctx().n();
}

// F_p-coordinate matrix of L (mn x mn), for whole-field sweeps.
inline FpLinearMap fp_matrix(const LinearizedPoly& L) {
  const FieldCtx& F = L.ctx();
  const std::uint32_t d = F.coord_dim();
  FpLinearMap M(F.p(), d);
  std::vector<std::uint32_t> unit(d, 0), img(d);
  for (std::uint32_t k = 0; k < d; ++k) {
    std::fill(unit.begin(), unit.end(), 0);
    unit[k] = 1;
    F.to_coords(L(F.from_coords(unit)), img);
    for (std::uint32_t r = 0; r < d; ++r) M.set(r, k, img[r]);
  }
  return M;
}

}  // namespace nlpoly

#pragma once

// Fixed-point-free involutions f(x) = L(x) + x + a over binary fields, where
// L is a 2-NLP and the shift a lies in the kernel of L but outside its value
// set, plus S-box table export (raw / C array / JSON).

#include <bit>
#include <cstdint>
#include <iomanip>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cycles.hpp"
#include "io.hpp"

namespace nlpoly {

struct InvolutionSpec {
  NlpCertificate nlp;
  FieldElement a;  // in Z_L \ V_L
  AffinePerm f;    // L(x) + x + a
};

// Least-index element of Z_L \ V_L, or absent when the two coincide.
// Exact linear algebra, no enumeration: the element index is the base-p value
// of the F_p coordinate vector, so reduce an F_p basis of Z_L to echelon form
// pivoting on the *highest* coordinate. Each reduced row is then the minimum
// of its leading-coordinate stratum, and the first row (by ascending pivot)
// that escapes V_L is the overall minimum of Z_L \ V_L: every smaller member
// of Z_L is a combination of earlier rows, which all lie inside V_L.
inline std::optional<FieldElement> find_shift(const NlpCertificate& cert) {
  const FieldCtx& F = cert.L.ctx();
  check(F.p() == 2, errc::not_char2, "involutions of this shape need characteristic 2");
  check(cert.t == 2, errc::not_a_2nlp, "shift search requires a 2-NLP");
  const auto [kernel, image] = kernel_image(cert.L);

  // F_p basis of the kernel: F_q basis rows times the base-field monomials.
  const std::uint32_t dim = F.coord_dim();
  std::vector<std::vector<std::uint32_t>> rows;
  std::vector<std::uint32_t> buf(dim);
  for (const auto& b : kernel.basis_elements())
    for (std::uint32_t i = 0; i < F.m(); ++i) {
      fq_t scalar = 1;
      for (std::uint32_t j = 0; j < i; ++j) scalar = static_cast<fq_t>(scalar * F.p());
      F.to_coords(F.embed_fq(scalar) * b, buf);
      rows.push_back(buf);
    }

  // Echelon form over F_2 with pivots scanned from the top coordinate down.
  std::vector<std::pair<std::uint32_t, std::size_t>> pivots;  // (top coord, row)
  std::size_t done = 0;
  for (std::uint32_t col = dim; col-- > 0 && done < rows.size();) {
    std::size_t sel = rows.size();
    for (std::size_t r = done; r < rows.size(); ++r)
      if (rows[r][col]) { sel = r; break; }
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[done]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == done || !rows[r][col]) continue;
      for (std::uint32_t c = 0; c < dim; ++c) rows[r][c] ^= rows[done][c];
    }
    pivots.emplace_back(col, done);
    ++done;
  }

  std::sort(pivots.begin(), pivots.end());
  for (const auto& [top, r] : pivots) {
    const FieldElement cand = F.from_coords(rows[r]);
    if (!image.contains(cand)) return cand;
  }
  return std::nullopt;
}

inline InvolutionSpec build_involution(const NlpCertificate& cert, const FieldElement& a) {
  const FieldCtx& F = cert.L.ctx();
  F.same(a);
  check(F.p() == 2, errc::not_char2, "involutions of this shape need characteristic 2");
  check(cert.t == 2, errc::not_a_2nlp, "involution construction requires a 2-NLP");
  check(cert.L(a).is_zero(), errc::shift_in_kernel_image, "shift must lie in the kernel of L");
  check(!kernel_image(cert.L).image.contains(a), errc::shift_in_kernel_image,
        "shift must avoid the value set of L");
  return InvolutionSpec{cert, a,
                        AffinePerm(cert.L + LinearizedPoly::identity(F), a)};
}

// Exact fixed-point-freeness: f(z) = z reduces to L(z) = a, solvable iff a
// lies in the value set — excluded by construction.
inline bool fixed_point_free_certificate(const InvolutionSpec& spec) {
  return !kernel_image(spec.nlp.L).image.contains(spec.a);
}

// Sampled sanity check on large fields: f(f(z)) = z and f(z) != z.
inline bool sample_involution_check(const InvolutionSpec& spec, std::size_t count,
                                    std::uint64_t seed) {
  const FieldCtx& F = spec.nlp.L.ctx();
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<fq_t> d(F.n());
    for (auto& v : d) v = static_cast<fq_t>(rng() % F.q());
    const FieldElement z = F.from_digits(std::move(d));
    const FieldElement fz = spec.f(z);
    if (fz == z || !(spec.f(fz) == z)) return false;
  }
  return true;
}

// The low-weight family over F_{2^{4m}}:
//   L = x^{2^{3m}} + x^{2^{2m}} + x^{2^m} + x   (relative trace to F_{2^m})
//   a = b^{2^m} + b for the field generator b.
// a always lies in Z_L \ F_{2^m}: a in F_{2^m} would force b into F_{2^{2m}},
// contradicting that b generates the whole field.
inline InvolutionSpec sparse_involution(const FieldCtx& F) {
  check(F.p() == 2, errc::not_char2, "sparse involutions live over binary fields");
  check(F.m() == 1 && F.n() % 4 == 0, errc::bad_family,
        "sparse family needs q = 2 and extension degree 4m");
  const std::uint32_t quarter = F.n() / 4;
  const NlpCertificate cert = nlp_trace(F.one(), quarter);
  const FieldElement b = F.gen();
  return build_involution(cert, F.frobenius(b, quarter) + b);
}

// Classic irreducible pentanomial x^32 + x^7 + x^3 + x^2 + 1 for the
// 32-bit field (F_p coefficients, ascending degree).
inline std::vector<std::uint32_t> sparse32_modulus() {
  std::vector<std::uint32_t> c(33, 0);
  c[0] = c[2] = c[3] = c[7] = 1;
  c[32] = 1;
  return c;
}

struct OwnedInvolution {
  std::unique_ptr<FieldCtx> field;
  InvolutionSpec spec;
};

inline OwnedInvolution sparse_involution(std::uint32_t m_quarter,
                                         std::optional<std::vector<fq_t>> modulus = std::nullopt) {
  check(m_quarter >= 1, errc::bad_family, "sparse family needs m >= 1");
  auto field = std::make_unique<FieldCtx>(2, 1, 4 * m_quarter, std::nullopt, std::move(modulus));
  InvolutionSpec spec = sparse_involution(*field);
  return OwnedInvolution{std::move(field), std::move(spec)};
}

// ---------------------------------------------------------------------------
// S-box export.

enum class SboxFormat { raw, carray, json };

struct SboxMeta {
  std::string family;
  bool involution = false;
  bool fixed_point_free = false;
};

// Bytes per table record: enough for the largest element index.
inline std::size_t sbox_record_bytes(const FieldCtx& F) {
  const auto size = F.size();
  check(size.has_value(), errc::field_too_large_for_table, "element indices exceed 64 bits");
  const idx_t max_index = *size - 1;
  const int bits = max_index == 0 ? 1 : std::bit_width(max_index);
  return static_cast<std::size_t>((bits + 7) / 8);
}

namespace detail {

inline idx_t sbox_table_size(const FieldCtx& F, idx_t budget) {
  const auto size = F.size();
  check(size.has_value() && *size <= budget, errc::field_too_large_for_table,
        "table would exceed the export budget");
  return *size;
}

inline idx_t sbox_entry(const AffinePerm& f, idx_t i) {
  return f.ctx().index(f(f.ctx().from_index(i)));
}

}  // namespace detail

// Header: magic "NLPS", u8 version = 1, u8 p, u8 m, u16 n little-endian,
// then q^n records of sbox_record_bytes little-endian each.
inline std::vector<std::uint8_t> export_sbox_raw(const AffinePerm& f,
                                                 idx_t budget = idx_t{1} << 28) {
  const FieldCtx& F = f.ctx();
  check(F.p() <= 0xff && F.m() <= 0xff && F.n() <= 0xffff, errc::field_too_large_for_table,
        "field parameters do not fit the raw header");
  const idx_t total = detail::sbox_table_size(F, budget);
  const std::size_t rec = sbox_record_bytes(F);
  std::vector<std::uint8_t> out;
  out.reserve(9 + total * rec);
  for (char c : {'N', 'L', 'P', 'S'}) out.push_back(static_cast<std::uint8_t>(c));
  out.push_back(1);
  out.push_back(static_cast<std::uint8_t>(F.p()));
  out.push_back(static_cast<std::uint8_t>(F.m()));
  out.push_back(static_cast<std::uint8_t>(F.n() & 0xff));
  out.push_back(static_cast<std::uint8_t>(F.n() >> 8));
  for (idx_t i = 0; i < total; ++i) {
    idx_t v = detail::sbox_entry(f, i);
    for (std::size_t b = 0; b < rec; ++b) {
      out.push_back(static_cast<std::uint8_t>(v & 0xff));
      v >>= 8;
    }
  }
  return out;
}

inline std::string export_sbox_carray(const AffinePerm& f, const SboxMeta& meta,
                                      idx_t budget = idx_t{1} << 28) {
  const FieldCtx& F = f.ctx();
  const idx_t total = detail::sbox_table_size(F, budget);
  const std::size_t rec = sbox_record_bytes(F);
  const char* type = rec == 1 ? "uint8_t" : rec == 2 ? "uint16_t" : rec <= 4 ? "uint32_t" : "uint64_t";
  std::ostringstream os;
  os << "/* S-box over " << F.spec_string() << "; f(x) = " << to_string(f)
     << "; family = " << meta.family << "; involution = " << (meta.involution ? "yes" : "no")
     << "; fixed_point_free = " << (meta.fixed_point_free ? "yes" : "no") << " */\n";
  os << "static const " << type << " SBOX[" << total << "] = {\n";
  const int width = static_cast<int>(2 * rec);
  for (idx_t i = 0; i < total; ++i) {
    if (i % 8 == 0) os << "  ";
    os << "0x" << std::hex << std::setw(width) << std::setfill('0')
       << detail::sbox_entry(f, i) << std::dec;
    if (i + 1 != total) os << ',';
    os << ((i % 8 == 7 || i + 1 == total) ? '\n' : ' ');
  }
  os << "};\n";
  return os.str();
}

// JSON with a metadata header; fields above the budget get a functional
// description instead of a materialized table.
inline std::string export_sbox_json(const AffinePerm& f, const SboxMeta& meta,
                                    idx_t budget = idx_t{1} << 28) {
  const FieldCtx& F = f.ctx();
  nlohmann::ordered_json j;
  j["field"] = F.spec_string();
  j["p"] = F.p();
  j["m"] = F.m();
  j["n"] = F.n();
  j["polynomial"] = to_string(f);
  j["family"] = meta.family;
  j["involution"] = meta.involution;
  j["fixed_point_free"] = meta.fixed_point_free;
  const auto size = F.size();
  if (size) j["size"] = *size;
  if (size && *size <= budget) {
    std::vector<idx_t> table(static_cast<std::size_t>(*size));
    for (idx_t i = 0; i < *size; ++i) table[static_cast<std::size_t>(i)] = detail::sbox_entry(f, i);
    j["table"] = std::move(table);
  } else {
    j["functional"] = "z -> " + to_string(f) + " evaluated at x = z";
  }
  return j.dump(2) + "\n";
}

}  // namespace nlpoly

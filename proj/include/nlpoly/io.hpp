#pragma once

// Text form of polynomials and a small line-based file format:
//   # comment
//   field <spec>
//   lin <n element indices, ascending q-degree>
//   conv <coefficient indices, ascending degree>
//   meta <key> <value...>

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "perm.hpp"

namespace nlpoly {

// "x^9 + 2*x^3 + x" style, highest power first; coefficients are printed as
// element indices, suppressed when 1.
inline std::string to_string(const ConventionalPoly& c) {
  if (c.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.coeffs().size(); i-- > 0;) {
    const fq_t v = c.coeff(i);
    if (v == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (v != 1 || i == 0) os << v;
    if (v != 1 && i > 0) os << '*';
    if (i == 1) os << "x";
    else if (i > 1) os << "x^" << i;
  }
  return os.str();
}

// Monomials x^{q^i} with the powers expanded to integers where they fit.
inline std::string to_string(const LinearizedPoly& L) {
  const FieldCtx& F = L.ctx();
  if (L.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = F.n(); i-- > 0;) {
    const FieldElement& c = L.coeff(i);
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    const bool unit = (c == F.one());
    if (!unit) os << '[' << F.index(c) << "]*";
    if (i == 0) {
      os << 'x';
    } else if (const auto pw = detail::checked_pow(F.q(), i)) {
      os << "x^" << *pw;
    } else {
      os << "x^(q^" << i << ')';
    }
  }
  return os.str();
}

inline std::string to_string(const AffinePerm& f) {
  std::string s = to_string(f.linear());
  if (!f.shift().is_zero())
    s += " + [" + std::to_string(f.ctx().index(f.shift())) + ']';
  return s;
}

struct PolyFile {
  std::unique_ptr<FieldCtx> field;
  std::optional<LinearizedPoly> lin;
  std::optional<ConventionalPoly> conv;
  std::map<std::string, std::string> meta;
};

inline PolyFile read_poly_file(std::istream& in) {
  PolyFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    const std::string where = " (line " + std::to_string(lineno) + ")";
    if (tag == "field") {
      check(!out.field, errc::bad_poly_file, "duplicate field line" + where);
      std::string spec;
      check(static_cast<bool>(ls >> spec), errc::bad_poly_file, "missing field spec" + where);
      out.field = FieldSpec::parse(spec).create();
    } else if (tag == "lin") {
      check(static_cast<bool>(out.field), errc::bad_poly_file,
            "lin before field line" + where);
      std::vector<FieldElement> coeffs;
      idx_t v;
      while (ls >> v) coeffs.push_back(out.field->from_index(v));
      check(coeffs.size() == out.field->n(), errc::bad_poly_file,
            "lin needs exactly n coefficient indices" + where);
      out.lin = LinearizedPoly(*out.field, coeffs);
      check(ls.eof(), errc::bad_poly_file, "malformed lin coefficients" + where);
    } else if (tag == "conv") {
      check(static_cast<bool>(out.field), errc::bad_poly_file,
            "conv before field line" + where);
      std::vector<fq_t> coeffs;
      std::uint64_t v;
      while (ls >> v) {
        check(v < out.field->q(), errc::bad_poly_file,
              "conv coefficient out of range" + where);
        coeffs.push_back(static_cast<fq_t>(v));
      }
      check(ls.eof(), errc::bad_poly_file, "malformed conv coefficients" + where);
      out.conv = ConventionalPoly(*out.field, std::move(coeffs));
    } else if (tag == "meta") {
      std::string key;
      check(static_cast<bool>(ls >> key), errc::bad_poly_file, "meta needs a key" + where);
      std::string rest;
      std::getline(ls, rest);
      const auto pos = rest.find_first_not_of(" \t");
      out.meta[key] = pos == std::string::npos ? "" : rest.substr(pos);
    } else {
      fail(errc::bad_poly_file, "unknown line tag '" + tag + "'" + where);
    }
  }
  check(static_cast<bool>(out.field), errc::bad_poly_file, "file has no field line");
  return out;
}

inline void write_poly_file(std::ostream& os, const FieldCtx& F,
                            const std::optional<LinearizedPoly>& lin,
                            const std::optional<ConventionalPoly>& conv,
                            const std::map<std::string, std::string>& meta) {
  os << "field " << F.spec_string() << '\n';
  if (lin) {
    os << "lin";
    for (const auto& c : lin->coeffs()) os << ' ' << F.index(c);
    os << '\n';
  }
  if (conv) {
    os << "conv";
    for (auto c : conv->coeffs()) os << ' ' << c;
    os << '\n';
  }
  for (const auto& [k, v] : meta) os << "meta " << k << ' ' << v << '\n';
}

}  // namespace nlpoly

// Command-line frontend: construct and verify nilpotent linearized
// polynomials, build permutations with closed-form inverses, decompose cycle
// structures, build fixed-point-free involutions, and export S-box tables.
//
// Output contract: human-readable `key: value` lines on stdout; files only
// via --out; identical arguments produce byte-identical outputs. Errors exit
// nonzero with a stable machine-readable code on stderr.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlpoly/involution.hpp"

using namespace nlpoly;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t parse_num(const std::string& s, const std::string& what) {
  check(!s.empty() && s.find_first_not_of("0123456789") == std::string::npos, errc::cli_usage,
        what + " must be a decimal number, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (...) {
    fail(errc::cli_usage, what + " out of range: '" + s + "'");
  }
}

// "key1=v1,key2=v2" with unicode parameter aliases folded to ASCII names.
std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  if (text.empty()) return kv;
  for (const auto& part : split(text, ',')) {
    const auto eq = part.find('=');
    check(eq != std::string::npos, errc::cli_usage,
          "family parameters are key=value pairs, got '" + part + "'");
    std::string key = part.substr(0, eq);
    if (key == "θ") key = "theta";  // θ
    if (key == "α") key = "alpha";  // α
    if (key == "β") key = "beta";   // β
    if (key == "m'") key = "m";
    kv[key] = part.substr(eq + 1);
  }
  return kv;
}

std::string kv_get(const std::map<std::string, std::string>& kv, const std::string& key,
                   const std::string& fam) {
  const auto it = kv.find(key);
  check(it != kv.end(), errc::cli_usage, fam + " family needs a " + key + "= parameter");
  return it->second;
}

// Family grammar:
//   trace:theta=<idx>,m=<int>
//   alphabeta:alpha=<idx>,beta=<idx>
//   basefield:r=<coeff>[.<coeff>...],t=<int>
//   valueset:<digit>.<digit>...[;<row>...]
// (sparse:m=<int> is handled by the involution/export paths.)
NlpCertificate parse_family(const FieldCtx& F, const std::string& text) {
  check(!text.empty(), errc::cli_usage, "--family is required");
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (name == "trace") {
    const auto kv = parse_kv(rest);
    return nlp_trace(F.from_index(parse_num(kv_get(kv, "theta", name), "theta")),
                     static_cast<std::uint32_t>(parse_num(kv_get(kv, "m", name), "m")));
  }
  if (name == "alphabeta") {
    const auto kv = parse_kv(rest);
    return nlp_alpha_beta(F.from_index(parse_num(kv_get(kv, "alpha", name), "alpha")),
                          F.from_index(parse_num(kv_get(kv, "beta", name), "beta")));
  }
  if (name == "basefield") {
    const auto kv = parse_kv(rest);
    std::vector<fq_t> r;
    for (const auto& v : split(kv_get(kv, "r", name), '.')) {
      const auto c = parse_num(v, "r coefficient");
      check(c < F.q(), errc::cli_usage, "r coefficient must be an F_q index below q");
      r.push_back(static_cast<fq_t>(c));
    }
    return nlp_base_field(ConventionalPoly(F, std::move(r)),
                          static_cast<std::uint32_t>(parse_num(kv_get(kv, "t", name), "t")));
  }
  if (name == "valueset") {
    std::vector<FieldElement> rows;
    for (const auto& row : split(rest, ';')) {
      std::vector<fq_t> digits;
      for (const auto& d : split(row, '.')) {
        const auto v = parse_num(d, "valueset digit");
        check(v < F.q(), errc::cli_usage, "valueset digit must be an F_q index below q");
        digits.push_back(static_cast<fq_t>(v));
      }
      check(digits.size() == F.n(), errc::cli_usage,
            "valueset rows need exactly n dot-separated digits");
      rows.push_back(F.from_digits(std::move(digits)));
    }
    return nlp_from_valueset(Subspace::span_of(F, rows));
  }
  fail(errc::cli_usage, "unknown family '" + name + "'");
}

struct KFlags {
  std::optional<std::uint64_t> alpha, beta, gamma;
};

// k from flags: alpha/beta -> alpha*Tr + beta*x, gamma -> gamma*x, default x.
// Returns the scalar when k is a scaling, for cycle prediction.
std::pair<LinearizedPoly, std::optional<FieldElement>> make_k(const FieldCtx& F,
                                                              const KFlags& kf) {
  check(!(kf.gamma && (kf.alpha || kf.beta)), errc::cli_usage,
        "--gamma cannot be combined with --alpha/--beta");
  check(kf.alpha.has_value() == kf.beta.has_value(), errc::cli_usage,
        "--alpha and --beta must be given together");
  if (kf.alpha) {
    check(*kf.alpha < F.q() && *kf.beta < F.q(), errc::cli_usage,
          "--alpha/--beta must be F_q indices below q");
    const FieldElement a = F.embed_fq(static_cast<fq_t>(*kf.alpha));
    const FieldElement b = F.embed_fq(static_cast<fq_t>(*kf.beta));
    return {a * absolute_trace(F) + LinearizedPoly::monomial(F, 0, b), std::nullopt};
  }
  const std::uint64_t g = kf.gamma.value_or(1);
  check(g < F.q(), errc::cli_usage, "--gamma must be an F_q index below q");
  const FieldElement ge = F.embed_fq(static_cast<fq_t>(g));
  return {LinearizedPoly::monomial(F, 0, ge), ge};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  check(os.good(), errc::io_error, "cannot open '" + path + "' for writing");
  os << text;
  os.flush();
  check(os.good(), errc::io_error, "failed writing '" + path + "'");
}

void write_bytes_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream os(path, std::ios::binary);
  check(os.good(), errc::io_error, "cannot open '" + path + "' for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  os.flush();
  check(os.good(), errc::io_error, "failed writing '" + path + "'");
}

void emit_sbox(const AffinePerm& f, const SboxMeta& meta, const std::string& fmt,
               const std::string& out, idx_t budget) {
  if (fmt == "raw") {
    check(!out.empty(), errc::cli_usage, "raw export needs --out");
    write_bytes_file(out, export_sbox_raw(f, budget));
  } else if (fmt == "carray") {
    const std::string text = export_sbox_carray(f, meta, budget);
    if (out.empty())
      std::cout << text;
    else
      write_text_file(out, text);
  } else if (fmt == "json") {
    const std::string text = export_sbox_json(f, meta, budget);
    if (out.empty())
      std::cout << text;
    else
      write_text_file(out, text);
  } else {
    fail(errc::cli_usage, "unknown export format '" + fmt + "' (raw|carray|json)");
  }
}

const char* yesno(bool b) { return b ? "yes" : "no"; }

// ---------------------------------------------------------------------------

struct Options {
  std::string field, family, poly, out, fmt;
  std::optional<std::uint64_t> t;
  KFlags k;
  idx_t budget = idx_t{1} << 28;
  std::uint64_t seed = 0;
};

std::unique_ptr<FieldCtx> make_field(const Options& opt) {
  check(!opt.field.empty(), errc::cli_usage, "--field is required");
  return FieldSpec::parse(opt.field).create();
}

std::map<std::string, std::string> certificate_meta(const FieldCtx& F,
                                                    const NlpCertificate& cert) {
  return {{"family", std::string(family_string(cert.family))},
          {"t", std::to_string(cert.t)},
          {"witness", std::to_string(F.index(cert.witness_nonzero))}};
}

void run_construct(const Options& opt) {
  const auto Fp = make_field(opt);
  const FieldCtx& F = *Fp;
  const NlpCertificate cert = parse_family(F, opt.family);
  std::cout << "field: " << F.spec_string() << "\n"
            << "polynomial: " << to_string(cert.L) << "\n"
            << "family: " << family_string(cert.family) << "\n"
            << "t: " << cert.t << "\n"
            << "witness: " << F.index(cert.witness_nonzero) << "\n";
  if (!opt.out.empty()) {
    std::ostringstream os;
    write_poly_file(os, F, cert.L, std::nullopt, certificate_meta(F, cert));
    write_text_file(opt.out, os.str());
  }
}

void run_verify(const Options& opt) {
  check(!opt.poly.empty(), errc::cli_usage, "verify needs --poly <file>");
  std::ifstream in(opt.poly, std::ios::binary);
  check(in.good(), errc::io_error, "cannot open '" + opt.poly + "'");
  const PolyFile pf = read_poly_file(in);
  check(pf.lin.has_value(), errc::bad_poly_file, "file has no lin polynomial");
  const FieldCtx& F = *pf.field;
  std::cout << "field: " << F.spec_string() << "\n"
            << "polynomial: " << to_string(*pf.lin) << "\n";
  const auto idx = nilpotency_index(*pf.lin);
  if (!idx || *idx < 2) {
    std::cout << "nilpotent: no\n";
    if (opt.t) std::cout << "within_t: no\n";
    return;
  }
  const NlpCertificate cert = certify(*pf.lin);
  std::cout << "nilpotent: yes\n"
            << "t: " << cert.t << "\n"
            << "witness: " << F.index(cert.witness_nonzero) << "\n";
  if (opt.t) std::cout << "within_t: " << yesno(cert.t <= *opt.t) << "\n";
}

void run_perm(const Options& opt) {
  const auto Fp = make_field(opt);
  const FieldCtx& F = *Fp;
  const NlpCertificate cert = parse_family(F, opt.family);
  const LinearizedPoly k = make_k(F, opt.k).first;
  const PermSpec spec = build_perm(cert, k);
  const LinearizedPoly combined = spec.combined();
  const LinearizedPoly inverse = comp_inverse(spec);
  const OrderPrediction ord = predicted_order(spec);
  const bool complete = is_complete(spec);
  std::cout << "field: " << F.spec_string() << "\n"
            << "family: " << family_string(cert.family) << "\n"
            << "L: " << to_string(cert.L) << "\n"
            << "k: " << to_string(k) << "\n"
            << "F: " << to_string(combined) << "\n"
            << "inverse: " << to_string(inverse) << "\n"
            << "t: " << spec.t() << "\n"
            << "s: " << spec.s << "\n"
            << "order_bound: " << ord.divisor_bound << "\n";
  if (ord.exact) std::cout << "order_exact: " << *ord.exact << "\n";
  std::cout << "complete: " << yesno(complete) << "\n";
  if (!opt.out.empty()) {
    auto meta = certificate_meta(F, cert);
    meta["s"] = std::to_string(spec.s);
    meta["order_bound"] = std::to_string(ord.divisor_bound);
    if (ord.exact) meta["order_exact"] = std::to_string(*ord.exact);
    meta["complete"] = yesno(complete);
    meta["k"] = to_string(k);
    meta["inverse"] = to_string(inverse);
    std::ostringstream os;
    write_poly_file(os, F, combined, std::nullopt, meta);
    write_text_file(opt.out, os.str());
  }
}

InvolutionSpec make_involution(const FieldCtx& F, const std::string& family) {
  if (family.rfind("sparse", 0) == 0 &&
      (family.size() == 6 || family[6] == ':')) {
    const auto kv = parse_kv(family.size() > 7 ? family.substr(7) : "");
    const auto it = kv.find("m");
    if (it != kv.end()) {
      const auto m = parse_num(it->second, "m");
      check(4 * m == F.n(), errc::bad_family,
            "sparse:m=" + it->second + " needs a field of extension degree " +
                std::to_string(4 * m));
    }
    return sparse_involution(F);
  }
  const NlpCertificate cert = parse_family(F, family);
  const auto a = find_shift(cert);
  check(a.has_value(), errc::shift_in_kernel_image,
        "kernel equals value set: no fixed-point-free shift exists");
  return build_involution(cert, *a);
}

void run_involution(const Options& opt) {
  const auto Fp = make_field(opt);
  const FieldCtx& F = *Fp;
  const InvolutionSpec spec = make_involution(F, opt.family);
  const bool fpf = fixed_point_free_certificate(spec);
  const bool invol =
      symbolic_product(spec.f.linear(), spec.f.linear()) == LinearizedPoly::identity(F);
  const SboxMeta meta{opt.family.rfind("sparse", 0) == 0
                          ? std::string("sparse")
                          : std::string(family_string(spec.nlp.family)),
                      invol, fpf};
  if (!opt.fmt.empty() && opt.out.empty()) {
    emit_sbox(spec.f, meta, opt.fmt, opt.out, opt.budget);
    return;
  }
  std::cout << "field: " << F.spec_string() << "\n"
            << "family: " << meta.family << "\n"
            << "f: " << to_string(spec.f) << "\n"
            << "a: " << F.index(spec.a) << "\n"
            << "involution: " << yesno(invol) << "\n"
            << "fixed_point_free: " << yesno(fpf) << "\n"
            << "samples_ok: " << yesno(sample_involution_check(spec, 64, opt.seed)) << "\n";
  if (!opt.fmt.empty()) emit_sbox(spec.f, meta, opt.fmt, opt.out, opt.budget);
}

// Exact involution / fixed-point tests for a general affine map f(z) = M(z)+a:
// f is an involution iff M^2 = id and M(a) = -a; f has a fixed point iff
// -a lies in the image of M - id.
void run_export(const Options& opt) {
  const auto Fp = make_field(opt);
  const FieldCtx& F = *Fp;
  check(!opt.fmt.empty(), errc::cli_usage, "export needs --export raw|carray|json");
  if (opt.family.rfind("sparse", 0) == 0) {
    const InvolutionSpec spec = make_involution(F, opt.family);
    emit_sbox(spec.f, SboxMeta{"sparse", true, true}, opt.fmt, opt.out, opt.budget);
    return;
  }
  const NlpCertificate cert = parse_family(F, opt.family);
  const LinearizedPoly k = make_k(F, opt.k).first;
  const PermSpec spec = build_perm(cert, k);
  const AffinePerm f(spec.combined());
  const LinearizedPoly id = LinearizedPoly::identity(F);
  const bool invol = symbolic_product(f.linear(), f.linear()) == id &&
                     (f.linear()(f.shift()) + f.shift()).is_zero();
  const bool fpf = !kernel_image(f.linear() - id).image.contains(-f.shift());
  emit_sbox(f, SboxMeta{std::string(family_string(cert.family)), invol, fpf}, opt.fmt,
            opt.out, opt.budget);
}

void run_cycles(const Options& opt) {
  const auto Fp = make_field(opt);
  const FieldCtx& F = *Fp;
  if (opt.family.rfind("sparse", 0) == 0) {
    const InvolutionSpec spec = make_involution(F, opt.family);
    const CycleStructure cs = cycle_structure(spec.f, opt.budget);
    std::cout << "field: " << F.spec_string() << "\n"
              << "F: " << to_string(spec.f) << "\n"
              << "cycle_type: " << cs.to_string() << "\n"
              << "order: " << cs.order() << "\n";
    return;
  }
  const NlpCertificate cert = parse_family(F, opt.family);
  const auto [k, gamma] = make_k(F, opt.k);
  const PermSpec spec = build_perm(cert, k);
  std::optional<CycleStructure> predicted;
  if (gamma && cert.t == 2) predicted = predict_linear_case(cert, *gamma);
  std::cout << "field: " << F.spec_string() << "\n"
            << "F: " << to_string(spec.combined()) << "\n";
  try {
    const CycleStructure cs = cycle_structure(spec, opt.budget);
    std::cout << "cycle_type: " << cs.to_string() << "\n"
              << "order: " << cs.order() << "\n";
    if (predicted) {
      std::cout << "predicted: " << predicted->to_string() << "\n"
                << "prediction_matches: " << yesno(cs == *predicted) << "\n";
    }
  } catch (const Error& e) {
    if (e.code() != errc::field_too_large || !predicted) throw;
    std::cout << "predicted: " << predicted->to_string() << "\n"
              << "note: enumeration skipped, field exceeds --budget\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nilpotent linearized polynomials: permutations, inverses, "
               "cycle structures, involutions, S-boxes"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&](CLI::App* sub, bool with_k) {
    sub->add_option("--field", opt.field, "field spec p^m:n[:g=<hex>][:f=<hex list>]");
    sub->add_option("--family", opt.family, "family parameters");
    sub->add_option("--out", opt.out, "write output file here");
    sub->add_option("--budget", opt.budget, "enumeration/table budget in elements");
    sub->add_option("--seed", opt.seed, "seed for sampled checks (default 0)");
    if (with_k) {
      sub->add_option("--alpha", opt.k.alpha, "k = alpha*Tr + beta*x (F_q index)");
      sub->add_option("--beta", opt.k.beta, "k = alpha*Tr + beta*x (F_q index)");
      sub->add_option("--gamma", opt.k.gamma, "k = gamma*x (F_q index)");
    }
  };

  auto* construct = app.add_subcommand("construct", "build an NLP and its certificate");
  add_common(construct, false);
  auto* verify = app.add_subcommand("verify", "check a polynomial file for nilpotency");
  verify->add_option("--poly", opt.poly, "polynomial file to verify");
  verify->add_option("--t", opt.t, "also check the index is within this bound");
  auto* perm = app.add_subcommand("perm", "build the permutation L + k with its inverse");
  add_common(perm, true);
  auto* cycles = app.add_subcommand("cycles", "cycle structure of L + k");
  add_common(cycles, true);
  auto* involution = app.add_subcommand("involution", "fixed-point-free involution L + x + a");
  add_common(involution, false);
  involution->add_option("--export", opt.fmt, "S-box format: raw|carray|json");
  auto* exp = app.add_subcommand("export", "write an S-box table");
  add_common(exp, true);
  exp->add_option("--export", opt.fmt, "S-box format: raw|carray|json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (construct->parsed()) run_construct(opt);
    if (verify->parsed()) run_verify(opt);
    if (perm->parsed()) run_perm(opt);
    if (cycles->parsed()) run_cycles(opt);
    if (involution->parsed()) run_involution(opt);
    if (exp->parsed()) run_export(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlpoly {

// Stable machine-readable error codes. The string form is part of the CLI
// contract and must not change between releases.
enum class errc {
  not_prime,
  not_irreducible,
  degree_mismatch,
  n_too_small,
  division_by_zero,
  ctx_mismatch,
  not_a_divisor,
  index_out_of_range,
  coefficients_not_in_base_field,
  not_a_basis,
  trivial_value_set,
  trace_not_zero,
  zero_theta,
  odd_extension,
  condition_violated_alpha,
  condition_violated_beta,
  p_not_dividing_n,
  degree_too_large,
  zero_r,
  not_commuting,
  k_not_permutation,
  alpha_beta_not_in_base_field,
  not_a_2nlp,
  gamma_not_in_base_field_star,
  field_too_large,
  not_char2,
  shift_in_kernel_image,
  field_too_large_for_table,
  not_nilpotent,
  order_search_exceeded,
  bad_field_spec,
  bad_poly_file,
  bad_family,
  internal_inconsistency,
  cli_usage,
  io_error,
};

constexpr std::string_view code_string(errc c) noexcept {
  switch (c) {
    case errc::not_prime: return "NotPrime";
    case errc::not_irreducible: return "NotIrreducible";
    case errc::degree_mismatch: return "DegreeMismatch";
    case errc::n_too_small: return "NTooSmall";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::ctx_mismatch: return "CtxMismatch";
    case errc::not_a_divisor: return "NotADivisor";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::coefficients_not_in_base_field: return "CoefficientsNotInBaseField";
    case errc::not_a_basis: return "NotABasis";
    case errc::trivial_value_set: return "TrivialValueSet";
    case errc::trace_not_zero: return "TraceNotZero";
    case errc::zero_theta: return "ZeroTheta";
    case errc::odd_extension: return "OddExtension";
    case errc::condition_violated_alpha: return "ConditionViolatedAlpha";
    case errc::condition_violated_beta: return "ConditionViolatedBeta";
    case errc::p_not_dividing_n: return "PNotDividingN";
    case errc::degree_too_large: return "DegreeTooLarge";
    case errc::zero_r: return "ZeroR";
    case errc::not_commuting: return "NotCommuting";
    case errc::k_not_permutation: return "KNotPermutation";
    case errc::alpha_beta_not_in_base_field: return "AlphaBetaNotInBaseField";
    case errc::not_a_2nlp: return "NotA2NLP";
    case errc::gamma_not_in_base_field_star: return "GammaNotInBaseFieldStar";
    case errc::field_too_large: return "FieldTooLarge";
    case errc::not_char2: return "NotChar2";
    case errc::shift_in_kernel_image: return "ShiftInKernelImage";
    case errc::field_too_large_for_table: return "FieldTooLargeForTable";
    case errc::not_nilpotent: return "NotNilpotent";
    case errc::order_search_exceeded: return "OrderSearchExceeded";
    case errc::bad_field_spec: return "BadFieldSpec";
    case errc::bad_poly_file: return "BadPolyFile";
    case errc::bad_family: return "BadFamily";
    case errc::internal_inconsistency: return "InternalInconsistency";
    case errc::cli_usage: return "CliUsage";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc c, const std::string& msg)
      : std::runtime_error(std::string(nlpoly::code_string(c)) + ": " + msg), code_(c) {}

  errc code() const noexcept { return code_; }
  std::string_view code_str() const noexcept { return nlpoly::code_string(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw Error(c, msg); }

inline void check(bool ok, errc c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

}  // namespace nlpoly

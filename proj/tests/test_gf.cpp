#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nlpoly/gf.hpp"

using namespace nlpoly;

namespace {

FieldElement rand_elem(const FieldCtx& F, std::mt19937_64& rng) {
  std::vector<fq_t> d(F.n());
  for (auto& v : d) v = static_cast<fq_t>(rng() % F.q());
  return F.from_digits(std::move(d));
}

}  // namespace

TEST_CASE("context construction and default moduli") {
  // F_4: the unique monic irreducible quadratic over F_2.
  FieldCtx f4(2, 1, 2);
  CHECK(f4.q() == 2);
  CHECK(f4.modulus_f() == std::vector<fq_t>{1, 1, 1});
  CHECK(f4.size().value() == 4);

  // F_9: x^2 + 1 is the first irreducible quadratic over F_3.
  FieldCtx f9(3, 1, 2);
  CHECK(f9.modulus_f() == std::vector<fq_t>{1, 0, 1});

  // F_16 as a degree-2 extension of F_4 = F_2[y]/(y^2+y+1):
  // x^2, x^2+1, x^2+w, x^2+w^2, x^2+x, x^2+x+1 are all reducible,
  // so the scan stops at x^2 + x + w.
  FieldCtx f16(2, 2, 2);
  CHECK(f16.modulus_g() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(f16.modulus_f() == std::vector<fq_t>{2, 1, 1});
  CHECK(f16.q() == 4);
  CHECK(f16.size().value() == 16);

  // F_27: x^3 + 2x + 1 (cubics with any root are rejected first).
  FieldCtx f27(3, 1, 3);
  CHECK(f27.modulus_f() == std::vector<fq_t>{1, 2, 0, 1});

  CHECK_THROWS_MATCHES(FieldCtx(4, 1, 2), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::not_prime;
                       }));
  CHECK_THROWS_MATCHES(FieldCtx(2, 1, 1), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::n_too_small;
                       }));
  // y^2 + 1 = (y+1)^2 over F_2.
  CHECK_THROWS_MATCHES(FieldCtx(2, 2, 2, std::vector<std::uint32_t>{1, 0, 1}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::not_irreducible;
                       }));
  CHECK_THROWS_MATCHES(FieldCtx(2, 2, 2, std::vector<std::uint32_t>{1, 1}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::degree_mismatch;
                       }));
  // x^4 + x^2 = x^2 (x+1)^2 over F_2 is rejected as a supplied modulus.
  CHECK_THROWS_MATCHES(
      FieldCtx(2, 1, 4, std::nullopt, std::vector<fq_t>{0, 0, 1, 0, 1}), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code() == errc::not_irreducible;
      }));
  CHECK_THROWS_MATCHES(FieldCtx(2, 33, 2), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::field_too_large;
                       }));
}

TEST_CASE("F_4 arithmetic table") {
  FieldCtx F(2, 1, 2);
  const auto w = F.gen();           // root of x^2+x+1
  const auto w2 = w * w;            // = w + 1
  CHECK(F.index(w) == 2);
  CHECK(F.index(w2) == 3);
  CHECK(w2 == w + F.one());
  CHECK((w * w2) == F.one());       // w^3 = 1
  CHECK((w + w).is_zero());
  CHECK(w.pow(3) == F.one());
  CHECK(w.inv() == w2);
  CHECK_THROWS_MATCHES(F.zero().inv(), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::division_by_zero;
                       }));
}

TEST_CASE("the 32-bit binary field accepts its classic modulus") {
  // x^32 + x^7 + x^3 + x^2 + 1, supplied explicitly.
  std::vector<fq_t> f(33, 0);
  f[0] = f[2] = f[3] = f[7] = f[32] = 1;
  FieldCtx F(2, 1, 32, std::nullopt, f);
  CHECK(F.size().value() == (1ull << 32));
  const auto b = F.gen();
  // b^32 folds to b^7 + b^3 + b^2 + 1, element index 0x8d.
  CHECK(F.index(b.pow(32)) == 0x8d);
  CHECK(b.pow(1ull << 32) == b);  // Frobenius order: z^{q^n} = z

  // The near-miss pentanomial x^32+x^7+x^3+x+1 is reducible
  // ((x^3+x^2+1) divides it) and must be rejected.
  std::vector<fq_t> g(33, 0);
  g[0] = g[1] = g[3] = g[7] = g[32] = 1;
  CHECK_THROWS_MATCHES(FieldCtx(2, 1, 32, std::nullopt, g), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::not_irreducible;
                       }));
}

TEST_CASE("element index encoding round-trips") {
  FieldCtx F(2, 1, 8);
  for (idx_t i = 0; i < 256; ++i) {
    const auto z = F.from_index(i);
    CHECK(F.index(z) == i);
  }
  CHECK_THROWS_MATCHES(F.from_index(256), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::index_out_of_range;
                       }));

  // Tower digits: index is the base-q expansion, low digit first.
  FieldCtx T(2, 2, 2);
  const auto z = T.from_digits({3, 2});
  CHECK(T.index(z) == 3 + 2 * 4);
  CHECK(T.from_index(11) == T.from_digits({3, 2}));
}

TEST_CASE("field axioms on random elements") {
  std::mt19937_64 rng(0xa11ce5);
  for (const char* spec : {"2^1:6", "3^1:2", "2^2:2", "2^1:8", "3^1:3"}) {
    FieldCtx F = FieldCtx::parse(spec);
    for (int iter = 0; iter < 200; ++iter) {
      const auto a = rand_elem(F, rng), b = rand_elem(F, rng), c = rand_elem(F, rng);
      CHECK((a + b) * c == a * c + b * c);
      CHECK(a * (b * c) == (a * b) * c);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK(a - a == F.zero());
      CHECK(a * F.one() == a);
      if (!a.is_zero()) {
        CHECK(a * a.inv() == F.one());
        CHECK((a / a) == F.one());
      }
    }
  }
}

TEST_CASE("large-q fallback arithmetic agrees with direct polynomial computation") {
  // q = 5^4 = 625 exceeds the multiplication-table threshold.
  FieldCtx F(5, 4, 2);
  CHECK(F.q() == 625);
  std::mt19937_64 rng(7);
  const detail::ZpArith zp{5};
  for (int iter = 0; iter < 50; ++iter) {
    const fq_t a = static_cast<fq_t>(rng() % 625), b = static_cast<fq_t>(rng() % 625);
    // Oracle: multiply the y-polynomials directly mod g.
    detail::Poly pa, pb;
    for (fq_t v = a; v; v /= 5) pa.push_back(v % 5);
    for (fq_t v = b; v; v /= 5) pb.push_back(v % 5);
    detail::Poly prod = detail::poly_mod(zp, detail::poly_mul(zp, pa, pb), F.modulus_g());
    fq_t expect = 0;
    for (std::size_t i = prod.size(); i-- > 0;) expect = expect * 5 + prod[i];
    CHECK(F.fq_mul(a, b) == expect);
    CHECK(F.fq_add(a, b) == F.fq_add(b, a));
    if (a) CHECK(F.fq_mul(a, F.fq_inv(a)) == 1);
  }
}

TEST_CASE("frobenius matrices agree with explicit powers") {
  for (const char* spec : {"2^1:8", "3^1:2", "2^2:2", "3^1:3", "2^1:16"}) {
    FieldCtx F = FieldCtx::parse(spec);
    const idx_t sz = F.size().value();
    for (idx_t i = 0; i < sz; ++i) {
      const auto z = F.from_index(i);
      CHECK(F.frobenius(z, 1) == z.pow(F.q()));
    }
    // Higher powers and negative wrap-around on a sample.
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 40; ++iter) {
      const auto z = rand_elem(F, rng);
      const std::uint32_t i = static_cast<std::uint32_t>(rng() % (2 * F.n()));
      auto expect = z;
      for (std::uint32_t k = 0; k < i % F.n(); ++k) expect = expect.pow(F.q());
      CHECK(F.frobenius(z, i) == expect);
      CHECK(F.frobenius(F.frobenius(z, i), -static_cast<std::int64_t>(i)) == z);
    }
    CHECK(F.frobenius_power(0).is_identity());
  }
}

TEST_CASE("frobenius fixes exactly the expected subfields") {
  FieldCtx F(2, 1, 6);
  std::size_t fixed1 = 0, fixed2 = 0, fixed3 = 0;
  for (idx_t i = 0; i < 64; ++i) {
    const auto z = F.from_index(i);
    if (F.in_subfield(z, 1)) ++fixed1;
    if (F.in_subfield(z, 2)) ++fixed2;
    if (F.in_subfield(z, 3)) ++fixed3;
  }
  CHECK(fixed1 == 2);
  CHECK(fixed2 == 4);
  CHECK(fixed3 == 8);
  CHECK_THROWS_MATCHES(F.in_subfield(F.one(), 4), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::not_a_divisor;
                       }));
}

TEST_CASE("relative trace values and linearity") {
  FieldCtx F(2, 1, 2);
  const auto w = F.gen();
  // Tr_{F_4/F_2}: 0,1 -> 0; w, w+1 -> 1.
  CHECK(F.rel_trace(F.zero(), 1) == F.zero());
  CHECK(F.rel_trace(F.one(), 1) == F.zero());
  CHECK(F.rel_trace(w, 1) == F.one());
  CHECK(F.rel_trace(w + F.one(), 1) == F.one());

  // Trace lands in the target subfield; additive; F_{q^m'}-linear.
  for (const char* spec : {"2^1:6", "2^2:2", "3^1:3"}) {
    FieldCtx G = FieldCtx::parse(spec);
    std::mt19937_64 rng(23);
    for (std::uint32_t ms = 1; ms <= G.n(); ++ms) {
      if (G.n() % ms != 0) continue;
      for (int iter = 0; iter < 30; ++iter) {
        const auto a = rand_elem(G, rng), b = rand_elem(G, rng);
        const auto ta = G.rel_trace(a, ms);
        CHECK(G.in_subfield(ta, ms));
        CHECK(G.rel_trace(a + b, ms) == ta + G.rel_trace(b, ms));
        // scalar from the subfield pulls out of the trace
        auto s = rand_elem(G, rng);
        s = G.rel_trace(s, ms);  // arbitrary subfield scalar
        CHECK(G.rel_trace(s * a, ms) == s * ta);
      }
    }
  }

  // Composing the absolute trace with itself vanishes when p | n/m'.
  FieldCtx H(2, 1, 4);
  for (idx_t i = 0; i < 16; ++i) {
    const auto z = H.from_index(i);
    CHECK(H.rel_trace(H.rel_trace(z, 1), 1) == H.zero());
  }
}

TEST_CASE("coordinate and bit packing round-trips") {
  FieldCtx F(2, 2, 2);
  std::vector<std::uint32_t> coords(F.coord_dim());
  for (idx_t i = 0; i < 16; ++i) {
    const auto z = F.from_index(i);
    F.to_coords(z, coords);
    CHECK(F.from_coords(coords) == z);
    std::vector<std::uint64_t> bits((F.coord_dim() + 63) / 64);
    F.to_bits(z, bits);
    CHECK(bits[0] == i);  // p = 2: packed coordinates equal the index bits
    CHECK(F.from_bits(bits) == z);
  }

  FieldCtx G(3, 1, 3);
  for (idx_t i = 0; i < 27; ++i) {
    const auto z = G.from_index(i);
    std::vector<std::uint32_t> c(G.coord_dim());
    G.to_coords(z, c);
    CHECK(G.from_coords(c) == z);
  }
}

TEST_CASE("mixed contexts are rejected") {
  FieldCtx A(2, 1, 2), B(3, 1, 2);
  CHECK_THROWS_MATCHES(A.gen() + B.gen(), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::ctx_mismatch;
                       }));
  // Structurally identical contexts interoperate.
  FieldCtx A2(2, 1, 2);
  CHECK(A.gen() + A2.gen() == A.zero());
}

TEST_CASE("field spec strings parse and round-trip") {
  const auto fs = FieldSpec::parse("2^1:6");
  CHECK(fs.p == 2);
  CHECK(fs.m == 1);
  CHECK(fs.n == 6);
  CHECK_FALSE(fs.g.has_value());
  CHECK_FALSE(fs.f.has_value());

  // Shorthand without ^m.
  const auto fs2 = FieldSpec::parse("3:2");
  CHECK(fs2.p == 3);
  CHECK(fs2.m == 1);

  const auto fs3 = FieldSpec::parse("2^2:2:g=7:f=2,1,1");
  auto ctx3 = fs3.create();
  CHECK(ctx3->modulus_g() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(ctx3->modulus_f() == std::vector<fq_t>{2, 1, 1});

  // Emitted spec strings reproduce the same context.
  FieldCtx F(2, 2, 2);
  FieldCtx F2 = FieldCtx::parse(F.spec_string());
  CHECK(F.compatible(F2));
  FieldCtx G(3, 1, 3);
  CHECK(G.compatible(FieldCtx::parse(G.spec_string())));

  for (const char* bad : {"", "2", "x^1:2", "2^1:2:q=3", "2^1:zz"}) {
    CHECK_THROWS_MATCHES(FieldSpec::parse(bad), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == errc::bad_field_spec;
                         }));
  }
}

TEST_CASE("packed and generic linear maps agree") {
  // Same permutation matrix expressed for p=2 and p=3 semantics.
  FpLinearMap m2(2, 4), m3(3, 4);
  for (std::uint32_t i = 0; i < 4; ++i) {
    m2.set(i, (i + 1) % 4, 1);
    m3.set(i, (i + 1) % 4, 1);
  }
  std::vector<std::uint32_t> src{1, 0, 1, 1}, d2(4), d3(4);
  m2.apply(src, d2);
  m3.apply(src, d3);
  CHECK(d2 == d3);
  CHECK(m2.compose(m2).compose(m2).compose(m2).is_identity());
  CHECK(m3.compose(m3).compose(m3).compose(m3).is_identity());
}

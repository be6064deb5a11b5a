#include "doctest.h"

#include "qr/error.hpp"
#include "qr/ffield.hpp"

#include <algorithm>
#include <memory>
#include <set>

using namespace qr;
using namespace qr::ffield;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

// Reference: a monic quadratic over GF(p) is irreducible iff it has no root.
bool quadratic_has_root(std::uint64_t p, std::uint64_t c0, std::uint64_t c1) {
  for (std::uint64_t x = 0; x < p; ++x)
    if ((x * x + c1 * x + c0) % p == 0) return true;
  return false;
}

}  // namespace

TEST_CASE("make_field picks the smallest irreducible modulus") {
  auto gf7 = make_field(7, 1);
  CHECK(gf7.modulus == std::vector<std::uint64_t>{0, 1});

  auto gf9 = make_field(3, 2);
  CHECK(gf9.modulus == std::vector<std::uint64_t>{1, 0, 1});

  // Lex order reads coefficients from the top non-leading degree down.
  for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull}) {
    std::vector<std::uint64_t> expect;
    for (std::uint64_t c1 = 0; c1 < p && expect.empty(); ++c1)
      for (std::uint64_t c0 = 0; c0 < p; ++c0)
        if (!quadratic_has_root(p, c0, c1)) {
          expect = {c0, c1, 1};
          break;
        }
    CHECK(make_field(p, 2).modulus == expect);
  }
}

TEST_CASE("make_field errors") {
  CHECK(code_of([] { make_field(4, 1); }) == ErrorCode::NotPrime);
  CHECK(code_of([] { make_field(3, 2, std::vector<std::uint64_t>{2, 0, 1}); }) == ErrorCode::ReducibleModulus);
  CHECK(code_of([] { make_field(2, 64); }) == ErrorCode::OrderOverflow);
  CHECK(code_of([] { parse_field_literal("6"); }) == ErrorCode::NotPrime);
}

TEST_CASE("Rabin and trial irreducibility agree on small polynomials") {
  for (std::uint64_t p : {2ull, 3ull, 5ull}) {
    for (unsigned n = 1; n <= 4; ++n) {
      std::uint64_t total = 1;
      for (unsigned i = 0; i < n; ++i) total *= p;
      for (std::uint64_t k = 0; k < total; ++k) {
        std::vector<std::uint64_t> poly(n + 1, 0);
        std::uint64_t v = k;
        for (unsigned i = 0; i < n; ++i) {
          poly[i] = v % p;
          v /= p;
        }
        poly[n] = 1;
        CHECK(is_irreducible_rabin(p, poly) == is_irreducible_trial(p, poly));
      }
    }
  }
}

TEST_CASE("element arithmetic") {
  auto gf7 = std::make_shared<const FieldSpec>(make_field(7, 1));
  CHECK((element_at(gf7, 3) + element_at(gf7, 5)).index() == 1);
  CHECK(code_of([&] { inv(element_at(gf7, 0)); }) == ErrorCode::DivisionByZero);

  auto gf9 = std::make_shared<const FieldSpec>(make_field(3, 2));
  auto t = element_at(gf9, 3);  // coefficient vector (0, 1)
  CHECK((t * t).index() == 2);
  CHECK(field_arith(t, element_at(gf9, 2), ArithOp::pow).index() == 2);

  auto gf5 = std::make_shared<const FieldSpec>(make_field(5, 1));
  CHECK(code_of([&] { add(element_at(gf5, 1), element_at(gf7, 1)); }) == ErrorCode::FieldMismatch);
}

TEST_CASE("enumeration order") {
  auto gf5 = std::make_shared<const FieldSpec>(make_field(5, 1));
  auto all = enumerate(gf5);
  REQUIRE(all.size() == 5);
  for (std::uint64_t i = 0; i < 5; ++i) CHECK(all[i].index() == i);

  auto gf4 = std::make_shared<const FieldSpec>(make_field(2, 2));
  auto four = enumerate(gf4);
  CHECK(four.size() == 4);
  CHECK(four.front().is_zero());

  auto f13 = Field::create("13");
  std::set<std::uint64_t> squares;
  for (std::uint64_t x = 1; x < 13; ++x) squares.insert(f13->mul(x, x));
  CHECK(squares == std::set<std::uint64_t>{1, 3, 4, 9, 10, 12});
}

TEST_CASE("field laws and Frobenius, exhaustive for small q") {
  for (const char* lit : {"2", "7", "13", "2^2", "3^2", "2^3", "5^2", "2^4", "3^3", "2^6", "7^2", "2^12"}) {
    auto F = Field::create(lit);
    const auto q = F->order();
    CAPTURE(lit);
    for (std::uint64_t a = 0; a < q; ++a) {
      CHECK(F->add(a, 0) == a);
      CHECK(F->mul(a, 1) == a);
      CHECK(F->add(a, F->neg(a)) == 0);
      if (a) CHECK(F->mul(a, F->inv(a)) == 1);
      CHECK(F->pow(a, q) == a);
    }
  }
}

TEST_CASE("index arithmetic matches coefficient arithmetic") {
  for (const char* lit : {"3^2", "2^5", "5^3"}) {
    auto F = Field::create(lit);
    const auto q = F->order();
    for (std::uint64_t a = 0; a < q; a += 3)
      for (std::uint64_t b = 0; b < q; b += 5) {
        auto ea = F->element(a), eb = F->element(b);
        CHECK(F->add(a, b) == (ea + eb).index());
        CHECK(F->sub(a, b) == (ea - eb).index());
        CHECK(F->mul(a, b) == (ea * eb).index());
        if (b) CHECK(F->div(a, b) == (ea / eb).index());
      }
  }
}

TEST_CASE("explicit modulus literal") {
  auto spec = parse_field_literal("3^2", "2,2,1");
  CHECK(spec.order() == 9);
  CHECK(spec.order_hash() != make_field(3, 2).order_hash());
  CHECK(code_of([] { parse_field_literal("3^x"); }) == ErrorCode::InvalidArgument);
}

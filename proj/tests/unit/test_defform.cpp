#include "doctest.h"

#include "qr/defform.hpp"
#include "qr/error.hpp"
#include "qr/rng.hpp"

#include <set>

using namespace qr;
using namespace qr::defform;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

Bitset eval_bits(const std::string& text, const std::shared_ptr<const ffield::Field>& F,
                 const std::vector<std::string>& vars, const Assignment& params = {}) {
  ParseOptions opts;
  opts.free_vars = vars;
  for (const auto& [k, v] : params) opts.params.push_back(k);
  return evaluate(parse(text, opts), F, params).membership();
}

}  // namespace

TEST_CASE("parse and complexity") {
  auto f = parse("exists y. x = y*y & !(x = 0)");
  CHECK(f.free_vars() == std::vector<std::string>{"x"});
  CHECK(complexity(f) == 14);
  CHECK(serialize(f) == "exists y. (x = y * y & !x = 0)");
  CHECK(complexity(parse("x = x")) == 3);
  CHECK(complexity(parse("x = 0")) == 3);
  CHECK(code_of([] { parse("x = )"); }) == ErrorCode::SyntaxError);
}

TEST_CASE("syntax errors carry position and expectations") {
  try {
    parse("x = )");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
    CHECK(!e.expected().empty());
  }
  CHECK(code_of([] { parse("x = 2"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse("exists . x = 0"); }) == ErrorCode::SyntaxError);
}

TEST_CASE("unbound variables are rejected when free variables are declared") {
  ParseOptions opts;
  opts.free_vars = std::vector<std::string>{"x"};
  CHECK(code_of([&] { parse("x = z", opts); }) == ErrorCode::UnboundVariable);
  opts.params = {"z"};
  auto f = parse("x = z", opts);
  CHECK(f.param_vars() == std::vector<std::string>{"z"});
}

TEST_CASE("conjunction complexity is compositional") {
  auto a = parse("x = 0");
  auto b = parse("y = 1");
  auto ab = parse("x = 0 & y = 1");
  CHECK(complexity(ab) == complexity(a) + complexity(b) + 3);  // connective plus its parentheses
}

TEST_CASE("serialize is a parse fixpoint") {
  for (const char* text : {"exists y. x = y*y & !(x = 0)", "x = x", "forall y. (x*y = y*x -> x = x)",
                           "a*d - b*c = 1 & exists y. (a + d = y*y & !(a + d = 0))", "x - (y - z) = (x - y) - z",
                           "x*(y + 1) = x*y + x | !!x = 1", "exists y. exists z. x = y*y + z*z*z"}) {
    auto f = parse(text);
    auto s = serialize(f);
    auto g = parse(s);
    CHECK(serialize(g) == s);
    CHECK(complexity(g) == complexity(f));
  }
}

TEST_CASE("evaluate small examples") {
  auto F13 = ffield::Field::create("13");
  auto qr13 = evaluate(parse("exists y. x = y*y & !(x=0)"), F13, {});
  CHECK(qr13.size() == 6);
  std::set<std::uint64_t> got;
  qr13.membership().for_each([&](std::size_t i) { got.insert(i); });
  std::set<std::uint64_t> want;
  for (std::uint64_t y = 1; y < 13; ++y) want.insert(y * y % 13);
  CHECK(got == want);

  auto F4 = ffield::Field::create("2^2");
  auto as = evaluate(parse("exists y. x = y*y + y"), F4, {});
  CHECK(as.size() == 2);
  CHECK(as.contains(std::uint64_t{0}));
  CHECK(as.contains(std::uint64_t{1}));

  for (const char* q : {"5", "2^3", "3^2"}) {
    auto F = ffield::Field::create(q);
    CHECK(evaluate(parse("x = x"), F, {}).size() == F->order());
  }
}

TEST_CASE("arity cap") {
  auto F = ffield::Field::create("13");
  EvalOptions opts;
  opts.cell_cap = 1000;
  CHECK(code_of([&] { evaluate(parse("x = y + z"), F, {}, opts); }) == ErrorCode::ArityTooLarge);
}

TEST_CASE("logical identities hold exhaustively") {
  for (const char* q : {"2", "3", "2^2", "5", "7", "2^3", "3^2"}) {
    auto F = ffield::Field::create(q);
    CAPTURE(q);
    const std::vector<std::string> xy{"x", "y"};
    const std::string phi = "x*y = 1", psi = "exists z. x = z*z + y";
    auto a = eval_bits(phi, F, xy), b = eval_bits(psi, F, xy);
    CHECK(eval_bits("(" + phi + ") & (" + psi + ")", F, xy) == (a & b));
    CHECK(eval_bits("(" + phi + ") | (" + psi + ")", F, xy) == (a | b));
    CHECK(eval_bits("!((" + phi + ") & (" + psi + "))", F, xy) ==
          eval_bits("!(" + phi + ") | !(" + psi + ")", F, xy));
    CHECK(eval_bits("!!(" + psi + ")", F, xy) == b);
    CHECK(eval_bits("exists z. x = z*z + y", F, xy) == eval_bits("!forall z. !(x = z*z + y)", F, xy));
    CHECK(eval_bits("exists y. x*y = 1", F, {"x"}) == eval_bits("!(x = 0)", F, {"x"}));
  }
}

TEST_CASE("membership agrees with pointwise evaluation on sampled points") {
  auto F = ffield::Field::create("3^2");
  ParseOptions opts;
  opts.params = {"b"};
  auto f = parse("exists z. x*z = y + b & !(z = 1)", opts);
  Assignment params{{"b", 4}};
  auto set = evaluate(f, F, params);
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t cell = uniform_below(rng, 81);
    auto point = set.point_of(cell);
    CHECK(set.cell_of(point) == cell);
    CHECK(set.contains(cell) == evaluate_point(f, *F, params, point));
  }
}

TEST_CASE("Frobenius-conjugate parameters give equinumerous sets") {
  for (const char* q : {"2^3", "3^2", "5^2"}) {
    auto F = ffield::Field::create(q);
    ParseOptions opts;
    opts.params = {"b"};
    auto f = parse("exists y. x = y*y*y + b*y", opts);
    for (std::uint64_t b = 0; b < F->order(); ++b) {
      auto s1 = evaluate(f, F, {{"b", b}});
      auto s2 = evaluate(f, F, {{"b", F->frobenius(b)}});
      CHECK(s1.size() == s2.size());
    }
  }
}

TEST_CASE("memoized evaluation matches pointwise evaluation") {
  auto F = ffield::Field::create("7");
  auto f = parse("forall u. exists v. x*u + y = v*v | u = x");
  auto set = evaluate(f, F, {});
  for (std::uint64_t c = 0; c < 49; ++c) CHECK(set.contains(c) == evaluate_point(f, *F, {}, set.point_of(c)));
}

TEST_CASE("assignments") {
  auto a = parse_assignment("a=5,b=2");
  CHECK(a.at("a") == 5);
  CHECK(a.at("b") == 2);
  CHECK(code_of([] { parse_assignment("a5"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("set serialization round trip") {
  auto F = ffield::Field::create("3^2");
  auto set = evaluate(parse("exists z. x = z*z + y"), F, {});
  auto text = serialize_set(set);
  CHECK(text.rfind("QRSET 1\n", 0) == 0);
  auto back = decode_set(text, F);
  CHECK(back.membership() == set.membership());
  CHECK(back.arity() == 2);

  auto other = ffield::Field::create("3^2", "2,2,1");
  CHECK(code_of([&] { decode_set(text, other); }) == ErrorCode::FieldMismatch);
}

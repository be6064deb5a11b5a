#include "doctest.h"
#include "graph_oracles.hpp"

#include "qr/error.hpp"
#include "qr/reglab.hpp"
#include "qr/rng.hpp"

#include <cmath>
#include <set>

using namespace qr;
using namespace qr::reglab;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

Bitset random_subset(Rng& rng, std::size_t n) {
  Bitset d(n);
  for (std::size_t i = 0; i < n; ++i)
    if (uniform_unit(rng) < 0.5) d.set(i);
  return d;
}

const char* kResidues = "exists y. (x = y * y & !(x = 0))";

std::vector<std::uint64_t> odd_prime_powers(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = lo; q <= hi; q += 2)
    if (ffield::prime_power(q)) out.push_back(q);
  return out;
}

// ε₁ of the Paley bipartite graph for q ≡ 1 (mod 4), from the 4-cycle count.
Rational paley_eps1(std::int64_t q) { return Rational((q - 1) * (q * q + 6 * q + 1), 16 * q * q * q * q); }

}  // namespace

TEST_CASE("builtin families") {
  const auto& paley = find_family("paley");
  auto p13 = paley.instantiate(13);
  CHECK(p13.group->order() == 13);
  std::set<std::uint64_t> squares;
  for (std::uint64_t y = 1; y < 13; ++y) squares.insert(y * y % 13);
  CHECK(p13.subset.count() == squares.size());
  for (auto s : squares) CHECK(p13.subset.test(s));
  CHECK(code_of([&] { paley.instantiate(8); }) == ErrorCode::InadmissibleQ);
  CHECK(code_of([&] { paley.instantiate(12); }) == ErrorCode::NotPrime);

  auto as4 = find_family("artin_schreier").instantiate(4);
  const auto& f4 = *as4.group->carrier()->field;
  Bitset image(4);
  for (std::uint64_t y = 0; y < 4; ++y) image.set(f4.add(f4.mul(y, y), y));
  CHECK(as4.subset == image);
  CHECK(as4.subset.count() == 2);
  CHECK(as4.subset.test(0));
  CHECK(as4.subset.test(1));
  CHECK(grp::Subgroup(as4.group, as4.subset).index() == 2);

  auto as9 = find_family("artin_schreier").instantiate(9);
  CHECK(as9.subset.count() == 3);

  auto sl5 = find_family("sl2_trace_square").instantiate(5);
  const auto& carrier = *sl5.group->carrier();
  for (std::size_t id = 0; id < sl5.group->order(); ++id) {
    const std::uint64_t cell = carrier.cells[id];
    const std::uint64_t a = cell / 125, d = cell % 5;
    const std::uint64_t tr = (a + d) % 5;
    CHECK(sl5.subset.test(id) == (tr == 1 || tr == 4));
  }

  auto cubes = find_family("mult_cubes").instantiate(7);
  CHECK(cubes.subset.count() == 2);
  CHECK(code_of([] { find_family("mult_cubes").instantiate(5); }) == ErrorCode::InadmissibleQ);
  CHECK(find_family("complete").instantiate(9).subset.count() == 9);
  CHECK(code_of([] { find_family("nope"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("subgroup search examples") {
  auto f4 = grp::parse_group_literal("add:2^2");
  Bitset d(4);
  d.set(0);
  d.set(1);
  auto out = subgroup_search(f4, d, 2);
  CHECK(out.subgroup.members() == d);
  CHECK(out.max_coset_eps1 == 0);
  CHECK(out.index == 2);
  CHECK(out.pairs.size() == 4);

  auto p13 = find_family("paley").instantiate(13);
  auto h = subgroup_search(p13.group, p13.subset, 3);
  CHECK(h.index == 1);
  CHECK(h.max_coset_eps1 == paley_eps1(13));

  auto z12 = grp::cyclic_group(12);
  auto whole = subgroup_search(z12, Bitset::full(12), 6);
  CHECK(whole.index == 1);
  CHECK(whole.max_coset_eps1 == 0);
  CHECK(code_of([] {
          auto big = grp::cyclic_group(4097);
          subgroup_search(big, Bitset(4097), 1);
        }) == ErrorCode::OrderCap);
}

TEST_CASE("subgroup search is monotone in the index bound") {
  Rng rng(31);
  for (const char* lit : {"add:2^3", "cyclic:12", "sym:3", "add:3^2"}) {
    auto g = grp::parse_group_literal(lit);
    for (int t = 0; t < 4; ++t) {
      auto d = random_subset(rng, g->order());
      Rational prev = 2;
      for (std::size_t k = 1; k <= g->order(); ++k) {
        auto out = subgroup_search(g, d, k);
        CHECK(out.max_coset_eps1 <= prev);
        CHECK(out.index <= k);
        prev = out.max_coset_eps1;
      }
    }
  }
  for (std::uint64_t p : {5u, 7u, 11u}) {
    auto g = grp::additive_group(field_for(p));
    auto out = subgroup_search(g, random_subset(rng, p), p - 1);
    CHECK(out.index == 1);
  }
}

TEST_CASE("Artin-Schreier needs the proper subgroup") {
  const auto& fam = find_family("artin_schreier");
  for (unsigned n = 2; n <= 5; ++n) {
    auto inst = fam.instantiate(std::uint64_t{1} << n);
    const auto full = Bitset::full(inst.group->order());
    auto whole = quasi::eps1_quasirandomness(quasi::cayley_bipartite(inst.group, inst.subset, full, full)).value;
    CHECK(whole >= Rational(1, 16));
    auto out = subgroup_search(inst.group, inst.subset, 2);
    CHECK(out.max_coset_eps1 == 0);
    CHECK(out.subgroup.members() == inst.subset);
  }
}

TEST_CASE("translate eps with the whole group is the subset eps") {
  auto p13 = find_family("paley").instantiate(13);
  auto t = translate_subset_eps(grp::whole_group(p13.group), p13.subset, 3, 0);
  CHECK(std::abs(t.eps - (std::sqrt(13.0) + 1) / 26) < 1e-9);
  CHECK(t.spread < 1e-9);
  CHECK(t.evaluated == 4);

  // H = D for Artin-Schreier: every Dg ∩ H is H or empty.
  auto as8 = find_family("artin_schreier").instantiate(8);
  auto h = grp::Subgroup(as8.group, as8.subset);
  auto te = translate_subset_eps(h, as8.subset, 3, 1);
  CHECK(te.eps == 0);
  CHECK(te.evaluated == 8);
}

TEST_CASE("paley sweep") {
  const std::vector<std::uint64_t> qs{29, 5, 13, 17};
  auto res = sweep(find_family("paley"), qs);
  REQUIRE(res.rows.size() == 4);
  CHECK(res.rows[0].q == 5);
  CHECK(res.rows[3].q == 29);
  for (const auto& row : res.rows) {
    CHECK(row.eps1 == paley_eps1(static_cast<std::int64_t>(row.q)));
    CHECK(row.max_coset_eps1 == row.eps1);
    CHECK(row.h_index == 1);
    CHECK(row.delta == Rational(static_cast<std::int64_t>(row.q - 1) / 2, static_cast<std::int64_t>(row.q)));
    const double qd = static_cast<double>(row.q);
    CHECK(std::abs(row.eps3.value - (std::sqrt(qd) + 1) / (2 * qd)) < 1e-9);
    CHECK(std::abs(row.fourier.eps - (std::sqrt(qd) + 1) / (2 * qd)) < 1e-9);
  }
  CHECK(res.rows[1].eps1 == Rational(186, 28561));
  auto inst = find_family("paley").instantiate(13);
  const auto full = Bitset::full(13);
  CHECK(quasi::four_cycle_count(quasi::cayley_bipartite(inst.group, inst.subset, full, full)) ==
        oracle::four_cycles_quadruple_loop(
            oracle::adjacency(quasi::cayley_bipartite(inst.group, inst.subset, full, full))));
  REQUIRE(res.eps1_fit);
  CHECK(res.eps1_fit->slope <= -0.8);
  CHECK(res.eps1_fit->points == 4);
  REQUIRE(res.fourier_fit);
  CHECK(res.fourier_fit->slope < 0);

  auto single = sweep(find_family("paley"), {13});
  CHECK(single.rows.size() == 1);
  CHECK(!single.eps1_fit);
  CHECK(code_of([] { sweep(find_family("paley"), {5, 8}); }) == ErrorCode::InadmissibleQ);
}

TEST_CASE("artin_schreier sweep reaches zero with index 2") {
  SweepOptions opts;
  opts.max_index = 2;
  auto res = sweep(find_family("artin_schreier"), {4, 8, 16}, opts);
  for (const auto& row : res.rows) {
    CHECK(row.max_coset_eps1 == 0);
    CHECK(row.h_index == 2);
    CHECK(row.eps1 >= Rational(1, 16));
    CHECK(row.h_descriptor == "exists y. x = y * y - y");
  }
  CHECK(res.zero_rows.size() == 3);
  CHECK(!res.eps1_fit);
}

TEST_CASE("power-law fit and rational snapping") {
  std::vector<double> x{2, 3, 5, 7, 11}, y;
  for (double v : x) y.push_back(3 * std::pow(v, -2.0));
  auto f = fit_power_law(x, y);
  REQUIRE(f);
  CHECK(f->slope == doctest::Approx(-2));
  CHECK(f->constant == doctest::Approx(3));
  CHECK(!fit_power_law({2, 3, 5}, {1, 2, 3}));

  CHECK(snap_rational({{0.49, 0.1}}, 0.49) == Rational(1, 2));
  CHECK(snap_rational({{0.34, 0.01}}, 0.34) == Rational(1, 3));
  CHECK(snap_rational({{1.0, 1.0}}, 1.0, 64, true) == Rational(1));
  CHECK(snap_rational({{0.0, 0.2}}, 0.0) == Rational(0));
  // Disjoint bands widen until they meet.
  CHECK(snap_rational({{0.2, 0.01}, {0.3, 0.01}}, 0.25) == Rational(1, 4));
}

TEST_CASE("dimension and measure") {
  const auto qs = odd_prime_powers(5, 61);
  auto dm = estimate_dim_measure(kResidues, {}, qs);
  CHECK(dm.d == 1);
  CHECK(dm.r == Rational(1, 2));
  CHECK(dm.residual <= 1);
  for (const auto& c : dm.counts) CHECK(c.count == (c.q - 1) / 2);

  auto point = estimate_dim_measure("x = 0", {}, {5, 7, 11});
  CHECK(point.d == 0);
  CHECK(point.r == 1);
  CHECK(point.residual == 0);

  auto plane = estimate_dim_measure("x = x & y = y", {}, {3, 5, 7, 9});
  CHECK(plane.d == 2);
  CHECK(plane.r == 1);

  CHECK(code_of([] { estimate_dim_measure("x = x & !(x = x)", {}, {5, 7, 11}); }) == ErrorCode::EmptyAcrossSweep);
  CHECK(code_of([] { estimate_dim_measure("x = 0", {}, {5, 7}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("ratio stability") {
  const auto qs = odd_prime_powers(5, 61);
  auto rs = check_ratio_stability(kResidues, "x = x", {}, qs);
  CHECK(rs.q_star == Rational(1, 2));
  CHECK(rs.c <= 1);
  // ||A| − |B|/2| = 1/2 exactly, so C = max √q / (2q) at q = 5.
  CHECK(rs.c == doctest::Approx(1 / (2 * std::sqrt(5.0))));

  auto same = check_ratio_stability("x = x", "x = x", {}, qs);
  CHECK(same.q_star == 1);
  CHECK(same.c == 0);
  auto empty = check_ratio_stability("x = x & !(x = x)", "x = x", {}, qs);
  CHECK(empty.q_star == 0);
  CHECK(empty.c == 0);
  CHECK(code_of([&] { check_ratio_stability("x = x", "x = 0", {}, qs); }) == ErrorCode::NotSubset);
}

TEST_CASE("weak regularity audit") {
  auto as = weak_regularity_audit(find_family("artin_schreier"), 4, 2);
  CHECK(as.h_index == 2);
  CHECK(as.pairs.size() == 4);
  for (const auto& p : as.pairs) {
    CHECK(p.defect == 0);
    CHECK(p.exact);
  }
  auto pal = weak_regularity_audit(find_family("paley"), 13, 1);
  REQUIRE(pal.pairs.size() == 1);
  CHECK(pal.pairs[0].exact);
  REQUIRE(pal.pairs[0].within_fourth_root);
  CHECK(*pal.pairs[0].within_fourth_root);
  CHECK(pal.ref_quarter == doctest::Approx(std::pow(13.0, -0.25)));
  auto full = weak_regularity_audit(find_family("complete"), 7, 1);
  CHECK(full.max_defect == 0);
  auto big = weak_regularity_audit(find_family("paley"), 29, 1);
  CHECK(!big.pairs[0].exact);
  CHECK(big.pairs[0].defect <= std::pow(to_double(big.pairs[0].eps1), 0.25) + 1e-12);
}

TEST_CASE("verification suites") {
  for (const char* s : {"cor25", "lemma24", "sl2"}) {
    CAPTURE(s);
    auto res = run_suite(s, 0);
    CHECK(!res.checks.empty());
    for (const auto& c : res.checks) {
      CAPTURE(c.label);
      CAPTURE(c.detail);
      CHECK(c.passed);
    }
  }
  auto g = run_suite("gowers", 0);
  REQUIRE(g.checks.size() == 4);
  CHECK(g.checks[0].passed);
  CHECK(g.checks[1].passed);
  CHECK(!g.checks[3].finding);
  CHECK(code_of([] { run_suite("bogus"); }) == ErrorCode::InvalidArgument);
}

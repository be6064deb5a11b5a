// Acceptance run: one PASS/FAIL line per criterion. `--only N` runs a
// single criterion; the exit status is nonzero when any run criterion fails.

#include "graph_oracles.hpp"

#include "qr/fourier.hpp"
#include "qr/quasi.hpp"
#include "qr/rational.hpp"
#include "qr/reglab.hpp"
#include "qr/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace qr;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

Bitset random_subset(Rng& rng, std::size_t n) {
  Bitset d(n);
  for (std::size_t i = 0; i < n; ++i)
    if (uniform_unit(rng) < 0.5) d.set(i);
  return d;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

quasi::BipartiteGraph full_graph(const grp::GroupPtr& g, const Bitset& d) {
  return quasi::cayley_bipartite(g, d, Bitset::full(g->order()), Bitset::full(g->order()));
}

// ε₁ straight from the quadruple-loop 4-cycle count.
Rational eps1_oracle(const quasi::BipartiteGraph& g) {
  const auto adj = oracle::adjacency(g);
  std::int64_t edges = 0;
  for (const auto& row : adj)
    for (int x : row) edges += x;
  const auto vw = static_cast<std::int64_t>(g.v_size() * g.w_size());
  const Rational delta(edges, vw);
  return Rational(oracle::four_cycles_quadruple_loop(adj), BigInt(vw) * vw) - delta * delta * delta * delta;
}

Outcome gowers_relations() {
  Rng rng(1001);
  std::size_t bad_e2 = 0, bad_e3 = 0, bad_conv = 0, findings = 0;
  std::string first_conv;
  for (int t = 0; t < 200; ++t) {
    const auto g = oracle::random_graph(rng, 1 + uniform_below(rng, 10), 1 + uniform_below(rng, 10), 0.5);
    const auto adj = oracle::adjacency(g);
    const Rational e1 = quasi::eps1_quasirandomness(g).value;
    const Rational e2 = oracle::eps2_full_enumeration(adj);
    const double e3 = quasi::eps3_spectral(g).value;
    const double root = fourth_root(e1);
    const double delta = to_double(quasi::density(g));
    if (!le_fourth_root(e2, e1)) ++bad_e2;
    if (!(e3 <= root + 1e-8)) ++bad_e3;
    if (!(to_double(e1) <= delta * e3 * e3 + 1e-8)) {
      if (bad_conv++ == 0)
        first_conv = std::to_string(g.v_size()) + "x" + std::to_string(g.w_size()) + " graph with eps1 " +
                     num(to_double(e1)) + " > delta*eps3^2 " + num(delta * e3 * e3);
    }
    if (e1 > e2 * 12) ++findings;
  }
  Outcome o;
  o.passed = bad_e2 == 0 && bad_e3 == 0 && bad_conv == 0;
  o.detail = "violations: eps2<=eps1^(1/4) " + std::to_string(bad_e2) + ", eps3<=eps1^(1/4) " +
             std::to_string(bad_e3) + ", eps1<=delta*eps3^2 " + std::to_string(bad_conv) +
             "; eps1<=12*eps2 findings " + std::to_string(findings);
  if (bad_conv) o.detail += "; e.g. " + first_conv;
  return o;
}

Outcome spectral_character_bridge() {
  Rng rng(1002);
  std::vector<grp::GroupPtr> groups;
  for (std::size_t n = 1; n <= 32; ++n) groups.push_back(grp::cyclic_group(n));
  for (std::uint64_t q = 2; q <= 64; ++q)
    if (ffield::prime_power(q)) groups.push_back(grp::additive_group(reglab::field_for(q)));
  double worst = 0;
  std::size_t trials = 0;
  for (const auto& g : groups)
    for (int t = 0; t < 20; ++t) {
      const auto d = random_subset(rng, g->order());
      worst = std::max(worst, std::abs(fourier::subset_qr_spectral(*g, d).eps -
                                       fourier::subset_qr_characters(*g, d).eps));
      ++trials;
    }
  return {worst <= 1e-8, std::to_string(groups.size()) + " groups, " + std::to_string(trials) +
                             " subsets, max difference " + num(worst)};
}

Outcome eps1_positivity() {
  Rng rng(1003);
  std::size_t negative = 0, mismatch = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto g = oracle::random_graph(rng, 1 + uniform_below(rng, 12), 1 + uniform_below(rng, 12),
                                        uniform_unit(rng));
    const Rational raw = quasi::eps1_quasirandomness(g).raw;
    if (raw < 0) ++negative;
    if (raw != eps1_oracle(g)) ++mismatch;
  }
  return {negative == 0 && mismatch == 0, "1000 graphs: " + std::to_string(negative) + " negative, " +
                                              std::to_string(mismatch) + " disagreeing with the 4-cycle oracle"};
}

Outcome paley_sweep() {
  const std::vector<std::uint64_t> qs{5, 13, 17, 29, 37, 41, 53, 61};
  const auto res = reglab::sweep(reglab::find_family("paley"), qs);
  bool ok = res.rows.size() == qs.size();
  double worst_q_eps1 = 0, worst_e3 = 0;
  std::size_t oracle_mismatch = 0;
  for (const auto& row : res.rows) {
    const auto inst = reglab::find_family("paley").instantiate(row.q);
    if (row.h_index != 1 || eps1_oracle(full_graph(inst.group, inst.subset)) != row.max_coset_eps1)
      ++oracle_mismatch;
    const double qd = static_cast<double>(row.q);
    worst_q_eps1 = std::max(worst_q_eps1, to_double(row.max_coset_eps1) * qd);
    worst_e3 = std::max(worst_e3, std::abs(row.eps3.value - (std::sqrt(qd) + 1) / (2 * qd)));
  }
  const double slope = res.eps1_fit ? res.eps1_fit->slope : 0;
  ok = ok && res.eps1_fit && slope <= -0.8 && worst_q_eps1 <= 2 && oracle_mismatch == 0 && worst_e3 <= 1e-6;
  return {ok, "slope " + num(slope) + ", max q*eps1 " + num(worst_q_eps1) + ", 4-cycle oracle mismatches " +
                  std::to_string(oracle_mismatch) + ", max |eps3 - (sqrt q+1)/(2q)| " + num(worst_e3)};
}

Outcome artin_schreier() {
  const auto& fam = reglab::find_family("artin_schreier");
  bool ok = true;
  std::string detail;
  for (unsigned n = 2; n <= 6; ++n) {
    const std::uint64_t q = std::uint64_t{1} << n;
    const auto inst = fam.instantiate(q);
    const auto& f = *inst.group->carrier()->field;
    Bitset image(q);
    for (std::uint64_t y = 0; y < q; ++y) image.set(f.add(f.mul(y, y), y));
    const Rational whole = quasi::eps1_quasirandomness(full_graph(inst.group, inst.subset)).value;
    const auto found = reglab::subgroup_search(inst.group, inst.subset, 2);
    const bool row = inst.subset == image && whole >= Rational(1, 16) && found.max_coset_eps1 == 0 &&
                     found.subgroup.members() == image && found.index == 2;
    ok = ok && row;
    detail += (detail.empty() ? "" : "; ") + std::string("q=") + std::to_string(q) + " eps1(H=G) " +
              num(to_double(whole)) + (row ? " ok" : " FAIL");
  }
  return {ok, detail};
}

Outcome sl2_suite() {
  bool ok = true;
  std::string detail;
  const auto d3 = fourier::irrep_dimensions(*grp::sl2(reglab::field_for(3)));
  const bool dims_ok = d3 == std::vector<unsigned>{1, 1, 1, 2, 2, 2, 3};
  ok = ok && dims_ok;
  detail += std::string("SL2(3) degrees ") + (dims_ok ? "ok" : "WRONG");
  for (std::uint64_t q : {3u, 5u, 7u}) {
    const auto d = fourier::irrep_dimensions(*grp::sl2(reglab::field_for(q)));
    const bool good = d.size() > 1 && 2 * std::uint64_t{d[1]} >= q - 1;
    ok = ok && good;
    detail += "; q=" + std::to_string(q) + " min nontrivial " + std::to_string(d.size() > 1 ? d[1] : 0);
  }
  Rng rng(1006);
  for (std::uint64_t q : {3u, 5u}) {
    const auto g = grp::sl2(reglab::field_for(q));
    const double qd = static_cast<double>(q);
    double worst_eps = 0, worst_e1 = 0;
    for (int t = 0; t < 100; ++t) {
      const auto d = random_subset(rng, g->order());
      worst_eps = std::max(worst_eps, fourier::subset_qr_spectral(*g, d).eps);
      worst_e1 = std::max(worst_e1, to_double(quasi::eps1_quasirandomness(full_graph(g, d)).value));
    }
    ok = ok && worst_eps <= 2 / std::sqrt(qd) + 1e-8 && worst_e1 <= 4 / qd + 1e-8;
    detail += "; q=" + std::to_string(q) + " max eps " + num(worst_eps) + " max eps1 " + num(worst_e1);
  }
  return {ok, detail};
}

Outcome subset_graph_correspondence() {
  Rng rng(1007);
  bool ok = true;
  std::string detail;
  for (const char* lit : {"cyclic:16", "add:3^2"}) {
    const auto g = grp::parse_group_literal(lit);
    std::size_t bad = 0;
    for (int t = 0; t < 50; ++t) {
      const auto d = random_subset(rng, g->order());
      const double eps = fourier::subset_qr_spectral(*g, d).eps;
      const Rational e1 = quasi::eps1_quasirandomness(full_graph(g, d)).value;
      if (!(eps <= fourth_root(e1) + 1e-8) || !(to_double(e1) <= eps * eps + 1e-8)) ++bad;
    }
    ok = ok && bad == 0;
    detail += (detail.empty() ? "" : "; ") + std::string(lit) + " violations " + std::to_string(bad);
  }
  return {ok, detail};
}

Outcome counting() {
  std::vector<std::uint64_t> qs;
  for (std::uint64_t q = 5; q <= 61; q += 2)
    if (ffield::prime_power(q)) qs.push_back(q);
  const char* residues = "exists y. (x = y * y & !(x = 0))";
  const auto dm = reglab::estimate_dim_measure(residues, {}, qs);
  bool counts_ok = true;
  for (const auto& c : dm.counts) counts_ok = counts_ok && c.count == (c.q - 1) / 2;
  const auto rs = reglab::check_ratio_stability(residues, "x = x", {}, qs);
  const bool ok = counts_ok && dm.d == 1 && dm.r == Rational(1, 2) && dm.residual <= 1 &&
                  rs.q_star == Rational(1, 2) && rs.c <= 1;
  return {ok, std::to_string(qs.size()) + " fields: d=" + std::to_string(dm.d) + " r=" + dm.r.str() + " residual " +
                  num(dm.residual) + "; q*=" + rs.q_star.str() + " C " + num(rs.c) +
                  (counts_ok ? "" : "; counts disagree with (q-1)/2")};
}

Outcome oracle_equivalences() {
  Rng rng(1009);
  std::size_t c4_bad = 0, e2_bad = 0;
  double e3_worst = 0;
  for (int t = 0; t < 300; ++t) {
    const auto g = oracle::random_graph(rng, 1 + uniform_below(rng, 8), 1 + uniform_below(rng, 8), uniform_unit(rng));
    if (quasi::four_cycle_count(g) != oracle::four_cycles_quadruple_loop(oracle::adjacency(g))) ++c4_bad;
  }
  for (int t = 0; t < 100; ++t) {
    const auto g = oracle::random_graph(rng, 1 + uniform_below(rng, 10), 1 + uniform_below(rng, 10), 0.5);
    if (quasi::eps2_exact(g).value != oracle::eps2_full_enumeration(oracle::adjacency(g))) ++e2_bad;
  }
  for (int t = 0; t < 100; ++t) {
    const auto g =
        oracle::random_graph(rng, 1 + uniform_below(rng, 50), 1 + uniform_below(rng, 50), uniform_unit(rng));
    e3_worst = std::max(e3_worst, std::abs(quasi::eps3_spectral(g).value - oracle::eps3_dense_svd(oracle::adjacency(g))));
  }
  return {c4_bad == 0 && e2_bad == 0 && e3_worst <= 1e-8,
          "C4 mismatches " + std::to_string(c4_bad) + "/300, eps2 mismatches " + std::to_string(e2_bad) +
              "/100, max eps3 difference " + num(e3_worst) + " over 100"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 64;
    }
  }
  const std::vector<Criterion> criteria{
      {1, "four-cycle, discrepancy and spectral relations on random graphs", 60, gowers_relations},
      {2, "spectral and character subset eps agree on abelian groups", 30, spectral_character_bridge},
      {3, "eps1 is nonnegative in exact arithmetic", 30, eps1_positivity},
      {4, "Paley sweep decays at least like q^-0.8", 120, paley_sweep},
      {5, "Artin-Schreier sets need the index-2 subgroup", 60, artin_schreier},
      {6, "SL2 degree bounds and subset quasirandomness", 300, sl2_suite},
      {7, "subset eps and graph eps1 bound each other", 30, subset_graph_correspondence},
      {8, "quadratic-residue counts: dimension 1, measure 1/2", 30, counting},
      {9, "fast metrics agree with brute-force oracles", 120, oracle_equivalences},
  };
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
      o.passed = false;
      o.detail += "; over the " + num(c.budget_seconds) + " s budget";
    }
    if (!o.passed) ++failed;
    std::printf("%s  criterion %d: %s | %s | %.2f s\n", o.passed ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 64;
  }
  return failed ? 1 : 0;
}

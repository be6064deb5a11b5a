#include "qr/quasi.hpp"

#include "qr/error.hpp"
#include "qr/rng.hpp"
#include "qr/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace qr::quasi {

namespace {

using i128 = __int128;

/// The smaller side S and, for each vertex of the other side T, its
/// neighbourhood as a bitset over S.
struct Oriented {
  bool s_is_v = true;
  std::size_t s = 0;
  std::vector<Bitset> t_rows;
};

Oriented orient(const BipartiteGraph& g) {
  Oriented o;
  o.s_is_v = g.v_size() <= g.w_size();
  o.s = o.s_is_v ? g.v_size() : g.w_size();
  o.t_rows = o.s_is_v ? g.rows() : g.columns();
  return o;
}

Rectangle to_rectangle(const Oriented& o, std::vector<std::size_t> s_side, std::vector<std::size_t> t_side) {
  Rectangle r;
  if (o.s_is_v) {
    r.a = std::move(s_side);
    r.b = std::move(t_side);
  } else {
    r.a = std::move(t_side);
    r.b = std::move(s_side);
  }
  return r;
}

std::vector<std::size_t> mask_to_indices(std::uint64_t mask) {
  std::vector<std::size_t> out;
  while (mask) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

/// {x0⁻¹ x : x ∈ X} for x0 the smallest id of X.
Bitset left_translate_to_identity(const grp::Group& g, const Bitset& x) {
  Bitset out(g.order());
  std::size_t first = 0;
  bool found = false;
  x.for_each([&](std::size_t i) {
    if (!found) {
      first = i;
      found = true;
    }
  });
  const grp::Id inv0 = g.inv(static_cast<grp::Id>(first));
  x.for_each([&](std::size_t i) { out.set(g.mul(inv0, static_cast<grp::Id>(i))); });
  return out;
}

}  // namespace

BipartiteGraph::BipartiteGraph(std::size_t v_size, std::size_t w_size)
    : v_size_(v_size), rows_(w_size, Bitset(v_size)) {}

BipartiteGraph::BipartiteGraph(std::size_t v_size, std::vector<Bitset> rows, std::optional<Provenance> provenance)
    : v_size_(v_size), rows_(std::move(rows)), provenance_(std::move(provenance)) {
  for (const auto& r : rows_)
    if (r.size() != v_size_) throw Error(ErrorCode::InvalidArgument, "adjacency row length differs from |V|");
}

std::size_t BipartiteGraph::edge_count() const noexcept {
  std::size_t e = 0;
  for (const auto& r : rows_) e += r.count();
  return e;
}

std::vector<Bitset> BipartiteGraph::columns() const {
  std::vector<Bitset> cols(v_size_, Bitset(rows_.size()));
  for (std::size_t w = 0; w < rows_.size(); ++w) rows_[w].for_each([&](std::size_t v) { cols[v].set(w); });
  return cols;
}

BipartiteGraph BipartiteGraph::transposed() const { return BipartiteGraph(rows_.size(), columns()); }

BipartiteGraph BipartiteGraph::permuted(const std::vector<std::size_t>& v_perm,
                                        const std::vector<std::size_t>& w_perm) const {
  BipartiteGraph out(v_size_, rows_.size());
  for (std::size_t w = 0; w < rows_.size(); ++w)
    rows_[w].for_each([&](std::size_t v) { out.set_edge(v_perm[v], w_perm[w]); });
  return out;
}

BipartiteGraph cayley_bipartite(const grp::GroupPtr& g, const Bitset& connection, const Bitset& v, const Bitset& w) {
  const std::size_t n = g->order();
  if (connection.size() != n || v.size() != n || w.size() != n)
    throw Error(ErrorCode::InvalidArgument, "bitsets must range over the group");
  if (v.none() || w.none()) throw Error(ErrorCode::CosetMismatch, "cosets must be nonempty");
  const Bitset hv = left_translate_to_identity(*g, v);
  const Bitset hw = left_translate_to_identity(*g, w);
  if (!(hv == hw)) throw Error(ErrorCode::CosetMismatch, "V and W are not cosets of the same subgroup");
  try {
    grp::Subgroup check(g, hv);
  } catch (const Error&) {
    throw Error(ErrorCode::CosetMismatch, "V is not a coset of a subgroup");
  }
  Provenance prov{g, connection, {}, {}};
  v.for_each([&](std::size_t i) { prov.v_ids.push_back(static_cast<grp::Id>(i)); });
  w.for_each([&](std::size_t i) { prov.w_ids.push_back(static_cast<grp::Id>(i)); });
  std::vector<Bitset> rows(prov.w_ids.size(), Bitset(prov.v_ids.size()));
  for (std::size_t wi = 0; wi < prov.w_ids.size(); ++wi) {
    const grp::Id winv = g->inv(prov.w_ids[wi]);
    for (std::size_t vi = 0; vi < prov.v_ids.size(); ++vi)
      if (connection.test(g->mul(prov.v_ids[vi], winv))) rows[wi].set(vi);
  }
  const std::size_t vs = prov.v_ids.size();
  return BipartiteGraph(vs, std::move(rows), std::move(prov));
}

BipartiteGraph cayley_bipartite(const grp::CosetDecomposition& cosets, const Bitset& connection, std::size_t v_coset,
                                std::size_t w_coset) {
  if (v_coset >= cosets.count() || w_coset >= cosets.count())
    throw Error(ErrorCode::InvalidArgument, "coset index out of range");
  return cayley_bipartite(cosets.subgroup().parent_ptr(), connection, cosets.members(v_coset),
                          cosets.members(w_coset));
}

bool check_provenance(const BipartiteGraph& graph, std::size_t samples, std::uint64_t seed) {
  const auto& p = graph.provenance();
  if (!p) return true;
  if (graph.v_size() == 0 || graph.w_size() == 0) return true;
  Rng rng(seed);
  for (std::size_t t = 0; t < samples; ++t) {
    const auto vi = uniform_below(rng, graph.v_size());
    const auto wi = uniform_below(rng, graph.w_size());
    const bool expect = p->connection.test(p->group->mul(p->v_ids[vi], p->group->inv(p->w_ids[wi])));
    if (graph.edge(vi, wi) != expect) return false;
  }
  return true;
}

Rational density(const BipartiteGraph& g) {
  if (g.v_size() == 0 || g.w_size() == 0) throw Error(ErrorCode::InvalidArgument, "graph has an empty side");
  return make_rational(g.edge_count(), BigInt(g.v_size()) * g.w_size());
}

BigInt four_cycle_count(const BipartiteGraph& g) {
  const std::vector<Bitset> side = g.v_size() <= g.w_size() ? g.columns() : g.rows();
  unsigned __int128 diag = 0, off = 0;
  for (std::size_t i = 0; i < side.size(); ++i) {
    const std::uint64_t d = side[i].count();
    diag += static_cast<unsigned __int128>(d) * d;
    for (std::size_t j = i + 1; j < side.size(); ++j) {
      const std::uint64_t c = side[i].and_count(side[j]);
      off += static_cast<unsigned __int128>(c) * c;
    }
  }
  const unsigned __int128 total = diag + 2 * off;
  BigInt out = static_cast<std::uint64_t>(total >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(total);
  return out;
}

Eps1 eps1_quasirandomness(const BipartiteGraph& g) {
  const Rational delta = density(g);
  const BigInt vw = BigInt(g.v_size()) * g.w_size();
  const Rational d2 = delta * delta;
  Eps1 out;
  out.raw = make_rational(four_cycle_count(g), vw * vw) - d2 * d2;
  out.value = out.raw > 0 ? out.raw : Rational(0);
  return out;
}

Eps2 eps2_exact(const BipartiteGraph& g) {
  const Oriented o = orient(g);
  if (o.s > kMaxEnumeratedSide)
    throw Error(ErrorCode::SideTooLarge, "smaller side has " + std::to_string(o.s) + " vertices, limit " +
                                             std::to_string(kMaxEnumeratedSide));
  const auto vw = static_cast<std::int64_t>(g.v_size() * g.w_size());
  const auto edges = static_cast<std::int64_t>(g.edge_count());
  std::vector<std::uint32_t> masks;
  masks.reserve(o.t_rows.size());
  for (const auto& r : o.t_rows) masks.push_back(r.size() ? static_cast<std::uint32_t>(r.words()[0]) : 0u);

  i128 best = 0;
  std::uint32_t best_a = 0;
  const std::uint64_t subsets = std::uint64_t{1} << o.s;
  for (std::uint64_t a = 1; a < subsets; ++a) {
    const auto am = static_cast<std::uint32_t>(a);
    const std::int64_t size_term = edges * std::popcount(am);
    i128 pos = 0, neg = 0;
    for (auto m : masks) {
      const std::int64_t t = vw * std::popcount(m & am) - size_term;
      (t > 0 ? pos : neg) += t;
    }
    const i128 local = std::max(pos, -neg);
    if (local > best) {
      best = local;
      best_a = am;
    }
  }

  Eps2 out;
  out.value = make_rational(BigInt(static_cast<std::int64_t>(best)), BigInt(vw) * vw);
  // Rebuild the other side for the witness.
  std::vector<std::size_t> t_pos, t_neg;
  i128 pos = 0, neg = 0;
  const std::int64_t size_term = edges * std::popcount(best_a);
  for (std::size_t j = 0; j < masks.size(); ++j) {
    const std::int64_t t = vw * std::popcount(masks[j] & best_a) - size_term;
    if (t > 0) {
      pos += t;
      t_pos.push_back(j);
    } else if (t < 0) {
      neg += t;
      t_neg.push_back(j);
    }
  }
  out.witness = to_rectangle(o, mask_to_indices(best_a), pos >= -neg ? t_pos : t_neg);
  return out;
}

SpectralValue eps3_spectral(const BipartiteGraph& g, double tolerance) {
  const double scale = std::sqrt(static_cast<double>(g.v_size()) * static_cast<double>(g.w_size()));
  if (scale == 0) throw Error(ErrorCode::InvalidArgument, "graph has an empty side");
  spectral::LanczosOptions opts;
  opts.tolerance = tolerance * scale;
  const auto sv = spectral::top_singular_value(g.rows(), g.v_size(), true, opts);
  return {sv.value / scale, sv.error / scale};
}

double eps2_spectral_bound(const BipartiteGraph& g, const SpectralValue& eps3) {
  const double v = static_cast<double>(g.v_size());
  const double w = static_cast<double>(g.w_size());
  const double mean_degree = static_cast<double>(g.edge_count()) / w;
  double spread = 0;
  for (const auto& r : g.rows()) spread += std::abs(static_cast<double>(r.count()) - mean_degree);
  return (eps3.value + eps3.error) / 2 + spread / (2 * v * w);
}

RegularityResult is_eps_regular(const BipartiteGraph& g, const Rational& eps, const RegularityOptions& options) {
  if (eps < 0) throw Error(ErrorCode::InvalidArgument, "eps must be nonnegative");
  const Oriented o = orient(g);
  const std::size_t s = o.s;
  const std::size_t t = o.t_rows.size();
  const BigInt num_big = numerator(eps), den_big = denominator(eps);
  // ε ≥ 1 only admits |A| = |S|, |B| = |T| and the full rectangle has zero discrepancy.
  if (num_big >= den_big) return {true, true, 1, std::nullopt};
  const auto num = num_big.convert_to<std::int64_t>();
  const auto den = den_big.convert_to<std::int64_t>();
  const auto vw = static_cast<std::int64_t>(g.v_size() * g.w_size());
  const auto edges = static_cast<std::int64_t>(g.edge_count());
  auto ceil_frac = [&](std::size_t n) {
    return static_cast<std::size_t>((static_cast<i128>(num) * static_cast<i128>(n) + den - 1) / den);
  };
  const std::size_t a_min = ceil_frac(s);
  const std::size_t b_min = std::max<std::size_t>(ceil_frac(t), 1);

  std::vector<std::int64_t> disc(t);
  std::vector<std::size_t> order(t);
  // Returns the violating B (as T indices) or nothing.
  auto check_a = [&](const std::vector<std::size_t>& counts, std::size_t a_size) -> std::optional<std::vector<std::size_t>> {
    if (a_size == 0) return std::nullopt;
    for (std::size_t j = 0; j < t; ++j)
      disc[j] = vw * static_cast<std::int64_t>(counts[j]) - edges * static_cast<std::int64_t>(a_size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return disc[x] < disc[y]; });
    i128 low = 0, high = 0;
    for (std::size_t k = 1; k <= t; ++k) {
      low += disc[order[k - 1]];
      high += disc[order[t - k]];
      if (k < b_min) continue;
      const i128 bound = static_cast<i128>(num) * static_cast<i128>(a_size) * static_cast<i128>(k) * vw;
      if (high * den > bound) return std::vector<std::size_t>(order.end() - static_cast<std::ptrdiff_t>(k), order.end());
      if (-low * den > bound) return std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return std::nullopt;
  };

  RegularityResult result;
  std::vector<std::size_t> counts(t);
  if (s <= kMaxEnumeratedSide) {
    const std::uint64_t subsets = std::uint64_t{1} << s;
    std::vector<std::uint32_t> masks;
    for (const auto& r : o.t_rows) masks.push_back(r.size() ? static_cast<std::uint32_t>(r.words()[0]) : 0u);
    for (std::uint64_t a = 1; a < subsets; ++a) {
      const auto am = static_cast<std::uint32_t>(a);
      const auto a_size = static_cast<std::size_t>(std::popcount(am));
      if (a_size < a_min) continue;
      ++result.checked;
      for (std::size_t j = 0; j < t; ++j) counts[j] = static_cast<std::size_t>(std::popcount(masks[j] & am));
      if (auto b = check_a(counts, a_size)) {
        result.regular = false;
        std::sort(b->begin(), b->end());
        result.witness = to_rectangle(o, mask_to_indices(am), std::move(*b));
        return result;
      }
    }
    return result;
  }

  result.exhaustive = false;
  Rng rng(options.seed);
  std::vector<std::size_t> pool(s);
  const std::size_t lo = std::max<std::size_t>(a_min, 1);
  for (std::size_t trial = 0; trial < options.samples; ++trial) {
    const std::size_t a_size = lo + static_cast<std::size_t>(uniform_below(rng, s - lo + 1));
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < a_size; ++i) std::swap(pool[i], pool[i + uniform_below(rng, s - i)]);
    Bitset a(s);
    for (std::size_t i = 0; i < a_size; ++i) a.set(pool[i]);
    for (std::size_t j = 0; j < t; ++j) counts[j] = o.t_rows[j].and_count(a);
    ++result.checked;
    if (auto b = check_a(counts, a_size)) {
      result.regular = false;
      std::sort(b->begin(), b->end());
      result.witness = to_rectangle(o, a.to_indices(), std::move(*b));
      return result;
    }
  }
  return result;
}

const char* to_string(RelationStatus s) noexcept {
  switch (s) {
    case RelationStatus::pass: return "pass";
    case RelationStatus::fail: return "fail";
    case RelationStatus::inconclusive: return "inconclusive";
    case RelationStatus::finding: return "finding";
  }
  return "unknown";
}

bool QuasiReport::relations_hold() const {
  return std::none_of(relations.begin(), relations.end(),
                      [](const Relation& r) { return r.status == RelationStatus::fail; });
}

QuasiReport analyze(const BipartiteGraph& g) {
  QuasiReport rep;
  rep.v_size = g.v_size();
  rep.w_size = g.w_size();
  rep.edges = g.edge_count();
  rep.delta = density(g);
  rep.eps1 = eps1_quasirandomness(g);
  if (std::min(g.v_size(), g.w_size()) <= kMaxEnumeratedSide) rep.eps2 = eps2_exact(g);
  rep.eps3 = eps3_spectral(g);
  rep.eps2_bound = eps2_spectral_bound(g, rep.eps3);

  const double eps1 = to_double(rep.eps1.value);
  const double root = fourth_root(rep.eps1.value);
  const double eps3_low = std::max(0.0, rep.eps3.value - rep.eps3.error);
  const double eps3_high = rep.eps3.value + rep.eps3.error;
  auto pass_if = [](bool ok) { return ok ? RelationStatus::pass : RelationStatus::fail; };

  if (rep.eps2) {
    rep.relations.push_back({"eps2 <= eps1^(1/4)", to_double(rep.eps2->value), root,
                             pass_if(le_fourth_root(rep.eps2->value, rep.eps1.value)), true});
  } else {
    rep.relations.push_back({"eps2 <= eps1^(1/4)", rep.eps2_bound, root,
                             rep.eps2_bound <= root + kFloatSlack ? RelationStatus::pass : RelationStatus::inconclusive,
                             false});
  }
  rep.relations.push_back({"eps3 <= eps1^(1/4)", rep.eps3.value, root, pass_if(eps3_low <= root + kFloatSlack), false});
  if (rep.eps2) {
    const Rational rhs = 12 * rep.eps2->value;
    rep.relations.push_back({"eps1 <= 12*eps2", eps1, to_double(rhs),
                             rep.eps1.value <= rhs ? RelationStatus::pass : RelationStatus::finding, true});
  } else {
    const double rhs = 12 * rep.eps2_bound;
    rep.relations.push_back({"eps1 <= 12*eps2", eps1, rhs,
                             eps1 > rhs + kFloatSlack ? RelationStatus::finding : RelationStatus::inconclusive, false});
  }
  const double delta = to_double(rep.delta);
  rep.relations.push_back({"eps1 <= delta*eps3^2", eps1, delta * rep.eps3.value * rep.eps3.value,
                           pass_if(eps1 <= delta * eps3_high * eps3_high + kFloatSlack), false});
  return rep;
}

}  // namespace qr::quasi

#include "qr/reglab.hpp"

#include "qr/error.hpp"
#include "qr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qr::reglab {

namespace {

constexpr std::size_t kSearchCap = 4096;

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed ^ (salt * 0x9e3779b97f4a7c15ull);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<std::string> param_names(const defform::Assignment& params) {
  std::vector<std::string> out;
  for (const auto& [k, v] : params) out.push_back(k);
  return out;
}

Bitset random_subset(Rng& rng, std::size_t n) {
  Bitset d(n);
  for (std::size_t i = 0; i < n; ++i)
    if (uniform_unit(rng) < 0.5) d.set(i);
  return d;
}

quasi::BipartiteGraph random_graph(Rng& rng, std::size_t nv, std::size_t nw) {
  quasi::BipartiteGraph g(nv, nw);
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t v = 0; v < nv; ++v)
      if (uniform_unit(rng) < 0.5) g.set_edge(v, w);
  return g;
}

std::string power_term(const std::string& var, std::uint64_t k) {
  std::string out = var;
  for (std::uint64_t i = 1; i < k; ++i) out += " * " + var;
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::shared_ptr<const ffield::Field> field_for(std::uint64_t q) {
  const auto pp = ffield::prime_power(q);
  if (!pp) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not a prime power");
  return ffield::Field::create(ffield::make_field(pp->first, pp->second));
}

std::vector<std::string> carrier_variables(unsigned arity) {
  if (arity == 1) return {"x"};
  if (arity == 4) return {"a", "b", "c", "d"};
  std::vector<std::string> out;
  for (unsigned i = 0; i < arity; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

Bitset definable_subset(const grp::Group& g, std::string_view formula, const defform::Assignment& params) {
  const auto& carrier = g.carrier();
  if (!carrier) throw Error(ErrorCode::InvalidArgument, "group " + g.name() + " has no definable carrier");
  defform::ParseOptions opts;
  opts.params = param_names(params);
  opts.free_vars = carrier_variables(carrier->arity);
  const auto f = defform::parse(formula, opts);
  const auto& field = carrier->field;
  const std::uint64_t q = field->order();
  Bitset out(g.order());
  const defform::EvalOptions eval_opts;
  std::uint64_t cells = 1;
  bool small = true;
  for (unsigned i = 0; i < carrier->arity && small; ++i) {
    if (cells > eval_opts.cell_cap / q) small = false;
    cells *= q;
  }
  if (small && cells <= eval_opts.cell_cap) {
    const auto set = defform::evaluate(f, field, params, eval_opts);
    for (std::size_t id = 0; id < g.order(); ++id)
      if (set.contains(carrier->cells[id])) out.set(id);
    return out;
  }
  std::vector<std::uint64_t> point(carrier->arity);
  for (std::size_t id = 0; id < g.order(); ++id) {
    std::uint64_t c = carrier->cells[id];
    for (unsigned i = carrier->arity; i-- > 0;) {
      point[i] = c % q;
      c /= q;
    }
    if (defform::evaluate_point(f, *field, params, point)) out.set(id);
  }
  return out;
}

FamilyInstance Family::instantiate(std::uint64_t q) const {
  if (!ffield::prime_power(q)) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not a prime power");
  if (!admissible(q)) throw Error(ErrorCode::InadmissibleQ, name + " is not defined at q = " + std::to_string(q));
  FamilyInstance inst;
  inst.q = q;
  const auto field = field_for(q);
  inst.group = group_builder(field);
  inst.set_formula = set_formula(*field);
  inst.subset = definable_subset(*inst.group, inst.set_formula);
  return inst;
}

const std::vector<Family>& builtin_families() {
  static const std::vector<Family> families = [] {
    std::vector<Family> out;
    out.push_back({"paley", "additive group, D = nonzero squares",
                   [](std::uint64_t q) { return q % 2 == 1; },
                   [](const auto& f) { return grp::additive_group(f); },
                   [](const ffield::Field&) { return std::string("exists y. (x = y * y & !(x = 0))"); }});
    out.push_back({"artin_schreier", "additive group, D = image of y^p - y",
                   [](std::uint64_t) { return true; },
                   [](const auto& f) { return grp::additive_group(f); },
                   [](const ffield::Field& f) {
                     return "exists y. x = " + power_term("y", f.characteristic()) + " - y";
                   }});
    out.push_back({"sl2_trace_square", "SL2, D = matrices whose trace is a nonzero square",
                   [](std::uint64_t) { return true; },
                   [](const auto& f) { return grp::sl2(f); },
                   [](const ffield::Field&) { return std::string("exists y. (a + d = y * y & !(a + d = 0))"); }});
    out.push_back({"mult_cubes", "multiplicative group, D = cubes",
                   [](std::uint64_t q) { return q % 3 == 1; },
                   [](const auto& f) { return grp::multiplicative_group(f); },
                   [](const ffield::Field&) { return std::string("exists y. x = y * y * y"); }});
    out.push_back({"complete", "additive group, D = G",
                   [](std::uint64_t) { return true; },
                   [](const auto& f) { return grp::additive_group(f); },
                   [](const ffield::Field&) { return std::string("x = x"); }});
    return out;
  }();
  return families;
}

const Family& find_family(std::string_view name) {
  for (const auto& f : builtin_families())
    if (f.name == name) return f;
  throw Error(ErrorCode::InvalidArgument, "unknown family '" + std::string(name) + "'");
}

SubgroupSearchOutcome subgroup_search(const grp::GroupPtr& g, const Bitset& d, std::size_t max_index) {
  if (g->order() > kSearchCap) throw Error(ErrorCode::OrderCap, "subgroup_search needs |G| <= 4096");
  if (d.size() != g->order()) throw Error(ErrorCode::InvalidArgument, "connection set size does not match the group");
  const auto candidates = grp::normal_subgroups_up_to_index(g, std::max<std::size_t>(max_index, 1));
  std::optional<SubgroupSearchOutcome> best;
  for (const auto& h : candidates) {
    const grp::CosetDecomposition cd(h);
    std::vector<CosetPairEps1> pairs;
    Rational worst = 0;
    bool beaten = false;
    for (std::size_t i = 0; i < cd.count() && !beaten; ++i)
      for (std::size_t j = 0; j < cd.count(); ++j) {
        auto e = quasi::eps1_quasirandomness(quasi::cayley_bipartite(cd, d, i, j)).value;
        worst = std::max(worst, e);
        pairs.push_back({i, j, std::move(e)});
        if (best && worst > best->max_coset_eps1) {
          beaten = true;
          break;
        }
      }
    if (beaten || (best && !(worst < best->max_coset_eps1))) continue;
    best = SubgroupSearchOutcome{h, worst, h.index(), std::move(pairs), 0};
  }
  best->candidates = candidates.size();
  return std::move(*best);
}

TranslateEps translate_subset_eps(const grp::Subgroup& h, const Bitset& d, std::size_t samples, std::uint64_t seed) {
  const auto& g = h.parent();
  const auto local = grp::as_group(h);
  const grp::CosetDecomposition cd(h);
  Rng rng(seed);
  TranslateEps out;
  for (std::size_t c = 0; c < cd.count(); ++c) {
    const auto members = cd.member_ids(c);
    std::vector<grp::Id> shifts{cd.reps()[c]};
    for (std::size_t s = 0; s < samples; ++s) shifts.push_back(members[uniform_below(rng, members.size())]);
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (auto x : shifts) {
      // Dx ∩ H = {y ∈ H : y x⁻¹ ∈ D}
      Bitset s(local.to_parent.size());
      const auto xinv = g.inv(x);
      for (std::size_t i = 0; i < local.to_parent.size(); ++i)
        if (d.test(g.mul(local.to_parent[i], xinv))) s.set(i);
      const auto r = fourier::subset_qr_spectral(*local.group, s);
      ++out.evaluated;
      lo = std::min(lo, r.eps);
      hi = std::max(hi, r.eps);
      if (r.eps > out.eps) out.eps = r.eps;
      out.error = std::max(out.error, r.error);
    }
    out.spread = std::max(out.spread, hi - lo);
  }
  return out;
}

std::optional<Fit> fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    if (x[i] > 0 && y[i] > 0) pts.emplace_back(std::log(x[i]), std::log(y[i]));
  if (pts.size() < 4) return std::nullopt;
  double mx = 0, my = 0;
  for (auto [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (auto [a, b] : pts) {
    sxx += (a - mx) * (a - mx);
    sxy += (a - mx) * (b - my);
  }
  if (sxx == 0) return std::nullopt;
  Fit f;
  f.slope = sxy / sxx;
  f.constant = std::exp(my - f.slope * mx);
  f.points = pts.size();
  return f;
}

SweepResult sweep(const Family& family, std::vector<std::uint64_t> qs, const SweepOptions& options) {
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  for (auto q : qs) {
    if (!ffield::prime_power(q)) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not a prime power");
    if (!family.admissible(q))
      throw Error(ErrorCode::InadmissibleQ, family.name + " is not defined at q = " + std::to_string(q));
  }
  SweepResult result;
  result.family = family.name;
  result.seed = options.seed;
  for (auto q : qs) {
    const auto inst = family.instantiate(q);
    const auto& g = inst.group;
    if (g->order() > kSearchCap)
      throw Error(ErrorCode::OrderCap, family.name + " at q = " + std::to_string(q) + " has order " +
                                           std::to_string(g->order()) + " > 4096");
    SweepRow row;
    row.q = q;
    row.group_order = g->order();
    const auto whole = quasi::cayley_bipartite(g, inst.subset, Bitset::full(g->order()), Bitset::full(g->order()));
    row.delta = quasi::density(whole);
    row.eps1 = quasi::eps1_quasirandomness(whole).value;
    row.eps3 = quasi::eps3_spectral(whole);
    auto found = subgroup_search(g, inst.subset, options.max_index);
    row.h_index = found.index;
    if (found.subgroup.formula())
      row.h_descriptor = *found.subgroup.formula();
    else if (found.subgroup.members() == inst.subset)
      row.h_descriptor = inst.set_formula;
    else
      row.h_descriptor = found.subgroup.serialize();
    row.max_coset_eps1 = found.max_coset_eps1;
    row.pairs = std::move(found.pairs);
    row.fourier = translate_subset_eps(found.subgroup, inst.subset, options.translate_samples, mix(options.seed, q));
    result.rows.push_back(std::move(row));
  }
  std::vector<double> xq, ye, xf, yf;
  for (const auto& row : result.rows) {
    if (row.max_coset_eps1 > 0) {
      xq.push_back(static_cast<double>(row.q));
      ye.push_back(to_double(row.max_coset_eps1));
    } else {
      result.zero_rows.push_back(row.q);
    }
    if (row.fourier.eps > 0) {
      xf.push_back(static_cast<double>(row.q));
      yf.push_back(row.fourier.eps);
    }
  }
  result.eps1_fit = fit_power_law(xq, ye);
  result.fourier_fit = fit_power_law(xf, yf);
  return result;
}

Rational snap_rational(const std::vector<std::pair<double, double>>& intervals, double center, std::int64_t max_den,
                       bool positive) {
  constexpr double kTol = 1e-12;
  for (int widen = 0; widen < 16 && !intervals.empty(); ++widen) {
    const double factor = std::ldexp(1.0, widen);
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (auto [c, h] : intervals) {
      lo = std::max(lo, c - h * factor);
      hi = std::min(hi, c + h * factor);
    }
    if (lo > hi + kTol) continue;
    for (std::int64_t den = 1; den <= max_den; ++den) {
      auto first = static_cast<std::int64_t>(std::ceil(lo * static_cast<double>(den) - kTol));
      const auto last = static_cast<std::int64_t>(std::floor(hi * static_cast<double>(den) + kTol));
      if (positive) first = std::max<std::int64_t>(first, 1);
      if (first > last) continue;
      auto num = static_cast<std::int64_t>(std::llround(center * static_cast<double>(den)));
      num = std::clamp(num, first, last);
      return Rational(num, den);
    }
  }
  // Nothing small fits: nearest fraction to the center.
  Rational best(positive ? 1 : 0, 1);
  double gap = std::numeric_limits<double>::infinity();
  for (std::int64_t den = 1; den <= max_den; ++den) {
    auto num = static_cast<std::int64_t>(std::llround(center * static_cast<double>(den)));
    if (positive) num = std::max<std::int64_t>(num, 1);
    const double g = std::abs(static_cast<double>(num) / static_cast<double>(den) - center);
    if (g < gap) {
      gap = g;
      best = Rational(num, den);
    }
  }
  return best;
}

DimMeasure estimate_dim_measure(std::string_view formula, const defform::Assignment& params,
                                const std::vector<std::uint64_t>& qs) {
  if (qs.size() < 3) throw Error(ErrorCode::InvalidArgument, "estimate_dim_measure needs at least 3 values of q");
  defform::ParseOptions opts;
  opts.params = param_names(params);
  const auto f = defform::parse(formula, opts);
  DimMeasure out;
  for (auto q : qs) out.counts.push_back({q, defform::evaluate(f, field_for(q), params).size()});
  std::vector<double> x, y;
  for (const auto& c : out.counts)
    if (c.count > 0) {
      x.push_back(static_cast<double>(c.q));
      y.push_back(static_cast<double>(c.count));
    }
  if (x.empty()) throw Error(ErrorCode::EmptyAcrossSweep, "the set is empty at every q");
  double slope;
  if (x.size() >= 2 && x.front() != x.back()) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += std::log(x[i]);
      my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
      sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    }
    slope = sxy / sxx;
  } else {
    slope = std::log(y.back()) / std::log(x.back());
  }
  out.d = static_cast<unsigned>(std::max(0.0, std::round(slope)));
  std::vector<std::pair<double, double>> bands;
  double mean = 0;
  for (const auto& c : out.counts) {
    const double qd = std::pow(static_cast<double>(c.q), out.d);
    const double ratio = static_cast<double>(c.count) / qd;
    mean += ratio;
    bands.emplace_back(ratio, 1 / std::sqrt(static_cast<double>(c.q)));
  }
  out.r_mean = mean / static_cast<double>(out.counts.size());
  out.r = snap_rational(bands, out.r_mean, 64, true);
  const double r = to_double(out.r);
  for (const auto& c : out.counts) {
    const double qd = std::pow(static_cast<double>(c.q), out.d);
    out.residual = std::max(out.residual, std::abs(static_cast<double>(c.count) - r * qd) /
                                              (qd / std::sqrt(static_cast<double>(c.q))));
  }
  return out;
}

RatioStability check_ratio_stability(std::string_view a, std::string_view b, const defform::Assignment& params,
                                     const std::vector<std::uint64_t>& qs) {
  defform::ParseOptions opts;
  opts.params = param_names(params);
  const auto fb = defform::parse(b, opts);
  opts.free_vars = fb.free_vars();
  const auto fa = defform::parse(a, opts);
  if (fa.arity() != fb.arity()) throw Error(ErrorCode::InvalidArgument, "formulas have different arity");
  RatioStability out;
  std::vector<std::pair<double, double>> bands;
  double center = 0;
  std::size_t used = 0;
  for (auto q : qs) {
    const auto field = field_for(q);
    const auto sa = defform::evaluate(fa, field, params);
    const auto sb = defform::evaluate(fb, field, params);
    if (!sa.membership().is_subset_of(sb.membership()))
      throw Error(ErrorCode::NotSubset, "A is not contained in B at q = " + std::to_string(q));
    out.counts.push_back({{q, sa.size()}, sb.size()});
    if (sb.size() == 0) continue;
    const double ratio = static_cast<double>(sa.size()) / static_cast<double>(sb.size());
    bands.emplace_back(ratio, 1 / std::sqrt(static_cast<double>(q)));
    center += ratio;
    ++used;
  }
  if (used == 0) return out;
  out.q_star = snap_rational(bands, center / static_cast<double>(used));
  const double qs_d = to_double(out.q_star);
  for (const auto& [pa, nb] : out.counts) {
    if (nb == 0) continue;
    const double dev = std::abs(static_cast<double>(pa.count) - qs_d * static_cast<double>(nb));
    out.c = std::max(out.c, dev / (static_cast<double>(nb) / std::sqrt(static_cast<double>(pa.q))));
  }
  return out;
}

WeakRegularityAudit weak_regularity_audit(const Family& family, std::uint64_t q, std::size_t max_index) {
  const auto inst = family.instantiate(q);
  const auto found = subgroup_search(inst.group, inst.subset, max_index);
  const grp::CosetDecomposition cd(found.subgroup);
  WeakRegularityAudit out;
  out.family = family.name;
  out.q = q;
  out.h_index = found.index;
  out.ref_quarter = std::pow(static_cast<double>(q), -0.25);
  out.ref_half = std::pow(static_cast<double>(q), -0.5);
  for (std::size_t i = 0; i < cd.count(); ++i)
    for (std::size_t j = 0; j < cd.count(); ++j) {
      const auto graph = quasi::cayley_bipartite(cd, inst.subset, i, j);
      PairDefect p;
      p.v = i;
      p.w = j;
      p.eps1 = quasi::eps1_quasirandomness(graph).value;
      if (std::min(graph.v_size(), graph.w_size()) <= quasi::kMaxEnumeratedSide) {
        const auto e2 = quasi::eps2_exact(graph);
        p.defect = to_double(e2.value);
        p.exact = true;
        p.within_fourth_root = le_fourth_root(e2.value, p.eps1);
      } else {
        const double spectral = quasi::eps2_spectral_bound(graph, quasi::eps3_spectral(graph));
        const double root = fourth_root(p.eps1);
        p.defect = std::min(spectral, root);
        if (spectral <= root + quasi::kFloatSlack) p.within_fourth_root = true;
      }
      out.max_defect = std::max(out.max_defect, p.defect);
      out.pairs.push_back(std::move(p));
    }
  return out;
}

bool SuiteResult::passed() const { return failures() == 0; }

std::size_t SuiteResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed && !c.finding; }));
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gowers", "cor25", "lemma24", "sl2"};
  return names;
}

namespace {

// Tallies one named check over many trials, keeping the first failure.
struct Tally {
  Tally() = default;
  explicit Tally(std::string l) : label(std::move(l)) {}

  std::string label;
  std::size_t trials = 0, failed = 0;
  std::string first;
  bool finding = false;

  void add(bool ok, const std::string& detail) {
    ++trials;
    if (!ok && failed++ == 0) first = detail;
  }
  Check check() const {
    Check c;
    c.label = label;
    c.finding = finding && failed > 0;
    c.passed = failed == 0;
    c.detail = std::to_string(trials - failed) + "/" + std::to_string(trials) + " hold";
    if (failed) c.detail += "; first counterexample: " + first;
    return c;
  }
};

std::string describe_graph(const quasi::BipartiteGraph& g) {
  std::string s = std::to_string(g.v_size()) + "x" + std::to_string(g.w_size()) + " edges";
  for (std::size_t w = 0; w < g.w_size(); ++w)
    for (std::size_t v = 0; v < g.v_size(); ++v)
      if (g.edge(v, w)) s += " " + std::to_string(v) + "-" + std::to_string(w);
  return s;
}

SuiteResult gowers_suite(std::uint64_t seed) {
  SuiteResult out{"gowers", seed, {}};
  Rng rng(mix(seed, 1));
  std::vector<Tally> tallies(4);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_graph(rng, 1 + uniform_below(rng, 10), 1 + uniform_below(rng, 10));
    const auto rep = quasi::analyze(g);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& r = rep.relations[i];
      tallies[i].label = r.name;
      tallies[i].finding = i == 2;  // ε₁ ≤ 12ε₂ is recorded, not enforced
      const bool ok = r.status == quasi::RelationStatus::pass;
      tallies[i].add(ok, describe_graph(g) + " (lhs " + fmt(r.lhs) + ", rhs " + fmt(r.rhs) + ")");
    }
  }
  for (auto& t : tallies) out.checks.push_back(t.check());
  return out;
}

SuiteResult cor25_suite(std::uint64_t seed) {
  SuiteResult out{"cor25", seed, {}};
  Rng rng(mix(seed, 2));
  for (const char* lit : {"cyclic:16", "add:3^2"}) {
    const auto g = grp::parse_group_literal(lit);
    Tally up{std::string(lit) + ": eps <= eps1^(1/4)"}, down{std::string(lit) + ": eps1 <= eps^2"};
    for (int t = 0; t < 50; ++t) {
      const auto d = random_subset(rng, g->order());
      const auto rec = fourier::verify_cor25(g, d);
      const std::string detail = "eps " + fmt(rec.subset.eps) + ", eps1 " + fmt(to_double(rec.eps1));
      up.add(rec.relations[0].status == quasi::RelationStatus::pass, detail);
      down.add(rec.relations[1].status == quasi::RelationStatus::pass, detail);
    }
    out.checks.push_back(up.check());
    out.checks.push_back(down.check());
  }
  return out;
}

SuiteResult lemma24_suite(std::uint64_t seed) {
  SuiteResult out{"lemma24", seed, {}};
  Rng rng(mix(seed, 3));
  std::vector<grp::GroupPtr> groups;
  for (std::size_t n = 1; n <= 32; ++n) groups.push_back(grp::cyclic_group(n));
  for (std::uint64_t q = 2; q <= 64; ++q)
    if (ffield::prime_power(q)) groups.push_back(grp::additive_group(field_for(q)));
  for (const auto& g : groups) {
    Tally t{g->name() + ": spectral = characters"};
    for (int k = 0; k < 20; ++k) {
      const auto d = random_subset(rng, g->order());
      const double a = fourier::subset_qr_spectral(*g, d).eps, b = fourier::subset_qr_characters(*g, d).eps;
      t.add(std::abs(a - b) <= 1e-8, "spectral " + fmt(a) + " vs characters " + fmt(b));
    }
    out.checks.push_back(t.check());
  }
  return out;
}

SuiteResult sl2_suite(std::uint64_t seed) {
  SuiteResult out{"sl2", seed, {}};
  {
    const auto degrees = fourier::irrep_dimensions(*grp::sl2(field_for(3)));
    const std::vector<unsigned> expect{1, 1, 1, 2, 2, 2, 3};
    std::string got;
    for (auto d : degrees) got += (got.empty() ? "" : ",") + std::to_string(d);
    out.checks.push_back({"SL2(3) degrees", degrees == expect, false, got});
  }
  for (std::uint64_t q : {3u, 5u, 7u}) {
    const auto degrees = fourier::irrep_dimensions(*grp::sl2(field_for(q)));
    const unsigned min_nontrivial = degrees.size() > 1 ? degrees[1] : 0;
    out.checks.push_back({"SL2(" + std::to_string(q) + ") min nontrivial degree >= (q-1)/2",
                          2 * std::uint64_t{min_nontrivial} >= q - 1, false,
                          "min nontrivial degree " + std::to_string(min_nontrivial)});
  }
  Rng rng(mix(seed, 4));
  for (std::uint64_t q : {3u, 5u}) {
    const auto g = grp::sl2(field_for(q));
    const double qd = static_cast<double>(q);
    Tally subset{"SL2(" + std::to_string(q) + ") subset eps <= 2q^(-1/2)"};
    Tally graph{"SL2(" + std::to_string(q) + ") graph eps1 <= 4/q"};
    for (int t = 0; t < 100; ++t) {
      const auto d = random_subset(rng, g->order());
      const auto s = fourier::subset_qr_spectral(*g, d);
      subset.add(s.eps - s.error <= 2 / std::sqrt(qd) + 1e-8, "eps " + fmt(s.eps));
      const auto full = Bitset::full(g->order());
      const double e1 = to_double(quasi::eps1_quasirandomness(quasi::cayley_bipartite(g, d, full, full)).value);
      graph.add(e1 <= 4 / qd + 1e-8, "eps1 " + fmt(e1));
    }
    out.checks.push_back(subset.check());
    out.checks.push_back(graph.check());
  }
  return out;
}

}  // namespace

SuiteResult run_suite(std::string_view suite, std::uint64_t seed) {
  if (suite == "gowers") return gowers_suite(seed);
  if (suite == "cor25") return cor25_suite(seed);
  if (suite == "lemma24") return lemma24_suite(seed);
  if (suite == "sl2") return sl2_suite(seed);
  throw Error(ErrorCode::InvalidArgument, "unknown suite '" + std::string(suite) + "'");
}

}  // namespace qr::reglab

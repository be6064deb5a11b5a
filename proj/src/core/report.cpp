#include "qr/report.hpp"

#include "qr/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace qr::report {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxListedPoints = 1000;

json rational(const Rational& r) {
  return {{"num", to_string(numerator(r))}, {"den", to_string(denominator(r))}, {"value", to_double(r)}};
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json spectral(const quasi::SpectralValue& v) { return {{"value", v.value}, {"error", v.error}}; }

json field_json(const ffield::FieldSpec& spec) {
  return {{"q", spec.order()},
          {"p", spec.p},
          {"n", spec.n},
          {"modulus", spec.modulus_string()},
          {"order_hash", hex64(spec.order_hash())}};
}

json group_json(const grp::Group& g) {
  json j{{"name", g.name()},
         {"label", grp::to_string(g.label())},
         {"order", g.order()},
         {"abelian", g.is_abelian()},
         {"order_hash", hex64(g.hash())}};
  if (const auto& c = g.carrier()) {
    j["field"] = field_json(c->field->spec());
    j["carrier_formula"] = c->set_formula;
    j["carrier_complexity"] = defform::complexity(defform::parse(c->set_formula));
    j["mul_formula"] = c->mul_formula;
    j["mul_complexity"] = defform::complexity(defform::parse(c->mul_formula));
  }
  return j;
}

json relations_json(const std::vector<quasi::Relation>& rels) {
  json out = json::array();
  for (const auto& r : rels)
    out.push_back({{"name", r.name},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"status", quasi::to_string(r.status)},
                   {"exact", r.exact}});
  return out;
}

json quasi_json(const quasi::QuasiReport& r) {
  json j{{"v_size", r.v_size},
         {"w_size", r.w_size},
         {"edges", r.edges},
         {"delta", rational(r.delta)},
         {"eps1", rational(r.eps1.value)},
         {"eps1_raw", rational(r.eps1.raw)},
         {"eps2_bound", r.eps2_bound},
         {"eps3", spectral(r.eps3)},
         {"relations", relations_json(r.relations)},
         {"relations_hold", r.relations_hold()}};
  if (r.eps2) {
    j["eps2"] = rational(r.eps2->value);
    j["eps2_witness"] = {{"a", r.eps2->witness.a}, {"b", r.eps2->witness.b}};
  } else {
    j["eps2"] = nullptr;
  }
  return j;
}

json subset_json(const fourier::SubsetQR& s) {
  return {{"eps", s.eps}, {"error", s.error}, {"method", fourier::to_string(s.method)}};
}

json pairs_json(const std::vector<reglab::CosetPairEps1>& pairs) {
  json out = json::array();
  for (const auto& p : pairs) out.push_back({{"v", p.v}, {"w", p.w}, {"eps1", rational(p.eps1)}});
  return out;
}

json translate_json(const reglab::TranslateEps& t) {
  return {{"eps", t.eps}, {"error", t.error}, {"spread", t.spread}, {"evaluated", t.evaluated}};
}

json fit_json(const std::optional<reglab::Fit>& f) {
  if (!f) return nullptr;
  return {{"slope", f->slope}, {"constant", f->constant}, {"points", f->points}};
}

json suite_json(const reglab::SuiteResult& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"label", c.label}, {"passed", c.passed}, {"finding", c.finding}, {"detail", c.detail}});
  return {{"schema", kSchema}, {"suite", r.suite}, {"seed", r.seed},
          {"passed", r.passed()}, {"failures", r.failures()}, {"checks", checks}};
}

std::string dump(const json& j) { return j.dump(2); }

}  // namespace

std::string to_json(const quasi::QuasiReport& r) {
  json j = quasi_json(r);
  j["schema"] = kSchema;
  return dump(j);
}

std::string to_json(const reglab::SweepResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"q", row.q},
                    {"group_order", row.group_order},
                    {"delta", rational(row.delta)},
                    {"eps1", rational(row.eps1)},
                    {"eps3", spectral(row.eps3)},
                    {"fourier_eps", translate_json(row.fourier)},
                    {"h_index", row.h_index},
                    {"h_descriptor", row.h_descriptor},
                    {"max_coset_eps1", rational(row.max_coset_eps1)},
                    {"pairs", pairs_json(row.pairs)}});
  return dump({{"schema", kSchema},
               {"family", r.family},
               {"seed", r.seed},
               {"rows", rows},
               {"eps1_fit", fit_json(r.eps1_fit)},
               {"fourier_fit", fit_json(r.fourier_fit)},
               {"zero_rows", r.zero_rows}});
}

std::string to_json(const reglab::DimMeasure& r) {
  json counts = json::array();
  for (const auto& c : r.counts) counts.push_back({{"q", c.q}, {"count", c.count}});
  return dump({{"schema", kSchema},
               {"d", r.d},
               {"r", rational(r.r)},
               {"r_mean", r.r_mean},
               {"residual", r.residual},
               {"counts", counts}});
}

std::string to_json(const reglab::RatioStability& r) {
  json counts = json::array();
  for (const auto& [a, b] : r.counts) counts.push_back({{"q", a.q}, {"a", a.count}, {"b", b}});
  return dump({{"schema", kSchema}, {"q_star", rational(r.q_star)}, {"c", r.c}, {"counts", counts}});
}

std::string to_json(const reglab::WeakRegularityAudit& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    json j{{"v", p.v}, {"w", p.w}, {"eps1", rational(p.eps1)}, {"defect", p.defect}, {"exact", p.exact}};
    j["within_fourth_root"] = p.within_fourth_root ? json(*p.within_fourth_root) : json(nullptr);
    pairs.push_back(j);
  }
  return dump({{"schema", kSchema},
               {"family", r.family},
               {"q", r.q},
               {"h_index", r.h_index},
               {"max_defect", r.max_defect},
               {"ref_quarter", r.ref_quarter},
               {"ref_half", r.ref_half},
               {"pairs", pairs}});
}

std::string to_json(const reglab::SuiteResult& r) { return dump(suite_json(r)); }

std::string sweep_csv(const reglab::SweepResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "q,delta_num,delta_den,eps1_num,eps1_den,eps3,fourier_eps,h_index,max_coset_eps1_num,max_coset_eps1_den\n";
  for (const auto& row : r.rows)
    os << row.q << ',' << numerator(row.delta) << ',' << denominator(row.delta) << ',' << numerator(row.eps1) << ','
       << denominator(row.eps1) << ',' << row.eps3.value << ',' << row.fourier.eps << ',' << row.h_index << ','
       << numerator(row.max_coset_eps1) << ',' << denominator(row.max_coset_eps1) << '\n';
  return os.str();
}

std::string eval_json(std::string_view field_literal, std::string_view formula, const defform::Assignment& params,
                      std::string_view modulus_csv) {
  const auto field = ffield::Field::create(field_literal, modulus_csv);
  defform::ParseOptions opts;
  for (const auto& [k, v] : params) opts.params.push_back(k);
  const auto f = defform::parse(formula, opts);
  const auto set = defform::evaluate(f, field, params);
  json j{{"schema", kSchema},
         {"field", field_json(field->spec())},
         {"formula", defform::serialize(f)},
         {"complexity", defform::complexity(f)},
         {"arity", f.arity()},
         {"free_vars", f.free_vars()},
         {"params", params},
         {"size", set.size()}};
  BigInt cells = 1;
  for (std::size_t i = 0; i < f.arity(); ++i) cells *= field->order();
  j["density"] = rational(Rational(BigInt(set.size()), cells));
  if (set.size() <= kMaxListedPoints) {
    json pts = json::array();
    set.membership().for_each([&](std::size_t c) {
      const auto p = set.point_of(c);
      pts.push_back(f.arity() == 1 ? json(p[0]) : json(p));
    });
    j["members"] = pts;
  }
  j["rle"] = defform::serialize_set(set);
  return dump(j);
}

GroupReport group_report(const grp::GroupPtr& g, const Bitset& d, const GroupReportOptions& options) {
  if (d.size() != g->order()) throw Error(ErrorCode::InvalidArgument, "subset size does not match the group");
  const std::size_t n = g->order();
  GroupReport out;
  json j{{"schema", kSchema}, {"seed", options.seed}, {"group", group_json(*g)}};
  json subset{{"size", d.count()}};
  if (options.set_formula) {
    defform::ParseOptions po;
    po.free_vars = reglab::carrier_variables(g->carrier() ? g->carrier()->arity : 1);
    subset["formula"] = *options.set_formula;
    subset["complexity"] = defform::complexity(defform::parse(*options.set_formula, po));
  }
  std::vector<std::size_t> ids;
  d.for_each([&](std::size_t x) { ids.push_back(x); });
  subset["ids"] = ids;
  j["subset"] = subset;

  const auto graph = quasi::cayley_bipartite(g, d, Bitset::full(n), Bitset::full(n));
  const auto rep = quasi::analyze(graph);
  j["graph"] = quasi_json(rep);
  out.violation = !rep.relations_hold();

  json fe = subset_json(fourier::subset_qr_spectral(*g, d));
  if (g->is_abelian()) fe["characters"] = subset_json(fourier::subset_qr_characters(*g, d));
  j["fourier_eps"] = fe;
  if (n <= 1024) {
    const auto cor = fourier::verify_cor25(g, d);
    j["subset_graph_relations"] = relations_json(cor.relations);
    out.violation = out.violation || !cor.holds();
  }

  auto found = reglab::subgroup_search(g, d, options.max_index);
  json h{{"index", found.index},
         {"order", found.subgroup.order()},
         {"candidates", found.candidates},
         {"max_coset_eps1", rational(found.max_coset_eps1)},
         {"pairs", pairs_json(found.pairs)},
         {"members", found.subgroup.serialize()}};
  if (found.subgroup.formula())
    h["formula"] = *found.subgroup.formula();
  else if (found.subgroup.members() == d && options.set_formula)
    h["formula"] = *options.set_formula;
  h["translate_eps"] = translate_json(
      reglab::translate_subset_eps(found.subgroup, d, options.translate_samples, options.seed));
  j["subgroup"] = h;
  j["violation"] = out.violation;
  out.json = dump(j);
  return out;
}

}  // namespace qr::report

#include "qr/qr.h"

#include "qr/error.hpp"
#include "qr/fourier.hpp"
#include "qr/grp.hpp"
#include "qr/reglab.hpp"
#include "qr/report.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

struct qr_group {
  qr::grp::GroupPtr group;
};

struct qr_subset {
  qr::Bitset members;
  std::optional<std::string> formula;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string_view opt(const char* s) { return s ? std::string_view(s) : std::string_view(); }

qr::defform::Assignment params_of(const char* s) {
  if (!s || !*s) return {};
  return qr::defform::parse_assignment(s);
}

template <class Fn>
qr_status guard(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return QR_OK;
  } catch (const qr::Error& e) {
    last_error = e.what();
    return static_cast<qr_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw qr::Error(qr::ErrorCode::InvalidArgument, what);
}

}  // namespace

extern "C" {

const char* qr_version(void) { return "0.1.0"; }

const char* qr_status_name(qr_status status) { return qr::to_string(static_cast<qr::ErrorCode>(status)); }

const char* qr_last_error(void) { return last_error.c_str(); }

void qr_string_free(char* s) { std::free(s); }

qr_status qr_eval_json(const char* field, const char* modulus_csv, const char* formula, const char* params,
                       char** out_json) {
  return guard([&] {
    require(field && formula && out_json, "null argument");
    *out_json = dup(qr::report::eval_json(field, formula, params_of(params), opt(modulus_csv)));
  });
}

qr_status qr_group_create(const char* literal, const char* modulus_csv, qr_group** out) {
  return guard([&] {
    require(literal && out, "null argument");
    *out = new qr_group{qr::grp::parse_group_literal(literal, opt(modulus_csv))};
  });
}

void qr_group_free(qr_group* g) { delete g; }

size_t qr_group_order(const qr_group* g) { return g ? g->group->order() : 0; }

int qr_group_is_abelian(const qr_group* g) { return g && g->group->is_abelian() ? 1 : 0; }

qr_status qr_subset_from_formula(const qr_group* g, const char* formula, const char* params, qr_subset** out) {
  return guard([&] {
    require(g && formula && out, "null argument");
    auto members = qr::reglab::definable_subset(*g->group, formula, params_of(params));
    *out = new qr_subset{std::move(members), std::string(formula)};
  });
}

qr_status qr_subset_from_ids(const qr_group* g, const uint32_t* ids, size_t count, qr_subset** out) {
  return guard([&] {
    require(g && out && (ids || count == 0), "null argument");
    const std::size_t n = g->group->order();
    qr::Bitset members(n);
    for (size_t i = 0; i < count; ++i) {
      if (ids[i] >= n)
        throw qr::Error(qr::ErrorCode::InvalidArgument,
                        "id " + std::to_string(ids[i]) + " outside a group of order " + std::to_string(n));
      members.set(ids[i]);
    }
    *out = new qr_subset{std::move(members), std::nullopt};
  });
}

void qr_subset_free(qr_subset* s) { delete s; }

size_t qr_subset_size(const qr_subset* s) { return s ? s->members.count() : 0; }

qr_status qr_subset_eps(const qr_group* g, const qr_subset* s, int method, double* eps, double* error) {
  return guard([&] {
    require(g && s && eps, "null argument");
    const auto r = method == 0 ? qr::fourier::subset_qr_spectral(*g->group, s->members)
                               : qr::fourier::subset_qr_characters(*g->group, s->members);
    *eps = r.eps;
    if (error) *error = r.error;
  });
}

qr_status qr_irrep_dimensions(const qr_group* g, uint64_t seed, unsigned* out, size_t capacity, size_t* count) {
  return guard([&] {
    require(g && count, "null argument");
    const auto d = qr::fourier::irrep_dimensions(*g->group, seed);
    *count = d.size();
    require(out && capacity >= d.size(), "output buffer too small");
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i];
  });
}

qr_status qr_report_json(const qr_group* g, const qr_subset* s, size_t max_index, uint64_t seed, char** out_json,
                         int* violation) {
  return guard([&] {
    require(g && s && out_json, "null argument");
    qr::report::GroupReportOptions opts;
    opts.max_index = max_index;
    opts.seed = seed;
    opts.set_formula = s->formula;
    const auto rep = qr::report::group_report(g->group, s->members, opts);
    *out_json = dup(rep.json);
    if (violation) *violation = rep.violation ? 1 : 0;
  });
}

qr_status qr_sweep(const char* family, const uint64_t* qs, size_t count, size_t max_index, uint64_t seed,
                   char** out_json, char** out_csv) {
  return guard([&] {
    require(family && (qs || count == 0), "null argument");
    qr::reglab::SweepOptions opts;
    opts.max_index = max_index;
    opts.seed = seed;
    const auto res = qr::reglab::sweep(qr::reglab::find_family(family), std::vector<std::uint64_t>(qs, qs + count), opts);
    if (out_json) *out_json = dup(qr::report::to_json(res));
    if (out_csv) *out_csv = dup(qr::report::sweep_csv(res));
  });
}

qr_status qr_verify_json(const char* suite, uint64_t seed, char** out_json, int* passed) {
  return guard([&] {
    require(suite && out_json, "null argument");
    const auto res = qr::reglab::run_suite(suite, seed);
    *out_json = dup(qr::report::to_json(res));
    if (passed) *passed = res.passed() ? 1 : 0;
  });
}

qr_status qr_dim_measure_json(const char* formula, const char* params, const uint64_t* qs, size_t count,
                              char** out_json) {
  return guard([&] {
    require(formula && out_json && (qs || count == 0), "null argument");
    const auto res =
        qr::reglab::estimate_dim_measure(formula, params_of(params), std::vector<std::uint64_t>(qs, qs + count));
    *out_json = dup(qr::report::to_json(res));
  });
}

qr_status qr_ratio_stability_json(const char* a, const char* b, const char* params, const uint64_t* qs, size_t count,
                                  char** out_json) {
  return guard([&] {
    require(a && b && out_json && (qs || count == 0), "null argument");
    const auto res =
        qr::reglab::check_ratio_stability(a, b, params_of(params), std::vector<std::uint64_t>(qs, qs + count));
    *out_json = dup(qr::report::to_json(res));
  });
}

qr_status qr_weak_regularity_json(const char* family, uint64_t q, size_t max_index, char** out_json) {
  return guard([&] {
    require(family && out_json, "null argument");
    const auto res = qr::reglab::weak_regularity_audit(qr::reglab::find_family(family), q, max_index);
    *out_json = dup(qr::report::to_json(res));
  });
}

}  // extern "C"

#pragma once

// JSON and CSV renderings of the analysis records. Every JSON document
// carries "schema": 1; exact rationals are {"num": "...", "den": "..."}
// with decimal strings, plus a "value" float for convenience.

#include "qr/defform.hpp"
#include "qr/fourier.hpp"
#include "qr/grp.hpp"
#include "qr/quasi.hpp"
#include "qr/reglab.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace qr::report {

inline constexpr int kSchema = 1;

std::string to_json(const quasi::QuasiReport& r);
std::string to_json(const reglab::SweepResult& r);
std::string to_json(const reglab::DimMeasure& r);
std::string to_json(const reglab::RatioStability& r);
std::string to_json(const reglab::WeakRegularityAudit& r);
std::string to_json(const reglab::SuiteResult& r);

/// Columns: q, delta_num, delta_den, eps1_num, eps1_den, eps3, fourier_eps,
/// h_index, max_coset_eps1_num, max_coset_eps1_den.
std::string sweep_csv(const reglab::SweepResult& r);

/// Solution set of a formula over GF(q), with its canonical form,
/// complexity and run-length encoding.
std::string eval_json(std::string_view field_literal, std::string_view formula, const defform::Assignment& params,
                      std::string_view modulus_csv = {});

struct GroupReportOptions {
  std::size_t max_index = 1;
  std::uint64_t seed = 0;
  std::size_t translate_samples = 3;
  /// Source formula of the subset, echoed with its complexity.
  std::optional<std::string> set_formula;
};

struct GroupReport {
  std::string json;
  /// Some checked relation failed.
  bool violation = false;
};

/// Full analysis of D ⊆ G: graph metrics and relations for (G, G, xy⁻¹ ∈ D),
/// subset eps, the subgroup search with its per-pair table, and the
/// translate eps inside the chosen subgroup.
GroupReport group_report(const grp::GroupPtr& g, const Bitset& d, const GroupReportOptions& options = {});

}  // namespace qr::report

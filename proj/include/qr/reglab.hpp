#pragma once

#include "qr/bitset.hpp"
#include "qr/defform.hpp"
#include "qr/fourier.hpp"
#include "qr/grp.hpp"
#include "qr/quasi.hpp"
#include "qr/rational.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qr::reglab {

/// GF(q) with the default modulus. Throws NotPrime for non prime powers.
std::shared_ptr<const ffield::Field> field_for(std::uint64_t q);

/// Names of the carrier coordinates: "x" for arity 1, "a".."d" for SL2.
std::vector<std::string> carrier_variables(unsigned arity);

/// The subset of g cut out by a formula over its carrier coordinates.
/// Identifiers that are keys of `params` are parameters.
Bitset definable_subset(const grp::Group& g, std::string_view formula, const defform::Assignment& params = {});

struct FamilyInstance {
  std::uint64_t q = 0;
  grp::GroupPtr group;
  Bitset subset;
  std::string set_formula;
};

/// A connection set D ⊆ G(F_q) given uniformly in q by one formula.
struct Family {
  std::string name;
  std::string description;
  std::function<bool(std::uint64_t)> admissible;
  std::function<grp::GroupPtr(const std::shared_ptr<const ffield::Field>&)> group_builder;
  /// The defining formula at a given field (it may depend on the characteristic).
  std::function<std::string(const ffield::Field&)> set_formula;

  /// Throws InadmissibleQ, NotPrime.
  FamilyInstance instantiate(std::uint64_t q) const;
};

/// paley, artin_schreier, sl2_trace_square, mult_cubes, complete.
const std::vector<Family>& builtin_families();
/// Throws InvalidArgument for an unknown name.
const Family& find_family(std::string_view name);

struct CosetPairEps1 {
  std::size_t v = 0, w = 0;
  Rational eps1;
};

struct SubgroupSearchOutcome {
  grp::Subgroup subgroup;
  Rational max_coset_eps1;
  std::size_t index = 1;
  /// ε₁ of every coset pair (V, W) of the returned subgroup.
  std::vector<CosetPairEps1> pairs;
  std::size_t candidates = 0;
};

/// Among the normal subgroups of index ≤ max_index, one minimizing the
/// largest ε₁ over coset pairs; ties go to smaller index, then to the
/// lexicographically smaller member set. Throws OrderCap above 4096.
SubgroupSearchOutcome subgroup_search(const grp::GroupPtr& g, const Bitset& d, std::size_t max_index);

/// max over g of the subset eps of Dg ∩ H inside H: one g per left coset
/// of H plus `samples` random ones per coset.
struct TranslateEps {
  double eps = 0;
  double error = 0;
  /// Largest spread seen among the translates of a single coset.
  double spread = 0;
  std::size_t evaluated = 0;
};
TranslateEps translate_subset_eps(const grp::Subgroup& h, const Bitset& d, std::size_t samples, std::uint64_t seed);

struct SweepRow {
  std::uint64_t q = 0;
  std::size_t group_order = 0;
  Rational delta;
  /// ε₁ and ε₃ of the whole graph (G, G, xy⁻¹ ∈ D).
  Rational eps1;
  quasi::SpectralValue eps3;
  TranslateEps fourier;
  std::size_t h_index = 1;
  std::string h_descriptor;
  Rational max_coset_eps1;
  std::vector<CosetPairEps1> pairs;
};

struct Fit {
  double slope = 0;
  /// exp(intercept), so ε ≈ constant · q^slope.
  double constant = 0;
  std::size_t points = 0;
};

struct SweepResult {
  std::string family;
  std::uint64_t seed = 0;
  std::vector<SweepRow> rows;
  /// Fit of log max_coset_eps1 against log q.
  std::optional<Fit> eps1_fit;
  /// Fit of log fourier eps against log q.
  std::optional<Fit> fourier_fit;
  /// q values left out of the eps1 fit because the value was exactly 0.
  std::vector<std::uint64_t> zero_rows;
};

struct SweepOptions {
  std::size_t max_index = 1;
  std::uint64_t seed = 0;
  std::size_t translate_samples = 3;
};

/// Throws InadmissibleQ (before any work), OrderCap.
SweepResult sweep(const Family& family, std::vector<std::uint64_t> qs, const SweepOptions& options = {});

/// Least-squares line through (log x, log y); nullopt with fewer than 4 points.
std::optional<Fit> fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Smallest-denominator fraction (denominator ≤ max_den) lying in every
/// interval [c − h, c + h]; the intervals are widened by doubling until one
/// exists. Ties go to the fraction nearest `center`.
Rational snap_rational(const std::vector<std::pair<double, double>>& intervals, double center,
                       std::int64_t max_den = 64, bool positive = false);

struct CountPoint {
  std::uint64_t q = 0;
  std::uint64_t count = 0;
};

struct DimMeasure {
  unsigned d = 0;
  Rational r;
  /// Mean of count / q^d, before snapping.
  double r_mean = 0;
  /// max over q of |count − r q^d| / q^{d − 1/2}
  double residual = 0;
  std::vector<CountPoint> counts;
};

/// Throws EmptyAcrossSweep, InvalidArgument (fewer than 3 q values).
DimMeasure estimate_dim_measure(std::string_view formula, const defform::Assignment& params,
                                const std::vector<std::uint64_t>& qs);

struct RatioStability {
  Rational q_star;
  /// max over q of ||A| − q*|B|| / (q^{-1/2} |B|)
  double c = 0;
  std::vector<std::pair<CountPoint, std::uint64_t>> counts;  // (q, |A|), |B|
};

/// Throws NotSubset, InvalidArgument (arity mismatch).
RatioStability check_ratio_stability(std::string_view a, std::string_view b, const defform::Assignment& params,
                                     const std::vector<std::uint64_t>& qs);

struct PairDefect {
  std::size_t v = 0, w = 0;
  Rational eps1;
  /// Weak-regularity defect ε₂: exact, or an upper bound when a side is
  /// too large to enumerate.
  double defect = 0;
  bool exact = false;
  /// ε₂ ≤ ε₁^{1/4}: decided exactly when `exact`, through the spectral
  /// bound otherwise, and empty when that bound is too weak to decide.
  std::optional<bool> within_fourth_root;
};

struct WeakRegularityAudit {
  std::string family;
  std::uint64_t q = 0;
  std::size_t h_index = 1;
  std::vector<PairDefect> pairs;
  double max_defect = 0;
  double ref_quarter = 0;  // q^{-1/4}
  double ref_half = 0;     // q^{-1/2}
};

WeakRegularityAudit weak_regularity_audit(const Family& family, std::uint64_t q, std::size_t max_index);

struct Check {
  std::string label;
  bool passed = true;
  /// Recorded but not a failure.
  bool finding = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  bool passed() const;
  std::size_t failures() const;
};

/// "gowers", "cor25", "lemma24", "sl2". Throws InvalidArgument otherwise.
SuiteResult run_suite(std::string_view suite, std::uint64_t seed = 0);
const std::vector<std::string>& suite_names();

}  // namespace qr::reglab

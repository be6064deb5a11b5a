#pragma once

#include "qr/bitset.hpp"
#include "qr/grp.hpp"
#include "qr/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qr::quasi {

/// Where a Cayley-type graph came from: adj(w, v) ⇔ v·w⁻¹ ∈ D, with V and
/// W cosets of one subgroup of `group`.
struct Provenance {
  grp::GroupPtr group;
  Bitset connection;
  std::vector<grp::Id> v_ids;
  std::vector<grp::Id> w_ids;
};

/// Bipartite graph stored as its |W|×|V| adjacency matrix: one bitset over
/// V per vertex of W.
class BipartiteGraph {
 public:
  BipartiteGraph(std::size_t v_size, std::size_t w_size);
  BipartiteGraph(std::size_t v_size, std::vector<Bitset> rows, std::optional<Provenance> provenance = std::nullopt);

  std::size_t v_size() const noexcept { return v_size_; }
  std::size_t w_size() const noexcept { return rows_.size(); }
  const std::vector<Bitset>& rows() const noexcept { return rows_; }
  bool edge(std::size_t v, std::size_t w) const noexcept { return rows_[w].test(v); }
  void set_edge(std::size_t v, std::size_t w, bool on = true) { rows_[w].assign(v, on); }
  std::size_t edge_count() const noexcept;
  /// Neighbourhoods of the V side: one bitset over W per vertex of V.
  std::vector<Bitset> columns() const;
  BipartiteGraph transposed() const;
  /// Relabels V by v ↦ v_perm[v] and W by w ↦ w_perm[w].
  BipartiteGraph permuted(const std::vector<std::size_t>& v_perm, const std::vector<std::size_t>& w_perm) const;
  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }

 private:
  std::size_t v_size_;
  std::vector<Bitset> rows_;
  std::optional<Provenance> provenance_;
};

/// Graph (V, W, xy⁻¹ ∈ D) for V, W cosets of a common subgroup (or all of
/// G). Vertices are ordered by increasing group id. Throws CosetMismatch.
BipartiteGraph cayley_bipartite(const grp::GroupPtr& g, const Bitset& connection, const Bitset& v, const Bitset& w);
BipartiteGraph cayley_bipartite(const grp::CosetDecomposition& cosets, const Bitset& connection, std::size_t v_coset,
                                std::size_t w_coset);

/// Spot-checks the provenance rule on `samples` random entries.
bool check_provenance(const BipartiteGraph& graph, std::size_t samples = 100, std::uint64_t seed = 0);

Rational density(const BipartiteGraph& g);

/// Σ_{v,v'} |N(v) ∩ N(v')|², the number of labelled 4-cycles (with
/// degenerate ones), from the Gram matrix of the smaller side.
BigInt four_cycle_count(const BipartiteGraph& g);

struct Eps1 {
  /// C₄/(|V|²|W|²) − δ⁴, exactly.
  Rational raw;
  /// max(0, raw)
  Rational value;
};
Eps1 eps1_quasirandomness(const BipartiteGraph& g);

struct Rectangle {
  std::vector<std::size_t> a;  // subset of V
  std::vector<std::size_t> b;  // subset of W
};

struct Eps2 {
  Rational value;
  Rectangle witness;
};

/// Largest side that eps2_exact and exact is_eps_regular will enumerate.
inline constexpr std::size_t kMaxEnumeratedSide = 22;

/// max over A ⊆ V, B ⊆ W of | |E ∩ A×B| − δ|A||B| | / (|V||W|). Subsets of
/// the smaller side are enumerated; for each, the best other side is all
/// vertices of positive (or all of negative) discrepancy.
/// Throws SideTooLarge.
Eps2 eps2_exact(const BipartiteGraph& g);

struct SpectralValue {
  double value = 0;
  double error = 0;
};

/// σ_max(M·P)/√(|V||W|), P the projection onto mean-zero vectors on V.
SpectralValue eps3_spectral(const BipartiteGraph& g, double tolerance = 1e-10);

/// Upper bound on eps2 from the spectral value and the W-degree spread:
/// ε₃/2 + Σ_w |deg w − δ|V|| / (2|V||W|).
double eps2_spectral_bound(const BipartiteGraph& g, const SpectralValue& eps3);

struct RegularityOptions {
  /// Number of random A tried when the smaller side is too large to enumerate.
  std::size_t samples = 20'000;
  std::uint64_t seed = 0;
};

struct RegularityResult {
  bool regular = true;
  /// False when A was sampled rather than enumerated (then `regular` means
  /// no violation was found among `checked` subsets).
  bool exhaustive = true;
  std::size_t checked = 0;
  std::optional<Rectangle> witness;
};

/// ε-regularity: no A, B with |A| ≥ ε|V|, |B| ≥ ε|W| and
/// | |E ∩ A×B| − δ|A||B| | > ε|A||B|. For each A the extreme B of every
/// size comes from sorting the per-vertex discrepancies.
RegularityResult is_eps_regular(const BipartiteGraph& g, const Rational& eps, const RegularityOptions& options = {});

enum class RelationStatus { pass, fail, inconclusive, finding };
const char* to_string(RelationStatus s) noexcept;

struct Relation {
  std::string name;  // e.g. "eps2 <= eps1^(1/4)"
  double lhs = 0;
  double rhs = 0;
  RelationStatus status = RelationStatus::pass;
  bool exact = false;
};

struct QuasiReport {
  std::size_t v_size = 0, w_size = 0;
  std::size_t edges = 0;
  Rational delta;
  Eps1 eps1;
  std::optional<Eps2> eps2;
  double eps2_bound = 0;
  SpectralValue eps3;
  std::vector<Relation> relations;

  /// No relation failed (findings and inconclusive ones do not count).
  bool relations_hold() const;
};

/// Slack added to the right-hand side of every float comparison, after the
/// left-hand side has been lowered by its certified error.
inline constexpr double kFloatSlack = 1e-8;

/// Computes the metrics and checks
///   ε₂ ≤ ε₁^{1/4}, ε₃ ≤ ε₁^{1/4}, ε₁ ≤ 12ε₂ (finding), ε₁ ≤ δε₃².
/// eps2 is exact when the smaller side allows it; otherwise the first
/// relation uses the spectral bound and is inconclusive when that bound
/// exceeds the right-hand side.
QuasiReport analyze(const BipartiteGraph& g);
inline QuasiReport verify_gowers_relations(const BipartiteGraph& g) { return analyze(g); }

}  // namespace qr::quasi

#pragma once

#include "qr/bitset.hpp"
#include "qr/grp.hpp"
#include "qr/quasi.hpp"
#include "qr/rational.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace qr::fourier {

enum class Method { spectral, abelian_characters };
const char* to_string(Method m) noexcept;

/// Largest operator norm of a nontrivial Fourier coefficient of 1_D,
/// normalized by 1/|H|.
struct SubsetQR {
  double eps = 0;
  double error = 0;
  Method method = Method::spectral;
};

/// σ_max(M·P)/|H| for M the adjacency matrix of (H, H, xy⁻¹ ∈ D).
/// Throws OrderCap above 4096 elements, NoConvergence.
SubsetQR subset_qr_spectral(const grp::Group& g, const Bitset& d);

/// Characters of an abelian group, indexed by group element: with
/// x = Π g_i^{x_i}, χ_a(x) = exp(2πi Σ_i a_i x_i / n_i). Values are
/// stored as phases k with χ = exp(2πi k / exponent).
class CharacterData {
 public:
  explicit CharacterData(const grp::Group& g);

  std::size_t size() const noexcept { return n_; }
  const grp::AbelianBasis& basis() const noexcept { return basis_; }
  std::uint64_t exponent() const noexcept { return basis_.exponent; }
  /// The dual label of character a: its coordinates (a_1, ..., a_r).
  std::vector<std::uint32_t> dual_label(grp::Id a) const;
  std::uint64_t phase(grp::Id a, grp::Id x) const noexcept;
  std::complex<double> value(grp::Id a, grp::Id x) const noexcept { return roots_[phase(a, x)]; }
  /// Id of the trivial character.
  grp::Id trivial() const noexcept { return trivial_; }

 private:
  std::size_t n_;
  grp::AbelianBasis basis_;
  std::vector<std::uint64_t> weight_;  // exponent / n_i
  std::vector<std::complex<double>> roots_;
  grp::Id trivial_;
};

/// Throws NotAbelian, OrderCap.
CharacterData abelian_characters(const grp::Group& g);

/// max over nontrivial χ of |Σ_{x∈D} χ(x)| / |H|. Throws NotAbelian.
SubsetQR subset_qr_characters(const grp::Group& g, const Bitset& d);

/// Degrees of the irreducible complex characters, sorted ascending, from
/// the eigenvectors of a random combination of class-sum matrices.
/// Throws OrderCap above 512 elements, DegeneracyNotResolved.
std::vector<unsigned> irrep_dimensions(const grp::Group& g, std::uint64_t seed = 0);

struct Cor25Record {
  SubsetQR subset;
  Rational eps1;
  /// "eps <= eps1^(1/4)" and "eps1 <= eps^2".
  std::vector<quasi::Relation> relations;

  bool holds() const;
};

/// Both directions between subset quasirandomness of D and the
/// quasirandomness of its graph (H, H, xy⁻¹ ∈ D). Throws OrderCap above
/// 1024 elements.
Cor25Record verify_cor25(const grp::GroupPtr& g, const Bitset& d);

}  // namespace qr::fourier

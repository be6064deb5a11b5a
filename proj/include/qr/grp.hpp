#pragma once

#include "qr/bitset.hpp"
#include "qr/ffield.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qr::grp {

using Id = std::uint32_t;

enum class Label { additive, multiplicative, sl2, product, quotient, subgroup, cyclic, permutation };

const char* to_string(Label label) noexcept;

/// Where a group's elements live as a definable set: element id ↦ cell of
/// F^arity, plus the formulas defining the carrier and the multiplication.
struct Carrier {
  std::shared_ptr<const ffield::Field> field;
  unsigned arity = 1;
  std::vector<std::uint64_t> cells;
  std::string set_formula;
  std::string mul_formula;
};

/// A finite group on ids 0..order-1. Multiplication is a dense table when
/// order ≤ kTableCap and the builder's closure otherwise.
class Group {
 public:
  using MulFn = std::function<Id(Id, Id)>;
  using InvFn = std::function<Id(Id)>;
  static constexpr std::size_t kTableCap = 4096;

  Group(std::string name, Label label, std::size_t order, Id identity, MulFn mul, InvFn inv = nullptr,
        std::optional<bool> abelian = std::nullopt, std::optional<Carrier> carrier = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  Label label() const noexcept { return label_; }
  std::size_t order() const noexcept { return order_; }
  Id identity() const noexcept { return identity_; }
  bool has_table() const noexcept { return !table_.empty(); }
  bool is_abelian() const noexcept { return abelian_; }
  const std::optional<Carrier>& carrier() const noexcept { return carrier_; }
  std::uint64_t hash() const noexcept { return hash_; }

  Id mul(Id a, Id b) const { return table_.empty() ? mul_(a, b) : table_[static_cast<std::size_t>(a) * order_ + b]; }
  Id inv(Id a) const { return inv_table_[a]; }
  /// g x g^{-1}
  Id conj(Id g, Id x) const { return mul(mul(g, x), inv(g)); }

 private:
  std::string name_;
  Label label_;
  std::size_t order_;
  Id identity_;
  MulFn mul_;
  std::vector<Id> table_;
  std::vector<Id> inv_table_;
  bool abelian_ = false;
  std::optional<Carrier> carrier_;
  std::uint64_t hash_ = 0;
};

using GroupPtr = std::shared_ptr<const Group>;

/// Group axioms: exhaustive when order ≤ 512, otherwise 10^5 random
/// triples; table-backed groups are also checked to be Latin squares.
/// Throws Error(Internal) naming the failed law.
void verify_axioms(const Group& g, std::uint64_t seed = 0);

std::uint64_t element_order(const Group& g, Id x);

GroupPtr additive_group(const std::shared_ptr<const ffield::Field>& field);
GroupPtr multiplicative_group(const std::shared_ptr<const ffield::Field>& field);
/// 2×2 determinant-one matrices ordered by (a,b,c,d) cell index.
GroupPtr sl2(const std::shared_ptr<const ffield::Field>& field, std::uint64_t order_cap = 1'000'000);
GroupPtr cyclic_group(std::size_t n);
GroupPtr symmetric_group(unsigned n);
GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);

/// "add:3^2", "mul:13", "sl2:5", "cyclic:16", "sym:3".
GroupPtr parse_group_literal(std::string_view literal, std::string_view modulus_csv = {});

class Subgroup {
 public:
  /// Verifies identity, closure under mul and inverses; decides normality.
  Subgroup(GroupPtr parent, Bitset members, std::optional<std::string> formula = std::nullopt);

  const Group& parent() const noexcept { return *parent_; }
  const GroupPtr& parent_ptr() const noexcept { return parent_; }
  const Bitset& members() const noexcept { return members_; }
  bool contains(Id x) const noexcept { return members_.test(x); }
  std::size_t order() const noexcept { return order_; }
  std::size_t index() const noexcept { return parent_->order() / order_; }
  bool normal() const noexcept { return normal_; }
  /// Defining formula, when the construction supplied one.
  const std::optional<std::string>& formula() const noexcept { return formula_; }
  std::vector<Id> ids() const;
  /// "subgroup <parent hash hex> <id>,<id>,..."
  std::string serialize() const;

 private:
  GroupPtr parent_;
  Bitset members_;
  std::size_t order_ = 0;
  bool normal_ = false;
  std::optional<std::string> formula_;
};

Subgroup whole_group(const GroupPtr& g);
Subgroup generated_subgroup(const GroupPtr& g, const std::vector<Id>& generators);

std::vector<std::vector<Id>> conjugacy_classes(const Group& g);

struct NormalSearchOptions {
  /// Bound on the number of subgroups visited while enumerating.
  std::size_t lattice_cap = 200'000;
};

/// Every normal subgroup of index ≤ max_index, sorted by (index, member
/// bitset). Abelian groups go through the character pairing (subgroups
/// of index m are annihilators of order-m subgroups of the dual); others
/// through joins of the normal closures of conjugacy classes.
std::vector<Subgroup> normal_subgroups_up_to_index(const GroupPtr& g, std::size_t max_index,
                                                   const NormalSearchOptions& options = {});

/// Left cosets gH with the smallest id of each coset as representative;
/// cosets are numbered in increasing order of representative.
class CosetDecomposition {
 public:
  explicit CosetDecomposition(const Subgroup& h, bool require_normal = false);

  const Subgroup& subgroup() const noexcept { return subgroup_; }
  std::size_t count() const noexcept { return reps_.size(); }
  const std::vector<Id>& reps() const noexcept { return reps_; }
  std::size_t coset_of(Id x) const noexcept { return coset_of_[x]; }
  Bitset members(std::size_t coset) const;
  std::vector<Id> member_ids(std::size_t coset) const;

 private:
  Subgroup subgroup_;
  std::vector<Id> reps_;
  std::vector<std::uint32_t> coset_of_;
};

inline CosetDecomposition cosets(const Subgroup& h, bool require_normal = false) {
  return CosetDecomposition(h, require_normal);
}

GroupPtr quotient(const CosetDecomposition& cosets);

/// The subgroup as a group in its own right, ids renumbered in increasing
/// parent-id order; `to_parent[i]` is the parent id of new id i.
struct Restriction {
  GroupPtr group;
  std::vector<Id> to_parent;
};
Restriction as_group(const Subgroup& h);

/// Decomposition of an abelian group into cyclic factors of prime-power
/// order: every element is Π g_i^{c_i} with 0 ≤ c_i < orders[i].
struct AbelianBasis {
  std::vector<Id> generators;
  std::vector<std::uint64_t> orders;
  /// coords[x * rank + i] = c_i of element x.
  std::vector<std::uint32_t> coords;
  std::uint64_t exponent = 1;

  std::size_t rank() const noexcept { return orders.size(); }
  std::uint32_t coord(Id x, std::size_t i) const noexcept { return coords[x * rank() + i]; }
};

/// Elementary divisors from element orders; throws NotAbelian / OrderCap.
AbelianBasis abelian_basis(const Group& g);

}  // namespace qr::grp

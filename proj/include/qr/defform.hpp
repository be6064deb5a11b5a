#pragma once

#include "qr/bitset.hpp"
#include "qr/error.hpp"
#include "qr/ffield.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qr::defform {

struct TermNode {
  enum class Kind { zero, one, var, add, sub, mul };
  Kind kind = Kind::zero;
  std::string name;
  std::shared_ptr<const TermNode> lhs, rhs;
};

/// Implication is desugared at parse time, so only these connectives occur.
struct FormulaNode {
  enum class Kind { eq, neg, conj, disj, exists, forall };
  Kind kind = Kind::eq;
  std::shared_ptr<const TermNode> left_term, right_term;  // eq
  std::shared_ptr<const FormulaNode> left, right;         // right unused for neg and quantifiers
  std::string bound;                                      // quantifiers
};

/// A first-order formula in the language of rings, with its object
/// variables (free, in order) and parameter variables split out.
class Formula {
 public:
  Formula(std::shared_ptr<const FormulaNode> root, std::vector<std::string> free_vars,
          std::vector<std::string> param_vars);

  const FormulaNode& root() const noexcept { return *root_; }
  const std::shared_ptr<const FormulaNode>& root_ptr() const noexcept { return root_; }
  const std::vector<std::string>& free_vars() const noexcept { return free_vars_; }
  const std::vector<std::string>& param_vars() const noexcept { return param_vars_; }
  std::size_t arity() const noexcept { return free_vars_.size(); }

 private:
  std::shared_ptr<const FormulaNode> root_;
  std::vector<std::string> free_vars_;
  std::vector<std::string> param_vars_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::vector<std::string> expected, const std::string& found);
  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

struct ParseOptions {
  /// Identifiers treated as parameters when they occur unbound.
  std::vector<std::string> params;
  /// When set, the exact object variables; any other unbound identifier is
  /// an UnboundVariable error. Otherwise free variables are collected in
  /// order of first occurrence.
  std::optional<std::vector<std::string>> free_vars;
};

Formula parse(std::string_view text, const ParseOptions& options = {});

/// Canonical text: binary connectives fully parenthesized, terms with the
/// minimal parentheses their precedence needs, quantifiers as "exists x. φ".
std::string serialize(const Formula& f);

/// Token count of the canonical serialization. The '.' after a quantified
/// variable is punctuation and not counted.
std::size_t complexity(const Formula& f);

/// Parameter name → field element index.
using Assignment = std::map<std::string, std::uint64_t>;

/// Parses "a=5,b=2" (also accepts a single "a=5").
Assignment parse_assignment(std::string_view text);

struct EvalOptions {
  /// Maximum number of cells q^arity.
  std::uint64_t cell_cap = std::uint64_t{1} << 26;
};

/// Solution set of a formula over F^arity. Cell index of a point
/// (x_0, ..., x_{k-1}) is Σ x_i q^{k-1-i} over element indices.
class DefinableSet {
 public:
  DefinableSet(std::shared_ptr<const ffield::Field> field, unsigned arity, Bitset membership,
               std::shared_ptr<const Formula> source = nullptr, Assignment params = {});

  const ffield::Field& field() const noexcept { return *field_; }
  const std::shared_ptr<const ffield::Field>& field_ptr() const noexcept { return field_; }
  unsigned arity() const noexcept { return arity_; }
  const Bitset& membership() const noexcept { return membership_; }
  std::size_t size() const noexcept { return membership_.count(); }
  bool contains(std::uint64_t cell) const noexcept { return membership_.test(cell); }
  bool contains(std::span<const std::uint64_t> point) const { return contains(cell_of(point)); }
  std::uint64_t cell_of(std::span<const std::uint64_t> point) const;
  std::vector<std::uint64_t> point_of(std::uint64_t cell) const;
  const std::shared_ptr<const Formula>& source() const noexcept { return source_; }
  const Assignment& params() const noexcept { return params_; }

 private:
  std::shared_ptr<const ffield::Field> field_;
  unsigned arity_;
  Bitset membership_;
  std::shared_ptr<const Formula> source_;
  Assignment params_;
};

/// Exhaustive evaluation; quantifier subformulas are memoized on the
/// values of their own free variables.
DefinableSet evaluate(const Formula& f, const std::shared_ptr<const ffield::Field>& field, const Assignment& params,
                      const EvalOptions& options = {});

/// Truth value at a single point (independent of the memo tables).
bool evaluate_point(const Formula& f, const ffield::Field& field, const Assignment& params,
                    std::span<const std::uint64_t> point);

/// Run-length encoding:
///   QRSET 1
///   q <q> arity <k> order <16 hex digits>
///   rle <first bit> <run> <run> ...
std::string serialize_set(const DefinableSet& set);

struct EncodedSet {
  std::uint64_t q = 0;
  unsigned arity = 0;
  std::uint64_t order_hash = 0;
  Bitset membership;
};

EncodedSet decode_set(std::string_view text);
/// Decodes and checks the header against `field`.
DefinableSet decode_set(std::string_view text, const std::shared_ptr<const ffield::Field>& field);

}  // namespace qr::defform

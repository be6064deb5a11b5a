#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qr::ffield {

/// GF(p^n) presented as GF(p)[t]/(modulus).
struct FieldSpec {
  std::uint64_t p = 2;
  unsigned n = 1;
  /// Coefficients c0..cn of the monic modulus, low degree first.
  std::vector<std::uint64_t> modulus;

  std::uint64_t order() const noexcept;
  /// Hash of (p, n, modulus); identifies the enumeration order of elements.
  std::uint64_t order_hash() const noexcept;
  std::string describe() const;
  std::string modulus_string() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

bool is_prime(std::uint64_t v) noexcept;

/// (p, n) with q = p^n, or nullopt when q is not a prime power.
std::optional<std::pair<std::uint64_t, unsigned>> prime_power(std::uint64_t q) noexcept;

/// Rabin's test; poly is monic of degree ≥ 1, coefficients low first.
bool is_irreducible_rabin(std::uint64_t p, std::span<const std::uint64_t> poly);
/// Root and quadratic-factor search; only valid for degree ≤ 4.
bool is_irreducible_trial(std::uint64_t p, std::span<const std::uint64_t> poly);

/// Validates (p, n, modulus). Without a modulus the lexicographically
/// smallest monic irreducible of degree n is chosen, comparing coefficient
/// vectors from the highest non-leading degree down.
FieldSpec make_field(std::uint64_t p, unsigned n,
                     std::optional<std::vector<std::uint64_t>> modulus = std::nullopt);

/// Parses "p^n" or "p" plus an optional "c0,c1,...,cn" modulus list.
FieldSpec parse_field_literal(std::string_view literal, std::string_view modulus_csv = {});

class FieldElem {
 public:
  FieldElem(std::shared_ptr<const FieldSpec> spec, std::vector<std::uint64_t> coeffs);

  const FieldSpec& spec() const noexcept { return *spec_; }
  const std::shared_ptr<const FieldSpec>& spec_ptr() const noexcept { return spec_; }
  std::span<const std::uint64_t> coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept;
  /// Position in enumeration order: Σ c_i p^i.
  std::uint64_t index() const noexcept;

  friend bool operator==(const FieldElem& a, const FieldElem& b) noexcept {
    return *a.spec_ == *b.spec_ && a.coeffs_ == b.coeffs_;
  }

 private:
  std::shared_ptr<const FieldSpec> spec_;
  std::vector<std::uint64_t> coeffs_;
};

enum class ArithOp { add, sub, mul, div, pow, neg, inv };

FieldElem add(const FieldElem& a, const FieldElem& b);
FieldElem sub(const FieldElem& a, const FieldElem& b);
FieldElem mul(const FieldElem& a, const FieldElem& b);
FieldElem div(const FieldElem& a, const FieldElem& b);
FieldElem neg(const FieldElem& a);
FieldElem inv(const FieldElem& a);
FieldElem pow(const FieldElem& a, std::uint64_t exponent);

/// Dispatcher over ArithOp. Unary ops act on a (b must still share the
/// field); pow uses b's enumeration index as the exponent.
FieldElem field_arith(const FieldElem& a, const FieldElem& b, ArithOp op);

inline FieldElem operator+(const FieldElem& a, const FieldElem& b) { return add(a, b); }
inline FieldElem operator-(const FieldElem& a, const FieldElem& b) { return sub(a, b); }
inline FieldElem operator*(const FieldElem& a, const FieldElem& b) { return mul(a, b); }
inline FieldElem operator/(const FieldElem& a, const FieldElem& b) { return div(a, b); }
inline FieldElem operator-(const FieldElem& a) { return neg(a); }

FieldElem element_at(const std::shared_ptr<const FieldSpec>& spec, std::uint64_t index);
/// All q elements in index order.
std::vector<FieldElem> enumerate(const std::shared_ptr<const FieldSpec>& spec);

/// Dense index arithmetic over a field; elements are their enumeration
/// indices. Log/exp tables back multiplication when q ≤ kTableCap.
class Field {
 public:
  static constexpr std::uint64_t kTableCap = std::uint64_t{1} << 22;

  static std::shared_ptr<const Field> create(FieldSpec spec);
  static std::shared_ptr<const Field> create(std::string_view literal, std::string_view modulus_csv = {});

  const FieldSpec& spec() const noexcept { return *spec_; }
  const std::shared_ptr<const FieldSpec>& spec_ptr() const noexcept { return spec_; }
  std::uint64_t order() const noexcept { return q_; }
  std::uint64_t characteristic() const noexcept { return spec_->p; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept;
  std::uint64_t neg(std::uint64_t a) const noexcept;
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t inv(std::uint64_t a) const;
  std::uint64_t div(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  /// x ↦ x^p.
  std::uint64_t frobenius(std::uint64_t a) const { return pow(a, spec_->p); }
  bool is_square(std::uint64_t a) const;

  FieldElem element(std::uint64_t index) const { return element_at(spec_, index); }

 private:
  explicit Field(FieldSpec spec);

  std::shared_ptr<const FieldSpec> spec_;
  std::uint64_t q_;
  std::vector<std::uint32_t> exp_;  // exp_[k] = g^k, k < q-1
  std::vector<std::uint32_t> log_;  // log_[x] for x ≠ 0
};

}  // namespace qr::ffield

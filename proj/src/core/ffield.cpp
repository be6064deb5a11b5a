#include "qr/ffield.hpp"

#include "qr/error.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>

namespace qr::ffield {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using Poly = std::vector<u64>;  // low degree first, no trailing zeros

u64 mulmod(u64 a, u64 b, u64 m) noexcept { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) noexcept {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

// a mod f, f with arbitrary nonzero leading coefficient.
Poly poly_mod(Poly a, const Poly& f, u64 p) {
  trim(a);
  const int df = degree(f);
  const u64 lead_inv = invmod(f.back(), p);
  while (degree(a) >= df) {
    const int shift = degree(a) - df;
    const u64 c = mulmod(a.back(), lead_inv, p);
    for (int i = 0; i <= df; ++i) {
      u64 t = mulmod(c, f[static_cast<std::size_t>(i)], p);
      u64& slot = a[static_cast<std::size_t>(i + shift)];
      slot = (slot + p - t) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  trim(r);
  return r;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, u64 p) { return poly_mod(poly_mul(a, b, p), f, p); }

Poly poly_powmod(Poly base, u64 e, const Poly& f, u64 p) {
  Poly r{1};
  base = poly_mod(std::move(base), f, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_sub(Poly a, const Poly& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

Poly poly_gcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<u64> prime_factors(u64 v) {
  std::vector<u64> out;
  for (u64 d = 2; d <= v / d; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

u64 eval_poly(std::span<const u64> f, u64 x, u64 p) {
  u64 acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = (mulmod(acc, x, p) + f[i]) % p;
  return acc;
}

// FNV-1a over 64-bit words.
u64 fnv1a(std::span<const u64> words) {
  u64 h = 1469598103934665603ull;
  for (u64 w : words)
    for (int k = 0; k < 8; ++k) {
      h ^= (w >> (8 * k)) & 0xffu;
      h *= 1099511628211ull;
    }
  return h;
}

}  // namespace

std::uint64_t FieldSpec::order() const noexcept {
  u64 q = 1;
  for (unsigned i = 0; i < n; ++i) q *= p;
  return q;
}

std::uint64_t FieldSpec::order_hash() const noexcept {
  std::vector<u64> words{p, n};
  words.insert(words.end(), modulus.begin(), modulus.end());
  return fnv1a(words);
}

std::string FieldSpec::modulus_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = modulus.size(); i-- > 0;) {
    const u64 c = modulus[i];
    if (c == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0) {
      os << c;
    } else {
      if (c != 1) os << c << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

std::string FieldSpec::describe() const {
  std::ostringstream os;
  os << "GF(" << p;
  if (n > 1) os << "^" << n;
  os << ") mod " << modulus_string();
  return os.str();
}

bool is_prime(std::uint64_t v) noexcept {
  if (v < 2) return false;
  for (u64 small : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (v % small == 0) return v == small;
  }
  u64 d = v - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for all 64-bit inputs.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, v);
    if (x == 1 || x == v - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, v);
      if (x == v - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::optional<std::pair<std::uint64_t, unsigned>> prime_power(std::uint64_t q) noexcept {
  if (q < 2) return std::nullopt;
  if (is_prime(q)) return std::pair{q, 1u};
  for (u64 d = 2; d <= q / d; ++d) {
    if (q % d) continue;
    if (!is_prime(d)) return std::nullopt;
    unsigned n = 0;
    u64 r = q;
    while (r % d == 0) {
      r /= d;
      ++n;
    }
    if (r != 1) return std::nullopt;
    return std::pair{d, n};
  }
  return std::nullopt;
}

bool is_irreducible_rabin(std::uint64_t p, std::span<const std::uint64_t> poly) {
  Poly f(poly.begin(), poly.end());
  trim(f);
  const int n = degree(f);
  if (n < 1) return false;
  if (n == 1) return true;
  const Poly x{0, 1};
  // frob[k] = x^{p^k} mod f
  std::vector<Poly> frob(static_cast<std::size_t>(n) + 1);
  frob[0] = poly_mod(x, f, p);
  for (int k = 1; k <= n; ++k) frob[static_cast<std::size_t>(k)] = poly_powmod(frob[static_cast<std::size_t>(k) - 1], p, f, p);
  if (poly_sub(frob[static_cast<std::size_t>(n)], poly_mod(x, f, p), p).size() != 0) return false;
  for (u64 r : prime_factors(static_cast<u64>(n))) {
    Poly h = poly_sub(frob[static_cast<std::size_t>(static_cast<u64>(n) / r)], poly_mod(x, f, p), p);
    Poly g = poly_gcd(f, h, p);
    if (degree(g) > 0) return false;
  }
  return true;
}

bool is_irreducible_trial(std::uint64_t p, std::span<const std::uint64_t> poly) {
  Poly f(poly.begin(), poly.end());
  trim(f);
  const int n = degree(f);
  if (n < 1 || n > 4) throw Error(ErrorCode::InvalidArgument, "trial irreducibility needs degree 1..4");
  if (n == 1) return true;
  for (u64 a = 0; a < p; ++a)
    if (eval_poly(f, a, p) == 0) return false;
  if (n == 4) {
    for (u64 b = 0; b < p; ++b)
      for (u64 c = 0; c < p; ++c)
        if (poly_mod(f, Poly{c, b, 1}, p).empty()) return false;
  }
  return true;
}

namespace {

bool irreducible(u64 p, const Poly& f) {
  const int n = degree(f);
  const bool trial_ok = (n <= 3 && p <= (u64{1} << 16)) || (n == 4 && p <= 256);
  return trial_ok ? is_irreducible_trial(p, f) : is_irreducible_rabin(p, f);
}

}  // namespace

FieldSpec make_field(std::uint64_t p, unsigned n, std::optional<std::vector<std::uint64_t>> modulus) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "extension degree must be >= 1");
  u128 q = 1;
  for (unsigned i = 0; i < n; ++i) {
    q *= p;
    if (q >= (u128{1} << 63)) throw Error(ErrorCode::OrderOverflow, "p^n must be below 2^63");
  }
  FieldSpec spec;
  spec.p = p;
  spec.n = n;
  if (modulus) {
    const auto& m = *modulus;
    if (m.size() != n + 1 || m.back() != 1)
      throw Error(ErrorCode::InvalidArgument, "modulus must be monic of degree " + std::to_string(n));
    for (u64 c : m)
      if (c >= p) throw Error(ErrorCode::InvalidArgument, "modulus coefficient out of range");
    if (!irreducible(p, m)) throw Error(ErrorCode::ReducibleModulus, "modulus is reducible over GF(" + std::to_string(p) + ")");
    spec.modulus = m;
    return spec;
  }
  // Enumerate lower coefficients as the integer Σ c_i p^i, so the highest
  // non-leading coefficient is the most significant digit.
  Poly f(n + 1, 0);
  f[n] = 1;
  for (u64 k = 0;; ++k) {
    u64 r = k;
    for (unsigned i = 0; i < n; ++i) {
      f[i] = r % p;
      r /= p;
    }
    if (r != 0) throw Error(ErrorCode::Internal, "no irreducible polynomial found");
    if (irreducible(p, f)) break;
  }
  spec.modulus = f;
  return spec;
}

namespace {

u64 parse_u64(std::string_view s, const char* what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  u64 v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

FieldSpec parse_field_literal(std::string_view literal, std::string_view modulus_csv) {
  u64 p = 0;
  unsigned n = 1;
  if (auto caret = literal.find('^'); caret != std::string_view::npos) {
    p = parse_u64(literal.substr(0, caret), "field characteristic");
    n = static_cast<unsigned>(parse_u64(literal.substr(caret + 1), "extension degree"));
  } else {
    p = parse_u64(literal, "field characteristic");
  }
  std::optional<std::vector<u64>> modulus;
  if (!modulus_csv.empty()) {
    std::vector<u64> coeffs;
    std::size_t start = 0;
    while (start <= modulus_csv.size()) {
      auto comma = modulus_csv.find(',', start);
      if (comma == std::string_view::npos) comma = modulus_csv.size();
      coeffs.push_back(parse_u64(modulus_csv.substr(start, comma - start), "modulus coefficient"));
      start = comma + 1;
    }
    modulus = std::move(coeffs);
  }
  return make_field(p, n, std::move(modulus));
}

// --- FieldElem --------------------------------------------------------------

FieldElem::FieldElem(std::shared_ptr<const FieldSpec> spec, std::vector<std::uint64_t> coeffs)
    : spec_(std::move(spec)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != spec_->n) throw Error(ErrorCode::InvalidArgument, "coordinate vector has wrong length");
  for (u64 c : coeffs_)
    if (c >= spec_->p) throw Error(ErrorCode::InvalidArgument, "coordinate out of range");
}

bool FieldElem::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](u64 c) { return c == 0; });
}

std::uint64_t FieldElem::index() const noexcept {
  u64 idx = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) idx = idx * spec_->p + coeffs_[i];
  return idx;
}

namespace {

void require_same(const FieldElem& a, const FieldElem& b) {
  if (a.spec_ptr() != b.spec_ptr() && !(a.spec() == b.spec()))
    throw Error(ErrorCode::FieldMismatch, a.spec().describe() + " vs " + b.spec().describe());
}

FieldElem from_poly(const FieldElem& like, Poly r) {
  r.resize(like.spec().n, 0);
  return FieldElem(like.spec_ptr(), std::move(r));
}

Poly as_poly(const FieldElem& a) {
  Poly r(a.coeffs().begin(), a.coeffs().end());
  trim(r);
  return r;
}

}  // namespace

FieldElem add(const FieldElem& a, const FieldElem& b) {
  require_same(a, b);
  const u64 p = a.spec().p;
  std::vector<u64> c(a.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (a.coeffs()[i] + b.coeffs()[i]) % p;
  return FieldElem(a.spec_ptr(), std::move(c));
}

FieldElem neg(const FieldElem& a) {
  const u64 p = a.spec().p;
  std::vector<u64> c(a.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (p - a.coeffs()[i]) % p;
  return FieldElem(a.spec_ptr(), std::move(c));
}

FieldElem sub(const FieldElem& a, const FieldElem& b) { return add(a, neg(b)); }

FieldElem mul(const FieldElem& a, const FieldElem& b) {
  require_same(a, b);
  const auto& s = a.spec();
  return from_poly(a, poly_mulmod(as_poly(a), as_poly(b), Poly(s.modulus.begin(), s.modulus.end()), s.p));
}

FieldElem pow(const FieldElem& a, std::uint64_t exponent) {
  const auto& s = a.spec();
  return from_poly(a, poly_powmod(as_poly(a), exponent, Poly(s.modulus.begin(), s.modulus.end()), s.p));
}

FieldElem inv(const FieldElem& a) {
  if (a.is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  return pow(a, a.spec().order() - 2);
}

FieldElem div(const FieldElem& a, const FieldElem& b) {
  require_same(a, b);
  return mul(a, inv(b));
}

FieldElem field_arith(const FieldElem& a, const FieldElem& b, ArithOp op) {
  require_same(a, b);
  switch (op) {
    case ArithOp::add: return add(a, b);
    case ArithOp::sub: return sub(a, b);
    case ArithOp::mul: return mul(a, b);
    case ArithOp::div: return div(a, b);
    case ArithOp::pow: return pow(a, b.index());
    case ArithOp::neg: return neg(a);
    case ArithOp::inv: return inv(a);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown op");
}

FieldElem element_at(const std::shared_ptr<const FieldSpec>& spec, std::uint64_t index) {
  if (index >= spec->order()) throw Error(ErrorCode::InvalidArgument, "element index out of range");
  std::vector<u64> c(spec->n);
  for (unsigned i = 0; i < spec->n; ++i) {
    c[i] = index % spec->p;
    index /= spec->p;
  }
  return FieldElem(spec, std::move(c));
}

std::vector<FieldElem> enumerate(const std::shared_ptr<const FieldSpec>& spec) {
  const u64 q = spec->order();
  if (q > (u64{1} << 26)) throw Error(ErrorCode::OrderCap, "field too large to enumerate");
  std::vector<FieldElem> out;
  out.reserve(q);
  for (u64 i = 0; i < q; ++i) out.push_back(element_at(spec, i));
  return out;
}

// --- Field (dense indices) --------------------------------------------------

std::shared_ptr<const Field> Field::create(FieldSpec spec) {
  return std::shared_ptr<const Field>(new Field(std::move(spec)));
}

std::shared_ptr<const Field> Field::create(std::string_view literal, std::string_view modulus_csv) {
  return create(parse_field_literal(literal, modulus_csv));
}

Field::Field(FieldSpec spec) : spec_(std::make_shared<const FieldSpec>(std::move(spec))), q_(spec_->order()) {
  if (spec_->n == 1 || q_ > kTableCap) return;
  // Primitive element search, then log/exp tables.
  const auto factors = prime_factors(q_ - 1);
  for (u64 cand = 2; cand < q_; ++cand) {
    FieldElem g = element_at(spec_, cand);
    bool primitive = true;
    for (u64 r : factors) {
      if (ffield::pow(g, (q_ - 1) / r).index() == 1) {
        primitive = false;
        break;
      }
    }
    if (!primitive) continue;
    exp_.resize(q_ - 1);
    log_.assign(q_, 0);
    FieldElem x = element_at(spec_, 1);
    for (u64 k = 0; k < q_ - 1; ++k) {
      const u64 idx = x.index();
      exp_[k] = static_cast<std::uint32_t>(idx);
      log_[idx] = static_cast<std::uint32_t>(k);
      x = ffield::mul(x, g);
    }
    return;
  }
  throw Error(ErrorCode::Internal, "no primitive element");
}

std::uint64_t Field::add(std::uint64_t a, std::uint64_t b) const noexcept {
  const u64 p = spec_->p;
  if (spec_->n == 1) {
    u64 s = a + b;
    return s >= p || s < a ? s - p : s;
  }
  if (p == 2) return a ^ b;
  u64 out = 0, place = 1;
  for (unsigned i = 0; i < spec_->n; ++i) {
    u64 d = (a % p + b % p) % p;
    out += d * place;
    place *= p;
    a /= p;
    b /= p;
  }
  return out;
}

std::uint64_t Field::neg(std::uint64_t a) const noexcept {
  const u64 p = spec_->p;
  if (spec_->n == 1) return a == 0 ? 0 : p - a;
  if (p == 2) return a;
  u64 out = 0, place = 1;
  for (unsigned i = 0; i < spec_->n; ++i) {
    u64 d = a % p;
    out += ((p - d) % p) * place;
    place *= p;
    a /= p;
  }
  return out;
}

std::uint64_t Field::sub(std::uint64_t a, std::uint64_t b) const noexcept { return add(a, neg(b)); }

std::uint64_t Field::mul(std::uint64_t a, std::uint64_t b) const {
  if (a == 0 || b == 0) return 0;
  if (spec_->n == 1) return mulmod(a, b, spec_->p);
  if (!exp_.empty()) {
    u64 k = static_cast<u64>(log_[a]) + log_[b];
    if (k >= q_ - 1) k -= q_ - 1;
    return exp_[k];
  }
  return ffield::mul(element(a), element(b)).index();
}

std::uint64_t Field::pow(std::uint64_t a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (spec_->n == 1) return powmod(a, e, spec_->p);
  if (!exp_.empty()) {
    u64 k = static_cast<u64>(static_cast<u128>(log_[a]) * (e % (q_ - 1)) % (q_ - 1));
    return exp_[k];
  }
  return ffield::pow(element(a), e).index();
}

std::uint64_t Field::inv(std::uint64_t a) const {
  if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  if (spec_->n == 1) return invmod(a, spec_->p);
  if (!exp_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  return ffield::inv(element(a)).index();
}

std::uint64_t Field::div(std::uint64_t a, std::uint64_t b) const { return mul(a, inv(b)); }

bool Field::is_square(std::uint64_t a) const {
  if (a == 0 || spec_->p == 2) return true;
  if (!exp_.empty()) return log_[a] % 2 == 0;
  return pow(a, (q_ - 1) / 2) == 1;
}

}  // namespace qr::ffield

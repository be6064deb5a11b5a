#include "qr/grp.hpp"

#include "qr/error.hpp"
#include "qr/rng.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace qr::grp {

namespace {

using u64 = std::uint64_t;

u64 fnv1a(u64 h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string field_literal(const ffield::FieldSpec& spec) {
  std::string s = std::to_string(spec.p);
  if (spec.n > 1) s += "^" + std::to_string(spec.n);
  return s;
}

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const noexcept {
    u64 h = 0xcbf29ce484222325ull;
    for (auto w : b.words()) h = fnv1a(h, &w, sizeof w);
    return static_cast<std::size_t>(h);
  }
};

using BitsetSet = std::unordered_set<Bitset, BitsetHash>;

Id power(const Group& g, Id x, u64 e) {
  Id result = g.identity();
  Id base = x;
  while (e) {
    if (e & 1) result = g.mul(result, base);
    base = g.mul(base, base);
    e >>= 1;
  }
  return result;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<Id> bits_to_ids(const Bitset& b) {
  std::vector<Id> out;
  out.reserve(b.count());
  b.for_each([&](std::size_t i) { out.push_back(static_cast<Id>(i)); });
  return out;
}

/// AB for normal subgroups A, B (a subgroup because either is normal).
Bitset normal_product(const Group& g, const Bitset& a, const Bitset& b) {
  const auto a_ids = bits_to_ids(a);
  Bitset p = a;
  b.for_each([&](std::size_t y) {
    if (p.test(y)) return;
    for (Id x : a_ids) p.set(g.mul(x, static_cast<Id>(y)));
  });
  return p;
}

void require_table_size(const Group& g, const char* what) {
  if (g.order() > Group::kTableCap)
    throw Error(ErrorCode::OrderCap, std::string(what) + ": group order " + std::to_string(g.order()) + " exceeds " +
                                         std::to_string(Group::kTableCap));
}

}  // namespace

const char* to_string(Label label) noexcept {
  switch (label) {
    case Label::additive: return "additive";
    case Label::multiplicative: return "multiplicative";
    case Label::sl2: return "sl2";
    case Label::product: return "product";
    case Label::quotient: return "quotient";
    case Label::subgroup: return "subgroup";
    case Label::cyclic: return "cyclic";
    case Label::permutation: return "permutation";
  }
  return "unknown";
}

Group::Group(std::string name, Label label, std::size_t order, Id identity, MulFn mul, InvFn inv,
             std::optional<bool> abelian, std::optional<Carrier> carrier)
    : name_(std::move(name)),
      label_(label),
      order_(order),
      identity_(identity),
      mul_(std::move(mul)),
      carrier_(std::move(carrier)) {
  if (order_ == 0 || identity_ >= order_) throw Error(ErrorCode::InvalidArgument, "group must be nonempty");
  if (order_ > (std::size_t{1} << 31)) throw Error(ErrorCode::OrderCap, "group order too large");
  if (order_ <= kTableCap) {
    table_.resize(order_ * order_);
    for (Id a = 0; a < order_; ++a)
      for (Id b = 0; b < order_; ++b) {
        const Id c = mul_(a, b);
        if (c >= order_) throw Error(ErrorCode::Internal, name_ + ": product out of range");
        table_[static_cast<std::size_t>(a) * order_ + b] = c;
      }
  }
  inv_table_.resize(order_);
  if (inv) {
    for (Id a = 0; a < order_; ++a) inv_table_[a] = inv(a);
  } else if (has_table()) {
    for (Id a = 0; a < order_; ++a) {
      const Id* row = &table_[static_cast<std::size_t>(a) * order_];
      const Id* hit = std::find(row, row + order_, identity_);
      if (hit == row + order_) throw Error(ErrorCode::Internal, name_ + ": element without inverse");
      inv_table_[a] = static_cast<Id>(hit - row);
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, name_ + ": groups beyond the table cap need an inverse map");
  }
  if (abelian) {
    abelian_ = *abelian;
  } else if (has_table()) {
    abelian_ = true;
    for (Id a = 0; a < order_ && abelian_; ++a)
      for (Id b = a + 1; b < order_; ++b)
        if (this->mul(a, b) != this->mul(b, a)) {
          abelian_ = false;
          break;
        }
  } else {
    throw Error(ErrorCode::InvalidArgument, name_ + ": groups beyond the table cap need an abelian flag");
  }
  u64 h = 0xcbf29ce484222325ull;
  h = fnv1a(h, name_.data(), name_.size());
  const u64 ord = order_;
  h = fnv1a(h, &ord, sizeof ord);
  if (carrier_ && carrier_->field) {
    const u64 fh = carrier_->field->spec().order_hash();
    h = fnv1a(h, &fh, sizeof fh);
  }
  hash_ = h;
}

void verify_axioms(const Group& g, std::uint64_t seed) {
  const std::size_t n = g.order();
  const Id e = g.identity();
  auto fail = [&](const std::string& law) { throw Error(ErrorCode::Internal, g.name() + ": " + law + " fails"); };
  const bool exhaustive = n <= 512;
  Rng rng(seed);
  const std::size_t unary = exhaustive ? n : std::min<std::size_t>(n, 100'000);
  for (std::size_t k = 0; k < unary; ++k) {
    const Id x = exhaustive || n <= 100'000 ? static_cast<Id>(k) : static_cast<Id>(uniform_below(rng, n));
    if (g.mul(e, x) != x || g.mul(x, e) != x) fail("identity");
    if (g.inv(x) >= n || g.mul(x, g.inv(x)) != e || g.mul(g.inv(x), x) != e) fail("inverse");
  }
  if (exhaustive) {
    for (Id a = 0; a < n; ++a)
      for (Id b = 0; b < n; ++b) {
        const Id ab = g.mul(a, b);
        if (ab >= n) fail("closure");
        for (Id c = 0; c < n; ++c)
          if (g.mul(ab, c) != g.mul(a, g.mul(b, c))) fail("associativity");
      }
  } else {
    for (int t = 0; t < 100'000; ++t) {
      const Id a = static_cast<Id>(uniform_below(rng, n));
      const Id b = static_cast<Id>(uniform_below(rng, n));
      const Id c = static_cast<Id>(uniform_below(rng, n));
      const Id ab = g.mul(a, b);
      if (ab >= n) fail("closure");
      if (g.mul(ab, c) != g.mul(a, g.mul(b, c))) fail("associativity");
    }
  }
  if (g.has_table()) {
    std::vector<std::uint32_t> row_seen(n, 0), col_seen(n, 0);
    for (Id a = 0; a < n; ++a) {
      for (Id b = 0; b < n; ++b) {
        const Id r = g.mul(a, b);
        const Id c = g.mul(b, a);
        if (row_seen[r] == a + 1 || col_seen[c] == a + 1) fail("latin square");
        row_seen[r] = a + 1;
        col_seen[c] = a + 1;
      }
    }
  }
}

std::uint64_t element_order(const Group& g, Id x) {
  u64 ord = g.order();
  for (u64 p : prime_factors(ord))
    while (ord % p == 0 && power(g, x, ord / p) == g.identity()) ord /= p;
  return ord;
}

GroupPtr additive_group(const std::shared_ptr<const ffield::Field>& field) {
  const u64 q = field->order();
  Carrier carrier{field, 1, {}, "x = x", "z = x + y"};
  carrier.cells.resize(q);
  std::iota(carrier.cells.begin(), carrier.cells.end(), u64{0});
  auto f = field;
  return std::make_shared<const Group>(
      "add:" + field_literal(field->spec()), Label::additive, q, 0,
      [f](Id a, Id b) { return static_cast<Id>(f->add(a, b)); }, [f](Id a) { return static_cast<Id>(f->neg(a)); },
      true, std::move(carrier));
}

GroupPtr multiplicative_group(const std::shared_ptr<const ffield::Field>& field) {
  const u64 q = field->order();
  if (q < 2) throw Error(ErrorCode::InvalidArgument, "field too small");
  Carrier carrier{field, 1, {}, "!(x = 0)", "z = x * y"};
  carrier.cells.resize(q - 1);
  std::iota(carrier.cells.begin(), carrier.cells.end(), u64{1});
  auto f = field;
  return std::make_shared<const Group>(
      "mul:" + field_literal(field->spec()), Label::multiplicative, q - 1, 0,
      [f](Id a, Id b) { return static_cast<Id>(f->mul(a + 1, b + 1) - 1); },
      [f](Id a) { return static_cast<Id>(f->inv(a + 1) - 1); }, true, std::move(carrier));
}

GroupPtr sl2(const std::shared_ptr<const ffield::Field>& field, std::uint64_t order_cap) {
  const u64 q = field->order();
  const u64 order = q * (q * q - 1);
  if (q > 1'000'000 || order > order_cap)
    throw Error(ErrorCode::OrderCap, "SL2 order " + std::to_string(order) + " exceeds cap " + std::to_string(order_cap));
  const auto& F = *field;
  // Solve for d (a ≠ 0) or c (a = 0) so the enumeration is q^3, then sort.
  std::vector<u64> cells;
  cells.reserve(order);
  auto cell = [q](u64 a, u64 b, u64 c, u64 d) { return ((a * q + b) * q + c) * q + d; };
  for (u64 a = 0; a < q; ++a)
    for (u64 b = 0; b < q; ++b) {
      if (a != 0) {
        for (u64 c = 0; c < q; ++c) cells.push_back(cell(a, b, c, F.div(F.add(1, F.mul(b, c)), a)));
      } else if (b != 0) {
        const u64 c = F.neg(F.inv(b));
        for (u64 d = 0; d < q; ++d) cells.push_back(cell(a, b, c, d));
      }
    }
  std::sort(cells.begin(), cells.end());
  if (cells.size() != order) throw Error(ErrorCode::Internal, "SL2 enumeration miscounted");
  auto shared_cells = std::make_shared<const std::vector<u64>>(cells);
  auto f = field;
  auto lookup = [shared_cells](u64 c) {
    auto it = std::lower_bound(shared_cells->begin(), shared_cells->end(), c);
    return static_cast<Id>(it - shared_cells->begin());
  };
  auto unpack = [q](u64 c, u64 m[4]) {
    for (int i = 3; i >= 0; --i) {
      m[i] = c % q;
      c /= q;
    }
  };
  auto mul = [f, shared_cells, lookup, unpack, cell](Id x, Id y) {
    u64 a[4], b[4];
    unpack((*shared_cells)[x], a);
    unpack((*shared_cells)[y], b);
    const auto& F = *f;
    return lookup(cell(F.add(F.mul(a[0], b[0]), F.mul(a[1], b[2])), F.add(F.mul(a[0], b[1]), F.mul(a[1], b[3])),
                       F.add(F.mul(a[2], b[0]), F.mul(a[3], b[2])), F.add(F.mul(a[2], b[1]), F.mul(a[3], b[3]))));
  };
  auto inv = [f, shared_cells, lookup, unpack, cell](Id x) {
    u64 a[4];
    unpack((*shared_cells)[x], a);
    return lookup(cell(a[3], f->neg(a[1]), f->neg(a[2]), a[0]));
  };
  const Id identity = lookup(cell(1, 0, 0, 1));
  Carrier carrier{field, 4, cells, "a*d - b*c = 1",
                  "((a*e + b*g = i & a*f + b*h = j) & (c*e + d*g = k & c*f + d*h = l))"};
  return std::make_shared<const Group>("sl2:" + field_literal(field->spec()), Label::sl2, order, identity, mul, inv,
                                       q == 2 ? std::optional<bool>{} : std::optional<bool>{false},
                                       std::move(carrier));
}

GroupPtr cyclic_group(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cyclic group of order 0");
  return std::make_shared<const Group>(
      "cyclic:" + std::to_string(n), Label::cyclic, n, 0,
      [n](Id a, Id b) { return static_cast<Id>((u64{a} + b) % n); },
      [n](Id a) { return static_cast<Id>((n - a) % n); }, true);
}

GroupPtr symmetric_group(unsigned n) {
  if (n == 0 || n > 7) throw Error(ErrorCode::InvalidArgument, "symmetric group degree must be in 1..7");
  std::vector<std::vector<std::uint8_t>> perms;
  std::vector<std::uint8_t> p(n);
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto shared = std::make_shared<const std::vector<std::vector<std::uint8_t>>>(std::move(perms));
  // Lehmer rank agrees with lexicographic position.
  auto rank = [n](const std::vector<std::uint8_t>& v) {
    Id r = 0;
    for (unsigned i = 0; i < n; ++i) {
      unsigned smaller = 0;
      for (unsigned j = i + 1; j < n; ++j) smaller += v[j] < v[i];
      r = r * (n - i) + smaller;
    }
    return r;
  };
  auto mul = [shared, rank, n](Id a, Id b) {
    const auto& pa = (*shared)[a];
    const auto& pb = (*shared)[b];
    std::vector<std::uint8_t> c(n);
    for (unsigned i = 0; i < n; ++i) c[i] = pa[pb[i]];
    return rank(c);
  };
  auto inv = [shared, rank, n](Id a) {
    const auto& pa = (*shared)[a];
    std::vector<std::uint8_t> c(n);
    for (unsigned i = 0; i < n; ++i) c[pa[i]] = static_cast<std::uint8_t>(i);
    return rank(c);
  };
  return std::make_shared<const Group>("sym:" + std::to_string(n), Label::permutation, shared->size(), 0, mul, inv,
                                       n <= 2);
}

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b) {
  const u64 nb = b->order();
  if (u64{a->order()} * nb > (u64{1} << 31)) throw Error(ErrorCode::OrderCap, "direct product too large");
  return std::make_shared<const Group>(
      a->name() + "x" + b->name(), Label::product, a->order() * nb,
      static_cast<Id>(a->identity() * nb + b->identity()),
      [a, b, nb](Id x, Id y) {
        return static_cast<Id>(a->mul(static_cast<Id>(x / nb), static_cast<Id>(y / nb)) * nb +
                               b->mul(static_cast<Id>(x % nb), static_cast<Id>(y % nb)));
      },
      [a, b, nb](Id x) {
        return static_cast<Id>(a->inv(static_cast<Id>(x / nb)) * nb + b->inv(static_cast<Id>(x % nb)));
      },
      a->is_abelian() && b->is_abelian());
}

GroupPtr parse_group_literal(std::string_view literal, std::string_view modulus_csv) {
  const auto colon = literal.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorCode::InvalidArgument, "group literal must look like kind:arg, got '" + std::string(literal) + "'");
  const auto kind = literal.substr(0, colon);
  const auto arg = literal.substr(colon + 1);
  auto number = [&]() {
    u64 v = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
    if (ec != std::errc{} || ptr != arg.data() + arg.size())
      throw Error(ErrorCode::InvalidArgument, "bad group size '" + std::string(arg) + "'");
    return v;
  };
  if (kind == "add") return additive_group(ffield::Field::create(arg, modulus_csv));
  if (kind == "mul") return multiplicative_group(ffield::Field::create(arg, modulus_csv));
  if (kind == "sl2") return sl2(ffield::Field::create(arg, modulus_csv));
  if (kind == "cyclic") return cyclic_group(number());
  if (kind == "sym") return symmetric_group(static_cast<unsigned>(number()));
  throw Error(ErrorCode::InvalidArgument, "unknown group kind '" + std::string(kind) + "'");
}

// ---------------------------------------------------------------------------

Subgroup::Subgroup(GroupPtr parent, Bitset members, std::optional<std::string> formula)
    : parent_(std::move(parent)), members_(std::move(members)), formula_(std::move(formula)) {
  const Group& g = *parent_;
  if (members_.size() != g.order()) throw Error(ErrorCode::InvalidArgument, "subgroup bitset size mismatch");
  if (!members_.test(g.identity())) throw Error(ErrorCode::InvalidArgument, "subgroup must contain the identity");
  order_ = members_.count();
  if (g.order() % order_) throw Error(ErrorCode::InvalidArgument, "subgroup order must divide the group order");
  const auto ids = bits_to_ids(members_);
  // Exhaustive closure check when affordable, otherwise sampled.
  constexpr u64 kBudget = u64{1} << 26;
  if (u64{order_} * order_ <= kBudget) {
    for (Id a : ids)
      for (Id b : ids)
        if (!members_.test(g.mul(a, b))) throw Error(ErrorCode::InvalidArgument, "subset is not closed under mul");
  } else {
    Rng rng(0);
    for (int t = 0; t < 100'000; ++t) {
      const Id a = ids[uniform_below(rng, ids.size())];
      const Id b = ids[uniform_below(rng, ids.size())];
      if (!members_.test(g.mul(a, b))) throw Error(ErrorCode::InvalidArgument, "subset is not closed under mul");
    }
  }
  for (Id a : ids)
    if (!members_.test(g.inv(a))) throw Error(ErrorCode::InvalidArgument, "subset is not closed under inverses");
  if (g.is_abelian() || order_ == g.order() || order_ == 1) {
    normal_ = true;
  } else if (u64{g.order()} * order_ <= kBudget) {
    normal_ = true;
    for (Id x = 0; x < g.order() && normal_; ++x)
      for (Id h : ids)
        if (!members_.test(g.conj(x, h))) {
          normal_ = false;
          break;
        }
  } else {
    Rng rng(1);
    normal_ = true;
    for (int t = 0; t < 100'000 && normal_; ++t) {
      const Id x = static_cast<Id>(uniform_below(rng, g.order()));
      const Id h = ids[uniform_below(rng, ids.size())];
      normal_ = members_.test(g.conj(x, h));
    }
  }
}

std::vector<Id> Subgroup::ids() const { return bits_to_ids(members_); }

std::string Subgroup::serialize() const {
  std::ostringstream os;
  os << "subgroup " << std::hex << std::setw(16) << std::setfill('0') << parent_->hash() << std::dec << " ";
  bool first = true;
  members_.for_each([&](std::size_t i) {
    if (!first) os << ",";
    first = false;
    os << i;
  });
  return os.str();
}

Subgroup whole_group(const GroupPtr& g) {
  const auto& c = g->carrier();
  return Subgroup(g, Bitset::full(g->order()), c ? std::optional<std::string>(c->set_formula) : std::nullopt);
}

Subgroup generated_subgroup(const GroupPtr& g, const std::vector<Id>& generators) {
  Bitset m(g->order());
  m.set(g->identity());
  std::vector<Id> elems{g->identity()};
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (Id s : generators) {
      const Id y = g->mul(elems[i], s);
      if (!m.test(y)) {
        m.set(y);
        elems.push_back(y);
      }
    }
  return Subgroup(g, std::move(m));
}

std::vector<std::vector<Id>> conjugacy_classes(const Group& g) {
  require_table_size(g, "conjugacy classes");
  const std::size_t n = g.order();
  std::vector<std::vector<Id>> out;
  if (g.is_abelian()) {
    for (Id x = 0; x < n; ++x) out.push_back({x});
    return out;
  }
  Bitset seen(n);
  for (Id x = 0; x < n; ++x) {
    if (seen.test(x)) continue;
    Bitset cls(n);
    for (Id y = 0; y < n; ++y) cls.set(g.conj(y, x));
    seen |= cls;
    out.push_back(bits_to_ids(cls));
  }
  return out;
}

namespace {

std::vector<Bitset> normal_via_dual(const Group& g, std::size_t max_index, std::size_t cap) {
  const AbelianBasis basis = abelian_basis(g);
  const std::size_t n = g.order();
  const std::size_t r = basis.rank();
  const u64 L = basis.exponent;
  // The coordinate group doubles as the dual: a ↔ the character
  // x ↦ exp(2πi Σ a_i x_i / n_i).
  struct Node {
    Bitset members;
    std::vector<Id> gens;
  };
  std::vector<Node> nodes;
  BitsetSet seen;
  Bitset trivial(n);
  trivial.set(g.identity());
  seen.insert(trivial);
  nodes.push_back({trivial, {}});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t s_order = nodes[i].members.count();
    for (Id a = 0; a < n; ++a) {
      const Bitset& s = nodes[i].members;
      if (s.test(a)) continue;
      std::size_t m = 1;
      Id y = a;
      while (!s.test(y) && s_order * (m + 1) <= max_index) {
        y = g.mul(y, a);
        ++m;
      }
      if (!s.test(y)) continue;
      Bitset t = s;
      const auto s_ids = bits_to_ids(s);
      Id step = a;
      for (std::size_t j = 1; j < m; ++j) {
        for (Id x : s_ids) t.set(g.mul(x, step));
        step = g.mul(step, a);
      }
      if (!seen.insert(t).second) continue;
      if (nodes.size() >= cap)
        throw Error(ErrorCode::OrderCap, "subgroup enumeration exceeded " + std::to_string(cap) + " subgroups");
      auto gens = nodes[i].gens;
      gens.push_back(a);
      nodes.push_back({std::move(t), std::move(gens)});
    }
  }
  std::vector<Bitset> out;
  for (const auto& node : nodes) {
    Bitset ann(n);
    for (Id x = 0; x < n; ++x) {
      bool in = true;
      for (Id a : node.gens) {
        u64 s = 0;
        for (std::size_t k = 0; k < r; ++k) s += u64{basis.coord(a, k)} * basis.coord(x, k) * (L / basis.orders[k]);
        if (s % L) {
          in = false;
          break;
        }
      }
      if (in) ann.set(x);
    }
    if (ann.count() * node.members.count() != n) throw Error(ErrorCode::Internal, "character pairing degenerate");
    out.push_back(std::move(ann));
  }
  return out;
}

std::vector<Bitset> normal_via_classes(const Group& g, std::size_t max_index, std::size_t cap) {
  const std::size_t n = g.order();
  std::vector<Bitset> base;
  BitsetSet base_seen;
  for (const auto& cls : conjugacy_classes(g)) {
    if (cls.size() == 1 && cls[0] == g.identity()) continue;
    Bitset m(n);
    m.set(g.identity());
    std::vector<Id> elems{g.identity()};
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (Id s : cls) {
        const Id y = g.mul(elems[i], s);
        if (!m.test(y)) {
          m.set(y);
          elems.push_back(y);
        }
      }
    if (base_seen.insert(m).second) base.push_back(std::move(m));
  }
  // Every normal subgroup is a product of class closures.
  std::vector<Bitset> lattice;
  BitsetSet seen;
  Bitset trivial(n);
  trivial.set(g.identity());
  lattice.push_back(trivial);
  seen.insert(trivial);
  for (std::size_t i = 0; i < lattice.size(); ++i)
    for (const auto& b : base) {
      if (b.is_subset_of(lattice[i])) continue;
      Bitset j = normal_product(g, lattice[i], b);
      if (!seen.insert(j).second) continue;
      if (lattice.size() >= cap)
        throw Error(ErrorCode::OrderCap, "normal subgroup lattice exceeded " + std::to_string(cap) + " entries");
      lattice.push_back(std::move(j));
    }
  std::vector<Bitset> out;
  for (auto& m : lattice)
    if (n / m.count() <= max_index) out.push_back(std::move(m));
  return out;
}

}  // namespace

std::vector<Subgroup> normal_subgroups_up_to_index(const GroupPtr& g, std::size_t max_index,
                                                   const NormalSearchOptions& options) {
  if (max_index == 0) throw Error(ErrorCode::InvalidArgument, "max_index must be at least 1");
  std::vector<Bitset> found;
  if (max_index == 1) {
    found.push_back(Bitset::full(g->order()));
  } else {
    require_table_size(*g, "normal subgroup search");
    found = g->is_abelian() ? normal_via_dual(*g, max_index, options.lattice_cap)
                            : normal_via_classes(*g, max_index, options.lattice_cap);
  }
  std::sort(found.begin(), found.end(), [](const Bitset& a, const Bitset& b) {
    const auto ca = a.count(), cb = b.count();
    if (ca != cb) return ca > cb;
    return lex_less(a, b);
  });
  std::vector<Subgroup> out;
  out.reserve(found.size());
  const auto& carrier = g->carrier();
  for (auto& m : found) {
    const bool whole = m.count() == g->order();
    std::optional<std::string> formula;
    if (whole && carrier) formula = carrier->set_formula;
    out.emplace_back(g, std::move(m), std::move(formula));
  }
  return out;
}

// ---------------------------------------------------------------------------

CosetDecomposition::CosetDecomposition(const Subgroup& h, bool require_normal) : subgroup_(h) {
  if (require_normal && !h.normal())
    throw Error(ErrorCode::NotNormalWhenRequired, "subgroup of index " + std::to_string(h.index()) + " is not normal");
  const Group& g = h.parent();
  const auto ids = h.ids();
  constexpr auto kUnset = ~std::uint32_t{0};
  coset_of_.assign(g.order(), kUnset);
  for (Id x = 0; x < g.order(); ++x) {
    if (coset_of_[x] != kUnset) continue;
    const auto k = static_cast<std::uint32_t>(reps_.size());
    reps_.push_back(x);
    for (Id y : ids) coset_of_[g.mul(x, y)] = k;
  }
}

Bitset CosetDecomposition::members(std::size_t coset) const {
  Bitset b(coset_of_.size());
  for (std::size_t x = 0; x < coset_of_.size(); ++x)
    if (coset_of_[x] == coset) b.set(x);
  return b;
}

std::vector<Id> CosetDecomposition::member_ids(std::size_t coset) const { return bits_to_ids(members(coset)); }

GroupPtr quotient(const CosetDecomposition& cosets) {
  if (!cosets.subgroup().normal())
    throw Error(ErrorCode::NotNormalWhenRequired, "quotient by a non-normal subgroup");
  const auto& h = cosets.subgroup();
  auto parent = h.parent_ptr();
  auto reps = std::make_shared<const std::vector<Id>>(cosets.reps());
  auto coset_of = std::make_shared<std::vector<std::uint32_t>>(parent->order());
  for (Id x = 0; x < parent->order(); ++x) (*coset_of)[x] = static_cast<std::uint32_t>(cosets.coset_of(x));
  const auto identity = static_cast<Id>(cosets.coset_of(parent->identity()));
  return std::make_shared<const Group>(
      parent->name() + "/" + std::to_string(h.order()), Label::quotient, cosets.count(), identity,
      [parent, reps, coset_of](Id a, Id b) { return static_cast<Id>((*coset_of)[parent->mul((*reps)[a], (*reps)[b])]); },
      [parent, reps, coset_of](Id a) { return static_cast<Id>((*coset_of)[parent->inv((*reps)[a])]); },
      parent->is_abelian() ? std::optional<bool>{true} : std::nullopt);
}

Restriction as_group(const Subgroup& h) {
  auto parent = h.parent_ptr();
  auto to_parent = std::make_shared<const std::vector<Id>>(h.ids());
  auto from_parent = std::make_shared<std::vector<Id>>(parent->order(), 0);
  for (std::size_t i = 0; i < to_parent->size(); ++i) (*from_parent)[(*to_parent)[i]] = static_cast<Id>(i);
  std::optional<Carrier> carrier;
  if (const auto& pc = parent->carrier()) {
    Carrier c = *pc;
    c.cells.clear();
    for (Id x : *to_parent) c.cells.push_back(pc->cells[x]);
    if (h.formula()) c.set_formula = *h.formula();
    carrier = std::move(c);
  }
  auto group = std::make_shared<const Group>(
      parent->name() + "<" + std::to_string(h.order()) + ">", Label::subgroup, h.order(),
      (*from_parent)[parent->identity()],
      [parent, to_parent, from_parent](Id a, Id b) {
        return (*from_parent)[parent->mul((*to_parent)[a], (*to_parent)[b])];
      },
      [parent, to_parent, from_parent](Id a) { return (*from_parent)[parent->inv((*to_parent)[a])]; },
      parent->is_abelian() ? std::optional<bool>{true} : std::nullopt, std::move(carrier));
  return {group, *to_parent};
}

// ---------------------------------------------------------------------------

AbelianBasis abelian_basis(const Group& g) {
  require_table_size(g, "abelian decomposition");
  if (!g.is_abelian()) throw Error(ErrorCode::NotAbelian, g.name() + " is not abelian");
  const std::size_t n = g.order();
  const Id e = g.identity();
  std::vector<u64> orders(n);
  for (Id x = 0; x < n; ++x) orders[x] = element_order(g, x);

  AbelianBasis basis;
  for (u64 p : prime_factors(n)) {
    std::vector<Id> part;
    for (Id x = 0; x < n; ++x) {
      u64 o = orders[x];
      while (o % p == 0) o /= p;
      if (o == 1) part.push_back(x);
    }
    // Greedy: take an element of largest order modulo the span so far and
    // correct it by the span so its cyclic group meets the span trivially.
    Bitset span(n);
    span.set(e);
    std::vector<Id> span_elems{e};
    std::vector<std::vector<std::uint32_t>> coords(n);
    std::vector<Id> gens;
    std::vector<u64> gen_orders;
    while (span_elems.size() < part.size()) {
      Id best = 0;
      u64 best_m = 0;
      for (Id x : part) {
        if (span.test(x)) continue;
        u64 m = 1;
        Id y = x;
        while (!span.test(y)) {
          y = g.mul(y, x);
          ++m;
        }
        if (m > best_m) {
          best_m = m;
          best = x;
        }
      }
      const auto& c = coords[power(g, best, best_m)];
      Id gen = best;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        const u64 ci = i < c.size() ? c[i] : 0;
        if (ci % best_m) throw Error(ErrorCode::Internal, "abelian decomposition lost divisibility");
        gen = g.mul(gen, power(g, g.inv(gens[i]), ci / best_m));
      }
      if (power(g, gen, best_m) != e) throw Error(ErrorCode::Internal, "abelian decomposition correction failed");
      const std::size_t old = span_elems.size();
      for (std::size_t s = 0; s < old; ++s) coords[span_elems[s]].resize(gens.size() + 1, 0);
      Id step = gen;
      for (u64 j = 1; j < best_m; ++j) {
        for (std::size_t s = 0; s < old; ++s) {
          const Id z = g.mul(span_elems[s], step);
          auto cz = coords[span_elems[s]];
          cz.back() = static_cast<std::uint32_t>(j);
          coords[z] = std::move(cz);
          span.set(z);
          span_elems.push_back(z);
        }
        step = g.mul(step, gen);
      }
      gens.push_back(gen);
      gen_orders.push_back(best_m);
    }
    basis.generators.insert(basis.generators.end(), gens.begin(), gens.end());
    basis.orders.insert(basis.orders.end(), gen_orders.begin(), gen_orders.end());
  }

  const std::size_t r = basis.orders.size();
  basis.coords.assign(n * r, 0);
  std::vector<char> hit(n, 0);
  std::vector<std::pair<Id, std::vector<std::uint32_t>>> layer{{e, {}}};
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<std::pair<Id, std::vector<std::uint32_t>>> next;
    next.reserve(layer.size() * basis.orders[i]);
    for (auto& [y, c] : layer) {
      Id z = y;
      for (u64 j = 0; j < basis.orders[i]; ++j) {
        auto cz = c;
        cz.push_back(static_cast<std::uint32_t>(j));
        next.emplace_back(z, std::move(cz));
        z = g.mul(z, basis.generators[i]);
      }
    }
    layer = std::move(next);
  }
  for (auto& [y, c] : layer) {
    if (hit[y]) throw Error(ErrorCode::Internal, "abelian decomposition is not a basis");
    hit[y] = 1;
    std::copy(c.begin(), c.end(), basis.coords.begin() + static_cast<std::ptrdiff_t>(y * r));
  }
  if (layer.size() != n) throw Error(ErrorCode::Internal, "abelian decomposition does not span");
  for (u64 o : basis.orders) basis.exponent = std::lcm(basis.exponent, o);
  return basis;
}

}  // namespace qr::grp

#include "qr/defform.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

namespace qr::defform {

namespace {

using u64 = std::uint64_t;

struct CTerm {
  TermNode::Kind kind;
  int slot = -1;
  int lhs = -1, rhs = -1;
};

struct CForm {
  FormulaNode::Kind kind;
  int lterm = -1, rterm = -1;
  int lhs = -1, rhs = -1;
  int bound_slot = -1;
  std::vector<int> key_slots;  // quantifiers: free non-parameter slots of the node
};

// Slot layout: object variables, then parameters, then one slot per binder.
struct Program {
  std::vector<CTerm> terms;
  std::vector<CForm> forms;
  int root = -1;
  int num_slots = 0;
  int first_param = 0;
  int first_bound = 0;
};

class Compiler {
 public:
  Compiler(const Formula& f, Program& prog) : prog_(prog) {
    int slot = 0;
    for (const auto& v : f.free_vars()) globals_.emplace_back(v, slot++);
    prog_.first_param = slot;
    for (const auto& v : f.param_vars()) globals_.emplace_back(v, slot++);
    prog_.first_bound = slot;
    next_slot_ = slot;
    std::set<int> used;
    prog_.root = form(f.root(), used);
    prog_.num_slots = next_slot_;
  }

 private:
  int lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return it->second;
    for (const auto& [n, s] : globals_)
      if (n == name) return s;
    throw Error(ErrorCode::UnboundVariable, "identifier '" + name + "' has no binding");
  }

  int term(const TermNode& t, std::set<int>& used) {
    CTerm c{t.kind};
    if (t.kind == TermNode::Kind::var) {
      c.slot = lookup(t.name);
      used.insert(c.slot);
    } else if (t.lhs) {
      c.lhs = term(*t.lhs, used);
      c.rhs = term(*t.rhs, used);
    }
    prog_.terms.push_back(c);
    return static_cast<int>(prog_.terms.size()) - 1;
  }

  int form(const FormulaNode& f, std::set<int>& used) {
    CForm c;
    c.kind = f.kind;
    switch (f.kind) {
      case FormulaNode::Kind::eq:
        c.lterm = term(*f.left_term, used);
        c.rterm = term(*f.right_term, used);
        break;
      case FormulaNode::Kind::neg: c.lhs = form(*f.left, used); break;
      case FormulaNode::Kind::conj:
      case FormulaNode::Kind::disj:
        c.lhs = form(*f.left, used);
        c.rhs = form(*f.right, used);
        break;
      case FormulaNode::Kind::exists:
      case FormulaNode::Kind::forall: {
        c.bound_slot = next_slot_++;
        scope_.emplace_back(f.bound, c.bound_slot);
        std::set<int> inner;
        c.lhs = form(*f.left, inner);
        scope_.pop_back();
        inner.erase(c.bound_slot);
        for (int s : inner) {
          used.insert(s);
          if (s < prog_.first_param || s >= prog_.first_bound) c.key_slots.push_back(s);
        }
        break;
      }
    }
    prog_.forms.push_back(std::move(c));
    return static_cast<int>(prog_.forms.size()) - 1;
  }

  Program& prog_;
  std::vector<std::pair<std::string, int>> globals_;
  std::vector<std::pair<std::string, int>> scope_;
  int next_slot_ = 0;
};

class Evaluator {
 public:
  static constexpr u64 kMemoCap = u64{1} << 22;

  Evaluator(const Program& prog, const ffield::Field& field, bool memoize)
      : prog_(prog), field_(field), q_(field.order()), env_(static_cast<std::size_t>(prog.num_slots), 0) {
    memo_.resize(prog.forms.size());
    if (!memoize) return;
    for (std::size_t i = 0; i < prog.forms.size(); ++i) {
      const CForm& c = prog.forms[i];
      if (c.bound_slot < 0) continue;
      u64 cells = 1;
      bool ok = true;
      for (std::size_t k = 0; k < c.key_slots.size(); ++k) {
        if (cells > kMemoCap / q_) {
          ok = false;
          break;
        }
        cells *= q_;
      }
      if (ok) memo_[i].assign(cells, -1);
    }
  }

  std::vector<u64>& env() { return env_; }

  u64 term(int idx) const {
    const CTerm& t = prog_.terms[static_cast<std::size_t>(idx)];
    switch (t.kind) {
      case TermNode::Kind::zero: return 0;
      case TermNode::Kind::one: return 1;
      case TermNode::Kind::var: return env_[static_cast<std::size_t>(t.slot)];
      case TermNode::Kind::add: return field_.add(term(t.lhs), term(t.rhs));
      case TermNode::Kind::sub: return field_.sub(term(t.lhs), term(t.rhs));
      case TermNode::Kind::mul: return field_.mul(term(t.lhs), term(t.rhs));
    }
    return 0;
  }

  bool form(int idx) {
    const CForm& c = prog_.forms[static_cast<std::size_t>(idx)];
    switch (c.kind) {
      case FormulaNode::Kind::eq: return term(c.lterm) == term(c.rterm);
      case FormulaNode::Kind::neg: return !form(c.lhs);
      case FormulaNode::Kind::conj: return form(c.lhs) && form(c.rhs);
      case FormulaNode::Kind::disj: return form(c.lhs) || form(c.rhs);
      case FormulaNode::Kind::exists:
      case FormulaNode::Kind::forall: break;
    }
    auto& memo = memo_[static_cast<std::size_t>(idx)];
    u64 key = 0;
    if (!memo.empty()) {
      for (int s : c.key_slots) key = key * q_ + env_[static_cast<std::size_t>(s)];
      if (memo[key] >= 0) return memo[key] != 0;
    }
    const bool want = c.kind == FormulaNode::Kind::exists;
    const auto slot = static_cast<std::size_t>(c.bound_slot);
    bool result = !want;
    for (u64 v = 0; v < q_; ++v) {
      env_[slot] = v;
      if (form(c.lhs) == want) {
        result = want;
        break;
      }
    }
    if (!memo.empty()) memo[key] = result ? 1 : 0;
    return result;
  }

 private:
  const Program& prog_;
  const ffield::Field& field_;
  u64 q_;
  std::vector<u64> env_;
  std::vector<std::vector<signed char>> memo_;
};

void bind_params(const Formula& f, const Program& prog, const ffield::Field& field, const Assignment& params,
                 std::vector<u64>& env) {
  for (std::size_t i = 0; i < f.param_vars().size(); ++i) {
    const auto& name = f.param_vars()[i];
    auto it = params.find(name);
    if (it == params.end()) throw Error(ErrorCode::InvalidArgument, "parameter '" + name + "' has no value");
    if (it->second >= field.order())
      throw Error(ErrorCode::InvalidArgument, "parameter '" + name + "' is not a field element index");
    env[static_cast<std::size_t>(prog.first_param) + i] = it->second;
  }
}

u64 cell_count(u64 q, unsigned arity, u64 cap) {
  u64 cells = 1;
  for (unsigned i = 0; i < arity; ++i) {
    if (cells > cap / q) throw Error(ErrorCode::ArityTooLarge, "q^arity exceeds the cell cap");
    cells *= q;
  }
  if (cells > cap) throw Error(ErrorCode::ArityTooLarge, "q^arity exceeds the cell cap");
  return cells;
}

}  // namespace

DefinableSet::DefinableSet(std::shared_ptr<const ffield::Field> field, unsigned arity, Bitset membership,
                           std::shared_ptr<const Formula> source, Assignment params)
    : field_(std::move(field)),
      arity_(arity),
      membership_(std::move(membership)),
      source_(std::move(source)),
      params_(std::move(params)) {
  u64 cells = 1;
  for (unsigned i = 0; i < arity_; ++i) cells *= field_->order();
  if (membership_.size() != cells) throw Error(ErrorCode::InvalidArgument, "membership bitset length must be q^arity");
}

std::uint64_t DefinableSet::cell_of(std::span<const std::uint64_t> point) const {
  if (point.size() != arity_) throw Error(ErrorCode::InvalidArgument, "point has wrong arity");
  u64 cell = 0;
  for (u64 x : point) {
    if (x >= field_->order()) throw Error(ErrorCode::InvalidArgument, "coordinate out of range");
    cell = cell * field_->order() + x;
  }
  return cell;
}

std::vector<std::uint64_t> DefinableSet::point_of(std::uint64_t cell) const {
  std::vector<u64> pt(arity_);
  for (unsigned i = arity_; i-- > 0;) {
    pt[i] = cell % field_->order();
    cell /= field_->order();
  }
  return pt;
}

DefinableSet evaluate(const Formula& f, const std::shared_ptr<const ffield::Field>& field, const Assignment& params,
                      const EvalOptions& options) {
  const u64 q = field->order();
  const auto arity = static_cast<unsigned>(f.arity());
  const u64 cells = cell_count(q, arity, options.cell_cap);
  Program prog;
  Compiler compiler(f, prog);
  Evaluator ev(prog, *field, true);
  bind_params(f, prog, *field, params, ev.env());
  Bitset members(cells);
  // Odometer over the object variables, last variable fastest.
  std::vector<u64>& env = ev.env();
  for (unsigned i = 0; i < arity; ++i) env[i] = 0;
  for (u64 cell = 0; cell < cells; ++cell) {
    if (ev.form(prog.root)) members.set(cell);
    for (unsigned i = arity; i-- > 0;) {
      if (++env[i] < q) break;
      env[i] = 0;
    }
  }
  return DefinableSet(field, arity, std::move(members), std::make_shared<const Formula>(f), params);
}

bool evaluate_point(const Formula& f, const ffield::Field& field, const Assignment& params,
                    std::span<const std::uint64_t> point) {
  if (point.size() != f.arity()) throw Error(ErrorCode::InvalidArgument, "point has wrong arity");
  Program prog;
  Compiler compiler(f, prog);
  Evaluator ev(prog, field, false);
  bind_params(f, prog, field, params, ev.env());
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (point[i] >= field.order()) throw Error(ErrorCode::InvalidArgument, "coordinate out of range");
    ev.env()[i] = point[i];
  }
  return ev.form(prog.root);
}

std::string serialize_set(const DefinableSet& set) {
  std::ostringstream os;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(set.field().spec().order_hash()));
  os << "QRSET 1\n";
  os << "q " << set.field().order() << " arity " << set.arity() << " order " << hash << "\n";
  const Bitset& b = set.membership();
  os << "rle " << (b.size() && b.test(0) ? 1 : 0);
  std::size_t i = 0;
  while (i < b.size()) {
    const bool v = b.test(i);
    std::size_t j = i;
    while (j < b.size() && b.test(j) == v) ++j;
    os << " " << (j - i);
    i = j;
  }
  os << "\n";
  return os.str();
}

EncodedSet decode_set(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string magic, key;
  int version = 0;
  EncodedSet out;
  auto bad = [](const std::string& why) { return Error(ErrorCode::InvalidArgument, "malformed set encoding: " + why); };
  if (!(is >> magic >> version) || magic != "QRSET" || version != 1) throw bad("header");
  std::string kq, ka, ko, hash;
  if (!(is >> kq >> out.q >> ka >> out.arity >> ko >> hash) || kq != "q" || ka != "arity" || ko != "order")
    throw bad("field line");
  auto [ptr, ec] = std::from_chars(hash.data(), hash.data() + hash.size(), out.order_hash, 16);
  if (ec != std::errc{} || ptr != hash.data() + hash.size()) throw bad("order hash");
  u64 cells = 1;
  for (unsigned i = 0; i < out.arity; ++i) {
    if (out.q && cells > (u64{1} << 40) / out.q) throw bad("size");
    cells *= out.q;
  }
  int first = 0;
  if (!(is >> key >> first) || key != "rle" || (first != 0 && first != 1)) throw bad("rle line");
  out.membership = Bitset(cells);
  u64 pos = 0, run = 0;
  bool v = first == 1;
  while (is >> run) {
    if (run == 0 && pos != 0) throw bad("empty run");
    if (pos + run > cells) throw bad("runs exceed q^arity");
    if (v)
      for (u64 k = 0; k < run; ++k) out.membership.set(pos + k);
    pos += run;
    v = !v;
  }
  if (pos != cells) throw bad("runs do not cover q^arity");
  return out;
}

DefinableSet decode_set(std::string_view text, const std::shared_ptr<const ffield::Field>& field) {
  EncodedSet e = decode_set(text);
  if (e.q != field->order() || e.order_hash != field->spec().order_hash())
    throw Error(ErrorCode::FieldMismatch, "encoded set was produced over a different field presentation");
  return DefinableSet(field, e.arity, std::move(e.membership));
}

}  // namespace qr::defform

#include "qr/defform.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace qr::defform {

namespace {

enum class Tok { zero, one, ident, plus, minus, star, eq, lparen, rparen, bang, amp, pipe, arrow, dot, exists, forall, end };

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::zero: return "'0'";
    case Tok::one: return "'1'";
    case Tok::ident: return "identifier";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::star: return "'*'";
    case Tok::eq: return "'='";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::bang: return "'!'";
    case Tok::amp: return "'&'";
    case Tok::pipe: return "'|'";
    case Tok::arrow: return "'->'";
    case Tok::dot: return "'.'";
    case Tok::exists: return "'exists'";
    case Tok::forall: return "'forall'";
    case Tok::end: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\'')) ++i;
      std::string word(s.substr(start, i - start));
      Tok kind = word == "exists" ? Tok::exists : word == "forall" ? Tok::forall : Tok::ident;
      out.push_back({kind, std::move(word), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      std::string num(s.substr(start, i - start));
      if (num == "0") out.push_back({Tok::zero, num, start});
      else if (num == "1") out.push_back({Tok::one, num, start});
      else throw ParseError(start, {"'0'", "'1'", "identifier"}, num);
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Tok::arrow, "->", start});
      i += 2;
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::plus; break;
      case '-': kind = Tok::minus; break;
      case '*': kind = Tok::star; break;
      case '=': kind = Tok::eq; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      case '!': kind = Tok::bang; break;
      case '&': kind = Tok::amp; break;
      case '|': kind = Tok::pipe; break;
      case '.': kind = Tok::dot; break;
      default: throw ParseError(start, {"token"}, std::string(1, c));
    }
    out.push_back({kind, std::string(1, c), start});
    ++i;
  }
  out.push_back({Tok::end, "", s.size()});
  return out;
}

using TermPtr = std::shared_ptr<const TermNode>;
using FormPtr = std::shared_ptr<const FormulaNode>;

TermPtr make_term(TermNode::Kind k, TermPtr l = nullptr, TermPtr r = nullptr, std::string name = {}) {
  auto t = std::make_shared<TermNode>();
  t->kind = k;
  t->lhs = std::move(l);
  t->rhs = std::move(r);
  t->name = std::move(name);
  return t;
}

FormPtr make_form(FormulaNode::Kind k, FormPtr l = nullptr, FormPtr r = nullptr) {
  auto f = std::make_shared<FormulaNode>();
  f->kind = k;
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}

struct Backtrack {};

// Recursive descent with backtracking between "term = term" and "(formula)".
// The furthest failure is kept for the error message.
class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  FormPtr parse_all() {
    try {
      FormPtr f = formula();
      expect(Tok::end);
      return f;
    } catch (const Backtrack&) {
      std::vector<std::string> exp(expected_.begin(), expected_.end());
      const Token& t = toks_[std::min(fail_pos_, toks_.size() - 1)];
      throw ParseError(t.pos, exp, t.kind == Tok::end ? "end of input" : t.text);
    }
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }

  [[noreturn]] void fail(std::initializer_list<Tok> wanted) {
    if (pos_ > fail_pos_) {
      fail_pos_ = pos_;
      expected_.clear();
    }
    if (pos_ == fail_pos_)
      for (Tok w : wanted) expected_.insert(tok_name(w));
    throw Backtrack{};
  }

  const Token& expect(Tok k) {
    if (!at(k)) fail({k});
    return toks_[pos_++];
  }

  FormPtr formula() {
    FormPtr lhs = disjunction();
    if (at(Tok::arrow)) {
      ++pos_;
      FormPtr rhs = formula();
      return make_form(FormulaNode::Kind::disj, make_form(FormulaNode::Kind::neg, lhs), rhs);
    }
    return lhs;
  }

  FormPtr disjunction() {
    FormPtr f = conjunction();
    while (at(Tok::pipe)) {
      ++pos_;
      f = make_form(FormulaNode::Kind::disj, f, conjunction());
    }
    return f;
  }

  FormPtr conjunction() {
    FormPtr f = unary();
    while (at(Tok::amp)) {
      ++pos_;
      f = make_form(FormulaNode::Kind::conj, f, unary());
    }
    return f;
  }

  FormPtr unary() {
    if (at(Tok::bang)) {
      ++pos_;
      return make_form(FormulaNode::Kind::neg, unary());
    }
    if (at(Tok::exists) || at(Tok::forall)) {
      const bool ex = at(Tok::exists);
      ++pos_;
      std::string var = expect(Tok::ident).text;
      expect(Tok::dot);
      auto f = std::make_shared<FormulaNode>();
      f->kind = ex ? FormulaNode::Kind::exists : FormulaNode::Kind::forall;
      f->bound = std::move(var);
      f->left = formula();
      return f;
    }
    return primary();
  }

  FormPtr primary() {
    const std::size_t save = pos_;
    try {
      TermPtr l = term();
      expect(Tok::eq);
      TermPtr r = term();
      auto f = std::make_shared<FormulaNode>();
      f->kind = FormulaNode::Kind::eq;
      f->left_term = std::move(l);
      f->right_term = std::move(r);
      return f;
    } catch (const Backtrack&) {
      pos_ = save;
      if (!at(Tok::lparen)) fail({Tok::lparen, Tok::bang, Tok::exists, Tok::forall});
    }
    ++pos_;
    FormPtr f = formula();
    expect(Tok::rparen);
    return f;
  }

  TermPtr term() {
    TermPtr t = product();
    while (at(Tok::plus) || at(Tok::minus)) {
      const bool plus = at(Tok::plus);
      ++pos_;
      t = make_term(plus ? TermNode::Kind::add : TermNode::Kind::sub, t, product());
    }
    return t;
  }

  TermPtr product() {
    TermPtr t = factor();
    while (at(Tok::star)) {
      ++pos_;
      t = make_term(TermNode::Kind::mul, t, factor());
    }
    return t;
  }

  TermPtr factor() {
    switch (peek().kind) {
      case Tok::zero: ++pos_; return make_term(TermNode::Kind::zero);
      case Tok::one: ++pos_; return make_term(TermNode::Kind::one);
      case Tok::ident: {
        std::string name = peek().text;
        ++pos_;
        return make_term(TermNode::Kind::var, nullptr, nullptr, std::move(name));
      }
      case Tok::lparen: {
        ++pos_;
        TermPtr t = term();
        expect(Tok::rparen);
        return t;
      }
      default: fail({Tok::zero, Tok::one, Tok::ident, Tok::lparen});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t fail_pos_ = 0;
  std::set<std::string> expected_;
};

struct Resolver {
  const std::set<std::string>& params;
  const std::optional<std::vector<std::string>>& declared;
  std::vector<std::string> free_vars;
  std::vector<std::string> used_params;
  std::vector<std::string> scope;

  void term(const TermNode& t) {
    if (t.kind == TermNode::Kind::var) {
      visit_name(t.name);
      return;
    }
    if (t.lhs) term(*t.lhs);
    if (t.rhs) term(*t.rhs);
  }

  void visit_name(const std::string& n) {
    if (std::find(scope.begin(), scope.end(), n) != scope.end()) return;
    if (params.count(n)) {
      if (std::find(used_params.begin(), used_params.end(), n) == used_params.end()) used_params.push_back(n);
      return;
    }
    if (declared) {
      if (std::find(declared->begin(), declared->end(), n) == declared->end())
        throw Error(ErrorCode::UnboundVariable, "identifier '" + n + "' is neither bound, a free variable, nor a parameter");
      return;
    }
    if (std::find(free_vars.begin(), free_vars.end(), n) == free_vars.end()) free_vars.push_back(n);
  }

  void form(const FormulaNode& f) {
    switch (f.kind) {
      case FormulaNode::Kind::eq:
        term(*f.left_term);
        term(*f.right_term);
        return;
      case FormulaNode::Kind::neg: form(*f.left); return;
      case FormulaNode::Kind::conj:
      case FormulaNode::Kind::disj:
        form(*f.left);
        form(*f.right);
        return;
      case FormulaNode::Kind::exists:
      case FormulaNode::Kind::forall:
        scope.push_back(f.bound);
        form(*f.left);
        scope.pop_back();
        return;
    }
  }
};

int term_prec(const TermNode& t) {
  switch (t.kind) {
    case TermNode::Kind::add:
    case TermNode::Kind::sub: return 1;
    case TermNode::Kind::mul: return 2;
    default: return 3;
  }
}

// Emits tokens of the canonical serialization; '.' goes to `out` only.
struct Serializer {
  std::vector<std::string> tokens;

  void term(const TermNode& t) {
    switch (t.kind) {
      case TermNode::Kind::zero: tokens.emplace_back("0"); return;
      case TermNode::Kind::one: tokens.emplace_back("1"); return;
      case TermNode::Kind::var: tokens.push_back(t.name); return;
      default: break;
    }
    const int p = term_prec(t);
    const char* op = t.kind == TermNode::Kind::add ? "+" : t.kind == TermNode::Kind::sub ? "-" : "*";
    sub_term(*t.lhs, term_prec(*t.lhs) < p);
    tokens.emplace_back(op);
    sub_term(*t.rhs, term_prec(*t.rhs) <= p);
  }

  void sub_term(const TermNode& t, bool parens) {
    if (parens) tokens.emplace_back("(");
    term(t);
    if (parens) tokens.emplace_back(")");
  }

  void form(const FormulaNode& f) {
    switch (f.kind) {
      case FormulaNode::Kind::eq:
        term(*f.left_term);
        tokens.emplace_back("=");
        term(*f.right_term);
        return;
      case FormulaNode::Kind::neg:
        tokens.emplace_back("!");
        form(*f.left);
        return;
      case FormulaNode::Kind::conj:
      case FormulaNode::Kind::disj:
        tokens.emplace_back("(");
        form(*f.left);
        tokens.emplace_back(f.kind == FormulaNode::Kind::conj ? "&" : "|");
        form(*f.right);
        tokens.emplace_back(")");
        return;
      case FormulaNode::Kind::exists:
      case FormulaNode::Kind::forall:
        tokens.emplace_back(f.kind == FormulaNode::Kind::exists ? "exists" : "forall");
        tokens.push_back(f.bound);
        tokens.emplace_back(".");
        form(*f.left);
        return;
    }
  }
};

std::size_t term_tokens(const TermNode& t) {
  if (t.kind == TermNode::Kind::zero || t.kind == TermNode::Kind::one || t.kind == TermNode::Kind::var) return 1;
  const int p = term_prec(t);
  std::size_t n = term_tokens(*t.lhs) + 1 + term_tokens(*t.rhs);
  if (term_prec(*t.lhs) < p) n += 2;
  if (term_prec(*t.rhs) <= p) n += 2;
  return n;
}

std::size_t form_tokens(const FormulaNode& f) {
  switch (f.kind) {
    case FormulaNode::Kind::eq: return term_tokens(*f.left_term) + 1 + term_tokens(*f.right_term);
    case FormulaNode::Kind::neg: return 1 + form_tokens(*f.left);
    case FormulaNode::Kind::conj:
    case FormulaNode::Kind::disj: return form_tokens(*f.left) + form_tokens(*f.right) + 3;
    case FormulaNode::Kind::exists:
    case FormulaNode::Kind::forall: return 2 + form_tokens(*f.left);
  }
  return 0;
}

}  // namespace

ParseError::ParseError(std::size_t position, std::vector<std::string> expected, const std::string& found)
    : Error(ErrorCode::SyntaxError,
            [&] {
              std::ostringstream os;
              os << "at position " << position << ": found " << (found.empty() ? "nothing" : "'" + found + "'")
                 << ", expected one of";
              for (const auto& e : expected) os << " " << e;
              return os.str();
            }()),
      position_(position),
      expected_(std::move(expected)) {}

Formula::Formula(std::shared_ptr<const FormulaNode> root, std::vector<std::string> free_vars,
                 std::vector<std::string> param_vars)
    : root_(std::move(root)), free_vars_(std::move(free_vars)), param_vars_(std::move(param_vars)) {}

Formula parse(std::string_view text, const ParseOptions& options) {
  Parser parser(lex(text));
  FormPtr root = parser.parse_all();
  std::set<std::string> params(options.params.begin(), options.params.end());
  if (options.free_vars)
    for (const auto& v : *options.free_vars)
      if (params.count(v)) throw Error(ErrorCode::InvalidArgument, "'" + v + "' declared both free and parameter");
  Resolver r{params, options.free_vars, {}, {}, {}};
  r.form(*root);
  std::vector<std::string> free = options.free_vars ? *options.free_vars : r.free_vars;
  // Parameter order follows the caller's list, restricted to those used.
  std::vector<std::string> used;
  for (const auto& p : options.params)
    if (std::find(r.used_params.begin(), r.used_params.end(), p) != r.used_params.end()) used.push_back(p);
  return Formula(std::move(root), std::move(free), std::move(used));
}

std::string serialize(const Formula& f) {
  Serializer s;
  s.form(f.root());
  std::string out;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const std::string& t = s.tokens[i];
    if (t == ".") {
      out += ". ";
      continue;
    }
    if (!out.empty() && out.back() != ' ' && out.back() != '(' && out.back() != '!' && t != ")") out += ' ';
    out += t;
  }
  return out;
}

std::size_t complexity(const Formula& f) { return form_tokens(f.root()); }

Assignment parse_assignment(std::string_view text) {
  Assignment out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(start, comma - start);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw Error(ErrorCode::InvalidArgument, "parameter assignment must look like name=value");
    std::string name(item.substr(0, eq));
    std::string_view val = item.substr(eq + 1);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc{} || ptr != val.data() + val.size() || val.empty())
      throw Error(ErrorCode::InvalidArgument, "bad parameter value for '" + name + "'");
    out[name] = v;
    start = comma + 1;
  }
  return out;
}

}  // namespace qr::defform

#include "bmerge/formula.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <unordered_set>
#include <utility>

#include "bmerge/error.hpp"

namespace bmerge {

struct Formula::Node {
  Op op;
  std::string name;
  Formula a;
  Formula b;
};

Formula::Formula() : node_(nullptr) {}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::var(std::string name) {
  return Formula(std::make_shared<const Node>(Node{Op::Var, std::move(name), {}, {}}));
}

Formula Formula::constant(bool value) {
  if (value) return Formula();
  return Formula(std::make_shared<const Node>(Node{Op::False, {}, {}, {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Op::Not, {}, std::move(f), {}}));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  return Formula(
      std::make_shared<const Node>(Node{Op::And, {}, std::move(lhs), std::move(rhs)}));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  return Formula(
      std::make_shared<const Node>(Node{Op::Or, {}, std::move(lhs), std::move(rhs)}));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{Op::Implies, {}, std::move(lhs), std::move(rhs)}));
}

Formula Formula::iff(Formula lhs, Formula rhs) {
  return Formula(
      std::make_shared<const Node>(Node{Op::Iff, {}, std::move(lhs), std::move(rhs)}));
}

// A null node stands for `true` so that default construction is cheap.
Op Formula::op() const { return node_ ? node_->op : Op::True; }

const std::string& Formula::name() const {
  static const std::string empty;
  return node_ ? node_->name : empty;
}

const Formula& Formula::lhs() const {
  static const Formula none;
  return node_ ? node_->a : none;
}

const Formula& Formula::rhs() const {
  static const Formula none;
  return node_ ? node_->b : none;
}

bool Formula::is_literal() const {
  return op() == Op::Var || (op() == Op::Not && lhs().op() == Op::Var);
}

std::vector<std::string> Formula::variables() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::vector<const Formula*> stack{this};
  // Explicit stack, pushing right before left so that left is visited first.
  while (!stack.empty()) {
    const Formula* f = stack.back();
    stack.pop_back();
    switch (f->op()) {
      case Op::Var:
        if (seen.insert(f->name()).second) out.push_back(f->name());
        break;
      case Op::True:
      case Op::False:
        break;
      case Op::Not:
        stack.push_back(&f->lhs());
        break;
      default:
        stack.push_back(&f->rhs());
        stack.push_back(&f->lhs());
        break;
    }
  }
  return out;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Var:
      return a.name() == b.name();
    case Op::True:
    case Op::False:
      return true;
    case Op::Not:
      return a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

Formula operator!(const Formula& f) { return Formula::negation(f); }
Formula operator&(const Formula& a, const Formula& b) { return Formula::conj(a, b); }
Formula operator|(const Formula& a, const Formula& b) { return Formula::disj(a, b); }

Formula conjunction(std::span<const Formula> parts) {
  if (parts.empty()) return Formula::constant(true);
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::conj(out, parts[i]);
  return out;
}

Formula disjunction(std::span<const Formula> parts) {
  if (parts.empty()) return Formula::constant(false);
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::disj(out, parts[i]);
  return out;
}

// {{{ Printing

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not: return 5;
    default: return 6;
  }
}

void print(const Formula& f, int min_prec, std::string& out) {
  const int prec = precedence(f.op());
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f.op()) {
    case Op::Var: out += f.name(); break;
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Not:
      out += '!';
      print(f.lhs(), 5, out);
      break;
    case Op::And:
      print(f.lhs(), 4, out);
      out += " & ";
      print(f.rhs(), 5, out);
      break;
    case Op::Or:
      print(f.lhs(), 3, out);
      out += " | ";
      print(f.rhs(), 4, out);
      break;
    case Op::Implies:
      print(f.lhs(), 3, out);
      out += " -> ";
      print(f.rhs(), 2, out);
      break;
    case Op::Iff:
      print(f.lhs(), 2, out);
      out += " <-> ";
      print(f.rhs(), 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string Formula::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

// }}}

// {{{ Parsing

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, Iff, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const std::size_t line = line_, col = col_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          id += text_[pos_];
          advance();
        }
        Tok kind = Tok::Ident;
        if (id == "true") kind = Tok::True;
        if (id == "false") kind = Tok::False;
        out.push_back({kind, std::move(id), line, col});
        continue;
      }
      if (c == '!') { advance(); out.push_back({Tok::Not, "!", line, col}); continue; }
      if (c == '&') { advance(); out.push_back({Tok::And, "&", line, col}); continue; }
      if (c == '|') { advance(); out.push_back({Tok::Or, "|", line, col}); continue; }
      if (c == '(') { advance(); out.push_back({Tok::LParen, "(", line, col}); continue; }
      if (c == ')') { advance(); out.push_back({Tok::RParen, ")", line, col}); continue; }
      if (text_.substr(pos_, 2) == "->") {
        advance(); advance();
        out.push_back({Tok::Implies, "->", line, col});
        continue;
      }
      if (text_.substr(pos_, 3) == "<->") {
        advance(); advance(); advance();
        out.push_back({Tok::Iff, "<->", line, col});
        continue;
      }
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Formula parse() {
    if (peek().kind == Tok::End) throw ParseError("empty input", peek().line, peek().column);
    Formula f = parse_iff();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, peek().line, peek().column);
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    if (peek().kind == Tok::Iff) {
      take();
      return Formula::iff(lhs, parse_iff());
    }
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (peek().kind == Tok::Implies) {
      take();
      return Formula::implies(lhs, parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (peek().kind == Tok::Or) {
      take();
      lhs = Formula::disj(lhs, parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (peek().kind == Tok::And) {
      take();
      lhs = Formula::conj(lhs, parse_unary());
    }
    return lhs;
  }

  Formula parse_unary() {
    if (peek().kind == Tok::Not) {
      take();
      return Formula::negation(parse_unary());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    switch (peek().kind) {
      case Tok::Ident: return Formula::var(take().text);
      case Tok::True: take(); return Formula::constant(true);
      case Tok::False: take(); return Formula::constant(false);
      case Tok::LParen: {
        take();
        Formula inner = parse_iff();
        if (peek().kind != Tok::RParen) fail("expected ')'");
        take();
        return inner;
      }
      case Tok::End: fail("unexpected end of input");
      default: fail("unexpected '" + peek().text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(Lexer(text).run()).parse(); }

// }}}

// {{{ Clausal classification

namespace {

std::optional<Literal> as_literal(const Formula& f) {
  if (f.op() == Op::Var) return Literal{f.name(), true};
  if (f.op() == Op::Not && f.lhs().op() == Op::Var) return Literal{f.lhs().name(), false};
  return std::nullopt;
}

bool collect_clause(const Formula& f, std::vector<Literal>& out) {
  if (f.op() == Op::Or) return collect_clause(f.lhs(), out) && collect_clause(f.rhs(), out);
  if (f.op() == Op::False) return true;  // empty disjunct
  auto lit = as_literal(f);
  if (!lit) return false;
  out.push_back(*lit);
  return true;
}

bool collect_cnf(const Formula& f, std::vector<std::vector<Literal>>& out) {
  if (f.op() == Op::And) return collect_cnf(f.lhs(), out) && collect_cnf(f.rhs(), out);
  if (f.op() == Op::True) return true;
  std::vector<Literal> clause;
  if (!collect_clause(f, clause)) return false;
  out.push_back(std::move(clause));
  return true;
}

}  // namespace

std::vector<std::vector<Literal>> clauses_of(const Formula& f) {
  std::vector<std::vector<Literal>> out;
  if (!collect_cnf(f, out)) return {};
  return out;
}

ClauseClass classify(const Formula& f) {
  std::vector<std::vector<Literal>> clauses;
  ClauseClass c;
  if (!collect_cnf(f, clauses)) return c;
  c.cnf = true;
  c.literal_conjunction = true;
  c.horn = true;
  c.krom = true;
  for (const auto& clause : clauses) {
    const auto positives =
        std::count_if(clause.begin(), clause.end(), [](const Literal& l) { return l.positive; });
    if (clause.size() != 1) c.literal_conjunction = false;
    if (positives > 1) c.horn = false;
    if (clause.size() > 2) c.krom = false;
  }
  return c;
}

FormulaKind most_specific(const ClauseClass& c) {
  if (!c.cnf) return FormulaKind::General;
  if (c.literal_conjunction) return FormulaKind::LiteralConjunction;
  if (c.horn) return FormulaKind::Horn;
  if (c.krom) return FormulaKind::Krom;
  return FormulaKind::General;
}

Formula literal_formula(const Literal& l) {
  Formula v = Formula::var(l.name);
  return l.positive ? v : Formula::negation(v);
}

// }}}

}  // namespace bmerge

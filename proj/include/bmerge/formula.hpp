#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bmerge {

enum class Op : std::uint8_t { Var, True, False, Not, And, Or, Implies, Iff };

// Immutable propositional formula. Copies share structure.
class Formula {
 public:
  Formula();  // the constant `true`

  static Formula var(std::string name);
  static Formula constant(bool value);
  static Formula negation(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);

  Op op() const;
  // Only meaningful for Op::Var.
  const std::string& name() const;
  // Operand of Not, or left operand of a binary connective.
  const Formula& lhs() const;
  const Formula& rhs() const;

  bool is_literal() const;

  // Variable names in order of first occurrence (left to right).
  std::vector<std::string> variables() const;

  std::string to_string() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Formula operator!(const Formula& f);
Formula operator&(const Formula& a, const Formula& b);
Formula operator|(const Formula& a, const Formula& b);

// Left-folded conjunction / disjunction; empty input yields true / false.
Formula conjunction(std::span<const Formula> parts);
Formula disjunction(std::span<const Formula> parts);

// Grammar: identifiers, true, false, ! & | -> <-> and parentheses.
// Precedence from tightest: ! & | -> <->; -> and <-> associate to the right.
Formula parse_formula(std::string_view text);

// Syntactic clause classes; meaningful only when `cnf` holds.
struct ClauseClass {
  bool cnf = false;
  bool literal_conjunction = false;
  bool horn = false;
  bool krom = false;
};

enum class FormulaKind { LiteralConjunction, Horn, Krom, General };

ClauseClass classify(const Formula& f);
FormulaKind most_specific(const ClauseClass& c);

// A literal is a variable name and a sign.
struct Literal {
  std::string name;
  bool positive = true;
  friend bool operator==(const Literal&, const Literal&) = default;
};

// Clauses of a formula in CNF shape; empty result for non-CNF input is not
// distinguishable from `true`, so check classify().cnf first.
std::vector<std::vector<Literal>> clauses_of(const Formula& f);

Formula literal_formula(const Literal& l);

}  // namespace bmerge

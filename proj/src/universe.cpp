#include "bmerge/universe.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <unordered_set>

#include "bmerge/error.hpp"

namespace bmerge {

namespace {

std::atomic<std::size_t> g_enumeration_cap{22};

constexpr std::size_t kHardLimit = 62;

}  // namespace

std::size_t enumeration_cap() { return g_enumeration_cap.load(); }

void set_enumeration_cap(std::size_t cap) {
  if (cap > kHardLimit) {
    throw PreconditionError("enumeration cap above " + std::to_string(kHardLimit));
  }
  g_enumeration_cap.store(cap);
}

// {{{ Universe

Universe::Universe(std::vector<std::string> names) : names_(std::move(names)) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw PreconditionError("duplicate variable '" + n + "'");
  }
}

Universe Universe::of(std::span<const Formula> formulas) {
  std::vector<std::string> names;
  std::unordered_set<std::string> seen;
  for (const auto& f : formulas) {
    for (auto& v : f.variables()) {
      if (seen.insert(v).second) names.push_back(std::move(v));
    }
  }
  return Universe(std::move(names));
}

Universe Universe::of(std::initializer_list<Formula> formulas) {
  return of(std::span<const Formula>(formulas.begin(), formulas.size()));
}

std::optional<std::size_t> Universe::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

bool Universe::covers(const Formula& f) const {
  for (const auto& v : f.variables()) {
    if (!index_of(v)) return false;
  }
  return true;
}

Universe Universe::extended(const Formula& f) const {
  std::vector<std::string> names = names_;
  for (auto& v : f.variables()) {
    if (!index_of(v)) names.push_back(std::move(v));
  }
  return Universe(std::move(names));
}

std::uint64_t Universe::interpretation_count() const {
  if (names_.size() > enumeration_cap()) {
    throw CapExceeded("universe of " + std::to_string(names_.size()) +
                      " variables exceeds the enumeration cap of " +
                      std::to_string(enumeration_cap()));
  }
  return std::uint64_t{1} << names_.size();
}

// }}}

// {{{ Interpretation

Interpretation::Interpretation(Universe universe, std::uint64_t bits)
    : universe_(std::move(universe)), bits_(bits) {
  if (universe_.size() > kHardLimit) throw CapExceeded("universe too large for a bit vector");
  if (universe_.size() < 64 && (bits_ >> universe_.size()) != 0) {
    throw PreconditionError("interpretation bits outside the universe");
  }
}

Interpretation Interpretation::from_values(Universe universe, const std::vector<bool>& values) {
  if (values.size() != universe.size()) {
    throw PreconditionError("interpretation must assign every universe variable");
  }
  std::uint64_t bits = 0;
  for (bool v : values) bits = (bits << 1) | (v ? 1U : 0U);
  return Interpretation(std::move(universe), bits);
}

bool Interpretation::value(std::size_t i) const { return bit_value(bits_, universe_.size(), i); }

bool Interpretation::value(std::string_view name) const {
  auto i = universe_.index_of(name);
  if (!i) throw UnboundVariable("variable '" + std::string(name) + "' not in the universe");
  return value(*i);
}

std::string Interpretation::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < universe_.size(); ++i) {
    if (i) out += ',';
    out += universe_.name(i);
    out += value(i) ? ":1" : ":0";
  }
  return out + "}";
}

// }}}

// {{{ Compiled evaluation

CompiledFormula::CompiledFormula(const Formula& f, const Universe& u) {
  const std::size_t n = u.size();
  std::size_t depth = 0;
  // Post-order walk with an explicit stack: (node, children_done).
  std::vector<std::pair<const Formula*, bool>> stack{{&f, false}};
  while (!stack.empty()) {
    auto [node, done] = stack.back();
    stack.pop_back();
    const Op op = node->op();
    if (!done && (op == Op::Not || op == Op::And || op == Op::Or || op == Op::Implies ||
                  op == Op::Iff)) {
      stack.push_back({node, true});
      if (op != Op::Not) stack.push_back({&node->rhs(), false});
      stack.push_back({&node->lhs(), false});
      continue;
    }
    Instr ins{op, 0};
    switch (op) {
      case Op::Var: {
        auto i = u.index_of(node->name());
        if (!i) throw UnboundVariable("variable '" + node->name() + "' not in the universe");
        ins.shift = static_cast<std::uint32_t>(n - 1 - *i);
        ++depth;
        break;
      }
      case Op::True:
      case Op::False:
        ++depth;
        break;
      case Op::Not:
        break;
      default:
        --depth;
        break;
    }
    max_depth_ = std::max(max_depth_, depth);
    code_.push_back(ins);
  }
}

bool CompiledFormula::operator()(std::uint64_t bits) const {
  std::array<bool, 64> small{};
  std::vector<bool> large;
  const bool use_small = max_depth_ <= small.size();
  if (!use_small) large.resize(max_depth_);
  std::size_t top = 0;
  auto push = [&](bool v) {
    if (use_small) small[top++] = v; else large[top++] = v;
  };
  auto pop = [&]() -> bool { return use_small ? small[--top] : large[--top]; };
  for (const Instr& ins : code_) {
    switch (ins.op) {
      case Op::Var: push((bits >> ins.shift) & 1U); break;
      case Op::True: push(true); break;
      case Op::False: push(false); break;
      case Op::Not: push(!pop()); break;
      case Op::And: { bool b = pop(), a = pop(); push(a && b); break; }
      case Op::Or: { bool b = pop(), a = pop(); push(a || b); break; }
      case Op::Implies: { bool b = pop(), a = pop(); push(!a || b); break; }
      case Op::Iff: { bool b = pop(), a = pop(); push(a == b); break; }
    }
  }
  return pop();
}

std::vector<bool> truth_table(const Formula& f, const Universe& u) {
  const std::uint64_t count = u.interpretation_count();
  CompiledFormula cf(f, u);
  std::vector<bool> table(count);
  for (std::uint64_t b = 0; b < count; ++b) table[b] = cf(b);
  return table;
}

bool evaluate(const Formula& f, const Interpretation& i) {
  return CompiledFormula(f, i.universe())(i.bits());
}

std::vector<Interpretation> models(const Formula& f, const Universe& u) {
  const std::uint64_t count = u.interpretation_count();
  CompiledFormula cf(f, u);
  std::vector<Interpretation> out;
  for (std::uint64_t b = 0; b < count; ++b) {
    if (cf(b)) out.emplace_back(u, b);
  }
  return out;
}

bool is_satisfiable(const Formula& f, const Universe& u) {
  const std::uint64_t count = u.interpretation_count();
  CompiledFormula cf(f, u);
  for (std::uint64_t b = 0; b < count; ++b) {
    if (cf(b)) return true;
  }
  return false;
}

bool entails(const Formula& f, const Formula& g, const Universe& u) {
  const std::uint64_t count = u.interpretation_count();
  CompiledFormula cf(f, u), cg(g, u);
  for (std::uint64_t b = 0; b < count; ++b) {
    if (cf(b) && !cg(b)) return false;
  }
  return true;
}

bool equivalent(const Formula& f, const Formula& g, const Universe& u) {
  const std::uint64_t count = u.interpretation_count();
  CompiledFormula cf(f, u), cg(g, u);
  for (std::uint64_t b = 0; b < count; ++b) {
    if (cf(b) != cg(b)) return false;
  }
  return true;
}

bool is_satisfiable(const Formula& f) { return is_satisfiable(f, Universe::of({f})); }
bool entails(const Formula& f, const Formula& g) { return entails(f, g, Universe::of({f, g})); }
bool equivalent(const Formula& f, const Formula& g) {
  return equivalent(f, g, Universe::of({f, g}));
}

// }}}

// {{{ ModelSet

ModelSet::ModelSet(Universe universe, std::vector<std::uint64_t> bits)
    : universe_(std::move(universe)), bits_(std::move(bits)) {
  std::sort(bits_.begin(), bits_.end());
  bits_.erase(std::unique(bits_.begin(), bits_.end()), bits_.end());
}

ModelSet ModelSet::of(const Formula& f, const Universe& u) {
  const std::uint64_t count = u.interpretation_count();
  CompiledFormula cf(f, u);
  std::vector<std::uint64_t> bits;
  for (std::uint64_t b = 0; b < count; ++b) {
    if (cf(b)) bits.push_back(b);
  }
  return ModelSet(u, std::move(bits));
}

bool ModelSet::contains(std::uint64_t bits) const {
  return std::binary_search(bits_.begin(), bits_.end(), bits);
}

std::vector<Interpretation> ModelSet::interpretations() const {
  std::vector<Interpretation> out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.emplace_back(universe_, b);
  return out;
}

Formula minterm(const Universe& u, std::uint64_t bits) {
  std::vector<Formula> lits;
  for (std::size_t i = 0; i < u.size(); ++i) {
    Formula v = Formula::var(u.name(i));
    lits.push_back(bit_value(bits, u.size(), i) ? v : Formula::negation(v));
  }
  return conjunction(lits);
}

Formula ModelSet::to_dnf() const {
  std::vector<Formula> terms;
  for (auto b : bits_) terms.push_back(minterm(universe_, b));
  return disjunction(terms);
}

// }}}

}  // namespace bmerge

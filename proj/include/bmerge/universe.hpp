#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bmerge/formula.hpp"

namespace bmerge {

// Largest universe that model enumeration accepts. Defaults to 22 variables.
std::size_t enumeration_cap();
void set_enumeration_cap(std::size_t cap);

// Ordered list of distinct variable names.
class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<std::string> names);

  // Union of the variables of `formulas`, in order of first occurrence.
  static Universe of(std::span<const Formula> formulas);
  static Universe of(std::initializer_list<Formula> formulas);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool covers(const Formula& f) const;
  // This universe followed by the variables of `f` it does not contain yet.
  Universe extended(const Formula& f) const;

  // Number of interpretations; throws CapExceeded above enumeration_cap().
  std::uint64_t interpretation_count() const;

  friend bool operator==(const Universe&, const Universe&) = default;

 private:
  std::vector<std::string> names_;
};

// Total assignment over a universe. Variable i is stored at bit (n-1-i), so
// that increasing `bits` enumerates value vectors lexicographically with
// false < true.
class Interpretation {
 public:
  Interpretation(Universe universe, std::uint64_t bits);
  static Interpretation from_values(Universe universe, const std::vector<bool>& values);

  const Universe& universe() const { return universe_; }
  std::uint64_t bits() const { return bits_; }
  bool value(std::size_t i) const;
  bool value(std::string_view name) const;

  // e.g. "{a:1,b:0}"
  std::string to_string() const;

  friend bool operator==(const Interpretation&, const Interpretation&) = default;

 private:
  Universe universe_;
  std::uint64_t bits_;
};

inline bool bit_value(std::uint64_t bits, std::size_t n, std::size_t i) {
  return (bits >> (n - 1 - i)) & 1U;
}

// Formula lowered to a postfix program over universe positions.
class CompiledFormula {
 public:
  CompiledFormula(const Formula& f, const Universe& u);

  bool operator()(std::uint64_t bits) const;

 private:
  struct Instr {
    Op op;
    std::uint32_t shift;  // Var: bit position
  };
  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
};

// Truth table indexed by interpretation bits.
std::vector<bool> truth_table(const Formula& f, const Universe& u);

bool evaluate(const Formula& f, const Interpretation& i);

// All models over `u`, in lexicographic order of value vectors.
std::vector<Interpretation> models(const Formula& f, const Universe& u);

bool is_satisfiable(const Formula& f);
bool entails(const Formula& f, const Formula& g);
bool equivalent(const Formula& f, const Formula& g);
bool is_satisfiable(const Formula& f, const Universe& u);
bool entails(const Formula& f, const Formula& g, const Universe& u);
bool equivalent(const Formula& f, const Formula& g, const Universe& u);

// A set of interpretations over one universe, kept sorted.
class ModelSet {
 public:
  ModelSet(Universe universe, std::vector<std::uint64_t> bits);
  static ModelSet of(const Formula& f, const Universe& u);

  const Universe& universe() const { return universe_; }
  const std::vector<std::uint64_t>& bits() const { return bits_; }
  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool contains(std::uint64_t bits) const;

  std::vector<Interpretation> interpretations() const;
  // One minterm per model over the whole universe; `false` when empty.
  Formula to_dnf() const;

  friend bool operator==(const ModelSet&, const ModelSet&) = default;

 private:
  Universe universe_;
  std::vector<std::uint64_t> bits_;
};

// Conjunction of literals fixing every universe variable to its value in `bits`.
Formula minterm(const Universe& u, std::uint64_t bits);

}  // namespace bmerge

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bmerge/formula.hpp"
#include "bmerge/universe.hpp"

namespace bmerge {

// Set of 0-based base indices, bit i standing for base i.
using IndexSet = std::uint32_t;

constexpr std::size_t kMaxBases = 32;

std::vector<std::size_t> indices_of(IndexSet s);
IndexSet index_set(std::initializer_list<std::size_t> indices);
IndexSet index_set(std::span<const std::size_t> indices);

inline bool is_subset(IndexSet a, IndexSet b) { return (a & ~b) == 0; }

// Lexicographic order on the sorted index lists, e.g. {0,1} < {0,2} < {1}.
bool index_set_less(IndexSet a, IndexSet b);
void sort_index_sets(std::vector<IndexSet>& sets);

// "{K1,K3}" with the given names, or 1-based numbers when names are empty.
std::string format_index_set(IndexSet s, std::span<const std::string> names = {});

// Conjunction of the member bases.
Formula conjunction_of(IndexSet s, std::span<const Formula> bases);

// For every interpretation of `u`, the set of bases it satisfies. Throws
// UnsatisfiableBase when some base has no model.
std::vector<IndexSet> satisfied_sets(std::span<const Formula> bases, const Universe& u);

struct Maxset {
  IndexSet members = 0;
  std::uint64_t witness = 0;  // first model (lexicographic) of the members
};

struct MaxsetFamily {
  Universe universe;
  std::size_t base_count = 0;
  std::vector<Maxset> sets;  // canonical order

  std::vector<IndexSet> members() const;
};

// Throws UnsatisfiableBase (with index) and PreconditionError for m = 0.
MaxsetFamily maxsets(std::span<const Formula> bases);
MaxsetFamily maxsets(std::span<const Formula> bases, const Universe& u);

IndexSet maxset_of_model(const Interpretation& i, std::span<const Formula> bases);

struct OrOfMaxsetsCheck {
  bool holds = true;
  std::optional<Interpretation> counterexample;
};

OrOfMaxsetsCheck is_or_of_maxsets(const Formula& r, std::span<const Formula> bases);

struct SelectedSplit {
  std::vector<IndexSet> selected;
  std::vector<IndexSet> excluded;
};

// A maxset is selected iff its conjunction is consistent with r.
SelectedSplit split_selected(const Formula& r, const MaxsetFamily& fam,
                             std::span<const Formula> bases);

// Family of letter sets, none contained in another.
struct LetterFamily {
  std::vector<std::vector<std::string>> sets;
};

struct Synthesis {
  std::vector<std::string> letters;    // first-occurrence order
  std::vector<Formula> formulas;       // one per letter
  std::vector<std::string> variables;  // fresh variables used
};

// One formula per letter whose maxsets are exactly the letter sets.
Synthesis synthesize(const LetterFamily& lf);

}  // namespace bmerge

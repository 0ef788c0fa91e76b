#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bmerge/distance.hpp"
#include "bmerge/formula.hpp"
#include "bmerge/universe.hpp"

namespace bmerge::cli {

// A merging problem as read from a profile file:
//
//   # comment
//   metric: drastic
//   universe: a, b
//   base K1: a
//   base K2: !a & b
//   target: !a & b
struct Profile {
  std::vector<std::string> names;
  std::vector<Formula> bases;
  std::optional<Formula> target;
  Metric metric = Metric::Hamming;
  std::optional<Universe> universe;  // explicit variable order, if given

  // Explicit universe, or the variables of the bases (and target when asked).
  Universe universe_of(bool with_target) const;
  const Formula& require_target() const;
};

// Throws PreconditionError (with the offending line) on malformed input,
// duplicate names, unsatisfiable bases or an explicit universe that misses
// variables.
Profile parse_profile(std::string_view text);
Profile load_profile(const std::string& path);

}  // namespace bmerge::cli

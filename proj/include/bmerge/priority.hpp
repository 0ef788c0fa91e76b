#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bmerge/formula.hpp"
#include "bmerge/maxsets.hpp"

namespace bmerge {

// Brute-force searches refuse profiles with more bases than this. Default 7.
std::size_t bruteforce_cap();
void set_bruteforce_cap(std::size_t cap);

// Ordered partition of the base indices 0..m-1; class 0 is the most reliable.
class PriorityPartition {
 public:
  PriorityPartition(std::vector<IndexSet> classes, std::size_t base_count);

  static PriorityPartition single_class(std::size_t base_count);

  // Text form "1:K1,K3;2:K2". Class numbers must be 1..k, each used once.
  static PriorityPartition parse(std::string_view text, std::span<const std::string> names);
  std::string format(std::span<const std::string> names = {}) const;

  const std::vector<IndexSet>& classes() const { return classes_; }
  std::size_t class_count() const { return classes_.size(); }
  std::size_t base_count() const { return base_count_; }
  // 1-based class number of base `i`.
  std::size_t class_of(std::size_t i) const;

  friend bool operator==(const PriorityPartition&, const PriorityPartition&) = default;

 private:
  std::vector<IndexSet> classes_;
  std::size_t base_count_;
};

enum class SetComparison { Equal, Less, Greater, Incomparable };

std::string_view to_string(SetComparison c);

// Less means `l` is preferred to `n`.
SetComparison compare(IndexSet l, IndexSet n, const PriorityPartition& p);

// Sets not dominated by another set of the list, in input order.
std::vector<IndexSet> minimal_sets(std::span<const IndexSet> sets, const PriorityPartition& p);

std::vector<IndexSet> minimal_maxsets(const MaxsetFamily& fam, const PriorityPartition& p);

// Disjunction of the conjunctions of the minimal maxsets.
Formula merge_priority(std::span<const Formula> bases, const PriorityPartition& p);

// All ordered partitions of m bases with at most `max_classes` classes,
// ordered by class count and then lexicographically by the class of each
// base. The callback returns false to stop.
void for_each_partition(std::size_t m, std::optional<std::size_t> max_classes,
                        const std::function<bool(const PriorityPartition&)>& visit);
std::vector<PriorityPartition> enumerate_partitions(std::size_t m,
                                                    std::optional<std::size_t> max_classes = {});

// How a target relates to the maxsets of a profile.
struct TargetShape {
  MaxsetFamily family;
  bool or_of_maxsets = false;
  std::vector<IndexSet> selected;
  std::vector<IndexSet> excluded;
};

// Throws PreconditionError when the target is unsatisfiable.
TargetShape analyze_target(const Formula& r, std::span<const Formula> bases);

// True iff merging under `p` gives exactly the target described by `shape`.
bool generates(const TargetShape& shape, const PriorityPartition& p);

std::optional<PriorityPartition> invert_priority_bruteforce(const Formula& r,
                                                            std::span<const Formula> bases);

// A partition under which the minimal elements of S ∪ E are exactly S.
std::optional<PriorityPartition> obtain_pair(std::span<const IndexSet> s,
                                             std::span<const IndexSet> e, std::size_t m);

std::vector<PriorityPartition> orderings_for(const Formula& r, std::span<const Formula> bases);

// Partial assignment of some base indices to 1-based class numbers.
using PartialOrdering = std::map<std::size_t, std::size_t>;

bool extends(const PriorityPartition& p, const PartialOrdering& partial);

// Partition whose only minimal maxset is the first one consistent with r.
std::optional<PriorityPartition> relax_consistent(const Formula& r,
                                                  std::span<const Formula> bases);
// All bases in one class, when r entails the disjunction of all maxsets.
std::optional<PriorityPartition> relax_entailed(const Formula& r, std::span<const Formula> bases);

}  // namespace bmerge

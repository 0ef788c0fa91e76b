#include "bmerge/priority.hpp"

#include <algorithm>
#include <atomic>
#include <set>

#include "bmerge/error.hpp"
#include "bmerge/universe.hpp"

namespace bmerge {

namespace {

std::atomic<std::size_t> g_bruteforce_cap{7};

void check_bruteforce(std::size_t m) {
  if (m > bruteforce_cap()) {
    throw CapExceeded(std::to_string(m) + " bases exceed the brute-force cap of " +
                      std::to_string(bruteforce_cap()));
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::size_t bruteforce_cap() { return g_bruteforce_cap.load(); }
void set_bruteforce_cap(std::size_t cap) {
  if (cap > kMaxBases) throw PreconditionError("brute-force cap above 32");
  g_bruteforce_cap.store(cap);
}

// {{{ PriorityPartition

PriorityPartition::PriorityPartition(std::vector<IndexSet> classes, std::size_t base_count)
    : classes_(std::move(classes)), base_count_(base_count) {
  if (base_count_ == 0 || base_count_ > kMaxBases) {
    throw PreconditionError("partition needs between 1 and 32 bases");
  }
  const IndexSet all = base_count_ == kMaxBases ? ~IndexSet{0}
                                                : (IndexSet{1} << base_count_) - 1;
  IndexSet seen = 0;
  for (auto c : classes_) {
    if (c == 0) throw PreconditionError("partition class is empty");
    if (seen & c) throw PreconditionError("partition classes overlap");
    if (!is_subset(c, all)) throw PreconditionError("partition mentions an unknown base");
    seen |= c;
  }
  if (seen != all) throw PreconditionError("partition does not cover every base");
}

PriorityPartition PriorityPartition::single_class(std::size_t base_count) {
  const IndexSet all = base_count >= kMaxBases ? ~IndexSet{0}
                                               : (IndexSet{1} << base_count) - 1;
  return PriorityPartition({all}, base_count);
}

PriorityPartition PriorityPartition::parse(std::string_view text,
                                           std::span<const std::string> names) {
  std::map<std::size_t, IndexSet> by_number;
  for (const auto& part : split(text, ';')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      throw PreconditionError("partition class '" + part + "' lacks a class number");
    }
    const std::string num = trim(std::string_view(part).substr(0, colon));
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(num, &used);
      if (used != num.size()) throw std::invalid_argument(num);
    } catch (const std::exception&) {
      throw PreconditionError("bad class number '" + num + "'");
    }
    if (by_number.count(k)) throw PreconditionError("class " + num + " given twice");
    IndexSet members = 0;
    for (const auto& name : split(std::string_view(part).substr(colon + 1), ',')) {
      const auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) throw PreconditionError("unknown base '" + name + "' in partition");
      members |= IndexSet{1} << (it - names.begin());
    }
    by_number[k] = members;
  }
  std::vector<IndexSet> classes;
  for (const auto& [k, members] : by_number) {
    if (k != classes.size() + 1) throw PreconditionError("class numbers must be 1..k");
    classes.push_back(members);
  }
  return PriorityPartition(std::move(classes), names.size());
}

std::string PriorityPartition::format(std::span<const std::string> names) const {
  std::string out;
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    if (k) out += ';';
    out += std::to_string(k + 1) + ":";
    bool first = true;
    for (auto i : indices_of(classes_[k])) {
      if (!first) out += ',';
      first = false;
      out += i < names.size() ? names[i] : "K" + std::to_string(i + 1);
    }
  }
  return out;
}

std::size_t PriorityPartition::class_of(std::size_t i) const {
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    if (classes_[k] & (IndexSet{1} << i)) return k + 1;
  }
  throw PreconditionError("base index out of range");
}

// }}}

// {{{ Ordering and forward merge

std::string_view to_string(SetComparison c) {
  switch (c) {
    case SetComparison::Equal: return "equal";
    case SetComparison::Less: return "less";
    case SetComparison::Greater: return "greater";
    case SetComparison::Incomparable: break;
  }
  return "incomparable";
}

SetComparison compare(IndexSet l, IndexSet n, const PriorityPartition& p) {
  const IndexSet all = p.base_count() >= kMaxBases ? ~IndexSet{0}
                                                   : (IndexSet{1} << p.base_count()) - 1;
  if (!is_subset(l, all) || !is_subset(n, all)) throw PreconditionError("index out of range");
  for (auto c : p.classes()) {
    const IndexSet a = l & c, b = n & c;
    if (a == b) continue;
    if (is_subset(b, a)) return SetComparison::Less;
    if (is_subset(a, b)) return SetComparison::Greater;
    return SetComparison::Incomparable;
  }
  return SetComparison::Equal;
}

std::vector<IndexSet> minimal_sets(std::span<const IndexSet> sets, const PriorityPartition& p) {
  std::vector<IndexSet> out;
  for (auto m : sets) {
    const bool dominated = std::any_of(sets.begin(), sets.end(), [&](IndexSet n) {
      return compare(n, m, p) == SetComparison::Less;
    });
    if (!dominated) out.push_back(m);
  }
  return out;
}

std::vector<IndexSet> minimal_maxsets(const MaxsetFamily& fam, const PriorityPartition& p) {
  if (fam.base_count != p.base_count()) throw PreconditionError("partition of another profile");
  const auto members = fam.members();
  return minimal_sets(members, p);
}

Formula merge_priority(std::span<const Formula> bases, const PriorityPartition& p) {
  if (bases.size() != p.base_count()) throw PreconditionError("partition of another profile");
  const MaxsetFamily fam = maxsets(bases);
  std::vector<Formula> terms;
  for (auto m : minimal_maxsets(fam, p)) terms.push_back(conjunction_of(m, bases));
  return disjunction(terms);
}

// }}}

// {{{ Enumeration

namespace {

// Surjective class assignments of m bases onto k classes, in lexicographic order.
bool assign(std::vector<std::size_t>& cls, std::size_t pos, std::size_t k, std::size_t used,
            std::vector<std::size_t>& counts,
            const std::function<bool(const PriorityPartition&)>& visit) {
  const std::size_t m = cls.size();
  if (pos == m) {
    std::vector<IndexSet> classes(k, 0);
    for (std::size_t i = 0; i < m; ++i) classes[cls[i]] |= IndexSet{1} << i;
    return visit(PriorityPartition(std::move(classes), m));
  }
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t covered = used + (counts[c] == 0 ? 1 : 0);
    if (k - covered > m - pos - 1) continue;  // too few bases left to fill every class
    cls[pos] = c;
    ++counts[c];
    const bool go = assign(cls, pos + 1, k, covered, counts, visit);
    --counts[c];
    if (!go) return false;
  }
  return true;
}

}  // namespace

void for_each_partition(std::size_t m, std::optional<std::size_t> max_classes,
                        const std::function<bool(const PriorityPartition&)>& visit) {
  if (m == 0 || m > kMaxBases) throw PreconditionError("partition needs between 1 and 32 bases");
  const std::size_t top = std::min(m, max_classes.value_or(m));
  for (std::size_t k = 1; k <= top; ++k) {
    std::vector<std::size_t> cls(m, 0), counts(k, 0);
    if (!assign(cls, 0, k, 0, counts, visit)) return;
  }
}

std::vector<PriorityPartition> enumerate_partitions(std::size_t m,
                                                    std::optional<std::size_t> max_classes) {
  std::vector<PriorityPartition> out;
  for_each_partition(m, max_classes, [&](const PriorityPartition& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

// }}}

// {{{ Inverse problem

TargetShape analyze_target(const Formula& r, std::span<const Formula> bases) {
  std::vector<Formula> all(bases.begin(), bases.end());
  all.push_back(r);
  const Universe u = Universe::of(all);
  TargetShape shape;
  shape.family = maxsets(bases, u);
  const auto sat = satisfied_sets(bases, u);
  const auto table = truth_table(r, u);
  if (std::find(table.begin(), table.end(), true) == table.end()) {
    throw PreconditionError("the target is unsatisfiable");
  }
  const auto members = shape.family.members();
  std::set<IndexSet> with_r, without_r;
  for (std::uint64_t b = 0; b < sat.size(); ++b) (table[b] ? with_r : without_r).insert(sat[b]);
  shape.or_of_maxsets = true;
  for (auto s : with_r) {
    const bool is_maxset = std::find(members.begin(), members.end(), s) != members.end();
    if (!is_maxset || without_r.count(s)) shape.or_of_maxsets = false;
  }
  for (auto m : members) {
    const bool sel = std::any_of(with_r.begin(), with_r.end(),
                                 [&](IndexSet s) { return is_subset(m, s); });
    (sel ? shape.selected : shape.excluded).push_back(m);
  }
  return shape;
}

bool generates(const TargetShape& shape, const PriorityPartition& p) {
  return shape.or_of_maxsets && minimal_maxsets(shape.family, p) == shape.selected;
}

std::optional<PriorityPartition> invert_priority_bruteforce(const Formula& r,
                                                            std::span<const Formula> bases) {
  check_bruteforce(bases.size());
  const TargetShape shape = analyze_target(r, bases);
  if (!shape.or_of_maxsets) return std::nullopt;
  std::optional<PriorityPartition> found;
  for_each_partition(bases.size(), std::nullopt, [&](const PriorityPartition& p) {
    if (!generates(shape, p)) return true;
    found = p;
    return false;
  });
  return found;
}

std::optional<PriorityPartition> obtain_pair(std::span<const IndexSet> s,
                                             std::span<const IndexSet> e, std::size_t m) {
  check_bruteforce(m);
  if (s.empty()) throw PreconditionError("the selected family is empty");
  std::vector<IndexSet> all(s.begin(), s.end());
  all.insert(all.end(), e.begin(), e.end());
  std::vector<IndexSet> want(s.begin(), s.end());
  std::sort(want.begin(), want.end());
  want.erase(std::unique(want.begin(), want.end()), want.end());
  std::optional<PriorityPartition> found;
  for_each_partition(m, std::nullopt, [&](const PriorityPartition& p) {
    auto got = minimal_sets(all, p);
    std::sort(got.begin(), got.end());
    got.erase(std::unique(got.begin(), got.end()), got.end());
    if (got != want) return true;
    found = p;
    return false;
  });
  return found;
}

std::vector<PriorityPartition> orderings_for(const Formula& r, std::span<const Formula> bases) {
  check_bruteforce(bases.size());
  const TargetShape shape = analyze_target(r, bases);
  std::vector<PriorityPartition> out;
  if (!shape.or_of_maxsets) return out;
  for_each_partition(bases.size(), std::nullopt, [&](const PriorityPartition& p) {
    if (generates(shape, p)) out.push_back(p);
    return true;
  });
  return out;
}

bool extends(const PriorityPartition& p, const PartialOrdering& partial) {
  return std::all_of(partial.begin(), partial.end(), [&](const auto& kv) {
    return kv.first < p.base_count() && p.class_of(kv.first) == kv.second;
  });
}

// }}}

// {{{ Relaxations

std::optional<PriorityPartition> relax_consistent(const Formula& r,
                                                  std::span<const Formula> bases) {
  const TargetShape shape = analyze_target(r, bases);
  if (shape.selected.empty()) return std::nullopt;
  const IndexSet first = shape.selected.front();
  const std::size_t m = bases.size();
  const IndexSet all = m >= kMaxBases ? ~IndexSet{0} : (IndexSet{1} << m) - 1;
  std::vector<IndexSet> classes{first};
  if (first != all) classes.push_back(all & ~first);
  PriorityPartition p(std::move(classes), m);
  if (minimal_maxsets(shape.family, p) != std::vector<IndexSet>{first}) {
    throw InternalInconsistency("one-maxset partition selects other maxsets");
  }
  return p;
}

std::optional<PriorityPartition> relax_entailed(const Formula& r, std::span<const Formula> bases) {
  const TargetShape shape = analyze_target(r, bases);
  std::vector<Formula> terms;
  for (auto m : shape.family.members()) terms.push_back(conjunction_of(m, bases));
  if (!entails(r, disjunction(terms), shape.family.universe)) return std::nullopt;
  return PriorityPartition::single_class(bases.size());
}

// }}}

}  // namespace bmerge

#include "bmerge/maxsets.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "bmerge/error.hpp"

namespace bmerge {

std::vector<std::size_t> indices_of(IndexSet s) {
  std::vector<std::size_t> out;
  while (s != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(s)));
    s &= s - 1;
  }
  return out;
}

IndexSet index_set(std::span<const std::size_t> indices) {
  IndexSet s = 0;
  for (auto i : indices) {
    if (i >= kMaxBases) throw PreconditionError("base index out of range");
    s |= IndexSet{1} << i;
  }
  return s;
}

IndexSet index_set(std::initializer_list<std::size_t> indices) {
  return index_set(std::span<const std::size_t>(indices.begin(), indices.size()));
}

bool index_set_less(IndexSet a, IndexSet b) {
  const auto ia = indices_of(a);
  const auto ib = indices_of(b);
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

void sort_index_sets(std::vector<IndexSet>& sets) {
  std::sort(sets.begin(), sets.end(), index_set_less);
}

std::string format_index_set(IndexSet s, std::span<const std::string> names) {
  std::string out = "{";
  bool first = true;
  for (auto i : indices_of(s)) {
    if (!first) out += ',';
    first = false;
    out += i < names.size() ? names[i] : std::to_string(i + 1);
  }
  return out + "}";
}

Formula conjunction_of(IndexSet s, std::span<const Formula> bases) {
  std::vector<Formula> parts;
  for (auto i : indices_of(s)) {
    if (i >= bases.size()) throw PreconditionError("base index out of range");
    parts.push_back(bases[i]);
  }
  return conjunction(parts);
}

std::vector<IndexSet> MaxsetFamily::members() const {
  std::vector<IndexSet> out;
  for (const auto& m : sets) out.push_back(m.members);
  return out;
}

namespace {

void check_base_count(std::size_t m) {
  if (m == 0) throw PreconditionError("at least one base is required");
  if (m > kMaxBases) throw CapExceeded("more than 32 bases");
}

}  // namespace

std::vector<IndexSet> satisfied_sets(std::span<const Formula> bases, const Universe& u) {
  const std::uint64_t count = u.interpretation_count();
  std::vector<IndexSet> sat(count, 0);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    CompiledFormula cf(bases[i], u);
    bool any = false;
    for (std::uint64_t b = 0; b < count; ++b) {
      if (cf(b)) {
        sat[b] |= IndexSet{1} << i;
        any = true;
      }
    }
    if (!any) {
      throw UnsatisfiableBase("base " + std::to_string(i + 1) + " (" + bases[i].to_string() +
                                  ") is unsatisfiable",
                              i);
    }
  }
  return sat;
}

namespace {

std::vector<IndexSet> maximal_sets(const std::vector<IndexSet>& sat) {
  std::set<IndexSet> distinct(sat.begin(), sat.end());
  std::vector<IndexSet> by_size(distinct.begin(), distinct.end());
  std::stable_sort(by_size.begin(), by_size.end(), [](IndexSet a, IndexSet b) {
    return std::popcount(a) > std::popcount(b);
  });
  std::vector<IndexSet> maximal;
  for (auto s : by_size) {
    if (s == 0) continue;
    const bool covered = std::any_of(maximal.begin(), maximal.end(),
                                     [&](IndexSet m) { return is_subset(s, m); });
    if (!covered) maximal.push_back(s);
  }
  sort_index_sets(maximal);
  return maximal;
}

}  // namespace

MaxsetFamily maxsets(std::span<const Formula> bases, const Universe& u) {
  check_base_count(bases.size());
  const auto sat = satisfied_sets(bases, u);
  MaxsetFamily fam;
  fam.universe = u;
  fam.base_count = bases.size();
  for (auto s : maximal_sets(sat)) {
    const auto it = std::find(sat.begin(), sat.end(), s);
    fam.sets.push_back(Maxset{s, static_cast<std::uint64_t>(it - sat.begin())});
  }
  return fam;
}

MaxsetFamily maxsets(std::span<const Formula> bases) {
  return maxsets(bases, Universe::of(bases));
}

IndexSet maxset_of_model(const Interpretation& i, std::span<const Formula> bases) {
  check_base_count(bases.size());
  IndexSet s = 0;
  for (std::size_t k = 0; k < bases.size(); ++k) {
    if (evaluate(bases[k], i)) s |= IndexSet{1} << k;
  }
  return s;
}

OrOfMaxsetsCheck is_or_of_maxsets(const Formula& r, std::span<const Formula> bases) {
  check_base_count(bases.size());
  std::vector<Formula> all(bases.begin(), bases.end());
  all.push_back(r);
  const Universe u = Universe::of(all);
  const auto sat = satisfied_sets(bases, u);
  const auto table = truth_table(r, u);
  const auto maximal = maximal_sets(sat);

  // A maxset entails r iff no countermodel of r satisfies all its members.
  std::map<IndexSet, bool> entails_r;
  for (auto m : maximal) entails_r[m] = true;
  for (std::uint64_t b = 0; b < sat.size(); ++b) {
    if (table[b]) continue;
    for (auto& [m, ok] : entails_r) {
      if (is_subset(m, sat[b])) ok = false;
    }
  }
  OrOfMaxsetsCheck res;
  for (std::uint64_t b = 0; b < sat.size(); ++b) {
    if (!table[b]) continue;
    const auto it = entails_r.find(sat[b]);
    if (it == entails_r.end() || !it->second) {
      res.holds = false;
      res.counterexample = Interpretation(u, b);
      return res;
    }
  }
  return res;
}

SelectedSplit split_selected(const Formula& r, const MaxsetFamily& fam,
                             std::span<const Formula> bases) {
  if (bases.size() != fam.base_count) throw PreconditionError("family from a different profile");
  const Universe u = fam.universe.extended(r);
  const auto sat = satisfied_sets(bases, u);
  const auto table = truth_table(r, u);
  std::set<IndexSet> selected;
  for (std::uint64_t b = 0; b < sat.size(); ++b) {
    if (!table[b]) continue;
    for (const auto& m : fam.sets) {
      if (is_subset(m.members, sat[b])) selected.insert(m.members);
    }
  }
  SelectedSplit out;
  for (const auto& m : fam.sets) {
    (selected.count(m.members) ? out.selected : out.excluded).push_back(m.members);
  }
  return out;
}

// {{{ Synthesis

namespace {

std::string fresh_variable(std::size_t i) {
  static const char* const kNames[] = {"x", "y", "z", "w"};
  return i < 4 ? kNames[i] : "x" + std::to_string(i + 1);
}

}  // namespace

Synthesis synthesize(const LetterFamily& lf) {
  if (lf.sets.empty()) throw PreconditionError("letter family is empty");
  Synthesis out;
  std::vector<std::set<std::size_t>> sets;
  for (const auto& s : lf.sets) {
    if (s.empty()) throw PreconditionError("letter family contains an empty set");
    std::set<std::size_t> idx;
    for (const auto& letter : s) {
      auto it = std::find(out.letters.begin(), out.letters.end(), letter);
      if (it == out.letters.end()) {
        out.letters.push_back(letter);
        it = out.letters.end() - 1;
      }
      idx.insert(static_cast<std::size_t>(it - out.letters.begin()));
    }
    sets.push_back(std::move(idx));
  }
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = 0; b < sets.size(); ++b) {
      if (a != b && std::includes(sets[b].begin(), sets[b].end(), sets[a].begin(), sets[a].end())) {
        throw PreconditionError("letter set " + std::to_string(a + 1) + " is contained in set " +
                                std::to_string(b + 1));
      }
    }
  }
  if (out.letters.size() > kMaxBases) throw CapExceeded("more than 32 letters");

  const std::size_t n = sets.size();
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  for (std::size_t v = 0; v < k; ++v) out.variables.push_back(fresh_variable(v));
  const Universe u(out.variables);
  const std::uint64_t top = (std::uint64_t{1} << k) - 1;

  for (std::size_t l = 0; l < out.letters.size(); ++l) {
    std::vector<Formula> terms;
    for (std::size_t s = 0; s < n; ++s) {
      if (sets[s].count(l)) terms.push_back(minterm(u, top - s));
    }
    out.formulas.push_back(disjunction(terms));
  }

  // The maxsets of the result must be the letter sets again.
  const MaxsetFamily fam = maxsets(out.formulas, u);
  std::set<IndexSet> want, got;
  for (const auto& s : sets) {
    IndexSet m = 0;
    for (auto i : s) m |= IndexSet{1} << i;
    want.insert(m);
  }
  for (const auto& m : fam.sets) got.insert(m.members);
  if (want != got) throw InternalInconsistency("synthesized formulas do not realize the family");
  return out;
}

// }}}

}  // namespace bmerge

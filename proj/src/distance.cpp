#include "bmerge/distance.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "bmerge/error.hpp"

namespace bmerge {

std::string_view to_string(Metric m) { return m == Metric::Drastic ? "drastic" : "hamming"; }

Metric parse_metric(std::string_view text) {
  if (text == "drastic") return Metric::Drastic;
  if (text == "hamming") return Metric::Hamming;
  throw PreconditionError("unknown metric '" + std::string(text) + "'");
}

unsigned max_distance(Metric m, const Universe& u) {
  return m == Metric::Drastic ? 1U : static_cast<unsigned>(u.size());
}

unsigned model_distance(const Interpretation& i, const Interpretation& j, Metric m) {
  if (!(i.universe() == j.universe())) {
    throw PreconditionError("interpretations over different universes");
  }
  if (m == Metric::Drastic) return i.bits() == j.bits() ? 0U : 1U;
  return static_cast<unsigned>(std::popcount(i.bits() ^ j.bits()));
}

unsigned base_distance(const Interpretation& i, const Formula& k, Metric m) {
  const Universe& u = i.universe();
  const std::uint64_t count = u.interpretation_count();
  CompiledFormula ck(k, u);
  unsigned best = std::numeric_limits<unsigned>::max();
  for (std::uint64_t b = 0; b < count; ++b) {
    if (!ck(b)) continue;
    best = std::min(best, model_distance(i, Interpretation(u, b), m));
    if (best == 0) break;
  }
  if (best == std::numeric_limits<unsigned>::max()) {
    throw UnsatisfiableBase("base " + k.to_string() + " is unsatisfiable", 0);
  }
  return best;
}

std::vector<unsigned> distance_table(const Formula& k, Metric m, const Universe& u,
                                     std::size_t base_index) {
  const std::uint64_t count = u.interpretation_count();
  CompiledFormula ck(k, u);
  constexpr unsigned kUnset = std::numeric_limits<unsigned>::max();
  std::vector<unsigned> table(count, kUnset);
  std::vector<std::uint64_t> frontier;
  for (std::uint64_t b = 0; b < count; ++b) {
    if (ck(b)) {
      table[b] = 0;
      frontier.push_back(b);
    }
  }
  if (frontier.empty()) {
    throw UnsatisfiableBase("base " + std::to_string(base_index + 1) + " (" + k.to_string() +
                                ") is unsatisfiable",
                            base_index);
  }
  if (m == Metric::Drastic) {
    for (auto& d : table) {
      if (d == kUnset) d = 1;
    }
    return table;
  }
  // Breadth-first search over the hypercube from all models at once.
  std::vector<std::uint64_t> next;
  for (unsigned level = 1; !frontier.empty(); ++level) {
    next.clear();
    for (auto b : frontier) {
      for (std::size_t v = 0; v < u.size(); ++v) {
        const std::uint64_t nb = b ^ (std::uint64_t{1} << v);
        if (table[nb] == kUnset) {
          table[nb] = level;
          next.push_back(nb);
        }
      }
    }
    frontier.swap(next);
  }
  return table;
}

std::string DistanceVector::to_string() const {
  return "(" + std::to_string(d1) + "," + std::to_string(d2) + ")";
}

WeightPair::WeightPair(std::uint64_t a, std::uint64_t b) : w1(a), w2(b) {
  if (a == 0 || b == 0) throw PreconditionError("weights must be positive integers");
}

std::uint64_t weighted_distance(const Interpretation& i, const Formula& k1, const Formula& k2,
                                const WeightPair& w, Metric m) {
  return weighted_distance(DistanceVector{base_distance(i, k1, m), base_distance(i, k2, m)}, w);
}

ModelSet merge_weighted(const Formula& k1, const Formula& k2, const WeightPair& w, Metric m,
                        const Universe& u) {
  const auto t1 = distance_table(k1, m, u, 0);
  const auto t2 = distance_table(k2, m, u, 1);
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> winners;
  for (std::uint64_t b = 0; b < t1.size(); ++b) {
    const std::uint64_t d = weighted_distance(DistanceVector{t1[b], t2[b]}, w);
    if (d < best) {
      best = d;
      winners.clear();
    }
    if (d == best) winners.push_back(b);
  }
  return ModelSet(u, std::move(winners));
}

}  // namespace bmerge

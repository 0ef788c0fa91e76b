#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bmerge/formula.hpp"
#include "bmerge/universe.hpp"

namespace bmerge {

enum class Metric { Drastic, Hamming };

std::string_view to_string(Metric m);
// Accepts "drastic" or "hamming".
Metric parse_metric(std::string_view text);

// Largest distance between two interpretations: 1 for drastic, |u| for Hamming.
unsigned max_distance(Metric m, const Universe& u);

unsigned model_distance(const Interpretation& i, const Interpretation& j, Metric m);

// Minimum distance from `i` to a model of `k`. Throws UnsatisfiableBase.
unsigned base_distance(const Interpretation& i, const Formula& k, Metric m);

// d(I, k) for every interpretation I of `u`, indexed by interpretation bits.
// `base_index` is only used to label the UnsatisfiableBase error.
std::vector<unsigned> distance_table(const Formula& k, Metric m, const Universe& u,
                                     std::size_t base_index = 0);

struct DistanceVector {
  unsigned d1 = 0;
  unsigned d2 = 0;

  std::string to_string() const;
  friend auto operator<=>(const DistanceVector&, const DistanceVector&) = default;
};

// Reliability weights; both strictly positive.
struct WeightPair {
  std::uint64_t w1 = 1;
  std::uint64_t w2 = 1;

  WeightPair() = default;
  WeightPair(std::uint64_t a, std::uint64_t b);
  friend bool operator==(const WeightPair&, const WeightPair&) = default;
};

inline std::uint64_t weighted_distance(const DistanceVector& v, const WeightPair& w) {
  return w.w1 * v.d1 + w.w2 * v.d2;
}

std::uint64_t weighted_distance(const Interpretation& i, const Formula& k1, const Formula& k2,
                                const WeightPair& w, Metric m);

// Interpretations of `u` of minimum weighted distance to k1 and k2.
ModelSet merge_weighted(const Formula& k1, const Formula& k2, const WeightPair& w, Metric m,
                        const Universe& u);

}  // namespace bmerge

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bmerge/distance.hpp"
#include "bmerge/formula.hpp"
#include "bmerge/ratio.hpp"
#include "bmerge/universe.hpp"

namespace bmerge {

// One distinct distance vector of the profile together with its membership
// in the target.
struct ProfileEntry {
  DistanceVector v;
  bool in_r = false;
  friend auto operator<=>(const ProfileEntry&, const ProfileEntry&) = default;
};

// Distance vectors of all interpretations, split by membership in the target.
// Only distinct (vector, membership) pairs are kept; they are sorted
// lexicographically.
class DistanceProfile {
 public:
  static DistanceProfile from_formulas(const Formula& k1, const Formula& k2, const Formula& r,
                                       Metric m, const Universe& u);
  static DistanceProfile from_formulas(const Formula& k1, const Formula& k2, const Formula& r,
                                       Metric m);

  // Vector-level construction. `max_dist` defaults to the largest component.
  static DistanceProfile from_vectors(const std::vector<std::pair<DistanceVector, bool>>& entries,
                                      std::optional<unsigned> max_dist = std::nullopt);

  const std::vector<ProfileEntry>& entries() const { return entries_; }
  std::vector<DistanceVector> in_r() const;
  std::vector<DistanceVector> out_r() const;
  // The bound n on any distance in the profile.
  unsigned max_dist() const { return max_dist_; }

 private:
  std::vector<ProfileEntry> entries_;
  unsigned max_dist_ = 0;
};

// p(I,J) = (d(J,K2) - d(I,K2)) / (d(I,K1) - d(J,K1)); nullopt when undefined.
std::optional<Ratio> p_ratio(const DistanceVector& vi, const DistanceVector& vj);

enum class Verdict { Obtainable, Unobtainable, Unknown };

std::string_view to_string(Verdict v);

struct Violation {
  int condition = 0;                  // 1..6
  std::vector<DistanceVector> in_r;   // witnesses satisfying the target
  std::vector<DistanceVector> out_r;  // witnesses falsifying it
};

struct WeightVerdict {
  Verdict verdict = Verdict::Unknown;
  std::optional<WeightPair> weights;
  std::optional<Violation> violation;
};

// Checks the six obtainability conditions. Throws PreconditionError when the
// target has no model.
WeightVerdict check_conditions(const DistanceProfile& p);

// Builds a weight pair for an obtainable profile and re-verifies it.
// Throws PreconditionError if the profile is not obtainable and
// InternalInconsistency if the constructed pair does not reproduce the target.
WeightPair extract_weights(const DistanceProfile& p);

// True iff the entries of minimum weighted distance are exactly the in-target ones.
bool realizes(const DistanceProfile& p, const WeightPair& w);

// Weight pair with ratio w1/w2 = r (r must be positive).
WeightPair weights_from_ratio(const Ratio& r);

// Candidate-sweep decision procedure independent of the condition check.
WeightVerdict oracle_weights(const DistanceProfile& p);

struct LocalSearchParams {
  std::uint64_t maxiter = 10000;
  std::uint64_t restart = 100;
  std::uint64_t seed = 0;
  double noise = 0.1;
};

struct LocalSearchResult {
  // Obtainable: `ratio` is a candidate that still needs forward verification.
  Verdict verdict = Verdict::Unknown;
  std::optional<Ratio> ratio;
  Ratio a;  // upper bound on w1/w2
  Ratio b;  // lower bound on w1/w2
  std::uint64_t iterations = 0;
};

LocalSearchResult local_search_weights(const Formula& r, const Formula& k1, const Formula& k2,
                                       Metric m, const LocalSearchParams& params);
LocalSearchResult local_search_weights(const Formula& r, const Formula& k1, const Formula& k2,
                                       Metric m, const Universe& u,
                                       const LocalSearchParams& params);

enum class TractableResult { W1Greater, W1Less, W1Equal, Unobtainable };

std::string_view to_string(TractableResult t);

// Hamming inversion for two literal-conjunction bases and a Horn or Krom target.
TractableResult tractable_invert(const Formula& r, const Formula& k1, const Formula& k2);

// The merge result the tractable analysis predicts for each weight relation.
Formula tractable_candidate(const Formula& k1, const Formula& k2, TractableResult which);

}  // namespace bmerge

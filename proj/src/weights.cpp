#include "bmerge/weights.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "bmerge/error.hpp"

namespace bmerge {

// {{{ Profiles

DistanceProfile DistanceProfile::from_formulas(const Formula& k1, const Formula& k2,
                                               const Formula& r, Metric m, const Universe& u) {
  const auto t1 = distance_table(k1, m, u, 0);
  const auto t2 = distance_table(k2, m, u, 1);
  CompiledFormula cr(r, u);
  std::set<ProfileEntry> seen;
  for (std::uint64_t b = 0; b < t1.size(); ++b) {
    seen.insert(ProfileEntry{DistanceVector{t1[b], t2[b]}, cr(b)});
  }
  DistanceProfile p;
  p.entries_.assign(seen.begin(), seen.end());
  p.max_dist_ = max_distance(m, u);
  return p;
}

DistanceProfile DistanceProfile::from_formulas(const Formula& k1, const Formula& k2,
                                               const Formula& r, Metric m) {
  return from_formulas(k1, k2, r, m, Universe::of({k1, k2, r}));
}

DistanceProfile DistanceProfile::from_vectors(
    const std::vector<std::pair<DistanceVector, bool>>& entries, std::optional<unsigned> max_dist) {
  std::set<ProfileEntry> seen;
  unsigned largest = 0;
  for (const auto& [v, in] : entries) {
    seen.insert(ProfileEntry{v, in});
    largest = std::max({largest, v.d1, v.d2});
  }
  if (max_dist && *max_dist < largest) {
    throw PreconditionError("distance vector component above the maximum distance");
  }
  DistanceProfile p;
  p.entries_.assign(seen.begin(), seen.end());
  p.max_dist_ = max_dist.value_or(largest);
  return p;
}

std::vector<DistanceVector> DistanceProfile::in_r() const {
  std::vector<DistanceVector> out;
  for (const auto& e : entries_) {
    if (e.in_r) out.push_back(e.v);
  }
  return out;
}

std::vector<DistanceVector> DistanceProfile::out_r() const {
  std::vector<DistanceVector> out;
  for (const auto& e : entries_) {
    if (!e.in_r) out.push_back(e.v);
  }
  return out;
}

// }}}

std::optional<Ratio> p_ratio(const DistanceVector& vi, const DistanceVector& vj) {
  const std::int64_t den = std::int64_t{vi.d1} - std::int64_t{vj.d1};
  if (den == 0) return std::nullopt;
  return Ratio(std::int64_t{vj.d2} - std::int64_t{vi.d2}, den);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Obtainable: return "obtainable";
    case Verdict::Unobtainable: return "unobtainable";
    case Verdict::Unknown: break;
  }
  return "unknown";
}

// {{{ Condition check

namespace {

int d1_diff(const DistanceVector& a, const DistanceVector& b) {
  return static_cast<int>(a.d1) - static_cast<int>(b.d1);
}

WeightVerdict violated(int condition, std::vector<DistanceVector> in,
                       std::vector<DistanceVector> out = {}) {
  WeightVerdict v;
  v.verdict = Verdict::Unobtainable;
  v.violation = Violation{condition, std::move(in), std::move(out)};
  return v;
}

void require_target_models(const std::vector<DistanceVector>& in) {
  if (in.empty()) throw PreconditionError("the target has no model; obtainability is undefined");
}

}  // namespace

WeightVerdict check_conditions(const DistanceProfile& p) {
  const auto in = p.in_r();
  const auto out = p.out_r();
  require_target_models(in);

  // 1. Target models ordered on K1 must be inversely ordered on K2. The
  // strict half rules out a zero ratio, which positive weights cannot reach.
  for (const auto& i : in) {
    for (const auto& j : in) {
      if (i.d1 >= j.d1 && i.d2 > j.d2) return violated(1, {i, j});
      if (i.d1 > j.d1 && i.d2 >= j.d2) return violated(1, {i, j});
    }
  }
  // 2. A non-target model no further from K1 must be strictly further from K2.
  for (const auto& i : in) {
    for (const auto& m : out) {
      if (i.d1 >= m.d1 && !(i.d2 < m.d2)) return violated(2, {i}, {m});
    }
  }
  // 3. All defined p(I,J) over target models agree for a fixed I.
  for (const auto& i : in) {
    std::optional<std::pair<DistanceVector, Ratio>> first;
    for (const auto& j : in) {
      auto pij = p_ratio(i, j);
      if (!pij) continue;
      if (!first) {
        first.emplace(j, *pij);
      } else if (!(*pij == first->second)) {
        return violated(3, {i, first->first, j});
      }
    }
  }
  // 4 and 5. The fixed ratio must lie on the right side of every bound from
  // non-target models. Condition 3 makes the first J representative.
  for (int cond : {4, 5}) {
    for (const auto& i : in) {
      auto jt = std::find_if(in.begin(), in.end(),
                             [&](const DistanceVector& j) { return d1_diff(i, j) != 0; });
      if (jt == in.end()) continue;
      const Ratio pij = *p_ratio(i, *jt);
      for (const auto& m : out) {
        const int diff = d1_diff(i, m);
        if (cond == 4 && diff > 0 && !(pij < *p_ratio(i, m))) return violated(4, {i, *jt}, {m});
        if (cond == 5 && diff < 0 && !(pij > *p_ratio(i, m))) return violated(5, {i, *jt}, {m});
      }
    }
  }
  // 6. Upper bounds must stay above lower bounds.
  for (const auto& i : in) {
    for (const auto& m : out) {
      if (d1_diff(i, m) <= 0) continue;
      const Ratio pim = *p_ratio(i, m);
      for (const auto& n : out) {
        if (d1_diff(i, n) >= 0) continue;
        if (!(*p_ratio(i, n) < pim)) return violated(6, {i}, {m, n});
      }
    }
  }
  WeightVerdict v;
  v.verdict = Verdict::Obtainable;
  return v;
}

// }}}

// {{{ Weight construction

bool realizes(const DistanceProfile& p, const WeightPair& w) {
  std::uint64_t best_in = UINT64_MAX, best_out = UINT64_MAX, worst_in = 0;
  bool any_in = false;
  for (const auto& e : p.entries()) {
    const std::uint64_t d = weighted_distance(e.v, w);
    if (e.in_r) {
      any_in = true;
      best_in = std::min(best_in, d);
      worst_in = std::max(worst_in, d);
    } else {
      best_out = std::min(best_out, d);
    }
  }
  return any_in && best_in == worst_in && best_in < best_out;
}

WeightPair weights_from_ratio(const Ratio& r) {
  if (!r.positive()) throw PreconditionError("weight ratio must be positive");
  return WeightPair(static_cast<std::uint64_t>(r.num()), static_cast<std::uint64_t>(r.den()));
}

WeightPair extract_weights(const DistanceProfile& p) {
  if (check_conditions(p).verdict != Verdict::Obtainable) {
    throw PreconditionError("target is not obtainable; no weights to extract");
  }
  const auto in = p.in_r();
  const auto out = p.out_r();
  const DistanceVector i = in.front();
  Ratio ratio;
  auto jt = std::find_if(in.begin(), in.end(),
                         [&](const DistanceVector& j) { return j.d1 != i.d1; });
  if (jt != in.end()) {
    // Two target models at different distances from K1 fix the ratio.
    ratio = Ratio(std::abs(static_cast<std::int64_t>(jt->d2) - static_cast<std::int64_t>(i.d2)),
                  std::abs(static_cast<std::int64_t>(i.d1) - static_cast<std::int64_t>(jt->d1)));
  } else {
    const auto n = static_cast<std::int64_t>(p.max_dist());
    Ratio upper(n + 1);
    Ratio lower(0);
    for (const auto& m : out) {
      const int diff = d1_diff(i, m);
      if (diff > 0) upper = std::min(upper, *p_ratio(i, m));
      if (diff < 0) lower = std::max(lower, *p_ratio(i, m));
    }
    ratio = lower.positive() ? midpoint(lower, upper) : Ratio(1, n + 1);
  }
  const WeightPair w = weights_from_ratio(ratio);
  if (!realizes(p, w)) {
    throw InternalInconsistency("extracted weights " + std::to_string(w.w1) + "," +
                                std::to_string(w.w2) + " do not reproduce the target");
  }
  return w;
}

WeightVerdict oracle_weights(const DistanceProfile& p) {
  require_target_models(p.in_r());
  std::set<Ratio> breakpoints;
  for (const auto& a : p.entries()) {
    for (const auto& b : p.entries()) {
      if (auto r = p_ratio(a.v, b.v)) breakpoints.insert(*r);
    }
  }
  std::vector<Ratio> positive;
  for (const auto& r : breakpoints) {
    if (r.positive()) positive.push_back(r);
  }
  std::vector<Ratio> candidates{Ratio(1)};
  std::set<Ratio> rest(positive.begin(), positive.end());
  for (std::size_t k = 0; k + 1 < positive.size(); ++k) {
    rest.insert(midpoint(positive[k], positive[k + 1]));
  }
  if (!positive.empty()) {
    rest.insert(positive.front() / Ratio(2));
    rest.insert(positive.back() + Ratio(1));
  }
  rest.erase(Ratio(1));
  candidates.insert(candidates.end(), rest.begin(), rest.end());

  WeightVerdict v;
  for (const auto& c : candidates) {
    const WeightPair w = weights_from_ratio(c);
    if (realizes(p, w)) {
      v.verdict = Verdict::Obtainable;
      v.weights = w;
      return v;
    }
  }
  v.verdict = Verdict::Unobtainable;
  return v;
}

// }}}

// {{{ Local search

namespace {

Formula nnf(const Formula& f, bool positive) {
  switch (f.op()) {
    case Op::Var: return positive ? f : Formula::negation(f);
    case Op::True:
    case Op::False: return Formula::constant((f.op() == Op::True) == positive);
    case Op::Not: return nnf(f.lhs(), !positive);
    case Op::And:
      return positive ? Formula::conj(nnf(f.lhs(), true), nnf(f.rhs(), true))
                      : Formula::disj(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Or:
      return positive ? Formula::disj(nnf(f.lhs(), true), nnf(f.rhs(), true))
                      : Formula::conj(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Implies:
      return positive ? Formula::disj(nnf(f.lhs(), false), nnf(f.rhs(), true))
                      : Formula::conj(nnf(f.lhs(), true), nnf(f.rhs(), false));
    case Op::Iff:
      if (positive) {
        return Formula::conj(Formula::disj(nnf(f.lhs(), false), nnf(f.rhs(), true)),
                             Formula::disj(nnf(f.lhs(), true), nnf(f.rhs(), false)));
      }
      return Formula::conj(Formula::disj(nnf(f.lhs(), true), nnf(f.rhs(), true)),
                           Formula::disj(nnf(f.lhs(), false), nnf(f.rhs(), false)));
  }
  return f;
}

using Clause = std::vector<Formula>;
constexpr std::size_t kMaxClauses = 512;

// CNF of an NNF formula by distribution; nullopt once it grows past the limit.
std::optional<std::vector<Clause>> distribute(const Formula& f) {
  switch (f.op()) {
    case Op::True: return std::vector<Clause>{};
    case Op::False: return std::vector<Clause>{Clause{}};
    case Op::And: {
      auto l = distribute(f.lhs());
      auto r = distribute(f.rhs());
      if (!l || !r || l->size() + r->size() > kMaxClauses) return std::nullopt;
      l->insert(l->end(), r->begin(), r->end());
      return l;
    }
    case Op::Or: {
      auto l = distribute(f.lhs());
      auto r = distribute(f.rhs());
      if (!l || !r || l->size() * r->size() > kMaxClauses) return std::nullopt;
      std::vector<Clause> out;
      for (const auto& a : *l) {
        for (const auto& b : *r) {
          Clause c = a;
          c.insert(c.end(), b.begin(), b.end());
          out.push_back(std::move(c));
        }
      }
      return out;
    }
    default: return std::vector<Clause>{Clause{f}};
  }
}

void top_conjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.op() == Op::And) {
    top_conjuncts(f.lhs(), out);
    top_conjuncts(f.rhs(), out);
  } else {
    out.push_back(f);
  }
}

// Pieces of the target whose falsified count guides the moves.
std::vector<CompiledFormula> guide_clauses(const Formula& r, const Universe& u) {
  const Formula n = nnf(r, true);
  std::vector<Formula> parts;
  if (auto cnf = distribute(n)) {
    for (const auto& c : *cnf) parts.push_back(disjunction(c));
  } else {
    top_conjuncts(n, parts);
  }
  std::vector<CompiledFormula> out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.emplace_back(p, u);
  return out;
}

}  // namespace

LocalSearchResult local_search_weights(const Formula& r, const Formula& k1, const Formula& k2,
                                       Metric m, const LocalSearchParams& params) {
  return local_search_weights(r, k1, k2, m, Universe::of({k1, k2, r}), params);
}

LocalSearchResult local_search_weights(const Formula& r, const Formula& k1, const Formula& k2,
                                       Metric m, const Universe& u,
                                       const LocalSearchParams& params) {
  if (params.maxiter == 0 || params.restart == 0) {
    throw PreconditionError("maxiter and restart must be positive");
  }
  if (params.noise < 0.0 || params.noise > 1.0) {
    throw PreconditionError("noise must be a probability");
  }
  const auto t1 = distance_table(k1, m, u, 0);
  const auto t2 = distance_table(k2, m, u, 1);
  const CompiledFormula cr(r, u);
  const auto clauses = guide_clauses(r, u);
  const std::size_t nvars = u.size();
  const std::uint64_t mask = nvars == 0 ? 0 : (~std::uint64_t{0} >> (64 - nvars));

  std::mt19937_64 rng(params.seed);
  // Integer threshold keeps runs bit-reproducible across standard libraries.
  const std::uint64_t noise_cut = static_cast<std::uint64_t>(params.noise * 1000000.0);
  auto falsified = [&](std::uint64_t bits) {
    std::size_t c = 0;
    for (const auto& cl : clauses) c += cl(bits) ? 0 : 1;
    return c;
  };

  const auto n = static_cast<std::int64_t>(max_distance(m, u));
  LocalSearchResult res;
  res.a = Ratio(n + 1);
  res.b = Ratio(-n - 1);
  std::optional<std::uint64_t> anchor;
  std::uint64_t o = 0;

  for (std::uint64_t iter = 0; iter < params.maxiter; ++iter) {
    res.iterations = iter + 1;
    if (iter % params.restart == 0) o = rng() & mask;
    if (nvars > 0) {
      if (rng() % 1000000 < noise_cut) {
        o ^= std::uint64_t{1} << (rng() % nvars);
      } else {
        std::size_t best = SIZE_MAX;
        std::uint64_t pick = 0, ties = 0;
        for (std::size_t v = 0; v < nvars; ++v) {
          const std::size_t c = falsified(o ^ (std::uint64_t{1} << v));
          if (c < best) {
            best = c;
            pick = v;
            ties = 1;
          } else if (c == best && rng() % ++ties == 0) {
            pick = v;
          }
        }
        o ^= std::uint64_t{1} << pick;
      }
    }
    const bool in_r = cr(o);
    if (in_r && !anchor) anchor = o;
    if (anchor) {
      const DistanceVector vi{t1[*anchor], t2[*anchor]};
      const DistanceVector vo{t1[o], t2[o]};
      const auto p = p_ratio(vi, vo);
      if (in_r && p) {
        if (p->positive() && *p < res.a && *p > res.b) {
          res.verdict = Verdict::Obtainable;
          res.ratio = *p;
        } else {
          res.verdict = Verdict::Unobtainable;
        }
        return res;
      }
      if (!in_r && p) {
        if (vi.d1 > vo.d1) res.a = std::min(res.a, *p);
        if (vi.d1 < vo.d1) res.b = std::max(res.b, *p);
      }
    }
    if (res.a < Ratio(0) || res.a <= res.b) {
      res.verdict = Verdict::Unobtainable;
      return res;
    }
  }
  res.verdict = Verdict::Unknown;
  res.ratio = midpoint(res.a, res.b);
  return res;
}

// }}}

// {{{ Tractable case

std::string_view to_string(TractableResult t) {
  switch (t) {
    case TractableResult::W1Greater: return "w1_gt_w2";
    case TractableResult::W1Less: return "w1_lt_w2";
    case TractableResult::W1Equal: return "w1_eq_w2";
    case TractableResult::Unobtainable: break;
  }
  return "unobtainable";
}

namespace {

std::vector<Literal> literals_of(const Formula& k, const char* which) {
  if (!classify(k).literal_conjunction) {
    throw PreconditionError(std::string(which) + " is not a conjunction of literals");
  }
  std::vector<Literal> out;
  for (const auto& clause : clauses_of(k)) {
    const Literal& l = clause.front();
    for (const auto& seen : out) {
      if (seen.name == l.name && seen.positive != l.positive) {
        throw PreconditionError(std::string(which) + " is unsatisfiable");
      }
    }
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  }
  return out;
}

bool opposed(const Literal& l, const std::vector<Literal>& other) {
  return std::any_of(other.begin(), other.end(), [&](const Literal& o) {
    return o.name == l.name && o.positive != l.positive;
  });
}

}  // namespace

Formula tractable_candidate(const Formula& k1, const Formula& k2, TractableResult which) {
  const auto l1 = literals_of(k1, "first base");
  const auto l2 = literals_of(k2, "second base");
  std::vector<Formula> parts;
  auto add = [&](const Literal& l) {
    Formula f = literal_formula(l);
    if (std::find(parts.begin(), parts.end(), f) == parts.end()) parts.push_back(f);
  };
  for (const auto& l : l1) {
    if (!opposed(l, l2) || which == TractableResult::W1Greater) add(l);
  }
  for (const auto& l : l2) {
    if (!opposed(l, l1) || which == TractableResult::W1Less) add(l);
  }
  return conjunction(parts);
}

TractableResult tractable_invert(const Formula& r, const Formula& k1, const Formula& k2) {
  const ClauseClass c = classify(r);
  if (!c.cnf || !(c.horn || c.krom)) {
    throw PreconditionError("target must be a Horn or Krom clause set");
  }
  const Universe u = Universe::of({k1, k2, r});
  for (auto which : {TractableResult::W1Equal, TractableResult::W1Greater,
                     TractableResult::W1Less}) {
    if (equivalent(tractable_candidate(k1, k2, which), r, u)) return which;
  }
  return TractableResult::Unobtainable;
}

// }}}

}  // namespace bmerge

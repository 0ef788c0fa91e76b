#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "bmerge/error.hpp"

namespace oracle {

namespace {

bool eval(const Formula& f, const Universe& u, std::uint64_t bits) {
  using bmerge::Op;
  switch (f.op()) {
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Var:
      return bmerge::bit_value(bits, u.size(), *u.index_of(f.name()));
    case Op::Not:
      return !eval(f.lhs(), u, bits);
    case Op::And:
      return eval(f.lhs(), u, bits) && eval(f.rhs(), u, bits);
    case Op::Or:
      return eval(f.lhs(), u, bits) || eval(f.rhs(), u, bits);
    case Op::Implies:
      return !eval(f.lhs(), u, bits) || eval(f.rhs(), u, bits);
    case Op::Iff:
      return eval(f.lhs(), u, bits) == eval(f.rhs(), u, bits);
  }
  return false;
}

template <class T>
T pick(std::mt19937_64& rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

}  // namespace

std::vector<std::uint64_t> model_bits(const Formula& f, const Universe& u) {
  std::vector<std::uint64_t> out;
  const std::uint64_t total = std::uint64_t{1} << u.size();
  for (std::uint64_t b = 0; b < total; ++b) {
    if (eval(f, u, b)) out.push_back(b);
  }
  return out;
}

unsigned distance_to(std::uint64_t i, const std::vector<std::uint64_t>& k_models, Metric m) {
  unsigned best = ~0U;
  for (auto j : k_models) {
    const unsigned d = m == Metric::Drastic ? (i == j ? 0U : 1U)
                                            : static_cast<unsigned>(std::popcount(i ^ j));
    best = std::min(best, d);
  }
  return best;
}

std::vector<std::uint64_t> merge(const Formula& k1, const Formula& k2, std::uint64_t w1,
                                 std::uint64_t w2, Metric m, const Universe& u) {
  const auto m1 = model_bits(k1, u);
  const auto m2 = model_bits(k2, u);
  const std::uint64_t total = std::uint64_t{1} << u.size();
  std::vector<std::uint64_t> cost(total);
  std::uint64_t best = ~std::uint64_t{0};
  for (std::uint64_t b = 0; b < total; ++b) {
    cost[b] = w1 * distance_to(b, m1, m) + w2 * distance_to(b, m2, m);
    best = std::min(best, cost[b]);
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = 0; b < total; ++b) {
    if (cost[b] == best) out.push_back(b);
  }
  return out;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> sweep_weights(
    const Formula& k1, const Formula& k2, const Formula& r, Metric m, const Universe& u,
    std::uint64_t bound) {
  const auto m1 = model_bits(k1, u);
  const auto m2 = model_bits(k2, u);
  const auto target = model_bits(r, u);
  const std::uint64_t total = std::uint64_t{1} << u.size();
  std::vector<unsigned> d1(total), d2(total);
  for (std::uint64_t b = 0; b < total; ++b) {
    d1[b] = distance_to(b, m1, m);
    d2[b] = distance_to(b, m2, m);
  }
  for (std::uint64_t w1 = 1; w1 <= bound; ++w1) {
    for (std::uint64_t w2 = 1; w2 <= bound; ++w2) {
      std::uint64_t best = ~std::uint64_t{0};
      for (std::uint64_t b = 0; b < total; ++b) best = std::min(best, w1 * d1[b] + w2 * d2[b]);
      std::vector<std::uint64_t> got;
      for (std::uint64_t b = 0; b < total; ++b) {
        if (w1 * d1[b] + w2 * d2[b] == best) got.push_back(b);
      }
      if (got == target) return std::make_pair(w1, w2);
    }
  }
  return std::nullopt;
}

std::vector<IndexSet> lattice_maxsets(const std::vector<Formula>& bases, const Universe& u) {
  const std::size_t m = bases.size();
  std::vector<std::vector<bool>> sat(m);
  const std::uint64_t total = std::uint64_t{1} << u.size();
  for (std::size_t i = 0; i < m; ++i) {
    sat[i].resize(total);
    for (std::uint64_t b = 0; b < total; ++b) sat[i][b] = eval(bases[i], u, b);
  }
  auto consistent = [&](IndexSet s) {
    for (std::uint64_t b = 0; b < total; ++b) {
      bool all = true;
      for (std::size_t i = 0; i < m && all; ++i) {
        if ((s >> i) & 1U) all = sat[i][b];
      }
      if (all) return true;
    }
    return false;
  };
  std::vector<bool> cons(std::size_t{1} << m);
  for (IndexSet s = 0; s < (IndexSet{1} << m); ++s) cons[s] = consistent(s);
  std::vector<IndexSet> out;
  for (IndexSet s = 0; s < (IndexSet{1} << m); ++s) {
    if (!cons[s]) continue;
    bool maximal = true;
    for (std::size_t i = 0; i < m && maximal; ++i) {
      if (!((s >> i) & 1U) && cons[s | (IndexSet{1} << i)]) maximal = false;
    }
    if (maximal) out.push_back(s);
  }
  return out;
}

std::vector<IndexSet> minimal_consistent_subsets(const std::vector<Formula>& bases,
                                                 const Universe& u,
                                                 const bmerge::PriorityPartition& p) {
  const std::size_t m = bases.size();
  const std::uint64_t total = std::uint64_t{1} << u.size();
  std::vector<IndexSet> sat(total, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::uint64_t b = 0; b < total; ++b) {
      if (eval(bases[i], u, b)) sat[b] |= IndexSet{1} << i;
    }
  }
  std::vector<IndexSet> consistent;
  for (IndexSet s = 0; s < (IndexSet{1} << m); ++s) {
    if (std::any_of(sat.begin(), sat.end(), [&](IndexSet t) { return (s & ~t) == 0; })) {
      consistent.push_back(s);
    }
  }
  // l is strictly preferred to n when, at the first class where they differ,
  // l keeps a strict superset of what n keeps.
  auto preferred = [&](IndexSet l, IndexSet n) {
    for (auto c : p.classes()) {
      const IndexSet a = l & c, b = n & c;
      if (a == b) continue;
      return (b & ~a) == 0;
    }
    return false;
  };
  std::vector<IndexSet> out;
  for (auto n : consistent) {
    if (std::none_of(consistent.begin(), consistent.end(),
                     [&](IndexSet l) { return preferred(l, n); })) {
      out.push_back(n);
    }
  }
  return out;
}

namespace {

// Shared backtracking engine for the assignment oracles.
class Exhaustive {
 public:
  Exhaustive(const SeGraph& g, unsigned max_value) : g_(g), max_(max_value) {
    const std::size_t n = g.node_count();
    nbrs_.resize(n);
    for (const auto& e : g.edges()) {
      nbrs_[e.u].push_back(e.v);
      nbrs_[e.v].push_back(e.u);
    }
    // Breadth-first order so that neighbourhoods complete early.
    std::vector<bool> seen(n, false);
    for (std::size_t s = 0; s < n; ++s) {
      if (seen[s]) continue;
      std::deque<std::size_t> q{s};
      seen[s] = true;
      while (!q.empty()) {
        auto x = q.front();
        q.pop_front();
        order_.push_back(x);
        for (auto y : nbrs_[x]) {
          if (!seen[y]) {
            seen[y] = true;
            q.push_back(y);
          }
        }
      }
    }
    value_.assign(n, 0);
  }

  std::optional<bmerge::Assignment> run() {
    if (search(0)) return value_;
    return std::nullopt;
  }

  bool accepts(const bmerge::Assignment& val) {
    value_ = val;
    const bool ok = consistent();
    value_.assign(val.size(), 0);
    return ok;
  }

 private:
  bool assigned_around(std::size_t x) const {
    if (value_[x] == 0) return false;
    return std::all_of(nbrs_[x].begin(), nbrs_[x].end(),
                       [&](std::size_t y) { return value_[y] != 0; });
  }

  // Minimality of an edge, or nullopt while it still depends on unassigned nodes.
  std::optional<bool> status(const bmerge::SeEdge& e) const {
    const unsigned a = value_[e.u], b = value_[e.v];
    if (a == 0 || b == 0) return std::nullopt;
    if (a == 1 && b == 1) return true;
    if (a > 1 && b > 1) return false;
    const std::size_t one = a == 1 ? e.u : e.v;
    const unsigned other = a == 1 ? b : a;
    if (!assigned_around(one)) return std::nullopt;
    for (auto y : nbrs_[one]) {
      if (value_[y] < other) return false;
    }
    return true;
  }

  bool consistent() const {
    for (const auto& e : g_.edges()) {
      const auto s = status(e);
      if (s && *s != (e.mark == bmerge::Mark::Selected)) return false;
    }
    return true;
  }

  bool search(std::size_t k) {
    if (k == order_.size()) return consistent();
    const auto x = order_[k];
    for (unsigned v = 1; v <= max_; ++v) {
      value_[x] = v;
      if (consistent() && search(k + 1)) return true;
    }
    value_[x] = 0;
    return false;
  }

  const SeGraph& g_;
  unsigned max_;
  std::vector<std::vector<std::size_t>> nbrs_;
  std::vector<std::size_t> order_;
  bmerge::Assignment value_;
};

// Tries to finish an assignment in which exactly the nodes of `ones` get
// value 1. Every other node gets a value above 1, and the edge marks then
// reduce to equalities and strict inequalities among those nodes.
std::optional<bmerge::Assignment> complete_from_ones(const SeGraph& g, std::uint32_t ones) {
  using bmerge::Mark;
  const std::size_t n = g.node_count();
  auto is_one = [&](std::size_t x) { return ((ones >> x) & 1U) != 0; };
  std::vector<std::vector<const bmerge::SeEdge*>> inc(n);
  for (const auto& e : g.edges()) {
    inc[e.u].push_back(&e);
    if (e.v != e.u) inc[e.v].push_back(&e);
  }

  std::vector<std::size_t> cls(n);
  std::iota(cls.begin(), cls.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return cls[x] == x ? x : cls[x] = find(cls[x]);
  };
  std::vector<std::pair<std::size_t, std::size_t>> less;  // first < second

  for (const auto& e : g.edges()) {
    const bool both = is_one(e.u) && is_one(e.v);
    const bool neither = !is_one(e.u) && !is_one(e.v);
    if (both && e.mark != Mark::Selected) return std::nullopt;
    if (neither && e.mark != Mark::Excluded) return std::nullopt;
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (!is_one(u)) continue;
    const bool touches_one = std::any_of(inc[u].begin(), inc[u].end(), [&](auto* e) {
      return is_one(e->other(u));
    });
    std::vector<std::size_t> sel, exc;
    for (auto* e : inc[u]) {
      const auto v = e->other(u);
      if (is_one(v)) continue;
      (e->mark == Mark::Selected ? sel : exc).push_back(v);
    }
    if (touches_one) {
      // A neighbour at value 1 undercuts every other neighbour.
      if (!sel.empty()) return std::nullopt;
      continue;
    }
    if (sel.empty()) {
      // The lowest neighbour would make its edge minimal.
      if (!exc.empty()) return std::nullopt;
      continue;
    }
    for (auto v : sel) cls[find(v)] = find(sel.front());
    for (auto v : exc) less.emplace_back(sel.front(), v);
  }

  // Longest-path levels over the strict constraints between classes.
  std::vector<std::vector<std::size_t>> above(n);
  std::vector<std::size_t> indeg(n, 0);
  for (auto [a, b] : less) {
    const auto ca = find(a), cb = find(b);
    if (ca == cb) return std::nullopt;
    above[ca].push_back(cb);
    ++indeg[cb];
  }
  std::vector<unsigned> level(n, 2);
  std::deque<std::size_t> ready;
  std::size_t roots = 0, done = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (find(x) != x) continue;
    ++roots;
    if (indeg[x] == 0) ready.push_back(x);
  }
  while (!ready.empty()) {
    const auto x = ready.front();
    ready.pop_front();
    ++done;
    for (auto y : above[x]) {
      level[y] = std::max(level[y], level[x] + 1);
      if (--indeg[y] == 0) ready.push_back(y);
    }
  }
  if (done != roots) return std::nullopt;

  bmerge::Assignment val(n);
  for (std::size_t x = 0; x < n; ++x) val[x] = is_one(x) ? 1 : level[find(x)];
  return val;
}

}  // namespace

std::optional<bmerge::Assignment> witness_assignment(const SeGraph& g) {
  const std::size_t n = g.node_count();
  if (n >= 32) throw bmerge::PreconditionError("witness oracle limited to 31 nodes");
  for (std::uint64_t ones = 0; ones < (std::uint64_t{1} << n); ++ones) {
    auto val = complete_from_ones(g, static_cast<std::uint32_t>(ones));
    if (!val) continue;
    // Guard against a slip in the derivation above.
    if (!Exhaustive(g, static_cast<unsigned>(n)).accepts(*val)) {
      throw bmerge::InternalInconsistency("witness oracle built a non-witness");
    }
    return val;
  }
  return std::nullopt;
}

std::optional<std::size_t> min_distinct_values(const SeGraph& g) {
  // A witness with d distinct values that uses 1 compresses to one with
  // values 1..d. A witness without 1 makes no edge minimal, which is covered
  // by the constant assignment 2 when there are no selected edges.
  if (g.count(bmerge::Mark::Selected) == 0) return g.node_count() == 0 ? 0 : 1;
  for (std::size_t k = 1; k <= g.node_count(); ++k) {
    if (Exhaustive(g, static_cast<unsigned>(k)).run()) return k;
  }
  return std::nullopt;
}

Formula random_formula(std::mt19937_64& rng, std::size_t nvars, int depth) {
  if (depth <= 0 || pick(rng, 0, 3) == 0) {
    if (pick(rng, 0, 19) == 0) return Formula::constant(pick(rng, 0, 1) == 1);
    auto v = Formula::var("v" + std::to_string(pick<std::size_t>(rng, 0, nvars - 1)));
    return pick(rng, 0, 1) ? v : !v;
  }
  switch (pick(rng, 0, 5)) {
    case 0:
      return !random_formula(rng, nvars, depth - 1);
    case 1:
    case 2:
      return random_formula(rng, nvars, depth - 1) & random_formula(rng, nvars, depth - 1);
    case 3:
    case 4:
      return random_formula(rng, nvars, depth - 1) | random_formula(rng, nvars, depth - 1);
    default:
      return Formula::implies(random_formula(rng, nvars, depth - 1),
                              random_formula(rng, nvars, depth - 1));
  }
}

Formula random_satisfiable(std::mt19937_64& rng, std::size_t nvars, int depth) {
  for (;;) {
    auto f = random_formula(rng, nvars, depth);
    if (bmerge::is_satisfiable(f)) return f;
  }
}

Formula random_literal_conjunction(std::mt19937_64& rng, std::size_t nvars) {
  std::vector<Formula> lits;
  for (std::size_t i = 0; i < nvars; ++i) {
    if (pick(rng, 0, 2) == 0) continue;
    auto v = Formula::var("v" + std::to_string(i));
    lits.push_back(pick(rng, 0, 1) ? v : !v);
  }
  std::shuffle(lits.begin(), lits.end(), rng);
  return bmerge::conjunction(lits);
}

SeGraph random_se_graph(std::mt19937_64& rng, std::size_t max_nodes) {
  SeGraph g;
  const std::size_t n = pick<std::size_t>(rng, 2, max_nodes);
  for (std::size_t i = 0; i < n; ++i) g.add_node("K" + std::to_string(i + 1), {i});
  const double density = std::uniform_real_distribution<double>(0.15, 0.6)(rng);
  std::bernoulli_distribution has_edge(density), selected(0.5);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (has_edge(rng)) {
        g.add_edge(u, v, selected(rng) ? bmerge::Mark::Selected : bmerge::Mark::Excluded);
      }
    }
  }
  return g;
}

bmerge::LetterFamily random_antichain(std::mt19937_64& rng, std::size_t letters,
                                      std::size_t max_sets) {
  const std::size_t want = pick<std::size_t>(rng, 1, max_sets);
  std::vector<std::uint32_t> masks;
  for (int tries = 0; masks.size() < want && tries < 200; ++tries) {
    const auto s = pick<std::uint32_t>(rng, 1, (1U << letters) - 1);
    const bool clash = std::any_of(masks.begin(), masks.end(), [&](std::uint32_t t) {
      return (s & ~t) == 0 || (t & ~s) == 0;
    });
    if (!clash) masks.push_back(s);
  }
  bmerge::LetterFamily lf;
  for (auto s : masks) {
    std::vector<std::string> set;
    for (std::size_t i = 0; i < letters; ++i) {
      if ((s >> i) & 1U) set.push_back("L" + std::to_string(i));
    }
    lf.sets.push_back(set);
  }
  return lf;
}

bmerge::LetterFamily random_hypertree(std::mt19937_64& rng, std::size_t max_sets) {
  const std::size_t want = pick<std::size_t>(rng, 1, max_sets);
  std::size_t next = 0;
  auto fresh = [&] { return "L" + std::to_string(next++); };
  bmerge::LetterFamily lf;
  std::vector<std::string> shared_ok;  // letters that may be reused
  for (std::size_t k = 0; k < want; ++k) {
    std::vector<std::string> set;
    if (k > 0 && pick(rng, 0, 4) != 0) {
      set.push_back(shared_ok[pick<std::size_t>(rng, 0, shared_ok.size() - 1)]);
    }
    const std::size_t size = pick<std::size_t>(rng, want == 1 ? 1 : 2, 3);
    while (set.size() < size) set.push_back(fresh());
    for (const auto& l : set) {
      if (std::find(shared_ok.begin(), shared_ok.end(), l) == shared_ok.end()) {
        shared_ok.push_back(l);
      }
    }
    lf.sets.push_back(set);
  }
  return lf;
}

Formula or_of(const std::vector<IndexSet>& sets, const std::vector<Formula>& bases) {
  std::vector<Formula> parts;
  for (auto s : sets) parts.push_back(bmerge::conjunction_of(s, bases));
  return bmerge::disjunction(parts);
}

}  // namespace oracle

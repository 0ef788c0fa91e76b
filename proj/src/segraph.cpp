#include "bmerge/segraph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "bmerge/error.hpp"
#include "bmerge/universe.hpp"

namespace bmerge {

// {{{ Graph basics

std::size_t SeGraph::add_node(std::string label, std::vector<std::size_t> origins) {
  if (origins.empty()) origins.push_back(labels_.size());
  labels_.push_back(std::move(label));
  origins_.push_back(std::move(origins));
  return labels_.size() - 1;
}

std::size_t SeGraph::add_edge(std::size_t u, std::size_t v, Mark mark) {
  if (u >= node_count() || v >= node_count()) throw PreconditionError("edge to unknown node");
  if (u > v) std::swap(u, v);
  edges_.push_back(SeEdge{u, v, mark});
  return edges_.size() - 1;
}

std::vector<std::vector<std::size_t>> SeGraph::incidence() const {
  std::vector<std::vector<std::size_t>> inc(node_count());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    inc[edges_[e].u].push_back(e);
    if (!edges_[e].loop()) inc[edges_[e].v].push_back(e);
  }
  return inc;
}

std::vector<std::size_t> SeGraph::degrees() const {
  std::vector<std::size_t> deg(node_count(), 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    if (!e.loop()) ++deg[e.v];
  }
  return deg;
}

std::size_t SeGraph::count(Mark mark) const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(), [&](const SeEdge& e) { return e.mark == mark; }));
}

SeGraphBuild build_se_graph(const Formula& r, std::span<const Formula> bases,
                            std::span<const std::string> names) {
  SeGraphBuild out;
  out.shape = analyze_target(r, bases);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    out.graph.add_node(i < names.size() ? names[i] : "K" + std::to_string(i + 1));
  }
  auto is_selected = [&](IndexSet m) {
    return std::find(out.shape.selected.begin(), out.shape.selected.end(), m) !=
           out.shape.selected.end();
  };
  for (const auto& m : out.shape.family.sets) {
    const auto idx = indices_of(m.members);
    if (idx.size() > 2) {
      throw PreconditionError("maxset " + format_index_set(m.members, names) +
                              " has more than two members");
    }
    const bool sel = is_selected(m.members);
    if (idx.size() == 1) {
      (sel ? out.selected_singletons : out.excluded_singletons).push_back(idx[0]);
    } else {
      out.graph.add_edge(idx[0], idx[1], sel ? Mark::Selected : Mark::Excluded);
    }
  }
  return out;
}

// }}}

// {{{ Assignments

std::vector<bool> evaluate_assignment(const SeGraph& g, const Assignment& a) {
  if (a.size() != g.node_count()) throw PreconditionError("partial assignment");
  if (std::find(a.begin(), a.end(), 0U) != a.end()) {
    throw PreconditionError("assigned values must be positive");
  }
  // Smallest value among the neighbours of each node; a loop makes a node its
  // own neighbour.
  std::vector<unsigned> nbr_min(g.node_count(), ~0U);
  for (const auto& e : g.edges()) {
    nbr_min[e.u] = std::min(nbr_min[e.u], a[e.v]);
    nbr_min[e.v] = std::min(nbr_min[e.v], a[e.u]);
  }
  std::vector<bool> minimal;
  minimal.reserve(g.edges().size());
  for (const auto& e : g.edges()) {
    const unsigned au = a[e.u], av = a[e.v];
    bool m = false;
    if (au == 1 && av == 1) {
      m = true;
    } else if (au == 1) {
      m = nbr_min[e.u] >= av;
    } else if (av == 1) {
      m = nbr_min[e.v] >= au;
    }
    minimal.push_back(m);
  }
  return minimal;
}

bool witnesses(const SeGraph& g, const Assignment& a) {
  const auto minimal = evaluate_assignment(g, a);
  for (std::size_t e = 0; e < minimal.size(); ++e) {
    if (minimal[e] != (g.edges()[e].mark == Mark::Selected)) return false;
  }
  return true;
}

// }}}

// {{{ Transformations

SeGraph full_disconnection(const SeGraph& g) {
  const auto inc = g.incidence();
  std::vector<bool> split(g.node_count(), false);
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    const bool only_excluded = std::all_of(inc[x].begin(), inc[x].end(), [&](std::size_t e) {
      return g.edges()[e].mark == Mark::Excluded;
    });
    split[x] = only_excluded && inc[x].size() >= 2;
  }
  SeGraph out;
  std::vector<std::size_t> keep(g.node_count(), 0);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> copy;  // (node, edge) -> new node
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    if (!split[x]) {
      keep[x] = out.add_node(g.label(x), g.origins(x));
      continue;
    }
    std::size_t k = 0;
    for (auto e : inc[x]) {
      copy[{x, e}] = out.add_node(g.label(x) + "." + std::to_string(++k), g.origins(x));
    }
  }
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& ed = g.edges()[e];
    const std::size_t u = split[ed.u] ? copy[{ed.u, e}] : keep[ed.u];
    const std::size_t v = split[ed.v] ? copy[{ed.v, e}] : keep[ed.v];
    out.add_edge(u, v, ed.mark);
  }
  return out;
}

namespace {

// Copy of `g` restricted to the edges flagged in `keep_edge`, without
// isolated nodes.
SeGraph restrict_edges(const SeGraph& g, const std::vector<bool>& keep_edge) {
  std::vector<bool> used(g.node_count(), false);
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    if (keep_edge[e]) used[g.edges()[e].u] = used[g.edges()[e].v] = true;
  }
  SeGraph out;
  std::vector<std::size_t> id(g.node_count(), 0);
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    if (used[x]) id[x] = out.add_node(g.label(x), g.origins(x));
  }
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    if (keep_edge[e]) out.add_edge(id[g.edges()[e].u], id[g.edges()[e].v], g.edges()[e].mark);
  }
  return out;
}

}  // namespace

SeGraph remove_tails(const SeGraph& g) {
  const auto inc = g.incidence();
  auto deg = g.degrees();
  std::vector<bool> alive(g.edges().size(), true);
  std::deque<std::size_t> queue;
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    if (deg[x] == 1) queue.push_back(x);
  }
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    if (deg[x] != 1) continue;
    for (auto e : inc[x]) {
      if (!alive[e]) continue;
      alive[e] = false;
      const auto& ed = g.edges()[e];
      --deg[x];
      if (!ed.loop()) {
        const std::size_t y = ed.other(x);
        if (--deg[y] == 1) queue.push_back(y);
      }
      break;
    }
  }
  return restrict_edges(g, alive);
}

FoldResult zigzag_fold(const SeGraph& g) {
  std::vector<std::size_t> parent(g.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  };
  // Two selected edges meeting at a node force their far ends to the same
  // value, so the far ends are merged until nothing changes.
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::set<std::size_t>> far(g.node_count());
    for (const auto& e : g.edges()) {
      if (e.mark != Mark::Selected) continue;
      const std::size_t u = find(e.u), v = find(e.v);
      far[u].insert(v);
      far[v].insert(u);
    }
    for (const auto& ends : far) {
      if (ends.size() < 2) continue;
      for (auto y : ends) changed |= unite(*ends.begin(), y);
    }
  }

  FoldResult res;
  std::map<std::size_t, std::size_t> id;
  std::vector<std::vector<std::size_t>> members(g.node_count());
  for (std::size_t x = 0; x < g.node_count(); ++x) members[find(x)].push_back(x);
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    if (members[x].empty()) continue;
    std::string label;
    std::vector<std::size_t> origins;
    for (auto y : members[x]) {
      if (!label.empty()) label += "+";
      label += g.label(y);
      origins.insert(origins.end(), g.origins(y).begin(), g.origins(y).end());
    }
    std::sort(origins.begin(), origins.end());
    id[x] = res.graph.add_node(std::move(label), std::move(origins));
  }
  std::set<SeEdge> seen;
  std::set<std::pair<std::size_t, std::size_t>> sel_pairs, exc_pairs;
  for (const auto& e : g.edges()) {
    std::size_t u = id[find(e.u)], v = id[find(e.v)];
    if (u > v) std::swap(u, v);
    if (!seen.insert(SeEdge{u, v, e.mark}).second) continue;
    (e.mark == Mark::Selected ? sel_pairs : exc_pairs).insert({u, v});
    res.graph.add_edge(u, v, e.mark);
  }
  for (const auto& p : sel_pairs) {
    if (exc_pairs.count(p)) res.conflict = true;
  }
  return res;
}

namespace {

bool same_graph(const SeGraph& a, const SeGraph& b) {
  return a.node_count() == b.node_count() && a.edges() == b.edges();
}

}  // namespace

Reduction reduce(const SeGraph& g) {
  Reduction res;
  res.graph = g;
  while (true) {
    FoldResult folded = zigzag_fold(res.graph);
    if (folded.conflict) {
      res.graph = std::move(folded.graph);
      res.conflict = true;
      return res;
    }
    SeGraph next = remove_tails(full_disconnection(folded.graph));
    if (same_graph(next, res.graph)) return res;
    res.graph = std::move(next);
  }
}

bool is_obtainable_graph(const SeGraph& g) { return reduce(g).obtainable(); }

// }}}

// {{{ Alternating cycles

namespace {

// Walk phases: expecting the first selected edge of a run, after an odd
// number of selected edges, after an even number.
enum Phase : std::size_t { kStart = 0, kOdd = 1, kEven = 2 };

std::optional<Phase> advance(Phase p, Mark m) {
  if (m == Mark::Selected) return p == kOdd ? kEven : kOdd;
  if (p == kOdd) return kStart;
  return std::nullopt;
}

}  // namespace

std::optional<AlternatingCycle> find_alternating_cycle(const SeGraph& g) {
  const auto inc = g.incidence();
  const std::size_t n = g.node_count();
  std::optional<AlternatingCycle> best;
  for (std::size_t s = 0; s < n; ++s) {
    // Breadth-first search over (node, phase) from (s, start) back to itself.
    const std::size_t states = n * 3;
    std::vector<std::optional<std::pair<std::size_t, WalkStep>>> pred(states);
    std::vector<bool> seen(states, false);
    std::deque<std::size_t> queue{s * 3 + kStart};
    std::optional<std::pair<std::size_t, WalkStep>> closing;
    while (!queue.empty() && !closing) {
      const std::size_t st = queue.front();
      queue.pop_front();
      const std::size_t x = st / 3;
      const auto phase = static_cast<Phase>(st % 3);
      for (auto e : inc[x]) {
        const auto& ed = g.edges()[e];
        const auto next = advance(phase, ed.mark);
        if (!next) continue;
        const std::size_t y = ed.other(x);
        const std::size_t nst = y * 3 + *next;
        const WalkStep step{e, x, y};
        if (nst == s * 3 + kStart) {
          closing.emplace(st, step);
          break;
        }
        if (seen[nst]) continue;
        seen[nst] = true;
        pred[nst].emplace(st, step);
        queue.push_back(nst);
      }
    }
    if (!closing) continue;
    AlternatingCycle c;
    c.steps.push_back(closing->second);
    for (std::size_t st = closing->first; st != s * 3 + kStart; st = pred[st]->first) {
      c.steps.push_back(pred[st]->second);
    }
    std::reverse(c.steps.begin(), c.steps.end());
    if (!best || c.steps.size() < best->steps.size()) best = std::move(c);
  }
  return best;
}

std::string validate_alternating_cycle(const SeGraph& g, const AlternatingCycle& c) {
  if (c.steps.empty()) return "empty walk";
  const std::size_t k = c.steps.size();
  for (std::size_t i = 0; i < k; ++i) {
    const auto& st = c.steps[i];
    if (st.edge >= g.edges().size()) return "unknown edge";
    const auto& ed = g.edges()[st.edge];
    const bool fits = (ed.u == st.from && ed.v == st.to) || (ed.v == st.from && ed.u == st.to);
    if (!fits) return "step does not follow its edge";
    if (st.to != c.steps[(i + 1) % k].from) return "walk is not closed";
  }
  std::map<std::size_t, std::size_t> uses;
  for (const auto& st : c.steps) {
    if (++uses[st.edge] > 2) return "edge used more than twice";
  }
  std::size_t first_exc = k;
  for (std::size_t i = 0; i < k; ++i) {
    if (g.edges()[c.steps[i].edge].mark == Mark::Excluded) {
      first_exc = i;
      break;
    }
  }
  if (first_exc == k) return "no excluded edge";
  std::size_t run = 0;
  for (std::size_t j = 1; j <= k; ++j) {
    const Mark m = g.edges()[c.steps[(first_exc + j) % k].edge].mark;
    if (m == Mark::Selected) {
      ++run;
    } else {
      if (run % 2 == 0) return "selected run of even length";
      run = 0;
    }
  }
  return {};
}

// }}}

// {{{ Value search

namespace {

enum class Status { Minimal, NonMinimal, Unknown };

class ValueSearch {
 public:
  explicit ValueSearch(const SeGraph& g) : g_(g), inc_(g.incidence()), val_(g.node_count(), 0) {
    // Visit nodes breadth-first from the busiest one so edges close early.
    std::vector<bool> placed(g.node_count(), false);
    std::vector<std::size_t> by_degree(g.node_count());
    std::iota(by_degree.begin(), by_degree.end(), 0);
    const auto deg = g.degrees();
    std::stable_sort(by_degree.begin(), by_degree.end(),
                     [&](std::size_t a, std::size_t b) { return deg[a] > deg[b]; });
    for (auto root : by_degree) {
      if (placed[root]) continue;
      std::deque<std::size_t> q{root};
      placed[root] = true;
      while (!q.empty()) {
        const auto x = q.front();
        q.pop_front();
        order_.push_back(x);
        for (auto e : inc_[x]) {
          const auto y = g.edges()[e].other(x);
          if (!placed[y]) {
            placed[y] = true;
            q.push_back(y);
          }
        }
      }
    }
  }

  std::optional<Assignment> run() {
    if (search(0)) return val_;
    return std::nullopt;
  }

 private:
  Status status(const SeEdge& e) const {
    const unsigned au = val_[e.u], av = val_[e.v];
    if (au == 0 || av == 0) return Status::Unknown;
    if (au == 1 && av == 1) return Status::Minimal;
    if (au != 1 && av != 1) return Status::NonMinimal;
    const std::size_t one = au == 1 ? e.u : e.v;
    const unsigned k = au == 1 ? av : au;
    bool complete = true;
    for (auto f : inc_[one]) {
      const unsigned w = val_[g_.edges()[f].other(one)];
      if (w == 0) {
        complete = false;
      } else if (w < k) {
        return Status::NonMinimal;
      }
    }
    return complete ? Status::Minimal : Status::Unknown;
  }

  bool consistent(std::size_t x) const {
    auto ok = [&](std::size_t e) {
      const auto& ed = g_.edges()[e];
      const Status s = status(ed);
      if (s == Status::Unknown) return true;
      return (s == Status::Minimal) == (ed.mark == Mark::Selected);
    };
    for (auto e : inc_[x]) {
      if (!ok(e)) return false;
      const std::size_t y = g_.edges()[e].other(x);
      for (auto f : inc_[y]) {
        if (!ok(f)) return false;
      }
    }
    return true;
  }

  bool search(std::size_t pos) {
    if (pos == order_.size()) return witnesses(g_, val_);
    const std::size_t x = order_[pos];
    const auto top = static_cast<unsigned>(std::max<std::size_t>(1, g_.node_count()));
    for (unsigned v = 1; v <= top; ++v) {
      val_[x] = v;
      if (consistent(x) && search(pos + 1)) return true;
    }
    val_[x] = 0;
    return false;
  }

  const SeGraph& g_;
  std::vector<std::vector<std::size_t>> inc_;
  Assignment val_;
  std::vector<std::size_t> order_;
};

}  // namespace

std::optional<Assignment> assign_values(const SeGraph& g) { return ValueSearch(g).run(); }

SeGraph gen_levels_graph(std::size_t n) {
  if (n == 0) throw PreconditionError("levels graph needs n >= 1");
  SeGraph g;
  const auto t0 = g.add_node("t0");
  const auto t1 = g.add_node("t1");
  const auto t2 = g.add_node("t2");
  g.add_edge(t0, t1, Mark::Selected);
  g.add_edge(t1, t2, Mark::Selected);
  g.add_edge(t0, t2, Mark::Selected);
  std::size_t prev = t0;
  for (std::size_t i = 1; i <= 2 * n; ++i) {
    const auto c = g.add_node("c" + std::to_string(i));
    g.add_edge(prev, c, i % 2 == 1 ? Mark::Excluded : Mark::Selected);
    prev = c;
  }
  return g;
}

// }}}

// {{{ Acyclic profiles

bool is_berge_acyclic(const MaxsetFamily& fam) {
  const std::size_t total = fam.base_count + fam.sets.size();
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t j = 0; j < fam.sets.size(); ++j) {
    for (auto i : indices_of(fam.sets[j].members)) {
      const std::size_t a = find(i), b = find(fam.base_count + j);
      if (a == b) return false;
      parent[a] = b;
    }
  }
  return true;
}

namespace {

struct Label {
  bool set = false;
  bool one = false;  // "1,n": class one
  unsigned n = 0;
};

}  // namespace

std::optional<PriorityPartition> label_acyclic(const Formula& r, std::span<const Formula> bases) {
  const TargetShape shape = analyze_target(r, bases);
  const std::size_t m = bases.size();
  std::vector<Formula> all(bases.begin(), bases.end());
  all.push_back(r);
  const Universe u = Universe::of(all);
  const auto sat = satisfied_sets(bases, u);
  const auto table = truth_table(r, u);
  std::set<IndexSet> distinct(sat.begin(), sat.end());
  auto consistent = [&](IndexSet s) {
    return std::any_of(distinct.begin(), distinct.end(), [&](IndexSet d) { return is_subset(s, d); });
  };
  auto entails_r = [&](IndexSet s) {
    for (std::uint64_t b = 0; b < sat.size(); ++b) {
      if (is_subset(s, sat[b]) && !table[b]) return false;
    }
    return true;
  };
  auto bit = [](std::size_t i) { return IndexSet{1} << i; };

  std::vector<Label> label(m);
  IndexSet done = 0;  // the formulas already placed in some found maxset
  const IndexSet everything = m >= kMaxBases ? ~IndexSet{0} : (IndexSet{1} << m) - 1;
  while (done != everything) {
    // Seed a new maxset from a consistent pair leaving the covered formulas.
    IndexSet cur = 0;
    for (std::size_t i = 0; i < m && !cur; ++i) {
      if (!(done & bit(i))) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (!(done & bit(j)) && consistent(bit(i) | bit(j))) {
          cur = bit(i) | bit(j);
          break;
        }
      }
    }
    if (!cur) {
      for (std::size_t i = 0; i < m; ++i) {
        if (!(done & bit(i))) {
          cur = bit(i);
          break;
        }
      }
    }
    // Enlarge with formulas pairwise and jointly consistent with it.
    for (std::size_t j = 0; j < m; ++j) {
      if (cur & bit(j)) continue;
      const auto in_cur = indices_of(cur);
      const bool pairwise = std::all_of(in_cur.begin(), in_cur.end(), [&](std::size_t i) {
        return consistent(bit(i) | bit(j));
      });
      if (pairwise && consistent(cur | bit(j))) cur |= bit(j);
    }
    done |= cur;

    const auto members = indices_of(cur);
    std::vector<std::size_t> labeled, unlabeled;
    for (auto i : members) (label[i].set ? labeled : unlabeled).push_back(i);
    const std::string where = format_index_set(cur);
    if (labeled.size() > 1) throw NotAcyclic("maxset " + where + " meets two labels");
    if (entails_r(cur)) {
      if (labeled.empty()) {
        label[members.front()] = {true, true, 2};
        for (std::size_t k = 1; k < members.size(); ++k) label[members[k]] = {true, false, 2};
      } else if (label[labeled[0]].one) {
        for (auto i : unlabeled) label[i] = {true, false, label[labeled[0]].n};
      } else {
        const unsigned n = label[labeled[0]].n;
        for (std::size_t k = 0; k < unlabeled.size(); ++k) label[unlabeled[k]] = {true, k == 0, n};
      }
    } else {
      if (labeled.empty()) {
        for (auto i : members) label[i] = {true, false, 2};
      } else if (label[labeled[0]].one) {
        for (auto i : unlabeled) label[i] = {true, false, label[labeled[0]].n + 1};
      } else {
        for (auto i : unlabeled) label[i] = {true, false, label[labeled[0]].n};
      }
    }
  }

  std::map<unsigned, IndexSet> by_class;
  for (std::size_t i = 0; i < m; ++i) by_class[label[i].one ? 1U : label[i].n] |= bit(i);
  std::vector<IndexSet> classes;
  for (const auto& [cls, set] : by_class) classes.push_back(set);
  PriorityPartition p(std::move(classes), m);
  if (!generates(shape, p)) return std::nullopt;
  return p;
}

PriorityPartition partition_from_assignment(const SeGraphBuild& build, const Assignment& a) {
  const SeGraph& g = build.graph;
  if (!witnesses(g, a)) throw PreconditionError("assignment does not witness the graph");
  const std::size_t m = g.node_count();
  std::vector<bool> in_edge(m, false);
  for (const auto& e : g.edges()) in_edge[e.u] = in_edge[e.v] = true;
  std::map<unsigned, IndexSet> by_value;
  for (std::size_t i = 0; i < m; ++i) {
    if (in_edge[i]) by_value[a[i]] |= IndexSet{1} << i;
  }
  for (auto i : build.selected_singletons) by_value[1] |= IndexSet{1} << i;
  std::vector<IndexSet> classes;
  for (const auto& [v, set] : by_value) classes.push_back(set);
  IndexSet last = 0;
  for (auto i : build.excluded_singletons) last |= IndexSet{1} << i;
  if (last) classes.push_back(last);
  PriorityPartition p(std::move(classes), m);
  if (!generates(build.shape, p)) {
    throw InternalInconsistency("partition from a witnessing assignment does not merge to the target");
  }
  return p;
}

// }}}

std::string to_dot(const SeGraph& g, const Assignment* values) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::string out = "graph se {\n";
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    std::string label = g.label(x);
    if (values && x < values->size()) label += "=" + std::to_string((*values)[x]);
    out += "  n" + std::to_string(x) + " [label=" + quote(label) + "];\n";
  }
  for (const auto& e : g.edges()) {
    out += "  n" + std::to_string(e.u) + " -- n" + std::to_string(e.v);
    out += e.mark == Mark::Excluded ? " [label=\"X\"];\n" : ";\n";
  }
  return out + "}\n";
}

}  // namespace bmerge

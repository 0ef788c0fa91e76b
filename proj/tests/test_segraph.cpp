#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "bmerge/error.hpp"
#include "bmerge/segraph.hpp"
#include "support/oracles.hpp"

using namespace bmerge;

namespace {

Formula P(const char* s) { return parse_formula(s); }

std::vector<Formula> four_cycle() {
  return {P("x & y | !x & !y"), P("x & y | x & !y"), P("x & !y | !x & y"), P("!x & y | !x & !y")};
}

const Formula kFourCycleTarget =
    P("(x & y | !x & !y) & (x & y | x & !y) | (x & !y | !x & y) & (!x & y | !x & !y)");

SeGraph graph(std::size_t n, std::initializer_list<std::tuple<std::size_t, std::size_t, Mark>> es) {
  SeGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node("n" + std::to_string(i), {i});
  for (const auto& [u, v, m] : es) g.add_edge(u, v, m);
  return g;
}

constexpr Mark S = Mark::Selected;
constexpr Mark X = Mark::Excluded;

// Alternating four-cycle A-B selected, B-C excluded, C-D selected, D-A excluded.
SeGraph alternating_square() { return graph(4, {{0, 1, S}, {1, 2, X}, {2, 3, S}, {0, 3, X}}); }

// Two triangles joined by a selected-excluded-selected bridge.
SeGraph bridge_graph() {
  return graph(8, {{0, 1, S}, {0, 2, X}, {1, 2, X}, {2, 3, S}, {3, 4, X}, {4, 5, S}, {5, 6, X},
                   {5, 7, X}, {6, 7, S}});
}

std::multiset<std::tuple<std::size_t, std::size_t, Mark>> edge_shape(const SeGraph& g) {
  std::multiset<std::tuple<std::size_t, std::size_t, Mark>> out;
  for (const auto& e : g.edges()) out.emplace(e.u, e.v, e.mark);
  return out;
}

}  // namespace

TEST(Build, FourCycle) {
  const std::vector<std::string> names{"A", "B", "C", "D"};
  const auto b = build_se_graph(kFourCycleTarget, four_cycle(), names);
  EXPECT_EQ(b.graph.node_count(), 4U);
  EXPECT_EQ(b.graph.label(0), "A");
  EXPECT_EQ(edge_shape(b.graph), (std::multiset<std::tuple<std::size_t, std::size_t, Mark>>{
                                     {0, 1, S}, {1, 2, X}, {2, 3, S}, {0, 3, X}}));
  EXPECT_TRUE(b.selected_singletons.empty());
  EXPECT_TRUE(b.excluded_singletons.empty());
}

TEST(Build, TriangleAndSingletons) {
  const std::vector<Formula> t{P("x"), P("y"), P("!(x <-> y)")};
  const auto b = build_se_graph(P("x & y"), t);
  EXPECT_EQ(edge_shape(b.graph),
            (std::multiset<std::tuple<std::size_t, std::size_t, Mark>>{{0, 1, S}, {0, 2, X}, {1, 2, X}}));

  const std::vector<Formula> lone{P("a"), P("a & b")};
  EXPECT_EQ(edge_shape(build_se_graph(P("a & b"), lone).graph),
            (std::multiset<std::tuple<std::size_t, std::size_t, Mark>>{{0, 1, S}}));

  const std::vector<Formula> single{P("x"), P("!x")};
  const auto s = build_se_graph(P("x"), single);
  EXPECT_TRUE(s.graph.edges().empty());
  EXPECT_EQ(s.selected_singletons, (std::vector<std::size_t>{0}));
  EXPECT_EQ(s.excluded_singletons, (std::vector<std::size_t>{1}));
}

TEST(Build, RejectsLargeMaxsets) {
  const std::vector<Formula> bases{P("a"), P("b"), P("c")};
  EXPECT_THROW(build_se_graph(P("a & b & c"), bases), PreconditionError);
}

TEST(Evaluate, Examples) {
  const auto sq = alternating_square();
  const auto all = evaluate_assignment(sq, {1, 2, 1, 2});
  EXPECT_TRUE(std::all_of(all.begin(), all.end(), [](bool b) { return b; }));
  // Edge (1, 3) next to another neighbour of the 1-node valued 2.
  const auto g = graph(3, {{0, 1, S}, {0, 2, X}});
  EXPECT_EQ(evaluate_assignment(g, {1, 3, 2}), (std::vector<bool>{false, true}));
  EXPECT_EQ(evaluate_assignment(g, {1, 1, 5}), (std::vector<bool>{true, false}));
  EXPECT_EQ(evaluate_assignment(g, {2, 3, 4}), (std::vector<bool>{false, false}));
  EXPECT_THROW(evaluate_assignment(g, {1, 2}), PreconditionError);
  EXPECT_THROW(evaluate_assignment(g, {1, 0, 2}), PreconditionError);
}

TEST(Evaluate, MatchesMinimalSetsOfThePartition) {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 500; ++k) {
    const auto g = oracle::random_se_graph(rng, 7);
    if (g.edges().empty()) continue;
    const std::size_t n = g.node_count();
    // Values 1..k used without gaps, so the induced partition has no empty class.
    Assignment a(n);
    unsigned top = 1;
    for (auto& v : a) {
      v = static_cast<unsigned>(rng() % (top + 1)) + 1;
      top = std::max(top, v);
    }
    std::vector<IndexSet> classes(*std::max_element(a.begin(), a.end()), 0);
    for (std::size_t i = 0; i < n; ++i) classes[a[i] - 1] |= IndexSet{1} << i;
    if (std::find(classes.begin(), classes.end(), 0U) != classes.end()) continue;
    const PriorityPartition p(classes, n);
    std::vector<IndexSet> sets;
    for (const auto& e : g.edges()) sets.push_back((IndexSet{1} << e.u) | (IndexSet{1} << e.v));
    // A base outside every edge forms a singleton maxset of its own.
    std::vector<IndexSet> family = sets;
    const auto deg = g.degrees();
    for (std::size_t i = 0; i < n; ++i) {
      if (deg[i] == 0) family.push_back(IndexSet{1} << i);
    }
    const auto mins = minimal_sets(family, p);
    const auto ev = evaluate_assignment(g, a);
    for (std::size_t e = 0; e < sets.size(); ++e) {
      EXPECT_EQ(ev[e], std::find(mins.begin(), mins.end(), sets[e]) != mins.end());
    }
  }
}

TEST(Evaluate, OrderIsomorphicAssignmentsAgree) {
  std::mt19937_64 rng(15);
  for (int k = 0; k < 300; ++k) {
    const auto g = oracle::random_se_graph(rng, 7);
    Assignment a(g.node_count());
    for (auto& v : a) v = static_cast<unsigned>(rng() % 4) + 1;
    if (std::find(a.begin(), a.end(), 1U) == a.end()) a[0] = 1;
    // Stretch values above 1 monotonically.
    Assignment b = a;
    for (auto& v : b) v = v == 1 ? 1 : 3 * v + 5;
    EXPECT_EQ(evaluate_assignment(g, a), evaluate_assignment(g, b));
  }
}

TEST(FullDisconnection, Examples) {
  const auto star = graph(4, {{0, 1, X}, {0, 2, X}, {0, 3, X}});
  const auto d = full_disconnection(star);
  EXPECT_EQ(d.edges().size(), 3U);
  const auto deg = d.degrees();
  EXPECT_TRUE(std::all_of(deg.begin(), deg.end(), [](std::size_t x) { return x <= 1; }));
  EXPECT_EQ(d.origins(d.edges()[0].u), (std::vector<std::size_t>{0}));

  const auto one = graph(2, {{0, 1, S}});
  EXPECT_EQ(edge_shape(full_disconnection(one)), edge_shape(one));

  const auto square = graph(4, {{0, 1, X}, {1, 2, X}, {2, 3, X}, {0, 3, X}});
  const auto sd = full_disconnection(square);
  EXPECT_EQ(sd.edges().size(), 4U);
  EXPECT_EQ(sd.node_count(), 8U);
}

TEST(RemoveTails, Examples) {
  EXPECT_TRUE(remove_tails(graph(4, {{0, 1, S}, {1, 2, X}, {2, 3, S}})).edges().empty());
  const auto pendant = graph(4, {{0, 1, S}, {1, 2, X}, {0, 2, X}, {2, 3, S}});
  EXPECT_EQ(remove_tails(pendant).edges().size(), 3U);
  const auto sq = alternating_square();
  EXPECT_EQ(remove_tails(sq).edges().size(), 4U);
}

TEST(ZigzagFold, Examples) {
  const auto chain = zigzag_fold(graph(4, {{0, 1, S}, {1, 2, S}, {2, 3, S}}));
  EXPECT_FALSE(chain.conflict);
  EXPECT_EQ(chain.graph.edges().size(), 1U);
  EXPECT_EQ(chain.graph.edges()[0].mark, S);

  const auto tri = zigzag_fold(graph(3, {{0, 1, S}, {1, 2, S}, {0, 2, S}}));
  EXPECT_FALSE(tri.conflict);
  EXPECT_EQ(tri.graph.edges().size(), 1U);

  // A strictly alternating square has no adjacent selected edges.
  const auto sq = zigzag_fold(alternating_square());
  EXPECT_FALSE(sq.conflict);
  EXPECT_EQ(sq.graph.edges().size(), 4U);

  // Three selected edges in a row with an excluded chord between the ends
  // fold into a parallel selected and excluded pair.
  const auto c = zigzag_fold(graph(4, {{0, 1, S}, {1, 2, S}, {2, 3, S}, {0, 3, X}}));
  EXPECT_TRUE(c.conflict);
}

TEST(Reduce, Examples) {
  EXPECT_FALSE(is_obtainable_graph(alternating_square()));
  EXPECT_TRUE(is_obtainable_graph(graph(5, {{0, 1, S}, {1, 2, X}, {1, 3, S}, {3, 4, X}})));
  EXPECT_FALSE(is_obtainable_graph(bridge_graph()));
  EXPECT_TRUE(is_obtainable_graph(gen_levels_graph(2)));
  EXPECT_TRUE(is_obtainable_graph(SeGraph{}));
}

TEST(AlternatingCycle, Square) {
  const auto g = alternating_square();
  const auto c = find_alternating_cycle(g);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->steps.size(), 4U);
  EXPECT_EQ(validate_alternating_cycle(g, *c), "");
}

TEST(AlternatingCycle, AcyclicHasNone) {
  EXPECT_FALSE(find_alternating_cycle(graph(4, {{0, 1, S}, {1, 2, X}, {2, 3, S}})).has_value());
}

TEST(AlternatingCycle, BridgeCrossesTheMiddleTwice) {
  const auto g = bridge_graph();
  const auto c = find_alternating_cycle(g);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(validate_alternating_cycle(g, *c), "");
  std::map<std::size_t, int> uses;
  for (const auto& s : c->steps) ++uses[s.edge];
  EXPECT_EQ(uses[3], 2);  // middle selected, excluded, selected
  EXPECT_EQ(uses[4], 2);
  EXPECT_EQ(uses[5], 2);
}

TEST(AlternatingCycle, ValidatorRejectsMalformedWalks) {
  const auto g = alternating_square();
  auto c = *find_alternating_cycle(g);
  auto broken = c;
  broken.steps.pop_back();
  EXPECT_NE(validate_alternating_cycle(g, broken), "");
  AlternatingCycle two_excluded{{{1, 1, 2}, {1, 2, 1}}};
  EXPECT_NE(validate_alternating_cycle(g, two_excluded), "");
  EXPECT_NE(validate_alternating_cycle(g, AlternatingCycle{}), "");
}

TEST(AssignValues, Examples) {
  const auto path = graph(3, {{0, 1, S}, {1, 2, S}});
  const auto a = assign_values(path);
  ASSERT_TRUE(a.has_value());
  EXPECT_TRUE(witnesses(path, *a));

  const auto tri = graph(3, {{0, 1, S}, {1, 2, S}, {0, 2, S}});
  EXPECT_EQ(*assign_values(tri), (Assignment{1, 1, 1}));

  EXPECT_FALSE(assign_values(alternating_square()).has_value());
}

TEST(Levels, Shape) {
  const auto g1 = gen_levels_graph(1);
  EXPECT_EQ(g1.node_count(), 5U);
  EXPECT_EQ(g1.edges().size(), 5U);
  const auto g2 = gen_levels_graph(2);
  EXPECT_EQ(g2.node_count(), 7U);
  EXPECT_EQ(g2.edges().size(), 7U);
  EXPECT_THROW(gen_levels_graph(0), PreconditionError);
}

TEST(Levels, TwoNeedsThreeValues) {
  const auto g = gen_levels_graph(2);
  const auto a = assign_values(g);
  ASSERT_TRUE(a.has_value());
  EXPECT_TRUE(witnesses(g, *a));
  EXPECT_EQ(oracle::min_distinct_values(g), std::optional<std::size_t>{3});
}

TEST(Oracle, ValueBoundIsEnough) {
  // Any witness compresses to values 1..|nodes| when it uses value 1.
  std::mt19937_64 rng(44);
  for (int k = 0; k < 200; ++k) {
    const auto g = oracle::random_se_graph(rng, 5);
    if (g.count(S) == 0) continue;
    Assignment a(g.node_count());
    for (auto& v : a) v = static_cast<unsigned>(rng() % 20) + 1;
    if (!witnesses(g, a)) continue;
    std::vector<unsigned> vals(a.begin(), a.end());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    Assignment c = a;
    for (auto& v : c) v = static_cast<unsigned>(std::lower_bound(vals.begin(), vals.end(), v) - vals.begin()) + 1;
    EXPECT_TRUE(witnesses(g, c));
  }
}

TEST(Oracle, EquivalenceOnRandomGraphs) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 300; ++k) {
    const auto g = oracle::random_se_graph(rng, 7);
    const bool truth = oracle::witness_assignment(g).has_value();
    EXPECT_EQ(is_obtainable_graph(g), truth) << to_dot(g);
    const auto c = find_alternating_cycle(g);
    EXPECT_EQ(!c.has_value(), truth) << to_dot(g);
    if (c) EXPECT_EQ(validate_alternating_cycle(g, *c), "");
    const auto a = assign_values(g);
    EXPECT_EQ(a.has_value(), truth) << to_dot(g);
    if (a) EXPECT_TRUE(witnesses(g, *a));
  }
}

TEST(Oracle, ConflictPatternsHaveNoWitness) {
  SeGraph parallel = graph(2, {{0, 1, S}, {0, 1, X}});
  EXPECT_FALSE(oracle::witness_assignment(parallel).has_value());
  EXPECT_FALSE(is_obtainable_graph(parallel));
  // An excluded loop beside a selected edge is still satisfiable.
  SeGraph loop = graph(2, {{0, 1, S}, {0, 0, X}});
  EXPECT_TRUE(witnesses(loop, {2, 1}));
  EXPECT_TRUE(oracle::witness_assignment(loop).has_value());
  EXPECT_TRUE(is_obtainable_graph(loop));
}

TEST(BergeAcyclic, Examples) {
  const std::vector<Formula> chain{P("x"), P("true"), P("!x")};
  EXPECT_TRUE(is_berge_acyclic(maxsets(chain)));
  const std::vector<Formula> t{P("x"), P("y"), P("!(x <-> y)")};
  EXPECT_FALSE(is_berge_acyclic(maxsets(t)));
  EXPECT_FALSE(is_berge_acyclic(maxsets(four_cycle())));
}

TEST(LabelAcyclic, ChainTraces) {
  const std::vector<Formula> chain{P("x"), P("true"), P("!x")};
  const auto p = label_acyclic(P("x"), chain);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(*p, PriorityPartition({index_set({0}), index_set({1, 2})}, 3));
  const auto q = label_acyclic(P("x | !x"), chain);
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(*q, PriorityPartition({index_set({0, 2}), index_set({1})}, 3));
}

TEST(LabelAcyclic, TriangleNeverReturnsAWrongPartition) {
  const std::vector<Formula> t{P("x"), P("y"), P("!(x <-> y)")};
  for (const char* r : {"x", "x & y", "x | y", "!x & y"}) {
    try {
      const auto p = label_acyclic(P(r), t);
      if (p) EXPECT_TRUE(equivalent(merge_priority(t, *p), P(r))) << r;
    } catch (const NotAcyclic&) {
    }
  }
}

TEST(LabelAcyclic, CycleThroughALargerMaxsetStops) {
  // The third maxset found, {B,C,E}, meets labels from both earlier ones.
  const auto s = synthesize(LetterFamily{{{"A", "B"}, {"B", "C", "E"}, {"A", "E"}}});
  EXPECT_FALSE(is_berge_acyclic(maxsets(s.formulas)));
  const auto r = conjunction_of(index_set({0, 1}), s.formulas);
  EXPECT_THROW(label_acyclic(r, s.formulas), NotAcyclic);
}

TEST(LabelAcyclic, RandomHypertrees) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 60; ++k) {
    const auto lf = oracle::random_hypertree(rng, 4);
    const auto s = synthesize(lf);
    const auto fam = maxsets(s.formulas);
    ASSERT_TRUE(is_berge_acyclic(fam));
    std::vector<IndexSet> chosen;
    for (const auto& m : fam.sets) {
      if (rng() % 2 == 0) chosen.push_back(m.members);
    }
    if (chosen.empty()) chosen.push_back(fam.sets.front().members);
    const auto r = oracle::or_of(chosen, s.formulas);
    const auto p = label_acyclic(r, s.formulas);
    ASSERT_TRUE(p.has_value()) << r.to_string();
    EXPECT_TRUE(equivalent(merge_priority(s.formulas, *p), r, fam.universe));
  }
}

TEST(PartitionFromAssignment, FourCycleSubgraph) {
  const std::vector<Formula> t{P("x"), P("y"), P("!(x <-> y)")};
  const auto b = build_se_graph(P("x & y"), t);
  const auto a = assign_values(b.graph);
  ASSERT_TRUE(a.has_value());
  const auto p = partition_from_assignment(b, *a);
  EXPECT_TRUE(equivalent(merge_priority(t, p), P("x & y")));
}

TEST(Dot, Emits) {
  const auto g = graph(2, {{0, 1, X}});
  EXPECT_EQ(to_dot(g), "graph se {\n  n0 [label=\"n0\"];\n  n1 [label=\"n1\"];\n  n0 -- n1 [label=\"X\"];\n}\n");
  const Assignment a{1, 2};
  EXPECT_NE(to_dot(g, &a).find("n1 [label=\"n1=2\"]"), std::string::npos);
}

TEST(Oracles, ConstraintOracleMatchesBacktracking) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 500; ++k) {
    const auto g = oracle::random_se_graph(rng, 7);
    EXPECT_EQ(oracle::witness_assignment(g).has_value(),
              oracle::min_distinct_values(g).has_value())
        << to_dot(g);
  }
}

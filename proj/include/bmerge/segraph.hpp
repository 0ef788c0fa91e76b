#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bmerge/formula.hpp"
#include "bmerge/maxsets.hpp"
#include "bmerge/priority.hpp"

namespace bmerge {

enum class Mark { Selected, Excluded };

struct SeEdge {
  std::size_t u = 0;
  std::size_t v = 0;  // u <= v; u == v is a loop
  Mark mark = Mark::Selected;

  bool loop() const { return u == v; }
  std::size_t other(std::size_t x) const { return x == u ? v : u; }
  friend auto operator<=>(const SeEdge&, const SeEdge&) = default;
};

// Multigraph of bases whose edges are two-element maxsets. Every node keeps
// the list of original nodes it stands for after merges and splits.
class SeGraph {
 public:
  std::size_t add_node(std::string label, std::vector<std::size_t> origins = {});
  std::size_t add_edge(std::size_t u, std::size_t v, Mark mark);

  std::size_t node_count() const { return labels_.size(); }
  const std::vector<SeEdge>& edges() const { return edges_; }
  const std::string& label(std::size_t n) const { return labels_[n]; }
  const std::vector<std::size_t>& origins(std::size_t n) const { return origins_[n]; }

  // Edge indices incident to each node; a loop is listed once.
  std::vector<std::vector<std::size_t>> incidence() const;
  // Degree counting a loop once.
  std::vector<std::size_t> degrees() const;
  std::size_t count(Mark mark) const;

  bool empty() const { return edges_.empty() && labels_.empty(); }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> origins_;
  std::vector<SeEdge> edges_;
};

struct SeGraphBuild {
  SeGraph graph;  // node i is base i
  std::vector<std::size_t> selected_singletons;
  std::vector<std::size_t> excluded_singletons;
  TargetShape shape;
};

// Throws PreconditionError when a maxset has three or more members.
SeGraphBuild build_se_graph(const Formula& r, std::span<const Formula> bases,
                            std::span<const std::string> names = {});

// Value per node, every value at least 1.
using Assignment = std::vector<unsigned>;

// Minimality of every edge under the assignment, indexed like edges().
std::vector<bool> evaluate_assignment(const SeGraph& g, const Assignment& a);

// True iff the minimal edges are exactly the selected ones.
bool witnesses(const SeGraph& g, const Assignment& a);

SeGraph full_disconnection(const SeGraph& g);
SeGraph remove_tails(const SeGraph& g);

struct FoldResult {
  SeGraph graph;
  bool conflict = false;
};

FoldResult zigzag_fold(const SeGraph& g);

struct Reduction {
  SeGraph graph;
  bool conflict = false;
  bool obtainable() const { return !conflict && graph.edges().empty(); }
};

Reduction reduce(const SeGraph& g);
bool is_obtainable_graph(const SeGraph& g);

struct WalkStep {
  std::size_t edge = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  friend bool operator==(const WalkStep&, const WalkStep&) = default;
};

// Closed walk alternating one excluded edge with an odd run of selected edges.
struct AlternatingCycle {
  std::vector<WalkStep> steps;
};

std::optional<AlternatingCycle> find_alternating_cycle(const SeGraph& g);

// Structural check of a certificate; returns an empty string when valid,
// otherwise the reason it is malformed.
std::string validate_alternating_cycle(const SeGraph& g, const AlternatingCycle& c);

std::optional<Assignment> assign_values(const SeGraph& g);

// Selected triangle plus an alternating chain of 2n edges, excluded first.
SeGraph gen_levels_graph(std::size_t n);

bool is_berge_acyclic(const MaxsetFamily& fam);

// Labeling procedure for Berge-acyclic profiles. Throws NotAcyclic when a
// maxset meets two labels; returns nothing when the final merge differs from r.
std::optional<PriorityPartition> label_acyclic(const Formula& r, std::span<const Formula> bases);

// Priority partition realizing a witnessing assignment of build.graph.
PriorityPartition partition_from_assignment(const SeGraphBuild& build, const Assignment& a);

// DOT text; `values` adds the assigned value to each node label.
std::string to_dot(const SeGraph& g, const Assignment* values = nullptr);

}  // namespace bmerge

#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bmerge/error.hpp"
#include "bmerge/maxsets.hpp"
#include "bmerge/priority.hpp"
#include "bmerge/segraph.hpp"
#include "bmerge/weights.hpp"
#include "profile.hpp"

namespace bmerge::cli {

using nlohmann::json;

namespace {

// Usage problems that CLI11 cannot see, such as a missing --weights.
struct UsageError : Error {
  using Error::Error;
};

std::string render(const json& j) { return j.dump(2) + "\n"; }

json names_of(IndexSet s, const std::vector<std::string>& names) {
  json out = json::array();
  for (auto i : indices_of(s)) out.push_back(names[i]);
  return out;
}

json model_list(const ModelSet& ms) {
  json out = json::array();
  for (const auto& i : ms.interpretations()) out.push_back(i.to_string());
  return out;
}

WeightPair parse_weights(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--weights expects w1,w2");
  try {
    std::size_t used1 = 0, used2 = 0;
    const auto a = std::stoull(text.substr(0, comma), &used1);
    const auto b = std::stoull(text.substr(comma + 1), &used2);
    if (used1 != comma || used2 != text.size() - comma - 1) throw UsageError("bad weights");
    return WeightPair(a, b);
  } catch (const std::logic_error&) {
    throw UsageError("--weights expects two positive integers, got '" + text + "'");
  }
}

void require_two_bases(const Profile& p) {
  if (p.bases.size() != 2) {
    throw UsageError("weighted merging takes exactly two bases, the profile has " +
                     std::to_string(p.bases.size()));
  }
}

// {{{ merge

std::string cmd_merge(const Profile& p, const std::string& semantics,
                      const std::optional<std::string>& weights,
                      const std::optional<std::string>& partition) {
  const Universe u = p.universe_of(false);
  json out;
  out["semantics"] = semantics;
  if (semantics == "weighted") {
    require_two_bases(p);
    if (!weights) throw UsageError("weighted merging needs --weights w1,w2");
    const WeightPair w = parse_weights(*weights);
    const ModelSet ms = merge_weighted(p.bases[0], p.bases[1], w, p.metric, u);
    out["models"] = model_list(ms);
    out["dnf"] = ms.to_dnf().to_string();
    out["formula"] = nullptr;
    out["maxsets"] = nullptr;
    out["metric"] = std::string(to_string(p.metric));
  } else {
    if (!partition) throw UsageError("priority merging needs --partition");
    const auto pp = PriorityPartition::parse(*partition, p.names);
    const auto fam = maxsets(p.bases, u);
    const auto mins = minimal_maxsets(fam, pp);
    std::vector<Formula> terms;
    json sets = json::array();
    for (auto m : mins) {
      terms.push_back(conjunction_of(m, p.bases));
      sets.push_back(names_of(m, p.names));
    }
    const Formula f = disjunction(terms);
    const ModelSet ms = ModelSet::of(f, u);
    out["models"] = model_list(ms);
    out["dnf"] = ms.to_dnf().to_string();
    out["formula"] = f.to_string();
    out["maxsets"] = sets;
    out["metric"] = nullptr;
  }
  return render(out);
}

// }}}

// {{{ invert-weights

struct LocalSearchFlags {
  std::uint64_t seed = 0;
  std::uint64_t maxiter = 10000;
  std::uint64_t restart = 100;
  double noise = 0.1;
};

bool forward_matches(const Profile& p, const Universe& u, const WeightPair& w) {
  return merge_weighted(p.bases[0], p.bases[1], w, p.metric, u) ==
         ModelSet::of(*p.target, u);
}

std::string cmd_invert_weights(const Profile& p, const std::string& method,
                               const LocalSearchFlags& ls) {
  require_two_bases(p);
  const Formula& r = p.require_target();
  const Universe u = p.universe_of(true);
  json out;
  out["method"] = method;
  out["violated_condition"] = nullptr;
  out["witnesses"] = nullptr;
  out["bounds"] = nullptr;
  out["iterations"] = nullptr;
  std::optional<WeightPair> w;
  Verdict verdict = Verdict::Unknown;

  if (method == "exact" || method == "oracle") {
    const auto prof = DistanceProfile::from_formulas(p.bases[0], p.bases[1], r, p.metric, u);
    if (method == "exact") {
      const auto v = check_conditions(prof);
      verdict = v.verdict;
      if (verdict == Verdict::Obtainable) w = extract_weights(prof);
      if (v.violation) {
        out["violated_condition"] = v.violation->condition;
        json in = json::array(), outside = json::array();
        for (const auto& d : v.violation->in_r) in.push_back(d.to_string());
        for (const auto& d : v.violation->out_r) outside.push_back(d.to_string());
        out["witnesses"] = {{"in_target", in}, {"outside_target", outside}};
      }
    } else {
      const auto v = oracle_weights(prof);
      verdict = v.verdict;
      w = v.weights;
    }
    if (w && !forward_matches(p, u, *w)) {
      throw InternalInconsistency("weights " + std::to_string(w->w1) + "," +
                                  std::to_string(w->w2) + " do not reproduce the target");
    }
  } else {
    LocalSearchParams params;
    params.seed = ls.seed;
    params.maxiter = ls.maxiter;
    params.restart = ls.restart;
    params.noise = ls.noise;
    const auto res = local_search_weights(r, p.bases[0], p.bases[1], p.metric, u, params);
    out["bounds"] = {{"upper", res.a.to_string()}, {"lower", res.b.to_string()}};
    out["iterations"] = res.iterations;
    verdict = res.verdict;
    std::optional<Ratio> candidate = res.ratio;
    // A non-positive midpoint cannot be a weight ratio; use the positive part
    // of the bracket instead.
    if (verdict == Verdict::Unknown && candidate && !candidate->positive() && res.a.positive()) {
      candidate = midpoint(std::max(res.b, Ratio(0)), res.a);
    }
    if (verdict != Verdict::Unobtainable && candidate && candidate->positive()) {
      const WeightPair cw = weights_from_ratio(*candidate);
      // The search only brackets the ratio; the forward merge decides.
      if (forward_matches(p, u, cw)) {
        verdict = Verdict::Obtainable;
        w = cw;
      } else {
        verdict = Verdict::Unknown;
      }
    } else if (verdict != Verdict::Unobtainable) {
      verdict = Verdict::Unknown;
    }
  }

  out["verdict"] = std::string(to_string(verdict));
  out["w1"] = w ? json(w->w1) : json(nullptr);
  out["w2"] = w ? json(w->w2) : json(nullptr);
  out["ratio"] = w ? json(Ratio(static_cast<std::int64_t>(w->w1),
                                static_cast<std::int64_t>(w->w2)).to_string())
                   : json(nullptr);
  return render(out);
}

// }}}

// {{{ invert-priority

json certificate_json(const SeGraph& g, const AlternatingCycle& c) {
  json out = json::array();
  for (const auto& s : c.steps) {
    out.push_back({{"from", g.label(s.from)},
                   {"to", g.label(s.to)},
                   {"mark", g.edges()[s.edge].mark == Mark::Selected ? "selected" : "excluded"}});
  }
  return out;
}

bool all_binary(const MaxsetFamily& fam) {
  return std::all_of(fam.sets.begin(), fam.sets.end(),
                     [](const Maxset& m) { return indices_of(m.members).size() <= 2; });
}

std::string cmd_invert_priority(const Profile& p, const std::string& method, bool count) {
  const Formula& r = p.require_target();
  const auto shape = analyze_target(r, p.bases);
  const auto& fam = shape.family;
  json out;
  out["certificate"] = nullptr;
  out["counterexample"] = nullptr;
  out["partition"] = nullptr;
  out["all_orderings_count"] = nullptr;
  out["reason"] = nullptr;

  if (method == "acyclic" && !is_berge_acyclic(fam)) {
    throw UsageError("the maxsets are not Berge-acyclic; use --method graph or bruteforce");
  }
  if (method == "graph" && !all_binary(fam)) {
    throw UsageError("the graph method needs maxsets of at most two bases");
  }
  if (method == "bruteforce" && p.bases.size() > bruteforce_cap()) {
    throw UsageError("brute force is limited to " + std::to_string(bruteforce_cap()) + " bases");
  }

  std::optional<PriorityPartition> found;
  std::string used;
  std::string verdict;
  if (!shape.or_of_maxsets) {
    used = "or-of-maxsets check";
    verdict = "unobtainable";
    out["reason"] = "the target is not a disjunction of maxsets";
    const auto chk = is_or_of_maxsets(r, p.bases);
    if (chk.counterexample) out["counterexample"] = chk.counterexample->to_string();
  } else {
    const bool try_acyclic =
        method == "acyclic" || (method == "auto" && is_berge_acyclic(fam));
    if (try_acyclic) {
      used = "acyclic";
      found = label_acyclic(r, p.bases);
      if (found) verdict = "obtainable";
    }
    const bool try_graph =
        verdict.empty() && (method == "graph" || (method == "auto" && all_binary(fam)));
    if (try_graph) {
      used = "graph";
      const auto build = build_se_graph(r, p.bases, p.names);
      const auto a = assign_values(build.graph);
      const auto cycle = find_alternating_cycle(build.graph);
      if (a.has_value() == cycle.has_value() ||
          a.has_value() != is_obtainable_graph(build.graph)) {
        throw InternalInconsistency("se-graph procedures disagree on obtainability");
      }
      if (a) {
        found = partition_from_assignment(build, *a);
        verdict = "obtainable";
      } else {
        const auto why = validate_alternating_cycle(build.graph, *cycle);
        if (!why.empty()) throw InternalInconsistency("malformed certificate: " + why);
        out["certificate"] = certificate_json(build.graph, *cycle);
        verdict = "unobtainable";
      }
    }
    if (verdict.empty()) {
      if (method == "acyclic") {
        verdict = "unknown";
      } else if (p.bases.size() > bruteforce_cap()) {
        throw UsageError("no applicable method: profile is neither Berge-acyclic nor binary, "
                         "and has more bases than the brute-force limit");
      } else {
        used = "bruteforce";
        found = invert_priority_bruteforce(r, p.bases);
        verdict = found ? "obtainable" : "unobtainable";
      }
    }
  }
  if (found) {
    const Universe u = p.universe_of(true);
    if (!equivalent(merge_priority(p.bases, *found), r, u)) {
      throw InternalInconsistency("partition " + found->format(p.names) +
                                  " does not merge to the target");
    }
    out["partition"] = found->format(p.names);
  }
  if (count) out["all_orderings_count"] = orderings_for(r, p.bases).size();
  out["method"] = used;
  out["verdict"] = verdict;
  return render(out);
}

// }}}

// {{{ maxsets, check, synth, graph, relax

std::string cmd_maxsets(const Profile& p) {
  const Universe u = p.universe_of(true);
  const auto fam = maxsets(p.bases, u);
  json sets = json::array();
  for (const auto& m : fam.sets) {
    sets.push_back({{"members", names_of(m.members, p.names)},
                    {"witness", Interpretation(u, m.witness).to_string()}});
  }
  json out;
  out["maxsets"] = sets;
  out["universe"] = u.names();
  out["berge_acyclic"] = is_berge_acyclic(fam);
  return render(out);
}

std::string cmd_check(const Profile& p) {
  const Formula& r = p.require_target();
  const auto chk = is_or_of_maxsets(r, p.bases);
  json out;
  out["or_of_maxsets"] = chk.holds;
  out["counterexample"] =
      chk.counterexample ? json(chk.counterexample->to_string()) : json(nullptr);
  if (is_satisfiable(r)) {
    const auto shape = analyze_target(r, p.bases);
    json sel = json::array(), exc = json::array();
    for (auto m : shape.selected) sel.push_back(names_of(m, p.names));
    for (auto m : shape.excluded) exc.push_back(names_of(m, p.names));
    out["selected"] = sel;
    out["excluded"] = exc;
  } else {
    out["selected"] = nullptr;
    out["excluded"] = nullptr;
  }
  return render(out);
}

std::string cmd_synth(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read '" + path + "'");
  json in;
  try {
    f >> in;
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid JSON: ") + e.what());
  }
  const json& sets = in.is_object() && in.contains("sets") ? in["sets"] : in;
  if (!sets.is_array()) throw UsageError("expected an array of letter sets");
  LetterFamily lf;
  try {
    for (const auto& s : sets) lf.sets.push_back(s.get<std::vector<std::string>>());
  } catch (const json::exception&) {
    throw UsageError("every letter set must be an array of strings");
  }
  const auto syn = synthesize(lf);
  json formulas = json::object();
  std::string profile;
  for (std::size_t i = 0; i < syn.letters.size(); ++i) {
    formulas[syn.letters[i]] = syn.formulas[i].to_string();
    profile += "base " + syn.letters[i] + ": " + syn.formulas[i].to_string() + "\n";
  }
  json out;
  out["letters"] = syn.letters;
  out["variables"] = syn.variables;
  out["formulas"] = formulas;
  out["profile"] = profile;
  return render(out);
}

std::string cmd_graph(const Profile& p, const std::string& emit, bool assign) {
  const Formula& r = p.require_target();
  const auto build = build_se_graph(r, p.bases, p.names);
  const auto& g = build.graph;
  std::optional<Assignment> a;
  if (assign) a = assign_values(g);
  if (emit == "dot") return to_dot(g, a ? &*a : nullptr);
  json nodes = json::array();
  for (std::size_t x = 0; x < g.node_count(); ++x) nodes.push_back(g.label(x));
  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"u", g.label(e.u)},
                     {"v", g.label(e.v)},
                     {"mark", e.mark == Mark::Selected ? "selected" : "excluded"}});
  }
  auto labels = [&](const std::vector<std::size_t>& xs) {
    json out = json::array();
    for (auto x : xs) out.push_back(g.label(x));
    return out;
  };
  json out;
  out["nodes"] = nodes;
  out["edges"] = edges;
  out["selected_singletons"] = labels(build.selected_singletons);
  out["excluded_singletons"] = labels(build.excluded_singletons);
  out["obtainable"] = is_obtainable_graph(g);
  if (a) {
    json vals = json::object();
    for (std::size_t x = 0; x < g.node_count(); ++x) vals[g.label(x)] = (*a)[x];
    out["values"] = vals;
  } else {
    out["values"] = nullptr;
  }
  return render(out);
}

std::string cmd_relax(const Profile& p, std::string& err) {
  const Formula& r = p.require_target();
  const auto c = relax_consistent(r, p.bases);
  const auto e = relax_entailed(r, p.bases);
  json out;
  out["consistent"] = c ? json(c->format(p.names)) : json(nullptr);
  out["entailed"] = e ? json(e->format(p.names)) : json(nullptr);
  out["warning"] = nullptr;
  if (!c && !e) {
    out["warning"] = "sources unreliable";
    err += "warning: sources unreliable: no maxset is consistent with the target\n";
  }
  return render(out);
}

// }}}

void apply_environment() {
  const char* cap = std::getenv("BMERGE_ENUM_CAP");
  if (!cap || !*cap) return;
  char* end = nullptr;
  const unsigned long v = std::strtoul(cap, &end, 10);
  if (*end != '\0' || v == 0) throw UsageError("BMERGE_ENUM_CAP must be a positive integer");
  set_enumeration_cap(v);
}

}  // namespace

Outcome run(const std::vector<std::string>& args) {
  Outcome res;
  CLI::App app{"Belief merging: forward merges and their inverses", "bmerge"};
  app.require_subcommand(1);

  std::string profile_path;
  auto add_profile = [&](CLI::App* sub) {
    sub->add_option("profile", profile_path, "profile file")->required();
  };

  auto* merge = app.add_subcommand("merge", "merge the bases of a profile");
  add_profile(merge);
  std::string semantics = "weighted";
  std::optional<std::string> weights, partition;
  merge->add_option("--semantics", semantics, "weighted or priority")
      ->check(CLI::IsMember({"weighted", "priority"}));
  merge->add_option("--weights", weights, "w1,w2 for weighted merging");
  merge->add_option("--partition", partition, "priority classes, e.g. 1:A,C;2:B");

  auto* invw = app.add_subcommand("invert-weights", "find weights producing the target");
  add_profile(invw);
  std::string wmethod = "exact";
  LocalSearchFlags ls;
  invw->add_option("--method", wmethod, "exact, oracle or local-search")
      ->check(CLI::IsMember({"exact", "oracle", "local-search"}));
  invw->add_option("--seed", ls.seed, "local-search seed");
  invw->add_option("--maxiter", ls.maxiter, "local-search iterations")->check(CLI::PositiveNumber);
  invw->add_option("--restart", ls.restart, "local-search restart period")
      ->check(CLI::PositiveNumber);
  invw->add_option("--noise", ls.noise, "local-search noise probability")
      ->check(CLI::Range(0.0, 1.0));

  auto* invp = app.add_subcommand("invert-priority", "find a priority partition for the target");
  add_profile(invp);
  std::string pmethod = "auto";
  bool count = false;
  invp->add_option("--method", pmethod, "auto, bruteforce, graph or acyclic")
      ->check(CLI::IsMember({"auto", "bruteforce", "graph", "acyclic"}));
  invp->add_flag("--count", count, "also count every witnessing partition");

  auto* ms = app.add_subcommand("maxsets", "list the maximal consistent subsets");
  add_profile(ms);
  auto* check = app.add_subcommand("check", "test whether the target is a disjunction of maxsets");
  add_profile(check);

  auto* synth = app.add_subcommand("synth", "build bases with prescribed maxsets");
  std::string synth_path;
  synth->add_option("family", synth_path, "JSON file with an array of letter sets")->required();

  auto* graph = app.add_subcommand("graph", "emit the selected/excluded graph");
  add_profile(graph);
  std::string emit = "dot";
  bool assign = false;
  graph->add_option("--emit", emit, "dot or json")->check(CLI::IsMember({"dot", "json"}));
  graph->add_flag("--assign", assign, "annotate nodes with witnessing values");

  auto* relax = app.add_subcommand("relax", "fallback partitions for unobtainable targets");
  add_profile(relax);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    res.out = o.str();
    res.err = er.str();
    res.code = code == 0 ? 0 : 2;
    return res;
  }

  try {
    apply_environment();
    if (synth->parsed()) {
      res.out = cmd_synth(synth_path);
      return res;
    }
    const Profile p = load_profile(profile_path);
    if (merge->parsed()) res.out = cmd_merge(p, semantics, weights, partition);
    if (invw->parsed()) res.out = cmd_invert_weights(p, wmethod, ls);
    if (invp->parsed()) res.out = cmd_invert_priority(p, pmethod, count);
    if (ms->parsed()) res.out = cmd_maxsets(p);
    if (check->parsed()) res.out = cmd_check(p);
    if (graph->parsed()) res.out = cmd_graph(p, emit, assign);
    if (relax->parsed()) res.out = cmd_relax(p, res.err);
  } catch (const InternalInconsistency& e) {
    res.code = 1;
    res.err += std::string("internal error: ") + e.what() + "\n";
  } catch (const Error& e) {
    res.code = 2;
    res.err += std::string("error: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    res.code = 1;
    res.err += std::string("internal error: ") + e.what() + "\n";
  }
  return res;
}

}  // namespace bmerge::cli

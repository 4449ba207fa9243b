#ifndef SEMGRAPH_SGRAPH_HPP
#define SEMGRAPH_SGRAPH_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semgraph/tree.hpp"

namespace semgraph {

// Directed edge-labeled multigraph with a partial source-name assignment.
// Nodes are 0..node_count-1. Edges form a multiset; parallel edges are kept.
// Every node is an edge endpoint or carries a source name.
struct SGraph {
  struct Edge {
    int from = 0;
    int to = 0;
    std::string label;
    // Which term leaf produced this edge during evaluation (path of the
    // edge/loop constant in the evaluated term). Ignored by iso_check.
    Path prov;

    bool operator<(const Edge& o) const;
    bool operator==(const Edge& o) const = default;
  };

  int node_count = 0;
  std::vector<Edge> edges;
  std::map<std::string, int> sources;   // name -> node

  bool valid(std::string* why = nullptr) const;
  int source_count() const { return static_cast<int>(sources.size()); }
  std::optional<std::string> source_name_of(int node) const;
  bool is_source_node(int node) const;
  bool empty() const { return node_count == 0; }
};

struct EvalError : std::runtime_error {
  Path at;
  EvalError(Path p, const std::string& msg)
      : std::runtime_error(msg + " (at " + path_to_string(p) + ")"), at(std::move(p)) {}
};

// One instance of the HR algebra: a declared finite set of source names.
struct HrAlgebra {
  std::vector<std::string> names;

  int k() const { return static_cast<int>(names.size()); }
  bool declared(const std::string& n) const;
  void require_declared(const std::string& n, const Path& at) const;
};

// ---- Constants and operations -------------------------------------------

SGraph const_empty();
SGraph const_edge(const HrAlgebra& alg, const std::string& a, const std::string& label,
                  const std::string& b);
SGraph const_loop(const HrAlgebra& alg, const std::string& a, const std::string& label);

// Disjoint union then fusion of equally named source nodes.
SGraph merge(const SGraph& g1, const SGraph& g2);
// The a-source node becomes a b-source node. No-op if a is unassigned.
// Throws EvalError if b is already assigned (and b != a).
SGraph rename_src(const SGraph& g, const std::string& a, const std::string& b);
// Drop the binding of a; no-op if unassigned.
SGraph forget_src(const SGraph& g, const std::string& a);

// Nodes incident both to an edge in `sub` and to one outside it. `sub` holds
// indices into g.edges; duplicates are ignored. Throws on out-of-range.
std::vector<int> boundary_nodes(const SGraph& g, const std::vector<int>& sub_edge_indices);

int source_count(const SGraph& g);

// Exact isomorphism: a node bijection preserving the edge multiset (labels
// included) and the source map exactly. Backtracking; fine at desk scale.
bool iso_check(const SGraph& g1, const SGraph& g2);

// Deterministic node renumbering: sources in name order first, then
// traversal by sorted incident-edge signature; edges sorted. Graphs that
// were built the same way serialize identically.
SGraph canonicalize(const SGraph& g);

// ---- Terms over the HR signature ----------------------------------------
//
// Terms are Trees whose symbols follow this internal naming:
//   merge               rank 2
//   forget[a]           rank 1
//   ren[a>b]            rank 1
//   edge[a,label,b]     rank 0
//   loop[a,label]       rank 0
//   empty               rank 0
// The text format is: merge(T,T), forget(a,T), ren(a,b,T), edge(a,l,b),
// loop(a,l), empty. Names and labels are [A-Za-z0-9_'<>]+ .

Tree hr_merge(Tree a, Tree b);
Tree hr_forget(const std::string& name, Tree t);
Tree hr_ren(const std::string& from, const std::string& to, Tree t);
Tree hr_edge(const std::string& a, const std::string& label, const std::string& b);
Tree hr_loop(const std::string& a, const std::string& label);
Tree hr_empty();

// Accessors for the bracket-encoded symbols. Return false if not that op.
bool hr_is_merge(const Tree& t);
bool hr_is_forget(const Tree& t, std::string* name = nullptr);
bool hr_is_ren(const Tree& t, std::string* from = nullptr, std::string* to = nullptr);
bool hr_is_edge(const Tree& t, std::string* a = nullptr, std::string* label = nullptr,
                std::string* b = nullptr);
bool hr_is_loop(const Tree& t, std::string* a = nullptr, std::string* label = nullptr);
bool hr_is_empty(const Tree& t);

// All source names mentioned by operators in t.
std::set<std::string> hr_names_used(const Tree& t);
// All edge labels mentioned by constants in t.
std::set<std::string> hr_labels_used(const Tree& t);
// Number of edge/loop constants in t (= edge count of the value).
int hr_constant_count(const Tree& t);

// Well-formedness over the algebra: known operators, declared names,
// edge(a,l,b) with a != b. Throws EvalError.
void hr_validate(const HrAlgebra& alg, const Tree& term);

// Bottom-up evaluation; result is canonicalized. Edge provenance carries the
// path of the producing constant. Rename violations raise EvalError with the
// offending subterm path.
SGraph eval_term(const HrAlgebra& alg, const Tree& term);
// As above but keeps internal node numbering (no canonicalization); useful
// when node identities must line up with a later canonical pass.
SGraph eval_term_raw(const HrAlgebra& alg, const Tree& term);

// Spec text format <-> internal symbol encoding.
Tree parse_hr_term(const std::string& text);
std::string format_hr_term(const Tree& term);

// Homomorphism whose images are HR terms (surface syntax in the file,
// internal encoding in memory).
Lth parse_hr_lth(const std::string& text);
std::string format_hr_lth(const Lth& h);

// ---- Serialization -------------------------------------------------------

// Canonical JSON: {"nodes":[...], "edges":[{from,label,to}...], "sources":{}}
// Node ids are "n0".."nK" in canonical order; edges sorted by (from,to,label).
std::string sgraph_to_json(const SGraph& g, int indent = -1);
SGraph sgraph_from_json(const std::string& json_text);

// DOT export; nodes carrying sources are annotated, nodes incident to the
// optional boundary query are shaded.
std::string sgraph_to_dot(const SGraph& g, const std::string& name = "g",
                          const std::vector<int>* sub_edge_indices = nullptr);

}  // namespace semgraph

#endif

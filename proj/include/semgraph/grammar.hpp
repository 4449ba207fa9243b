#ifndef SEMGRAPH_GRAMMAR_HPP
#define SEMGRAPH_GRAMMAR_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semgraph/sgraph.hpp"
#include "semgraph/tree.hpp"

namespace semgraph {

// Linear monadic context-free tree grammar. Nonterminals have rank 0 or 1;
// rank-1 rules rewrite A(x) to a context over nonterminals and terminals in
// which x occurs exactly once (spelled X internally).
struct LmCftg {
  struct Rule {
    std::string lhs;
    int lhs_rank = 0;        // 0 or 1
    Tree rhs;                // contains exactly one X iff lhs_rank == 1
  };

  std::map<std::string, int> nonterminals;   // name -> rank
  RankedSignature terminals;
  Alphabet alphabet;                          // terminal leaf -> token ("" = eps)
  std::string start;
  std::vector<Rule> rules;

  bool is_nonterminal(const std::string& s) const { return nonterminals.count(s) != 0; }
  void validate() const;                      // throws std::runtime_error
  std::vector<int> rules_for(const std::string& nt) const;
};

LmCftg parse_lmcftg(const std::string& text);
std::string format_lmcftg(const LmCftg& g);

// One recorded rule application while deriving.
struct RuleApplication {
  int rule = -1;                // index into grammar.rules
  int occurrence = -1;          // id of the expanded nonterminal occurrence
  int parent_occurrence = -1;   // occurrence whose expansion introduced it (-1: initial)
};

// A finished derivation: the produced terminal tree plus enough provenance to
// find pumpable cycles. Occurrence ids are stable across the replay.
struct DerivationRecord {
  Tree tree;
  std::vector<RuleApplication> steps;          // in application order
  // Per occurrence id: nonterminal name, rank, final positions.
  struct OccurrenceInfo {
    std::string nt;
    int rank = 0;
    int introduced_by = -1;                    // occurrence id, -1 for the start
    Path final_pos;                            // where its expansion root sits in tree
    Path final_arg_pos;                        // rank 1 only: where its argument ended up
    bool expanded = false;
  };
  std::vector<OccurrenceInfo> occurrences;

  Tokens yield(const LmCftg& g) const { return cfyield(tree, g.alphabet); }
};

struct DeriveLimit {
  int max_yield = -1;     // cap on non-eps token count, -1 = off
  int max_height = -1;    // cap on tree height, -1 = off
  int max_steps = 10000;  // hard cap on rule applications per derivation
  int max_results = -1;   // stop after this many derivations, -1 = off
};

// Exactly the derivations within the limit, deterministic order
// (breadth-first by meta-derivation size; children in rule order).
std::vector<DerivationRecord> derive_bounded(const LmCftg& g, const DeriveLimit& limit);

// Bounded membership: true iff t has a derivation whose recursion depth fits
// the bound. Exact for trees whose minimal derivation fits.
bool contains_tree(const LmCftg& g, const Tree& t, int depth_bound);

// Safe pumping threshold: (|N|+1) * (1 + max rule RHS height).
int pumping_height(const LmCftg& g);

struct PumpingDecomposition {
  Context c1 = Context::trivial();
  Context c2 = Context::trivial();
  Context c3 = Context::trivial();
  Context c4 = Context::trivial();
  Tree t5;
  // The repeated rank-1 nonterminal the decomposition came from.
  std::string nonterminal;

  Tree reassemble(int i) const;   // C1[v^i[t5]], v^0 = C3, v^{i+1} = C2[v^i[C4]]
};

// Deterministic decomposition of a tall derivation along a repeated rank-1
// nonterminal pair. Throws std::runtime_error if no cycle is found (cannot
// happen when height(tree) > pumping_height on a conforming grammar).
PumpingDecomposition pump_decompose(const LmCftg& g, const DerivationRecord& d);

Tree pump(const PumpingDecomposition& dec, int i);

// Upper bound on tokens plus edges a context of height <= p can produce:
// p * (max per-rule token emission + max per-rule edge emission).
int l0_bound(const LmCftg& g, const Lth& h);

// Token and edge emission of a single rule under h (used by l0_bound and
// reported by the CLI).
int rule_token_emission(const LmCftg& g, const LmCftg::Rule& r);
int rule_edge_emission(const LmCftg& g, const LmCftg::Rule& r, const Lth& h);

// ---- string grammars with semantic interpretations ------------------------

struct RelationEntry {
  Tokens word;
  SGraph graph;
  Tree derivation;   // the tree that produced the pair
};

// REL(G, h, HR_k) restricted to derivations within the limit.
std::vector<RelationEntry> build_relation(const LmCftg& g, const Lth& h, const HrAlgebra& alg,
                                          const DeriveLimit& limit);

struct AlignmentReport {
  bool aligned = true;
  struct Offender {
    std::string constant;
    std::string reason;
  };
  std::vector<Offender> offenders;
};

// Aligned: every token-bearing constant's image evaluates to a single edge
// labeled with the constant's token. Constants yielding eps are exempt.
AlignmentReport check_alignment(const LmCftg& g, const Lth& h, const HrAlgebra& alg);

}  // namespace semgraph

#endif

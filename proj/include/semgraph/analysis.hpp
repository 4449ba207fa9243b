#ifndef SEMGRAPH_ANALYSIS_HPP
#define SEMGRAPH_ANALYSIS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semgraph/csd.hpp"
#include "semgraph/grammar.hpp"
#include "semgraph/rng.hpp"
#include "semgraph/sgraph.hpp"
#include "semgraph/tree.hpp"

namespace semgraph {
namespace analysis {

// ---- reports ---------------------------------------------------------------

enum class Status { Pass, Fail, Inapplicable };

struct CheckLine {
  Status status = Status::Pass;
  std::string case_id;
  std::string detail;
};

struct Report {
  std::string checker;
  std::vector<CheckLine> lines;

  void pass(const std::string& case_id, const std::string& detail = "");
  void fail(const std::string& case_id, const std::string& detail = "");
  void inapplicable(const std::string& case_id, const std::string& detail = "");
  void absorb(const Report& other);

  bool ok() const;                      // no FAIL lines
  int count(Status s) const;
  std::string to_text() const;          // PASS|FAIL|INAPPLICABLE <checker> <case> <detail>
  std::string to_json() const;
};

// ---- count profiles ----------------------------------------------------------

// The eight CSD letters in a fixed order: a b c d a' b' c' d'.
extern const std::vector<std::string> kCsdLetters;

struct CountProfile {
  std::map<std::string, int> n;      // token counts in the yield
  std::map<std::string, int> e;      // edge counts in the evaluated image
  std::map<std::string, int> m_bar;  // max run of z'-only tokens (keys a'..d')
  std::map<std::string, int> r_bar;  // rightmost maximal z'-only run length

  int n_of(const std::string& z) const;
  int e_of(const std::string& z) const;
  int m_of(const std::string& zbar) const;
  int r_of(const std::string& zbar) const;
};

// Profile of a tree (or a context: pass the context tree; the hole is
// interpreted as the empty graph and contributes no tokens).
CountProfile count_profile(const Tree& u, const Alphabet& alphabet, const Lth& h,
                           const HrAlgebra& alg);
// Token-side only (no edges); cheap variant for yield reasoning.
CountProfile token_profile(const Tokens& w);

// ---- separation / asynchronicity ----------------------------------------------

struct SepPair {
  std::string x, y;
  static const std::vector<SepPair>& all();   // a/c, c/a, b/d, d/b
  std::string name() const { return x + "/" + y; }
  // The barred partners.
  std::string xbar() const { return x + "'"; }
  std::string ybar() const { return y + "'"; }
};

struct Separation {
  Path outer;   // hole of C_x = root of C_0
  Path inner;   // hole of C_0 = root of t_y
  Context cx = Context::trivial();
  Context c0 = Context::trivial();
  Tree ty;
  int c0_nodes = 0;
};

// Minimal l-separation (smallest C_0 node count, ties by leftmost paths),
// or nullopt.
std::optional<Separation> find_separation(const Tree& t, const Alphabet& alphabet,
                                          const SepPair& pair, int l);

// All separations (used by the inductive-bound checker).
std::vector<Separation> all_separations(const Tree& t, const Alphabet& alphabet,
                                        const SepPair& pair, int l);

struct Split {
  Path at;      // t' = subtree(t, at)
  Tree lower;
  int e_xbar = 0, e_ybar = 0;
};

// Smallest split (by node count of t', ties leftmost) satisfying the two
// asynchronicity inequalities, or nullopt.
std::optional<Split> check_asynchronous(const Tree& t, const Alphabet& alphabet, const Lth& h,
                                        const HrAlgebra& alg, const SepPair& pair, int l);

// ---- distance ------------------------------------------------------------------

// Block ids (1-based, aligned with g.edges) of a graph that is structurally a
// CSD graph for descriptor d; nullopt if the graph does not match.
std::optional<std::vector<int>> csd_blocks_of(const SGraph& g, const csd::Descriptor& d);

struct DistanceResult {
  int distance = 0;
  Path witness;                  // subtree achieving it
  std::vector<int> split_blocks; // block ids split by the witness
};

// Largest k such that some subtree of t generates edges from k blocks that
// also have edges outside the subtree. Edge attribution uses the traced
// homomorphism and edge provenance. Throws if graphof(t) is not the CSD
// graph of d.
DistanceResult max_distance(const Tree& t, const Lth& h, const HrAlgebra& alg,
                            const csd::Descriptor& d);

// Lemma 2 instance: every subtree splitting >= k blocks has >= k sources.
Report check_lemma2(const Tree& t, const Lth& h, const HrAlgebra& alg, const csd::Descriptor& d,
                    int k);

// ---- boundary lemma -------------------------------------------------------------

// For every subterm position of the HR term: all boundary nodes of the
// subterm's edge image carry a source in the subterm's value.
Report check_boundary_lemma(const HrAlgebra& alg, const Tree& term);

// Seeded generator of well-formed (rename-safe) HR terms.
Tree random_hr_term(Rng& rng, const HrAlgebra& alg, const std::vector<std::string>& labels,
                    int max_ops);

// ---- lemma instance checkers -----------------------------------------------------

struct Lemma4Result {
  int s = -1;                 // found threshold, -1 if none <= s_max
  int qualifying = 0;         // trees with yield in a* b^s c^s d*
  Report report;
};

// Smallest s <= s_max such that every derivation (height <= height_bound)
// with yield in a* b^s c^s d* has a subtree containing >= r tokens of some x
// and none of the matching y. For r = 0 the claim is trivial and s = 0.
Lemma4Result check_lemma4_instance(const LmCftg& g, int r, int s_max, int height_bound);

struct WitnessCheckResult {
  bool distant = false;
  int split_blocks = 0;
  int full_a_blocks_inside = 0;
  int blocks_with_cbar_inside = 0;
};

// Lemma 5 counting argument on a concrete edge subset of witness_pair(k,l).
// Preconditions (throws std::runtime_error if violated): the subset has at
// most q_a a'-edges and at least q_c c'-edges.
WitnessCheckResult distant_witness_check(const csd::WitnessPair& wp, int k, int l,
                                         const std::vector<int>& inside_edge_indices);

// Lemma 10 audit of a pumping decomposition.
Report pump_audit(const LmCftg& g, const Lth& h, const HrAlgebra& alg,
                  const PumpingDecomposition& dec, int membership_depth = 500);

struct PumpCase {
  enum class Kind { BarOnly, Core, Neutral, Violation } kind = Kind::Neutral;
  std::string bar;        // BarOnly: which barred letter
  std::string x, y;       // Core: the active pair
  int configuration = 0;  // Core: 1, 2 or 3
  std::string detail;
  std::string tag() const;
};

PumpCase classify_pump_case(const LmCftg& g, const PumpingDecomposition& dec);

// Lemmas 7-1 / 7-2: x bound for every l0-separation, y bound for at least
// one minimal separation.
Report check_inductive_bounds(const Tree& t, const Alphabet& alphabet, const Lth& h,
                              const HrAlgebra& alg, const SepPair& pair, int l0);

// Lemma 13 + 14: the pumped-down tree stays separated (node-removal
// construction) and minimal separations nest.
Report check_downward_separation(const Tree& t, const PumpingDecomposition& dec,
                                 const Alphabet& alphabet, const SepPair& pair, int l);

}  // namespace analysis
}  // namespace semgraph

#endif

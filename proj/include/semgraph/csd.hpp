#ifndef SEMGRAPH_CSD_HPP
#define SEMGRAPH_CSD_HPP

#include <optional>
#include <string>
#include <vector>

#include "semgraph/grammar.hpp"
#include "semgraph/sgraph.hpp"
#include "semgraph/tag.hpp"
#include "semgraph/tree.hpp"

namespace semgraph {
namespace csd {

// Fixed ten-symbol alphabet. Barred symbols are spelled a' b' c' d',
// brackets < and >.
enum class Token : uint8_t { A, B, C, D, Abar, Bbar, Cbar, Dbar, Open, Close };

using TokenString = std::vector<Token>;

const char* token_name(Token t);
std::optional<Token> token_from_name(const std::string& s);
TokenString to_csd_tokens(const Tokens& w);        // throws on foreign tokens
Tokens from_csd_tokens(const TokenString& w);

// The tuple (n, m, K) that uniquely names a CSD string and its graph.
struct Descriptor {
  std::vector<int> ka, kb, kc, kd;   // |ka| = |kc| = n >= 1, |kb| = |kd| = m >= 1

  int n() const { return static_cast<int>(ka.size()); }
  int m() const { return static_cast<int>(kb.size()); }
  bool valid(std::string* why = nullptr) const;
  bool operator==(const Descriptor& o) const = default;

  // CLI syntax: n=1 m=2 ka=2 kb=1,0 kc=1 kd=0,0
  static Descriptor parse_cli(const std::vector<std::string>& kv);
  std::string to_cli() const;
};

// Concatenation of n a-segments, m b-, n c-, m d-segments, where the i-th
// x-segment is x <^k x'^k >^k with k the i-th entry of K_x.
TokenString descriptor_to_string(const Descriptor& d);

struct ParseFailure {
  std::string kind;     // segment-order | balance | bar-count | alphabet | shape
  size_t position = 0;  // first offending token index
  std::string detail;
};

// The unique descriptor of w, or the first violation.
struct ParseResult {
  std::optional<Descriptor> descriptor;
  std::optional<ParseFailure> failure;
  bool ok() const { return descriptor.has_value(); }
};
ParseResult parse_csd_string(const TokenString& w);

// A CSD graph: the s-graph plus the block index of every edge (blocks
// 1..n+m; block i <= n is an a-block, the rest are b-blocks). The head node
// of the first block carries source rt.
struct CsdGraph {
  SGraph graph;
  std::vector<int> block_of;   // per edge index, 1-based block id

  int block_count() const;
};

CsdGraph descriptor_to_graph(const Descriptor& d);

// Structural re-validation that does not reuse the constructor's bookkeeping:
// re-derives blocks from the raw graph and compares. Returns true and fills
// nothing on success; on failure explains why.
bool validate_csd_graph(const CsdGraph& g, const Descriptor& d, std::string* why = nullptr);

std::pair<TokenString, CsdGraph> csd_pair(const Descriptor& d);

// Block equivalence of two edges (by index into g.graph.edges).
bool edges_equivalent(const CsdGraph& g, int e, int f);

// Lemma 5 witness o_{k,l}: r = s = 3l+k+1, n = m = r, every K entry = s.
struct WitnessPair {
  Descriptor descriptor;
  TokenString word;
  CsdGraph graph;
  int r = 0, s = 0;
  int q_a = 0;   // (2l+1)s
  int q_c = 0;   // (2l+k+1)s
};
WitnessPair witness_pair(int k, int l);

// ---- builtin grammars -------------------------------------------------------

// LM-CFTG for CSD_0 (all-zero chains) with its homomorphism into the
// two-source HR algebra.
struct BuiltinCsd0 {
  LmCftg grammar;
  Lth hom;
  HrAlgebra algebra;   // {rt, s}
};
const BuiltinCsd0& builtin_csd0();

// The derivation tree the grammar assigns to a given all-zero-K descriptor
// (the grammar is unambiguous).
Tree csd0_derivation(int n, int m);

// TAG for full CSD over two sources, with homomorphism.
struct BuiltinCsdTag {
  TagGrammar grammar;
  Lth hom;
  HrAlgebra algebra;   // {rt, s}
};
const BuiltinCsdTag& builtin_csd_tag();

// The unique derivation tree realizing a descriptor.
Tree csd_tag_derivation(const Descriptor& d);

}  // namespace csd
}  // namespace semgraph

#endif

#ifndef SEMGRAPH_TAG_HPP
#define SEMGRAPH_TAG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semgraph/tree.hpp"

namespace semgraph {

// A node of an elementary tree. Adjunction happens only at nodes explicitly
// marked as adjunction sites; roots and feet are never sites.
struct TagNode {
  enum class Role { Interior, Anchor, Foot, SubstSite, AdjoinSite };

  std::string cat;                 // category label (or token for anchors)
  Role role = Role::Interior;
  std::string token;               // anchors only
  std::string site_cat;            // subst/adjoin sites
  bool required = false;           // adjoin sites: must be filled
  std::vector<TagNode> kids;

  // Realization bookkeeping: which derivation node anchored this token.
  Path origin_path;
  bool origin_stamped = false;
};

struct ElementaryTree {
  std::string name;
  bool auxiliary = false;
  TagNode root;

  // Slots in preorder: substitution sites and adjunction sites.
  struct Slot {
    Path pos;                      // node position within the elementary tree
    bool substitution = false;
    std::string cat;
    bool required = false;
  };
  std::vector<Slot> slots;         // filled by finalize()

  void finalize();                 // collects slots, checks foot/root cats
  std::string root_cat() const { return root.cat; }
  std::optional<Path> foot_pos() const;
};

// TAG with substitution and adjunction; at most one adjunction per node
// (structural: one derivation slot per site).
struct TagGrammar {
  std::vector<ElementaryTree> trees;
  std::string start_tree;                         // name of the initial tree
  inline static const std::string kNone = "-";    // unfilled adjunction slot

  const ElementaryTree* find(const std::string& name) const;
  // Derivation signature: one symbol per elementary tree (rank = #slots)
  // plus the none marker of rank 0.
  RankedSignature derivation_signature() const;
  void validate() const;
};

struct TagRealizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RealizedTree {
  Tree derived;                    // leaf symbols are surface tokens or "eps"
  // For each surface token (in yield order), the derivation-tree position of
  // the elementary tree that anchored it.
  std::vector<Path> token_origin;
};

// Perform all substitutions and adjunctions bottom-up. Throws
// TagRealizeError on unresolved substitution sites, unfilled required
// adjunction sites, or category mismatches.
RealizedTree tag_realize(const TagGrammar& g, const Tree& derivation);

Tokens tag_yield(const TagGrammar& g, const Tree& derivation);

// All well-formed derivation trees whose yields have at most max_yield
// tokens (and at most max_nodes derivation nodes). Deterministic order.
std::vector<Tree> tag_derivations(const TagGrammar& g, int max_yield, int max_nodes = 10000);

// Text format:
//   tree <name> initial|auxiliary
//     <node-expr>
// node-expr := cat annotations ( kids ) | cat annotations
// annotations := @anchor(token) | @foot | @subst(Cat) | @adjoin(Cat) | @adjoin!(Cat)
TagGrammar parse_tag(const std::string& text);
std::string format_tag(const TagGrammar& g);

}  // namespace semgraph

#endif

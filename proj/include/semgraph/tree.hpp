#ifndef SEMGRAPH_TREE_HPP
#define SEMGRAPH_TREE_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace semgraph {

// Path from the root: child indices, empty = root.
using Path = std::vector<int>;

std::string path_to_string(const Path& p);

// Ranked tree with string symbols. The rank of a node is its child count;
// conformance to a declared signature is checked separately.
struct Tree {
  std::string sym;
  std::vector<Tree> kids;

  Tree() = default;
  explicit Tree(std::string s) : sym(std::move(s)) {}
  Tree(std::string s, std::vector<Tree> k) : sym(std::move(s)), kids(std::move(k)) {}

  bool leaf() const { return kids.empty(); }
  bool operator==(const Tree& o) const { return sym == o.sym && kids == o.kids; }
  bool operator!=(const Tree& o) const { return !(*this == o); }
};

struct RankedSignature {
  std::map<std::string, int> ranks;

  void declare(const std::string& sym, int rank);
  bool knows(const std::string& sym) const { return ranks.count(sym) != 0; }
  int rank(const std::string& sym) const;
  // true iff every node's symbol is declared with rank == child count
  bool well_ranked(const Tree& t) const;
};

int height(const Tree& t);          // constants have height 1
int node_count(const Tree& t);
const Tree& subtree(const Tree& t, const Path& p);
Tree with_subtree(Tree t, const Path& p, Tree replacement);
std::vector<Path> all_positions(const Tree& t);         // preorder
void leaves_in_order(const Tree& t, std::vector<const Tree*>& out);

// Prefix text format: f(t1,...,tn), constants bare. Hole spelled X.
Tree parse_tree(const std::string& text);
std::string format_tree(const Tree& t);

// The hole symbol used by contexts.
inline const char* kHole = "X";

// A tree with exactly one occurrence of the hole X. The hole path is cached.
class Context {
 public:
  // Throws if the tree does not contain exactly one X.
  explicit Context(Tree t);
  static Context trivial() { return Context(Tree(kHole)); }
  // Cut the subtree at p out of t, leaving the hole there.
  static Context cut(const Tree& t, const Path& p);

  const Tree& tree() const { return tree_; }
  const Path& hole() const { return hole_; }
  bool is_trivial() const { return tree_.sym == kHole; }
  // Height of the underlying tree, X counting as a leaf.
  int tree_height() const { return height(tree_); }

  Tree substitute(const Tree& filler) const;          // C[t]
  Context compose(const Context& inner) const;        // C1[C2[...]]

  bool operator==(const Context& o) const { return tree_ == o.tree_; }

 private:
  Tree tree_;
  Path hole_;
};

// Token sequences are vectors of token strings; leaf symbols may map to
// the empty token (epsilon) and then contribute nothing.
using Tokens = std::vector<std::string>;

std::string tokens_to_string(const Tokens& w);
Tokens tokens_from_string(const std::string& s);    // space separated

// Maps leaf symbols to surface tokens. Symbols absent from the map yield
// themselves; symbols mapped to "" yield nothing.
struct Alphabet {
  std::map<std::string, std::string> tok;
  std::string token_of(const std::string& leaf_sym) const;
};

Tokens cfyield(const Tree& t);                       // identity alphabet
Tokens cfyield(const Tree& t, const Alphabet& a);
// (left, right) with cfyield(C[t]) = left . cfyield(t) . right
std::pair<Tokens, Tokens> context_yields(const Context& c);
std::pair<Tokens, Tokens> context_yields(const Context& c, const Alphabet& a);

int count_tokens(const Tokens& w, const std::string& a);

// Linear tree homomorphism: image of each symbol sigma of rank n is a tree
// over the target signature extended with variables x1..xn, each occurring
// at most once.
struct Lth {
  std::map<std::string, Tree> images;   // key "sigma" (rank implicit in use)

  bool has_image(const std::string& sym) const { return images.count(sym) != 0; }
  // Throws std::runtime_error on rank mismatch / missing image.
  Tree apply(const Tree& t) const;
  // Like apply, but records for every node of the image which source-tree
  // position produced it (the sigma whose image contributed the node).
  Tree apply_traced(const Tree& t, std::map<Path, Path>* origin) const;
  // Check linearity: each variable occurs at most once in each image.
  bool linear() const;
};

// x1..xn variable helpers
bool is_variable(const std::string& sym);
int variable_index(const std::string& sym);          // x3 -> 3, 0 if none

// Homomorphism file format: lines "sigma/n -> <term with x1..xn>".
Lth parse_lth(const std::string& text);
std::string format_lth(const Lth& h);

}  // namespace semgraph

#endif

#include "doctest.h"

#include <functional>

#include "semgraph/rng.hpp"
#include "semgraph/tree.hpp"

using namespace semgraph;

namespace {

// Random tree over a tiny signature, for property runs.
Tree random_tree(Rng& rng, int depth) {
  if (depth <= 0 || rng.chance(0.4)) {
    const char* leaves[] = {"a", "b", "c"};
    return Tree(leaves[rng.below(3)]);
  }
  if (rng.chance(0.5)) return Tree("g", {random_tree(rng, depth - 1)});
  return Tree("f", {random_tree(rng, depth - 1), random_tree(rng, depth - 1)});
}

// Random context: plant a hole at a random leaf of a random tree.
Context random_context(Rng& rng, int depth) {
  Tree t = random_tree(rng, depth);
  std::vector<Path> leaves;
  for (const Path& p : all_positions(t))
    if (subtree(t, p).leaf()) leaves.push_back(p);
  return Context(with_subtree(t, leaves[rng.below(static_cast<int>(leaves.size()))], Tree(kHole)));
}

}  // namespace

TEST_CASE("tree parse and format round trip") {
  Tree t = parse_tree("f(a, g(b), f(c, a))");
  CHECK(t.sym == "f");
  CHECK(t.kids.size() == 3);
  CHECK(format_tree(t) == "f(a,g(b),f(c,a))");
  CHECK(parse_tree(format_tree(t)) == t);
  CHECK(parse_tree("a") == Tree("a"));
  CHECK_THROWS(parse_tree("f(a"));
  CHECK_THROWS(parse_tree("f(a))"));
}

TEST_CASE("height") {
  CHECK(height(Tree("a")) == 1);
  CHECK(height(parse_tree("f(a,b)")) == 2);
  CHECK(height(parse_tree("f(g(g(a)),b)")) == 4);
}

TEST_CASE("substitute") {
  Context c(parse_tree("f(a,X)"));
  CHECK(c.substitute(Tree("b")) == parse_tree("f(a,b)"));
  CHECK(Context::trivial().substitute(parse_tree("g(a)")) == parse_tree("g(a)"));
  CHECK_THROWS(Context(parse_tree("f(X,X)")));
  CHECK_THROWS(Context(parse_tree("f(a,b)")));
  // filler may not contain the hole
  CHECK_THROWS(c.substitute(Tree(kHole)));
}

TEST_CASE("substitution composes") {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    Context c1 = random_context(rng, 3);
    Context c2 = random_context(rng, 3);
    Tree t = random_tree(rng, 3);
    CHECK(c1.substitute(c2.substitute(t)) == c1.compose(c2).substitute(t));
  }
}

TEST_CASE("cfyield basics") {
  CHECK(cfyield(Tree("c")) == Tokens{"c"});
  CHECK(cfyield(parse_tree("f(a,f(b,c))")) == Tokens{"a", "b", "c"});
  Alphabet al;
  al.tok["eps_leaf"] = "";
  al.tok["w"] = "word";
  CHECK(cfyield(parse_tree("f(eps_leaf,w,a)"), al) == Tokens{"word", "a"});
}

TEST_CASE("context yields satisfy the concatenation law") {
  Context c(parse_tree("f(a,f(X,c))"));
  auto [l, r] = context_yields(c);
  CHECK(l == Tokens{"a"});
  CHECK(r == Tokens{"c"});
  auto [le, re] = context_yields(Context::trivial());
  CHECK(le.empty());
  CHECK(re.empty());

  // Randomized law: cfyield(C[t]) = left . cfyield(t) . right, with cfyield
  // of the substituted tree as the oracle.
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    Context c2 = random_context(rng, 4);
    Tree t = random_tree(rng, 3);
    auto [lft, rgt] = context_yields(c2);
    Tokens expect = lft;
    Tokens mid = cfyield(t);
    expect.insert(expect.end(), mid.begin(), mid.end());
    expect.insert(expect.end(), rgt.begin(), rgt.end());
    CHECK(cfyield(c2.substitute(t)) == expect);
  }
}

TEST_CASE("height of substitution is bounded") {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    Context c = random_context(rng, 4);
    Tree t = random_tree(rng, 3);
    CHECK(height(c.substitute(t)) <= c.tree_height() + height(t) - 1);
  }
}

TEST_CASE("count_tokens") {
  Tokens w = {"a", "b", "b", "c", "d", "d"};
  CHECK(count_tokens(w, "b") == 2);
  CHECK(count_tokens({}, "a") == 0);
}

TEST_CASE("homomorphism application") {
  // Identity-shaped homomorphism: images mirror the symbols.
  Lth ident;
  ident.images["f"] = parse_tree("F(x1,x2)");
  ident.images["g"] = parse_tree("G(x1)");
  ident.images["a"] = Tree("A");
  ident.images["b"] = Tree("B");
  ident.images["c"] = Tree("CC");
  Tree t = parse_tree("f(g(a),b)");
  CHECK(ident.apply(t) == parse_tree("F(G(A),B)"));

  // Rank misuse is caught.
  Lth bad;
  bad.images["a"] = parse_tree("K(x1)");
  CHECK_THROWS(bad.apply(Tree("a")));
}

TEST_CASE("homomorphism linearity and the node-count oracle") {
  Lth h;
  h.images["f"] = parse_tree("pair(x2,wrap(x1))");
  h.images["a"] = parse_tree("leafA");
  h.images["b"] = parse_tree("two(leafB,leafB)");
  CHECK(h.linear());

  // Structural count: |h(t)| equals the sum over nodes of t of the non-var
  // node counts of their images (each subtree image used exactly once here).
  Rng rng(99);
  auto image_size = [&](const std::string& sym) {
    int vars = 0, total = node_count(h.images.at(sym));
    std::vector<const Tree*> stack{&h.images.at(sym)};
    while (!stack.empty()) {
      const Tree* n = stack.back();
      stack.pop_back();
      if (is_variable(n->sym)) ++vars;
      for (const Tree& k : n->kids) stack.push_back(&k);
    }
    return total - vars;
  };
  for (int i = 0; i < 100; ++i) {
    // Trees over f/2, a, b only.
    std::function<Tree(int)> gen = [&](int d) -> Tree {
      if (d <= 0 || rng.chance(0.4)) return Tree(rng.chance(0.5) ? "a" : "b");
      return Tree("f", {gen(d - 1), gen(d - 1)});
    };
    Tree t = gen(4);
    int expect = 0;
    for (const Path& p : all_positions(t)) expect += image_size(subtree(t, p).sym);
    CHECK(node_count(h.apply(t)) == expect);
  }

  Lth nonlinear;
  nonlinear.images["g"] = parse_tree("d(x1,x1)");
  CHECK(!nonlinear.linear());
}

TEST_CASE("hom file format round trip") {
  std::string text = "f/2 -> merge(x1,ren(rt,s,x2))\na/0 -> loop(rt,a)\n";
  Lth h = parse_lth(text);
  CHECK(h.images.at("f") == parse_tree("merge(x1,ren(rt,s,x2))"));
  Lth again = parse_lth(format_lth(h));
  CHECK(again.images == h.images);
  CHECK_THROWS(parse_lth("g/2 -> d(x1,x1)\n"));   // nonlinear
}

TEST_CASE("apply_traced records origins") {
  Lth h;
  h.images["f"] = parse_tree("F(G(x1),x2)");
  h.images["a"] = Tree("A");
  h.images["b"] = Tree("B");
  std::map<Path, Path> origin;
  Tree img = h.apply_traced(parse_tree("f(a,b)"), &origin);
  CHECK(img == parse_tree("F(G(A),B)"));
  CHECK(origin.at(Path{}) == Path{});          // F from f
  CHECK(origin.at(Path{0}) == Path{});         // G from f
  CHECK(origin.at(Path{0, 0}) == Path{0});     // A from a
  CHECK(origin.at(Path{1}) == Path{1});        // B from b
}

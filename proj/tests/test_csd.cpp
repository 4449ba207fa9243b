#include "doctest.h"

#include "semgraph/analysis.hpp"
#include "semgraph/csd.hpp"
#include "semgraph/rng.hpp"

using namespace semgraph;
using namespace semgraph::csd;

namespace {
Descriptor mk(std::vector<int> ka, std::vector<int> kb, std::vector<int> kc,
              std::vector<int> kd) {
  Descriptor d;
  d.ka = std::move(ka);
  d.kb = std::move(kb);
  d.kc = std::move(kc);
  d.kd = std::move(kd);
  return d;
}

Descriptor random_descriptor(Rng& rng, int max_nm, int max_k) {
  int n = 1 + rng.below(max_nm), m = 1 + rng.below(max_nm);
  Descriptor d;
  for (int i = 0; i < n; ++i) d.ka.push_back(rng.below(max_k + 1));
  for (int i = 0; i < m; ++i) d.kb.push_back(rng.below(max_k + 1));
  for (int i = 0; i < n; ++i) d.kc.push_back(rng.below(max_k + 1));
  for (int i = 0; i < m; ++i) d.kd.push_back(rng.below(max_k + 1));
  return d;
}

int label_count(const SGraph& g, const std::string& l) {
  int n = 0;
  for (const auto& e : g.edges)
    if (e.label == l) ++n;
  return n;
}
}  // namespace

TEST_CASE("descriptor_to_string on the worked example") {
  Descriptor d = mk({2}, {1, 0}, {1}, {0, 0});
  CHECK(tokens_to_string(from_csd_tokens(descriptor_to_string(d))) ==
        "a < < a' a' > > b < b' > b c < c' > d d");
  CHECK(tokens_to_string(from_csd_tokens(descriptor_to_string(mk({0}, {0}, {0}, {0})))) ==
        "a b c d");
}

TEST_CASE("parse_csd_string accepts and rejects") {
  auto res = parse_csd_string(to_csd_tokens(tokens_from_string(
      "a < < a' a' > > b < b' > b c < c' > d d")));
  REQUIRE(res.ok());
  CHECK(*res.descriptor == mk({2}, {1, 0}, {1}, {0, 0}));
  CHECK(res.descriptor->n() == 1);
  CHECK(res.descriptor->m() == 2);

  auto plain = parse_csd_string(to_csd_tokens(tokens_from_string("a b c d")));
  REQUIRE(plain.ok());
  CHECK(*plain.descriptor == mk({0}, {0}, {0}, {0}));

  auto bad = parse_csd_string(to_csd_tokens(tokens_from_string("a < a' a' > b c d")));
  REQUIRE(!bad.ok());
  CHECK(bad.failure->kind == "bar-count");

  auto order = parse_csd_string(to_csd_tokens(tokens_from_string("b a c d")));
  REQUIRE(!order.ok());
  CHECK(order.failure->kind == "segment-order");

  auto shape = parse_csd_string(to_csd_tokens(tokens_from_string("a b c c d")));
  REQUIRE(!shape.ok());
  CHECK(shape.failure->kind == "shape");

  auto trailing = parse_csd_string(to_csd_tokens(tokens_from_string("a b c d a")));
  REQUIRE(!trailing.ok());
  CHECK(trailing.failure->kind == "segment-order");

  CHECK_THROWS(to_csd_tokens(tokens_from_string("a z")));
}

TEST_CASE("string round trip on random descriptors") {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    Descriptor d = random_descriptor(rng, 4, 4);
    auto res = parse_csd_string(descriptor_to_string(d));
    REQUIRE(res.ok());
    CHECK(*res.descriptor == d);
  }
}

TEST_CASE("descriptor_to_graph shape") {
  // Worked example: 3 blocks, 6 core edges, 2+1+1 chain edges.
  Descriptor d = mk({2}, {1, 0}, {1}, {0, 0});
  CsdGraph g = descriptor_to_graph(d);
  CHECK(g.block_count() == 3);
  CHECK(g.graph.edges.size() == 10);
  CHECK(label_count(g.graph, "a") == 1);
  CHECK(label_count(g.graph, "b") == 2);
  CHECK(label_count(g.graph, "c") == 1);
  CHECK(label_count(g.graph, "d") == 2);
  CHECK(label_count(g.graph, "a'") == 2);
  CHECK(label_count(g.graph, "b'") == 1);
  CHECK(label_count(g.graph, "c'") == 1);
  CHECK(label_count(g.graph, "d'") == 0);
  CHECK(g.graph.sources.size() == 1);
  std::string why;
  CHECK_MESSAGE(validate_csd_graph(g, d, &why), why);

  CsdGraph tiny = descriptor_to_graph(mk({0}, {0}, {0}, {0}));
  CHECK(tiny.block_count() == 2);
  CHECK(tiny.graph.edges.size() == 4);
  CHECK(validate_csd_graph(tiny, mk({0}, {0}, {0}, {0})));
}

TEST_CASE("edge-count formula and validator on random descriptors") {
  Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    Descriptor d = random_descriptor(rng, 3, 3);
    CsdGraph g = descriptor_to_graph(d);
    size_t expect = 2 * (d.n() + d.m());
    for (const auto* v : {&d.ka, &d.kb, &d.kc, &d.kd})
      for (int x : *v) expect += x;
    CHECK(g.graph.edges.size() == expect);
    std::string why;
    CHECK_MESSAGE(validate_csd_graph(g, d, &why), why);
    // the validator really is structural: corrupting an edge label breaks it
    if (i < 20 && !g.graph.edges.empty()) {
      CsdGraph bad = g;
      bad.graph.edges[rng.below(static_cast<int>(bad.graph.edges.size()))].label = "z";
      CHECK(!validate_csd_graph(bad, d));
    }
  }
}

TEST_CASE("token/edge correspondence") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Descriptor d = random_descriptor(rng, 3, 3);
    auto [w, g] = csd_pair(d);
    Tokens toks = from_csd_tokens(w);
    for (const std::string& z : analysis::kCsdLetters)
      CHECK(count_tokens(toks, z) == label_count(g.graph, z));
  }
}

TEST_CASE("edges_equivalent is the block partition") {
  Descriptor d = mk({1}, {0, 2}, {0}, {1, 0});
  CsdGraph g = descriptor_to_graph(d);
  // reflexive / symmetric / transitive on samples + cross-block distinction
  Rng rng(4);
  int edges = static_cast<int>(g.graph.edges.size());
  for (int i = 0; i < 100; ++i) {
    int e = rng.below(edges), f = rng.below(edges), h = rng.below(edges);
    CHECK(edges_equivalent(g, e, e));
    CHECK(edges_equivalent(g, e, f) == edges_equivalent(g, f, e));
    if (edges_equivalent(g, e, f) && edges_equivalent(g, f, h))
      CHECK(edges_equivalent(g, e, h));
  }
  // block 1's a and c edges are equivalent; block 2's differ from block 1's
  int a1 = -1, c1 = -1, d2 = -1;
  for (int i = 0; i < edges; ++i) {
    if (g.graph.edges[i].label == "a" && g.block_of[i] == 1) a1 = i;
    if (g.graph.edges[i].label == "c" && g.block_of[i] == 1) c1 = i;
    if (g.graph.edges[i].label == "d" && g.block_of[i] == 2) d2 = i;
  }
  REQUIRE(a1 >= 0);
  REQUIRE(c1 >= 0);
  REQUIRE(d2 >= 0);
  CHECK(edges_equivalent(g, a1, c1));
  CHECK(!edges_equivalent(g, a1, d2));
  CHECK_THROWS(edges_equivalent(g, 0, edges + 3));
}

TEST_CASE("witness pair sizes") {
  WitnessPair w = witness_pair(1, 1);
  CHECK(w.r == 5);
  CHECK(w.s == 5);
  CHECK(w.q_a == 15);
  CHECK(w.q_c == 20);
  CHECK(w.graph.block_count() == 10);
  CHECK(w.descriptor.n() == 5);
  CHECK(w.descriptor.m() == 5);
  // string: 4 runs of r segments, each 1 + 3s tokens
  CHECK(w.word.size() == static_cast<size_t>(4 * w.r * (1 + 3 * w.s)));
  std::string why;
  CHECK_MESSAGE(validate_csd_graph(w.graph, w.descriptor, &why), why);
  CHECK_THROWS(witness_pair(0, 1));
}

TEST_CASE("descriptor cli syntax") {
  Descriptor d = Descriptor::parse_cli(tokens_from_string("n=1 m=2 ka=2 kb=1,0 kc=1 kd=0,0"));
  CHECK(d == mk({2}, {1, 0}, {1}, {0, 0}));
  CHECK(d.to_cli() == "n=1 m=2 ka=2 kb=1,0 kc=1 kd=0,0");
  Descriptor back = Descriptor::parse_cli(tokens_from_string(d.to_cli()));
  CHECK(back == d);
}

TEST_CASE("builtin csd0 grammar enumerates exactly CSD_0") {
  const auto& b = builtin_csd0();
  DeriveLimit lim;
  lim.max_yield = 6;
  auto ds = derive_bounded(b.grammar, lim);
  std::set<std::string> yields;
  for (const auto& d : ds) yields.insert(tokens_to_string(d.yield(b.grammar)));
  CHECK(yields == std::set<std::string>{"a b c d", "a b b c d d", "a a b c c d"});

  // relation within yield length 14 equals the all-zero-K family
  DeriveLimit lim2;
  lim2.max_yield = 14;
  auto rel = build_relation(b.grammar, b.hom, b.algebra, lim2);
  int matched = 0;
  for (const auto& e : rel) {
    auto parsed = parse_csd_string(to_csd_tokens(e.word));
    REQUIRE(parsed.ok());
    for (int k : parsed.descriptor->ka) CHECK(k == 0);
    for (int k : parsed.descriptor->kb) CHECK(k == 0);
    CsdGraph ref = descriptor_to_graph(*parsed.descriptor);
    CHECK(iso_check(e.graph, canonicalize(ref.graph)));
    ++matched;
  }
  // completeness over the enumerated family: every (n,m) with 2(n+m) <= 14
  int family = 0;
  for (int n = 1; n <= 6; ++n)
    for (int m = 1; m <= 6; ++m)
      if (2 * (n + m) <= 14) ++family;
  CHECK(matched == family);
}

TEST_CASE("csd0 derivation of a b b c d d evaluates to the all-zero graph") {
  const auto& b = builtin_csd0();
  Tree t = csd0_derivation(1, 2);
  CHECK(tokens_to_string(cfyield(t, b.grammar.alphabet)) == "a b b c d d");
  CHECK(contains_tree(b.grammar, t, 50));
  SGraph value = eval_term(b.algebra, b.hom.apply(t));
  CsdGraph ref = descriptor_to_graph(mk({0}, {0, 0}, {0}, {0, 0}));
  CHECK(iso_check(value, canonicalize(ref.graph)));
}

TEST_CASE("drop combinator ignores its second argument") {
  const auto& b = builtin_csd0();
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    Tree t1 = csd0_derivation(1 + rng.below(3), 1 + rng.below(3));
    Tree t2 = csd0_derivation(1 + rng.below(3), 1 + rng.below(3));
    Tree combined("p0", {t1, t2});
    CHECK(iso_check(eval_term(b.algebra, b.hom.apply(combined)),
                    eval_term(b.algebra, b.hom.apply(t1))));
  }
}

TEST_CASE("csd0 homomorphism is not aligned, with b carrying a d-edge") {
  const auto& b = builtin_csd0();
  auto rep = check_alignment(b.grammar, b.hom, b.algebra);
  CHECK(!rep.aligned);
  bool b_flagged = false;
  for (const auto& off : rep.offenders)
    if (off.constant == "b" && off.reason.find("d") != std::string::npos) b_flagged = true;
  CHECK(b_flagged);

  // An actually aligned grammar: single token with a single same-label edge.
  LmCftg tiny = parse_lmcftg("start S\nnt S/0\nterm a/0 token a\nS -> a\n");
  Lth h_ok = parse_hr_lth("a/0 -> edge(rt,a,s)\n");
  CHECK(check_alignment(tiny, h_ok, b.algebra).aligned);
  // Two-edge image breaks alignment.
  Lth h_two = parse_hr_lth("a/0 -> merge(edge(rt,a,s),loop(rt,a))\n");
  CHECK(!check_alignment(tiny, h_two, b.algebra).aligned);
}

#include "doctest.h"

#include <fstream>
#include <set>
#include <sstream>

#include "semgraph/analysis.hpp"
#include "semgraph/csd.hpp"
#include "semgraph/rng.hpp"
#include "semgraph/tag.hpp"

using namespace semgraph;

namespace {
std::string fixture(const std::string& name) {
  std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

csd::Descriptor random_descriptor(Rng& rng, int max_nm, int max_k) {
  csd::Descriptor d;
  int n = 1 + rng.below(max_nm), m = 1 + rng.below(max_nm);
  for (int i = 0; i < n; ++i) d.ka.push_back(rng.below(max_k + 1));
  for (int i = 0; i < m; ++i) d.kb.push_back(rng.below(max_k + 1));
  for (int i = 0; i < n; ++i) d.kc.push_back(rng.below(max_k + 1));
  for (int i = 0; i < m; ++i) d.kd.push_back(rng.below(max_k + 1));
  return d;
}
}  // namespace

TEST_CASE("a lone initial tree realizes to itself") {
  TagGrammar g = parse_tag("tree leaf initial S(A@anchor(hello))\n");
  RealizedTree rt = tag_realize(g, Tree("leaf"));
  CHECK(cfyield(rt.derived) == Tokens{"hello"});
  CHECK(rt.token_origin.size() == 1);
  CHECK(rt.token_origin[0] == Path{});
}

TEST_CASE("tag grammar text format round trips") {
  const auto& b = csd::builtin_csd_tag();
  TagGrammar again = parse_tag(format_tag(b.grammar));
  CHECK(again.trees.size() == b.grammar.trees.size());
  CHECK(format_tag(again) == format_tag(b.grammar));
  // derivation signature: spine trees have 3 slots, chain trees 1
  RankedSignature sig = b.grammar.derivation_signature();
  CHECK(sig.rank("alpha") == 3);
  CHECK(sig.rank("a_next") == 3);
  CHECK(sig.rank("bar_a") == 1);
  CHECK(sig.rank(TagGrammar::kNone) == 0);
}

TEST_CASE("tag realize errors") {
  TagGrammar g = parse_tag(fixture("swiss_german.tag"));
  // unresolved substitution site
  CHECK_THROWS_AS(tag_realize(g, parse_tree("clause(-,-)")), TagRealizeError);
  // required adjunction left unfilled
  CHECK_THROWS_AS(tag_realize(g, parse_tree("clause(np_mer,-)")), TagRealizeError);
  // category mismatch: substituting a VC auxiliary
  CHECK_THROWS_AS(tag_realize(g, parse_tree("clause(let(np_mer,-),-)")), TagRealizeError);
  // arity mismatch
  CHECK_THROWS_AS(tag_realize(g, parse_tree("clause(np_mer)")), TagRealizeError);
  // adjoining an initial tree
  CHECK_THROWS_AS(tag_realize(g, parse_tree("clause(np_mer,np_mer)")), TagRealizeError);
}

TEST_CASE("swiss german cross-serial cluster") {
  TagGrammar g = parse_tag(fixture("swiss_german.tag"));
  Tree deriv = parse_tree("clause(np_mer,let(np_chind,help(np_hans,paint(np_huus,-))))");
  CHECK(tokens_to_string(tag_yield(g, deriv)) ==
        "dass mer d_chind em_Hans es_huus loend haelfed aastriiche");

  // the 'help' subderivation contributes em_Hans and haelfed, which are not
  // adjacent in the sentence: the derivation is not projective
  RealizedTree rt = tag_realize(g, deriv);
  Tokens toks = tag_yield(g, deriv);
  Path help_node = {1, 1};   // clause -> let -> help
  std::vector<int> positions;
  for (size_t i = 0; i < toks.size(); ++i) {
    const Path& org = rt.token_origin[i];
    if (org.size() >= help_node.size() &&
        std::equal(help_node.begin(), help_node.end(), org.begin()))
      positions.push_back(static_cast<int>(i));
  }
  REQUIRE(positions.size() >= 2);
  bool contiguous = positions.back() - positions.front() + 1 ==
                    static_cast<int>(positions.size());
  CHECK(!contiguous);
}

TEST_CASE("builtin CSD TAG: smallest member") {
  const auto& b = csd::builtin_csd_tag();
  csd::Descriptor d;
  d.ka = {0};
  d.kb = {0};
  d.kc = {0};
  d.kd = {0};
  Tree deriv = csd::csd_tag_derivation(d);
  CHECK(tokens_to_string(tag_yield(b.grammar, deriv)) == "a b c d");
  SGraph val = eval_term(b.algebra, b.hom.apply(deriv));
  CHECK(iso_check(val, canonicalize(csd::descriptor_to_graph(d).graph)));
}

TEST_CASE("builtin CSD TAG reproduces the worked example pair") {
  const auto& b = csd::builtin_csd_tag();
  csd::Descriptor d;
  d.ka = {2};
  d.kb = {1, 0};
  d.kc = {1};
  d.kd = {0, 0};
  Tree deriv = csd::csd_tag_derivation(d);
  CHECK(tokens_to_string(tag_yield(b.grammar, deriv)) ==
        "a < < a' a' > > b < b' > b c < c' > d d");
  SGraph val = eval_term(b.algebra, b.hom.apply(deriv));
  CHECK(iso_check(val, canonicalize(csd::descriptor_to_graph(d).graph)));
}

TEST_CASE("builtin CSD TAG on random descriptors") {
  const auto& b = csd::builtin_csd_tag();
  Rng rng(77);
  for (int i = 0; i < 60; ++i) {
    csd::Descriptor d = random_descriptor(rng, 3, 3);
    Tree deriv = csd::csd_tag_derivation(d);
    CHECK(tag_yield(b.grammar, deriv) == csd::from_csd_tokens(csd::descriptor_to_string(d)));
    SGraph val = eval_term(b.algebra, b.hom.apply(deriv));
    CHECK(iso_check(val, canonicalize(csd::descriptor_to_graph(d).graph)));
  }
}

TEST_CASE("every subterm of the TAG image stays within two sources") {
  const auto& b = csd::builtin_csd_tag();
  Rng rng(78);
  for (int i = 0; i < 20; ++i) {
    csd::Descriptor d = random_descriptor(rng, 2, 2);
    Tree image = b.hom.apply(csd::csd_tag_derivation(d));
    for (const Path& p : all_positions(image)) {
      SGraph sub = eval_term_raw(b.algebra, subtree(image, p));
      CHECK(sub.source_count() <= 2);
    }
  }
}

TEST_CASE("tag_derivations enumerates the descriptor family") {
  const auto& b = csd::builtin_csd_tag();
  // yields of at most 8 tokens: (n,m) with 2(n+m) + 3*sum(K) <= 8
  auto ds = tag_derivations(b.grammar, 8);
  std::set<std::string> yields;
  for (const Tree& t : ds) yields.insert(tokens_to_string(tag_yield(b.grammar, t)));
  // expected: abcd (4), aabccd/abbcdd (6), plus every 1,1 descriptor with one
  // chain entry 1 (7 tokens), plus the 8-token members
  CHECK(yields.count("a b c d") == 1);
  CHECK(yields.count("a a b c c d") == 1);
  CHECK(yields.count("a b b c d d") == 1);
  CHECK(yields.count("a < a' > b c d") == 1);
  CHECK(yields.count("a b < b' > c d") == 1);
  CHECK(yields.count("a b c < c' > d") == 1);
  CHECK(yields.count("a b c d < d' >") == 1);
  // everything enumerated is a CSD pair (soundness)
  for (const Tree& t : ds) {
    auto parsed = csd::parse_csd_string(csd::to_csd_tokens(tag_yield(b.grammar, t)));
    REQUIRE(parsed.ok());
    SGraph val = eval_term(b.algebra, b.hom.apply(t));
    CHECK(iso_check(val, canonicalize(csd::descriptor_to_graph(*parsed.descriptor).graph)));
  }
  // completeness over the family: each small descriptor appears exactly once
  std::set<std::string> expect;
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m) {
      csd::Descriptor d;
      d.ka.assign(n, 0);
      d.kb.assign(m, 0);
      d.kc.assign(n, 0);
      d.kd.assign(m, 0);
      if (2 * (n + m) <= 8)
        expect.insert(tokens_to_string(csd::from_csd_tokens(csd::descriptor_to_string(d))));
    }
  for (const auto& w : expect) CHECK(yields.count(w) == 1);
}

TEST_CASE("bar chains nest correctly") {
  const auto& b = csd::builtin_csd_tag();
  csd::Descriptor d;
  d.ka = {3};
  d.kb = {0};
  d.kc = {0};
  d.kd = {2};
  Tree deriv = csd::csd_tag_derivation(d);
  CHECK(tokens_to_string(tag_yield(b.grammar, deriv)) ==
        "a < < < a' a' a' > > > b c d < < d' d' > >");
}

#include "semgraph/csd.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace semgraph {
namespace csd {

const char* token_name(Token t) {
  switch (t) {
    case Token::A: return "a";
    case Token::B: return "b";
    case Token::C: return "c";
    case Token::D: return "d";
    case Token::Abar: return "a'";
    case Token::Bbar: return "b'";
    case Token::Cbar: return "c'";
    case Token::Dbar: return "d'";
    case Token::Open: return "<";
    case Token::Close: return ">";
  }
  return "?";
}

std::optional<Token> token_from_name(const std::string& s) {
  static const std::map<std::string, Token> table = {
      {"a", Token::A},     {"b", Token::B},     {"c", Token::C},     {"d", Token::D},
      {"a'", Token::Abar}, {"b'", Token::Bbar}, {"c'", Token::Cbar}, {"d'", Token::Dbar},
      {"<", Token::Open},  {">", Token::Close}};
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

TokenString to_csd_tokens(const Tokens& w) {
  TokenString out;
  out.reserve(w.size());
  for (const auto& s : w) {
    auto t = token_from_name(s);
    if (!t) throw std::runtime_error("not a CSD token: " + s);
    out.push_back(*t);
  }
  return out;
}

Tokens from_csd_tokens(const TokenString& w) {
  Tokens out;
  out.reserve(w.size());
  for (Token t : w) out.push_back(token_name(t));
  return out;
}

bool Descriptor::valid(std::string* why) const {
  auto bad = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (ka.size() != kc.size()) return bad("|ka| != |kc|");
  if (kb.size() != kd.size()) return bad("|kb| != |kd|");
  if (ka.empty()) return bad("n must be >= 1");
  if (kb.empty()) return bad("m must be >= 1");
  for (const auto* v : {&ka, &kb, &kc, &kd})
    for (int x : *v)
      if (x < 0) return bad("negative chain length");
  return true;
}

Descriptor Descriptor::parse_cli(const std::vector<std::string>& kv) {
  int n = -1, m = -1;
  Descriptor d;
  auto parse_list = [](const std::string& s) {
    std::vector<int> out;
    std::string cur;
    for (char c : s + ",") {
      if (c == ',') {
        if (!cur.empty()) out.push_back(std::stoi(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    return out;
  };
  for (const auto& item : kv) {
    size_t eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("expected key=value, got " + item);
    std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "n")
      n = std::stoi(val);
    else if (key == "m")
      m = std::stoi(val);
    else if (key == "ka")
      d.ka = parse_list(val);
    else if (key == "kb")
      d.kb = parse_list(val);
    else if (key == "kc")
      d.kc = parse_list(val);
    else if (key == "kd")
      d.kd = parse_list(val);
    else
      throw std::runtime_error("unknown descriptor key " + key);
  }
  // n/m default from vector lengths; scalar vectors are broadcast.
  auto fix = [](std::vector<int>& v, int len, const char* name) {
    if (len <= 0) {
      if (v.empty()) throw std::runtime_error(std::string("missing ") + name);
      return;
    }
    if (v.empty()) v.assign(len, 0);
    if (static_cast<int>(v.size()) == 1 && len > 1) v.assign(len, v[0]);
    if (static_cast<int>(v.size()) != len)
      throw std::runtime_error(std::string(name) + " has wrong length");
  };
  fix(d.ka, n, "ka");
  fix(d.kc, n < 0 ? static_cast<int>(d.ka.size()) : n, "kc");
  fix(d.kb, m, "kb");
  fix(d.kd, m < 0 ? static_cast<int>(d.kb.size()) : m, "kd");
  std::string why;
  if (!d.valid(&why)) throw std::runtime_error("bad descriptor: " + why);
  return d;
}

std::string Descriptor::to_cli() const {
  auto list = [](const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(v[i]);
    }
    return s;
  };
  return "n=" + std::to_string(n()) + " m=" + std::to_string(m()) + " ka=" + list(ka) +
         " kb=" + list(kb) + " kc=" + list(kc) + " kd=" + list(kd);
}

namespace {
void emit_segment(TokenString& out, Token core, Token bar, int k) {
  out.push_back(core);
  for (int i = 0; i < k; ++i) out.push_back(Token::Open);
  for (int i = 0; i < k; ++i) out.push_back(bar);
  for (int i = 0; i < k; ++i) out.push_back(Token::Close);
}
}  // namespace

TokenString descriptor_to_string(const Descriptor& d) {
  TokenString out;
  for (int k : d.ka) emit_segment(out, Token::A, Token::Abar, k);
  for (int k : d.kb) emit_segment(out, Token::B, Token::Bbar, k);
  for (int k : d.kc) emit_segment(out, Token::C, Token::Cbar, k);
  for (int k : d.kd) emit_segment(out, Token::D, Token::Dbar, k);
  return out;
}

ParseResult parse_csd_string(const TokenString& w) {
  ParseResult res;
  size_t i = 0;
  auto fail = [&](const std::string& kind, size_t pos, const std::string& detail) {
    res.failure = ParseFailure{kind, pos, detail};
    return res;
  };

  // Parses the chain part of one segment: <^k bar^k >^k.
  auto parse_chain = [&](Token bar, int& k_out, std::string& err, size_t& errpos) {
    size_t opens = 0;
    while (i < w.size() && w[i] == Token::Open) {
      ++opens;
      ++i;
    }
    size_t bars = 0;
    while (i < w.size() && w[i] == bar) {
      ++bars;
      ++i;
    }
    if (bars != opens) {
      err = "bar-count: " + std::to_string(bars) + " bar tokens after " + std::to_string(opens) +
            " opening brackets";
      errpos = i;
      return false;
    }
    size_t closes = 0;
    while (i < w.size() && w[i] == Token::Close) {
      ++closes;
      ++i;
    }
    if (closes != opens) {
      err = "bar-count: " + std::to_string(closes) + " closing brackets after " +
            std::to_string(opens) + " opening";
      errpos = i;
      return false;
    }
    k_out = static_cast<int>(opens);
    return true;
  };

  auto parse_run = [&](Token core, Token bar, std::vector<int>& ks, std::string& err,
                       size_t& errpos) {
    while (i < w.size() && w[i] == core) {
      ++i;
      int k = 0;
      if (!parse_chain(bar, k, err, errpos)) return false;
      ks.push_back(k);
    }
    return true;
  };

  Descriptor d;
  std::string err;
  size_t errpos = 0;
  if (!parse_run(Token::A, Token::Abar, d.ka, err, errpos)) return fail("bar-count", errpos, err);
  if (d.ka.empty()) return fail("segment-order", i, "expected an a-segment first");
  if (!parse_run(Token::B, Token::Bbar, d.kb, err, errpos)) return fail("bar-count", errpos, err);
  if (d.kb.empty()) return fail("segment-order", i, "expected a b-segment after the a-run");
  if (!parse_run(Token::C, Token::Cbar, d.kc, err, errpos)) return fail("bar-count", errpos, err);
  if (!parse_run(Token::D, Token::Dbar, d.kd, err, errpos)) return fail("bar-count", errpos, err);
  if (i != w.size())
    return fail("segment-order", i,
                std::string("unexpected token ") + token_name(w[i]) + " after position " +
                    std::to_string(i));
  if (d.kc.size() != d.ka.size())
    return fail("shape", i,
                "a-run has " + std::to_string(d.ka.size()) + " segments but c-run has " +
                    std::to_string(d.kc.size()));
  if (d.kd.size() != d.kb.size())
    return fail("shape", i,
                "b-run has " + std::to_string(d.kb.size()) + " segments but d-run has " +
                    std::to_string(d.kd.size()));
  res.descriptor = d;
  return res;
}

int CsdGraph::block_count() const {
  int m = 0;
  for (int b : block_of) m = std::max(m, b);
  return m;
}

CsdGraph descriptor_to_graph(const Descriptor& d) {
  std::string why;
  if (!d.valid(&why)) throw std::runtime_error("descriptor_to_graph: " + why);
  CsdGraph out;
  SGraph& g = out.graph;
  int n = d.n(), m = d.m(), total = n + m;

  // Head nodes u_1..u_{n+m} first, then per-block extras in block order.
  std::vector<int> head(total + 1);
  for (int i = 0; i < total; ++i) head[i] = g.node_count++;
  head[total] = -1;   // sink allocated when reached

  auto add_edge = [&](int from, int to, const std::string& label, int block) {
    g.edges.push_back({from, to, label, {}});
    out.block_of.push_back(block);
  };
  auto add_chain = [&](int from, const std::string& label, int len, int block) {
    int cur = from;
    for (int j = 0; j < len; ++j) {
      int nxt = g.node_count++;
      add_edge(cur, nxt, label, block);
      cur = nxt;
    }
  };

  for (int i = 0; i < total; ++i) {
    bool ablock = i < n;
    int block = i + 1;
    int u = head[i];
    int next = i + 1 < total ? head[i + 1] : g.node_count++;   // final sink
    // The chaining edge (a for a-blocks, b for b-blocks) points at the next
    // block's head.
    add_edge(u, next, ablock ? "a" : "b", block);
    int v = g.node_count++;
    add_edge(u, v, ablock ? "c" : "d", block);
    if (ablock) {
      add_chain(u, "a'", d.ka[i], block);
      add_chain(v, "c'", d.kc[i], block);
    } else {
      add_chain(u, "b'", d.kb[i - n], block);
      add_chain(v, "d'", d.kd[i - n], block);
    }
  }
  g.sources["rt"] = head[0];
  return out;
}

bool validate_csd_graph(const CsdGraph& cg, const Descriptor& d, std::string* why) {
  auto bad = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  const SGraph& g = cg.graph;
  std::string gwhy;
  if (!g.valid(&gwhy)) return bad("invalid sgraph: " + gwhy);
  if (g.edges.size() != cg.block_of.size()) return bad("block index length mismatch");
  int n = d.n(), m = d.m();

  // Expected edge total.
  size_t expected = 2 * (n + m);
  for (const auto* v : {&d.ka, &d.kb, &d.kc, &d.kd})
    for (int x : *v) expected += x;
  if (g.edges.size() != expected)
    return bad("edge count " + std::to_string(g.edges.size()) + " != expected " +
               std::to_string(expected));

  auto rt = g.sources.find("rt");
  if (rt == g.sources.end()) return bad("missing rt source");
  if (g.sources.size() != 1) return bad("unexpected extra sources");

  // Walk the block chain from the head, re-deriving every block.
  std::vector<int> out_edges(g.node_count, 0);
  auto edges_from = [&](int node) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
      if (g.edges[i].from == node) idx.push_back(i);
    return idx;
  };
  auto follow_chain = [&](int start, const std::string& label, int expect_len, int block,
                          std::string& err) {
    int cur = start;
    for (int j = 0; j < expect_len; ++j) {
      int found = -1;
      for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
        if (g.edges[i].from == cur && g.edges[i].label == label) {
          if (found != -1) {
            err = "chain branches at node " + std::to_string(cur);
            return false;
          }
          found = i;
        }
      if (found == -1) {
        err = "chain of " + label + " too short (block " + std::to_string(block) + ")";
        return false;
      }
      if (cg.block_of[found] != block) {
        err = "chain edge assigned to wrong block";
        return false;
      }
      cur = g.edges[found].to;
    }
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
      if (g.edges[i].from == cur && g.edges[i].label == label) {
        err = "chain of " + label + " too long (block " + std::to_string(block) + ")";
        return false;
      }
    return true;
  };

  int u = rt->second;
  for (int i = 0; i < n + m; ++i) {
    bool ablock = i < n;
    int block = i + 1;
    std::string core = ablock ? "c" : "d";
    std::string link = ablock ? "a" : "b";
    std::string ubar = ablock ? "a'" : "b'";
    std::string vbar = ablock ? "c'" : "d'";
    int klen_u = ablock ? d.ka[i] : d.kb[i - n];
    int klen_v = ablock ? d.kc[i] : d.kd[i - n];

    int core_edge = -1, link_edge = -1;
    for (int e : edges_from(u)) {
      const auto& edge = g.edges[e];
      if (edge.label == core) {
        if (core_edge != -1) return bad("duplicate core edge at block " + std::to_string(block));
        core_edge = e;
      } else if (edge.label == link) {
        if (link_edge != -1) return bad("duplicate link edge at block " + std::to_string(block));
        link_edge = e;
      } else if (edge.label != ubar) {
        return bad("unexpected " + edge.label + " edge out of block head " +
                   std::to_string(block));
      }
    }
    if (core_edge == -1) return bad("missing " + core + " edge in block " + std::to_string(block));
    if (link_edge == -1) return bad("missing " + link + " edge in block " + std::to_string(block));
    if (cg.block_of[core_edge] != block || cg.block_of[link_edge] != block)
      return bad("core edges of block " + std::to_string(block) + " misindexed");
    std::string err;
    if (!follow_chain(u, ubar, klen_u, block, err)) return bad(err);
    if (!follow_chain(g.edges[core_edge].to, vbar, klen_v, block, err)) return bad(err);
    u = g.edges[link_edge].to;
  }
  // Final link target is the sink: no outgoing edges.
  if (!edges_from(u).empty()) return bad("sink node has outgoing edges");
  return true;
}

std::pair<TokenString, CsdGraph> csd_pair(const Descriptor& d) {
  return {descriptor_to_string(d), descriptor_to_graph(d)};
}

bool edges_equivalent(const CsdGraph& g, int e, int f) {
  if (e < 0 || f < 0 || e >= static_cast<int>(g.block_of.size()) ||
      f >= static_cast<int>(g.block_of.size()))
    throw std::out_of_range("edges_equivalent: foreign edge index");
  return g.block_of[e] == g.block_of[f];
}

WitnessPair witness_pair(int k, int l) {
  if (k < 1 || l < 1) throw std::runtime_error("witness_pair needs k,l >= 1");
  WitnessPair w;
  w.r = w.s = 3 * l + k + 1;
  w.q_a = (2 * l + 1) * w.s;
  w.q_c = (2 * l + k + 1) * w.s;
  w.descriptor.ka.assign(w.r, w.s);
  w.descriptor.kb.assign(w.r, w.s);
  w.descriptor.kc.assign(w.r, w.s);
  w.descriptor.kd.assign(w.r, w.s);
  w.word = descriptor_to_string(w.descriptor);
  w.graph = descriptor_to_graph(w.descriptor);
  return w;
}

// ---- builtin CSD_0 LM-CFTG ---------------------------------------------------

namespace {
const char* kCsd0Grammar = R"(
# CSD_0: projective derivations of a^n b^m c^n d^m over the pair/drop
# combinators; c and d leaves ride in the accumulator and their graph
# values are dropped.
start S
nt S/0
nt A/1
nt B/1
term p1/2 eps
term p0/2 eps
term cat/2 eps
term a/0 token a
term b/0 token b
term bf/0 token b
term c/0 token c
term d/0 token d
S -> A(c)
A(x) -> p1(a,A(cat(x,c)))
A(x) -> p1(a,B(x))
B(x) -> p1(b,p0(B(x),d))
B(x) -> p0(bf,cat(x,d))
)";

const char* kCsd0Hom = R"(
p1/2 -> forget(s,merge(x1,ren(rt,s,x2)))
p0/2 -> x1
cat/2 -> x1
a/0 -> merge(forget(s,edge(rt,c,s)),edge(rt,a,s))
b/0 -> merge(forget(s,edge(rt,d,s)),edge(rt,b,s))
bf/0 -> forget(s,merge(forget(s,edge(rt,d,s)),edge(rt,b,s)))
c/0 -> loop(rt,c)
d/0 -> loop(rt,d)
)";
}  // namespace

const BuiltinCsd0& builtin_csd0() {
  static const BuiltinCsd0 instance = [] {
    BuiltinCsd0 b;
    b.grammar = parse_lmcftg(kCsd0Grammar);
    b.hom = parse_hr_lth(kCsd0Hom);
    b.algebra.names = {"rt", "s"};
    return b;
  }();
  return instance;
}

Tree csd0_derivation(int n, int m) {
  if (n < 1 || m < 1) throw std::runtime_error("csd0_derivation needs n,m >= 1");
  Tree acc("c");
  for (int j = 1; j < n; ++j) acc = Tree("cat", {acc, Tree("c")});
  Tree core("p0", {Tree("bf"), Tree("cat", {acc, Tree("d")})});
  for (int j = 1; j < m; ++j) core = Tree("p1", {Tree("b"), Tree("p0", {core, Tree("d")})});
  Tree t = core;
  for (int j = 0; j < n; ++j) t = Tree("p1", {Tree("a"), t});
  return t;
}

// ---- builtin CSD TAG ----------------------------------------------------------

namespace {
// Spine: alpha carries the first a/c block; a_next appends further a/c
// blocks; b_first then b_next append the b/d blocks. The two spine sites are
// required so every finished derivation has n,m >= 1. Bar chains grow by
// one-step adjunction per link.
const char* kCsdTag = R"(
tree alpha initial
  S0(WA(TA@anchor(a),CA@adjoin(Za)),M@adjoin!(SM)(E0,WC(TC@anchor(c),CC@adjoin(Zc))))
tree a_next auxiliary
  SM(WA(TA@anchor(a),CA@adjoin(Za)),M@adjoin!(SM)(SM@foot,WC(TC@anchor(c),CC@adjoin(Zc))))
tree b_first auxiliary
  SM(WB(TB@anchor(b),CB@adjoin(Zb)),MB@adjoin(T)(SM@foot,WD(TD@anchor(d),CD@adjoin(Zd))))
tree b_next auxiliary
  T(WB(TB@anchor(b),CB@adjoin(Zb)),MB@adjoin(T)(T@foot,WD(TD@anchor(d),CD@adjoin(Zd))))
tree bar_a auxiliary
  Za(LT@anchor(<),IA@adjoin(Za)(Za@foot,BA@anchor(a')),GT@anchor(>))
tree bar_b auxiliary
  Zb(LT@anchor(<),IB@adjoin(Zb)(Zb@foot,BB@anchor(b')),GT@anchor(>))
tree bar_c auxiliary
  Zc(LT@anchor(<),IC@adjoin(Zc)(Zc@foot,BC@anchor(c')),GT@anchor(>))
tree bar_d auxiliary
  Zd(LT@anchor(<),ID@adjoin(Zd)(Zd@foot,BD@anchor(d')),GT@anchor(>))
)";

// Slot order of the spine trees is (own chain, spine continuation, partner
// chain); bar trees have a single continuation slot.
const char* kCsdTagHom = R"(
alpha/3 -> merge(merge(forget(s,merge(edge(rt,a,s),ren(rt,s,x2))),forget(s,merge(edge(rt,c,s),ren(rt,s,x3)))),x1)
a_next/3 -> merge(merge(forget(s,merge(edge(rt,a,s),ren(rt,s,x2))),forget(s,merge(edge(rt,c,s),ren(rt,s,x3)))),x1)
b_first/3 -> merge(merge(forget(s,merge(edge(rt,b,s),ren(rt,s,x2))),forget(s,merge(edge(rt,d,s),ren(rt,s,x3)))),x1)
b_next/3 -> merge(merge(forget(s,merge(edge(rt,b,s),ren(rt,s,x2))),forget(s,merge(edge(rt,d,s),ren(rt,s,x3)))),x1)
bar_a/1 -> forget(s,merge(edge(rt,a',s),ren(rt,s,x1)))
bar_b/1 -> forget(s,merge(edge(rt,b',s),ren(rt,s,x1)))
bar_c/1 -> forget(s,merge(edge(rt,c',s),ren(rt,s,x1)))
bar_d/1 -> forget(s,merge(edge(rt,d',s),ren(rt,s,x1)))
-/0 -> empty
)";
}  // namespace

const BuiltinCsdTag& builtin_csd_tag() {
  static const BuiltinCsdTag instance = [] {
    BuiltinCsdTag b;
    b.grammar = parse_tag(kCsdTag);
    b.hom = parse_hr_lth(kCsdTagHom);
    b.algebra.names = {"rt", "s"};
    return b;
  }();
  return instance;
}

namespace {
Tree bar_chain(const std::string& tree_name, int k) {
  Tree cur(TagGrammar::kNone);
  for (int i = 0; i < k; ++i) cur = Tree(tree_name, {std::move(cur)});
  return cur;
}
}  // namespace

Tree csd_tag_derivation(const Descriptor& d) {
  std::string why;
  if (!d.valid(&why)) throw std::runtime_error("csd_tag_derivation: " + why);
  int n = d.n(), m = d.m();
  // b-chain, deepest (b-seg m) first.
  Tree cur(TagGrammar::kNone);
  for (int j = m - 1; j >= 1; --j)
    cur = Tree("b_next", {bar_chain("bar_b", d.kb[j]), std::move(cur), bar_chain("bar_d", d.kd[j])});
  cur = Tree("b_first", {bar_chain("bar_b", d.kb[0]), std::move(cur), bar_chain("bar_d", d.kd[0])});
  // a-chain on top, a-seg n nearest the b-chain.
  for (int i = n - 1; i >= 1; --i)
    cur = Tree("a_next", {bar_chain("bar_a", d.ka[i]), std::move(cur), bar_chain("bar_c", d.kc[i])});
  return Tree("alpha",
              {bar_chain("bar_a", d.ka[0]), std::move(cur), bar_chain("bar_c", d.kc[0])});
}

}  // namespace csd
}  // namespace semgraph

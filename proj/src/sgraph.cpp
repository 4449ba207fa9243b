#include "semgraph/sgraph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace semgraph {

bool SGraph::Edge::operator<(const Edge& o) const {
  if (from != o.from) return from < o.from;
  if (to != o.to) return to < o.to;
  if (label != o.label) return label < o.label;
  return prov < o.prov;
}

bool SGraph::valid(std::string* why) const {
  auto bad = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  std::vector<bool> touched(node_count, false);
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= node_count || e.to < 0 || e.to >= node_count)
      return bad("edge endpoint out of range");
    touched[e.from] = touched[e.to] = true;
  }
  for (const auto& [name, n] : sources) {
    if (n < 0 || n >= node_count) return bad("source " + name + " out of range");
    touched[n] = true;
  }
  for (int i = 0; i < node_count; ++i)
    if (!touched[i]) return bad("isolated unnamed node " + std::to_string(i));
  return true;
}

std::optional<std::string> SGraph::source_name_of(int node) const {
  for (const auto& [name, n] : sources)
    if (n == node) return name;
  return std::nullopt;
}

bool SGraph::is_source_node(int node) const { return source_name_of(node).has_value(); }

bool HrAlgebra::declared(const std::string& n) const {
  return std::find(names.begin(), names.end(), n) != names.end();
}

void HrAlgebra::require_declared(const std::string& n, const Path& at) const {
  if (!declared(n)) throw EvalError(at, "source name '" + n + "' is not declared");
}

SGraph const_empty() { return SGraph{}; }

SGraph const_edge(const HrAlgebra& alg, const std::string& a, const std::string& label,
                  const std::string& b) {
  alg.require_declared(a, {});
  alg.require_declared(b, {});
  if (a == b) throw EvalError({}, "edge constant needs two distinct names (use loop)");
  SGraph g;
  g.node_count = 2;
  g.edges.push_back({0, 1, label, {}});
  g.sources[a] = 0;
  g.sources[b] = 1;
  return g;
}

SGraph const_loop(const HrAlgebra& alg, const std::string& a, const std::string& label) {
  alg.require_declared(a, {});
  SGraph g;
  g.node_count = 1;
  g.edges.push_back({0, 0, label, {}});
  g.sources[a] = 0;
  return g;
}

namespace {
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};
}  // namespace

SGraph merge(const SGraph& g1, const SGraph& g2) {
  int off = g1.node_count;
  int total = g1.node_count + g2.node_count;
  UnionFind uf(total);
  for (const auto& [name, n1] : g1.sources) {
    auto it = g2.sources.find(name);
    if (it != g2.sources.end()) uf.unite(n1, it->second + off);
  }
  // Compact representative numbering in node order.
  std::vector<int> repr(total, -1);
  int next = 0;
  auto id_of = [&](int raw) {
    int r = uf.find(raw);
    if (repr[r] < 0) repr[r] = next++;
    return repr[r];
  };
  SGraph out;
  for (int i = 0; i < total; ++i) id_of(i);
  out.node_count = next;
  for (const auto& e : g1.edges) out.edges.push_back({id_of(e.from), id_of(e.to), e.label, e.prov});
  for (const auto& e : g2.edges)
    out.edges.push_back({id_of(e.from + off), id_of(e.to + off), e.label, e.prov});
  for (const auto& [name, n] : g1.sources) out.sources[name] = id_of(n);
  for (const auto& [name, n] : g2.sources) out.sources[name] = id_of(n + off);
  return out;
}

SGraph rename_src(const SGraph& g, const std::string& a, const std::string& b) {
  if (a == b) return g;
  auto ita = g.sources.find(a);
  if (ita == g.sources.end()) return g;
  if (g.sources.count(b))
    throw EvalError({}, "rename " + a + "->" + b + ": target name already assigned");
  SGraph out = g;
  int n = out.sources[a];
  out.sources.erase(a);
  out.sources[b] = n;
  return out;
}

SGraph forget_src(const SGraph& g, const std::string& a) {
  SGraph out = g;
  out.sources.erase(a);
  return out;
}

std::vector<int> boundary_nodes(const SGraph& g, const std::vector<int>& sub_edge_indices) {
  std::vector<bool> in_sub(g.edges.size(), false);
  for (int i : sub_edge_indices) {
    if (i < 0 || i >= static_cast<int>(g.edges.size()))
      throw std::out_of_range("boundary_nodes: edge index out of range");
    in_sub[i] = true;
  }
  std::vector<bool> touches_in(g.node_count, false), touches_out(g.node_count, false);
  for (size_t i = 0; i < g.edges.size(); ++i) {
    auto& mark = in_sub[i] ? touches_in : touches_out;
    mark[g.edges[i].from] = true;
    mark[g.edges[i].to] = true;
  }
  std::vector<int> out;
  for (int n = 0; n < g.node_count; ++n)
    if (touches_in[n] && touches_out[n]) out.push_back(n);
  return out;
}

int source_count(const SGraph& g) { return g.source_count(); }

// ---- isomorphism ----------------------------------------------------------

namespace {

struct EdgeKey {
  int from, to;
  std::string label;
  bool operator<(const EdgeKey& o) const {
    return std::tie(from, to, label) < std::tie(o.from, o.to, o.label);
  }
  bool operator==(const EdgeKey& o) const {
    return from == o.from && to == o.to && label == o.label;
  }
};

std::map<EdgeKey, int> edge_multiset(const SGraph& g) {
  std::map<EdgeKey, int> m;
  for (const auto& e : g.edges) m[{e.from, e.to, e.label}]++;
  return m;
}

// Degree/label signature used both as iso invariant and canonical sort key.
std::string node_signature(const SGraph& g, int n) {
  std::vector<std::string> parts;
  for (const auto& e : g.edges) {
    if (e.from == n) parts.push_back("o:" + e.label + (e.to == n ? ":self" : ""));
    if (e.to == n && e.from != n) parts.push_back("i:" + e.label);
  }
  std::sort(parts.begin(), parts.end());
  std::string s;
  if (auto nm = g.source_name_of(n)) s += "src=" + *nm + ";";
  for (auto& p : parts) s += p + ";";
  return s;
}

// Iterative color refinement. Color strings are stable across graphs: the
// per-round compression ranks distinct strings in sorted order, so two
// isomorphic graphs get identical color multisets.
std::vector<std::string> wl_colors(const SGraph& g) {
  int n = g.node_count;
  std::vector<std::string> color(n);
  for (int i = 0; i < n; ++i) color[i] = node_signature(g, i);
  for (int round = 0; round < n; ++round) {
    std::vector<std::string> next(n);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> nb;
      for (const auto& e : g.edges) {
        if (e.from == i) nb.push_back("o:" + e.label + ">" + color[e.to]);
        if (e.to == i) nb.push_back("i:" + e.label + "<" + color[e.from]);
      }
      std::sort(nb.begin(), nb.end());
      next[i] = color[i] + "|";
      for (auto& s : nb) next[i] += s + ";";
    }
    std::set<std::string> distinct(next.begin(), next.end());
    std::map<std::string, int> rank;
    for (const auto& s : distinct) rank[s] = static_cast<int>(rank.size());
    std::vector<std::string> compressed(n);
    for (int i = 0; i < n; ++i)
      compressed[i] = node_signature(g, i) + "#" + std::to_string(rank[next[i]]);
    if (compressed == color) break;
    color = std::move(compressed);
  }
  return color;
}

}  // namespace

bool iso_check(const SGraph& g1, const SGraph& g2) {
  if (g1.node_count != g2.node_count || g1.edges.size() != g2.edges.size()) return false;
  // Source maps must agree on names.
  if (g1.sources.size() != g2.sources.size()) return false;
  for (const auto& [name, n] : g1.sources)
    if (!g2.sources.count(name)) return false;
  std::vector<std::string> col_a = wl_colors(g1), col_b = wl_colors(g2);
  {
    auto sa = col_a;
    auto sb = col_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::vector<int> map_ab(g1.node_count, -1), used_b(g2.node_count, 0);
  auto havemap = edge_multiset(g2);

  // Incremental consistency: once both endpoints of a g1 edge are mapped,
  // the mapped edge must exist in g2 with enough multiplicity.
  auto consistent_around = [&](int n) {
    std::map<EdgeKey, int> need;
    for (const auto& e : g1.edges)
      if (map_ab[e.from] != -1 && map_ab[e.to] != -1 && (e.from == n || e.to == n))
        need[{map_ab[e.from], map_ab[e.to], e.label}]++;
    for (const auto& [k, c] : need) {
      auto it = havemap.find(k);
      int have = it == havemap.end() ? 0 : it->second;
      // Count all mapped g1 edges hitting this key, not just those at n.
      int total = 0;
      for (const auto& e : g1.edges)
        if (map_ab[e.from] != -1 && map_ab[e.to] != -1 &&
            EdgeKey{map_ab[e.from], map_ab[e.to], e.label} == k)
          ++total;
      if (total > have) return false;
    }
    return true;
  };

  // Sources must map by name; pin them first.
  for (const auto& [name, n1] : g1.sources) {
    int n2 = g2.sources.at(name);
    if (map_ab[n1] != -1) {
      if (map_ab[n1] != n2) return false;
      continue;
    }
    if (used_b[n2] || col_a[n1] != col_b[n2]) return false;
    map_ab[n1] = n2;
    used_b[n2] = 1;
    if (!consistent_around(n1)) return false;
  }

  std::function<bool(size_t)> rec = [&](size_t next) -> bool {
    while (next < static_cast<size_t>(g1.node_count) && map_ab[next] != -1) ++next;
    if (next == static_cast<size_t>(g1.node_count)) {
      std::map<EdgeKey, int> ma;
      for (const auto& e : g1.edges) ma[{map_ab[e.from], map_ab[e.to], e.label}]++;
      return ma == havemap;
    }
    int n = static_cast<int>(next);
    for (int cand = 0; cand < g2.node_count; ++cand) {
      if (used_b[cand] || col_a[n] != col_b[cand]) continue;
      map_ab[n] = cand;
      used_b[cand] = 1;
      if (consistent_around(n) && rec(next + 1)) return true;
      map_ab[n] = -1;
      used_b[cand] = 0;
    }
    return false;
  };
  return rec(0);
}

// ---- canonical form -------------------------------------------------------

SGraph canonicalize(const SGraph& g) {
  // Refinement colors, then a deterministic order: source nodes in name
  // order first, then discovery along sorted incident-edge signatures.
  int n = g.node_count;
  std::vector<std::string> color = wl_colors(g);

  std::vector<int> order;            // new index -> old node
  std::vector<int> newid(n, -1);     // old node -> new index
  auto take = [&](int old) {
    if (newid[old] == -1) {
      newid[old] = static_cast<int>(order.size());
      order.push_back(old);
    }
  };
  auto seed_remaining = [&]() {
    int best = -1;
    for (int i = 0; i < n; ++i)
      if (newid[i] == -1 && (best == -1 || color[i] < color[best])) best = i;
    if (best != -1) take(best);
  };
  for (const auto& [name, node] : g.sources) take(node);
  if (order.empty()) seed_remaining();
  // Expand from already-ordered nodes along deterministically sorted edges;
  // components unreachable from sources are seeded by smallest color.
  for (size_t done = 0; done < order.size(); ++done) {
    int cur = order[done];
    std::vector<std::pair<std::string, int>> outs;
    for (const auto& e : g.edges) {
      if (e.from == cur) outs.push_back({"o:" + e.label + "#" + color[e.to], e.to});
      if (e.to == cur) outs.push_back({"i:" + e.label + "#" + color[e.from], e.from});
    }
    std::sort(outs.begin(), outs.end());
    for (auto& [key, node] : outs) take(node);
    if (done + 1 == order.size() && static_cast<int>(order.size()) < n) seed_remaining();
  }

  SGraph out;
  out.node_count = n;
  for (const auto& e : g.edges) out.edges.push_back({newid[e.from], newid[e.to], e.label, e.prov});
  std::sort(out.edges.begin(), out.edges.end());
  for (const auto& [name, node] : g.sources) out.sources[name] = newid[node];
  return out;
}

// ---- HR term symbols ------------------------------------------------------

Tree hr_merge(Tree a, Tree b) { return Tree("merge", {std::move(a), std::move(b)}); }
Tree hr_forget(const std::string& name, Tree t) {
  return Tree("forget[" + name + "]", {std::move(t)});
}
Tree hr_ren(const std::string& from, const std::string& to, Tree t) {
  return Tree("ren[" + from + ">" + to + "]", {std::move(t)});
}
Tree hr_edge(const std::string& a, const std::string& label, const std::string& b) {
  return Tree("edge[" + a + "," + label + "," + b + "]");
}
Tree hr_loop(const std::string& a, const std::string& label) {
  return Tree("loop[" + a + "," + label + "]");
}
Tree hr_empty() { return Tree("empty"); }

namespace {
bool bracket_args(const std::string& sym, const std::string& head, std::vector<std::string>* out,
                  char sep = ',') {
  if (sym.size() < head.size() + 2) return false;
  if (sym.compare(0, head.size(), head) != 0) return false;
  if (sym[head.size()] != '[' || sym.back() != ']') return false;
  std::string inner = sym.substr(head.size() + 1, sym.size() - head.size() - 2);
  if (out) {
    out->clear();
    std::string cur;
    for (char c : inner) {
      if (c == sep) {
        out->push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    out->push_back(cur);
  }
  return true;
}
}  // namespace

bool hr_is_merge(const Tree& t) { return t.sym == "merge" && t.kids.size() == 2; }

bool hr_is_forget(const Tree& t, std::string* name) {
  std::vector<std::string> args;
  if (!bracket_args(t.sym, "forget", &args) || t.kids.size() != 1 || args.size() != 1)
    return false;
  if (name) *name = args[0];
  return true;
}

bool hr_is_ren(const Tree& t, std::string* from, std::string* to) {
  std::vector<std::string> args;
  if (!bracket_args(t.sym, "ren", &args, '>') || t.kids.size() != 1 || args.size() != 2)
    return false;
  if (from) *from = args[0];
  if (to) *to = args[1];
  return true;
}

bool hr_is_edge(const Tree& t, std::string* a, std::string* label, std::string* b) {
  std::vector<std::string> args;
  if (!bracket_args(t.sym, "edge", &args) || !t.kids.empty() || args.size() != 3) return false;
  if (a) *a = args[0];
  if (label) *label = args[1];
  if (b) *b = args[2];
  return true;
}

bool hr_is_loop(const Tree& t, std::string* a, std::string* label) {
  std::vector<std::string> args;
  if (!bracket_args(t.sym, "loop", &args) || !t.kids.empty() || args.size() != 2) return false;
  if (a) *a = args[0];
  if (label) *label = args[1];
  return true;
}

bool hr_is_empty(const Tree& t) { return t.sym == "empty" && t.kids.empty(); }

std::set<std::string> hr_names_used(const Tree& t) {
  std::set<std::string> out;
  std::string a, b, l;
  if (hr_is_forget(t, &a)) out.insert(a);
  if (hr_is_ren(t, &a, &b)) {
    out.insert(a);
    out.insert(b);
  }
  if (hr_is_edge(t, &a, &l, &b)) {
    out.insert(a);
    out.insert(b);
  }
  if (hr_is_loop(t, &a, &l)) out.insert(a);
  for (const Tree& k : t.kids)
    for (auto& n : hr_names_used(k)) out.insert(n);
  return out;
}

std::set<std::string> hr_labels_used(const Tree& t) {
  std::set<std::string> out;
  std::string a, b, l;
  if (hr_is_edge(t, &a, &l, &b) || hr_is_loop(t, &a, &l)) out.insert(l);
  for (const Tree& k : t.kids)
    for (auto& n : hr_labels_used(k)) out.insert(n);
  return out;
}

int hr_constant_count(const Tree& t) {
  int n = (hr_is_edge(t) || hr_is_loop(t)) ? 1 : 0;
  for (const Tree& k : t.kids) n += hr_constant_count(k);
  return n;
}

namespace {
void validate_rec(const HrAlgebra& alg, const Tree& t, Path& at) {
  std::string a, b, l;
  if (hr_is_merge(t)) {
  } else if (hr_is_forget(t, &a)) {
    alg.require_declared(a, at);
  } else if (hr_is_ren(t, &a, &b)) {
    alg.require_declared(a, at);
    alg.require_declared(b, at);
  } else if (hr_is_edge(t, &a, &l, &b)) {
    alg.require_declared(a, at);
    alg.require_declared(b, at);
    if (a == b) throw EvalError(at, "edge constant with equal names; use loop");
  } else if (hr_is_loop(t, &a, &l)) {
    alg.require_declared(a, at);
  } else if (hr_is_empty(t)) {
  } else {
    throw EvalError(at, "unknown HR operator '" + t.sym + "'");
  }
  for (int i = 0; i < static_cast<int>(t.kids.size()); ++i) {
    at.push_back(i);
    validate_rec(alg, t.kids[i], at);
    at.pop_back();
  }
}

SGraph eval_rec(const HrAlgebra& alg, const Tree& t, Path& at) {
  std::string a, b, l;
  if (hr_is_merge(t)) {
    at.push_back(0);
    SGraph g1 = eval_rec(alg, t.kids[0], at);
    at.back() = 1;
    SGraph g2 = eval_rec(alg, t.kids[1], at);
    at.pop_back();
    return merge(g1, g2);
  }
  if (hr_is_forget(t, &a)) {
    alg.require_declared(a, at);
    at.push_back(0);
    SGraph g = eval_rec(alg, t.kids[0], at);
    at.pop_back();
    return forget_src(g, a);
  }
  if (hr_is_ren(t, &a, &b)) {
    alg.require_declared(a, at);
    alg.require_declared(b, at);
    at.push_back(0);
    SGraph g = eval_rec(alg, t.kids[0], at);
    at.pop_back();
    try {
      return rename_src(g, a, b);
    } catch (const EvalError& e) {
      throw EvalError(at, e.what());
    }
  }
  if (hr_is_edge(t, &a, &l, &b)) {
    SGraph g = const_edge(alg, a, l, b);
    g.edges[0].prov = at;
    return g;
  }
  if (hr_is_loop(t, &a, &l)) {
    SGraph g = const_loop(alg, a, l);
    g.edges[0].prov = at;
    return g;
  }
  if (hr_is_empty(t)) return const_empty();
  throw EvalError(at, "unknown HR operator '" + t.sym + "'");
}
}  // namespace

void hr_validate(const HrAlgebra& alg, const Tree& term) {
  Path at;
  validate_rec(alg, term, at);
}

SGraph eval_term_raw(const HrAlgebra& alg, const Tree& term) {
  Path at;
  return eval_rec(alg, term, at);
}

SGraph eval_term(const HrAlgebra& alg, const Tree& term) {
  return canonicalize(eval_term_raw(alg, term));
}

// ---- text format ----------------------------------------------------------

namespace {
Tree hr_from_surface(const Tree& t, bool allow_vars) {
  const std::string& op = t.sym;
  auto leafname = [&](const Tree& n, const char* what) {
    if (!n.kids.empty())
      throw std::runtime_error(std::string("hr term: expected ") + what + ", got subterm");
    return n.sym;
  };
  if (op == "merge" && t.kids.size() == 2)
    return hr_merge(hr_from_surface(t.kids[0], allow_vars), hr_from_surface(t.kids[1], allow_vars));
  if (op == "forget" && t.kids.size() == 2)
    return hr_forget(leafname(t.kids[0], "source name"), hr_from_surface(t.kids[1], allow_vars));
  if (op == "ren" && t.kids.size() == 3)
    return hr_ren(leafname(t.kids[0], "source name"), leafname(t.kids[1], "source name"),
                  hr_from_surface(t.kids[2], allow_vars));
  if (op == "edge" && t.kids.size() == 3)
    return hr_edge(leafname(t.kids[0], "source name"), leafname(t.kids[1], "label"),
                   leafname(t.kids[2], "source name"));
  if (op == "loop" && t.kids.size() == 2)
    return hr_loop(leafname(t.kids[0], "source name"), leafname(t.kids[1], "label"));
  if (op == "empty" && t.kids.empty()) return hr_empty();
  if (allow_vars && t.kids.empty() && is_variable(op)) return Tree(op);
  throw std::runtime_error("hr term: unknown operator or arity: " + op + "/" +
                           std::to_string(t.kids.size()));
}
}  // namespace

Tree parse_hr_term(const std::string& text) {
  return hr_from_surface(parse_tree(text), /*allow_vars=*/true);
}

std::string format_hr_term(const Tree& term) {
  std::string a, b, l;
  if (hr_is_merge(term))
    return "merge(" + format_hr_term(term.kids[0]) + "," + format_hr_term(term.kids[1]) + ")";
  if (hr_is_forget(term, &a)) return "forget(" + a + "," + format_hr_term(term.kids[0]) + ")";
  if (hr_is_ren(term, &a, &b))
    return "ren(" + a + "," + b + "," + format_hr_term(term.kids[0]) + ")";
  if (hr_is_edge(term, &a, &l, &b)) return "edge(" + a + "," + l + "," + b + ")";
  if (hr_is_loop(term, &a, &l)) return "loop(" + a + "," + l + ")";
  if (hr_is_empty(term)) return "empty";
  if (is_variable(term.sym) && term.kids.empty()) return term.sym;
  throw std::runtime_error("format_hr_term: not an HR term: " + term.sym);
}

Lth parse_hr_lth(const std::string& text) {
  Lth surface = parse_lth(text);
  Lth out;
  for (const auto& [sym, img] : surface.images) out.images[sym] = hr_from_surface(img, true);
  return out;
}

namespace {
int max_var_in(const Tree& t) {
  int m = variable_index(t.sym);
  for (const Tree& k : t.kids) m = std::max(m, max_var_in(k));
  return m;
}
}  // namespace

std::string format_hr_lth(const Lth& h) {
  std::string out;
  for (const auto& [sym, img] : h.images)
    out += sym + "/" + std::to_string(max_var_in(img)) + " -> " + format_hr_term(img) + "\n";
  return out;
}

// ---- serialization --------------------------------------------------------

std::string sgraph_to_json(const SGraph& g, int indent) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (int i = 0; i < g.node_count; ++i) j["nodes"].push_back("n" + std::to_string(i));
  auto edges = g.edges;
  std::sort(edges.begin(), edges.end());
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : edges) {
    nlohmann::ordered_json je;
    je["from"] = "n" + std::to_string(e.from);
    je["to"] = "n" + std::to_string(e.to);
    je["label"] = e.label;
    j["edges"].push_back(je);
  }
  j["sources"] = nlohmann::ordered_json::object();
  for (const auto& [name, n] : g.sources) j["sources"][name] = "n" + std::to_string(n);
  return indent >= 0 ? j.dump(indent) : j.dump();
}

namespace {
int node_id_from(const std::string& s) {
  if (s.empty() || s[0] != 'n') throw std::runtime_error("bad node id: " + s);
  return std::stoi(s.substr(1));
}
}  // namespace

SGraph sgraph_from_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  SGraph g;
  g.node_count = static_cast<int>(j.at("nodes").size());
  for (const auto& je : j.at("edges")) {
    SGraph::Edge e;
    e.from = node_id_from(je.at("from").get<std::string>());
    e.to = node_id_from(je.at("to").get<std::string>());
    e.label = je.at("label").get<std::string>();
    g.edges.push_back(e);
  }
  if (j.contains("sources"))
    for (auto it = j["sources"].begin(); it != j["sources"].end(); ++it)
      g.sources[it.key()] = node_id_from(it.value().get<std::string>());
  std::string why;
  if (!g.valid(&why)) throw std::runtime_error("invalid sgraph json: " + why);
  return g;
}

std::string sgraph_to_dot(const SGraph& g, const std::string& name,
                          const std::vector<int>* sub_edge_indices) {
  std::set<int> shaded;
  std::set<int> subset;
  if (sub_edge_indices) {
    for (int n : boundary_nodes(g, *sub_edge_indices)) shaded.insert(n);
    subset.insert(sub_edge_indices->begin(), sub_edge_indices->end());
  }
  std::ostringstream out;
  out << "digraph " << name << " {\n";
  for (int i = 0; i < g.node_count; ++i) {
    out << "  n" << i << " [";
    if (auto nm = g.source_name_of(i))
      out << "label=\"<" << *nm << ">\"";
    else
      out << "label=\"\"";
    if (shaded.count(i)) out << ", style=filled, fillcolor=gray";
    out << "];\n";
  }
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << e.label << "\"";
    if (subset.count(static_cast<int>(i))) out << ", penwidth=2";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace semgraph

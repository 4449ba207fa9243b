#include "semgraph/grammar.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

namespace semgraph {

namespace {

// Nonterminal occurrences in sentential trees are spelled "A@17".
std::string occ_sym(const std::string& nt, int id) { return nt + "@" + std::to_string(id); }

bool split_occ(const std::string& sym, std::string* nt, int* id) {
  size_t at = sym.rfind('@');
  if (at == std::string::npos) return false;
  if (nt) *nt = sym.substr(0, at);
  if (id) *id = std::atoi(sym.c_str() + at + 1);
  return true;
}

bool is_occ(const std::string& sym) { return sym.find('@') != std::string::npos; }

}  // namespace

void LmCftg::validate() const {
  if (!nonterminals.count(start) || nonterminals.at(start) != 0)
    throw std::runtime_error("grammar: start symbol must be a rank-0 nonterminal");
  for (const auto& [nt, rank] : nonterminals)
    if (rank < 0 || rank > 1)
      throw std::runtime_error("grammar: nonterminal " + nt + " must have rank 0 or 1");
  for (const Rule& r : rules) {
    auto it = nonterminals.find(r.lhs);
    if (it == nonterminals.end())
      throw std::runtime_error("grammar: rule lhs " + r.lhs + " is not a nonterminal");
    if (it->second != r.lhs_rank) throw std::runtime_error("grammar: rule lhs rank mismatch");
    int holes = 0;
    std::function<void(const Tree&)> walk = [&](const Tree& t) {
      if (t.sym == kHole) {
        ++holes;
        if (!t.kids.empty()) throw std::runtime_error("grammar: hole with children");
        return;
      }
      if (auto nit = nonterminals.find(t.sym); nit != nonterminals.end()) {
        if (static_cast<int>(t.kids.size()) != nit->second)
          throw std::runtime_error("grammar: occurrence of " + t.sym + " has wrong arity");
      } else {
        if (!terminals.knows(t.sym))
          throw std::runtime_error("grammar: undeclared symbol " + t.sym);
        if (terminals.rank(t.sym) != static_cast<int>(t.kids.size()))
          throw std::runtime_error("grammar: terminal " + t.sym + " used with wrong arity");
      }
      for (const Tree& k : t.kids) walk(k);
    };
    walk(r.rhs);
    if (holes != r.lhs_rank)
      throw std::runtime_error("grammar: rule for " + r.lhs + " must use the variable " +
                               (r.lhs_rank == 1 ? "exactly once" : "never"));
  }
}

std::vector<int> LmCftg::rules_for(const std::string& nt) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(rules.size()); ++i)
    if (rules[i].lhs == nt) out.push_back(i);
  return out;
}

// ---- grammar file format ---------------------------------------------------
// start S / nt A/1 / term f/2 [token w|eps] / A -> tree / A(x) -> context

LmCftg parse_lmcftg(const std::string& text) {
  LmCftg g;
  std::istringstream in(text);
  std::string line;
  auto replace_var = [](Tree t, const std::string& var) {
    std::function<void(Tree&)> walk = [&](Tree& n) {
      if (n.sym == var && n.kids.empty()) n.sym = kHole;
      for (Tree& k : n.kids) walk(k);
    };
    walk(t);
    return t;
  };
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "start") {
      ls >> g.start;
    } else if (head == "nt" || head == "term") {
      std::string decl;
      ls >> decl;
      size_t slash = decl.find('/');
      if (slash == std::string::npos)
        throw std::runtime_error("grammar: missing /rank in " + decl);
      std::string name = decl.substr(0, slash);
      int rank = std::atoi(decl.c_str() + slash + 1);
      if (head == "nt") {
        g.nonterminals[name] = rank;
      } else {
        g.terminals.declare(name, rank);
        std::string kw;
        if (ls >> kw) {
          if (kw == "token") {
            std::string w;
            ls >> w;
            g.alphabet.tok[name] = w;
          } else if (kw == "eps") {
            g.alphabet.tok[name] = "";
          } else {
            throw std::runtime_error("grammar: unexpected " + kw);
          }
        } else if (rank == 0) {
          g.alphabet.tok[name] = name;   // default: constant yields itself
        } else {
          g.alphabet.tok[name] = "";
        }
      }
    } else {
      // rule: "A -> rhs" or "A(x) -> rhs"
      std::string rest;
      std::getline(ls, rest);
      std::string full = head + rest;
      size_t arrow = full.find("->");
      if (arrow == std::string::npos) throw std::runtime_error("grammar: bad line: " + line);
      std::string lhs_text = full.substr(0, arrow);
      std::string rhs_text = full.substr(arrow + 2);
      // strip spaces
      lhs_text.erase(std::remove_if(lhs_text.begin(), lhs_text.end(), ::isspace), lhs_text.end());
      LmCftg::Rule r;
      size_t paren = lhs_text.find('(');
      if (paren == std::string::npos) {
        r.lhs = lhs_text;
        r.lhs_rank = 0;
        r.rhs = parse_tree(rhs_text);
      } else {
        r.lhs = lhs_text.substr(0, paren);
        r.lhs_rank = 1;
        std::string var = lhs_text.substr(paren + 1, lhs_text.size() - paren - 2);
        r.rhs = replace_var(parse_tree(rhs_text), var);
      }
      g.rules.push_back(std::move(r));
    }
  }
  // Internal symbols default to eps yield.
  for (const auto& [t, rank] : g.terminals.ranks)
    if (rank > 0 && !g.alphabet.tok.count(t)) g.alphabet.tok[t] = "";
  g.validate();
  return g;
}

std::string format_lmcftg(const LmCftg& g) {
  std::ostringstream out;
  out << "start " << g.start << "\n";
  for (const auto& [nt, rank] : g.nonterminals) out << "nt " << nt << "/" << rank << "\n";
  for (const auto& [t, rank] : g.terminals.ranks) {
    out << "term " << t << "/" << rank;
    std::string tok = g.alphabet.token_of(t);
    if (tok.empty())
      out << " eps";
    else
      out << " token " << tok;
    out << "\n";
  }
  for (const auto& r : g.rules) {
    if (r.lhs_rank == 0) {
      out << r.lhs << " -> " << format_tree(r.rhs) << "\n";
    } else {
      Tree rhs = r.rhs;
      std::function<void(Tree&)> walk = [&](Tree& n) {
        if (n.sym == kHole) n.sym = "x";
        for (Tree& k : n.kids) walk(k);
      };
      walk(rhs);
      out << r.lhs << "(x) -> " << format_tree(rhs) << "\n";
    }
  }
  return out.str();
}

// ---- bounded enumeration ---------------------------------------------------

namespace {

struct SententialState {
  Tree tree;
  std::vector<RuleApplication> steps;
  std::vector<DerivationRecord::OccurrenceInfo> occurrences;
  int pending = 0;   // unexpanded occurrences
};

// Count of surface tokens contributed by terminal leaves so far.
int token_count_lb(const Tree& t, const LmCftg& g) {
  if (t.leaf()) {
    if (is_occ(t.sym) || t.sym == kHole) return 0;
    return g.alphabet.token_of(t.sym).empty() ? 0 : 1;
  }
  int n = 0;
  for (const Tree& k : t.kids) n += token_count_lb(k, g);
  return n;
}

// Lower bound on the final height: unexpanded rank-1 occurrences may expand
// to bare contexts (transparent), rank-0 occurrences to constants.
int height_lb(const Tree& t) {
  if (t.leaf()) return 1;
  std::string nt;
  int id = 0;
  if (split_occ(t.sym, &nt, &id) && t.kids.size() == 1) return height_lb(t.kids[0]);
  int h = 0;
  for (const Tree& k : t.kids) h = std::max(h, height_lb(k));
  return 1 + h;
}

// Leftmost unexpanded occurrence in preorder; empty path vector + false if none.
bool find_occurrence(const Tree& t, Path& out) {
  if (is_occ(t.sym)) return true;
  for (int i = 0; i < static_cast<int>(t.kids.size()); ++i) {
    out.push_back(i);
    if (find_occurrence(t.kids[i], out)) return true;
    out.pop_back();
  }
  return false;
}

Tree instantiate_rhs(const Tree& rhs, const LmCftg& g, const Tree* argument, int introduced_by,
                     std::vector<DerivationRecord::OccurrenceInfo>& occs, int& created) {
  if (rhs.sym == kHole) {
    if (!argument) throw std::runtime_error("rule hole without argument");
    return *argument;
  }
  if (g.is_nonterminal(rhs.sym)) {
    int id = static_cast<int>(occs.size());
    DerivationRecord::OccurrenceInfo info;
    info.nt = rhs.sym;
    info.rank = g.nonterminals.at(rhs.sym);
    info.introduced_by = introduced_by;
    occs.push_back(info);
    ++created;
    Tree out(occ_sym(rhs.sym, id));
    for (const Tree& k : rhs.kids)
      out.kids.push_back(instantiate_rhs(k, g, argument, introduced_by, occs, created));
    return out;
  }
  Tree out(rhs.sym);
  for (const Tree& k : rhs.kids)
    out.kids.push_back(instantiate_rhs(k, g, argument, introduced_by, occs, created));
  return out;
}

// Replay the recorded steps to assign final positions to every occurrence.
void assign_positions(const LmCftg& g, DerivationRecord& rec) {
  // Rebuild the initial sentential tree: a single occurrence of the start.
  std::vector<DerivationRecord::OccurrenceInfo>& occs = rec.occurrences;
  for (auto& o : occs) {
    o.final_pos.clear();
    o.final_arg_pos.clear();
  }
  Tree sent(occ_sym(g.start, 0));

  // Tracked positions: per occurrence, expansion root, and for rank 1 the
  // argument position. Updated as later steps shift material.
  std::vector<Path> root_pos(occs.size());
  std::vector<Path> arg_pos(occs.size());
  std::vector<bool> rooted(occs.size(), false), arged(occs.size(), false);

  int next_occ = 1;  // occurrence 0 pre-created above

  for (const RuleApplication& app : rec.steps) {
    Path at;
    {
      // Find the occurrence symbol in the sentential tree.
      std::function<bool(const Tree&, Path&)> find = [&](const Tree& t, Path& cur) {
        std::string nt;
        int id = -1;
        if (split_occ(t.sym, &nt, &id) && id == app.occurrence) return true;
        for (int i = 0; i < static_cast<int>(t.kids.size()); ++i) {
          cur.push_back(i);
          if (find(t.kids[i], cur)) return true;
          cur.pop_back();
        }
        return false;
      };
      if (!find(sent, at)) throw std::runtime_error("replay: occurrence not found");
    }
    const LmCftg::Rule& rule = g.rules[app.rule];
    const Tree& node = subtree(sent, at);
    const Tree* argument = rule.lhs_rank == 1 ? &node.kids[0] : nullptr;

    // Instantiate with the SAME occurrence numbering as the original run.
    std::function<Tree(const Tree&)> inst = [&](const Tree& rhs) -> Tree {
      if (rhs.sym == kHole) return *argument;
      if (g.is_nonterminal(rhs.sym)) {
        Tree out(occ_sym(rhs.sym, next_occ++));
        for (const Tree& k : rhs.kids) out.kids.push_back(inst(k));
        return out;
      }
      Tree out(rhs.sym);
      for (const Tree& k : rhs.kids) out.kids.push_back(inst(k));
      return out;
    };
    Tree replacement = inst(rule.rhs);

    Path hole_in_rhs;
    bool has_hole = false;
    {
      std::function<bool(const Tree&, Path&)> fh = [&](const Tree& t, Path& cur) {
        if (t.sym == kHole) return true;
        for (int i = 0; i < static_cast<int>(t.kids.size()); ++i) {
          cur.push_back(i);
          if (fh(t.kids[i], cur)) return true;
          cur.pop_back();
        }
        return false;
      };
      has_hole = fh(rule.rhs, hole_in_rhs);
    }

    auto starts_with = [](const Path& p, const Path& prefix) {
      if (prefix.size() > p.size()) return false;
      return std::equal(prefix.begin(), prefix.end(), p.begin());
    };
    auto shift = [&](Path& q) {
      // q under the argument (at position at.[0]) moves to at + hole + rest.
      Path arg_at = at;
      arg_at.push_back(0);
      if (rule.lhs_rank == 1 && starts_with(q, arg_at)) {
        Path moved = at;
        moved.insert(moved.end(), hole_in_rhs.begin(), hole_in_rhs.end());
        moved.insert(moved.end(), q.begin() + arg_at.size(), q.end());
        q = moved;
      }
    };
    for (size_t i = 0; i < occs.size(); ++i) {
      if (rooted[i]) shift(root_pos[i]);
      if (arged[i]) shift(arg_pos[i]);
    }
    root_pos[app.occurrence] = at;
    rooted[app.occurrence] = true;
    if (rule.lhs_rank == 1 && has_hole) {
      Path p = at;
      p.insert(p.end(), hole_in_rhs.begin(), hole_in_rhs.end());
      arg_pos[app.occurrence] = p;
      arged[app.occurrence] = true;
    }
    sent = with_subtree(std::move(sent), at, std::move(replacement));
  }

  for (size_t i = 0; i < occs.size(); ++i) {
    if (rooted[i]) {
      occs[i].final_pos = root_pos[i];
      occs[i].expanded = true;
    }
    if (arged[i]) occs[i].final_arg_pos = arg_pos[i];
  }
  if (sent != rec.tree) throw std::runtime_error("replay: tree mismatch");
}

}  // namespace

std::vector<DerivationRecord> derive_bounded(const LmCftg& g, const DeriveLimit& limit) {
  g.validate();
  std::vector<DerivationRecord> results;
  std::set<std::string> seen;   // dedupe final trees

  SententialState init;
  {
    DerivationRecord::OccurrenceInfo info;
    info.nt = g.start;
    info.rank = 0;
    info.introduced_by = -1;
    init.occurrences.push_back(info);
    init.tree = Tree(occ_sym(g.start, 0));
    init.pending = 1;
  }

  std::deque<SententialState> queue{init};
  while (!queue.empty()) {
    SententialState st = std::move(queue.front());
    queue.pop_front();

    if (st.pending == 0) {
      if (limit.max_yield >= 0 && token_count_lb(st.tree, g) > limit.max_yield) continue;
      if (limit.max_height >= 0 && height(st.tree) > limit.max_height) continue;
      std::string key = format_tree(st.tree);
      if (seen.count(key)) continue;
      seen.insert(key);
      DerivationRecord rec;
      rec.tree = st.tree;
      rec.steps = st.steps;
      rec.occurrences = st.occurrences;
      assign_positions(g, rec);
      results.push_back(std::move(rec));
      if (limit.max_results >= 0 && static_cast<int>(results.size()) >= limit.max_results)
        return results;
      continue;
    }

    if (static_cast<int>(st.steps.size()) >= limit.max_steps) continue;
    if (limit.max_yield >= 0 && token_count_lb(st.tree, g) > limit.max_yield) continue;
    if (limit.max_height >= 0 && height_lb(st.tree) > limit.max_height) continue;

    Path at;
    if (!find_occurrence(st.tree, at)) continue;
    const Tree& node = subtree(st.tree, at);
    std::string nt;
    int occ_id = -1;
    split_occ(node.sym, &nt, &occ_id);

    for (int ri : g.rules_for(nt)) {
      const LmCftg::Rule& rule = g.rules[ri];
      SententialState next = st;
      const Tree& nnode = subtree(next.tree, at);
      const Tree* argument = rule.lhs_rank == 1 ? &nnode.kids[0] : nullptr;
      int created = 0;
      Tree repl = instantiate_rhs(rule.rhs, g, argument, occ_id, next.occurrences, created);
      next.tree = with_subtree(std::move(next.tree), at, std::move(repl));
      next.pending += created - 1;
      RuleApplication app;
      app.rule = ri;
      app.occurrence = occ_id;
      app.parent_occurrence = next.occurrences[occ_id].introduced_by;
      next.steps.push_back(app);
      next.occurrences[occ_id].expanded = true;
      queue.push_back(std::move(next));
    }
  }
  return results;
}

// ---- membership ------------------------------------------------------------

namespace {

struct Matcher {
  const LmCftg& g;

  bool derive_full(const Tree& s, const Tree& u, int depth);
  void derive_ctx(const Tree& s, const Tree& u, int depth, const Path& here,
                  std::vector<Path>& out);
};

bool contains_hole(const Tree& t) {
  if (t.sym == kHole) return true;
  for (const Tree& k : t.kids)
    if (contains_hole(k)) return true;
  return false;
}

// s has no hole: can it derive exactly u?
bool Matcher::derive_full(const Tree& s, const Tree& u, int depth) {
  if (depth < 0) return false;
  if (g.is_nonterminal(s.sym)) {
    int rank = g.nonterminals.at(s.sym);
    if (rank == 0) {
      for (int ri : g.rules_for(s.sym))
        if (derive_full(g.rules[ri].rhs, u, depth - 1)) return true;
      return false;
    }
    // B(arg): expansion is C[arg-expansion] for some rule B(x) -> C.
    for (int ri : g.rules_for(s.sym)) {
      std::vector<Path> holes;
      derive_ctx(g.rules[ri].rhs, u, depth - 1, {}, holes);
      for (const Path& q : holes)
        if (derive_full(s.kids[0], subtree(u, q), depth - 1)) return true;
    }
    return false;
  }
  if (s.sym != u.sym || s.kids.size() != u.kids.size()) return false;
  for (size_t i = 0; i < s.kids.size(); ++i)
    if (!derive_full(s.kids[i], u.kids[i], depth)) return false;
  return true;
}

// s contains exactly one hole: collect the u-positions the hole can match.
void Matcher::derive_ctx(const Tree& s, const Tree& u, int depth, const Path& here,
                         std::vector<Path>& out) {
  if (depth < 0) return;
  if (s.sym == kHole) {
    out.push_back(here);
    return;
  }
  if (g.is_nonterminal(s.sym)) {
    int rank = g.nonterminals.at(s.sym);
    if (rank == 0) return;   // rank-0 occurrences cannot contain the hole
    // Hole is inside the argument (the subtree below B).
    for (int ri : g.rules_for(s.sym)) {
      std::vector<Path> mid;
      derive_ctx(g.rules[ri].rhs, u, depth - 1, {}, mid);
      for (const Path& q : mid) {
        Path abs = here;
        abs.insert(abs.end(), q.begin(), q.end());
        derive_ctx(s.kids[0], subtree(u, q), depth - 1, abs, out);
      }
    }
    return;
  }
  if (s.sym != u.sym || s.kids.size() != u.kids.size()) return;
  int hole_kid = -1;
  for (int i = 0; i < static_cast<int>(s.kids.size()); ++i)
    if (contains_hole(s.kids[i])) hole_kid = i;
  if (hole_kid < 0) return;
  for (int i = 0; i < static_cast<int>(s.kids.size()); ++i) {
    if (i == hole_kid) continue;
    if (!derive_full(s.kids[i], u.kids[i], depth)) return;
  }
  Path sub = here;
  sub.push_back(hole_kid);
  derive_ctx(s.kids[hole_kid], u.kids[hole_kid], depth, sub, out);
}

}  // namespace

bool contains_tree(const LmCftg& g, const Tree& t, int depth_bound) {
  Matcher m{g};
  return m.derive_full(Tree(g.start), t, depth_bound);
}

// ---- pumping ----------------------------------------------------------------

int pumping_height(const LmCftg& g) {
  int max_rhs = 0;
  for (const auto& r : g.rules) max_rhs = std::max(max_rhs, height(r.rhs));
  return (static_cast<int>(g.nonterminals.size()) + 1) * (1 + max_rhs);
}

Tree PumpingDecomposition::reassemble(int i) const { return pump(*this, i); }

Tree pump(const PumpingDecomposition& dec, int i) {
  Context v = dec.c3;
  for (int j = 0; j < i; ++j) v = dec.c2.compose(v.compose(dec.c4));
  return dec.c1.substitute(v.substitute(dec.t5));
}

namespace {
bool is_prefix(const Path& prefix, const Path& p) {
  if (prefix.size() > p.size()) return false;
  return std::equal(prefix.begin(), prefix.end(), p.begin());
}
Path path_suffix(const Path& p, const Path& prefix) {
  return Path(p.begin() + prefix.size(), p.end());
}
}  // namespace

PumpingDecomposition pump_decompose(const LmCftg& g, const DerivationRecord& d) {
  int p = pumping_height(g);
  if (height(d.tree) <= p)
    throw std::runtime_error("pump_decompose: tree height is not above the pumping height");

  struct Cand {
    int o1, o2;
    Path p1, p2, a1, a2;
  };
  std::vector<Cand> cands;
  int n = static_cast<int>(d.occurrences.size());
  for (int i = 0; i < n; ++i) {
    const auto& oi = d.occurrences[i];
    if (!oi.expanded || oi.rank != 1) continue;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto& oj = d.occurrences[j];
      if (!oj.expanded || oj.rank != 1 || oj.nt != oi.nt) continue;
      // i above, j below; j's argument region contains i's argument.
      if (!is_prefix(oi.final_pos, oj.final_pos)) continue;
      if (!is_prefix(oj.final_arg_pos, oi.final_arg_pos)) continue;
      bool trivial = oi.final_pos == oj.final_pos && oi.final_arg_pos == oj.final_arg_pos;
      if (trivial) continue;
      cands.push_back({i, j, oi.final_pos, oj.final_pos, oi.final_arg_pos, oj.final_arg_pos});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.p1.size() != b.p1.size()) return a.p1.size() > b.p1.size();
    if (a.p1 != b.p1) return a.p1 < b.p1;
    if (a.p2.size() != b.p2.size()) return a.p2.size() > b.p2.size();
    return a.p2 < b.p2;
  });

  for (const Cand& c : cands) {
    const Tree& mid = subtree(d.tree, c.p1);
    Path r2 = path_suffix(c.p2, c.p1);
    Path ra2 = path_suffix(c.a2, c.p1);
    Path ra1 = path_suffix(c.a1, c.p1);
    // Combined context height constraint: C2[C3[C4[X]]] as a tree.
    Tree combined = with_subtree(mid, ra1, Tree(kHole));
    if (height(combined) > p) continue;

    PumpingDecomposition dec;
    dec.c1 = Context::cut(d.tree, c.p1);
    dec.c2 = Context::cut(mid, r2);
    dec.c3 = Context::cut(subtree(mid, r2), path_suffix(ra2, r2));
    dec.c4 = Context::cut(subtree(mid, ra2), path_suffix(ra1, ra2));
    dec.t5 = subtree(mid, ra1);
    dec.nonterminal = d.occurrences[c.o1].nt;
    // Safety: reassembling with i = 1 must reproduce the original tree.
    if (pump(dec, 1) != d.tree) continue;
    bool nontrivial = !dec.c2.is_trivial() || !dec.c4.is_trivial();
    if (!nontrivial) continue;
    return dec;
  }
  throw std::runtime_error("pump_decompose: no repeated rank-1 nonterminal cycle found");
}

// ---- bounds ------------------------------------------------------------------

int rule_token_emission(const LmCftg& g, const LmCftg::Rule& r) {
  int n = 0;
  std::function<void(const Tree&)> walk = [&](const Tree& t) {
    if (t.leaf() && t.sym != kHole && !g.is_nonterminal(t.sym)) {
      if (!g.alphabet.token_of(t.sym).empty()) ++n;
    }
    for (const Tree& k : t.kids) walk(k);
  };
  walk(r.rhs);
  return n;
}

int rule_edge_emission(const LmCftg& g, const LmCftg::Rule& r, const Lth& h) {
  int n = 0;
  std::function<void(const Tree&)> walk = [&](const Tree& t) {
    if (t.sym != kHole && !g.is_nonterminal(t.sym)) {
      auto it = h.images.find(t.sym);
      if (it != h.images.end()) n += hr_constant_count(it->second);
    }
    for (const Tree& k : t.kids) walk(k);
  };
  walk(r.rhs);
  return n;
}

int l0_bound(const LmCftg& g, const Lth& h) {
  int max_tok = 0, max_edge = 0;
  for (const auto& r : g.rules) {
    max_tok = std::max(max_tok, rule_token_emission(g, r));
    max_edge = std::max(max_edge, rule_edge_emission(g, r, h));
  }
  return pumping_height(g) * (max_tok + max_edge);
}

// ---- relations ---------------------------------------------------------------

std::vector<RelationEntry> build_relation(const LmCftg& g, const Lth& h, const HrAlgebra& alg,
                                          const DeriveLimit& limit) {
  std::vector<RelationEntry> out;
  for (const DerivationRecord& d : derive_bounded(g, limit)) {
    RelationEntry e;
    e.word = d.yield(g);
    e.graph = eval_term(alg, h.apply(d.tree));
    e.derivation = d.tree;
    out.push_back(std::move(e));
  }
  return out;
}

AlignmentReport check_alignment(const LmCftg& g, const Lth& h, const HrAlgebra& alg) {
  AlignmentReport rep;
  for (const auto& [sym, rank] : g.terminals.ranks) {
    if (rank != 0) continue;
    std::string token = g.alphabet.token_of(sym);
    if (token.empty()) continue;   // silent constants are exempt
    auto it = h.images.find(sym);
    if (it == h.images.end()) {
      rep.aligned = false;
      rep.offenders.push_back({sym, "no homomorphic image"});
      continue;
    }
    SGraph v = eval_term(alg, it->second);
    if (v.edges.size() != 1) {
      std::string labels;
      for (const auto& e : v.edges) labels += (labels.empty() ? "" : ",") + e.label;
      rep.aligned = false;
      rep.offenders.push_back(
          {sym, "image has " + std::to_string(v.edges.size()) + " edges (" + labels + ")"});
    } else if (v.edges[0].label != token) {
      rep.aligned = false;
      rep.offenders.push_back(
          {sym, "single edge labeled " + v.edges[0].label + " != token " + token});
    }
  }
  return rep;
}

}  // namespace semgraph

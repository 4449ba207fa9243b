#include "semgraph/tag.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace semgraph {

namespace {

const TagNode& tag_subnode(const TagNode& n, const Path& p) {
  const TagNode* cur = &n;
  for (int i : p) cur = &cur->kids.at(i);
  return *cur;
}

void collect_slots(const TagNode& n, Path& cur, std::vector<ElementaryTree::Slot>& out) {
  if (n.role == TagNode::Role::SubstSite) {
    out.push_back({cur, true, n.site_cat, true});
  } else if (n.role == TagNode::Role::AdjoinSite) {
    out.push_back({cur, false, n.site_cat, n.required});
  }
  for (int i = 0; i < static_cast<int>(n.kids.size()); ++i) {
    cur.push_back(i);
    collect_slots(n.kids[i], cur, out);
    cur.pop_back();
  }
}

int count_feet(const TagNode& n) {
  int c = n.role == TagNode::Role::Foot ? 1 : 0;
  for (const auto& k : n.kids) c += count_feet(k);
  return c;
}

bool find_foot(const TagNode& n, Path& cur) {
  if (n.role == TagNode::Role::Foot) return true;
  for (int i = 0; i < static_cast<int>(n.kids.size()); ++i) {
    cur.push_back(i);
    if (find_foot(n.kids[i], cur)) return true;
    cur.pop_back();
  }
  return false;
}

}  // namespace

bool operator==(const ElementaryTree::Slot& a, const ElementaryTree::Slot& b) {
  return a.pos == b.pos && a.substitution == b.substitution && a.cat == b.cat &&
         a.required == b.required;
}

void ElementaryTree::finalize() {
  slots.clear();
  Path cur;
  collect_slots(root, cur, slots);
  int feet = count_feet(root);
  if (auxiliary) {
    if (feet != 1)
      throw std::runtime_error("auxiliary tree " + name + " must have exactly one foot");
    Path fp;
    find_foot(root, fp);
    if (fp.empty()) throw std::runtime_error("auxiliary tree " + name + ": root cannot be foot");
    const TagNode& foot = tag_subnode(root, fp);
    if (foot.cat != root.cat)
      throw std::runtime_error("auxiliary tree " + name + ": foot category must equal root");
    if (!foot.kids.empty())
      throw std::runtime_error("auxiliary tree " + name + ": foot must be a leaf");
  } else if (feet != 0) {
    throw std::runtime_error("initial tree " + name + " cannot have a foot");
  }
}

std::optional<Path> ElementaryTree::foot_pos() const {
  Path p;
  if (find_foot(root, p)) return p;
  return std::nullopt;
}

const ElementaryTree* TagGrammar::find(const std::string& name) const {
  for (const auto& t : trees)
    if (t.name == name) return &t;
  return nullptr;
}

RankedSignature TagGrammar::derivation_signature() const {
  RankedSignature sig;
  for (const auto& t : trees) sig.declare(t.name, static_cast<int>(t.slots.size()));
  sig.declare(kNone, 0);
  return sig;
}

void TagGrammar::validate() const {
  if (!find(start_tree)) throw std::runtime_error("tag: start tree " + start_tree + " missing");
  if (find(start_tree)->auxiliary) throw std::runtime_error("tag: start tree must be initial");
}

// ---- realization -------------------------------------------------------------

namespace {

void stamp_origin(TagNode& n, const Path& deriv_pos) {
  if (n.role == TagNode::Role::Anchor && !n.origin_stamped) {
    n.origin_path = deriv_pos;
    n.origin_stamped = true;
  }
  for (auto& k : n.kids) stamp_origin(k, deriv_pos);
}

// Builds the derived tree as a TagNode, performing the derivation node's
// operations deepest-site-first so outer adjunctions wrap finished material.
TagNode realize_node(const TagGrammar& g, const Tree& deriv, const Path& deriv_pos) {
  const ElementaryTree* et = g.find(deriv.sym);
  if (!et) throw TagRealizeError("unknown elementary tree '" + deriv.sym + "'");
  if (deriv.kids.size() != et->slots.size())
    throw TagRealizeError("derivation node for " + et->name + " needs " +
                          std::to_string(et->slots.size()) + " children, got " +
                          std::to_string(deriv.kids.size()));

  TagNode work = et->root;
  std::vector<int> order(et->slots.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return et->slots[a].pos.size() > et->slots[b].pos.size();
  });

  for (int si : order) {
    const auto& slot = et->slots[si];
    const Tree& filler = deriv.kids[si];
    Path dpos = deriv_pos;
    dpos.push_back(si);

    TagNode* node = &work;
    for (int step : slot.pos) node = &node->kids.at(step);

    if (slot.substitution) {
      if (filler.sym == TagGrammar::kNone)
        throw TagRealizeError("unresolved substitution site (" + et->name + "/" + slot.cat + ")");
      const ElementaryTree* sub = g.find(filler.sym);
      if (!sub) throw TagRealizeError("unknown elementary tree '" + filler.sym + "'");
      if (sub->auxiliary) throw TagRealizeError("substitution of auxiliary tree " + sub->name);
      if (sub->root_cat() != slot.cat)
        throw TagRealizeError("substitution category mismatch: site " + slot.cat + ", tree " +
                              sub->name + " roots " + sub->root_cat());
      *node = realize_node(g, filler, dpos);
    } else {
      if (filler.sym == TagGrammar::kNone) {
        if (slot.required)
          throw TagRealizeError("required adjunction site left unfilled (" + et->name + "/" +
                                slot.cat + ")");
        continue;
      }
      const ElementaryTree* aux = g.find(filler.sym);
      if (!aux) throw TagRealizeError("unknown elementary tree '" + filler.sym + "'");
      if (!aux->auxiliary) throw TagRealizeError("adjunction of initial tree " + aux->name);
      if (aux->root_cat() != slot.cat)
        throw TagRealizeError("adjunction category mismatch: site " + slot.cat + ", tree " +
                              aux->name + " roots " + aux->root_cat());
      TagNode wrapped = realize_node(g, filler, dpos);
      TagNode old = std::move(*node);
      Path fp;
      if (!find_foot(wrapped, fp))
        throw TagRealizeError("auxiliary tree " + aux->name + " lost its foot");
      TagNode* foot = &wrapped;
      for (int step : fp) foot = &foot->kids.at(step);
      *foot = std::move(old);
      *node = std::move(wrapped);
    }
  }
  stamp_origin(work, deriv_pos);
  return work;
}

// Derived surface tree: anchors -> token leaves, other leaves -> "eps".
Tree to_surface(const TagNode& n, std::vector<Path>* origins) {
  if (n.role == TagNode::Role::Anchor) {
    if (origins) origins->push_back(n.origin_path);
    return Tree(n.token);
  }
  if (n.role == TagNode::Role::Foot) throw TagRealizeError("dangling foot in derived tree");
  if (n.role == TagNode::Role::SubstSite)
    throw TagRealizeError("unresolved substitution site (" + n.site_cat + ")");
  if (n.kids.empty()) return Tree("eps");
  Tree out(n.cat);
  for (const auto& k : n.kids) out.kids.push_back(to_surface(k, origins));
  return out;
}

}  // namespace

RealizedTree tag_realize(const TagGrammar& g, const Tree& derivation) {
  const ElementaryTree* root = g.find(derivation.sym);
  if (!root) throw TagRealizeError("unknown elementary tree '" + derivation.sym + "'");
  if (root->auxiliary) throw TagRealizeError("derivation root must be an initial tree");
  TagNode realized = realize_node(g, derivation, {});
  RealizedTree out;
  out.derived = to_surface(realized, &out.token_origin);
  return out;
}

Tokens tag_yield(const TagGrammar& g, const Tree& derivation) {
  Alphabet eps_only;
  eps_only.tok["eps"] = "";
  RealizedTree rt = tag_realize(g, derivation);
  return cfyield(rt.derived, eps_only);
}

std::vector<Tree> tag_derivations(const TagGrammar& g, int max_yield, int max_nodes) {
  std::map<std::string, int> anchors;
  std::function<int(const TagNode&)> count_anchors = [&](const TagNode& n) {
    int c = n.role == TagNode::Role::Anchor ? 1 : 0;
    for (const auto& k : n.kids) c += count_anchors(k);
    return c;
  };
  for (const auto& t : g.trees) anchors[t.name] = count_anchors(t.root);

  std::function<int(const Tree&)> tokens_used = [&](const Tree& d) -> int {
    if (d.sym == TagGrammar::kNone) return 0;
    int c = anchors.at(d.sym);
    for (const Tree& k : d.kids) c += tokens_used(k);
    return c;
  };

  long long work = 0;
  std::function<std::vector<Tree>(const std::string&, int)> expand =
      [&](const std::string& name, int budget) -> std::vector<Tree> {
    std::vector<Tree> out;
    const ElementaryTree* et = g.find(name);
    if (anchors.at(name) > budget) return out;
    if (++work > max_nodes * 1000LL) throw std::runtime_error("tag_derivations: too much work");

    std::vector<Tree> acc{Tree(name)};
    for (const auto& slot : et->slots) {
      std::vector<Tree> next_acc;
      for (const Tree& base : acc) {
        int remaining = budget - tokens_used(base);
        if (!slot.substitution && !slot.required) {
          Tree with_none = base;
          with_none.kids.push_back(Tree(TagGrammar::kNone));
          next_acc.push_back(std::move(with_none));
        }
        for (const auto& cand : g.trees) {
          bool ok = slot.substitution ? (!cand.auxiliary && cand.root_cat() == slot.cat)
                                      : (cand.auxiliary && cand.root_cat() == slot.cat);
          if (!ok) continue;
          for (Tree& sub : expand(cand.name, remaining)) {
            Tree with = base;
            with.kids.push_back(std::move(sub));
            next_acc.push_back(std::move(with));
          }
        }
      }
      acc = std::move(next_acc);
      if (acc.empty()) break;
    }
    for (Tree& t : acc)
      if (tokens_used(t) <= budget) out.push_back(std::move(t));
    return out;
  };

  std::vector<Tree> results = expand(g.start_tree, max_yield);
  std::sort(results.begin(), results.end(),
            [](const Tree& a, const Tree& b) { return format_tree(a) < format_tree(b); });
  return results;
}

// ---- text format ------------------------------------------------------------

namespace {

struct TagParser {
  const std::string& s;
  size_t pos = 0;

  explicit TagParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string word() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\'' ||
            s[pos] == '<' || s[pos] == '>' || s[pos] == '-' || s[pos] == '.'))
      ++pos;
    if (pos == start)
      throw std::runtime_error("tag parse: expected word at " + std::to_string(pos));
    return s.substr(start, pos - start);
  }

  TagNode node() {
    TagNode n;
    n.cat = word();
    skip_ws();
    while (pos < s.size() && s[pos] == '@') {
      ++pos;
      std::string anno = word();
      bool required = false;
      if (pos < s.size() && s[pos] == '!') {
        required = true;
        ++pos;
      }
      if (anno == "foot") {
        n.role = TagNode::Role::Foot;
      } else {
        if (!eat('(')) throw std::runtime_error("tag parse: @" + anno + " needs (arg)");
        std::string arg = word();
        if (!eat(')')) throw std::runtime_error("tag parse: missing ) after @" + anno);
        if (anno == "anchor") {
          n.role = TagNode::Role::Anchor;
          n.token = arg;
        } else if (anno == "subst") {
          n.role = TagNode::Role::SubstSite;
          n.site_cat = arg;
        } else if (anno == "adjoin") {
          n.role = TagNode::Role::AdjoinSite;
          n.site_cat = arg;
          n.required = required;
        } else {
          throw std::runtime_error("tag parse: unknown annotation @" + anno);
        }
      }
      skip_ws();
    }
    if (eat('(')) {
      if (!eat(')')) {
        while (true) {
          n.kids.push_back(node());
          if (eat(',')) continue;
          if (eat(')')) break;
          throw std::runtime_error("tag parse: expected , or ) at " + std::to_string(pos));
        }
      }
    }
    return n;
  }
};

void format_node(const TagNode& n, std::ostringstream& out) {
  out << n.cat;
  switch (n.role) {
    case TagNode::Role::Anchor:
      out << "@anchor(" << n.token << ")";
      break;
    case TagNode::Role::Foot:
      out << "@foot";
      break;
    case TagNode::Role::SubstSite:
      out << "@subst(" << n.site_cat << ")";
      break;
    case TagNode::Role::AdjoinSite:
      out << "@adjoin" << (n.required ? "!" : "") << "(" << n.site_cat << ")";
      break;
    case TagNode::Role::Interior:
      break;
  }
  if (!n.kids.empty()) {
    out << "(";
    for (size_t i = 0; i < n.kids.size(); ++i) {
      if (i) out << ",";
      format_node(n.kids[i], out);
    }
    out << ")";
  }
}

}  // namespace

TagGrammar parse_tag(const std::string& text) {
  TagGrammar g;
  std::istringstream in(text);
  std::string line;
  std::string pending_name, pending_kind;
  std::string expr;
  auto flush = [&]() {
    if (pending_name.empty()) return;
    TagParser p(expr);
    ElementaryTree et;
    et.name = pending_name;
    et.auxiliary = pending_kind == "auxiliary";
    et.root = p.node();
    p.skip_ws();
    if (p.pos != expr.size())
      throw std::runtime_error("tag parse: trailing input in " + pending_name);
    et.finalize();
    if (g.start_tree.empty() && !et.auxiliary) g.start_tree = et.name;
    g.trees.push_back(std::move(et));
    pending_name.clear();
    expr.clear();
  };
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "tree") {
      flush();
      ls >> pending_name >> pending_kind;
      if (pending_kind != "initial" && pending_kind != "auxiliary")
        throw std::runtime_error("tag parse: tree kind must be initial|auxiliary");
      std::string rest;
      std::getline(ls, rest);
      expr += rest;
    } else {
      expr += " " + line;
    }
  }
  flush();
  g.validate();
  return g;
}

std::string format_tag(const TagGrammar& g) {
  std::ostringstream out;
  for (const auto& t : g.trees) {
    out << "tree " << t.name << " " << (t.auxiliary ? "auxiliary" : "initial") << " ";
    format_node(t.root, out);
    out << "\n";
  }
  return out.str();
}

}  // namespace semgraph

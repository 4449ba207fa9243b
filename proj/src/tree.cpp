#include "semgraph/tree.hpp"

#include <algorithm>
#include <sstream>

namespace semgraph {

std::string path_to_string(const Path& p) {
  if (p.empty()) return "eps";
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

void RankedSignature::declare(const std::string& sym, int rank) {
  auto it = ranks.find(sym);
  if (it != ranks.end() && it->second != rank)
    throw std::runtime_error("signature: conflicting ranks for " + sym);
  ranks[sym] = rank;
}

int RankedSignature::rank(const std::string& sym) const {
  auto it = ranks.find(sym);
  if (it == ranks.end()) throw std::runtime_error("signature: unknown symbol " + sym);
  return it->second;
}

bool RankedSignature::well_ranked(const Tree& t) const {
  auto it = ranks.find(t.sym);
  if (it == ranks.end() || it->second != static_cast<int>(t.kids.size())) return false;
  for (const Tree& k : t.kids)
    if (!well_ranked(k)) return false;
  return true;
}

int height(const Tree& t) {
  int h = 0;
  for (const Tree& k : t.kids) h = std::max(h, height(k));
  return 1 + h;
}

int node_count(const Tree& t) {
  int n = 1;
  for (const Tree& k : t.kids) n += node_count(k);
  return n;
}

const Tree& subtree(const Tree& t, const Path& p) {
  const Tree* cur = &t;
  for (int i : p) {
    if (i < 0 || i >= static_cast<int>(cur->kids.size()))
      throw std::out_of_range("subtree: bad path");
    cur = &cur->kids[i];
  }
  return *cur;
}

Tree with_subtree(Tree t, const Path& p, Tree replacement) {
  Tree* cur = &t;
  for (int i : p) {
    if (i < 0 || i >= static_cast<int>(cur->kids.size()))
      throw std::out_of_range("with_subtree: bad path");
    cur = &cur->kids[i];
  }
  *cur = std::move(replacement);
  return t;
}

static void positions_rec(const Tree& t, Path& cur, std::vector<Path>& out) {
  out.push_back(cur);
  for (int i = 0; i < static_cast<int>(t.kids.size()); ++i) {
    cur.push_back(i);
    positions_rec(t.kids[i], cur, out);
    cur.pop_back();
  }
}

std::vector<Path> all_positions(const Tree& t) {
  std::vector<Path> out;
  Path cur;
  positions_rec(t, cur, out);
  return out;
}

void leaves_in_order(const Tree& t, std::vector<const Tree*>& out) {
  if (t.leaf()) {
    out.push_back(&t);
    return;
  }
  for (const Tree& k : t.kids) leaves_in_order(k, out);
}

namespace {

struct TreeParser {
  const std::string& s;
  size_t pos = 0;

  explicit TreeParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("tree parse error at " + std::to_string(pos) + ": " + msg);
  }

  static bool sym_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
           c == '<' || c == '>' || c == '*' || c == '!' || c == '-' || c == '.';
  }

  std::string symbol() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && sym_char(s[pos])) ++pos;
    if (pos == start) fail("expected symbol");
    return s.substr(start, pos - start);
  }

  Tree term() {
    std::string name = symbol();
    skip_ws();
    Tree t(name);
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      skip_ws();
      if (pos < s.size() && s[pos] == ')') {
        ++pos;
        return t;
      }
      while (true) {
        t.kids.push_back(term());
        skip_ws();
        if (pos < s.size() && s[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < s.size() && s[pos] == ')') {
          ++pos;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    return t;
  }
};

}  // namespace

Tree parse_tree(const std::string& text) {
  TreeParser p(text);
  Tree t = p.term();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

std::string format_tree(const Tree& t) {
  if (t.leaf()) return t.sym;
  std::string s = t.sym + "(";
  for (size_t i = 0; i < t.kids.size(); ++i) {
    if (i) s += ",";
    s += format_tree(t.kids[i]);
  }
  s += ")";
  return s;
}

static int count_holes(const Tree& t) {
  int n = t.sym == kHole ? 1 : 0;
  for (const Tree& k : t.kids) n += count_holes(k);
  return n;
}

static bool find_hole(const Tree& t, Path& cur) {
  if (t.sym == kHole) return true;
  for (int i = 0; i < static_cast<int>(t.kids.size()); ++i) {
    cur.push_back(i);
    if (find_hole(t.kids[i], cur)) return true;
    cur.pop_back();
  }
  return false;
}

Context::Context(Tree t) : tree_(std::move(t)) {
  if (count_holes(tree_) != 1)
    throw std::runtime_error("context must contain exactly one hole X");
  Path p;
  find_hole(tree_, p);
  hole_ = p;
}

Context Context::cut(const Tree& t, const Path& p) {
  if (count_holes(t) != 0)
    throw std::runtime_error("context cut: tree already contains a hole");
  return Context(with_subtree(t, p, Tree(kHole)));
}

Tree Context::substitute(const Tree& filler) const {
  if (count_holes(filler) != 0)
    throw std::runtime_error("substitute: filler contains the hole symbol");
  return with_subtree(tree_, hole_, filler);
}

Context Context::compose(const Context& inner) const {
  return Context(with_subtree(tree_, hole_, inner.tree_));
}

std::string tokens_to_string(const Tokens& w) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += w[i];
  }
  return s;
}

Tokens tokens_from_string(const std::string& s) {
  Tokens w;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) w.push_back(tok);
  return w;
}

std::string Alphabet::token_of(const std::string& leaf_sym) const {
  auto it = tok.find(leaf_sym);
  if (it == tok.end()) return leaf_sym;
  return it->second;
}

static void yield_rec(const Tree& t, const Alphabet* a, Tokens& out) {
  if (t.leaf()) {
    std::string w = a ? a->token_of(t.sym) : t.sym;
    if (!w.empty()) out.push_back(w);
    return;
  }
  for (const Tree& k : t.kids) yield_rec(k, a, out);
}

Tokens cfyield(const Tree& t) {
  Tokens out;
  yield_rec(t, nullptr, out);
  return out;
}

Tokens cfyield(const Tree& t, const Alphabet& a) {
  Tokens out;
  yield_rec(t, &a, out);
  return out;
}

static std::pair<Tokens, Tokens> ctx_yields(const Context& c, const Alphabet* a) {
  // Tokens strictly left of the hole in preorder leaf order, and right of it.
  Tokens left, right;
  bool seen_hole = false;
  std::vector<const Tree*> ls;
  leaves_in_order(c.tree(), ls);
  for (const Tree* l : ls) {
    if (l->sym == kHole) {
      seen_hole = true;
      continue;
    }
    std::string w = a ? a->token_of(l->sym) : l->sym;
    if (w.empty()) continue;
    (seen_hole ? right : left).push_back(w);
  }
  return {left, right};
}

std::pair<Tokens, Tokens> context_yields(const Context& c) { return ctx_yields(c, nullptr); }
std::pair<Tokens, Tokens> context_yields(const Context& c, const Alphabet& a) {
  return ctx_yields(c, &a);
}

int count_tokens(const Tokens& w, const std::string& a) {
  return static_cast<int>(std::count(w.begin(), w.end(), a));
}

bool is_variable(const std::string& sym) { return variable_index(sym) > 0; }

int variable_index(const std::string& sym) {
  if (sym.size() < 2 || sym[0] != 'x') return 0;
  for (size_t i = 1; i < sym.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(sym[i]))) return 0;
  int idx = std::atoi(sym.c_str() + 1);
  return idx > 0 ? idx : 0;
}

namespace {

Tree apply_rec(const Lth& h, const Tree& t, const Path& at, std::map<Path, Path>* origin,
               Path& out_pos) {
  auto it = h.images.find(t.sym);
  if (it == h.images.end())
    throw std::runtime_error("homomorphism has no image for symbol " + t.sym);

  // Walk the image, substituting x_i by the image of the i-th subtree.
  // Every emitted node that does not stem from a variable originates at `at`.
  struct Walker {
    const Lth& h;
    const Tree& t;
    const Path& at;
    std::map<Path, Path>* origin;

    Tree walk(const Tree& img, Path& out_pos) {
      int vi = variable_index(img.sym);
      if (vi > 0) {
        if (vi > static_cast<int>(t.kids.size()))
          throw std::runtime_error("homomorphism image of " + t.sym + " uses " + img.sym +
                                   " beyond rank " + std::to_string(t.kids.size()));
        if (!img.kids.empty())
          throw std::runtime_error("variable " + img.sym + " must be a leaf");
        Path child_at = at;
        child_at.push_back(vi - 1);
        Path sub_pos = out_pos;
        Tree sub = apply_rec(h, t.kids[vi - 1], child_at, origin, sub_pos);
        return sub;
      }
      if (origin) (*origin)[out_pos] = at;
      Tree out(img.sym);
      out.kids.reserve(img.kids.size());
      for (int i = 0; i < static_cast<int>(img.kids.size()); ++i) {
        out_pos.push_back(i);
        out.kids.push_back(walk(img.kids[i], out_pos));
        out_pos.pop_back();
      }
      return out;
    }
  };

  Walker w{h, t, at, origin};
  return w.walk(it->second, out_pos);
}

}  // namespace

Tree Lth::apply(const Tree& t) const {
  Path p, q;
  return apply_rec(*this, t, p, nullptr, q);
}

Tree Lth::apply_traced(const Tree& t, std::map<Path, Path>* origin) const {
  Path p, q;
  return apply_rec(*this, t, p, origin, q);
}

bool Lth::linear() const {
  for (const auto& [sym, img] : images) {
    std::map<int, int> uses;
    std::vector<const Tree*> stack{&img};
    while (!stack.empty()) {
      const Tree* n = stack.back();
      stack.pop_back();
      int vi = variable_index(n->sym);
      if (vi > 0 && ++uses[vi] > 1) return false;
      for (const Tree& k : n->kids) stack.push_back(&k);
    }
  }
  return true;
}

Lth parse_lth(const std::string& text) {
  Lth h;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    size_t arrow = line.find("->");
    if (arrow == std::string::npos) throw std::runtime_error("hom line missing '->': " + line);
    std::string lhs = line.substr(0, arrow);
    std::string rhs = line.substr(arrow + 2);
    size_t slash = lhs.find('/');
    if (slash == std::string::npos) throw std::runtime_error("hom lhs missing '/rank': " + lhs);
    std::string sym;
    std::istringstream(lhs.substr(0, slash)) >> sym;
    h.images[sym] = parse_tree(rhs);
  }
  if (!h.linear()) throw std::runtime_error("homomorphism is not linear");
  return h;
}

namespace {
int max_var(const Tree& t) {
  int m = variable_index(t.sym);
  for (const Tree& k : t.kids) m = std::max(m, max_var(k));
  return m;
}
}  // namespace

std::string format_lth(const Lth& h) {
  std::string out;
  for (const auto& [sym, img] : h.images) {
    out += sym + "/" + std::to_string(max_var(img)) + " -> " + format_tree(img) + "\n";
  }
  return out;
}

}  // namespace semgraph

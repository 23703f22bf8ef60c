#include "qha/formula.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <optional>
#include <functional>
#include <unordered_map>

namespace qha {

// ---- Bindings ---------------------------------------------------------------

Bindings::Bindings() : cache_(std::make_shared<ExpansionCache>()) {}

Bindings& Bindings::set(const std::string& name, Tensor t) {
  tensors_[name] = std::make_shared<const Tensor>(std::move(t));
  return *this;
}
Bindings& Bindings::set(const std::string& name, std::shared_ptr<const Tensor> t) {
  tensors_[name] = std::move(t);
  return *this;
}
Bindings& Bindings::set_op(const std::string& name, std::shared_ptr<const LinearOperator> op) {
  ops_[name] = std::move(op);
  return *this;
}
Bindings& Bindings::set_op(const std::string& name, LinearOperator op) {
  return set_op(name, std::make_shared<const LinearOperator>(std::move(op)));
}
Bindings& Bindings::set_fn(const std::string& name, std::shared_ptr<const Functional> f) {
  fns_[name] = std::move(f);
  return *this;
}
Bindings& Bindings::set_fn(const std::string& name, Functional f) {
  return set_fn(name, std::make_shared<const Functional>(std::move(f)));
}

const std::shared_ptr<const Tensor>* Bindings::tensor(const std::string& name) const {
  auto it = tensors_.find(name);
  return it == tensors_.end() ? nullptr : &it->second;
}
const LinearOperator* Bindings::op(const std::string& name) const {
  auto it = ops_.find(name);
  return it == ops_.end() ? nullptr : it->second.get();
}
const Functional* Bindings::fn(const std::string& name) const {
  auto it = fns_.find(name);
  return it == fns_.end() ? nullptr : it->second.get();
}

// ---- parsing ----------------------------------------------------------------

namespace {

struct Node {
  enum Kind { Unit, Sym, Apply } kind = Unit;
  int occ = -1;
  std::string name;
  std::vector<Node> inner;
};

struct Occ {
  std::string ident;
  std::vector<int> path;
  std::size_t offset = 0;
};

struct Parsed {
  std::vector<std::vector<Node>> legs;
  std::vector<Occ> occs;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Parsed run() {
    Parsed p;
    out_ = &p;
    p.legs.push_back(word(false));
    while (peek() == '|') {
      ++pos_;
      p.legs.push_back(word(false));
    }
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw FormulaError(msg + " at byte " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  std::vector<Node> word(bool nested) {
    std::vector<Node> w;
    for (;;) {
      char c = peek();
      if (c == '\0' || c == '|' || (nested && c == ')')) break;
      if (c == '1' && (pos_ + 1 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
        ++pos_;
        w.push_back(Node{});
        continue;
      }
      if (!std::isalpha(static_cast<unsigned char>(c))) fail("expected a factor");
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string ident(s_.substr(start, pos_ - start));
      if (pos_ < s_.size() && s_[pos_] == '(') {
        ++pos_;
        Node n;
        n.kind = Node::Apply;
        n.name = ident;
        n.inner = word(true);
        if (peek() != ')') fail("expected ')'");
        ++pos_;
        w.push_back(std::move(n));
        continue;
      }
      Occ o;
      o.ident = ident;
      o.offset = start;
      if (pos_ < s_.size() && s_[pos_] == '_') {
        ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '(') {
          ++pos_;
          for (;;) {
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected path digit");
            o.path.push_back(s_[pos_++] - '0');
            if (pos_ < s_.size() && s_[pos_] == ',') {
              ++pos_;
              continue;
            }
            if (pos_ < s_.size() && s_[pos_] == ')') {
              ++pos_;
              break;
            }
            fail("expected ',' or ')' in path");
          }
        } else if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          o.path.push_back(s_[pos_++] - '0');
        } else {
          fail("expected path after '_'");
        }
        for (int d : o.path)
          if (d != 1 && d != 2) fail("path digits must be 1 or 2");
      }
      Node n;
      n.kind = Node::Sym;
      n.occ = int(out_->occs.size());
      out_->occs.push_back(std::move(o));
      w.push_back(std::move(n));
    }
    return w;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  Parsed* out_ = nullptr;
};

std::shared_ptr<const Parsed> parse_cached(std::string_view f) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::shared_ptr<const Parsed>> cache;
  std::string key(f);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto p = std::make_shared<const Parsed>(Parser(f).run());
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::move(key), p);
  return p;
}

// ---- coproduct trees --------------------------------------------------------

struct TreeNode {
  bool leaf = true;
  int occ = -1;
  std::unique_ptr<TreeNode> child[2];
};

void insert_path(TreeNode& root, const std::vector<int>& path, int occ, const std::string& what) {
  TreeNode* n = &root;
  for (int d : path) {
    if (n->leaf && n->occ >= 0) throw FormulaError("Sweedler path of " + what + " extends a used leaf");
    n->leaf = false;
    auto& c = n->child[d - 1];
    if (!c) c = std::make_unique<TreeNode>();
    n = c.get();
  }
  if (!n->leaf || n->occ >= 0) throw FormulaError("Sweedler leg of " + what + " used twice or as inner node");
  n->occ = occ;
}

void check_tree(const TreeNode& n, const std::string& what) {
  if (n.leaf) {
    if (n.occ < 0) throw FormulaError("incomplete Sweedler tree for " + what);
    return;
  }
  if (!n.child[0] || !n.child[1]) throw FormulaError("incomplete Sweedler tree for " + what);
  check_tree(*n.child[0], what);
  check_tree(*n.child[1], what);
}

void leaves(const TreeNode& n, std::vector<int>& out) {
  if (n.leaf) {
    out.push_back(n.occ);
    return;
  }
  leaves(*n.child[0], out);
  leaves(*n.child[1], out);
}

void signature(const TreeNode& n, std::string& s) {
  if (n.leaf) {
    s += '.';
    return;
  }
  s += '(';
  signature(*n.child[0], s);
  s += ',';
  signature(*n.child[1], s);
  s += ')';
}

void expand(const LinearOperator& delta, Tensor& t, int pos, const TreeNode& n) {
  if (n.leaf) return;
  t = apply_on_leg(delta, t, pos);
  expand(delta, t, pos + 1, *n.child[1]);
  expand(delta, t, pos, *n.child[0]);
}

// ---- evaluation -------------------------------------------------------------

struct Symbol {
  std::shared_ptr<const Bindings::PureSum> sum;
  std::vector<int> leg_occ;  // occurrence bound to each expanded leg
};

class Evaluator {
 public:
  Evaluator(const AlgebraView& A, const Parsed& p, const Bindings& b) : A_(A), p_(p), b_(b), n_(A.dim()) {}

  Tensor run() {
    idx_.assign(p_.occs.size(), 0);
    count_.assign(p_.occs.size(), 1);
    vec_.assign(p_.occs.size(), nullptr);
    resolve();
    const int r = int(p_.legs.size());
    leg_occs_.resize(static_cast<std::size_t>(r));
    memo_.resize(static_cast<std::size_t>(r));
    memo_ok_.resize(static_cast<std::size_t>(r));
    for (int l = 0; l < r; ++l) {
      collect(p_.legs[l], leg_occs_[l]);
      memo_ok_[l] = fits(leg_occs_[l]);
    }
    out_ = std::make_unique<TensorBuilder>(r, n_);
    loop(0, Scalar(1));
    return out_->build();
  }

 private:
  bool fits(const std::vector<int>& occs) const {
    long double cap = 1;
    for (int o : occs) cap *= count_[o];
    return cap < 1.8e19L;
  }

  void collect(const std::vector<Node>& w, std::vector<int>& out) const {
    for (const auto& n : w) {
      if (n.kind == Node::Sym) out.push_back(n.occ);
      if (n.kind == Node::Apply) collect(n.inner, out);
    }
  }

  void resolve() {
    // base name -> (tensor, per-component tree)
    struct Group {
      std::shared_ptr<const Tensor> t;
      std::vector<std::unique_ptr<TreeNode>> comps;
    };
    std::map<std::string, Group> groups;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < p_.occs.size(); ++i) {
      const Occ& o = p_.occs[i];
      std::string base;
      int comp = 0;
      std::shared_ptr<const Tensor> t;
      if (auto* direct = b_.tensor(o.ident)) {
        t = *direct;
        if (t->rank() != 1) throw FormulaError("'" + o.ident + "' is a tensor; name a component");
        // Plain repeated elements are independent; occurrences with paths share one coproduct tree.
        base = o.path.empty() ? o.ident + "#" + std::to_string(i) : o.ident;
      } else {
        std::size_t cut = o.ident.size();
        while (cut > 0 && std::isdigit(static_cast<unsigned char>(o.ident[cut - 1]))) --cut;
        if (cut == o.ident.size() || cut == 0) throw FormulaError("unknown symbol '" + o.ident + "'");
        base = o.ident.substr(0, cut);
        comp = std::stoi(o.ident.substr(cut)) - 1;
        auto* bt = b_.tensor(base);
        if (!bt) throw FormulaError("unknown symbol '" + o.ident + "'");
        t = *bt;
        if (comp < 0 || comp >= t->rank())
          throw FormulaError("component out of range in '" + o.ident + "'");
      }
      if (t->dim() != n_) throw DimMismatch("binding '" + base + "' has wrong dimension");
      auto [it, fresh] = groups.try_emplace(base);
      if (fresh) {
        it->second.t = t;
        it->second.comps.resize(std::size_t(t->rank()));
        order.push_back(base);
      }
      auto& root = it->second.comps[comp];
      if (!root) root = std::make_unique<TreeNode>();
      insert_path(*root, o.path, int(i), o.ident);
    }
    for (const auto& base : order) {
      Group& g = groups[base];
      std::string sig;
      Symbol sym;
      for (std::size_t c = 0; c < g.comps.size(); ++c) {
        if (!g.comps[c]) throw FormulaError("component " + std::to_string(c + 1) + " of '" + base + "' unused");
        check_tree(*g.comps[c], base);
        signature(*g.comps[c], sig);
        sig += ';';
        leaves(*g.comps[c], sym.leg_occ);
      }
      auto& cache = b_.cache();
      std::lock_guard<std::mutex> lock(cache.mu);
      auto key = std::make_pair(g.t.get(), sig);
      auto it = cache.entries.find(key);
      if (it == cache.entries.end()) {
        Tensor e = *g.t;
        for (int c = int(g.comps.size()) - 1; c >= 0; --c) expand(*A_.delta, e, c, *g.comps[c]);
        auto sum = std::make_shared<const Bindings::PureSum>(pure_decomposition(e));
        it = cache.entries.emplace(key, std::make_pair(g.t, std::move(sum))).first;
      }
      sym.sum = it->second.second;
      for (int o : sym.leg_occ) count_[o] = int(sym.sum->terms.size());
      syms_.push_back(std::move(sym));
    }
  }

  void loop(std::size_t s, const Scalar& coef) {
    if (s == syms_.size()) {
      emit(coef);
      return;
    }
    const Symbol& sym = syms_[s];
    const auto& terms = sym.sum->terms;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      for (std::size_t l = 0; l < sym.leg_occ.size(); ++l) {
        idx_[sym.leg_occ[l]] = int(t);
        vec_[sym.leg_occ[l]] = &terms[t][l];
      }
      loop(s + 1, coef);
    }
  }

  std::pair<Tensor, Scalar> word(const std::vector<Node>& w) const {
    std::optional<Tensor> cur;
    Scalar s(1);
    for (const auto& n : w) {
      if (n.kind == Node::Unit) continue;
      if (n.kind == Node::Sym) {
        const Tensor& v = *vec_[n.occ];
        cur = cur ? A_.mult->mul(*cur, v) : v;
      } else {
        auto [v, s2] = word(n.inner);
        s = s * s2;
        if (const LinearOperator* op = b_.op(n.name)) {
          Tensor img = op->apply(v);
          cur = cur ? A_.mult->mul(*cur, img) : img;
        } else if (const Functional* f = b_.fn(n.name)) {
          s = s * (*f)(v);
        } else {
          throw FormulaError("unknown operator or functional '" + n.name + "'");
        }
      }
      if (s.is_zero() || (cur && cur->is_zero())) return {Tensor(1, n_), Scalar()};
    }
    return {cur ? *cur : *A_.unit, s};
  }

  const std::pair<Tensor, Scalar>& leg_value(int l) {
    auto& occs = leg_occs_[l];
    Key key = 0;
    if (memo_ok_[l]) {
      for (int o : occs) key = key * Key(count_[o]) + Key(idx_[o]);
      auto it = memo_[l].find(key);
      if (it != memo_[l].end()) return it->second;
    } else {
      scratch_ = word(p_.legs[l]);
      return scratch_;
    }
    return memo_[l].emplace(key, word(p_.legs[l])).first->second;
  }

  void emit(const Scalar& coef) {
    const int r = int(p_.legs.size());
    vals_.resize(static_cast<std::size_t>(r));
    Scalar c = coef;
    for (int l = 0; l < r; ++l) {
      const auto& v = leg_value(l);
      if (v.second.is_zero() || v.first.is_zero()) return;
      c = c * v.second;
      vals_[l] = &v.first;
      if (!memo_ok_[l]) {
        owned_.push_back(v.first);
        vals_[l] = &owned_.back();
      }
    }
    kron(0, 0, c);
    owned_.clear();
  }

  void kron(int l, Key prefix, const Scalar& c) {
    if (l == int(vals_.size())) {
      out_->add(prefix, c);
      return;
    }
    for (const auto& [k, v] : vals_[l]->terms()) kron(l + 1, prefix * Key(n_) + k, c * v);
  }

  const AlgebraView& A_;
  const Parsed& p_;
  const Bindings& b_;
  const int n_;
  std::vector<Symbol> syms_;
  std::vector<int> idx_;    // pure-term index per occurrence
  std::vector<int> count_;  // pure-term count per occurrence
  std::vector<const Tensor*> vec_;
  std::vector<std::vector<int>> leg_occs_;
  std::vector<std::unordered_map<Key, std::pair<Tensor, Scalar>>> memo_;
  std::vector<char> memo_ok_;
  std::vector<const Tensor*> vals_;
  std::deque<Tensor> owned_;
  std::pair<Tensor, Scalar> scratch_;
  std::unique_ptr<TensorBuilder> out_;
};

}  // namespace

Bindings::PureSum pure_decomposition(const Tensor& t) {
  const int r = t.rank(), n = t.dim();
  if (r == 1) return Bindings::PureSum{{{t}}};
  Bindings::PureSum basis_form;
  {
    KeyCodec kc(r, n);
    std::vector<int> idx(static_cast<std::size_t>(r));
    for (const auto& [k, c] : t.terms()) {
      kc.unpack(k, idx.data());
      std::vector<Tensor> legs;
      legs.reserve(idx.size());
      for (int l = 0; l < r; ++l) legs.push_back(l == 0 ? Tensor::basis(n, idx[0]).scaled(c) : Tensor::basis(n, idx[l]));
      basis_form.terms.push_back(std::move(legs));
    }
  }
  if (t.nnz() <= 1) return basis_form;

  // Slices along the first leg, then a basis of their span by elimination.
  const Key w = KeyCodec(r, n).weight(0);
  std::vector<int> rows_at;
  std::vector<Tensor> rows;
  {
    std::vector<Term> cur;
    int at = -1;
    auto flush = [&] {
      if (!cur.empty()) {
        rows_at.push_back(at);
        rows.emplace_back(r - 1, n, std::move(cur));
        cur.clear();
      }
    };
    for (const auto& [k, c] : t.terms()) {
      int i = int(k / w);
      if (i != at) {
        flush();
        at = i;
      }
      cur.emplace_back(k % w, c);
    }
    flush();
  }
  struct Echelon {
    Tensor row;
    Key pivot;
    std::vector<Scalar> expr;  // in terms of the chosen slices
  };
  std::vector<Echelon> ech;
  std::vector<std::size_t> chosen;
  std::vector<std::vector<Scalar>> coef(rows.size());  // slice = Σ coef[s]·chosen[s]
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Tensor res = rows[i];
    std::vector<Scalar> used(ech.size());
    for (std::size_t k = 0; k < ech.size(); ++k) {
      Scalar a = res.coeff(ech[k].pivot);
      if (a.is_zero()) continue;
      Scalar c = a / ech[k].row.coeff(ech[k].pivot);
      used[k] = c;
      res = res - ech[k].row.scaled(c);
    }
    std::vector<Scalar> expr(chosen.size() + 1);
    for (std::size_t k = 0; k < ech.size(); ++k)
      if (!used[k].is_zero())
        for (std::size_t s = 0; s < ech[k].expr.size(); ++s) expr[s] = expr[s] + used[k] * ech[k].expr[s];
    if (res.is_zero()) {
      expr.pop_back();
      coef[i] = std::move(expr);
      continue;
    }
    std::vector<Scalar> e(chosen.size() + 1);
    for (std::size_t s = 0; s < chosen.size(); ++s) e[s] = -expr[s];
    e.back() = Scalar(1);
    chosen.push_back(i);
    for (auto& x : ech) x.expr.resize(chosen.size());
    for (auto& x : coef) x.resize(chosen.size());
    coef[i] = std::vector<Scalar>(chosen.size());
    coef[i].back() = Scalar(1);
    Key piv = res.terms().front().first;
    ech.push_back(Echelon{std::move(res), piv, std::move(e)});
  }
  for (auto& x : coef) x.resize(chosen.size());

  Bindings::PureSum out;
  for (std::size_t s = 0; s < chosen.size(); ++s) {
    TensorBuilder lead(1, n);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!coef[i][s].is_zero()) lead.add(Key(rows_at[i]), coef[i][s]);
    Tensor u = lead.build();
    Bindings::PureSum tail = pure_decomposition(rows[chosen[s]]);
    for (auto& legs : tail.terms) {
      legs.insert(legs.begin(), u);
      out.terms.push_back(std::move(legs));
    }
    if (out.terms.size() >= basis_form.terms.size()) return basis_form;
  }
  return out;
}

Tensor evaluate(const AlgebraView& A, std::string_view formula, const Bindings& b) {
  auto p = parse_cached(formula);
  Evaluator ev(A, *p, b);
  return ev.run();
}

Scalar evaluate_scalar(const AlgebraView& A, std::string_view formula, const Bindings& b) {
  Tensor t = evaluate(A, formula, b);
  if (t.rank() != 1) throw FormulaError("scalar formula must have one leg");
  if (t.is_zero()) return Scalar();
  Scalar c = t.ratio_to(*A.unit);
  if (c.is_zero()) throw FormulaError("formula is not a multiple of the unit: " + std::string(formula));
  return c;
}

namespace {

std::unique_ptr<TreeNode> parse_plan(std::string_view s, std::size_t& pos, int& leaves_seen) {
  while (pos < s.size() && s[pos] == ' ') ++pos;
  if (pos >= s.size()) throw Error("BadPlan", "unexpected end of plan");
  auto n = std::make_unique<TreeNode>();
  if (s[pos] == '.') {
    ++pos;
    n->occ = leaves_seen++;
    return n;
  }
  if (s[pos] != '(') throw Error("BadPlan", "expected '(' or '.' at byte " + std::to_string(pos));
  ++pos;
  n->leaf = false;
  n->child[0] = parse_plan(s, pos, leaves_seen);
  while (pos < s.size() && s[pos] == ' ') ++pos;
  if (pos >= s.size() || s[pos] != ',') throw Error("BadPlan", "expected ',' at byte " + std::to_string(pos));
  ++pos;
  n->child[1] = parse_plan(s, pos, leaves_seen);
  while (pos < s.size() && s[pos] == ' ') ++pos;
  if (pos >= s.size() || s[pos] != ')') throw Error("BadPlan", "expected ')' at byte " + std::to_string(pos));
  ++pos;
  return n;
}

}  // namespace

Tensor iterate_coproduct(const LinearOperator& delta, const Tensor& t, std::string_view plan) {
  if (t.rank() != 1) throw Error("BadPlan", "iterated coproduct needs a rank-1 element");
  std::size_t pos = 0;
  int count = 0;
  auto root = parse_plan(plan, pos, count);
  while (pos < plan.size() && plan[pos] == ' ') ++pos;
  if (pos != plan.size()) throw Error("BadPlan", "trailing characters in plan");
  Tensor out = t;
  expand(delta, out, 0, *root);
  return out;
}

}  // namespace qha

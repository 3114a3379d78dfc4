#ifndef DEFEQ_KERNEL_HPP
#define DEFEQ_KERNEL_HPP

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Core syntax for relational first-order logic with equality: signatures of
// relation symbols, formulas built from the five primitive constructs
// (predicate application, equality, negation, conjunction, existential
// quantification), and the usual syntactic operations on them. Derived
// connectives exist only as constructor sugar; every formula you can hold is
// already desugared.

namespace defeq {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed argument or violated precondition: arity clashes, unknown
// symbols, free variables where a sentence is required, and the like.
struct TypeError : Error {
  using Error::Error;
};

struct ParseError : Error {
  std::size_t line;
  std::size_t column;
  ParseError(const std::string& message, std::size_t line_, std::size_t column_)
      : Error(message + " (line " + std::to_string(line_) + ", column " +
              std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
};

// A requested model enumeration would exceed the fixed bit budget.
struct EnumerationLimitError : Error {
  using Error::Error;
};

// Variables are indices into the canonical name sequence x0, x1, x2, ...
struct Variable {
  unsigned index = 0;
  auto operator<=>(const Variable&) const = default;
};

inline std::string name_of(Variable v) { return "x" + std::to_string(v.index); }

struct RelationSymbol {
  std::string name;
  unsigned arity = 0;
  auto operator<=>(const RelationSymbol&) const = default;
};

inline bool valid_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// Spellings of the form x<digits> are reserved for variables by the concrete
// grammar and may not name relation symbols.
inline bool variable_shaped(const std::string& s) {
  if (s.size() < 2 || s[0] != 'x') return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// A finite set of relation symbols with distinct names.
class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<RelationSymbol> symbols) {
    for (const auto& s : symbols) add(s);
  }

  // Re-adding a symbol with the same arity is a no-op.
  void add(const RelationSymbol& s) {
    if (!valid_identifier(s.name))
      throw TypeError("invalid relation symbol name '" + s.name + "'");
    if (variable_shaped(s.name))
      throw TypeError("relation symbol name '" + s.name +
                      "' is reserved for variables");
    auto [it, fresh] = arities_.emplace(s.name, s.arity);
    if (!fresh && it->second != s.arity)
      throw TypeError("relation symbol '" + s.name + "' declared with arity " +
                      std::to_string(s.arity) + " but already has arity " +
                      std::to_string(it->second));
  }

  bool contains(const std::string& name) const { return arities_.count(name) != 0; }

  bool contains(const RelationSymbol& s) const {
    auto it = arities_.find(s.name);
    return it != arities_.end() && it->second == s.arity;
  }

  std::optional<unsigned> arity(const std::string& name) const {
    auto it = arities_.find(name);
    if (it == arities_.end()) return std::nullopt;
    return it->second;
  }

  RelationSymbol symbol(const std::string& name) const {
    auto it = arities_.find(name);
    if (it == arities_.end())
      throw TypeError("unknown relation symbol '" + name + "'");
    return {it->first, it->second};
  }

  // Name-sorted.
  std::vector<RelationSymbol> symbols() const {
    std::vector<RelationSymbol> out;
    out.reserve(arities_.size());
    for (const auto& [name, arity] : arities_) out.push_back({name, arity});
    return out;
  }

  std::size_t size() const { return arities_.size(); }
  bool empty() const { return arities_.empty(); }

  bool disjoint_with(const Signature& other) const {
    for (const auto& [name, arity] : arities_)
      if (other.contains(name)) return false;
    return true;
  }

  bool subset_of(const Signature& other) const {
    for (const auto& [name, arity] : arities_)
      if (!other.contains(RelationSymbol{name, arity})) return false;
    return true;
  }

  // Shared names must agree on arity.
  static Signature united(const Signature& a, const Signature& b) {
    Signature out = a;
    for (const auto& [name, arity] : b.arities_) out.add({name, arity});
    return out;
  }

  static Signature intersected(const Signature& a, const Signature& b) {
    Signature out;
    for (const auto& [name, arity] : a.arities_)
      if (b.contains(RelationSymbol{name, arity})) out.add({name, arity});
    return out;
  }

  // Symbols of a whose name does not occur in b.
  static Signature subtracted(const Signature& a, const Signature& b) {
    Signature out;
    for (const auto& [name, arity] : a.arities_)
      if (!b.contains(name)) out.add({name, arity});
    return out;
  }

  auto operator<=>(const Signature&) const = default;

 private:
  std::map<std::string, unsigned> arities_;
};

// Immutable formula; nodes are shared, so copies are cheap and structural
// identity can often short-circuit through pointer identity.
class Formula {
 public:
  enum class Kind { Predicate, Equals, Not, And, Exists };

  Kind kind() const { return node_->kind; }

  const RelationSymbol& rel() const { return at(Kind::Predicate).rel; }
  const std::vector<Variable>& args() const { return at(Kind::Predicate).vars; }

  Variable eq_left() const { return at(Kind::Equals).vars[0]; }
  Variable eq_right() const { return at(Kind::Equals).vars[1]; }

  // Negation and quantification both have a single body.
  const Formula& body() const {
    const Node& n = *node_;
    if (n.kind != Kind::Not && n.kind != Kind::Exists)
      throw TypeError("formula node has no body");
    return n.subs[0];
  }

  const Formula& left() const { return at(Kind::And).subs[0]; }
  const Formula& right() const { return at(Kind::And).subs[1]; }

  Variable bound() const { return at(Kind::Exists).vars[0]; }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const Formula& s : node_->subs) n += s.node_count();
    return n;
  }

  bool operator==(const Formula& other) const { return compare(other) == 0; }
  std::strong_ordering operator<=>(const Formula& other) const {
    return compare(other) <=> 0;
  }

  friend Formula pred(RelationSymbol symbol, std::vector<Variable> args);
  friend Formula eq(Variable a, Variable b);
  friend Formula neg(Formula f);
  friend Formula conj(Formula a, Formula b);
  friend Formula exists(Variable v, Formula f);

 private:
  struct Node {
    Kind kind;
    RelationSymbol rel;           // Predicate only
    std::vector<Variable> vars;   // args / equality sides / bound variable
    std::vector<Formula> subs;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  const Node& at(Kind k) const {
    if (node_->kind != k) throw TypeError("formula node has unexpected shape");
    return *node_;
  }

  int compare(const Formula& other) const {
    if (node_ == other.node_) return 0;
    if (node_->kind != other.node_->kind)
      return node_->kind < other.node_->kind ? -1 : 1;
    const Node& a = *node_;
    const Node& b = *other.node_;
    if (a.rel != b.rel) return a.rel < b.rel ? -1 : 1;
    if (a.vars != b.vars) return a.vars < b.vars ? -1 : 1;
    for (std::size_t i = 0; i < a.subs.size(); ++i)
      if (int c = a.subs[i].compare(b.subs[i]); c != 0) return c;
    return 0;
  }

  std::shared_ptr<const Node> node_;
};

inline Formula pred(RelationSymbol symbol, std::vector<Variable> args) {
  if (!valid_identifier(symbol.name) || variable_shaped(symbol.name))
    throw TypeError("invalid relation symbol name '" + symbol.name + "'");
  if (args.size() != symbol.arity)
    throw TypeError("relation symbol '" + symbol.name + "' has arity " +
                    std::to_string(symbol.arity) + " but was applied to " +
                    std::to_string(args.size()) + " arguments");
  auto node = std::make_shared<Formula::Node>();
  node->kind = Formula::Kind::Predicate;
  node->rel = std::move(symbol);
  node->vars = std::move(args);
  return Formula(std::move(node));
}

inline Formula eq(Variable a, Variable b) {
  auto node = std::make_shared<Formula::Node>();
  node->kind = Formula::Kind::Equals;
  node->vars = {a, b};
  return Formula(std::move(node));
}

inline Formula neg(Formula f) {
  auto node = std::make_shared<Formula::Node>();
  node->kind = Formula::Kind::Not;
  node->subs = {std::move(f)};
  return Formula(std::move(node));
}

inline Formula conj(Formula a, Formula b) {
  auto node = std::make_shared<Formula::Node>();
  node->kind = Formula::Kind::And;
  node->subs = {std::move(a), std::move(b)};
  return Formula(std::move(node));
}

inline Formula exists(Variable v, Formula f) {
  auto node = std::make_shared<Formula::Node>();
  node->kind = Formula::Kind::Exists;
  node->vars = {v};
  node->subs = {std::move(f)};
  return Formula(std::move(node));
}

namespace detail {

inline void free_vars_rec(const Formula& f, std::vector<Variable>& binders,
                          std::set<Variable>& out) {
  auto open = [&](Variable v) {
    if (std::find(binders.begin(), binders.end(), v) == binders.end())
      out.insert(v);
  };
  switch (f.kind()) {
    case Formula::Kind::Predicate:
      for (Variable v : f.args()) open(v);
      break;
    case Formula::Kind::Equals:
      open(f.eq_left());
      open(f.eq_right());
      break;
    case Formula::Kind::Not:
      free_vars_rec(f.body(), binders, out);
      break;
    case Formula::Kind::And:
      free_vars_rec(f.left(), binders, out);
      free_vars_rec(f.right(), binders, out);
      break;
    case Formula::Kind::Exists:
      binders.push_back(f.bound());
      free_vars_rec(f.body(), binders, out);
      binders.pop_back();
      break;
  }
}

}  // namespace detail

inline std::set<Variable> free_variables(const Formula& f) {
  std::set<Variable> out;
  std::vector<Variable> binders;
  detail::free_vars_rec(f, binders, out);
  return out;
}

// Smallest index strictly above every variable occurrence (free or bound).
inline unsigned var_index_bound(const Formula& f) {
  unsigned bound = 0;
  switch (f.kind()) {
    case Formula::Kind::Predicate:
      for (Variable v : f.args()) bound = std::max(bound, v.index + 1);
      break;
    case Formula::Kind::Equals:
      bound = std::max(f.eq_left().index, f.eq_right().index) + 1;
      break;
    case Formula::Kind::Not:
      bound = var_index_bound(f.body());
      break;
    case Formula::Kind::And:
      bound = std::max(var_index_bound(f.left()), var_index_bound(f.right()));
      break;
    case Formula::Kind::Exists:
      bound = std::max(f.bound().index + 1, var_index_bound(f.body()));
      break;
  }
  return bound;
}

inline bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

inline bool well_formed(const Formula& f, const Signature& sig) {
  switch (f.kind()) {
    case Formula::Kind::Predicate:
      return sig.contains(f.rel());
    case Formula::Kind::Equals:
      return true;
    case Formula::Kind::Not:
    case Formula::Kind::Exists:
      return well_formed(f.body(), sig);
    case Formula::Kind::And:
      return well_formed(f.left(), sig) && well_formed(f.right(), sig);
  }
  return false;
}

inline void collect_symbols(const Formula& f, Signature& out) {
  switch (f.kind()) {
    case Formula::Kind::Predicate:
      out.add(f.rel());
      break;
    case Formula::Kind::Equals:
      break;
    case Formula::Kind::Not:
    case Formula::Kind::Exists:
      collect_symbols(f.body(), out);
      break;
    case Formula::Kind::And:
      collect_symbols(f.left(), out);
      collect_symbols(f.right(), out);
      break;
  }
}

inline Signature symbols_of(const Formula& f) {
  Signature out;
  collect_symbols(f, out);
  return out;
}

using VarMap = std::map<Variable, Variable>;

namespace detail {

inline Variable lookup(Variable v, const VarMap& m) {
  auto it = m.find(v);
  return it == m.end() ? v : it->second;
}

// Blind renaming of every occurrence, binders included. No capture analysis;
// callers must supply maps that cannot capture (e.g. targets fresh).
inline Formula rename_all(const Formula& f, const VarMap& m) {
  switch (f.kind()) {
    case Formula::Kind::Predicate: {
      std::vector<Variable> args;
      args.reserve(f.args().size());
      for (Variable v : f.args()) args.push_back(lookup(v, m));
      return pred(f.rel(), std::move(args));
    }
    case Formula::Kind::Equals:
      return eq(lookup(f.eq_left(), m), lookup(f.eq_right(), m));
    case Formula::Kind::Not:
      return neg(rename_all(f.body(), m));
    case Formula::Kind::And:
      return conj(rename_all(f.left(), m), rename_all(f.right(), m));
    case Formula::Kind::Exists:
      return exists(lookup(f.bound(), m), rename_all(f.body(), m));
  }
  throw TypeError("unreachable formula kind");
}

}  // namespace detail

// Capture-avoiding simultaneous substitution of variables for variables.
// Variables outside the map are left alone. When a binder would capture an
// incoming variable it is renamed to the smallest index above the bound
// variable, the relevant substitution targets, and the body's free variables.
inline Formula substitute(const Formula& f, const VarMap& m) {
  switch (f.kind()) {
    case Formula::Kind::Predicate: {
      std::vector<Variable> args;
      args.reserve(f.args().size());
      for (Variable v : f.args()) args.push_back(detail::lookup(v, m));
      return pred(f.rel(), std::move(args));
    }
    case Formula::Kind::Equals:
      return eq(detail::lookup(f.eq_left(), m), detail::lookup(f.eq_right(), m));
    case Formula::Kind::Not:
      return neg(substitute(f.body(), m));
    case Formula::Kind::And:
      return conj(substitute(f.left(), m), substitute(f.right(), m));
    case Formula::Kind::Exists: {
      Variable v = f.bound();
      std::set<Variable> open = free_variables(f.body());
      open.erase(v);
      VarMap inner;
      bool capture = false;
      unsigned hi = v.index;
      for (Variable x : open) {
        Variable t = detail::lookup(x, m);
        if (t == v) capture = true;
        hi = std::max({hi, x.index, t.index});
        inner.emplace(x, t);
      }
      if (!capture) return exists(v, substitute(f.body(), inner));
      Variable fresh{hi + 1};
      inner.emplace(v, fresh);
      return exists(fresh, substitute(f.body(), inner));
    }
  }
  throw TypeError("unreachable formula kind");
}

inline Formula disj(Formula a, Formula b) {
  return neg(conj(neg(std::move(a)), neg(std::move(b))));
}

inline Formula implies(Formula a, Formula b) {
  return disj(neg(std::move(a)), std::move(b));
}

inline Formula iff(Formula a, Formula b) {
  Formula fwd = implies(a, b);
  return conj(std::move(fwd), implies(std::move(b), std::move(a)));
}

inline Formula forall(Variable v, Formula f) {
  return neg(exists(v, neg(std::move(f))));
}

// E! x . f  desugars to  E x . (f & ~E y . (f[x:=y] & ~x = y))  with y fresh.
inline Formula exists_unique(Variable v, Formula f) {
  Variable w{std::max(var_index_bound(f), v.index + 1)};
  Formula shifted = substitute(f, {{v, w}});
  return exists(v, conj(f, neg(exists(w, conj(std::move(shifted),
                                              neg(eq(v, w)))))));
}

// Rewrites predicate atoms through fn, leaving the rest of the structure
// (binders included) untouched.
inline Formula map_predicates(
    const Formula& f,
    const std::function<Formula(const RelationSymbol&, const std::vector<Variable>&)>& fn) {
  switch (f.kind()) {
    case Formula::Kind::Predicate:
      return fn(f.rel(), f.args());
    case Formula::Kind::Equals:
      return f;
    case Formula::Kind::Not:
      return neg(map_predicates(f.body(), fn));
    case Formula::Kind::And:
      return conj(map_predicates(f.left(), fn), map_predicates(f.right(), fn));
    case Formula::Kind::Exists:
      return exists(f.bound(), map_predicates(f.body(), fn));
  }
  throw TypeError("unreachable formula kind");
}

// Renames relation symbols; arities must be preserved. Symbols outside the
// map are left alone.
inline Formula apply_symbol_map(const Formula& f,
                                const std::map<RelationSymbol, RelationSymbol>& m) {
  return map_predicates(f, [&](const RelationSymbol& s, const std::vector<Variable>& args) {
    auto it = m.find(s);
    if (it == m.end()) return pred(s, args);
    if (it->second.arity != s.arity)
      throw TypeError("symbol map changes arity of '" + s.name + "'");
    return pred(it->second, args);
  });
}

namespace detail {

inline Formula canon_rec(const Formula& f, VarMap& renaming, unsigned& next) {
  switch (f.kind()) {
    case Formula::Kind::Predicate: {
      std::vector<Variable> args;
      args.reserve(f.args().size());
      for (Variable v : f.args()) args.push_back(lookup(v, renaming));
      return pred(f.rel(), std::move(args));
    }
    case Formula::Kind::Equals:
      return eq(lookup(f.eq_left(), renaming), lookup(f.eq_right(), renaming));
    case Formula::Kind::Not:
      return neg(canon_rec(f.body(), renaming, next));
    case Formula::Kind::And: {
      Formula l = canon_rec(f.left(), renaming, next);
      return conj(std::move(l), canon_rec(f.right(), renaming, next));
    }
    case Formula::Kind::Exists: {
      Variable v = f.bound();
      Variable nv{next++};
      auto it = renaming.find(v);
      std::optional<Variable> saved;
      if (it != renaming.end()) saved = it->second;
      renaming[v] = nv;
      Formula body = canon_rec(f.body(), renaming, next);
      if (saved)
        renaming[v] = *saved;
      else
        renaming.erase(v);
      return exists(nv, std::move(body));
    }
  }
  throw TypeError("unreachable formula kind");
}

}  // namespace detail

// Alpha-canonical form: free variables keep their indices, bound variables
// are renumbered in preorder starting just above the highest free index.
// Idempotent, and two formulas are alpha-equivalent iff their canonical
// forms are structurally equal.
inline Formula canonical(const Formula& f) {
  unsigned next = 0;
  for (Variable v : free_variables(f)) next = std::max(next, v.index + 1);
  VarMap renaming;
  return detail::canon_rec(f, renaming, next);
}

inline bool alpha_equal(const Formula& a, const Formula& b) {
  return canonical(a) == canonical(b);
}

// A named finite theory. Axioms are stored alpha-canonicalized, sorted and
// deduplicated, so == compares presentations up to axiom order, repetition
// and bound-variable names. The name is display metadata and not compared.
class Theory {
 public:
  Theory() = default;

  Theory(std::string name, Signature signature, std::vector<Formula> axioms)
      : name_(std::move(name)), signature_(std::move(signature)) {
    axioms_.reserve(axioms.size());
    for (const Formula& ax : axioms) {
      if (!is_sentence(ax))
        throw TypeError("theory '" + name_ + "': axiom has free variables");
      if (!well_formed(ax, signature_))
        throw TypeError("theory '" + name_ +
                        "': axiom uses symbols outside the signature");
      axioms_.push_back(canonical(ax));
    }
    std::sort(axioms_.begin(), axioms_.end());
    axioms_.erase(std::unique(axioms_.begin(), axioms_.end()), axioms_.end());
  }

  const std::string& name() const { return name_; }
  const Signature& signature() const { return signature_; }
  const std::vector<Formula>& axioms() const { return axioms_; }

  Theory renamed(std::string name) const {
    Theory t = *this;
    t.name_ = std::move(name);
    return t;
  }

  bool operator==(const Theory& other) const {
    return signature_ == other.signature_ && axioms_ == other.axioms_;
  }

 private:
  std::string name_;
  Signature signature_;
  std::vector<Formula> axioms_;
};

}  // namespace defeq

#endif  // DEFEQ_KERNEL_HPP

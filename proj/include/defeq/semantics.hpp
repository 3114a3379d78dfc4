#ifndef DEFEQ_SEMANTICS_HPP
#define DEFEQ_SEMANTICS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "defeq/definitions.hpp"
#include "defeq/kernel.hpp"

// Finite structures with universe {0..n-1}, Tarskian satisfaction, and the
// exhaustive bounded-model oracle: every semantic claim in this library is
// ultimately decided by scanning all structures up to a size bound k.

namespace defeq {

// Iterates tuples over {0..n-1}^arity in lexicographic order (last
// coordinate fastest). Returns false when the odometer wraps.
inline bool next_tuple(std::vector<unsigned>& t, unsigned n) {
  for (std::size_t i = t.size(); i-- > 0;) {
    if (++t[i] < n) return true;
    t[i] = 0;
  }
  return false;
}

// A finite structure: universe {0..size-1} and one tuple set per relation
// symbol. Immutable after construction.
class FiniteModel {
 public:
  using Tuple = std::vector<unsigned>;
  using Relation = std::set<Tuple>;

  FiniteModel(unsigned size, Signature sig,
              std::map<std::string, Relation> interpretation = {})
      : size_(size), sig_(std::move(sig)) {
    if (size_ == 0) throw TypeError("model universe must be nonempty");
    for (const auto& [name, rel] : interpretation) {
      auto arity = sig_.arity(name);
      if (!arity)
        throw TypeError("interpretation names unknown symbol '" + name + "'");
      for (const Tuple& t : rel) {
        if (t.size() != *arity)
          throw TypeError("tuple of wrong arity for symbol '" + name + "'");
        for (unsigned x : t)
          if (x >= size_)
            throw TypeError("tuple element out of universe range for '" + name + "'");
      }
    }
    for (const RelationSymbol& s : sig_.symbols()) {
      auto it = interpretation.find(s.name);
      interp_[s.name] = it == interpretation.end() ? Relation{} : std::move(it->second);
    }
  }

  // Universe size.
  unsigned size() const { return size_; }
  const Signature& signature() const { return sig_; }

  const Relation& relation(const std::string& name) const {
    auto it = interp_.find(name);
    if (it == interp_.end())
      throw TypeError("model interprets no symbol '" + name + "'");
    return it->second;
  }

  bool holds(const std::string& name, const Tuple& t) const {
    return relation(name).count(t) != 0;
  }

  bool operator==(const FiniteModel& other) const {
    return size_ == other.size_ && sig_ == other.sig_ && interp_ == other.interp_;
  }

  // Canonical order: ascending size, then signature, then per name-sorted
  // symbol the lexicographically earlier bit-vector over the tuple space
  // (absent before present, so the all-empty structure comes first).
  bool operator<(const FiniteModel& other) const {
    if (size_ != other.size_) return size_ < other.size_;
    if (sig_ != other.sig_) return sig_ < other.sig_;
    for (const auto& [name, rel] : interp_) {
      const Relation& theirs = other.interp_.at(name);
      if (rel == theirs) continue;
      Tuple t(*sig_.arity(name), 0);
      do {
        bool a = rel.count(t) != 0;
        bool b = theirs.count(t) != 0;
        if (a != b) return !a;
      } while (next_tuple(t, size_));
    }
    return false;
  }

 private:
  unsigned size_;
  Signature sig_;
  std::map<std::string, Relation> interp_;
};

// Partial assignment of universe elements to variables.
class Evaluation {
 public:
  Evaluation() = default;
  Evaluation(std::initializer_list<std::pair<const Variable, unsigned>> bindings)
      : map_(bindings) {}

  Evaluation& bind(Variable v, unsigned value) {
    map_[v] = value;
    return *this;
  }

  std::optional<unsigned> value(Variable v) const {
    auto it = map_.find(v);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<Variable, unsigned> map_;
};

namespace detail {

// env[i] is the value of x_i, or -1 when unassigned. Callers size env to
// var_index_bound of the formula, so no bounds checks are needed.
inline bool eval(const FiniteModel& m, const Formula& f, std::vector<int>& env) {
  switch (f.kind()) {
    case Formula::Kind::Predicate: {
      FiniteModel::Tuple t;
      t.reserve(f.args().size());
      for (Variable v : f.args()) t.push_back(static_cast<unsigned>(env[v.index]));
      return m.holds(f.rel().name, t);
    }
    case Formula::Kind::Equals:
      return env[f.eq_left().index] == env[f.eq_right().index];
    case Formula::Kind::Not:
      return !eval(m, f.body(), env);
    case Formula::Kind::And:
      return eval(m, f.left(), env) && eval(m, f.right(), env);
    case Formula::Kind::Exists: {
      unsigned v = f.bound().index;
      int saved = env[v];
      for (unsigned d = 0; d < m.size(); ++d) {
        env[v] = static_cast<int>(d);
        if (eval(m, f.body(), env)) {
          env[v] = saved;
          return true;
        }
      }
      env[v] = saved;
      return false;
    }
  }
  throw TypeError("unreachable formula kind");
}

inline bool models_unchecked(const FiniteModel& m, const std::vector<Formula>& axioms) {
  for (const Formula& ax : axioms) {
    std::vector<int> env(var_index_bound(ax), -1);
    if (!eval(m, ax, env)) return false;
  }
  return true;
}

}  // namespace detail

// Tarskian satisfaction. The evaluation must cover every free variable of f
// with a value inside the universe, and f must be well formed over the
// model's signature.
inline bool satisfies(const FiniteModel& m, const Formula& f,
                      const Evaluation& e = {}) {
  if (!well_formed(f, m.signature()))
    throw TypeError("formula uses symbols the model does not interpret");
  std::vector<int> env(var_index_bound(f), -1);
  for (Variable v : free_variables(f)) {
    auto val = e.value(v);
    if (!val)
      throw TypeError("evaluation does not cover free variable " + name_of(v));
    if (*val >= m.size())
      throw TypeError("evaluation maps " + name_of(v) + " outside the universe");
    env[v.index] = static_cast<int>(*val);
  }
  return detail::eval(m, f, env);
}

inline bool models_theory(const FiniteModel& m, const Theory& t) {
  if (!(m.signature() == t.signature()))
    throw TypeError("model signature does not match the theory");
  return detail::models_unchecked(m, t.axioms());
}

// The relation {(a1..an) : m |= body[params := a]} that body defines in m.
// params must be distinct and cover the free variables of body.
inline FiniteModel::Relation defined_relation(const FiniteModel& m, const Formula& body,
                                              const std::vector<Variable>& params) {
  if (!well_formed(body, m.signature()))
    throw TypeError("defining formula uses symbols the model does not interpret");
  std::set<Variable> seen;
  unsigned hi = var_index_bound(body);
  for (Variable p : params) {
    if (!seen.insert(p).second)
      throw TypeError("defining parameters repeat " + name_of(p));
    hi = std::max(hi, p.index + 1);
  }
  for (Variable v : free_variables(body))
    if (!seen.count(v))
      throw TypeError("defining formula has free variable " + name_of(v) +
                      " outside the parameters");
  FiniteModel::Relation out;
  FiniteModel::Tuple t(params.size(), 0);
  std::vector<int> env(hi, -1);
  do {
    for (std::size_t i = 0; i < params.size(); ++i)
      env[params[i].index] = static_cast<int>(t[i]);
    if (detail::eval(m, body, env)) out.insert(t);
  } while (next_tuple(t, m.size()));
  return out;
}

// Forgets the symbols outside sig.
inline FiniteModel reduct(const FiniteModel& m, const Signature& sig) {
  if (!sig.subset_of(m.signature()))
    throw TypeError("reduct signature is not contained in the model's");
  std::map<std::string, FiniteModel::Relation> interp;
  for (const RelationSymbol& s : sig.symbols()) interp[s.name] = m.relation(s.name);
  return FiniteModel(m.size(), sig, std::move(interp));
}

// Interprets each defined symbol by the relation its body defines in m; the
// rest of m is carried over unchanged.
inline FiniteModel expand_by_definitions(const FiniteModel& m, const DefinitionSet& delta) {
  if (!delta.base().subset_of(m.signature()))
    throw TypeError("definition bodies use symbols the model does not interpret");
  std::map<std::string, FiniteModel::Relation> interp;
  for (const RelationSymbol& s : m.signature().symbols())
    interp[s.name] = m.relation(s.name);
  Signature extended = m.signature();
  for (const ExplicitDefinition& d : delta.definitions()) {
    if (m.signature().contains(d.defined().name))
      throw TypeError("defined symbol '" + d.defined().name +
                      "' collides with the model signature");
    extended.add(d.defined());
    interp[d.defined().name] = defined_relation(m, d.body(), d.params());
  }
  return FiniteModel(m.size(), std::move(extended), std::move(interp));
}

inline std::uint64_t tuple_space_bits(const Signature& sig, unsigned n) {
  std::uint64_t bits = 0;
  for (const RelationSymbol& s : sig.symbols()) {
    std::uint64_t cells = 1;
    for (unsigned i = 0; i < s.arity; ++i) cells *= n;
    bits += cells;
  }
  return bits;
}

// Hard budget for exhaustive structure enumeration: 2^24 structures per
// universe size is the most the oracle will scan.
inline constexpr std::uint64_t kMaxEnumerationBits = 24;

// Visits every structure over sig with universe {0..n-1} in canonical order
// (the bit-vector order of FiniteModel::operator<). The callback returns
// false to stop early; the function returns true iff the scan completed.
inline bool for_each_structure(const Signature& sig, unsigned n,
                               const std::function<bool(const FiniteModel&)>& fn) {
  if (n == 0) throw TypeError("universe size must be at least 1");
  std::uint64_t bits = tuple_space_bits(sig, n);
  if (bits > kMaxEnumerationBits)
    throw EnumerationLimitError(
        "enumerating structures of size " + std::to_string(n) + " over " +
        std::to_string(sig.size()) + " symbols needs 2^" + std::to_string(bits) +
        " candidates (limit 2^" + std::to_string(kMaxEnumerationBits) +
        "); lower the bound or shrink the signature");
  // Tuple lists per symbol, name-sorted; one flat bit-vector spans them all.
  std::vector<RelationSymbol> syms = sig.symbols();
  std::vector<std::vector<FiniteModel::Tuple>> tuples(syms.size());
  for (std::size_t i = 0; i < syms.size(); ++i) {
    FiniteModel::Tuple t(syms[i].arity, 0);
    do {
      tuples[i].push_back(t);
    } while (next_tuple(t, n));
  }
  std::vector<bool> cell(static_cast<std::size_t>(bits), false);
  for (;;) {
    std::map<std::string, FiniteModel::Relation> interp;
    std::size_t j = 0;
    for (std::size_t i = 0; i < syms.size(); ++i) {
      FiniteModel::Relation rel;
      for (const FiniteModel::Tuple& t : tuples[i])
        if (cell[j++]) rel.insert(t);
      interp[syms[i].name] = std::move(rel);
    }
    if (!fn(FiniteModel(n, sig, std::move(interp)))) return false;
    // Binary increment, last cell fastest, so the all-empty structure comes
    // first and bit-vectors ascend lexicographically.
    std::size_t i = cell.size();
    while (i-- > 0) {
      if (!cell[i]) {
        cell[i] = true;
        break;
      }
      cell[i] = false;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return true;
}

struct BoundedModelClass {
  Theory theory;
  unsigned bound = 0;
  std::vector<FiniteModel> models;  // canonical order
};

// All models of t with universe sizes 1..k.
inline BoundedModelClass enumerate_models(const Signature& sig, const Theory& t,
                                          unsigned k) {
  if (!(sig == t.signature()))
    throw TypeError("enumeration signature must match the theory");
  if (k < 1) throw TypeError("bound must be at least 1");
  BoundedModelClass out{t, k, {}};
  for (unsigned n = 1; n <= k; ++n)
    for_each_structure(sig, n, [&](const FiniteModel& m) {
      if (detail::models_unchecked(m, t.axioms())) out.models.push_back(m);
      return true;
    });
  return out;
}

struct EquivalenceResult {
  bool equivalent = false;
  unsigned bound = 0;
  // A model of exactly one side, preferring the canonically first model of
  // the left theory that the right theory rejects.
  std::optional<FiniteModel> witness;
  std::optional<bool> witness_models_left;
};

// Do the two theories have the same models up to size k? Signatures must
// coincide. Streams over the structures; nothing is stored.
inline EquivalenceResult bounded_equivalent(const Theory& t1, const Theory& t2,
                                            unsigned k) {
  if (!(t1.signature() == t2.signature()))
    throw TypeError("bounded equivalence needs a shared signature");
  if (k < 1) throw TypeError("bound must be at least 1");
  EquivalenceResult out;
  out.bound = k;
  std::optional<FiniteModel> right_only;
  for (unsigned n = 1; n <= k && !out.witness; ++n)
    for_each_structure(t1.signature(), n, [&](const FiniteModel& m) {
      bool a = detail::models_unchecked(m, t1.axioms());
      bool b = detail::models_unchecked(m, t2.axioms());
      if (a && !b) {
        out.witness = m;
        out.witness_models_left = true;
        return false;
      }
      if (b && !a && !right_only) right_only = m;
      return true;
    });
  if (!out.witness && right_only) {
    out.witness = std::move(right_only);
    out.witness_models_left = false;
  }
  out.equivalent = !out.witness;
  return out;
}

// Does every model of t with size at most k satisfy the sentence f?
inline bool bounded_entails(const Theory& t, const Formula& f, unsigned k) {
  if (!is_sentence(f))
    throw TypeError("entailment query must be a sentence");
  if (!well_formed(f, t.signature()))
    throw TypeError("entailment query uses symbols outside the theory");
  if (k < 1) throw TypeError("bound must be at least 1");
  bool holds = true;
  for (unsigned n = 1; n <= k && holds; ++n)
    for_each_structure(t.signature(), n, [&](const FiniteModel& m) {
      if (detail::models_unchecked(m, t.axioms())) {
        std::vector<int> env(var_index_bound(f), -1);
        if (!detail::eval(m, f, env)) {
          holds = false;
          return false;
        }
      }
      return true;
    });
  return holds;
}

}  // namespace defeq

#endif  // DEFEQ_SEMANTICS_HPP

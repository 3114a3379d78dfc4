#ifndef DEFEQ_DEFINITIONS_HPP
#define DEFEQ_DEFINITIONS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "defeq/kernel.hpp"

// Explicit definitions of new relation symbols by formulas over a base
// signature, and finite sets of such definitions (the "delta" of a
// definitional extension).

namespace defeq {

// p(x1..xn) := body, with body over the base language only. Parameters are
// normalized to x1..xn and the body is alpha-canonicalized, so structural
// equality of definitions is equality up to parameter and bound-variable
// naming.
class ExplicitDefinition {
 public:
  ExplicitDefinition(RelationSymbol defined, const std::vector<Variable>& params,
                     const Formula& body)
      : defined_(std::move(defined)), body_(normalize(defined_, params, body)) {}

  const RelationSymbol& defined() const { return defined_; }
  const Formula& body() const { return body_; }

  // x1..xn for arity n.
  std::vector<Variable> params() const { return canonical_params(defined_.arity); }

  static std::vector<Variable> canonical_params(unsigned arity) {
    std::vector<Variable> out;
    out.reserve(arity);
    for (unsigned i = 1; i <= arity; ++i) out.push_back(Variable{i});
    return out;
  }

  bool operator==(const ExplicitDefinition& other) const {
    return defined_ == other.defined_ && body_ == other.body_;
  }
  auto operator<=>(const ExplicitDefinition& other) const {
    if (auto c = defined_ <=> other.defined_; c != 0) return c;
    return body_ <=> other.body_;
  }

 private:
  static Formula normalize(const RelationSymbol& defined,
                           const std::vector<Variable>& params, const Formula& body) {
    if (params.size() != defined.arity)
      throw TypeError("definition of '" + defined.name + "/" +
                      std::to_string(defined.arity) + "' takes " +
                      std::to_string(params.size()) + " parameters");
    VarMap m;
    for (std::size_t i = 0; i < params.size(); ++i)
      if (!m.emplace(params[i], Variable{static_cast<unsigned>(i + 1)}).second)
        throw TypeError("definition of '" + defined.name +
                        "' repeats a parameter");
    for (Variable v : free_variables(body))
      if (!m.count(v))
        throw TypeError("definition body for '" + defined.name +
                        "' has a free variable " + name_of(v) +
                        " outside the parameters");
    if (symbols_of(body).contains(defined.name))
      throw TypeError("definition of '" + defined.name + "' mentions itself");
    return canonical(substitute(body, m));
  }

  RelationSymbol defined_;
  Formula body_;
};

// forall x1..xn (p(x1..xn) <-> body)
inline Formula sentence_of(const ExplicitDefinition& d) {
  Formula f = iff(pred(d.defined(), d.params()), d.body());
  for (unsigned i = d.defined().arity; i >= 1; --i) f = forall(Variable{i}, std::move(f));
  return f;
}

// A set of explicit definitions over a common base signature, keyed by the
// defined symbol. The defined symbols are disjoint from the base.
class DefinitionSet {
 public:
  explicit DefinitionSet(Signature base) : base_(std::move(base)) {}

  DefinitionSet(Signature base, const std::vector<ExplicitDefinition>& defs)
      : base_(std::move(base)) {
    for (const auto& d : defs) add(d);
  }

  void add(const ExplicitDefinition& d) {
    if (base_.contains(d.defined().name))
      throw TypeError("defined symbol '" + d.defined().name +
                      "' already occurs in the base signature");
    if (!well_formed(d.body(), base_))
      throw TypeError("definition body for '" + d.defined().name +
                      "' uses symbols outside the base signature");
    if (!defs_.emplace(d.defined().name, d).second)
      throw TypeError("symbol '" + d.defined().name + "' defined twice");
  }

  const Signature& base() const { return base_; }

  Signature defined_signature() const {
    Signature out;
    for (const auto& [name, d] : defs_) out.add(d.defined());
    return out;
  }

  // base plus the defined symbols.
  Signature extended_signature() const {
    return Signature::united(base_, defined_signature());
  }

  bool defines(const std::string& name) const { return defs_.count(name) != 0; }

  const ExplicitDefinition& definition_of(const std::string& name) const {
    auto it = defs_.find(name);
    if (it == defs_.end())
      throw TypeError("no definition for symbol '" + name + "'");
    return it->second;
  }

  // Name-sorted.
  std::vector<ExplicitDefinition> definitions() const {
    std::vector<ExplicitDefinition> out;
    out.reserve(defs_.size());
    for (const auto& [name, d] : defs_) out.push_back(d);
    return out;
  }

  std::size_t size() const { return defs_.size(); }
  bool empty() const { return defs_.empty(); }

  bool operator==(const DefinitionSet& other) const {
    return base_ == other.base_ && defs_ == other.defs_;
  }

 private:
  Signature base_;
  std::map<std::string, ExplicitDefinition> defs_;
};

// Adjoins the definition sentences: the result has the extended signature
// and the original axioms plus one universally closed biconditional per
// definition.
inline Theory apply_extension(const Theory& t, const DefinitionSet& delta) {
  if (!(delta.base() == t.signature()))
    throw TypeError("definition set base does not match the theory signature");
  std::vector<Formula> axioms = t.axioms();
  for (const auto& d : delta.definitions()) axioms.push_back(sentence_of(d));
  return Theory(t.name().empty() ? std::string() : t.name() + "+",
                delta.extended_signature(), axioms);
}

// Replaces every atom whose symbol delta defines by the instantiated
// definition body; the result mentions only base symbols wherever the input
// mentioned defined ones.
inline Formula unfold_definitions(const Formula& f, const DefinitionSet& delta) {
  return map_predicates(f, [&](const RelationSymbol& s, const std::vector<Variable>& args) {
    if (!delta.defines(s.name)) return pred(s, args);
    const ExplicitDefinition& d = delta.definition_of(s.name);
    if (d.defined().arity != s.arity)
      throw TypeError("definition arity mismatch for '" + s.name + "'");
    VarMap m;
    for (std::size_t i = 0; i < args.size(); ++i)
      m.emplace(Variable{static_cast<unsigned>(i + 1)}, args[i]);
    return substitute(d.body(), m);
  });
}

}  // namespace defeq

#endif  // DEFEQ_DEFINITIONS_HPP

#ifndef DEFEQ_TRANSLATION_HPP
#define DEFEQ_TRANSLATION_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "defeq/definitions.hpp"
#include "defeq/kernel.hpp"
#include "defeq/merge.hpp"
#include "defeq/renaming.hpp"
#include "defeq/semantics.hpp"

// Interpretations of one theory's language in another's: symbol-by-symbol
// images, the induced formula and model maps, intertranslatability, and the
// correspondence between translation pairs and mergers.

namespace defeq {

// Maps each source symbol p/n to a formula over the target signature with
// free variables among x1..xn; extends homomorphically to all formulas.
class Translation {
 public:
  Translation(Theory source, Theory target, const std::map<std::string, Formula>& images)
      : source_(std::move(source)), target_(std::move(target)) {
    for (const RelationSymbol& s : source_.signature().symbols()) {
      auto it = images.find(s.name);
      if (it == images.end())
        throw TypeError("translation misses source symbol '" + s.name + "'");
      const Formula& body = it->second;
      if (!well_formed(body, target_.signature()))
        throw TypeError("image of '" + s.name +
                        "' uses symbols outside the target signature");
      for (Variable v : free_variables(body))
        if (v.index < 1 || v.index > s.arity)
          throw TypeError("image of '" + s.name + "/" + std::to_string(s.arity) +
                          "' has free variable " + name_of(v) +
                          " outside x1..x" + std::to_string(s.arity));
      images_.emplace(s.name, canonical(body));
    }
    if (images.size() != images_.size())
      throw TypeError("translation mentions symbols outside the source signature");
  }

  const Theory& source() const { return source_; }
  const Theory& target() const { return target_; }

  const Formula& image_of(const std::string& name) const {
    auto it = images_.find(name);
    if (it == images_.end())
      throw TypeError("translation has no image for '" + name + "'");
    return it->second;
  }

  const std::map<std::string, Formula>& images() const { return images_; }

  bool operator==(const Translation& other) const {
    return source_ == other.source_ && target_ == other.target_ &&
           images_ == other.images_;
  }

 private:
  Theory source_;
  Theory target_;
  std::map<std::string, Formula> images_;
};

// Homomorphic extension: atoms are replaced by instantiated images, the
// connective and quantifier structure is untouched.
inline Formula apply_translation(const Translation& tr, const Formula& f) {
  if (!well_formed(f, tr.source().signature()))
    throw TypeError("formula uses symbols outside the translation's source");
  return map_predicates(f, [&](const RelationSymbol& s, const std::vector<Variable>& args) {
    const Formula& body = tr.image_of(s.name);
    VarMap m;
    for (std::size_t i = 0; i < args.size(); ++i)
      m.emplace(Variable{static_cast<unsigned>(i + 1)}, args[i]);
    return substitute(body, m);
  });
}

struct TranslationCheck {
  bool ok = true;
  unsigned bound = 0;
  std::optional<Formula> failing_axiom;     // source axiom whose image fails
  std::optional<FiniteModel> witness;       // target model rejecting it
};

// Does the target theory prove (up to the bound) the translation of every
// source axiom?
inline TranslationCheck check_translation(const Translation& tr, unsigned k) {
  if (k < 1) throw TypeError("bound must be at least 1");
  TranslationCheck out;
  out.bound = k;
  for (const Formula& ax : tr.source().axioms()) {
    Formula g = apply_translation(tr, ax);
    for (unsigned n = 1; n <= k && out.ok; ++n)
      for_each_structure(tr.target().signature(), n, [&](const FiniteModel& m) {
        if (!detail::models_unchecked(m, tr.target().axioms())) return true;
        std::vector<int> env(var_index_bound(g), -1);
        if (detail::eval(m, g, env)) return true;
        out.ok = false;
        out.failing_axiom = ax;
        out.witness = m;
        return false;
      });
    if (!out.ok) break;
  }
  return out;
}

// The induced map on structures, running against the translation's
// direction: a structure for the target signature yields one for the source
// signature, interpreting each source symbol by its image's defined
// relation. m must interpret exactly the target signature.
inline FiniteModel model_map(const Translation& tr, const FiniteModel& m) {
  if (!(m.signature() == tr.target().signature()))
    throw TypeError("model signature does not match the translation target");
  std::map<std::string, FiniteModel::Relation> interp;
  for (const RelationSymbol& s : tr.source().signature().symbols())
    interp[s.name] = defined_relation(m, tr.image_of(s.name),
                                      ExplicitDefinition::canonical_params(s.arity));
  return FiniteModel(m.size(), tr.source().signature(), std::move(interp));
}

struct IntertransResult {
  bool ok = true;
  unsigned bound = 0;
  std::string failure;                    // empty when ok
  std::optional<Formula> failing;         // axiom or round-trip biconditional
  std::optional<FiniteModel> witness;
};

namespace detail {

// First model of t (sizes 1..k) violating the sentence g, if any.
inline std::optional<FiniteModel> first_countermodel(const Theory& t, const Formula& g,
                                                     unsigned k) {
  std::optional<FiniteModel> out;
  for (unsigned n = 1; n <= k && !out; ++n)
    for_each_structure(t.signature(), n, [&](const FiniteModel& m) {
      if (!models_unchecked(m, t.axioms())) return true;
      std::vector<int> env(var_index_bound(g), -1);
      if (eval(m, g, env)) return true;
      out = m;
      return false;
    });
  return out;
}

}  // namespace detail

// tr12 and tr21 must connect the same two theories in opposite directions.
// Checks that both translations carry axioms to bounded theorems and that
// both round trips are provable on atoms (which extends to all formulas by
// the homomorphic construction): t1 proves p(x) <-> tr21(tr12(p(x))) for
// every p in t1's signature, universally closed, and symmetrically for t2.
inline IntertransResult check_intertranslatable(const Translation& tr12,
                                                const Translation& tr21, unsigned k) {
  if (!(tr12.source() == tr21.target()) || !(tr12.target() == tr21.source()))
    throw TypeError("the two translations do not connect the same theory pair");
  IntertransResult out;
  out.bound = k;
  if (TranslationCheck c = check_translation(tr12, k); !c.ok) {
    out.ok = false;
    out.failure = "an axiom's translation fails in the forward target theory";
    out.failing = c.failing_axiom;
    out.witness = c.witness;
    return out;
  }
  if (TranslationCheck c = check_translation(tr21, k); !c.ok) {
    out.ok = false;
    out.failure = "an axiom's translation fails in the backward target theory";
    out.failing = c.failing_axiom;
    out.witness = c.witness;
    return out;
  }
  auto round_trip = [&](const Theory& home, const Translation& out_tr,
                        const Translation& back_tr, const char* label) {
    for (const RelationSymbol& s : home.signature().symbols()) {
      auto params = ExplicitDefinition::canonical_params(s.arity);
      Formula atom = pred(s, params);
      Formula g = iff(atom, apply_translation(back_tr, apply_translation(out_tr, atom)));
      for (unsigned i = s.arity; i >= 1; --i) g = forall(Variable{i}, std::move(g));
      if (auto w = detail::first_countermodel(home, g, k)) {
        out.ok = false;
        out.failure = std::string("the ") + label +
                      " round trip is not provable on an atom";
        out.failing = g;
        out.witness = std::move(w);
        return false;
      }
    }
    return true;
  };
  if (!round_trip(tr12.source(), tr12, tr21, "forward")) return out;
  round_trip(tr21.source(), tr21, tr12, "backward");
  return out;
}

// Reads the two translations off a merger: a shared symbol translates to
// itself, a private one to its defining body in the other side's delta.
inline std::pair<Translation, Translation> merger_to_translations(
    const MergeCertificate& cert) {
  detail::check_exact_merge_typing(cert.left, cert.right, cert.delta_lr,
                                   cert.delta_rl);
  Signature shared =
      Signature::intersected(cert.left.signature(), cert.right.signature());
  auto build = [&](const Theory& from, const DefinitionSet& defs_of_from) {
    std::map<std::string, Formula> images;
    for (const RelationSymbol& s : from.signature().symbols()) {
      if (shared.contains(s))
        images.emplace(s.name, pred(s, ExplicitDefinition::canonical_params(s.arity)));
      else
        images.emplace(s.name, defs_of_from.definition_of(s.name).body());
    }
    return images;
  };
  return {Translation(cert.left, cert.right, build(cert.left, cert.delta_rl)),
          Translation(cert.right, cert.left, build(cert.right, cert.delta_lr))};
}

// Rebuilds the merger from a translation pair: each side's missing symbols
// are defined by the opposite translation's images. The certificate is
// verified at k.
inline MergeCertificate translations_to_merger(const Translation& tr12,
                                               const Translation& tr21, unsigned k) {
  if (!(tr12.source() == tr21.target()) || !(tr12.target() == tr21.source()))
    throw TypeError("the two translations do not connect the same theory pair");
  const Theory& t1 = tr12.source();
  const Theory& t2 = tr12.target();
  DefinitionSet d12(t1.signature());
  for (const RelationSymbol& s :
       Signature::subtracted(t2.signature(), t1.signature()).symbols())
    d12.add(ExplicitDefinition(s, ExplicitDefinition::canonical_params(s.arity),
                               tr21.image_of(s.name)));
  DefinitionSet d21(t2.signature());
  for (const RelationSymbol& s :
       Signature::subtracted(t1.signature(), t2.signature()).symbols())
    d21.add(ExplicitDefinition(s, ExplicitDefinition::canonical_params(s.arity),
                               tr12.image_of(s.name)));
  return verify_merge(t1, t2, d12, d21, k);
}

inline Translation compose_translations(const Translation& ab, const Translation& bc) {
  if (!(ab.target() == bc.source()))
    throw TypeError("translations do not chain");
  std::map<std::string, Formula> images;
  for (const auto& [name, body] : ab.images())
    images.emplace(name, apply_translation(bc, body));
  return Translation(ab.source(), bc.target(), images);
}

struct IntertranslationCertificate {
  Translation tr12;
  Translation tr21;
  IntertransResult check;
};

// Reads translations off the two-step normal form (merger against the fresh
// copy, then the renaming step), composes them through the middle, and
// checks the resulting pair.
inline IntertranslationCertificate defeq_to_intertranslation(
    const TwoStepEquivalence& eq, unsigned k) {
  auto [a12, a21] = merger_to_translations(eq.merger);
  auto [b12, b21] = merger_to_translations(eq.renaming_merger);
  Translation tr12 = compose_translations(a12, b12);
  Translation tr21 = compose_translations(b21, a21);
  IntertransResult check = check_intertranslatable(tr12, tr21, k);
  return {std::move(tr12), std::move(tr21), std::move(check)};
}

}  // namespace defeq

#endif  // DEFEQ_TRANSLATION_HPP

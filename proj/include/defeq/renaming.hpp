#ifndef DEFEQ_RENAMING_HPP
#define DEFEQ_RENAMING_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "defeq/definitions.hpp"
#include "defeq/kernel.hpp"
#include "defeq/merge.hpp"

// Disjoint renamings of signatures and what they do to theories and
// mergers: every renaming is a merger, mergers transport along renamings of
// either side, and a verified definitional-equivalence chain collapses into
// merger-then-renaming normal form.

namespace defeq {

// An arity-preserving bijection from a source signature onto a disjoint
// target signature.
class Renaming {
 public:
  Renaming(const Signature& source, const std::map<std::string, std::string>& mapping)
      : source_(source) {
    std::set<std::string> hit;
    for (const RelationSymbol& s : source.symbols()) {
      auto it = mapping.find(s.name);
      if (it == mapping.end())
        throw TypeError("renaming misses source symbol '" + s.name + "'");
      const std::string& to = it->second;
      if (source.contains(to))
        throw TypeError("renaming target '" + to + "' collides with the source signature");
      if (!hit.insert(to).second)
        throw TypeError("renaming maps two symbols to '" + to + "'");
      target_.add({to, s.arity});
      map_.emplace(s.name, to);
    }
    if (mapping.size() != map_.size())
      throw TypeError("renaming mentions symbols outside the source signature");
  }

  const Signature& source() const { return source_; }
  const Signature& target() const { return target_; }
  const std::map<std::string, std::string>& mapping() const { return map_; }

  std::string apply_name(const std::string& name) const {
    auto it = map_.find(name);
    if (it == map_.end())
      throw TypeError("renaming does not cover symbol '" + name + "'");
    return it->second;
  }

  RelationSymbol apply(const RelationSymbol& s) const {
    return {apply_name(s.name), s.arity};
  }

  Renaming inverse() const {
    std::map<std::string, std::string> inv;
    for (const auto& [from, to] : map_) inv.emplace(to, from);
    return Renaming(target_, inv);
  }

 private:
  Signature source_;
  Signature target_;
  std::map<std::string, std::string> map_;
};

// Renames every symbol of sig with the suffix _rN, taking the smallest N
// for which no target collides with sig or the avoided names.
inline Renaming fresh_renaming(const Signature& sig, const std::set<std::string>& avoid) {
  for (unsigned n = 1;; ++n) {
    std::string suffix = "_r" + std::to_string(n);
    bool clean = true;
    std::map<std::string, std::string> m;
    for (const RelationSymbol& s : sig.symbols()) {
      std::string to = s.name + suffix;
      if (sig.contains(to) || avoid.count(to)) {
        clean = false;
        break;
      }
      m.emplace(s.name, to);
    }
    if (clean) return Renaming(sig, m);
  }
}

inline Renaming fresh_renaming(const Signature& sig, const Signature& avoid) {
  std::set<std::string> names;
  for (const RelationSymbol& s : avoid.symbols()) names.insert(s.name);
  return fresh_renaming(sig, names);
}

// The formula must lie entirely inside the renaming's source language.
inline Formula apply_renaming(const Formula& f, const Renaming& r) {
  if (!well_formed(f, r.source()))
    throw TypeError("formula uses symbols outside the renaming's source");
  return map_predicates(f, [&](const RelationSymbol& s, const std::vector<Variable>& args) {
    return pred(r.apply(s), args);
  });
}

inline Theory apply_renaming(const Theory& t, const Renaming& r) {
  if (!(t.signature() == r.source()))
    throw TypeError("renaming source does not match the theory signature");
  std::vector<Formula> axioms;
  axioms.reserve(t.axioms().size());
  for (const Formula& ax : t.axioms()) axioms.push_back(apply_renaming(ax, r));
  return Theory(t.name().empty() ? std::string() : t.name() + "'",
                r.target(), std::move(axioms));
}

// Renames the body only: the defined symbol belongs to the opposite side's
// language and is untouched.
inline ExplicitDefinition apply_renaming(const ExplicitDefinition& d, const Renaming& r) {
  return ExplicitDefinition(d.defined(), d.params(), apply_renaming(d.body(), r));
}

// A theory merges with its own renaming: each target symbol is defined by
// its source atom and vice versa.
inline MergeCertificate renaming_to_merger(const Theory& t, const Renaming& r,
                                           unsigned k) {
  if (!(t.signature() == r.source()))
    throw TypeError("renaming source does not match the theory signature");
  DefinitionSet dlr(t.signature());
  DefinitionSet drl(r.target());
  for (const RelationSymbol& s : t.signature().symbols()) {
    auto params = ExplicitDefinition::canonical_params(s.arity);
    dlr.add(ExplicitDefinition(r.apply(s), params, pred(s, params)));
    drl.add(ExplicitDefinition(s, params, pred(r.apply(s), params)));
  }
  return verify_merge(t, apply_renaming(t, r), dlr, drl, k);
}

// Transports an exact merger certificate along a renaming rb of its right
// side (and optionally ra of its left side): shared symbols turn into
// identity definitions across the copies, private symbols keep their
// defining bodies with the appropriate renaming applied. The transported
// certificate is re-verified at k.
inline MergeCertificate transport_merger(const MergeCertificate& cert,
                                         const Renaming& rb,
                                         const std::optional<Renaming>& ra,
                                         unsigned k) {
  if (!cert.verified)
    throw TypeError("cannot transport an unverified merger");
  detail::check_exact_merge_typing(cert.left, cert.right, cert.delta_lr,
                                   cert.delta_rl);
  const Signature& sa = cert.left.signature();
  const Signature& sb = cert.right.signature();
  if (!(rb.source() == sb))
    throw TypeError("right renaming source does not match the right theory");
  if (!rb.target().disjoint_with(sa))
    throw TypeError("right renaming targets collide with the left theory");
  if (ra) {
    if (!(ra->source() == sa))
      throw TypeError("left renaming source does not match the left theory");
    if (!ra->target().disjoint_with(rb.target()))
      throw TypeError("the two renamings' targets collide");
  }
  Signature shared = Signature::intersected(sa, sb);
  Theory left = ra ? apply_renaming(cert.left, *ra) : cert.left;
  Theory right = apply_renaming(cert.right, rb);
  DefinitionSet dlr(left.signature());
  for (const RelationSymbol& s : sb.symbols()) {
    auto params = ExplicitDefinition::canonical_params(s.arity);
    if (shared.contains(s)) {
      RelationSymbol base = ra ? ra->apply(s) : s;
      dlr.add(ExplicitDefinition(rb.apply(s), params, pred(base, params)));
    } else {
      Formula body = cert.delta_lr.definition_of(s.name).body();
      if (ra) body = apply_renaming(body, *ra);
      dlr.add(ExplicitDefinition(rb.apply(s), params, std::move(body)));
    }
  }
  DefinitionSet drl(right.signature());
  for (const RelationSymbol& s : sa.symbols()) {
    auto params = ExplicitDefinition::canonical_params(s.arity);
    RelationSymbol defined = ra ? ra->apply(s) : s;
    if (shared.contains(s)) {
      drl.add(ExplicitDefinition(defined, params, pred(rb.apply(s), params)));
    } else {
      Formula body = apply_renaming(cert.delta_rl.definition_of(s.name).body(), rb);
      drl.add(ExplicitDefinition(defined, params, std::move(body)));
    }
  }
  return verify_merge(left, right, dlr, drl, k);
}

// Merger-then-renaming normal form of a definitional equivalence.
struct TwoStepEquivalence {
  MergeCertificate merger;           // t1 merged with a fresh copy of t2
  Renaming renaming;                 // t2's signature onto that fresh copy
  MergeCertificate renaming_merger;  // the fresh copy merged with t2 itself
};

// Collapses a verified chain between t1 and t2 into a single merger against
// a freshly renamed copy of t2, followed by the renaming step back to t2.
// Extend/Restrict step pairs through a common extension fold into one
// merger each; every chain theory after the first is renamed apart, the
// step mergers are transported onto the fresh copies, and the transported
// mergers compose left to right.
inline TwoStepEquivalence defeq_two_step(const Theory& t1, const Theory& t2,
                                         const DefEqCertificate& chain, unsigned k) {
  ChainVerdict v = verify_defeq_chain(chain);
  if (!v.ok)
    throw TypeError("chain fails at step " +
                    std::to_string(v.failing_step.value()) + ": " + v.reason);
  if (!(chain.theories.front() == t1) || !(chain.theories.back() == t2))
    throw TypeError("chain endpoints do not match the given theories");

  const std::vector<Theory>& th = chain.theories;
  std::set<std::string> avoid;
  for (const Theory& t : th)
    for (const RelationSymbol& s : t.signature().symbols()) avoid.insert(s.name);

  if (th.size() == 1) {
    Renaming r = fresh_renaming(t2.signature(), avoid);
    return {renaming_to_merger(t2, r, k), r,
            renaming_to_merger(apply_renaming(t2, r), r.inverse(), k)};
  }

  // Fold the chain into exact step mergers: (extend, restrict) through a
  // common extension becomes one two-sided merger, a lone step a one-sided
  // one.
  struct Piece {
    std::size_t li, ri;
    DefinitionSet dlr, drl;
  };
  std::vector<Piece> pieces;
  std::size_t i = 0;
  while (i < chain.steps.size()) {
    bool ext = chain.steps[i].direction == ChainStep::Direction::Extend;
    if (ext && i + 1 < chain.steps.size() &&
        chain.steps[i + 1].direction == ChainStep::Direction::Restrict &&
        th[i + 1].signature() ==
            Signature::united(th[i].signature(), th[i + 2].signature())) {
      pieces.push_back({i, i + 2, chain.steps[i].delta, chain.steps[i + 1].delta});
      i += 2;
    } else if (ext) {
      pieces.push_back({i, i + 1, chain.steps[i].delta,
                        DefinitionSet(th[i + 1].signature())});
      i += 1;
    } else {
      pieces.push_back({i, i + 1, DefinitionSet(th[i].signature()),
                        chain.steps[i].delta});
      i += 1;
    }
  }

  std::map<std::size_t, Renaming> ren;
  for (const Piece& p : pieces) {
    Renaming r = fresh_renaming(th[p.ri].signature(), avoid);
    for (const RelationSymbol& s : r.target().symbols()) avoid.insert(s.name);
    ren.emplace(p.ri, r);
  }

  std::vector<MergeCertificate> transported;
  for (const Piece& p : pieces) {
    MergeCertificate base;
    base.left = th[p.li];
    base.right = th[p.ri];
    base.delta_lr = p.dlr;
    base.delta_rl = p.drl;
    base.bound = chain.bound;
    base.verified = true;  // each piece is exactly what the chain verified
    std::optional<Renaming> ra;
    if (p.li != 0) ra = ren.at(p.li);
    transported.push_back(transport_merger(base, ren.at(p.ri), ra, k));
  }

  MergeCertificate acc = transported.front();
  for (std::size_t j = 1; j < transported.size(); ++j)
    acc = compose_disjoint_mergers(acc, transported[j], k);

  const Renaming& rn = ren.at(th.size() - 1);
  MergeCertificate back =
      renaming_to_merger(apply_renaming(t2, rn), rn.inverse(), k);
  return {std::move(acc), rn, std::move(back)};
}

}  // namespace defeq

#endif  // DEFEQ_RENAMING_HPP

#ifndef DEFEQ_MERGE_HPP
#define DEFEQ_MERGE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "defeq/definitions.hpp"
#include "defeq/kernel.hpp"
#include "defeq/semantics.hpp"

// Mergers (common definitional extensions), bounded incompatibility tests,
// definitional-equivalence chains, and composition of mergers across a
// shared middle theory.

namespace defeq {

// Certificate that left and right admit a common definitional extension:
// extending left by delta_lr and right by delta_rl yields theories with the
// same models up to the bound. verified records the oracle's verdict; on
// refutation, witness is a model of exactly one extension.
struct MergeCertificate {
  Theory left;
  Theory right;
  DefinitionSet delta_lr{Signature{}};
  DefinitionSet delta_rl{Signature{}};
  unsigned bound = 0;
  bool verified = false;
  std::optional<FiniteModel> witness;
  std::optional<bool> witness_models_left;

  bool operator==(const MergeCertificate& other) const {
    return left == other.left && right == other.right &&
           delta_lr == other.delta_lr && delta_rl == other.delta_rl &&
           bound == other.bound && verified == other.verified &&
           witness == other.witness &&
           witness_models_left == other.witness_models_left;
  }
};

namespace detail {

// Exact typing: each delta is over its own side's signature and defines
// precisely the symbols the other side adds.
inline void check_exact_merge_typing(const Theory& t1, const Theory& t2,
                                     const DefinitionSet& d12,
                                     const DefinitionSet& d21) {
  Signature::united(t1.signature(), t2.signature());  // surfaces arity clashes
  if (!(d12.base() == t1.signature()))
    throw TypeError("left delta must be over the left theory's signature");
  if (!(d21.base() == t2.signature()))
    throw TypeError("right delta must be over the right theory's signature");
  if (!(d12.defined_signature() ==
        Signature::subtracted(t2.signature(), t1.signature())))
    throw TypeError("left delta must define exactly the symbols unique to the right theory");
  if (!(d21.defined_signature() ==
        Signature::subtracted(t1.signature(), t2.signature())))
    throw TypeError("right delta must define exactly the symbols unique to the left theory");
}

inline MergeCertificate certify(const Theory& t1, const Theory& t2,
                                const DefinitionSet& d12, const DefinitionSet& d21,
                                unsigned k) {
  Theory e1 = apply_extension(t1, d12);
  Theory e2 = apply_extension(t2, d21);
  EquivalenceResult r = bounded_equivalent(e1, e2, k);
  return {t1,        t2,         d12, d21, k, r.equivalent, std::move(r.witness),
          r.witness_models_left};
}

}  // namespace detail

// Checks whether the given deltas witness a merger of t1 and t2 at bound k.
// Typing is exact: d12 defines the symbols of t2 missing from t1 over t1's
// signature, and vice versa.
inline MergeCertificate verify_merge(const Theory& t1, const Theory& t2,
                                     const DefinitionSet& d12,
                                     const DefinitionSet& d21, unsigned k) {
  detail::check_exact_merge_typing(t1, t2, d12, d21);
  return detail::certify(t1, t2, d12, d21, k);
}

// Recomputes the verdict of an existing certificate at bound k.
inline MergeCertificate reverify(const MergeCertificate& cert, unsigned k) {
  detail::check_exact_merge_typing(cert.left, cert.right, cert.delta_lr,
                                   cert.delta_rl);
  return detail::certify(cert.left, cert.right, cert.delta_lr, cert.delta_rl, k);
}

struct IncompatibilityReport {
  enum class Verdict { NotMergeableAtBound, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  unsigned bound = 0;
  std::uint64_t left_models = 0;
  std::uint64_t right_models = 0;
  std::uint64_t union_models = 0;
};

// Sound bounded refutation of mergeability: if both theories have models up
// to k but their union (over the united signature) has none, no common
// definitional extension can exist, at any bound. Anything else is
// inconclusive. Requires the signatures to be unitable (no arity clash).
inline IncompatibilityReport incompatibility_witness(const Theory& t1,
                                                     const Theory& t2, unsigned k) {
  if (k < 1) throw TypeError("bound must be at least 1");
  Signature u = Signature::united(t1.signature(), t2.signature());
  std::vector<Formula> axioms = t1.axioms();
  axioms.insert(axioms.end(), t2.axioms().begin(), t2.axioms().end());
  Theory both("", u, axioms);
  auto count = [k](const Theory& t) {
    std::uint64_t c = 0;
    for (unsigned n = 1; n <= k; ++n)
      for_each_structure(t.signature(), n, [&](const FiniteModel& m) {
        if (detail::models_unchecked(m, t.axioms())) ++c;
        return true;
      });
    return c;
  };
  IncompatibilityReport rep;
  rep.bound = k;
  rep.left_models = count(t1);
  rep.right_models = count(t2);
  rep.union_models = count(both);
  rep.verdict = rep.left_models > 0 && rep.right_models > 0 && rep.union_models == 0
                    ? IncompatibilityReport::Verdict::NotMergeableAtBound
                    : IncompatibilityReport::Verdict::Inconclusive;
  return rep;
}

struct ChainStep {
  enum class Direction { Extend, Restrict };
  Direction direction = Direction::Extend;
  DefinitionSet delta{Signature{}};

  bool operator==(const ChainStep& other) const {
    return direction == other.direction && delta == other.delta;
  }
};

// theories[0] -steps[0]- theories[1] -steps[1]- ... An Extend step asserts
// that the right theory is, up to bounded equivalence, the extension of the
// left by delta; a Restrict step is the mirror image.
struct DefEqCertificate {
  std::vector<Theory> theories;
  std::vector<ChainStep> steps;
  unsigned bound = 0;
};

struct ChainVerdict {
  bool ok = true;
  std::optional<std::size_t> failing_step;
  std::string reason;
  std::optional<FiniteModel> witness;
};

inline ChainVerdict verify_defeq_chain(const DefEqCertificate& c) {
  if (c.theories.empty() || c.steps.size() + 1 != c.theories.size())
    throw TypeError("chain must hold n theories and n-1 steps");
  if (c.bound < 1) throw TypeError("bound must be at least 1");
  ChainVerdict out;
  auto fail = [&](std::size_t i, std::string reason,
                  std::optional<FiniteModel> w = std::nullopt) {
    out.ok = false;
    out.failing_step = i;
    out.reason = std::move(reason);
    out.witness = std::move(w);
  };
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const ChainStep& s = c.steps[i];
    bool ext = s.direction == ChainStep::Direction::Extend;
    const Theory& small = ext ? c.theories[i] : c.theories[i + 1];
    const Theory& large = ext ? c.theories[i + 1] : c.theories[i];
    if (!(s.delta.base() == small.signature())) {
      fail(i, "delta base does not match the smaller theory's signature");
      return out;
    }
    if (!(s.delta.extended_signature() == large.signature())) {
      fail(i, "extension does not reach the larger theory's signature");
      return out;
    }
    EquivalenceResult r = bounded_equivalent(apply_extension(small, s.delta), large, c.bound);
    if (!r.equivalent) {
      fail(i, "extension differs from the adjacent theory at the bound",
           std::move(r.witness));
      return out;
    }
  }
  return out;
}

inline DefEqCertificate reverse_chain(const DefEqCertificate& c) {
  DefEqCertificate out;
  out.bound = c.bound;
  out.theories.assign(c.theories.rbegin(), c.theories.rend());
  for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it) {
    ChainStep s = *it;
    s.direction = s.direction == ChainStep::Direction::Extend
                      ? ChainStep::Direction::Restrict
                      : ChainStep::Direction::Extend;
    out.steps.push_back(std::move(s));
  }
  return out;
}

// Joins two chains at a common endpoint theory; the result carries the
// smaller of the two bounds.
inline DefEqCertificate concat_chains(const DefEqCertificate& a,
                                      const DefEqCertificate& b) {
  if (a.theories.empty() || b.theories.empty())
    throw TypeError("cannot concatenate an empty chain");
  if (!(a.theories.back() == b.theories.front()))
    throw TypeError("chains do not share an endpoint theory");
  DefEqCertificate out = a;
  out.bound = std::min(a.bound, b.bound);
  out.theories.insert(out.theories.end(), b.theories.begin() + 1, b.theories.end());
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

// Composes two verified mergers that share their middle theory, for three
// pairwise disjoint signatures. Each far-side definition is re-based by
// unfolding the middle symbols through the nearer delta; the middle symbols
// themselves drop out. Both outer extensions then describe the reduct of the
// common three-way extension to the outer signatures, so the result is an
// exact merger again, re-verified at k.
inline MergeCertificate compose_disjoint_mergers(const MergeCertificate& c12,
                                                 const MergeCertificate& c23,
                                                 unsigned k) {
  if (!c12.verified || !c23.verified)
    throw TypeError("compose requires verified mergers");
  if (!(c12.right == c23.left))
    throw TypeError("mergers do not share their middle theory");
  const Signature& s1 = c12.left.signature();
  const Signature& s2 = c12.right.signature();
  const Signature& s3 = c23.right.signature();
  if (!s1.disjoint_with(s2) || !s2.disjoint_with(s3) || !s1.disjoint_with(s3))
    throw TypeError("compose requires pairwise disjoint signatures");
  DefinitionSet dlr(s1);
  for (const ExplicitDefinition& d : c23.delta_lr.definitions())
    dlr.add(ExplicitDefinition(d.defined(), d.params(),
                               unfold_definitions(d.body(), c12.delta_lr)));
  DefinitionSet drl(s3);
  for (const ExplicitDefinition& d : c12.delta_rl.definitions())
    drl.add(ExplicitDefinition(d.defined(), d.params(),
                               unfold_definitions(d.body(), c23.delta_rl)));
  return verify_merge(c12.left, c23.right, dlr, drl, k);
}

}  // namespace defeq

#endif  // DEFEQ_MERGE_HPP

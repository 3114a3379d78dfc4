#ifndef DEFEQ_SEARCH_HPP
#define DEFEQ_SEARCH_HPP

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "defeq/kernel.hpp"
#include "defeq/merge.hpp"
#include "defeq/printer.hpp"

// Brute-force search for a merger: enumerate candidate defining bodies in a
// fixed canonical order and return the first delta pair the oracle verifies.

namespace defeq {

namespace detail {

// All formulas over sig of connective depth <= depth whose free variables
// lie in x1..x_navail. Quantifiers at nesting level j bind x_{navail+j}, so
// alpha-variants are not enumerated twice.
inline std::vector<Formula> gen_bodies(const Signature& sig, unsigned depth,
                                       unsigned navail) {
  std::vector<Formula> out;
  for (const RelationSymbol& s : sig.symbols()) {
    if (s.arity == 0) {
      out.push_back(pred(s, {}));
      continue;
    }
    if (navail == 0) continue;
    std::vector<unsigned> idx(s.arity, 1);
    for (;;) {
      std::vector<Variable> args;
      args.reserve(s.arity);
      for (unsigned i : idx) args.push_back(Variable{i});
      out.push_back(pred(s, std::move(args)));
      std::size_t i = idx.size();
      while (i-- > 0) {
        if (++idx[i] <= navail) break;
        idx[i] = 1;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }
  for (unsigned a = 1; a <= navail; ++a)
    for (unsigned b = 1; b <= navail; ++b) out.push_back(eq(Variable{a}, Variable{b}));
  if (depth == 0) return out;
  std::vector<Formula> smaller = gen_bodies(sig, depth - 1, navail);
  std::vector<Formula> deeper = gen_bodies(sig, depth - 1, navail + 1);
  out = smaller;
  for (const Formula& f : smaller) out.push_back(neg(f));
  for (const Formula& f : smaller)
    for (const Formula& g : smaller) out.push_back(conj(f, g));
  for (const Formula& f : deeper) out.push_back(exists(Variable{navail + 1}, f));
  return out;
}

}  // namespace detail

// Candidate defining bodies for a symbol of the given arity over sig, with
// parameters x1..x_arity: deduplicated up to alpha and sorted by node count,
// then by printed form. This is the canonical search order.
inline std::vector<Formula> enumerate_definable_bodies(const Signature& sig,
                                                       unsigned arity,
                                                       unsigned depth) {
  std::set<Formula> seen;
  for (const Formula& f : detail::gen_bodies(sig, depth, arity))
    seen.insert(canonical(f));
  std::vector<Formula> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(), [](const Formula& a, const Formula& b) {
    std::size_t na = a.node_count(), nb = b.node_count();
    if (na != nb) return na < nb;
    return print_formula(a) < print_formula(b);
  });
  return out;
}

// Tries delta pairs in canonical order (bodies ordered as above, symbols
// name-sorted with the left-to-right delta varying slowest) and returns the
// first certificate the oracle verifies, or nothing when depth is exhausted.
inline std::optional<MergeCertificate> search_merge(const Theory& t1, const Theory& t2,
                                                    unsigned depth, unsigned k) {
  Signature::united(t1.signature(), t2.signature());
  std::vector<RelationSymbol> need12 =
      Signature::subtracted(t2.signature(), t1.signature()).symbols();
  std::vector<RelationSymbol> need21 =
      Signature::subtracted(t1.signature(), t2.signature()).symbols();
  std::vector<std::vector<Formula>> cands;
  for (const RelationSymbol& s : need12)
    cands.push_back(enumerate_definable_bodies(t1.signature(), s.arity, depth));
  for (const RelationSymbol& s : need21)
    cands.push_back(enumerate_definable_bodies(t2.signature(), s.arity, depth));
  for (const auto& c : cands)
    if (c.empty()) return std::nullopt;
  std::vector<std::size_t> idx(cands.size(), 0);
  for (;;) {
    DefinitionSet d12(t1.signature());
    DefinitionSet d21(t2.signature());
    for (std::size_t i = 0; i < need12.size(); ++i)
      d12.add(ExplicitDefinition(need12[i],
                                 ExplicitDefinition::canonical_params(need12[i].arity),
                                 cands[i][idx[i]]));
    for (std::size_t i = 0; i < need21.size(); ++i) {
      std::size_t j = need12.size() + i;
      d21.add(ExplicitDefinition(need21[i],
                                 ExplicitDefinition::canonical_params(need21[i].arity),
                                 cands[j][idx[j]]));
    }
    MergeCertificate cert = verify_merge(t1, t2, d12, d21, k);
    if (cert.verified) return cert;
    std::size_t i = idx.size();
    while (i-- > 0) {
      if (++idx[i] < cands[i].size()) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return std::nullopt;
}

}  // namespace defeq

#endif  // DEFEQ_SEARCH_HPP

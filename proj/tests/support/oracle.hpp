#pragma once

// Deliberately independent re-implementation of satisfaction and model
// enumeration, used to cross-check the library. Written in a different
// style on purpose: map-based environments, mask counters per relation,
// first-coordinate-fastest cell decoding.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "defeq/kernel.hpp"
#include "defeq/semantics.hpp"

namespace oracle {

using defeq::FiniteModel;
using defeq::Formula;
using defeq::RelationSymbol;
using defeq::Signature;
using defeq::Theory;
using defeq::Variable;

inline bool eval(const Formula& f, const FiniteModel& m,
                 std::map<unsigned, unsigned>& env) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Predicate: {
      FiniteModel::Tuple t;
      for (const Variable& v : f.args()) t.push_back(env.at(v.index));
      return m.holds(f.rel().name, t);
    }
    case K::Equals:
      return env.at(f.eq_left().index) == env.at(f.eq_right().index);
    case K::Not:
      return !eval(f.body(), m, env);
    case K::And:
      return eval(f.left(), m, env) && eval(f.right(), m, env);
    case K::Exists: {
      unsigned idx = f.bound().index;
      std::optional<unsigned> saved;
      if (auto it = env.find(idx); it != env.end()) saved = it->second;
      bool found = false;
      for (unsigned d = 0; d < m.size() && !found; ++d) {
        env[idx] = d;
        found = eval(f.body(), m, env);
      }
      if (saved)
        env[idx] = *saved;
      else
        env.erase(idx);
      return found;
    }
  }
  return false;
}

inline bool sat(const FiniteModel& m, const Formula& sentence) {
  std::map<unsigned, unsigned> env;
  return eval(sentence, m, env);
}

inline bool sat_theory(const FiniteModel& m, const Theory& t) {
  for (const Formula& ax : t.axioms())
    if (!sat(m, ax)) return false;
  return true;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// All structures of the given size, in no particular order.
inline std::vector<FiniteModel> structures(const Signature& sig, unsigned n) {
  std::vector<RelationSymbol> syms = sig.symbols();
  std::vector<std::uint64_t> card, mask(syms.size(), 0);
  for (const RelationSymbol& s : syms) card.push_back(ipow(n, s.arity));
  std::vector<FiniteModel> out;
  while (true) {
    std::map<std::string, FiniteModel::Relation> interp;
    for (std::size_t i = 0; i < syms.size(); ++i) {
      FiniteModel::Relation rel;
      for (std::uint64_t cell = 0; cell < card[i]; ++cell) {
        if (!(mask[i] >> cell & 1)) continue;
        FiniteModel::Tuple t;
        std::uint64_t c = cell;
        for (unsigned j = 0; j < syms[i].arity; ++j) {
          t.push_back(static_cast<unsigned>(c % n));
          c /= n;
        }
        rel.insert(std::move(t));
      }
      interp.emplace(syms[i].name, std::move(rel));
    }
    out.emplace_back(n, sig, std::move(interp));
    std::size_t i = 0;
    for (; i < syms.size(); ++i) {
      if (++mask[i] < (std::uint64_t{1} << card[i])) break;
      mask[i] = 0;
    }
    if (i == syms.size()) break;
  }
  return out;
}

inline std::vector<FiniteModel> all_models(const Theory& t, unsigned kmax) {
  std::vector<FiniteModel> out;
  for (unsigned n = 1; n <= kmax; ++n)
    for (FiniteModel& m : structures(t.signature(), n))
      if (sat_theory(m, t)) out.push_back(std::move(m));
  return out;
}

inline std::set<FiniteModel> model_set(const Theory& t, unsigned kmax) {
  std::vector<FiniteModel> v = all_models(t, kmax);
  return {v.begin(), v.end()};
}

inline bool equivalent(const Theory& a, const Theory& b, unsigned kmax) {
  return model_set(a, kmax) == model_set(b, kmax);
}

inline bool entails(const Theory& t, const Formula& sentence, unsigned kmax) {
  for (const FiniteModel& m : all_models(t, kmax))
    if (!sat(m, sentence)) return false;
  return true;
}

}  // namespace oracle

#ifndef DEFEQ_MODELREL_HPP
#define DEFEQ_MODELREL_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "defeq/kernel.hpp"
#include "defeq/merge.hpp"
#include "defeq/semantics.hpp"
#include "defeq/translation.hpp"

// The model-theoretic side of merging and intertranslatability: instead of
// comparing extended theories syntactically, walk the bounded model classes
// and exhibit the induced bijection explicitly.

namespace defeq {

// An explicit bounded correspondence: forward lists (M, image(M)) for every
// M in the left class, backward the mirror image, both in canonical model
// order.
struct ModelCorrespondence {
  unsigned bound = 0;
  std::vector<std::pair<FiniteModel, FiniteModel>> forward;
  std::vector<std::pair<FiniteModel, FiniteModel>> backward;
};

struct ModelMergeResult {
  bool ok = false;
  unsigned bound = 0;
  std::string failure;                      // empty when ok
  std::optional<FiniteModel> counterexample;
  std::optional<ModelCorrespondence> witness;
};

// Delta typing as in verify_merge. Expands every bounded model of t1 by d12
// and forgets down to t2's signature (and vice versa); succeeds when both
// induced maps land in the opposite model class and are mutually inverse,
// i.e. the deltas induce a bounded bijection Mod_k(t1) <-> Mod_k(t2).
inline ModelMergeResult check_model_merge(const Theory& t1, const Theory& t2,
                                          const DefinitionSet& d12,
                                          const DefinitionSet& d21, unsigned k) {
  detail::check_exact_merge_typing(t1, t2, d12, d21);
  ModelMergeResult out;
  out.bound = k;
  BoundedModelClass mod1 = enumerate_models(t1.signature(), t1, k);
  BoundedModelClass mod2 = enumerate_models(t2.signature(), t2, k);
  std::set<FiniteModel> class2(mod2.models.begin(), mod2.models.end());
  std::set<FiniteModel> class1(mod1.models.begin(), mod1.models.end());
  ModelCorrespondence corr;
  corr.bound = k;
  std::map<FiniteModel, FiniteModel> fwd;
  for (const FiniteModel& m : mod1.models) {
    FiniteModel img = reduct(expand_by_definitions(m, d12), t2.signature());
    if (!class2.count(img)) {
      out.failure = "the image of a left model does not satisfy the right theory";
      out.counterexample = m;
      return out;
    }
    corr.forward.emplace_back(m, img);
    fwd.emplace(m, img);
  }
  std::map<FiniteModel, FiniteModel> bwd;
  for (const FiniteModel& m : mod2.models) {
    FiniteModel img = reduct(expand_by_definitions(m, d21), t1.signature());
    if (!class1.count(img)) {
      out.failure = "the image of a right model does not satisfy the left theory";
      out.counterexample = m;
      return out;
    }
    corr.backward.emplace_back(m, img);
    bwd.emplace(m, img);
  }
  for (const auto& [m, img] : fwd)
    if (!(bwd.at(img) == m)) {
      out.failure = "the two induced maps are not mutually inverse";
      out.counterexample = m;
      return out;
    }
  for (const auto& [m, img] : bwd)
    if (!(fwd.at(img) == m)) {
      out.failure = "the two induced maps are not mutually inverse";
      out.counterexample = m;
      return out;
    }
  out.ok = true;
  out.witness = std::move(corr);
  return out;
}

struct ModelIntertransResult {
  bool ok = false;
  unsigned bound = 0;
  std::string failure;
  std::optional<FiniteModel> counterexample;
  std::optional<ModelCorrespondence> witness;
};

// The model maps of the two translations run against their directions:
// model_map(tr21, -) carries Mod_k(t1) into Mod_k(t2) and model_map(tr12, -)
// the other way. Succeeds when both maps land correctly and are mutually
// inverse on the bounded classes.
inline ModelIntertransResult check_model_intertrans(const Translation& tr12,
                                                    const Translation& tr21,
                                                    unsigned k) {
  if (!(tr12.source() == tr21.target()) || !(tr12.target() == tr21.source()))
    throw TypeError("the two translations do not connect the same theory pair");
  ModelIntertransResult out;
  out.bound = k;
  const Theory& t1 = tr12.source();
  const Theory& t2 = tr12.target();
  BoundedModelClass mod1 = enumerate_models(t1.signature(), t1, k);
  BoundedModelClass mod2 = enumerate_models(t2.signature(), t2, k);
  std::set<FiniteModel> class1(mod1.models.begin(), mod1.models.end());
  std::set<FiniteModel> class2(mod2.models.begin(), mod2.models.end());
  ModelCorrespondence corr;
  corr.bound = k;
  for (const FiniteModel& m : mod1.models) {
    FiniteModel img = model_map(tr21, m);
    if (!class2.count(img)) {
      out.failure = "a left model's image does not satisfy the right theory";
      out.counterexample = m;
      return out;
    }
    if (!(model_map(tr12, img) == m)) {
      out.failure = "the round trip moves a left model";
      out.counterexample = m;
      return out;
    }
    corr.forward.emplace_back(m, img);
  }
  for (const FiniteModel& m : mod2.models) {
    FiniteModel img = model_map(tr12, m);
    if (!class1.count(img)) {
      out.failure = "a right model's image does not satisfy the left theory";
      out.counterexample = m;
      return out;
    }
    if (!(model_map(tr21, img) == m)) {
      out.failure = "the round trip moves a right model";
      out.counterexample = m;
      return out;
    }
    corr.backward.emplace_back(m, img);
  }
  out.ok = true;
  out.witness = std::move(corr);
  return out;
}

}  // namespace defeq

#endif  // DEFEQ_MODELREL_HPP

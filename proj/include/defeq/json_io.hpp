#ifndef DEFEQ_JSON_IO_HPP
#define DEFEQ_JSON_IO_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "defeq/kernel.hpp"
#include "defeq/merge.hpp"
#include "defeq/modelrel.hpp"
#include "defeq/parser.hpp"
#include "defeq/printer.hpp"
#include "defeq/renaming.hpp"
#include "defeq/semantics.hpp"
#include "defeq/translation.hpp"

// JSON certificates. Every certificate carries {kind, theories, deltas,
// bound, verified} plus kind-specific witness material; formulas travel as
// concrete-syntax strings.

namespace defeq {

using Json = nlohmann::ordered_json;

inline Json signature_to_json(const Signature& sig) {
  Json out = Json::array();
  for (const RelationSymbol& s : sig.symbols())
    out.push_back({{"name", s.name}, {"arity", s.arity}});
  return out;
}

inline Signature signature_from_json(const Json& j) {
  Signature out;
  for (const Json& s : j)
    out.add({s.at("name").get<std::string>(), s.at("arity").get<unsigned>()});
  return out;
}

inline Json theory_to_json(const Theory& t) {
  Json axioms = Json::array();
  for (const Formula& ax : t.axioms()) axioms.push_back(print_formula(ax));
  return {{"name", t.name()},
          {"signature", signature_to_json(t.signature())},
          {"axioms", std::move(axioms)}};
}

inline Theory theory_from_json(const Json& j) {
  Signature sig = signature_from_json(j.at("signature"));
  std::vector<Formula> axioms;
  for (const Json& ax : j.at("axioms"))
    axioms.push_back(parse_formula(ax.get<std::string>(), sig));
  return Theory(j.value("name", std::string()), std::move(sig), std::move(axioms));
}

inline Json definitions_to_json(const DefinitionSet& d) {
  Json defs = Json::array();
  for (const ExplicitDefinition& def : d.definitions())
    defs.push_back({{"name", def.defined().name},
                    {"arity", def.defined().arity},
                    {"body", print_formula(def.body())}});
  return {{"base", signature_to_json(d.base())}, {"definitions", std::move(defs)}};
}

inline DefinitionSet definitions_from_json(const Json& j) {
  Signature base = signature_from_json(j.at("base"));
  DefinitionSet out(base);
  for (const Json& def : j.at("definitions")) {
    RelationSymbol sym{def.at("name").get<std::string>(),
                       def.at("arity").get<unsigned>()};
    Formula body = parse_formula(def.at("body").get<std::string>(), base);
    out.add(ExplicitDefinition(sym, ExplicitDefinition::canonical_params(sym.arity),
                               std::move(body)));
  }
  return out;
}

inline Json model_to_json(const FiniteModel& m) {
  Json rels = Json::object();
  for (const RelationSymbol& s : m.signature().symbols()) {
    Json tuples = Json::array();
    for (const FiniteModel::Tuple& t : m.relation(s.name)) tuples.push_back(t);
    rels[s.name] = std::move(tuples);
  }
  return {{"size", m.size()},
          {"signature", signature_to_json(m.signature())},
          {"relations", std::move(rels)}};
}

inline FiniteModel model_from_json(const Json& j) {
  Signature sig = signature_from_json(j.at("signature"));
  std::map<std::string, FiniteModel::Relation> interp;
  for (const auto& [name, tuples] : j.at("relations").items()) {
    FiniteModel::Relation rel;
    for (const Json& t : tuples) rel.insert(t.get<FiniteModel::Tuple>());
    interp.emplace(name, std::move(rel));
  }
  return FiniteModel(j.at("size").get<unsigned>(), std::move(sig), std::move(interp));
}

inline Json merge_certificate_to_json(const MergeCertificate& c) {
  Json out{{"kind", "merge"},
           {"theories", Json::array({theory_to_json(c.left), theory_to_json(c.right)})},
           {"deltas",
            {{"left_to_right", definitions_to_json(c.delta_lr)},
             {"right_to_left", definitions_to_json(c.delta_rl)}}},
           {"bound", c.bound},
           {"verified", c.verified}};
  if (c.witness) {
    out["witness"] = model_to_json(*c.witness);
    out["witness_models_left"] = *c.witness_models_left;
  }
  return out;
}

inline MergeCertificate merge_certificate_from_json(const Json& j) {
  MergeCertificate c;
  c.left = theory_from_json(j.at("theories").at(0));
  c.right = theory_from_json(j.at("theories").at(1));
  c.delta_lr = definitions_from_json(j.at("deltas").at("left_to_right"));
  c.delta_rl = definitions_from_json(j.at("deltas").at("right_to_left"));
  c.bound = j.at("bound").get<unsigned>();
  c.verified = j.at("verified").get<bool>();
  if (j.contains("witness")) {
    c.witness = model_from_json(j.at("witness"));
    c.witness_models_left = j.at("witness_models_left").get<bool>();
  }
  return c;
}

inline Json chain_to_json(const DefEqCertificate& chain, const ChainVerdict& verdict) {
  Json theories = Json::array();
  for (const Theory& t : chain.theories) theories.push_back(theory_to_json(t));
  Json steps = Json::array();
  for (const ChainStep& s : chain.steps)
    steps.push_back(
        {{"direction",
          s.direction == ChainStep::Direction::Extend ? "extend" : "restrict"},
         {"delta", definitions_to_json(s.delta)}});
  Json out{{"kind", "defeq-chain"},
           {"theories", std::move(theories)},
           {"deltas", std::move(steps)},
           {"bound", chain.bound},
           {"verified", verdict.ok}};
  if (!verdict.ok) {
    out["failing_step"] = *verdict.failing_step;
    out["reason"] = verdict.reason;
    if (verdict.witness) out["witness"] = model_to_json(*verdict.witness);
  }
  return out;
}

inline DefEqCertificate chain_from_json(const Json& j) {
  DefEqCertificate chain;
  for (const Json& t : j.at("theories")) chain.theories.push_back(theory_from_json(t));
  for (const Json& s : j.at("deltas")) {
    std::string dir = s.at("direction").get<std::string>();
    if (dir != "extend" && dir != "restrict")
      throw TypeError("unknown chain step direction '" + dir + "'");
    chain.steps.push_back({dir == "extend" ? ChainStep::Direction::Extend
                                           : ChainStep::Direction::Restrict,
                           definitions_from_json(s.at("delta"))});
  }
  chain.bound = j.at("bound").get<unsigned>();
  return chain;
}

inline Json renaming_to_json(const Renaming& r) {
  Json map = Json::object();
  for (const auto& [from, to] : r.mapping()) map[from] = to;
  return {{"source", signature_to_json(r.source())}, {"map", std::move(map)}};
}

inline Renaming renaming_from_json(const Json& j) {
  std::map<std::string, std::string> m;
  for (const auto& [from, to] : j.at("map").items()) m.emplace(from, to.get<std::string>());
  return Renaming(signature_from_json(j.at("source")), m);
}

inline Json two_step_to_json(const TwoStepEquivalence& e, const Theory& t1,
                             const Theory& t2) {
  return {{"kind", "defeq-two-step"},
          {"theories", Json::array({theory_to_json(t1), theory_to_json(t2)})},
          {"deltas",
           {{"merger", merge_certificate_to_json(e.merger)},
            {"renaming", renaming_to_json(e.renaming)},
            {"renaming_merger", merge_certificate_to_json(e.renaming_merger)}}},
          {"bound", e.merger.bound},
          {"verified", e.merger.verified && e.renaming_merger.verified}};
}

inline Json translation_images_to_json(const Translation& tr) {
  Json out = Json::object();
  for (const auto& [name, body] : tr.images()) out[name] = print_formula(body);
  return out;
}

inline Json intertranslation_to_json(const Translation& tr12, const Translation& tr21,
                                     const IntertransResult& r) {
  Json out{{"kind", "intertranslation"},
           {"theories", Json::array({theory_to_json(tr12.source()),
                                     theory_to_json(tr12.target())})},
           {"deltas",
            {{"forward", translation_images_to_json(tr12)},
             {"backward", translation_images_to_json(tr21)}}},
           {"bound", r.bound},
           {"verified", r.ok}};
  if (!r.ok) {
    out["failure"] = r.failure;
    if (r.failing) out["failing"] = print_formula(*r.failing);
    if (r.witness) out["witness"] = model_to_json(*r.witness);
  }
  return out;
}

inline std::pair<Translation, Translation> intertranslation_from_json(const Json& j) {
  Theory t1 = theory_from_json(j.at("theories").at(0));
  Theory t2 = theory_from_json(j.at("theories").at(1));
  auto parse_images = [](const Json& imgs, const Signature& sig) {
    std::map<std::string, Formula> out;
    for (const auto& [name, body] : imgs.items())
      out.emplace(name, parse_formula(body.get<std::string>(), sig));
    return out;
  };
  return {Translation(t1, t2, parse_images(j.at("deltas").at("forward"), t2.signature())),
          Translation(t2, t1, parse_images(j.at("deltas").at("backward"), t1.signature()))};
}

inline Json correspondence_to_json(const ModelCorrespondence& c) {
  auto pairs = [](const std::vector<std::pair<FiniteModel, FiniteModel>>& v) {
    Json out = Json::array();
    for (const auto& [a, b] : v)
      out.push_back({{"model", model_to_json(a)}, {"image", model_to_json(b)}});
    return out;
  };
  return {{"forward", pairs(c.forward)}, {"backward", pairs(c.backward)}};
}

inline Json model_merge_to_json(const Theory& t1, const Theory& t2,
                                const DefinitionSet& d12, const DefinitionSet& d21,
                                const ModelMergeResult& r) {
  Json out{{"kind", "model-merge"},
           {"theories", Json::array({theory_to_json(t1), theory_to_json(t2)})},
           {"deltas",
            {{"left_to_right", definitions_to_json(d12)},
             {"right_to_left", definitions_to_json(d21)}}},
           {"bound", r.bound},
           {"verified", r.ok}};
  if (r.ok) {
    out["witness"] = correspondence_to_json(*r.witness);
  } else {
    out["failure"] = r.failure;
    if (r.counterexample) out["counterexample"] = model_to_json(*r.counterexample);
  }
  return out;
}

inline Json model_intertrans_to_json(const Translation& tr12, const Translation& tr21,
                                     const ModelIntertransResult& r) {
  Json out{{"kind", "model-intertrans"},
           {"theories", Json::array({theory_to_json(tr12.source()),
                                     theory_to_json(tr12.target())})},
           {"deltas",
            {{"forward", translation_images_to_json(tr12)},
             {"backward", translation_images_to_json(tr21)}}},
           {"bound", r.bound},
           {"verified", r.ok}};
  if (r.ok) {
    out["witness"] = correspondence_to_json(*r.witness);
  } else {
    out["failure"] = r.failure;
    if (r.counterexample) out["counterexample"] = model_to_json(*r.counterexample);
  }
  return out;
}

struct VerifyOutcome {
  std::string kind;
  bool stored = false;
  bool recomputed = false;
  bool matched = false;
};

// Recomputes a certificate's verdict from its own data (at its stored bound
// unless overridden) and compares with the stored flag.
inline VerifyOutcome verify_certificate_json(const Json& j,
                                             std::optional<unsigned> bound_override) {
  VerifyOutcome out;
  out.kind = j.at("kind").get<std::string>();
  out.stored = j.at("verified").get<bool>();
  unsigned bound = bound_override.value_or(j.at("bound").get<unsigned>());
  if (out.kind == "merge") {
    MergeCertificate c = merge_certificate_from_json(j);
    out.recomputed = reverify(c, bound).verified;
  } else if (out.kind == "defeq-chain") {
    DefEqCertificate chain = chain_from_json(j);
    chain.bound = bound;
    out.recomputed = verify_defeq_chain(chain).ok;
  } else if (out.kind == "defeq-two-step") {
    MergeCertificate m = merge_certificate_from_json(j.at("deltas").at("merger"));
    MergeCertificate rm =
        merge_certificate_from_json(j.at("deltas").at("renaming_merger"));
    Renaming r = renaming_from_json(j.at("deltas").at("renaming"));
    Theory t2 = theory_from_json(j.at("theories").at(1));
    bool linked = apply_renaming(t2, r) == rm.left && rm.right == t2 &&
                  m.right == rm.left;
    out.recomputed =
        linked && reverify(m, bound).verified && reverify(rm, bound).verified;
  } else if (out.kind == "intertranslation") {
    auto [tr12, tr21] = intertranslation_from_json(j);
    out.recomputed = check_intertranslatable(tr12, tr21, bound).ok;
  } else if (out.kind == "model-merge") {
    Theory t1 = theory_from_json(j.at("theories").at(0));
    Theory t2 = theory_from_json(j.at("theories").at(1));
    DefinitionSet d12 = definitions_from_json(j.at("deltas").at("left_to_right"));
    DefinitionSet d21 = definitions_from_json(j.at("deltas").at("right_to_left"));
    out.recomputed = check_model_merge(t1, t2, d12, d21, bound).ok;
  } else if (out.kind == "model-intertrans") {
    auto [tr12, tr21] = intertranslation_from_json(j);
    out.recomputed = check_model_intertrans(tr12, tr21, bound).ok;
  } else {
    throw TypeError("unknown certificate kind '" + out.kind + "'");
  }
  out.matched = out.stored == out.recomputed;
  return out;
}

}  // namespace defeq

#endif  // DEFEQ_JSON_IO_HPP

#ifndef DEFEQ_CLI_HPP
#define DEFEQ_CLI_HPP

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "defeq/json_io.hpp"
#include "defeq/kernel.hpp"
#include "defeq/merge.hpp"
#include "defeq/modelrel.hpp"
#include "defeq/renaming.hpp"
#include "defeq/search.hpp"
#include "defeq/text_io.hpp"
#include "defeq/translation.hpp"

// Subcommand bodies for the defeq tool. Exit codes: 0 the claim verified,
// 1 refuted at the bound, 2 inconclusive (search exhausted, nothing
// decided), 3 bad input.

namespace defeq {

inline constexpr int kExitVerified = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitInputError = 3;

struct RunConfig {
  unsigned bound = 3;
  bool bound_explicit = false;  // a flag or DEFEQ_BOUND picked the bound
  bool json = false;
  unsigned depth = 2;  // search depth for candidate bodies
};

namespace cli {

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

inline int cmd_parse(const std::string& theory_file, const RunConfig& cfg,
                     std::ostream& out) {
  Theory t = read_theory_file(theory_file);
  if (cfg.json)
    emit(out, theory_to_json(t));
  else
    out << write_theory(t);
  return kExitVerified;
}

inline int cmd_models(const std::string& theory_file, const RunConfig& cfg,
                      std::ostream& out) {
  Theory t = read_theory_file(theory_file);
  BoundedModelClass cls = enumerate_models(t.signature(), t, cfg.bound);
  if (cfg.json) {
    Json models = Json::array();
    for (const FiniteModel& m : cls.models) models.push_back(model_to_json(m));
    emit(out, Json{{"theory", theory_to_json(t)},
                   {"bound", cfg.bound},
                   {"count", cls.models.size()},
                   {"models", std::move(models)}});
  } else {
    out << cls.models.size() << " model(s) of '" << t.name() << "' up to size "
        << cfg.bound << "\n";
    for (const FiniteModel& m : cls.models) out << "\n" << write_model(m);
  }
  return kExitVerified;
}

inline void print_merge_text(std::ostream& out, const MergeCertificate& c) {
  out << "merger of '" << c.left.name() << "' and '" << c.right.name()
      << "' at bound " << c.bound << ": "
      << (c.verified ? "verified" : "refuted") << "\n";
  if (!c.delta_lr.empty()) out << "left delta:\n" << write_definitions(c.delta_lr);
  if (!c.delta_rl.empty()) out << "right delta:\n" << write_definitions(c.delta_rl);
  if (c.witness) {
    out << "witness (a model of the "
        << (*c.witness_models_left ? "left" : "right") << " extension only):\n"
        << write_model(*c.witness);
  }
}

inline int cmd_check_merge(const std::string& t1f, const std::string& t2f,
                           const std::string& d12f, const std::string& d21f,
                           const RunConfig& cfg, std::ostream& out) {
  Theory t1 = read_theory_file(t1f);
  Theory t2 = read_theory_file(t2f);
  DefinitionSet d12 = read_definitions_file(d12f, t1.signature());
  DefinitionSet d21 = read_definitions_file(d21f, t2.signature());
  MergeCertificate cert = verify_merge(t1, t2, d12, d21, cfg.bound);
  if (cfg.json)
    emit(out, merge_certificate_to_json(cert));
  else
    print_merge_text(out, cert);
  return cert.verified ? kExitVerified : kExitRefuted;
}

inline int cmd_search_merge(const std::string& t1f, const std::string& t2f,
                            const RunConfig& cfg, std::ostream& out) {
  Theory t1 = read_theory_file(t1f);
  Theory t2 = read_theory_file(t2f);
  std::optional<MergeCertificate> cert =
      search_merge(t1, t2, cfg.depth, cfg.bound);
  if (cert) {
    if (cfg.json)
      emit(out, merge_certificate_to_json(*cert));
    else
      print_merge_text(out, *cert);
    return kExitVerified;
  }
  IncompatibilityReport rep = incompatibility_witness(t1, t2, cfg.bound);
  bool refuted = rep.verdict == IncompatibilityReport::Verdict::NotMergeableAtBound;
  if (cfg.json) {
    emit(out, Json{{"kind", "search-merge"},
                   {"found", false},
                   {"depth", cfg.depth},
                   {"bound", cfg.bound},
                   {"incompatibility",
                    {{"verdict", refuted ? "not-mergeable-at-bound" : "inconclusive"},
                     {"left_models", rep.left_models},
                     {"right_models", rep.right_models},
                     {"union_models", rep.union_models}}}});
  } else {
    out << "no merger found up to depth " << cfg.depth << " at bound "
        << cfg.bound << "\n";
    if (refuted)
      out << "refuted: both theories have models up to size " << cfg.bound
          << " (" << rep.left_models << " and " << rep.right_models
          << ") but their union has none, so no merger exists at any depth\n";
    else
      out << "inconclusive (union has " << rep.union_models
          << " model(s) up to the bound)\n";
  }
  return refuted ? kExitRefuted : kExitInconclusive;
}

inline int cmd_check_defeq(const std::string& t1f, const std::string& t2f,
                           const std::optional<std::string>& chain_file,
                           const RunConfig& cfg, std::ostream& out) {
  Theory t1 = read_theory_file(t1f);
  Theory t2 = read_theory_file(t2f);
  if (chain_file) {
    DefEqCertificate chain = read_chain_file(*chain_file, cfg.bound);
    ChainVerdict verdict = verify_defeq_chain(chain);
    if (!verdict.ok) {
      if (cfg.json)
        emit(out, chain_to_json(chain, verdict));
      else
        out << "chain fails at step " << *verdict.failing_step << ": "
            << verdict.reason << "\n";
      return kExitRefuted;
    }
    if (!(chain.theories.front() == t1) || !(chain.theories.back() == t2)) {
      throw Error("chain endpoints do not match the given theories");
    }
    TwoStepEquivalence two = defeq_two_step(t1, t2, chain, cfg.bound);
    if (cfg.json)
      emit(out, two_step_to_json(two, t1, t2));
    else {
      out << "chain verified at bound " << cfg.bound << "; two-step form:\n";
      print_merge_text(out, two.merger);
      out << "renaming:\n" << write_renaming(two.renaming);
      print_merge_text(out, two.renaming_merger);
    }
    bool ok = two.merger.verified && two.renaming_merger.verified;
    return ok ? kExitVerified : kExitRefuted;
  }
  // No chain given: search for a merger against a fresh copy of t2.
  std::set<std::string> avoid;
  for (const RelationSymbol& s : t1.signature().symbols()) avoid.insert(s.name);
  for (const RelationSymbol& s : t2.signature().symbols()) avoid.insert(s.name);
  Renaming r = fresh_renaming(t2.signature(), avoid);
  Theory t2r = apply_renaming(t2, r);
  std::optional<MergeCertificate> found =
      search_merge(t1, t2r, cfg.depth, cfg.bound);
  if (!found) {
    if (cfg.json)
      emit(out, Json{{"kind", "defeq-search"},
                     {"found", false},
                     {"depth", cfg.depth},
                     {"bound", cfg.bound}});
    else
      out << "no definitional equivalence found up to depth " << cfg.depth
          << " at bound " << cfg.bound << " (inconclusive)\n";
    return kExitInconclusive;
  }
  TwoStepEquivalence two{*found, r,
                         renaming_to_merger(t2r, r.inverse(), cfg.bound)};
  if (cfg.json)
    emit(out, two_step_to_json(two, t1, t2));
  else {
    out << "definitionally equivalent at bound " << cfg.bound << ":\n";
    print_merge_text(out, two.merger);
    out << "renaming:\n" << write_renaming(two.renaming);
  }
  return kExitVerified;
}

inline int cmd_check_intertrans(const std::string& t1f, const std::string& t2f,
                                const std::string& tr12f, const std::string& tr21f,
                                bool model_level, const RunConfig& cfg,
                                std::ostream& out) {
  Theory t1 = read_theory_file(t1f);
  Theory t2 = read_theory_file(t2f);
  Translation tr12 = read_translation_file(tr12f, t1, t2);
  Translation tr21 = read_translation_file(tr21f, t2, t1);
  IntertransResult res = check_intertranslatable(tr12, tr21, cfg.bound);
  bool ok = res.ok;
  if (cfg.json) {
    Json j = intertranslation_to_json(tr12, tr21, res);
    if (model_level) {
      ModelIntertransResult mr = check_model_intertrans(tr12, tr21, cfg.bound);
      j["model_level"] = model_intertrans_to_json(tr12, tr21, mr);
      ok = ok && mr.ok;
    }
    emit(out, j);
  } else {
    out << "intertranslatable at bound " << cfg.bound << ": "
        << (res.ok ? "yes" : "no") << "\n";
    if (!res.ok) {
      out << res.failure << "\n";
      if (res.failing) out << "formula: " << print_formula(*res.failing) << "\n";
      if (res.witness) out << write_model(*res.witness);
    }
    if (model_level) {
      ModelIntertransResult mr = check_model_intertrans(tr12, tr21, cfg.bound);
      out << "model-level correspondence: " << (mr.ok ? "yes" : "no") << "\n";
      if (mr.ok)
        out << mr.witness->forward.size() << " model(s) on each side\n";
      else {
        out << mr.failure << "\n";
        if (mr.counterexample) out << write_model(*mr.counterexample);
      }
      ok = ok && mr.ok;
    }
  }
  return ok ? kExitVerified : kExitRefuted;
}

inline int cmd_check_model_merge(const std::string& t1f, const std::string& t2f,
                                 const std::string& d12f, const std::string& d21f,
                                 const RunConfig& cfg, std::ostream& out) {
  Theory t1 = read_theory_file(t1f);
  Theory t2 = read_theory_file(t2f);
  DefinitionSet d12 = read_definitions_file(d12f, t1.signature());
  DefinitionSet d21 = read_definitions_file(d21f, t2.signature());
  ModelMergeResult res = check_model_merge(t1, t2, d12, d21, cfg.bound);
  if (cfg.json) {
    emit(out, model_merge_to_json(t1, t2, d12, d21, res));
  } else {
    out << "model-level merger at bound " << cfg.bound << ": "
        << (res.ok ? "yes" : "no") << "\n";
    if (res.ok)
      out << res.witness->forward.size() << " model(s) on each side\n";
    else {
      out << res.failure << "\n";
      if (res.counterexample) out << write_model(*res.counterexample);
    }
  }
  return res.ok ? kExitVerified : kExitRefuted;
}

inline int cmd_rename(const std::string& t1f, const RunConfig& cfg,
                      std::ostream& out) {
  Theory t = read_theory_file(t1f);
  Renaming r = fresh_renaming(t.signature(), t.signature());
  MergeCertificate cert = renaming_to_merger(t, r, cfg.bound);
  if (cfg.json) {
    emit(out, Json{{"renaming", renaming_to_json(r)},
                   {"theory", theory_to_json(cert.right)},
                   {"certificate", merge_certificate_to_json(cert)}});
  } else {
    out << write_renaming(r) << "\n" << write_theory(cert.right) << "\n";
    print_merge_text(out, cert);
  }
  return cert.verified ? kExitVerified : kExitRefuted;
}

inline int cmd_compose(const std::string& c12f, const std::string& c23f,
                       const RunConfig& cfg, std::ostream& out) {
  auto load = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open certificate file '" + path + "'");
    Json j = Json::parse(in, nullptr, true, true);
    if (j.value("kind", "") != "merge")
      throw Error("'" + path + "' is not a merge certificate");
    return merge_certificate_from_json(j);
  };
  MergeCertificate composed =
      compose_disjoint_mergers(load(c12f), load(c23f), cfg.bound);
  if (cfg.json)
    emit(out, merge_certificate_to_json(composed));
  else
    print_merge_text(out, composed);
  return composed.verified ? kExitVerified : kExitRefuted;
}

inline int cmd_verify(const std::string& certf, const RunConfig& cfg,
                      std::ostream& out) {
  std::ifstream in(certf);
  if (!in) throw Error("cannot open certificate file '" + certf + "'");
  Json j = Json::parse(in, nullptr, true, true);
  std::optional<unsigned> override;
  if (cfg.bound_explicit) override = cfg.bound;
  VerifyOutcome o = verify_certificate_json(j, override);
  if (cfg.json)
    emit(out, Json{{"kind", o.kind},
                   {"stored", o.stored},
                   {"recomputed", o.recomputed},
                   {"matched", o.matched}});
  else
    out << o.kind << ": stored " << (o.stored ? "verified" : "refuted")
        << ", recomputed " << (o.recomputed ? "verified" : "refuted") << " -> "
        << (o.matched ? "match" : "MISMATCH") << "\n";
  return o.matched ? kExitVerified : kExitRefuted;
}

// The running counterexample: T1 and T2 contradict each other on a shared
// symbol yet both merge with T3, are definitionally equivalent, and are
// intertranslatable by complementing p.
inline int cmd_demo(const RunConfig& cfg, std::ostream& out) {
  unsigned k = cfg.bound_explicit ? cfg.bound : 2;
  Signature s1{{"p", 1}};
  Signature s3{{"q", 1}};
  Variable x{0};
  Formula one = exists_unique(x, eq(x, x));
  Theory t1("T1", s1, {one, forall(x, pred({"p", 1}, {x}))});
  Theory t2("T2", s1, {one, forall(x, neg(pred({"p", 1}, {x})))});
  Theory t3("T3", s3, {one, forall(x, pred({"q", 1}, {x}))});

  auto def = [](const char* name, Formula body) {
    return ExplicitDefinition({name, 1}, {Variable{1}}, std::move(body));
  };
  Formula p1 = pred({"p", 1}, {Variable{1}});
  Formula q1 = pred({"q", 1}, {Variable{1}});
  DefinitionSet d13(s1, {def("q", p1)});
  DefinitionSet d31(s3, {def("p", q1)});
  DefinitionSet d23(s1, {def("q", neg(p1))});
  DefinitionSet d32(s3, {def("p", neg(q1))});

  MergeCertificate m13 = verify_merge(t1, t3, d13, d31, k);
  MergeCertificate m23 = verify_merge(t2, t3, d23, d32, k);
  IncompatibilityReport inc = incompatibility_witness(t1, t2, k);
  bool not_mergeable =
      inc.verdict == IncompatibilityReport::Verdict::NotMergeableAtBound;

  DefEqCertificate chain;
  chain.bound = k;
  chain.theories = {t1, apply_extension(t1, d13).renamed("T1plus"), t3,
                    apply_extension(t3, d32).renamed("T3x"), t2};
  chain.steps = {{ChainStep::Direction::Extend, d13},
                 {ChainStep::Direction::Restrict, d31},
                 {ChainStep::Direction::Extend, d32},
                 {ChainStep::Direction::Restrict, d23}};
  ChainVerdict chain_ok = verify_defeq_chain(chain);

  TwoStepEquivalence two = defeq_two_step(t1, t2, chain, k);
  IntertranslationCertificate itc = defeq_to_intertranslation(two, k);

  std::map<std::string, Formula> flip{{"p", neg(p1)}};
  Translation tr12(t1, t2, flip);
  Translation tr21(t2, t1, flip);
  IntertransResult direct = check_intertranslatable(tr12, tr21, k);

  ModelMergeResult mm = check_model_merge(t1, t3, d13, d31, k);
  ModelIntertransResult mi = check_model_intertrans(tr12, tr21, k);

  bool all = m13.verified && m23.verified && not_mergeable && chain_ok.ok &&
             two.merger.verified && two.renaming_merger.verified &&
             itc.check.ok && direct.ok && mm.ok && mi.ok;

  if (cfg.json) {
    emit(out,
         Json{{"bound", k},
              {"merge_t1_t3", merge_certificate_to_json(m13)},
              {"merge_t2_t3", merge_certificate_to_json(m23)},
              {"t1_t2_incompatible",
               {{"verdict", not_mergeable ? "not-mergeable-at-bound" : "inconclusive"},
                {"left_models", inc.left_models},
                {"right_models", inc.right_models},
                {"union_models", inc.union_models}}},
              {"chain", chain_to_json(chain, chain_ok)},
              {"two_step", two_step_to_json(two, t1, t2)},
              {"intertranslation",
               intertranslation_to_json(itc.tr12, itc.tr21, itc.check)},
              {"direct_intertranslation",
               intertranslation_to_json(tr12, tr21, direct)},
              {"model_merge", model_merge_to_json(t1, t3, d13, d31, mm)},
              {"model_intertrans", model_intertrans_to_json(tr12, tr21, mi)},
              {"all_claims_hold", all}});
  } else {
    out << "bound " << k << "\n";
    out << "T1 = {E! x . x=x, A x . p(x)}  T2 = {E! x . x=x, A x . ~p(x)}  "
           "T3 = {E! x . x=x, A x . q(x)}\n\n";
    out << "T1 and T3 merge (q := p / p := q): "
        << (m13.verified ? "verified" : "refuted") << "\n";
    out << "T2 and T3 merge (q := ~p / p := ~q): "
        << (m23.verified ? "verified" : "refuted") << "\n";
    out << "T1 and T2 merge: "
        << (not_mergeable ? "impossible (their union has no models although both are satisfiable)"
                          : "inconclusive")
        << "\n";
    out << "T1 and T2 definitionally equivalent via a chain through T3: "
        << (chain_ok.ok ? "verified" : "refuted") << "\n";
    out << "two-step form (merger + renaming): "
        << (two.merger.verified && two.renaming_merger.verified ? "verified"
                                                                : "refuted")
        << "\n";
    out << "intertranslation induced by the chain: "
        << (itc.check.ok ? "verified" : "refuted") << "\n";
    out << "direct intertranslation p |-> ~p both ways: "
        << (direct.ok ? "verified" : "refuted") << "\n";
    out << "model-level merger T1/T3: " << (mm.ok ? "verified" : "refuted") << "\n";
    out << "model-level intertranslation T1/T2: " << (mi.ok ? "verified" : "refuted")
        << "\n";
    out << (all ? "\nall claims hold\n" : "\nSOME CLAIM FAILED\n");
  }
  return all ? kExitVerified : kExitRefuted;
}

}  // namespace cli
}  // namespace defeq

#endif  // DEFEQ_CLI_HPP

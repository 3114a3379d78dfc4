#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "defeq/json_io.hpp"
#include "defeq/text_io.hpp"

using namespace defeq;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {

const std::string data_dir = DEFEQ_TEST_DATA_DIR;

Theory read_theory_text(const std::string& text, const std::string& name = "") {
  std::istringstream in(text);
  return read_theory(in, name);
}

DefinitionSet read_defs_text(const std::string& text, const Signature& base) {
  std::istringstream in(text);
  return read_definitions(in, base);
}

// Scratch directory for manifests that have to live on disk.
std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "defeq-io-scratch";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string put_file(const std::filesystem::path& dir, const std::string& name,
                     const std::string& content) {
  std::ofstream out(dir / name);
  out << content;
  return (dir / name).string();
}

}  // namespace

TEST_CASE("theory files round-trip through text", "[io]") {
  Theory t = read_theory_text(
      "# a two-symbol toy\n"
      "theory demo\n"
      "rel p 1\n"
      "rel q 2   # arity two\n"
      "\n"
      "axiom A x . p(x)\n"
      "axiom E x . E y . q(x, y)\n");
  REQUIRE(t.name() == "demo");
  REQUIRE(t.signature() == Signature{{"p", 1}, {"q", 2}});
  REQUIRE(t.axioms().size() == 2);

  std::string text = write_theory(t);
  REQUIRE(text ==
          "theory demo\n"
          "rel p 1\n"
          "rel q 2\n"
          "axiom A x0 . p(x0)\n"
          "axiom E x0 . E x1 . q(x0,x1)\n");
  REQUIRE(read_theory_text(text) == t);

  SECTION("nullary symbols survive") {
    Theory n = read_theory_text("rel c 0\naxiom c()\n", "propositional");
    REQUIRE(n.name() == "propositional");
    REQUIRE(read_theory_text(write_theory(n)) == n);
  }
  SECTION("a file's stem names an anonymous theory") {
    Theory file = read_theory_file(data_dir + "/t1.thy");
    REQUIRE(file.name() == "T1");  // explicit header wins over the stem
    REQUIRE(file.signature() == Signature{{"p", 1}});
    REQUIRE(file.axioms().size() == 2);
  }
}

TEST_CASE("theory reader rejects malformed input", "[io]") {
  REQUIRE_THROWS_MATCHES(read_theory_text("sig p 1\n"), ParseError,
                         MessageMatches(ContainsSubstring("unknown directive 'sig'")));
  REQUIRE_THROWS_MATCHES(read_theory_text("theory 1bad\n"), ParseError,
                         MessageMatches(ContainsSubstring("invalid theory name")));
  REQUIRE_THROWS_MATCHES(read_theory_text("rel p x\n"), ParseError,
                         MessageMatches(ContainsSubstring("invalid arity 'x'")));
  REQUIRE_THROWS_MATCHES(read_theory_text("rel p 40\n"), ParseError,
                         MessageMatches(ContainsSubstring("invalid arity")));
  REQUIRE_THROWS_MATCHES(read_theory_text("rel p\n"), ParseError,
                         MessageMatches(ContainsSubstring("expected 'rel NAME ARITY'")));
  // declarations must precede use
  REQUIRE_THROWS_MATCHES(read_theory_text("axiom p(x)\nrel p 1\n"), ParseError,
                         MessageMatches(ContainsSubstring("unknown relation symbol 'p'")));
  REQUIRE_THROWS_MATCHES(read_theory_text("rel p 1\naxiom p(x1)\n"), ParseError,
                         MessageMatches(ContainsSubstring("axiom has free variables")));
  REQUIRE_THROWS_MATCHES(read_theory_text("rel p 1\nrel p 2\n"), ParseError,
                         MessageMatches(ContainsSubstring("arity")));
  REQUIRE_THROWS_AS(read_theory_file(data_dir + "/no-such-file.thy"), Error);
}

TEST_CASE("definition files round-trip through text", "[io]") {
  Signature base{{"p", 1}, {"q", 2}};
  DefinitionSet d = read_defs_text(
      "define r/1 := ~p(x1)\n"
      "define s/0 := E x . q(x, x)\n",
      base);
  REQUIRE(d.defined_signature() == Signature{{"r", 1}, {"s", 0}});

  std::string text = write_definitions(d);
  REQUIRE(text ==
          "define r/1 := ~p(x1)\n"
          "define s/0 := E x0 . q(x0,x0)\n");
  REQUIRE(read_defs_text(text, base) == d);

  SECTION("malformed definitions are rejected with positions") {
    REQUIRE_THROWS_MATCHES(read_defs_text("def r/1 := p(x1)\n", base), ParseError,
                           MessageMatches(ContainsSubstring("expected 'define")));
    REQUIRE_THROWS_MATCHES(read_defs_text("define r/1 = p(x1)\n", base), ParseError,
                           MessageMatches(ContainsSubstring("missing ':='")));
    REQUIRE_THROWS_MATCHES(read_defs_text("define r := p(x1)\n", base), ParseError,
                           MessageMatches(ContainsSubstring("expected NAME/ARITY")));
    REQUIRE_THROWS_MATCHES(read_defs_text("define r/one := p(x1)\n", base), ParseError,
                           MessageMatches(ContainsSubstring("invalid arity 'one'")));
    // body errors and set errors surface as parse errors on the right line
    REQUIRE_THROWS_MATCHES(read_defs_text("define r/1 := t(x1)\n", base), ParseError,
                           MessageMatches(ContainsSubstring("unknown relation symbol 't'")));
    REQUIRE_THROWS_MATCHES(read_defs_text("define r/1 := p(x2)\n", base), ParseError,
                           MessageMatches(ContainsSubstring("x2")));
    REQUIRE_THROWS_MATCHES(
        read_defs_text("define r/1 := p(x1)\ndefine r/1 := ~p(x1)\n", base), ParseError,
        MessageMatches(ContainsSubstring("defined twice")));
    try {
      read_defs_text("define r/1 := p(x1)\ndefine r/1 := ~p(x1)\n", base);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      REQUIRE(e.line == 2);
    }
  }
}

TEST_CASE("translation files round-trip through text", "[io]") {
  Theory src = read_theory_file(data_dir + "/t1.thy");
  Theory dst = read_theory_file(data_dir + "/t3.thy");
  std::istringstream in("translate p/1 => ~q(x1)\n");
  Translation tr = read_translation(in, src, dst);
  REQUIRE(tr.image_of("p") == parse_formula("~q(x1)", dst.signature()));

  std::string text = write_translation(tr);
  REQUIRE(text == "translate p/1 => ~q(x1)\n");
  std::istringstream again(text);
  REQUIRE(read_translation(again, src, dst) == tr);

  SECTION("rejections") {
    auto reject = [&](const std::string& body, const char* what) {
      std::istringstream bad(body);
      REQUIRE_THROWS_MATCHES(read_translation(bad, src, dst), ParseError,
                             MessageMatches(ContainsSubstring(what)));
    };
    reject("map p/1 => q(x1)\n", "expected 'translate");
    reject("translate p/1 -> q(x1)\n", "missing '=>'");
    reject("translate r/1 => q(x1)\n", "'r/1' is not a source symbol");
    reject("translate p/1 => q(x1)\ntranslate p/1 => ~q(x1)\n", "translated twice");
    // a structurally valid file can still fail to cover the source signature
    std::istringstream empty("");
    REQUIRE_THROWS_MATCHES(read_translation(empty, src, dst), Error,
                           MessageMatches(ContainsSubstring("invalid translation")));
  }
}

TEST_CASE("renaming files round-trip through text", "[io]") {
  Signature source{{"p", 1}, {"q", 2}};
  std::istringstream in("rename p -> a\nrename q -> b\n");
  Renaming r = read_renaming(in, source);
  REQUIRE(r.mapping().at("p") == "a");
  REQUIRE(r.mapping().at("q") == "b");

  std::string text = write_renaming(r);
  REQUIRE(text == "rename p -> a\nrename q -> b\n");
  std::istringstream again(text);
  Renaming r2 = read_renaming(again, source);
  REQUIRE(r2.mapping() == r.mapping());
  REQUIRE(r2.source() == r.source());

  SECTION("rejections") {
    auto reject = [&](const std::string& body, const char* what) {
      std::istringstream bad(body);
      REQUIRE_THROWS_MATCHES(read_renaming(bad, source), ParseError,
                             MessageMatches(ContainsSubstring(what)));
    };
    reject("alias p -> a\nrename q -> b\n", "expected 'rename");
    reject("rename p => a\n", "missing '->'");
    reject("rename p -> 3x\n", "invalid renaming");
    reject("rename p -> a\nrename p -> b\n", "renamed twice");
    // constraint violations come from the renaming itself, not the parser
    std::istringstream collide("rename p -> a\nrename q -> a\n");
    REQUIRE_THROWS_MATCHES(read_renaming(collide, source), Error,
                           MessageMatches(ContainsSubstring("maps two symbols to 'a'")));
    std::istringstream partial("rename p -> a\n");
    REQUIRE_THROWS_MATCHES(read_renaming(partial, source), Error,
                           MessageMatches(ContainsSubstring("misses source symbol 'q'")));
  }
}

TEST_CASE("model files round-trip through text", "[io]") {
  Signature sig{{"p", 1}, {"q", 2}};
  std::istringstream in(
      "model 3\n"
      "p: (0); (2)\n"
      "q: (0, 1)\n");
  FiniteModel m = read_model(in, sig);
  REQUIRE(m.size() == 3);
  REQUIRE(m.relation("p") == FiniteModel::Relation{{0}, {2}});
  REQUIRE(m.relation("q") == FiniteModel::Relation{{0, 1}});

  std::string text = write_model(m);
  REQUIRE(text ==
          "model 3\n"
          "p: (0); (2)\n"
          "q: (0,1)\n");
  std::istringstream again(text);
  REQUIRE(read_model(again, sig) == m);

  SECTION("relations may be omitted and default to empty") {
    std::istringstream sparse("model 2\n");
    REQUIRE(read_model(sparse, sig).relation("q").empty());
  }
  SECTION("nullary relations hold the empty tuple or nothing") {
    Signature prop{{"c", 0}};
    std::istringstream on("model 1\nc: ()\n");
    REQUIRE(read_model(on, prop).relation("c") == FiniteModel::Relation{{}});
    std::istringstream off("model 1\n");
    REQUIRE(read_model(off, prop).relation("c").empty());
  }
  SECTION("rejections") {
    auto reject = [&](const std::string& body, const char* what) {
      std::istringstream bad(body);
      REQUIRE_THROWS_MATCHES(read_model(bad, sig), ParseError,
                             MessageMatches(ContainsSubstring(what)));
    };
    reject("p: (0)\n", "must start with 'model SIZE'");
    reject("model 0\n", "invalid model size");
    reject("model two\n", "invalid model size");
    reject("model 2\nr: (0)\n", "unknown relation symbol 'r'");
    reject("model 2\np: (0)\np: (1)\n", "listed twice");
    reject("model 2\np: (5)\n", "out of range");
    reject("model 2\np: (0, 1)\n", "wrong arity");
    reject("model 2\np: (0\n", "unterminated tuple");
    reject("model 2\np: (0) (1)\n", "expected ';'");
    reject("model 2\np: (x)\n", "expected a number");
    std::istringstream empty("# nothing here\n");
    REQUIRE_THROWS_MATCHES(read_model(empty, sig), Error,
                           MessageMatches(ContainsSubstring("model file is empty")));
  }
}

TEST_CASE("chain manifests resolve files relative to their directory", "[io]") {
  DefEqCertificate chain = read_chain_file(data_dir + "/chain.chn", 2);
  REQUIRE(chain.theories.size() == 5);
  REQUIRE(chain.steps.size() == 4);
  REQUIRE(chain.bound == 2);
  REQUIRE(chain.theories.front().name() == "T1");
  REQUIRE(chain.theories.back().name() == "T2");
  REQUIRE(chain.steps[0].direction == ChainStep::Direction::Extend);
  REQUIRE(chain.steps[1].direction == ChainStep::Direction::Restrict);
  REQUIRE(chain.steps[2].direction == ChainStep::Direction::Extend);
  REQUIRE(chain.steps[3].direction == ChainStep::Direction::Restrict);
  // extend deltas sit over the earlier theory, restrict deltas over the later
  REQUIRE(chain.steps[0].delta.base() == chain.theories[0].signature());
  REQUIRE(chain.steps[1].delta.base() == chain.theories[2].signature());
  REQUIRE(verify_defeq_chain(chain).ok);
}

TEST_CASE("chain manifest structure is validated", "[io]") {
  auto dir = scratch_dir();
  put_file(dir, "a.thy", "theory A\nrel p 1\naxiom A x . p(x)\n");

  std::string dangling = put_file(dir, "dangling.chn", "theory a.thy\nextend d.def\n");
  REQUIRE_THROWS_MATCHES(read_chain_file(dangling, 2), Error,
                         MessageMatches(ContainsSubstring("dangling step")));

  std::string empty = put_file(dir, "empty.chn", "# only comments\n");
  REQUIRE_THROWS_MATCHES(read_chain_file(empty, 2), Error,
                         MessageMatches(ContainsSubstring("lists no theories")));

  std::string step_first = put_file(dir, "stepfirst.chn", "extend d.def\n");
  REQUIRE_THROWS_MATCHES(
      read_chain_file(step_first, 2), ParseError,
      MessageMatches(ContainsSubstring("cannot precede the first theory")));

  std::string two_steps =
      put_file(dir, "twosteps.chn", "theory a.thy\nextend d.def\nrestrict d.def\n");
  REQUIRE_THROWS_MATCHES(
      read_chain_file(two_steps, 2), ParseError,
      MessageMatches(ContainsSubstring("two steps without a theory")));

  std::string two_theories =
      put_file(dir, "twotheories.chn", "theory a.thy\ntheory a.thy\n");
  REQUIRE_THROWS_MATCHES(
      read_chain_file(two_theories, 2), ParseError,
      MessageMatches(ContainsSubstring("two theories without a step")));

  std::string unknown = put_file(dir, "unknown.chn", "merge a.thy\n");
  REQUIRE_THROWS_MATCHES(read_chain_file(unknown, 2), ParseError,
                         MessageMatches(ContainsSubstring("unknown chain directive")));

  std::string missing = put_file(dir, "missing.chn", "theory nope.thy\n");
  REQUIRE_THROWS_MATCHES(read_chain_file(missing, 2), Error,
                         MessageMatches(ContainsSubstring("cannot open theory file")));
}

TEST_CASE("certificates survive the json round trip", "[io]") {
  Theory t1 = read_theory_file(data_dir + "/t1.thy");
  Theory t3 = read_theory_file(data_dir + "/t3.thy");
  DefinitionSet d13 = read_definitions_file(data_dir + "/d13.def", t1.signature());
  DefinitionSet d31 = read_definitions_file(data_dir + "/d31.def", t3.signature());

  SECTION("theories, definitions, models, renamings") {
    REQUIRE(theory_from_json(theory_to_json(t1)) == t1);
    REQUIRE(theory_from_json(theory_to_json(t1)).name() == "T1");
    REQUIRE(definitions_from_json(definitions_to_json(d13)) == d13);

    FiniteModel m(3, Signature{{"p", 1}, {"q", 2}},
                  {{"p", {{0}, {2}}}, {"q", {{0, 1}}}});
    REQUIRE(model_from_json(model_to_json(m)) == m);

    Renaming rn(t1.signature(), {{"p", "p_r1"}});
    Renaming back = renaming_from_json(renaming_to_json(rn));
    REQUIRE(back.mapping() == rn.mapping());
    REQUIRE(back.source() == rn.source());
  }

  SECTION("verified merge certificates") {
    MergeCertificate c = verify_merge(t1, t3, d13, d31, 2);
    REQUIRE(c.verified);
    Json j = merge_certificate_to_json(c);
    REQUIRE(j.at("kind") == "merge");
    REQUIRE(j.at("verified") == true);
    REQUIRE_FALSE(j.contains("witness"));
    REQUIRE(merge_certificate_from_json(j) == c);
  }

  SECTION("refuted merge certificates keep their witness") {
    DefinitionSet bad = read_definitions_file(data_dir + "/d13bad.def", t1.signature());
    MergeCertificate c = verify_merge(t1, t3, bad, d31, 2);
    REQUIRE_FALSE(c.verified);
    REQUIRE(c.witness.has_value());
    Json j = merge_certificate_to_json(c);
    REQUIRE(j.contains("witness"));
    REQUIRE(j.contains("witness_models_left"));
    REQUIRE(merge_certificate_from_json(j) == c);
  }

  SECTION("chains with verdicts") {
    DefEqCertificate chain = read_chain_file(data_dir + "/chain.chn", 2);
    ChainVerdict verdict = verify_defeq_chain(chain);
    Json j = chain_to_json(chain, verdict);
    REQUIRE(j.at("kind") == "defeq-chain");
    REQUIRE(j.at("verified") == true);
    REQUIRE_FALSE(j.contains("failing_step"));

    DefEqCertificate back = chain_from_json(j);
    REQUIRE(back.theories == chain.theories);
    REQUIRE(back.bound == 2);
    REQUIRE(back.steps.size() == chain.steps.size());
    for (std::size_t i = 0; i < back.steps.size(); ++i)
      REQUIRE(back.steps[i] == chain.steps[i]);

    // a broken chain serializes its diagnosis
    DefEqCertificate broken = chain;
    DefinitionSet wrong(t1.signature());
    wrong.add(ExplicitDefinition({"q", 1}, {Variable{1}},
                                 parse_formula("~p(x1)", t1.signature())));
    broken.steps[0].delta = wrong;
    ChainVerdict bad = verify_defeq_chain(broken);
    REQUIRE_FALSE(bad.ok);
    Json jb = chain_to_json(broken, bad);
    REQUIRE(jb.at("verified") == false);
    REQUIRE(jb.at("failing_step") == 0);
    REQUIRE(jb.at("reason") ==
            "extension differs from the adjacent theory at the bound");
    REQUIRE(jb.contains("witness"));
  }

  SECTION("two-step certificates") {
    DefEqCertificate chain = read_chain_file(data_dir + "/chain.chn", 2);
    TwoStepEquivalence e =
        defeq_two_step(chain.theories.front(), chain.theories.back(), chain, 2);
    Json j = two_step_to_json(e, chain.theories.front(), chain.theories.back());
    REQUIRE(j.at("kind") == "defeq-two-step");
    REQUIRE(j.at("verified") == true);
    REQUIRE(j.at("deltas").contains("merger"));
    REQUIRE(j.at("deltas").contains("renaming"));
    REQUIRE(j.at("deltas").contains("renaming_merger"));
  }

  SECTION("intertranslations") {
    Translation fwd(t1, t3, {{"p", parse_formula("q(x1)", t3.signature())}});
    Translation bwd(t3, t1, {{"q", parse_formula("p(x1)", t1.signature())}});
    IntertransResult r = check_intertranslatable(fwd, bwd, 2);
    REQUIRE(r.ok);
    Json j = intertranslation_to_json(fwd, bwd, r);
    REQUIRE(j.at("kind") == "intertranslation");
    REQUIRE(j.at("verified") == true);
    auto [f2, b2] = intertranslation_from_json(j);
    REQUIRE(f2 == fwd);
    REQUIRE(b2 == bwd);
  }

  SECTION("unparseable step directions are rejected") {
    Json j{{"theories", Json::array()},
           {"deltas",
            Json::array({{{"direction", "sideways"},
                          {"delta", definitions_to_json(d13)}}})},
           {"bound", 2}};
    REQUIRE_THROWS_MATCHES(chain_from_json(j), TypeError,
                           MessageMatches(ContainsSubstring("sideways")));
  }
}

TEST_CASE("stored verdicts are recomputed and compared", "[io]") {
  Theory t1 = read_theory_file(data_dir + "/t1.thy");
  Theory t3 = read_theory_file(data_dir + "/t3.thy");
  DefinitionSet d13 = read_definitions_file(data_dir + "/d13.def", t1.signature());
  DefinitionSet d31 = read_definitions_file(data_dir + "/d31.def", t3.signature());

  SECTION("a fresh merge certificate matches itself") {
    Json j = merge_certificate_to_json(verify_merge(t1, t3, d13, d31, 2));
    VerifyOutcome out = verify_certificate_json(j, std::nullopt);
    REQUIRE(out.kind == "merge");
    REQUIRE(out.stored);
    REQUIRE(out.recomputed);
    REQUIRE(out.matched);
  }

  SECTION("a tampered flag is caught") {
    Json j = merge_certificate_to_json(verify_merge(t1, t3, d13, d31, 2));
    j["verified"] = false;
    VerifyOutcome out = verify_certificate_json(j, std::nullopt);
    REQUIRE_FALSE(out.stored);
    REQUIRE(out.recomputed);
    REQUIRE_FALSE(out.matched);
  }

  SECTION("a bound override can change the verdict") {
    // same singleton classes at size one, different at size two
    Signature sp{{"p", 1}};
    Theory all("All", sp, {parse_formula("A x . p(x)", sp)});
    Theory some("Some", sp, {parse_formula("E x . p(x)", sp)});
    MergeCertificate c =
        verify_merge(all, some, DefinitionSet(sp), DefinitionSet(sp), 1);
    REQUIRE(c.verified);
    Json j = merge_certificate_to_json(c);
    REQUIRE(verify_certificate_json(j, std::nullopt).matched);
    VerifyOutcome wider = verify_certificate_json(j, 2);
    REQUIRE(wider.stored);
    REQUIRE_FALSE(wider.recomputed);
    REQUIRE_FALSE(wider.matched);
  }

  SECTION("every certificate kind is dispatched") {
    DefEqCertificate chain = read_chain_file(data_dir + "/chain.chn", 2);
    ChainVerdict verdict = verify_defeq_chain(chain);
    REQUIRE(verify_certificate_json(chain_to_json(chain, verdict), std::nullopt).matched);

    TwoStepEquivalence e =
        defeq_two_step(chain.theories.front(), chain.theories.back(), chain, 2);
    Json two = two_step_to_json(e, chain.theories.front(), chain.theories.back());
    REQUIRE(verify_certificate_json(two, std::nullopt).matched);

    Translation fwd(t1, t3, {{"p", parse_formula("q(x1)", t3.signature())}});
    Translation bwd(t3, t1, {{"q", parse_formula("p(x1)", t1.signature())}});
    IntertransResult ir = check_intertranslatable(fwd, bwd, 2);
    REQUIRE(verify_certificate_json(intertranslation_to_json(fwd, bwd, ir), std::nullopt)
                .matched);

    ModelMergeResult mm = check_model_merge(t1, t3, d13, d31, 2);
    REQUIRE(mm.ok);
    REQUIRE(verify_certificate_json(model_merge_to_json(t1, t3, d13, d31, mm), std::nullopt)
                .matched);

    ModelIntertransResult mi = check_model_intertrans(fwd, bwd, 2);
    REQUIRE(mi.ok);
    REQUIRE(verify_certificate_json(model_intertrans_to_json(fwd, bwd, mi), std::nullopt)
                .matched);
  }

  SECTION("unknown kinds are refused") {
    Json j{{"kind", "wat"}, {"verified", true}, {"bound", 2}};
    REQUIRE_THROWS_MATCHES(verify_certificate_json(j, std::nullopt), TypeError,
                           MessageMatches(ContainsSubstring("unknown certificate kind")));
  }
}

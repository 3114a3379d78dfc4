#include <catch2/catch_amalgamated.hpp>

#include "defeq/parser.hpp"
#include "defeq/printer.hpp"
#include "defeq/translation.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace defeq;

namespace {
const Signature sp{{"p", 1}};
const Signature sq{{"q", 1}};
const Variable x1{1};

Theory t1() {
  return Theory("T1", sp, {parse_formula("E! x . x = x", sp),
                           parse_formula("A x . p(x)", sp)});
}
Theory t2() {
  return Theory("T2", sp, {parse_formula("E! x . x = x", sp),
                           parse_formula("A x . ~p(x)", sp)});
}
Theory t3() {
  return Theory("T3", sq, {parse_formula("E! x . x = x", sq),
                           parse_formula("A x . q(x)", sq)});
}
Translation flip12() {
  return Translation(t1(), t2(), {{"p", parse_formula("~p(x1)", sp)}});
}
Translation flip21() {
  return Translation(t2(), t1(), {{"p", parse_formula("~p(x1)", sp)}});
}
DefinitionSet one_def(const Signature& base, const char* name, const char* body) {
  DefinitionSet d(base);
  d.add(ExplicitDefinition({name, 1}, {x1}, parse_formula(body, base)));
  return d;
}
}  // namespace

TEST_CASE("translations validate their images", "[translation]") {
  REQUIRE_NOTHROW(flip12());
  // missing symbol
  REQUIRE_THROWS_AS(Translation(t1(), t2(), {}), TypeError);
  // image over the wrong signature
  REQUIRE_THROWS_AS(Translation(t1(), t3(), {{"p", parse_formula("p(x1)", sp)}}),
                    TypeError);
  // free variable outside x1..arity
  REQUIRE_THROWS_AS(Translation(t1(), t2(), {{"p", parse_formula("p(x2)", sp)}}),
                    TypeError);
  REQUIRE_THROWS_AS(Translation(t1(), t2(), {{"p", parse_formula("p(x0)", sp)}}),
                    TypeError);
  // junk entries
  REQUIRE_THROWS_AS(Translation(t1(), t2(),
                                {{"p", parse_formula("p(x1)", sp)},
                                 {"r", parse_formula("p(x1)", sp)}}),
                    TypeError);
  // sentences are fine as images of nullary symbols
  Signature s0{{"c", 0}};
  Theory tc("C", s0, {});
  REQUIRE_NOTHROW(Translation(tc, t1(), {{"c", parse_formula("A x . p(x)", sp)}}));
}

TEST_CASE("formula translation is homomorphic", "[translation]") {
  Translation tr = flip12();
  REQUIRE(apply_translation(tr, parse_formula("A x . p(x)", sp)) ==
          parse_formula("A x . ~p(x)", sp));
  REQUIRE(apply_translation(tr, parse_formula("E x . (p(x) & x = x)", sp)) ==
          parse_formula("E x . (~p(x) & x = x)", sp));
  REQUIRE_THROWS_AS(apply_translation(tr, parse_formula("q(x0)", sq)), TypeError);

  SECTION("images instantiate at the atom's arguments") {
    Signature st{{"r", 2}};
    Theory src("S", st, {});
    Translation swap(src, src,
                     {{"r", parse_formula("r(x2,x1)", st)}});
    REQUIRE(apply_translation(swap, parse_formula("r(x4,x7)", st)) ==
            parse_formula("r(x7,x4)", st));
  }
  SECTION("binders in images do not capture arguments") {
    Signature st{{"r", 2}};
    Theory src("S", Signature{{"s", 1}}, {});
    Theory dst("D", st, {});
    Translation tr2(src, dst,
                    {{"s", parse_formula("E x2 . r(x1,x2)", st)}});
    Formula got = apply_translation(tr2, parse_formula("E x2 . s(x2)", Signature{{"s", 1}}));
    REQUIRE(well_formed(got, st));
    // semantic check: the two sides agree on every structure
    for (const FiniteModel& m : oracle::structures(st, 2)) {
      FiniteModel pulled = model_map(tr2, m);
      REQUIRE(oracle::sat(pulled, parse_formula("E x2 . s(x2)", Signature{{"s", 1}})) ==
              oracle::sat(m, got));
    }
  }
}

TEST_CASE("axiom images hold in the target theory", "[translation]") {
  REQUIRE(check_translation(flip12(), 3).ok);
  REQUIRE(check_translation(flip21(), 3).ok);

  Translation broken(t1(), t2(), {{"p", parse_formula("p(x1)", sp)}});
  TranslationCheck c = check_translation(broken, 2);
  REQUIRE_FALSE(c.ok);
  REQUIRE(c.failing_axiom.has_value());
  REQUIRE(c.witness.has_value());
  // the witness models T2 but rejects the translated axiom
  REQUIRE(oracle::sat_theory(*c.witness, t2()));
  REQUIRE_FALSE(oracle::sat(*c.witness, apply_translation(broken, *c.failing_axiom)));
}

TEST_CASE("the model map runs against the translation's direction", "[translation]") {
  // tr21 : T2 -> T1 pulls models of T1 back to models of T2
  FiniteModel m1(1, sp, {{"p", {{0}}}});  // the unique model of T1
  FiniteModel pulled = model_map(flip21(), m1);
  REQUIRE(pulled.relation("p").empty());
  REQUIRE(oracle::sat_theory(pulled, t2()));
  REQUIRE_THROWS_AS(model_map(flip21(), FiniteModel(1, sq, {})), TypeError);

  SECTION("satisfaction transfers along the map") {
    gen::Rng rng(99);
    Theory shell1("S1", sp, {});
    for (int round = 0; round < 50; ++round) {
      Signature tsig = gen::signature(rng, rng.between(1, 2), 2, "t");
      Theory shell2("S2", tsig, {});
      std::map<std::string, Formula> images{
          {"p", gen::formula(rng, tsig, {x1}, 2)}};
      Translation tr(shell1, shell2, images);
      unsigned size = rng.between(1, 3);
      FiniteModel m = gen::model(rng, tsig, size);
      Formula f = gen::sentence(rng, sp, 2);
      INFO("round " << round << ": " << print_formula(f));
      REQUIRE(oracle::sat(m, apply_translation(tr, f)) ==
              oracle::sat(model_map(tr, m), f));
    }
  }
}

TEST_CASE("intertranslatability of the contradictory pair", "[translation]") {
  IntertransResult r = check_intertranslatable(flip12(), flip21(), 3);
  REQUIRE(r.ok);

  SECTION("identity images fail, with a labeled reason") {
    Translation id12(t1(), t2(), {{"p", parse_formula("p(x1)", sp)}});
    Translation id21(t2(), t1(), {{"p", parse_formula("p(x1)", sp)}});
    IntertransResult bad = check_intertranslatable(id12, id21, 2);
    REQUIRE_FALSE(bad.ok);
    REQUIRE(bad.failure == "an axiom's translation fails in the forward target theory");
    REQUIRE(bad.witness.has_value());
  }
  SECTION("degenerate images can still intertranslate over strong axioms") {
    // both theories force their predicate to hold everywhere, so mapping the
    // atoms to a tautology round-trips provably
    Signature s2{{"r", 1}};
    Theory a("A", sp, {parse_formula("A x . p(x)", sp)});
    Theory b("B", s2, {parse_formula("A x . r(x)", s2)});
    Translation u(a, b, {{"p", parse_formula("x1 = x1", s2)}});
    Translation v(b, a, {{"r", parse_formula("x1 = x1", sp)}});
    REQUIRE(check_intertranslatable(u, v, 2).ok);
  }
  SECTION("mismatched directions throw") {
    REQUIRE_THROWS_AS(check_intertranslatable(flip12(), flip12(), 2), TypeError);
  }
}

TEST_CASE("round trips catch non-inverse pairs", "[translation]") {
  Theory free1("F1", sp, {});
  Theory free2("F2", sq, {});
  Translation u(free1, free2, {{"p", parse_formula("q(x1)", sq)}});
  Translation v(free2, free1, {{"q", parse_formula("~p(x1)", sp)}});
  // no axioms, so the axiom checks trivially pass; the round trip fails
  IntertransResult bad = check_intertranslatable(u, v, 2);
  REQUIRE_FALSE(bad.ok);
  REQUIRE_THAT(bad.failure, Catch::Matchers::ContainsSubstring("round trip"));
  REQUIRE(bad.failing.has_value());
  REQUIRE(bad.witness.has_value());
}

TEST_CASE("mergers and translation pairs interconvert", "[translation]") {
  MergeCertificate m13 = verify_merge(t1(), t3(), one_def(sp, "q", "p(x1)"),
                                      one_def(sq, "p", "q(x1)"), 2);
  auto [tr13, tr31] = merger_to_translations(m13);
  REQUIRE(tr13.image_of("p") == parse_formula("q(x1)", sq));
  REQUIRE(tr31.image_of("q") == parse_formula("p(x1)", sp));
  REQUIRE(check_intertranslatable(tr13, tr31, 2).ok);

  MergeCertificate rebuilt = translations_to_merger(tr13, tr31, 2);
  REQUIRE(rebuilt.verified);
  REQUIRE(rebuilt.delta_lr == m13.delta_lr);
  REQUIRE(rebuilt.delta_rl == m13.delta_rl);

  SECTION("shared symbols translate to themselves") {
    Signature spq{{"p", 1}, {"q", 1}};
    Theory a("A", sp, {parse_formula("E x . p(x)", sp)});
    Theory b("B", spq,
             {parse_formula("E x . p(x)", spq),
              parse_formula("A x . (q(x) <-> p(x))", spq)});
    MergeCertificate c =
        verify_merge(a, b, one_def(sp, "q", "p(x1)"), DefinitionSet(spq), 2);
    auto [ab, ba] = merger_to_translations(c);
    REQUIRE(ab.image_of("p") == parse_formula("p(x1)", sp));
    REQUIRE(ba.image_of("q") == parse_formula("p(x1)", sp));
    REQUIRE(check_intertranslatable(ab, ba, 2).ok);
  }
}

TEST_CASE("translations compose", "[translation]") {
  Translation a = flip12();
  Translation b = flip21();
  Translation round = compose_translations(a, b);
  REQUIRE(round.source() == t1());
  REQUIRE(round.target() == t1());
  // ~~p collapses nowhere syntactically, but is semantically the identity
  REQUIRE(round.image_of("p") == parse_formula("~~p(x1)", sp));
  REQUIRE_THROWS_AS(compose_translations(a, a), TypeError);
}

TEST_CASE("a two-step equivalence yields a checked intertranslation", "[translation]") {
  DefinitionSet d13 = one_def(sp, "q", "p(x1)");
  DefinitionSet d31 = one_def(sq, "p", "q(x1)");
  DefEqCertificate chain;
  chain.bound = 2;
  chain.theories = {t1(), apply_extension(t1(), d13), t3()};
  chain.steps = {{ChainStep::Direction::Extend, d13},
                 {ChainStep::Direction::Restrict, d31}};
  TwoStepEquivalence two = defeq_two_step(t1(), t3(), chain, 2);
  IntertranslationCertificate itc = defeq_to_intertranslation(two, 2);
  REQUIRE(itc.check.ok);
  REQUIRE(itc.tr12.source() == t1());
  REQUIRE(itc.tr12.target() == t3());
  REQUIRE(itc.tr21.source() == t3());
  // p travels to q through the fresh copy
  REQUIRE(alpha_equal(itc.tr12.image_of("p"), parse_formula("q(x1)", sq)));
}

TEST_CASE("random flip mergers round-trip through translations", "[translation]") {
  gen::Rng rng(31337);
  for (int round = 0; round < 15; ++round) {
    gen::MergerInstance m = gen::flip_merger(rng, "l", "r", rng.between(1, 2), 2, 1, 1);
    MergeCertificate c = verify_merge(m.left, m.right, m.dlr, m.drl, 2);
    INFO("round " << round);
    REQUIRE(c.verified);
    auto [f, b] = merger_to_translations(c);
    REQUIRE(check_intertranslatable(f, b, 2).ok);
    MergeCertificate again = translations_to_merger(f, b, 2);
    REQUIRE(again.verified);
    REQUIRE(again.delta_lr == c.delta_lr);
    REQUIRE(again.delta_rl == c.delta_rl);
  }
}

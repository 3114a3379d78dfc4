#include <catch2/catch_amalgamated.hpp>

#include "defeq/kernel.hpp"

using namespace defeq;
using Catch::Matchers::ContainsSubstring;

namespace {
const Variable x0{0}, x1{1}, x2{2};
Formula P(Variable v) { return pred({"p", 1}, {v}); }
Formula Q(Variable a, Variable b) { return pred({"q", 2}, {a, b}); }
}  // namespace

TEST_CASE("variables and symbols", "[kernel]") {
  REQUIRE(name_of(Variable{7}) == "x7");
  REQUIRE(Variable{3} < Variable{4});
  REQUIRE(valid_identifier("ab_1"));
  REQUIRE_FALSE(valid_identifier("1ab"));
  REQUIRE_FALSE(valid_identifier(""));
  REQUIRE_FALSE(valid_identifier("a-b"));
  REQUIRE(variable_shaped("x0"));
  REQUIRE(variable_shaped("x12"));
  REQUIRE_FALSE(variable_shaped("x"));
  REQUIRE_FALSE(variable_shaped("x1a"));
  REQUIRE_FALSE(variable_shaped("y0"));
}

TEST_CASE("signature construction and set operations", "[kernel]") {
  Signature s{{"p", 1}, {"q", 2}};
  REQUIRE(s.contains("p"));
  REQUIRE(s.contains(RelationSymbol{"q", 2}));
  REQUIRE_FALSE(s.contains(RelationSymbol{"q", 1}));
  REQUIRE(s.arity("q") == 2u);
  REQUIRE_FALSE(s.arity("r").has_value());

  SECTION("rejects bad names and arity clashes") {
    Signature t;
    REQUIRE_THROWS_AS(t.add({"x3", 1}), TypeError);
    REQUIRE_THROWS_AS(t.add({"3p", 1}), TypeError);
    t.add({"p", 1});
    REQUIRE_THROWS_AS(t.add({"p", 2}), TypeError);
    REQUIRE_NOTHROW(t.add({"p", 1}));  // same symbol again is fine
  }

  SECTION("set operations") {
    Signature a{{"p", 1}, {"q", 2}};
    Signature b{{"q", 2}, {"r", 1}};
    REQUIRE(Signature::united(a, b) == Signature{{"p", 1}, {"q", 2}, {"r", 1}});
    REQUIRE(Signature::intersected(a, b) == Signature{{"q", 2}});
    REQUIRE(Signature::subtracted(a, b) == Signature{{"p", 1}});
    REQUIRE_FALSE(a.disjoint_with(b));
    REQUIRE(Signature{{"p", 1}}.disjoint_with(Signature{{"r", 1}}));
    REQUIRE(Signature{{"q", 2}}.subset_of(a));
    REQUIRE_FALSE(a.subset_of(b));
    Signature clash{{"p", 2}};
    REQUIRE_THROWS_AS(Signature::united(a, clash), TypeError);
  }
}

TEST_CASE("formula construction and structure", "[kernel]") {
  Formula f = conj(P(x0), neg(eq(x0, x1)));
  REQUIRE(f.kind() == Formula::Kind::And);
  REQUIRE(f.left().rel().name == "p");
  REQUIRE(f.right().kind() == Formula::Kind::Not);
  REQUIRE(f.right().body().eq_left() == x0);
  REQUIRE(f.node_count() == 4u);
  REQUIRE(f == conj(P(x0), neg(eq(x0, x1))));
  REQUIRE_FALSE(f == conj(P(x1), neg(eq(x0, x1))));
  REQUIRE_THROWS_AS(pred({"p", 1}, {x0, x1}), TypeError);
  REQUIRE_THROWS_AS(pred({"", 1}, {x0}), TypeError);
}

TEST_CASE("free variables and sentences", "[kernel]") {
  Formula f = exists(x1, Q(x0, x1));
  REQUIRE(free_variables(f) == std::set<Variable>{x0});
  REQUIRE_FALSE(is_sentence(f));
  REQUIRE(is_sentence(exists(x0, f)));
  // shadowing: the inner binder hides x0 from its own body
  Formula g = conj(P(x0), exists(x0, P(x0)));
  REQUIRE(free_variables(g) == std::set<Variable>{x0});
  REQUIRE(var_index_bound(f) == 2u);
}

TEST_CASE("well-formedness over a signature", "[kernel]") {
  Signature s{{"p", 1}};
  REQUIRE(well_formed(P(x0), s));
  REQUIRE_FALSE(well_formed(Q(x0, x1), s));
  REQUIRE_FALSE(well_formed(pred({"p", 2}, {x0, x1}), s));
  REQUIRE(symbols_of(conj(P(x0), Q(x0, x1))) == Signature{{"p", 1}, {"q", 2}});
}

TEST_CASE("substitution avoids capture", "[kernel]") {
  Formula f = exists(x1, Q(x0, x1));
  Formula got = substitute(f, VarMap{{x0, x1}});
  REQUIRE(got == exists(x2, Q(x1, x2)));

  SECTION("no capture, binder untouched") {
    Formula h = substitute(f, VarMap{{x0, Variable{5}}});
    REQUIRE(h == exists(x1, Q(Variable{5}, x1)));
  }
  SECTION("bound occurrences are not renamed") {
    Formula h = substitute(exists(x0, P(x0)), VarMap{{x0, x1}});
    REQUIRE(h == exists(x0, P(x0)));
  }
  SECTION("simultaneous swap") {
    Formula h = substitute(Q(x0, x1), VarMap{{x0, x1}, {x1, x0}});
    REQUIRE(h == Q(x1, x0));
  }
}

TEST_CASE("sugar desugars to the core connectives", "[kernel]") {
  Formula a = P(x0), b = P(x1);
  REQUIRE(disj(a, b) == neg(conj(neg(a), neg(b))));
  REQUIRE(implies(a, b) == disj(neg(a), b));
  REQUIRE(iff(a, b) == conj(implies(a, b), implies(b, a)));
  REQUIRE(forall(x0, a) == neg(exists(x0, neg(a))));

  SECTION("unique existence expands with a fresh witness") {
    Formula u = exists_unique(x0, P(x0));
    // E x0 . (p(x0) & ~E w . (p(w) & ~ w = x0)) with w fresh
    REQUIRE(u.kind() == Formula::Kind::Exists);
    REQUIRE(is_sentence(u));
    Formula inner = u.body();
    REQUIRE(inner.kind() == Formula::Kind::And);
    REQUIRE(inner.left() == P(x0));
    Variable w = inner.right().body().bound();
    REQUIRE(w != x0);
    REQUIRE(inner.right() ==
            neg(exists(w, conj(P(w), neg(eq(x0, w))))));
  }
}

TEST_CASE("canonical form and alpha equivalence", "[kernel]") {
  Formula a = exists(Variable{5}, P(Variable{5}));
  Formula b = exists(x0, P(x0));
  REQUIRE(alpha_equal(a, b));
  REQUIRE(canonical(a) == canonical(b));
  REQUIRE(canonical(canonical(a)) == canonical(a));
  // free variables keep their identity
  Formula c = exists(x1, Q(x0, x1));
  Formula d = exists(x2, Q(x0, x2));
  REQUIRE(alpha_equal(c, d));
  REQUIRE_FALSE(alpha_equal(c, exists(x1, Q(x1, x1))));
}

TEST_CASE("theories canonicalize their axioms", "[kernel]") {
  Signature s{{"p", 1}};
  Formula ax1 = forall(x0, P(x0));
  Formula ax2 = forall(Variable{9}, P(Variable{9}));  // alpha-variant of ax1
  Theory t("T", s, {ax1, ax2});
  REQUIRE(t.axioms().size() == 1);
  REQUIRE(t.name() == "T");
  REQUIRE(t.signature() == s);

  SECTION("name does not affect equality") {
    REQUIRE(t == t.renamed("Other"));
    REQUIRE(t.renamed("Other").name() == "Other");
  }
  SECTION("axioms must be sentences over the signature") {
    REQUIRE_THROWS_AS(Theory("U", s, {P(x0)}), TypeError);
    REQUIRE_THROWS_AS(Theory("U", s, {forall(x0, Q(x0, x0))}), TypeError);
  }
  SECTION("axiom order does not affect equality") {
    Formula ax3 = exists(x0, neg(P(x0)));
    REQUIRE(Theory("A", s, {ax1, ax3}) == Theory("B", s, {ax3, ax1}));
  }
}

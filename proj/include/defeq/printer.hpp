#ifndef DEFEQ_PRINTER_HPP
#define DEFEQ_PRINTER_HPP

#include <string>

#include "defeq/kernel.hpp"

// Canonical concrete syntax. The printer resugars the fixed desugaring
// patterns (in the order <->, A, ->, |) and otherwise emits the primitive
// constructs; parse(print(f)) == f structurally for every formula.

namespace defeq {

namespace detail {

// ~E v . ~body
inline bool match_forall(const Formula& f, Variable* v, const Formula** body) {
  if (f.kind() != Formula::Kind::Not) return false;
  const Formula& e = f.body();
  if (e.kind() != Formula::Kind::Exists) return false;
  const Formula& nb = e.body();
  if (nb.kind() != Formula::Kind::Not) return false;
  *v = e.bound();
  *body = &nb.body();
  return true;
}

// ~(~a & ~b)
inline bool match_or(const Formula& f, const Formula** a, const Formula** b) {
  if (f.kind() != Formula::Kind::Not) return false;
  const Formula& c = f.body();
  if (c.kind() != Formula::Kind::And) return false;
  if (c.left().kind() != Formula::Kind::Not) return false;
  if (c.right().kind() != Formula::Kind::Not) return false;
  *a = &c.left().body();
  *b = &c.right().body();
  return true;
}

// a -> b is ~a | b, i.e. ~(~~a & ~b)
inline bool match_implies(const Formula& f, const Formula** a, const Formula** b) {
  const Formula *l, *r;
  if (!match_or(f, &l, &r)) return false;
  if (l->kind() != Formula::Kind::Not) return false;
  *a = &l->body();
  *b = r;
  return true;
}

// (a -> b) & (b -> a)
inline bool match_iff(const Formula& f, const Formula** a, const Formula** b) {
  if (f.kind() != Formula::Kind::And) return false;
  const Formula *a1, *b1, *a2, *b2;
  if (!match_implies(f.left(), &a1, &b1)) return false;
  if (!match_implies(f.right(), &a2, &b2)) return false;
  if (!(*a1 == *b2 && *b1 == *a2)) return false;
  *a = a1;
  *b = b1;
  return true;
}

// True when the printed form ends inside a quantifier body, so that a
// following binary connective would be captured by the quantifier rather
// than the surrounding operand position. Mirrors print_formula's dispatch.
inline bool open_tail(const Formula& f) {
  const Formula *a, *b;
  Variable v;
  if (match_iff(f, &a, &b)) return false;
  if (match_forall(f, &v, &a)) return true;
  if (match_implies(f, &a, &b)) return false;
  if (match_or(f, &a, &b)) return false;
  switch (f.kind()) {
    case Formula::Kind::Not:
      return open_tail(f.body());
    case Formula::Kind::Exists:
      return true;
    default:
      return false;
  }
}

}  // namespace detail

inline std::string print_formula(const Formula& f);

namespace detail {

// Left operands sit before a connective token, so an open-tailed print must
// be fenced off from it.
inline std::string print_left(const Formula& f) {
  std::string s = print_formula(f);
  return open_tail(f) ? "(" + s + ")" : s;
}

}  // namespace detail

inline std::string print_formula(const Formula& f) {
  {
    const Formula *a, *b;
    Variable v;
    if (detail::match_iff(f, &a, &b))
      return "(" + detail::print_left(*a) + " <-> " + print_formula(*b) + ")";
    if (detail::match_forall(f, &v, &a))
      return "A " + name_of(v) + " . " + print_formula(*a);
    if (detail::match_implies(f, &a, &b))
      return "(" + detail::print_left(*a) + " -> " + print_formula(*b) + ")";
    if (detail::match_or(f, &a, &b))
      return "(" + detail::print_left(*a) + " | " + print_formula(*b) + ")";
  }
  switch (f.kind()) {
    case Formula::Kind::Predicate: {
      std::string out = f.rel().name + "(";
      bool first = true;
      for (Variable v : f.args()) {
        if (!first) out += ",";
        out += name_of(v);
        first = false;
      }
      return out + ")";
    }
    case Formula::Kind::Equals:
      return name_of(f.eq_left()) + " = " + name_of(f.eq_right());
    case Formula::Kind::Not:
      return "~" + print_formula(f.body());
    case Formula::Kind::And:
      return "(" + detail::print_left(f.left()) + " & " + print_formula(f.right()) + ")";
    case Formula::Kind::Exists:
      return "E " + name_of(f.bound()) + " . " + print_formula(f.body());
  }
  throw TypeError("unreachable formula kind");
}

}  // namespace defeq

#endif  // DEFEQ_PRINTER_HPP

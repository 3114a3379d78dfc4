#ifndef DEFEQ_PARSER_HPP
#define DEFEQ_PARSER_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "defeq/kernel.hpp"

// Recursive-descent parser for the concrete formula syntax:
//
//   iff   :=  imp ("<->" imp)*                    loosest, left-assoc
//   imp   :=  or  ("->" imp)?                     right-assoc
//   or    :=  and ("|" and)*
//   and   :=  unary ("&" unary)*
//   unary :=  "~" unary | quantifier | primary
//   quantifier := ("E" | "A" | "E!") VAR "." iff  (maximal scope)
//   primary := "(" iff ")" | IDENT "(" vars ")" | VAR "=" VAR | IDENT
//
// "E" and "A" act as quantifiers exactly when followed by an identifier and
// then a dot; parenthesized application always reads as application. Any
// identifier in term position that is not a relation symbol is a variable:
// x<digits> denotes that index directly, other names are assigned the
// smallest unused indices in order of first occurrence.

namespace defeq {

namespace detail {

struct Token {
  enum Type {
    Ident,
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    EqSign,
    End
  };
  Type type;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view src, std::size_t line_base) {
  std::vector<Token> out;
  std::size_t line = line_base, col = 1;
  std::size_t i = 0;
  auto push = [&](Token::Type t, std::string text) {
    out.push_back({t, std::move(text), line, col});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      push(Token::Ident, std::string(src.substr(i, j - i)));
      col += j - i;
      i = j;
      continue;
    }
    switch (c) {
      case '(': push(Token::LParen, "("); break;
      case ')': push(Token::RParen, ")"); break;
      case ',': push(Token::Comma, ","); break;
      case '.': push(Token::Dot, "."); break;
      case '!': push(Token::Bang, "!"); break;
      case '~': push(Token::Tilde, "~"); break;
      case '&': push(Token::Amp, "&"); break;
      case '|': push(Token::Pipe, "|"); break;
      case '=': push(Token::EqSign, "="); break;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          push(Token::Arrow, "->");
          ++i;
          ++col;
          break;
        }
        throw ParseError("stray '-'", line, col);
      case '<':
        if (i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '>') {
          push(Token::DArrow, "<->");
          i += 2;
          col += 2;
          break;
        }
        throw ParseError("stray '<'", line, col);
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    ++i;
    ++col;
  }
  out.push_back({Token::End, "", line, col});
  return out;
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Signature& sig, std::size_t line_base)
      : toks_(tokenize(text, line_base)), sig_(sig) {}

  Formula parse() {
    Formula f = parse_iff();
    if (peek().type != Token::End)
      throw ParseError("unexpected trailing input '" + peek().text + "'",
                       peek().line, peek().column);
    return finalize(std::move(f));
  }

 private:
  // Temporary indices for named variables, far above anything a formula can
  // mention; finalize() maps them down to the smallest unused indices.
  static constexpr unsigned kTempBase = 1u << 24;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }

  Token advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  Token expect(Token::Type t, const char* what) {
    if (peek().type != t)
      throw ParseError(std::string("expected ") + what + " before '" +
                           (peek().type == Token::End ? "end of input" : peek().text) + "'",
                       peek().line, peek().column);
    return advance();
  }

  Variable resolve_var(const Token& t) {
    if (sig_.contains(t.text))
      throw ParseError("relation symbol '" + t.text + "' used as a variable",
                       t.line, t.column);
    if (variable_shaped(t.text)) {
      unsigned long idx = 0;
      try {
        idx = std::stoul(t.text.substr(1));
      } catch (const std::exception&) {
        idx = kTempBase;
      }
      if (idx >= kTempBase)
        throw ParseError("variable index too large in '" + t.text + "'", t.line,
                         t.column);
      return Variable{static_cast<unsigned>(idx)};
    }
    auto it = named_.find(t.text);
    if (it != named_.end()) return it->second;
    Variable v{kTempBase + next_temp_++};
    named_.emplace(t.text, v);
    return v;
  }

  Variable fresh_temp() { return Variable{kTempBase + next_temp_++}; }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (peek().type == Token::DArrow) {
      advance();
      f = iff(std::move(f), parse_imp());
    }
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (peek().type == Token::Arrow) {
      advance();
      return implies(std::move(f), parse_imp());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().type == Token::Pipe) {
      advance();
      f = disj(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (peek().type == Token::Amp) {
      advance();
      f = conj(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (t.type == Token::Tilde) {
      advance();
      return neg(parse_unary());
    }
    if (t.type == Token::Ident && (t.text == "E" || t.text == "A")) {
      bool unique = peek(1).type == Token::Bang;
      std::size_t vi = unique ? 2 : 1;
      if (peek(vi).type == Token::Ident && peek(vi + 1).type == Token::Dot) {
        if (unique && t.text == "A")
          throw ParseError("'A!' is not a quantifier", t.line, t.column);
        advance();
        if (unique) advance();
        Token vt = advance();
        Variable v = resolve_var(vt);
        expect(Token::Dot, "'.'");
        Formula body = parse_iff();
        if (t.text == "A") return forall(v, std::move(body));
        if (!unique) return exists(v, std::move(body));
        // E! desugared here so the witness variable draws from the parser's
        // own fresh pool instead of colliding with later named variables.
        Variable w = fresh_temp();
        Formula shifted = substitute(body, {{v, w}});
        return exists(v, conj(body, neg(exists(w, conj(std::move(shifted),
                                                       neg(eq(v, w)))))));
      }
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = peek();
    if (t.type == Token::LParen) {
      advance();
      Formula f = parse_iff();
      expect(Token::RParen, "')'");
      return f;
    }
    if (t.type != Token::Ident)
      throw ParseError("expected a formula before '" +
                           (t.type == Token::End ? "end of input" : t.text) + "'",
                       t.line, t.column);
    Token id = advance();
    if (peek().type == Token::LParen) {
      advance();
      std::vector<Token> argtoks;
      if (peek().type != Token::RParen) {
        argtoks.push_back(expect(Token::Ident, "a variable"));
        while (peek().type == Token::Comma) {
          advance();
          argtoks.push_back(expect(Token::Ident, "a variable"));
        }
      }
      expect(Token::RParen, "')'");
      auto arity = sig_.arity(id.text);
      if (!arity)
        throw ParseError("unknown relation symbol '" + id.text + "'", id.line,
                         id.column);
      if (*arity != argtoks.size())
        throw ParseError("relation symbol '" + id.text + "/" +
                             std::to_string(*arity) + "' applied to " +
                             std::to_string(argtoks.size()) + " arguments",
                         id.line, id.column);
      std::vector<Variable> args;
      args.reserve(argtoks.size());
      for (const Token& a : argtoks) args.push_back(resolve_var(a));
      return pred(sig_.symbol(id.text), std::move(args));
    }
    if (peek().type == Token::EqSign) {
      Variable l = resolve_var(id);
      advance();
      Token rt = expect(Token::Ident, "a variable");
      return eq(l, resolve_var(rt));
    }
    auto arity = sig_.arity(id.text);
    if (!arity) {
      if (variable_shaped(id.text) || named_.count(id.text))
        throw ParseError("variable '" + id.text + "' is not a formula", id.line,
                         id.column);
      throw ParseError("unknown relation symbol '" + id.text + "'", id.line,
                       id.column);
    }
    if (*arity != 0)
      throw ParseError("relation symbol '" + id.text + "/" +
                           std::to_string(*arity) + "' requires arguments",
                       id.line, id.column);
    return pred(sig_.symbol(id.text), {});
  }

  static void collect_indices(const Formula& f, std::set<unsigned>& out) {
    switch (f.kind()) {
      case Formula::Kind::Predicate:
        for (Variable v : f.args()) out.insert(v.index);
        break;
      case Formula::Kind::Equals:
        out.insert(f.eq_left().index);
        out.insert(f.eq_right().index);
        break;
      case Formula::Kind::Not:
        collect_indices(f.body(), out);
        break;
      case Formula::Kind::And:
        collect_indices(f.left(), out);
        collect_indices(f.right(), out);
        break;
      case Formula::Kind::Exists:
        out.insert(f.bound().index);
        collect_indices(f.body(), out);
        break;
    }
  }

  // Maps the temporaries for named variables onto the smallest canonical
  // indices not used by explicit x<digits> occurrences. The combined map is
  // injective over every variable in f, so blind renaming cannot capture.
  Formula finalize(Formula f) {
    if (next_temp_ == 0) return f;
    std::set<unsigned> used;
    collect_indices(f, used);
    VarMap m;
    unsigned cursor = 0;
    for (unsigned i = 0; i < next_temp_; ++i) {
      while (used.count(cursor)) ++cursor;
      m.emplace(Variable{kTempBase + i}, Variable{cursor});
      ++cursor;
    }
    return detail::rename_all(f, m);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  std::map<std::string, Variable> named_;
  unsigned next_temp_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text, const Signature& sig,
                             std::size_t line_base = 1) {
  return detail::FormulaParser(text, sig, line_base).parse();
}

}  // namespace defeq

#endif  // DEFEQ_PARSER_HPP

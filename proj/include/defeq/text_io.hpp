#ifndef DEFEQ_TEXT_IO_HPP
#define DEFEQ_TEXT_IO_HPP

#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "defeq/definitions.hpp"
#include "defeq/kernel.hpp"
#include "defeq/merge.hpp"
#include "defeq/parser.hpp"
#include "defeq/printer.hpp"
#include "defeq/renaming.hpp"
#include "defeq/semantics.hpp"
#include "defeq/translation.hpp"

// Line-oriented text formats. '#' starts a comment anywhere, blank lines are
// skipped.
//
//   theory file:       theory NAME / rel NAME ARITY / axiom FORMULA
//   definition file:   define NAME/ARITY := FORMULA
//   translation file:  translate NAME/ARITY => FORMULA
//   renaming file:     rename OLD -> NEW
//   model file:        model SIZE  then  NAME: (a,b); (c,d)
//   chain manifest:    theory FILE / extend FILE / restrict FILE
//
// Relation declarations must precede the axioms that use them.

namespace defeq {

namespace detail {

inline std::string strip_line(const std::string& raw) {
  std::string s = raw.substr(0, raw.find('#'));
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Numbered nonempty lines.
inline std::vector<std::pair<std::size_t, std::string>> logical_lines(std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    std::string s = strip_line(raw);
    if (!s.empty()) out.emplace_back(n, s);
  }
  return out;
}

inline std::pair<std::string, std::string> split_keyword(const std::string& line) {
  std::size_t sp = line.find_first_of(" \t");
  if (sp == std::string::npos) return {line, ""};
  std::size_t rest = line.find_first_not_of(" \t", sp);
  return {line.substr(0, sp), rest == std::string::npos ? "" : line.substr(rest)};
}

// NAME/ARITY
inline RelationSymbol parse_slashed_symbol(const std::string& text, std::size_t line) {
  std::size_t slash = text.find('/');
  if (slash == std::string::npos)
    throw ParseError("expected NAME/ARITY, got '" + text + "'", line, 1);
  std::string name = text.substr(0, slash);
  std::string ar = text.substr(slash + 1);
  if (!valid_identifier(name))
    throw ParseError("invalid relation symbol name '" + name + "'", line, 1);
  try {
    std::size_t used = 0;
    unsigned long a = std::stoul(ar, &used);
    if (used != ar.size() || a > 32) throw std::invalid_argument(ar);
    return {name, static_cast<unsigned>(a)};
  } catch (const std::exception&) {
    throw ParseError("invalid arity '" + ar + "'", line, 1);
  }
}

}  // namespace detail

inline Theory read_theory(std::istream& in, const std::string& default_name = "") {
  std::string name = default_name;
  Signature sig;
  std::vector<Formula> axioms;
  for (const auto& [lineno, line] : detail::logical_lines(in)) {
    auto [kw, rest] = detail::split_keyword(line);
    if (kw == "theory") {
      if (!valid_identifier(rest))
        throw ParseError("invalid theory name '" + rest + "'", lineno, 1);
      name = rest;
    } else if (kw == "rel") {
      auto [sym, ar] = detail::split_keyword(rest);
      if (ar.empty())
        throw ParseError("expected 'rel NAME ARITY'", lineno, 1);
      try {
        std::size_t used = 0;
        unsigned long a = std::stoul(ar, &used);
        if (used != ar.size() || a > 32) throw std::invalid_argument(ar);
        sig.add({sym, static_cast<unsigned>(a)});
      } catch (const TypeError& e) {
        throw ParseError(e.what(), lineno, 1);
      } catch (const std::exception&) {
        throw ParseError("invalid arity '" + ar + "'", lineno, 1);
      }
    } else if (kw == "axiom") {
      Formula f = parse_formula(rest, sig, lineno);
      if (!is_sentence(f))
        throw ParseError("axiom has free variables", lineno, 1);
      axioms.push_back(std::move(f));
    } else {
      throw ParseError("unknown directive '" + kw + "'", lineno, 1);
    }
  }
  return Theory(name, std::move(sig), std::move(axioms));
}

inline Theory read_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open theory file '" + path + "'");
  return read_theory(in, std::filesystem::path(path).stem().string());
}

inline std::string write_theory(const Theory& t) {
  std::ostringstream out;
  if (!t.name().empty()) out << "theory " << t.name() << "\n";
  for (const RelationSymbol& s : t.signature().symbols())
    out << "rel " << s.name << " " << s.arity << "\n";
  for (const Formula& ax : t.axioms()) out << "axiom " << print_formula(ax) << "\n";
  return out.str();
}

inline DefinitionSet read_definitions(std::istream& in, const Signature& base) {
  DefinitionSet out(base);
  for (const auto& [lineno, line] : detail::logical_lines(in)) {
    auto [kw, rest] = detail::split_keyword(line);
    if (kw != "define")
      throw ParseError("expected 'define NAME/ARITY := FORMULA'", lineno, 1);
    std::size_t sep = rest.find(":=");
    if (sep == std::string::npos)
      throw ParseError("missing ':=' in definition", lineno, 1);
    std::string head = detail::strip_line(rest.substr(0, sep));
    RelationSymbol sym = detail::parse_slashed_symbol(head, lineno);
    Formula body = parse_formula(rest.substr(sep + 2), base, lineno);
    try {
      out.add(ExplicitDefinition(sym, ExplicitDefinition::canonical_params(sym.arity),
                                 body));
    } catch (const TypeError& e) {
      throw ParseError(e.what(), lineno, 1);
    }
  }
  return out;
}

inline DefinitionSet read_definitions_file(const std::string& path, const Signature& base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open definition file '" + path + "'");
  return read_definitions(in, base);
}

inline std::string write_definitions(const DefinitionSet& d) {
  std::ostringstream out;
  for (const ExplicitDefinition& def : d.definitions())
    out << "define " << def.defined().name << "/" << def.defined().arity << " := "
        << print_formula(def.body()) << "\n";
  return out.str();
}

inline Translation read_translation(std::istream& in, const Theory& source,
                                    const Theory& target) {
  std::map<std::string, Formula> images;
  for (const auto& [lineno, line] : detail::logical_lines(in)) {
    auto [kw, rest] = detail::split_keyword(line);
    if (kw != "translate")
      throw ParseError("expected 'translate NAME/ARITY => FORMULA'", lineno, 1);
    std::size_t sep = rest.find("=>");
    if (sep == std::string::npos)
      throw ParseError("missing '=>' in translation", lineno, 1);
    std::string head = detail::strip_line(rest.substr(0, sep));
    RelationSymbol sym = detail::parse_slashed_symbol(head, lineno);
    if (!source.signature().contains(sym))
      throw ParseError("'" + sym.name + "/" + std::to_string(sym.arity) +
                           "' is not a source symbol",
                       lineno, 1);
    Formula body = parse_formula(rest.substr(sep + 2), target.signature(), lineno);
    if (!images.emplace(sym.name, std::move(body)).second)
      throw ParseError("symbol '" + sym.name + "' translated twice", lineno, 1);
  }
  try {
    return Translation(source, target, images);
  } catch (const TypeError& e) {
    throw Error(std::string("invalid translation: ") + e.what());
  }
}

inline Translation read_translation_file(const std::string& path, const Theory& source,
                                         const Theory& target) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open translation file '" + path + "'");
  return read_translation(in, source, target);
}

inline std::string write_translation(const Translation& tr) {
  std::ostringstream out;
  for (const RelationSymbol& s : tr.source().signature().symbols())
    out << "translate " << s.name << "/" << s.arity << " => "
        << print_formula(tr.image_of(s.name)) << "\n";
  return out.str();
}

inline Renaming read_renaming(std::istream& in, const Signature& source) {
  std::map<std::string, std::string> m;
  for (const auto& [lineno, line] : detail::logical_lines(in)) {
    auto [kw, rest] = detail::split_keyword(line);
    if (kw != "rename")
      throw ParseError("expected 'rename OLD -> NEW'", lineno, 1);
    std::size_t sep = rest.find("->");
    if (sep == std::string::npos)
      throw ParseError("missing '->' in renaming", lineno, 1);
    std::string from = detail::strip_line(rest.substr(0, sep));
    std::string to = detail::strip_line(rest.substr(sep + 2));
    if (!valid_identifier(from) || !valid_identifier(to))
      throw ParseError("invalid renaming '" + rest + "'", lineno, 1);
    if (!m.emplace(from, to).second)
      throw ParseError("symbol '" + from + "' renamed twice", lineno, 1);
  }
  try {
    return Renaming(source, m);
  } catch (const TypeError& e) {
    throw Error(std::string("invalid renaming: ") + e.what());
  }
}

inline std::string write_renaming(const Renaming& r) {
  std::ostringstream out;
  for (const auto& [from, to] : r.mapping())
    out << "rename " << from << " -> " << to << "\n";
  return out.str();
}

inline FiniteModel read_model(std::istream& in, const Signature& sig) {
  unsigned size = 0;
  bool have_size = false;
  std::map<std::string, FiniteModel::Relation> interp;
  for (const auto& [lineno, line] : detail::logical_lines(in)) {
    if (!have_size) {
      auto [kw, rest] = detail::split_keyword(line);
      if (kw != "model")
        throw ParseError("model file must start with 'model SIZE'", lineno, 1);
      try {
        std::size_t used = 0;
        unsigned long n = std::stoul(rest, &used);
        if (used != rest.size() || n == 0) throw std::invalid_argument(rest);
        size = static_cast<unsigned>(n);
      } catch (const std::exception&) {
        throw ParseError("invalid model size '" + rest + "'", lineno, 1);
      }
      have_size = true;
      continue;
    }
    std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("expected 'NAME: (tuples)'", lineno, 1);
    std::string name = detail::strip_line(line.substr(0, colon));
    auto arity = sig.arity(name);
    if (!arity)
      throw ParseError("unknown relation symbol '" + name + "'", lineno, 1);
    if (!interp.emplace(name, FiniteModel::Relation{}).second)
      throw ParseError("relation '" + name + "' listed twice", lineno, 1);
    FiniteModel::Relation& rel = interp[name];
    std::string rest = line.substr(colon + 1);
    std::size_t i = 0;
    auto skip_ws = [&] {
      while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t')) ++i;
    };
    skip_ws();
    while (i < rest.size()) {
      if (rest[i] != '(')
        throw ParseError("expected '(' in tuple list", lineno, 1);
      ++i;
      FiniteModel::Tuple t;
      skip_ws();
      while (i < rest.size() && rest[i] != ')') {
        std::size_t j = i;
        while (j < rest.size() && std::isdigit(static_cast<unsigned char>(rest[j]))) ++j;
        if (j == i) throw ParseError("expected a number in tuple", lineno, 1);
        unsigned long v = std::stoul(rest.substr(i, j - i));
        if (v >= size)
          throw ParseError("tuple element out of range", lineno, 1);
        t.push_back(static_cast<unsigned>(v));
        i = j;
        skip_ws();
        if (i < rest.size() && rest[i] == ',') {
          ++i;
          skip_ws();
        }
      }
      if (i >= rest.size())
        throw ParseError("unterminated tuple", lineno, 1);
      ++i;  // ')'
      if (t.size() != *arity)
        throw ParseError("tuple of wrong arity for '" + name + "'", lineno, 1);
      rel.insert(std::move(t));
      skip_ws();
      if (i < rest.size()) {
        if (rest[i] != ';')
          throw ParseError("expected ';' between tuples", lineno, 1);
        ++i;
        skip_ws();
      }
    }
  }
  if (!have_size) throw Error("model file is empty");
  return FiniteModel(size, sig, std::move(interp));
}

inline std::string write_model(const FiniteModel& m) {
  std::ostringstream out;
  out << "model " << m.size() << "\n";
  for (const RelationSymbol& s : m.signature().symbols()) {
    out << s.name << ":";
    bool first = true;
    for (const FiniteModel::Tuple& t : m.relation(s.name)) {
      out << (first ? " " : "; ") << "(";
      for (std::size_t i = 0; i < t.size(); ++i)
        out << (i ? "," : "") << t[i];
      out << ")";
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

// A chain manifest lists theory files and the definition files connecting
// them, in order; paths resolve relative to the manifest's directory.
inline DefEqCertificate read_chain_file(const std::string& path, unsigned bound) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open chain file '" + path + "'");
  std::filesystem::path dir = std::filesystem::path(path).parent_path();
  DefEqCertificate chain;
  chain.bound = bound;
  struct Pending {
    ChainStep::Direction dir;
    std::string file;
    std::size_t line;
  };
  std::optional<Pending> pending;
  for (const auto& [lineno, line] : detail::logical_lines(in)) {
    auto [kw, rest] = detail::split_keyword(line);
    std::string resolved = (dir / rest).string();
    if (kw == "theory") {
      Theory t = read_theory_file(resolved);
      if (!chain.theories.empty()) {
        if (!pending)
          throw ParseError("two theories without a step between them", lineno, 1);
        const Theory& prev = chain.theories.back();
        const Signature& base = pending->dir == ChainStep::Direction::Extend
                                    ? prev.signature()
                                    : t.signature();
        DefinitionSet delta = read_definitions_file((dir / pending->file).string(), base);
        chain.steps.push_back({pending->dir, std::move(delta)});
        pending.reset();
      }
      chain.theories.push_back(std::move(t));
    } else if (kw == "extend" || kw == "restrict") {
      if (chain.theories.empty())
        throw ParseError("a step cannot precede the first theory", lineno, 1);
      if (pending)
        throw ParseError("two steps without a theory between them", lineno, 1);
      pending = Pending{kw == "extend" ? ChainStep::Direction::Extend
                                       : ChainStep::Direction::Restrict,
                        rest, lineno};
    } else {
      throw ParseError("unknown chain directive '" + kw + "'", lineno, 1);
    }
  }
  if (pending) throw Error("chain ends with a dangling step");
  if (chain.theories.empty()) throw Error("chain file lists no theories");
  return chain;
}

}  // namespace defeq

#endif  // DEFEQ_TEXT_IO_HPP

// Part of the arithvc project, licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arithvc/ast.hpp"
#include "arithvc/nat.hpp"

namespace arithvc {

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

namespace lex {

enum class Tok {
  Ident,
  Number,
  KwIf,
  KwThen,
  KwElse,
  KwFi,
  KwWhile,
  KwDo,
  KwOd,
  KwGoto,
  KwEnd,
  KwForall,
  KwExists,
  KwTrue,
  KwFalse,
  ExtFn,  // div, rem, monus, sqrt, pair, L, R, beta
  Assign, // :=
  Colon,
  Semi,
  Dot,
  Comma,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Plus,
  Star,
  Eq,
  Lt,
  Le,
  Bang,
  Amp,
  Bar,
  Arrow,
  DArrow,
  End
};

struct Token {
  Tok kind;
  std::string text;
  Nat number;
  std::size_t pos = 0;
  int line = 1, col = 1;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i < src.size() && src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto push = [&](Tok k, std::string text, std::size_t at, int l, int c) {
    Token t;
    t.kind = k;
    t.text = std::move(text);
    t.pos = at;
    t.line = l;
    t.col = c;
    out.push_back(std::move(t));
  };
  static const std::map<std::string, Tok> keywords = {
      {"if", Tok::KwIf},         {"then", Tok::KwThen},   {"else", Tok::KwElse},
      {"fi", Tok::KwFi},         {"while", Tok::KwWhile}, {"do", Tok::KwDo},
      {"od", Tok::KwOd},         {"goto", Tok::KwGoto},   {"end", Tok::KwEnd},
      {"forall", Tok::KwForall}, {"exists", Tok::KwExists},
      {"true", Tok::KwTrue},     {"false", Tok::KwFalse}};
  static const std::map<std::string, Tok> extfns = {
      {"div", Tok::ExtFn},  {"rem", Tok::ExtFn}, {"monus", Tok::ExtFn}, {"sqrt", Tok::ExtFn},
      {"pair", Tok::ExtFn}, {"L", Tok::ExtFn},   {"R", Tok::ExtFn},     {"beta", Tok::ExtFn}};
  // UTF-8 aliases for the connectives and quantifiers.
  static const std::vector<std::pair<std::string, std::string>> unicode = {
      {"\xE2\x88\x80", "forall"}, {"\xE2\x88\x83", "exists"}, {"\xC2\xAC", "!"},
      {"\xE2\x88\xA7", "&"},      {"\xE2\x88\xA8", "|"},      {"\xE2\x86\x92", "->"},
      {"\xE2\x86\x94", "<->"},    {"\xE2\x89\xA4", "<="},     {"\xC2\xB7", "*"},
      {"\xC3\x97", "*"}};

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    std::size_t at = i;
    int l = line, cl = col;
    if (c == '$')
      throw parse_error("identifiers starting with '$' are reserved", l, cl);
    bool matched_unicode = false;
    for (const auto& [seq, repl] : unicode) {
      if (src.substr(i, seq.size()) == seq) {
        advance(seq.size());
        if (repl == "forall")
          push(Tok::KwForall, "forall", at, l, cl);
        else if (repl == "exists")
          push(Tok::KwExists, "exists", at, l, cl);
        else if (repl == "!")
          push(Tok::Bang, "!", at, l, cl);
        else if (repl == "&")
          push(Tok::Amp, "&", at, l, cl);
        else if (repl == "|")
          push(Tok::Bar, "|", at, l, cl);
        else if (repl == "->")
          push(Tok::Arrow, "->", at, l, cl);
        else if (repl == "<->")
          push(Tok::DArrow, "<->", at, l, cl);
        else if (repl == "<=")
          push(Tok::Le, "<=", at, l, cl);
        else
          push(Tok::Star, "*", at, l, cl);
        matched_unicode = true;
        break;
      }
    }
    if (matched_unicode) continue;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      advance(j - i);
      auto kw = keywords.find(word);
      if (kw != keywords.end())
        push(kw->second, word, at, l, cl);
      else if (extfns.count(word))
        push(Tok::ExtFn, word, at, l, cl);
      else
        push(Tok::Ident, word, at, l, cl);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string digits(src.substr(i, j - i));
      advance(j - i);
      Token t;
      t.kind = Tok::Number;
      t.text = digits;
      t.number = Nat(digits);
      t.pos = at;
      t.line = l;
      t.col = cl;
      out.push_back(std::move(t));
      continue;
    }
    auto two = src.substr(i, 2);
    auto three = src.substr(i, 3);
    if (three == "<->") {
      advance(3);
      push(Tok::DArrow, "<->", at, l, cl);
    } else if (two == ":=") {
      advance(2);
      push(Tok::Assign, ":=", at, l, cl);
    } else if (two == "->") {
      advance(2);
      push(Tok::Arrow, "->", at, l, cl);
    } else if (two == "<=") {
      advance(2);
      push(Tok::Le, "<=", at, l, cl);
    } else {
      switch (c) {
        case ':': advance(1); push(Tok::Colon, ":", at, l, cl); break;
        case ';': advance(1); push(Tok::Semi, ";", at, l, cl); break;
        case '.': advance(1); push(Tok::Dot, ".", at, l, cl); break;
        case ',': advance(1); push(Tok::Comma, ",", at, l, cl); break;
        case '(': advance(1); push(Tok::LParen, "(", at, l, cl); break;
        case ')': advance(1); push(Tok::RParen, ")", at, l, cl); break;
        case '{': advance(1); push(Tok::LBrace, "{", at, l, cl); break;
        case '}': advance(1); push(Tok::RBrace, "}", at, l, cl); break;
        case '+': advance(1); push(Tok::Plus, "+", at, l, cl); break;
        case '*': advance(1); push(Tok::Star, "*", at, l, cl); break;
        case '=': advance(1); push(Tok::Eq, "=", at, l, cl); break;
        case '<': advance(1); push(Tok::Lt, "<", at, l, cl); break;
        case '!': advance(1); push(Tok::Bang, "!", at, l, cl); break;
        case '&': advance(1); push(Tok::Amp, "&", at, l, cl); break;
        case '|': advance(1); push(Tok::Bar, "|", at, l, cl); break;
        default:
          throw parse_error(std::string("unexpected character '") + c + "'", l, cl);
      }
    }
  }
  Token t;
  t.kind = Tok::End;
  t.pos = src.size();
  t.line = line;
  t.col = col;
  out.push_back(std::move(t));
  return out;
}

}  // namespace lex

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex::tokenize(src)) {}

  // --- terms -------------------------------------------------------------
  TermPtr term() {
    TermPtr t = term_mul();
    while (at(lex::Tok::Plus)) {
      next();
      t = t_add(t, term_mul());
    }
    return t;
  }

  // --- formulas ----------------------------------------------------------
  FormulaPtr formula() { return formula_iff(); }

  // --- boolean expressions (program guards) -------------------------------
  BoolPtr boolexpr() {
    BoolPtr a = bool_unary();
    if (at(lex::Tok::Arrow)) {
      next();
      return b_imp(a, boolexpr());
    }
    return a;
  }

  // --- programs ------------------------------------------------------------
  ProgramPtr program() {
    ProgramPtr first = statement();
    if (at(lex::Tok::Semi)) {
      next();
      Span sp{first->span.begin, 0, first->span.line, first->span.col};
      ProgramPtr rest = program();
      sp.end = rest->span.end;
      return p_seq(first, rest, sp);
    }
    return first;
  }

  LabeledProgram labeled_program() {
    LabeledProgram p;
    bool saw_end = false;
    while (!at(lex::Tok::End)) {
      lex::Token lt = expect(lex::Tok::Number, "label");
      expect(lex::Tok::Colon, "':'");
      if (at(lex::Tok::KwEnd)) {
        next();
        p.exit_label = lt.number;
        saw_end = true;
        if (!at(lex::Tok::End)) fail("'end' must be the last line");
        break;
      }
      LabeledCommand c;
      c.label = lt.number;
      if (at(lex::Tok::KwIf)) {
        next();
        BoolPtr b = boolexpr();
        expect(lex::Tok::KwGoto, "'goto'");
        lex::Token tgt = expect(lex::Tok::Number, "target label");
        c.cmd = LabeledCommand::CondGoto{b, tgt.number};
      } else {
        lex::Token id = expect(lex::Tok::Ident, "variable");
        expect(lex::Tok::Assign, "':='");
        c.cmd = LabeledCommand::Assign{id.text, pure_term()};
      }
      p.commands.push_back(std::move(c));
    }
    if (!saw_end) fail("labeled program must finish with '<label>: end'");
    if (!labels_distinct(p)) fail("duplicate label");
    return p;
  }

  struct TripleText {
    FormulaPtr pre;
    ProgramPtr prog;
    FormulaPtr post;
  };

  TripleText triple() {
    expect(lex::Tok::LBrace, "'{'");
    FormulaPtr pre = formula();
    expect(lex::Tok::RBrace, "'}'");
    ProgramPtr prog = program();
    expect(lex::Tok::LBrace, "'{'");
    FormulaPtr post = formula();
    expect(lex::Tok::RBrace, "'}'");
    return {pre, prog, post};
  }

  void expect_end() {
    if (!at(lex::Tok::End)) fail("trailing input");
  }

 private:
  std::vector<lex::Token> toks_;
  std::size_t idx_ = 0;

  const lex::Token& cur() const { return toks_[idx_]; }
  bool at(lex::Tok k) const { return cur().kind == k; }
  void next() { ++idx_; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg, cur().line, cur().col);
  }
  lex::Token expect(lex::Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what);
    lex::Token t = cur();
    next();
    return t;
  }

  TermPtr term_mul() {
    TermPtr t = term_atom();
    while (at(lex::Tok::Star)) {
      next();
      t = t_mul(t, term_atom());
    }
    return t;
  }

  TermPtr term_atom() {
    if (at(lex::Tok::Number)) {
      Nat n = cur().number;
      if (n > 1000000) fail("numeral too large for a term");
      next();
      return t_num(n);
    }
    if (at(lex::Tok::Ident)) {
      std::string name = cur().text;
      next();
      return t_var(name);
    }
    if (at(lex::Tok::ExtFn)) {
      std::string name = cur().text;
      next();
      ExtFn fn = name == "div"     ? ExtFn::Div
                 : name == "rem"   ? ExtFn::Rem
                 : name == "monus" ? ExtFn::Monus
                 : name == "sqrt"  ? ExtFn::Sqrt
                 : name == "pair"  ? ExtFn::Pair
                 : name == "L"     ? ExtFn::Left
                 : name == "R"     ? ExtFn::Right
                                   : ExtFn::Beta;
      expect(lex::Tok::LParen, "'('");
      std::vector<TermPtr> args;
      args.push_back(term());
      while (at(lex::Tok::Comma)) {
        next();
        args.push_back(term());
      }
      expect(lex::Tok::RParen, "')'");
      if (args.size() != ext_arity(fn))
        fail(name + " takes " + std::to_string(ext_arity(fn)) + " argument(s)");
      return t_ext(fn, std::move(args));
    }
    if (at(lex::Tok::LParen)) {
      next();
      TermPtr t = term();
      expect(lex::Tok::RParen, "')'");
      return t;
    }
    fail("expected a term");
  }

  TermPtr pure_term() {
    lex::Token start = cur();
    TermPtr t = term();
    if (!pure(t))
      throw parse_error("extended functions are not allowed in program expressions",
                        start.line, start.col);
    return t;
  }

  FormulaPtr formula_iff() {
    FormulaPtr a = formula_imp();
    if (at(lex::Tok::DArrow)) {
      next();
      return f_iff(a, formula_iff());
    }
    return a;
  }

  FormulaPtr formula_imp() {
    FormulaPtr a = formula_or();
    if (at(lex::Tok::Arrow)) {
      next();
      return f_imp(a, formula_imp());
    }
    return a;
  }

  FormulaPtr formula_or() {
    FormulaPtr a = formula_and();
    if (at(lex::Tok::Bar)) {
      next();
      return f_or(a, formula_or());
    }
    return a;
  }

  FormulaPtr formula_and() {
    FormulaPtr a = formula_unary();
    if (at(lex::Tok::Amp)) {
      next();
      return f_and(a, formula_and());
    }
    return a;
  }

  FormulaPtr formula_unary() {
    if (at(lex::Tok::Bang)) {
      next();
      return f_not(formula_unary());
    }
    if (at(lex::Tok::KwForall) || at(lex::Tok::KwExists)) {
      bool universal = at(lex::Tok::KwForall);
      next();
      lex::Token id = expect(lex::Tok::Ident, "bound variable");
      std::optional<TermPtr> bound;
      if (at(lex::Tok::Lt)) {
        next();
        bound = term();
      } else if (at(lex::Tok::Le)) {
        next();
        bound = t_add(term(), t_one());
      }
      expect(lex::Tok::Dot, "'.'");
      FormulaPtr body = formula_iff();
      if (bound) {
        std::set<std::string> bv;
        collect_vars(*bound, bv);
        if (bv.count(id.text))
          throw parse_error("quantifier bound must not mention the bound variable", id.line,
                            id.col);
        return universal ? f_bforall(id.text, *bound, body) : f_bexists(id.text, *bound, body);
      }
      return universal ? f_forall(id.text, body) : f_exists(id.text, body);
    }
    return formula_atom();
  }

  FormulaPtr formula_atom() {
    if (at(lex::Tok::KwTrue)) {
      next();
      return f_true();
    }
    if (at(lex::Tok::KwFalse)) {
      next();
      return f_false();
    }
    if (at(lex::Tok::LParen)) {
      // Either a parenthesized formula or a parenthesized term followed by
      // a comparison; try the formula reading first and backtrack.
      std::size_t save = idx_;
      next();
      try {
        FormulaPtr f = formula_iff();
        expect(lex::Tok::RParen, "')'");
        if (at(lex::Tok::Eq) || at(lex::Tok::Lt) || at(lex::Tok::Le) || at(lex::Tok::Plus) ||
            at(lex::Tok::Star))
          throw parse_error("term context", cur().line, cur().col);
        return f;
      } catch (const parse_error&) {
        idx_ = save;
      }
    }
    TermPtr lhs = term();
    if (at(lex::Tok::Eq)) {
      next();
      return f_eq(lhs, term());
    }
    if (at(lex::Tok::Lt)) {
      next();
      return f_lt(lhs, term());
    }
    if (at(lex::Tok::Le)) {
      next();
      return f_lt(lhs, t_add(term(), t_one()));
    }
    fail("expected '=', '<' or '<=' after term");
  }

  BoolPtr bool_unary() {
    if (at(lex::Tok::Bang)) {
      next();
      return b_not(bool_unary());
    }
    if (at(lex::Tok::LParen)) {
      std::size_t save = idx_;
      next();
      try {
        BoolPtr b = boolexpr();
        expect(lex::Tok::RParen, "')'");
        if (at(lex::Tok::Lt) || at(lex::Tok::Le) || at(lex::Tok::Plus) || at(lex::Tok::Star))
          throw parse_error("term context", cur().line, cur().col);
        return b;
      } catch (const parse_error&) {
        idx_ = save;
      }
    }
    TermPtr lhs = pure_term();
    if (at(lex::Tok::Lt)) {
      next();
      return b_lt(lhs, pure_term());
    }
    if (at(lex::Tok::Le)) {
      next();
      return b_lt(lhs, t_add(pure_term(), t_one()));
    }
    fail("expected '<' or '<=' in boolean expression");
  }

  ProgramPtr statement() {
    lex::Token start = cur();
    if (at(lex::Tok::KwIf)) {
      next();
      BoolPtr c = boolexpr();
      expect(lex::Tok::KwThen, "'then'");
      ProgramPtr t = program();
      expect(lex::Tok::KwElse, "'else'");
      ProgramPtr e = program();
      lex::Token fin = expect(lex::Tok::KwFi, "'fi'");
      return p_if(c, t, e, span_from(start, fin));
    }
    if (at(lex::Tok::KwWhile)) {
      next();
      BoolPtr c = boolexpr();
      expect(lex::Tok::KwDo, "'do'");
      ProgramPtr body = program();
      lex::Token fin = expect(lex::Tok::KwOd, "'od'");
      return p_while(c, body, span_from(start, fin));
    }
    if (at(lex::Tok::Ident)) {
      lex::Token id = cur();
      next();
      expect(lex::Tok::Assign, "':='");
      TermPtr value = pure_term();
      return p_assign(id.text, value, span_from(start, toks_[idx_ - 1]));
    }
    fail("expected a statement");
  }

  Span span_from(const lex::Token& a, const lex::Token& b) const {
    Span sp;
    sp.begin = a.pos;
    sp.end = b.pos + b.text.size();
    sp.line = a.line;
    sp.col = a.col;
    return sp;
  }
};

}  // namespace detail

inline TermPtr parse_term(std::string_view text) {
  detail::Parser p(text);
  TermPtr t = p.term();
  p.expect_end();
  return t;
}

inline FormulaPtr parse_formula(std::string_view text) {
  detail::Parser p(text);
  FormulaPtr f = p.formula();
  p.expect_end();
  return f;
}

inline BoolPtr parse_boolexpr(std::string_view text) {
  detail::Parser p(text);
  BoolPtr b = p.boolexpr();
  p.expect_end();
  return b;
}

inline ProgramPtr parse_program(std::string_view text) {
  detail::Parser p(text);
  ProgramPtr s = p.program();
  p.expect_end();
  return s;
}

inline LabeledProgram parse_labeled(std::string_view text) {
  detail::Parser p(text);
  LabeledProgram lp = p.labeled_program();
  p.expect_end();
  return lp;
}

struct ParsedTriple {
  FormulaPtr pre;
  ProgramPtr prog;
  FormulaPtr post;
};

inline ParsedTriple parse_triple(std::string_view text) {
  detail::Parser p(text);
  auto t = p.triple();
  p.expect_end();
  return {t.pre, t.prog, t.post};
}

/// Parses `label: formula` lines into an annotation map.
inline std::map<Nat, FormulaPtr> parse_annotations(std::string_view text) {
  std::map<Nat, FormulaPtr> out;
  std::size_t start = 0;
  int lineno = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line =
        text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
    ++lineno;
    std::string_view trimmed = line;
    while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
      trimmed.remove_prefix(1);
    if (!trimmed.empty() && trimmed.substr(0, 2) != "//") {
      std::size_t colon = trimmed.find(':');
      if (colon == std::string_view::npos)
        throw parse_error("annotation line needs 'label: formula'", lineno, 1);
      Nat label;
      try {
        label = Nat(std::string(trimmed.substr(0, colon)));
      } catch (...) {
        throw parse_error("bad annotation label", lineno, 1);
      }
      if (out.count(label)) throw parse_error("duplicate annotation label", lineno, 1);
      out[label] = parse_formula(trimmed.substr(colon + 1));
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

/// Parses an input-state description like "x=5,y=0".
inline std::map<std::string, Nat> parse_state(std::string_view text) {
  std::map<std::string, Nat> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t comma = text.find(',', start);
    std::string_view item =
        text.substr(start, comma == std::string_view::npos ? text.size() - start : comma - start);
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw parse_error("expected var=value", 1, 1);
    std::string name;
    for (char c : item.substr(0, eq))
      if (c != ' ' && c != '\t') name += c;
    std::string val;
    for (char c : item.substr(eq + 1))
      if (c != ' ' && c != '\t') val += c;
    if (name.empty() || val.empty() || !lex::ident_start(name[0]))
      throw parse_error("expected var=value", 1, 1);
    out[name] = Nat(val);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace arithvc

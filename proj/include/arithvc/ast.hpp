// Part of the arithvc project, licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "arithvc/nat.hpp"

namespace arithvc {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Terms over the arithmetic signature {+, *, <, 0, 1}, extended with the
// defined coding functions. A term is "pure" when it uses no extended
// function; program expressions are always pure.
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class ExtFn { Div, Rem, Monus, Sqrt, Pair, Left, Right, Beta };

inline std::size_t ext_arity(ExtFn f) {
  switch (f) {
    case ExtFn::Sqrt:
    case ExtFn::Left:
    case ExtFn::Right:
      return 1;
    default:
      return 2;
  }
}

inline const char* ext_name(ExtFn f) {
  switch (f) {
    case ExtFn::Div: return "div";
    case ExtFn::Rem: return "rem";
    case ExtFn::Monus: return "monus";
    case ExtFn::Sqrt: return "sqrt";
    case ExtFn::Pair: return "pair";
    case ExtFn::Left: return "L";
    case ExtFn::Right: return "R";
    case ExtFn::Beta: return "beta";
  }
  return "?";
}

struct Term {
  struct Zero {};
  struct One {};
  struct Var {
    std::string name;
  };
  struct Add {
    TermPtr lhs, rhs;
  };
  struct Mul {
    TermPtr lhs, rhs;
  };
  struct Ext {
    ExtFn fn;
    std::vector<TermPtr> args;
  };
  std::variant<Zero, One, Var, Add, Mul, Ext> node;
};

inline TermPtr t_zero() {
  static const TermPtr z = std::make_shared<Term>(Term{Term::Zero{}});
  return z;
}
inline TermPtr t_one() {
  static const TermPtr o = std::make_shared<Term>(Term{Term::One{}});
  return o;
}
inline TermPtr t_var(std::string name) {
  return std::make_shared<Term>(Term{Term::Var{std::move(name)}});
}
inline TermPtr t_add(TermPtr a, TermPtr b) {
  return std::make_shared<Term>(Term{Term::Add{std::move(a), std::move(b)}});
}
inline TermPtr t_mul(TermPtr a, TermPtr b) {
  return std::make_shared<Term>(Term{Term::Mul{std::move(a), std::move(b)}});
}
inline TermPtr t_ext(ExtFn fn, std::vector<TermPtr> args) {
  return std::make_shared<Term>(Term{Term::Ext{fn, std::move(args)}});
}

/// Numeral n as the left-nested sum 1+1+...+1 (0 for n == 0).
inline TermPtr t_num(const Nat& n) {
  if (n == 0) return t_zero();
  TermPtr acc = t_one();
  for (Nat k = 1; k < n; ++k) acc = t_add(acc, t_one());
  return acc;
}

inline bool operator==(const Term& a, const Term& b);

inline bool equal(const TermPtr& a, const TermPtr& b) {
  return a == b || (a && b && *a == *b);
}

inline bool operator==(const Term& a, const Term& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [](const Term::Zero&, const Term::Zero&) { return true; },
          [](const Term::One&, const Term::One&) { return true; },
          [](const Term::Var& x, const Term::Var& y) { return x.name == y.name; },
          [](const Term::Add& x, const Term::Add& y) {
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [](const Term::Mul& x, const Term::Mul& y) {
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [](const Term::Ext& x, const Term::Ext& y) {
            if (x.fn != y.fn || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); ++i)
              if (!equal(x.args[i], y.args[i])) return false;
            return true;
          },
          [](const auto&, const auto&) { return false; }},
      a.node, b.node);
}

inline bool pure(const TermPtr& t) {
  return std::visit(overloaded{[](const Term::Add& n) { return pure(n.lhs) && pure(n.rhs); },
                               [](const Term::Mul& n) { return pure(n.lhs) && pure(n.rhs); },
                               [](const Term::Ext&) { return false; },
                               [](const auto&) { return true; }},
                    t->node);
}

inline void collect_vars(const TermPtr& t, std::set<std::string>& out) {
  std::visit(overloaded{[&](const Term::Var& n) { out.insert(n.name); },
                        [&](const Term::Add& n) {
                          collect_vars(n.lhs, out);
                          collect_vars(n.rhs, out);
                        },
                        [&](const Term::Mul& n) {
                          collect_vars(n.lhs, out);
                          collect_vars(n.rhs, out);
                        },
                        [&](const Term::Ext& n) {
                          for (const auto& a : n.args) collect_vars(a, out);
                        },
                        [](const auto&) {}},
             t->node);
}

/// If t is a canonical numeral (0, 1, or a left-nested sum of ones),
/// returns its value; otherwise -1.
inline long long term_as_numeral(const TermPtr& t) {
  if (std::holds_alternative<Term::Zero>(t->node)) return 0;
  long long count = 0;
  const Term* cur = t.get();
  while (true) {
    if (std::holds_alternative<Term::One>(cur->node)) return count + 1;
    const auto* add = std::get_if<Term::Add>(&cur->node);
    if (!add || !std::holds_alternative<Term::One>(add->rhs->node)) return -1;
    ++count;
    if (count > (1 << 20)) return -1;
    cur = add->lhs.get();
  }
}

// ---------------------------------------------------------------------------
// First-order formulas with bounded quantifier forms. The bound term of a
// bounded quantifier must not mention the bound variable.
// ---------------------------------------------------------------------------

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  struct Eq {
    TermPtr lhs, rhs;
  };
  struct Lt {
    TermPtr lhs, rhs;
  };
  struct Not {
    FormulaPtr sub;
  };
  struct And {
    FormulaPtr lhs, rhs;
  };
  struct Or {
    FormulaPtr lhs, rhs;
  };
  struct Imp {
    FormulaPtr lhs, rhs;
  };
  struct Iff {
    FormulaPtr lhs, rhs;
  };
  struct Forall {
    std::string var;
    FormulaPtr body;
  };
  struct Exists {
    std::string var;
    FormulaPtr body;
  };
  struct BForall {
    std::string var;
    TermPtr bound;
    FormulaPtr body;
  };
  struct BExists {
    std::string var;
    TermPtr bound;
    FormulaPtr body;
  };
  std::variant<Eq, Lt, Not, And, Or, Imp, Iff, Forall, Exists, BForall, BExists> node;
};

inline FormulaPtr f_eq(TermPtr a, TermPtr b) {
  return std::make_shared<Formula>(Formula{Formula::Eq{std::move(a), std::move(b)}});
}
inline FormulaPtr f_lt(TermPtr a, TermPtr b) {
  return std::make_shared<Formula>(Formula{Formula::Lt{std::move(a), std::move(b)}});
}
inline FormulaPtr f_not(FormulaPtr a) {
  return std::make_shared<Formula>(Formula{Formula::Not{std::move(a)}});
}
inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(Formula{Formula::And{std::move(a), std::move(b)}});
}
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(Formula{Formula::Or{std::move(a), std::move(b)}});
}
inline FormulaPtr f_imp(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(Formula{Formula::Imp{std::move(a), std::move(b)}});
}
inline FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(Formula{Formula::Iff{std::move(a), std::move(b)}});
}
inline FormulaPtr f_forall(std::string v, FormulaPtr body) {
  return std::make_shared<Formula>(Formula{Formula::Forall{std::move(v), std::move(body)}});
}
inline FormulaPtr f_exists(std::string v, FormulaPtr body) {
  return std::make_shared<Formula>(Formula{Formula::Exists{std::move(v), std::move(body)}});
}
inline FormulaPtr f_bforall(std::string v, TermPtr bound, FormulaPtr body) {
  return std::make_shared<Formula>(
      Formula{Formula::BForall{std::move(v), std::move(bound), std::move(body)}});
}
inline FormulaPtr f_bexists(std::string v, TermPtr bound, FormulaPtr body) {
  return std::make_shared<Formula>(
      Formula{Formula::BExists{std::move(v), std::move(bound), std::move(body)}});
}

/// Canonical truth constants: true is 0 = 0, false is 0 < 0.
inline FormulaPtr f_true() { return f_eq(t_zero(), t_zero()); }
inline FormulaPtr f_false() { return f_lt(t_zero(), t_zero()); }

inline bool operator==(const Formula& a, const Formula& b);

inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  return a == b || (a && b && *a == *b);
}

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [](const Formula::Eq& x, const Formula::Eq& y) {
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [](const Formula::Lt& x, const Formula::Lt& y) {
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [](const Formula::Not& x, const Formula::Not& y) { return equal(x.sub, y.sub); },
          [](const Formula::And& x, const Formula::And& y) {
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [](const Formula::Or& x, const Formula::Or& y) {
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [](const Formula::Imp& x, const Formula::Imp& y) {
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [](const Formula::Iff& x, const Formula::Iff& y) {
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [](const Formula::Forall& x, const Formula::Forall& y) {
            return x.var == y.var && equal(x.body, y.body);
          },
          [](const Formula::Exists& x, const Formula::Exists& y) {
            return x.var == y.var && equal(x.body, y.body);
          },
          [](const Formula::BForall& x, const Formula::BForall& y) {
            return x.var == y.var && equal(x.bound, y.bound) && equal(x.body, y.body);
          },
          [](const Formula::BExists& x, const Formula::BExists& y) {
            return x.var == y.var && equal(x.bound, y.bound) && equal(x.body, y.body);
          },
          [](const auto&, const auto&) { return false; }},
      a.node, b.node);
}

inline void collect_free_vars(const FormulaPtr& f, std::set<std::string>& out,
                              std::set<std::string>& bound) {
  std::visit(
      overloaded{
          [&](const Formula::Eq& n) {
            std::set<std::string> vs;
            collect_vars(n.lhs, vs);
            collect_vars(n.rhs, vs);
            for (auto& v : vs)
              if (!bound.count(v)) out.insert(v);
          },
          [&](const Formula::Lt& n) {
            std::set<std::string> vs;
            collect_vars(n.lhs, vs);
            collect_vars(n.rhs, vs);
            for (auto& v : vs)
              if (!bound.count(v)) out.insert(v);
          },
          [&](const Formula::Not& n) { collect_free_vars(n.sub, out, bound); },
          [&](const Formula::And& n) {
            collect_free_vars(n.lhs, out, bound);
            collect_free_vars(n.rhs, out, bound);
          },
          [&](const Formula::Or& n) {
            collect_free_vars(n.lhs, out, bound);
            collect_free_vars(n.rhs, out, bound);
          },
          [&](const Formula::Imp& n) {
            collect_free_vars(n.lhs, out, bound);
            collect_free_vars(n.rhs, out, bound);
          },
          [&](const Formula::Iff& n) {
            collect_free_vars(n.lhs, out, bound);
            collect_free_vars(n.rhs, out, bound);
          },
          [&](const Formula::Forall& n) {
            bool fresh = bound.insert(n.var).second;
            collect_free_vars(n.body, out, bound);
            if (fresh) bound.erase(n.var);
          },
          [&](const Formula::Exists& n) {
            bool fresh = bound.insert(n.var).second;
            collect_free_vars(n.body, out, bound);
            if (fresh) bound.erase(n.var);
          },
          [&](const Formula::BForall& n) {
            std::set<std::string> vs;
            collect_vars(n.bound, vs);
            for (auto& v : vs)
              if (!bound.count(v)) out.insert(v);
            bool fresh = bound.insert(n.var).second;
            collect_free_vars(n.body, out, bound);
            if (fresh) bound.erase(n.var);
          },
          [&](const Formula::BExists& n) {
            std::set<std::string> vs;
            collect_vars(n.bound, vs);
            for (auto& v : vs)
              if (!bound.count(v)) out.insert(v);
            bool fresh = bound.insert(n.var).second;
            collect_free_vars(n.body, out, bound);
            if (fresh) bound.erase(n.var);
          }},
      f->node);
}

inline std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> out, bound;
  collect_free_vars(f, out, bound);
  return out;
}

/// All variable names occurring in f, free or bound (binders included).
inline void collect_all_vars(const FormulaPtr& f, std::set<std::string>& out) {
  std::visit(overloaded{[&](const Formula::Eq& n) {
                          collect_vars(n.lhs, out);
                          collect_vars(n.rhs, out);
                        },
                        [&](const Formula::Lt& n) {
                          collect_vars(n.lhs, out);
                          collect_vars(n.rhs, out);
                        },
                        [&](const Formula::Not& n) { collect_all_vars(n.sub, out); },
                        [&](const Formula::And& n) {
                          collect_all_vars(n.lhs, out);
                          collect_all_vars(n.rhs, out);
                        },
                        [&](const Formula::Or& n) {
                          collect_all_vars(n.lhs, out);
                          collect_all_vars(n.rhs, out);
                        },
                        [&](const Formula::Imp& n) {
                          collect_all_vars(n.lhs, out);
                          collect_all_vars(n.rhs, out);
                        },
                        [&](const Formula::Iff& n) {
                          collect_all_vars(n.lhs, out);
                          collect_all_vars(n.rhs, out);
                        },
                        [&](const Formula::Forall& n) {
                          out.insert(n.var);
                          collect_all_vars(n.body, out);
                        },
                        [&](const Formula::Exists& n) {
                          out.insert(n.var);
                          collect_all_vars(n.body, out);
                        },
                        [&](const Formula::BForall& n) {
                          out.insert(n.var);
                          collect_vars(n.bound, out);
                          collect_all_vars(n.body, out);
                        },
                        [&](const Formula::BExists& n) {
                          out.insert(n.var);
                          collect_vars(n.bound, out);
                          collect_all_vars(n.body, out);
                        }},
             f->node);
}

// ---------------------------------------------------------------------------
// Boolean expressions of programs: E1 < E2 | !B | B1 -> B2, with pure terms.
// ---------------------------------------------------------------------------

struct BoolExpr;
using BoolPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
  struct Lt {
    TermPtr lhs, rhs;
  };
  struct Not {
    BoolPtr sub;
  };
  struct Imp {
    BoolPtr lhs, rhs;
  };
  std::variant<Lt, Not, Imp> node;
};

inline BoolPtr b_lt(TermPtr a, TermPtr b) {
  return std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Lt{std::move(a), std::move(b)}});
}
inline BoolPtr b_not(BoolPtr a) {
  return std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Not{std::move(a)}});
}
inline BoolPtr b_imp(BoolPtr a, BoolPtr b) {
  return std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Imp{std::move(a), std::move(b)}});
}

inline bool operator==(const BoolExpr& a, const BoolExpr& b);

inline bool equal(const BoolPtr& a, const BoolPtr& b) {
  return a == b || (a && b && *a == *b);
}

inline bool operator==(const BoolExpr& a, const BoolExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(overloaded{[](const BoolExpr::Lt& x, const BoolExpr::Lt& y) {
                                 return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
                               },
                               [](const BoolExpr::Not& x, const BoolExpr::Not& y) {
                                 return equal(x.sub, y.sub);
                               },
                               [](const BoolExpr::Imp& x, const BoolExpr::Imp& y) {
                                 return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
                               },
                               [](const auto&, const auto&) { return false; }},
                    a.node, b.node);
}

inline void collect_vars(const BoolPtr& b, std::set<std::string>& out) {
  std::visit(overloaded{[&](const BoolExpr::Lt& n) {
                          collect_vars(n.lhs, out);
                          collect_vars(n.rhs, out);
                        },
                        [&](const BoolExpr::Not& n) { collect_vars(n.sub, out); },
                        [&](const BoolExpr::Imp& n) {
                          collect_vars(n.lhs, out);
                          collect_vars(n.rhs, out);
                        }},
             b->node);
}

/// Injective embedding of boolean expressions into formulas.
inline FormulaPtr embed(const BoolPtr& b) {
  return std::visit(
      overloaded{[](const BoolExpr::Lt& n) { return f_lt(n.lhs, n.rhs); },
                 [](const BoolExpr::Not& n) { return f_not(embed(n.sub)); },
                 [](const BoolExpr::Imp& n) { return f_imp(embed(n.lhs), embed(n.rhs)); }},
      b->node);
}

// ---------------------------------------------------------------------------
// While-programs. Nodes carry an optional source span (byte offsets plus the
// 1-based line/column of the start) set by the parser; spans are ignored by
// structural equality.
// ---------------------------------------------------------------------------

struct Span {
  std::size_t begin = 0, end = 0;
  int line = 0, col = 0;
};

struct Program;
using ProgramPtr = std::shared_ptr<const Program>;

struct Program {
  struct Assign {
    std::string var;
    TermPtr value;  // pure
  };
  struct Seq {
    ProgramPtr first, second;
  };
  struct If {
    BoolPtr cond;
    ProgramPtr then_branch, else_branch;
  };
  struct While {
    BoolPtr cond;
    ProgramPtr body;
  };
  std::variant<Assign, Seq, If, While> node;
  Span span;
};

inline ProgramPtr p_assign(std::string v, TermPtr value, Span sp = {}) {
  return std::make_shared<Program>(Program{Program::Assign{std::move(v), std::move(value)}, sp});
}
inline ProgramPtr p_seq(ProgramPtr a, ProgramPtr b, Span sp = {}) {
  return std::make_shared<Program>(Program{Program::Seq{std::move(a), std::move(b)}, sp});
}
inline ProgramPtr p_if(BoolPtr c, ProgramPtr t, ProgramPtr e, Span sp = {}) {
  return std::make_shared<Program>(
      Program{Program::If{std::move(c), std::move(t), std::move(e)}, sp});
}
inline ProgramPtr p_while(BoolPtr c, ProgramPtr body, Span sp = {}) {
  return std::make_shared<Program>(Program{Program::While{std::move(c), std::move(body)}, sp});
}

inline bool operator==(const Program& a, const Program& b);

inline bool equal(const ProgramPtr& a, const ProgramPtr& b) {
  return a == b || (a && b && *a == *b);
}

inline bool operator==(const Program& a, const Program& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{[](const Program::Assign& x, const Program::Assign& y) {
                   return x.var == y.var && equal(x.value, y.value);
                 },
                 [](const Program::Seq& x, const Program::Seq& y) {
                   return equal(x.first, y.first) && equal(x.second, y.second);
                 },
                 [](const Program::If& x, const Program::If& y) {
                   return equal(x.cond, y.cond) && equal(x.then_branch, y.then_branch) &&
                          equal(x.else_branch, y.else_branch);
                 },
                 [](const Program::While& x, const Program::While& y) {
                   return equal(x.cond, y.cond) && equal(x.body, y.body);
                 },
                 [](const auto&, const auto&) { return false; }},
      a.node, b.node);
}

inline void collect_pvars(const ProgramPtr& p, std::set<std::string>& out) {
  std::visit(overloaded{[&](const Program::Assign& n) {
                          out.insert(n.var);
                          collect_vars(n.value, out);
                        },
                        [&](const Program::Seq& n) {
                          collect_pvars(n.first, out);
                          collect_pvars(n.second, out);
                        },
                        [&](const Program::If& n) {
                          collect_vars(n.cond, out);
                          collect_pvars(n.then_branch, out);
                          collect_pvars(n.else_branch, out);
                        },
                        [&](const Program::While& n) {
                          collect_vars(n.cond, out);
                          collect_pvars(n.body, out);
                        }},
             p->node);
}

/// The ordered vector of program variables: every variable occurring in the
/// program, sorted by name.
inline std::vector<std::string> pvars(const ProgramPtr& p) {
  std::set<std::string> s;
  collect_pvars(p, s);
  return std::vector<std::string>(s.begin(), s.end());
}

// ---------------------------------------------------------------------------
// Labeled programs: a list of labeled commands plus a designated exit label.
// Labels are pairwise distinct. After an assignment control falls through to
// the next command in list order (the exit label after the last).
// ---------------------------------------------------------------------------

struct LabeledCommand {
  struct Assign {
    std::string var;
    TermPtr value;  // pure
  };
  struct CondGoto {
    BoolPtr cond;
    Nat target;
  };
  Nat label;
  std::variant<Assign, CondGoto> cmd;
};

struct LabeledProgram {
  std::vector<LabeledCommand> commands;
  Nat exit_label = 0;
};

inline bool operator==(const LabeledCommand& a, const LabeledCommand& b) {
  if (a.label != b.label || a.cmd.index() != b.cmd.index()) return false;
  return std::visit(
      overloaded{[](const LabeledCommand::Assign& x, const LabeledCommand::Assign& y) {
                   return x.var == y.var && equal(x.value, y.value);
                 },
                 [](const LabeledCommand::CondGoto& x, const LabeledCommand::CondGoto& y) {
                   return equal(x.cond, y.cond) && x.target == y.target;
                 },
                 [](const auto&, const auto&) { return false; }},
      a.cmd, b.cmd);
}

inline bool operator==(const LabeledProgram& a, const LabeledProgram& b) {
  return a.exit_label == b.exit_label && a.commands == b.commands;
}

inline std::vector<std::string> pvars(const LabeledProgram& p) {
  std::set<std::string> s;
  for (const auto& c : p.commands)
    std::visit(overloaded{[&](const LabeledCommand::Assign& n) {
                            s.insert(n.var);
                            collect_vars(n.value, s);
                          },
                          [&](const LabeledCommand::CondGoto& n) { collect_vars(n.cond, s); }},
               c.cmd);
  return std::vector<std::string>(s.begin(), s.end());
}

/// lab(P): command labels, the exit label, and every goto target.
inline std::set<Nat> labels_of(const LabeledProgram& p) {
  std::set<Nat> out;
  for (const auto& c : p.commands) {
    out.insert(c.label);
    if (const auto* g = std::get_if<LabeledCommand::CondGoto>(&c.cmd)) out.insert(g->target);
  }
  out.insert(p.exit_label);
  return out;
}

inline bool labels_distinct(const LabeledProgram& p) {
  std::set<Nat> seen;
  for (const auto& c : p.commands)
    if (!seen.insert(c.label).second) return false;
  return true;
}

}  // namespace arithvc

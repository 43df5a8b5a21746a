// Part of the arithvc project, licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sstream>
#include <string>

#include "arithvc/ast.hpp"

namespace arithvc {

// Precedence levels used by the printers. Parenthesization is minimal for
// the right-associative surface grammar (&, |, ->, <-> and ; associate to
// the right; + and * to the left).
namespace prec {
inline constexpr int iff = 1;
inline constexpr int imp = 2;
inline constexpr int f_or = 3;
inline constexpr int f_and = 4;
inline constexpr int f_not = 5;
inline constexpr int atom = 6;
inline constexpr int add = 1;
inline constexpr int mul = 2;
inline constexpr int t_atom = 3;
}  // namespace prec

namespace detail {

inline void print_term(std::ostream& os, const TermPtr& t, int min_prec) {
  long long num = term_as_numeral(t);
  if (num >= 0) {
    os << num;
    return;
  }
  std::visit(
      overloaded{[&](const Term::Zero&) { os << '0'; },
                 [&](const Term::One&) { os << '1'; },
                 [&](const Term::Var& n) { os << n.name; },
                 [&](const Term::Add& n) {
                   bool paren = prec::add < min_prec;
                   if (paren) os << '(';
                   print_term(os, n.lhs, prec::add);
                   os << " + ";
                   print_term(os, n.rhs, prec::add + 1);
                   if (paren) os << ')';
                 },
                 [&](const Term::Mul& n) {
                   bool paren = prec::mul < min_prec;
                   if (paren) os << '(';
                   print_term(os, n.lhs, prec::mul);
                   os << " * ";
                   print_term(os, n.rhs, prec::mul + 1);
                   if (paren) os << ')';
                 },
                 [&](const Term::Ext& n) {
                   os << ext_name(n.fn) << '(';
                   for (std::size_t i = 0; i < n.args.size(); ++i) {
                     if (i) os << ", ";
                     print_term(os, n.args[i], 0);
                   }
                   os << ')';
                 }},
      t->node);
}

inline void print_formula(std::ostream& os, const FormulaPtr& f, int min_prec) {
  std::visit(
      overloaded{[&](const Formula::Eq& n) {
                   print_term(os, n.lhs, 0);
                   os << " = ";
                   print_term(os, n.rhs, 0);
                 },
                 [&](const Formula::Lt& n) {
                   print_term(os, n.lhs, 0);
                   os << " < ";
                   print_term(os, n.rhs, 0);
                 },
                 [&](const Formula::Not& n) {
                   os << "!(";
                   print_formula(os, n.sub, 0);
                   os << ')';
                 },
                 [&](const Formula::And& n) {
                   bool paren = prec::f_and < min_prec;
                   if (paren) os << '(';
                   print_formula(os, n.lhs, prec::f_and + 1);
                   os << " & ";
                   print_formula(os, n.rhs, prec::f_and);
                   if (paren) os << ')';
                 },
                 [&](const Formula::Or& n) {
                   bool paren = prec::f_or < min_prec;
                   if (paren) os << '(';
                   print_formula(os, n.lhs, prec::f_or + 1);
                   os << " | ";
                   print_formula(os, n.rhs, prec::f_or);
                   if (paren) os << ')';
                 },
                 [&](const Formula::Imp& n) {
                   bool paren = prec::imp < min_prec;
                   if (paren) os << '(';
                   print_formula(os, n.lhs, prec::imp + 1);
                   os << " -> ";
                   print_formula(os, n.rhs, prec::imp);
                   if (paren) os << ')';
                 },
                 [&](const Formula::Iff& n) {
                   bool paren = prec::iff < min_prec;
                   if (paren) os << '(';
                   print_formula(os, n.lhs, prec::iff + 1);
                   os << " <-> ";
                   print_formula(os, n.rhs, prec::iff);
                   if (paren) os << ')';
                 },
                 [&](const Formula::Forall& n) {
                   bool paren = min_prec > 0;
                   if (paren) os << '(';
                   os << "forall " << n.var << ". ";
                   print_formula(os, n.body, 0);
                   if (paren) os << ')';
                 },
                 [&](const Formula::Exists& n) {
                   bool paren = min_prec > 0;
                   if (paren) os << '(';
                   os << "exists " << n.var << ". ";
                   print_formula(os, n.body, 0);
                   if (paren) os << ')';
                 },
                 [&](const Formula::BForall& n) {
                   bool paren = min_prec > 0;
                   if (paren) os << '(';
                   os << "forall " << n.var << " < ";
                   print_term(os, n.bound, prec::t_atom);
                   os << ". ";
                   print_formula(os, n.body, 0);
                   if (paren) os << ')';
                 },
                 [&](const Formula::BExists& n) {
                   bool paren = min_prec > 0;
                   if (paren) os << '(';
                   os << "exists " << n.var << " < ";
                   print_term(os, n.bound, prec::t_atom);
                   os << ". ";
                   print_formula(os, n.body, 0);
                   if (paren) os << ')';
                 }},
      f->node);
}

inline void print_bool(std::ostream& os, const BoolPtr& b, int min_prec) {
  std::visit(overloaded{[&](const BoolExpr::Lt& n) {
                          print_term(os, n.lhs, 0);
                          os << " < ";
                          print_term(os, n.rhs, 0);
                        },
                        [&](const BoolExpr::Not& n) {
                          os << "!(";
                          print_bool(os, n.sub, 0);
                          os << ')';
                        },
                        [&](const BoolExpr::Imp& n) {
                          bool paren = prec::imp < min_prec;
                          if (paren) os << '(';
                          print_bool(os, n.lhs, prec::imp + 1);
                          os << " -> ";
                          print_bool(os, n.rhs, prec::imp);
                          if (paren) os << ')';
                        }},
             b->node);
}

inline void print_program(std::ostream& os, const ProgramPtr& p) {
  std::visit(overloaded{[&](const Program::Assign& n) {
                          os << n.var << " := ";
                          print_term(os, n.value, 0);
                        },
                        [&](const Program::Seq& n) {
                          print_program(os, n.first);
                          os << "; ";
                          print_program(os, n.second);
                        },
                        [&](const Program::If& n) {
                          os << "if ";
                          print_bool(os, n.cond, 0);
                          os << " then ";
                          print_program(os, n.then_branch);
                          os << " else ";
                          print_program(os, n.else_branch);
                          os << " fi";
                        },
                        [&](const Program::While& n) {
                          os << "while ";
                          print_bool(os, n.cond, 0);
                          os << " do ";
                          print_program(os, n.body);
                          os << " od";
                        }},
             p->node);
}

}  // namespace detail

inline std::string pretty(const TermPtr& t) {
  std::ostringstream os;
  detail::print_term(os, t, 0);
  return os.str();
}

inline std::string pretty(const FormulaPtr& f) {
  std::ostringstream os;
  detail::print_formula(os, f, 0);
  return os.str();
}

inline std::string pretty(const BoolPtr& b) {
  std::ostringstream os;
  detail::print_bool(os, b, 0);
  return os.str();
}

inline std::string pretty(const ProgramPtr& p) {
  std::ostringstream os;
  detail::print_program(os, p);
  return os.str();
}

inline std::string pretty(const LabeledProgram& p) {
  std::ostringstream os;
  for (const auto& c : p.commands) {
    os << c.label << ": ";
    std::visit(overloaded{[&](const LabeledCommand::Assign& n) {
                            os << n.var << " := ";
                            detail::print_term(os, n.value, 0);
                          },
                          [&](const LabeledCommand::CondGoto& n) {
                            os << "if ";
                            detail::print_bool(os, n.cond, 0);
                            os << " goto " << n.target;
                          }},
               c.cmd);
    os << '\n';
  }
  os << p.exit_label << ": end\n";
  return os.str();
}

}  // namespace arithvc

// Part of the arithvc project, licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "arithvc/ast.hpp"

namespace arithvc {

using TermSubst = std::map<std::string, TermPtr>;

/// Generator of reserved fresh names. The `$` prefix is rejected by the
/// surface parsers, so generated names can never collide with or be captured
/// by anything read from input.
struct FreshNames {
  std::uint64_t counter = 0;
  std::string make(const std::string& base) {
    return "$" + base + std::to_string(++counter);
  }
};

inline TermPtr substitute(const TermPtr& t, const TermSubst& sub) {
  if (sub.empty()) return t;
  return std::visit(
      overloaded{[&](const Term::Var& n) {
                   auto it = sub.find(n.name);
                   return it == sub.end() ? t : it->second;
                 },
                 [&](const Term::Add& n) { return t_add(substitute(n.lhs, sub), substitute(n.rhs, sub)); },
                 [&](const Term::Mul& n) { return t_mul(substitute(n.lhs, sub), substitute(n.rhs, sub)); },
                 [&](const Term::Ext& n) {
                   std::vector<TermPtr> args;
                   args.reserve(n.args.size());
                   for (const auto& a : n.args) args.push_back(substitute(a, sub));
                   return t_ext(n.fn, std::move(args));
                 },
                 [&](const auto&) { return t; }},
      t->node);
}

namespace detail {

inline FormulaPtr subst_formula_impl(const FormulaPtr& f, const TermSubst& sub);

inline std::set<std::string> subst_range_vars(const TermSubst& sub) {
  std::set<std::string> vs;
  for (const auto& [k, v] : sub) collect_vars(v, vs);
  return vs;
}

// A name unused in `avoid`; keeps the base readable when possible.
inline std::string rename_away(const std::string& base, const std::set<std::string>& avoid) {
  std::string cand = base + "'";
  while (avoid.count(cand)) cand += "'";
  return cand;
}

template <class Binder, class Rebuild>
FormulaPtr subst_binder(const std::string& var, const FormulaPtr& body, const TermSubst& sub,
                        Rebuild rebuild) {
  TermSubst inner = sub;
  inner.erase(var);
  if (inner.empty()) return rebuild(var, body);
  std::set<std::string> range = subst_range_vars(inner);
  if (!range.count(var)) return rebuild(var, subst_formula_impl(body, inner));
  // The binder would capture a variable of a replacement term: rename it.
  std::set<std::string> avoid = range;
  collect_all_vars(body, avoid);
  for (const auto& [k, v] : inner) avoid.insert(k);
  std::string fresh = rename_away(var, avoid);
  inner[var] = t_var(fresh);
  return rebuild(fresh, subst_formula_impl(body, inner));
}

}  // namespace detail

/// Capture-avoiding simultaneous substitution of terms for free variables.
inline FormulaPtr substitute(const FormulaPtr& f, const TermSubst& sub) {
  if (sub.empty()) return f;
  return detail::subst_formula_impl(f, sub);
}

namespace detail {

inline FormulaPtr subst_formula_impl(const FormulaPtr& f, const TermSubst& sub) {
  return std::visit(
      overloaded{
          [&](const Formula::Eq& n) { return f_eq(substitute(n.lhs, sub), substitute(n.rhs, sub)); },
          [&](const Formula::Lt& n) { return f_lt(substitute(n.lhs, sub), substitute(n.rhs, sub)); },
          [&](const Formula::Not& n) { return f_not(subst_formula_impl(n.sub, sub)); },
          [&](const Formula::And& n) {
            return f_and(subst_formula_impl(n.lhs, sub), subst_formula_impl(n.rhs, sub));
          },
          [&](const Formula::Or& n) {
            return f_or(subst_formula_impl(n.lhs, sub), subst_formula_impl(n.rhs, sub));
          },
          [&](const Formula::Imp& n) {
            return f_imp(subst_formula_impl(n.lhs, sub), subst_formula_impl(n.rhs, sub));
          },
          [&](const Formula::Iff& n) {
            return f_iff(subst_formula_impl(n.lhs, sub), subst_formula_impl(n.rhs, sub));
          },
          [&](const Formula::Forall& n) {
            return subst_binder<Formula::Forall>(
                n.var, n.body, sub,
                [](const std::string& v, const FormulaPtr& b) { return f_forall(v, b); });
          },
          [&](const Formula::Exists& n) {
            return subst_binder<Formula::Exists>(
                n.var, n.body, sub,
                [](const std::string& v, const FormulaPtr& b) { return f_exists(v, b); });
          },
          [&](const Formula::BForall& n) {
            TermPtr bound = substitute(n.bound, sub);
            return subst_binder<Formula::BForall>(
                n.var, n.body, sub, [&](const std::string& v, const FormulaPtr& b) {
                  return f_bforall(v, bound, b);
                });
          },
          [&](const Formula::BExists& n) {
            TermPtr bound = substitute(n.bound, sub);
            return subst_binder<Formula::BExists>(
                n.var, n.body, sub, [&](const std::string& v, const FormulaPtr& b) {
                  return f_bexists(v, bound, b);
                });
          }},
      f->node);
}

}  // namespace detail

/// Renames program variables inside a boolean expression and embeds the
/// result as a formula.
inline FormulaPtr embed_subst(const BoolPtr& b, const TermSubst& sub) {
  return std::visit(
      overloaded{[&](const BoolExpr::Lt& n) {
                   return f_lt(substitute(n.lhs, sub), substitute(n.rhs, sub));
                 },
                 [&](const BoolExpr::Not& n) { return f_not(embed_subst(n.sub, sub)); },
                 [&](const BoolExpr::Imp& n) {
                   return f_imp(embed_subst(n.lhs, sub), embed_subst(n.rhs, sub));
                 }},
      b->node);
}

/// Universal closure over the free variables of f, sorted by name.
inline FormulaPtr close_universally(const FormulaPtr& f) {
  std::set<std::string> fv = free_vars(f);
  FormulaPtr out = f;
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) out = f_forall(*it, out);
  return out;
}

/// Picks n distinct readable names not colliding with `avoid`. Candidates
/// are base (for n == 1), then base1..baseN, then primed variants.
inline std::vector<std::string> pick_names(std::size_t n, const std::string& base,
                                           const std::set<std::string>& avoid) {
  std::vector<std::string> out;
  std::set<std::string> taken = avoid;
  for (std::size_t i = 0; i < n; ++i) {
    std::string cand = (n == 1) ? base : base + std::to_string(i + 1);
    while (taken.count(cand)) cand += "'";
    taken.insert(cand);
    out.push_back(cand);
  }
  return out;
}

}  // namespace arithvc

// Part of the arithvc project, licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "arithvc/ast.hpp"
#include "arithvc/nat.hpp"

namespace arithvc {

/// A valuation of first-order variables. Must cover the free variables of a
/// formula being evaluated.
using Valuation = std::map<std::string, Nat>;

/// Evaluates a term (extended functions included) under a valuation.
inline Nat eval_term(const TermPtr& t, const Valuation& v) {
  return std::visit(
      overloaded{[&](const Term::Zero&) { return Nat(0); },
                 [&](const Term::One&) { return Nat(1); },
                 [&](const Term::Var& n) {
                   auto it = v.find(n.name);
                   if (it == v.end())
                     throw std::invalid_argument("eval_term: unassigned variable " + n.name);
                   return it->second;
                 },
                 [&](const Term::Add& n) { return eval_term(n.lhs, v) + eval_term(n.rhs, v); },
                 [&](const Term::Mul& n) { return eval_term(n.lhs, v) * eval_term(n.rhs, v); },
                 [&](const Term::Ext& n) {
                   switch (n.fn) {
                     case ExtFn::Div: return div(eval_term(n.args[0], v), eval_term(n.args[1], v));
                     case ExtFn::Rem: return rem(eval_term(n.args[0], v), eval_term(n.args[1], v));
                     case ExtFn::Monus:
                       return monus(eval_term(n.args[0], v), eval_term(n.args[1], v));
                     case ExtFn::Sqrt: return isqrt(eval_term(n.args[0], v));
                     case ExtFn::Pair:
                       return pair(eval_term(n.args[0], v), eval_term(n.args[1], v));
                     case ExtFn::Left: return left(eval_term(n.args[0], v));
                     case ExtFn::Right: return right(eval_term(n.args[0], v));
                     case ExtFn::Beta:
                       return beta(eval_term(n.args[0], v), eval_term(n.args[1], v));
                   }
                   throw std::logic_error("eval_term: bad extended function");
                 }},
      t->node);
}

enum class Truth { True, False, Unknown };

struct EvalOutcome {
  Truth truth = Truth::Unknown;
  /// For Unknown: path of the quantifier node whose budget was exhausted.
  std::string at;

  bool is_true() const { return truth == Truth::True; }
  bool is_false() const { return truth == Truth::False; }
  bool is_unknown() const { return truth == Truth::Unknown; }
};

/// Witnesses for existential binders, keyed by evaluation path. Path
/// components: "L"/"R" for binary connectives, "N" under negation, "Q" under
/// a quantifier whose value came from a witness, "[v]" under a quantifier
/// instantiated with the value v by enumeration.
using WitnessMap = std::map<std::string, Nat>;

namespace path {
inline std::string child(const std::string& p, const char* c) {
  return p.empty() ? std::string(c) : p + "." + c;
}
inline std::string instance(const std::string& p, const Nat& v) {
  std::string c = "[" + v.str() + "]";
  return p.empty() ? c : p + "." + c;
}
}  // namespace path

inline constexpr std::uint64_t kDefaultBudget = 100000;

namespace detail {

class Evaluator {
 public:
  Evaluator(std::uint64_t budget, const WitnessMap* witnesses)
      : budget_(budget), witnesses_(witnesses) {}

  EvalOutcome eval(const FormulaPtr& f, Valuation& v, const std::string& p) {
    return std::visit(
        overloaded{
            [&](const Formula::Eq& n) {
              return result(eval_term(n.lhs, v) == eval_term(n.rhs, v));
            },
            [&](const Formula::Lt& n) {
              return result(eval_term(n.lhs, v) < eval_term(n.rhs, v));
            },
            [&](const Formula::Not& n) {
              EvalOutcome r = eval(n.sub, v, path::child(p, "N"));
              if (r.is_unknown()) return r;
              return result(r.is_false());
            },
            [&](const Formula::And& n) { return binary(n.lhs, n.rhs, v, p, /*is_and=*/true); },
            [&](const Formula::Or& n) { return binary(n.lhs, n.rhs, v, p, /*is_and=*/false); },
            [&](const Formula::Imp& n) {
              EvalOutcome a = eval(n.lhs, v, path::child(p, "L"));
              if (a.is_false()) return result(true);
              EvalOutcome b = eval(n.rhs, v, path::child(p, "R"));
              if (b.is_true()) return result(true);
              if (a.is_true() && b.is_false()) return result(false);
              return unknown(a.is_unknown() ? a.at : b.at);
            },
            [&](const Formula::Iff& n) {
              EvalOutcome a = eval(n.lhs, v, path::child(p, "L"));
              EvalOutcome b = eval(n.rhs, v, path::child(p, "R"));
              if (a.is_unknown()) return a;
              if (b.is_unknown()) return b;
              return result(a.truth == b.truth);
            },
            [&](const Formula::Forall& n) {
              // A universal over all of N can be refuted by a counterexample
              // but never verified by search.
              Nat bound = Nat(budget_) + 1;
              EvalOutcome r = enumerate(n.var, bound, n.body, v, p, /*universal=*/true);
              if (r.is_false()) return r;
              return unknown(p);
            },
            [&](const Formula::Exists& n) {
              if (witnesses_) {
                auto it = witnesses_->find(p);
                if (it != witnesses_->end()) {
                  ScopedBind bind(v, n.var, it->second);
                  return eval(n.body, v, path::child(p, "Q"));
                }
              }
              Nat bound = Nat(budget_) + 1;
              EvalOutcome r = enumerate(n.var, bound, n.body, v, p, /*universal=*/false);
              if (r.is_true()) return r;
              return unknown(p);
            },
            [&](const Formula::BForall& n) {
              Nat bound = eval_term(n.bound, v);
              return enumerate(n.var, bound, n.body, v, p, /*universal=*/true);
            },
            [&](const Formula::BExists& n) {
              Nat bound = eval_term(n.bound, v);
              return enumerate(n.var, bound, n.body, v, p, /*universal=*/false);
            }},
        f->node);
  }

 private:
  struct ScopedBind {
    ScopedBind(Valuation& v, const std::string& name, const Nat& val) : v_(v), name_(name) {
      auto it = v_.find(name_);
      if (it != v_.end()) {
        saved_ = it->second;
        had_ = true;
      }
      v_[name_] = val;
    }
    ~ScopedBind() {
      if (had_)
        v_[name_] = saved_;
      else
        v_.erase(name_);
    }
    Valuation& v_;
    std::string name_;
    Nat saved_;
    bool had_ = false;
  };

  static EvalOutcome result(bool b) { return {b ? Truth::True : Truth::False, {}}; }
  static EvalOutcome unknown(std::string at) { return {Truth::Unknown, std::move(at)}; }

  // Quantifier-free subformulas are cheap to decide; evaluating them first
  // lets conjunctions and disjunctions short-circuit before a quantified
  // sibling starts searching.
  bool quantifier_free(const FormulaPtr& f) {
    auto it = qf_cache_.find(f.get());
    if (it != qf_cache_.end()) return it->second;
    bool r = std::visit(
        overloaded{[&](const Formula::Not& n) { return quantifier_free(n.sub); },
                   [&](const Formula::And& n) {
                     return quantifier_free(n.lhs) && quantifier_free(n.rhs);
                   },
                   [&](const Formula::Or& n) {
                     return quantifier_free(n.lhs) && quantifier_free(n.rhs);
                   },
                   [&](const Formula::Imp& n) {
                     return quantifier_free(n.lhs) && quantifier_free(n.rhs);
                   },
                   [&](const Formula::Iff& n) {
                     return quantifier_free(n.lhs) && quantifier_free(n.rhs);
                   },
                   [&](const Formula::Forall&) { return false; },
                   [&](const Formula::Exists&) { return false; },
                   [&](const Formula::BForall&) { return false; },
                   [&](const Formula::BExists&) { return false; },
                   [&](const auto&) { return true; }},
        f->node);
    qf_cache_.emplace(f.get(), r);
    return r;
  }

  EvalOutcome binary(const FormulaPtr& lhs, const FormulaPtr& rhs, Valuation& v,
                     const std::string& p, bool is_and) {
    FormulaPtr first = lhs, second = rhs;
    const char *fc = "L", *sc = "R";
    if (!quantifier_free(lhs) && quantifier_free(rhs)) {
      std::swap(first, second);
      std::swap(fc, sc);
    }
    EvalOutcome a = eval(first, v, path::child(p, fc));
    if (is_and && a.is_false()) return result(false);
    if (!is_and && a.is_true()) return result(true);
    EvalOutcome b = eval(second, v, path::child(p, sc));
    if (is_and && b.is_false()) return result(false);
    if (!is_and && b.is_true()) return result(true);
    if (a.is_unknown()) return a;
    if (b.is_unknown()) return b;
    return result(is_and);
  }

  EvalOutcome enumerate(const std::string& var, const Nat& bound, const FormulaPtr& body,
                        Valuation& v, const std::string& p, bool universal) {
    std::string first_unknown;
    for (Nat k = 0; k < bound; ++k) {
      ScopedBind bind(v, var, k);
      EvalOutcome r = eval(body, v, path::instance(p, k));
      if (universal && r.is_false()) return r;
      if (!universal && r.is_true()) return r;
      if (r.is_unknown() && first_unknown.empty()) first_unknown = r.at;
    }
    if (!first_unknown.empty()) return unknown(first_unknown);
    return result(universal);
  }

  std::uint64_t budget_;
  const WitnessMap* witnesses_;
  std::unordered_map<const Formula*, bool> qf_cache_;
};

}  // namespace detail

inline void check_covers(const FormulaPtr& f, const Valuation& v) {
  for (const auto& name : free_vars(f))
    if (!v.count(name))
      throw std::invalid_argument("eval: valuation does not cover free variable " + name);
}

/// Decides a formula over the standard model. Bounded quantifiers enumerate
/// exactly below their bound; unbounded existentials search 0..budget and
/// report Unknown past it; unbounded universals can only be refuted.
inline EvalOutcome eval(const FormulaPtr& f, const Valuation& v,
                        std::uint64_t budget = kDefaultBudget) {
  check_covers(f, v);
  detail::Evaluator e(budget, nullptr);
  Valuation scratch = v;
  return e.eval(f, scratch, "");
}

/// Like eval, but each existential binder whose path appears in the witness
/// map is instantiated with the supplied value instead of searched; the
/// remaining unbounded quantifiers get a zero budget.
inline EvalOutcome eval_with_witnesses(const FormulaPtr& f, const Valuation& v,
                                       const WitnessMap& wm) {
  check_covers(f, v);
  detail::Evaluator e(0, &wm);
  Valuation scratch = v;
  return e.eval(f, scratch, "");
}

/// Prefixes every key of a witness map, for embedding witnesses of a
/// subformula into an enclosing formula's path space.
inline WitnessMap rebase_witnesses(const WitnessMap& wm, const std::string& prefix) {
  WitnessMap out;
  for (const auto& [k, val] : wm)
    out[k.empty() ? prefix : (prefix.empty() ? k : prefix + "." + k)] = val;
  return out;
}

struct EnumResult {
  std::set<std::vector<Nat>> sat;
  std::set<std::vector<Nat>> unknown;
};

/// All tuples over frees with components <= bound on which f evaluates True;
/// tuples the budgeted evaluator cannot decide are reported separately.
inline EnumResult enumerate_satisfying(const FormulaPtr& f, const std::vector<std::string>& frees,
                                       const Nat& bound, std::uint64_t budget = kDefaultBudget) {
  EnumResult out;
  std::vector<Nat> tuple(frees.size(), 0);
  Valuation v;
  while (true) {
    for (std::size_t i = 0; i < frees.size(); ++i) v[frees[i]] = tuple[i];
    EvalOutcome r = eval(f, v, budget);
    if (r.is_true())
      out.sat.insert(tuple);
    else if (r.is_unknown())
      out.unknown.insert(tuple);
    // Next tuple in lexicographic order.
    std::size_t i = 0;
    for (; i < tuple.size(); ++i) {
      if (tuple[i] < bound) {
        ++tuple[i];
        for (std::size_t j = 0; j < i; ++j) tuple[j] = 0;
        break;
      }
    }
    if (i == tuple.size()) break;
    if (tuple.empty()) break;
  }
  return out;
}

}  // namespace arithvc

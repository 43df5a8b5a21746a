// Part of the arithvc project, licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arithvc/ast.hpp"
#include "arithvc/subst.hpp"

namespace arithvc {

// ---------------------------------------------------------------------------
// Program-to-formula translation. alpha(S) constructs a formula over the
// program variables x1..xn and fresh outputs y1..yn that holds in the
// standard model exactly on the input-output pairs of S:
//   assignment   y_i = E(x) joined with y_j = x_j for j != i
//   composition  ∃z (alpha1(x,z) ∧ alpha2(z,y))
//   conditional  (B(x) ∧ alpha1) ∨ (¬B(x) ∧ alpha2)
//   loop         ∃i (∃w C(i,w,x,y) ∧ ¬B(y)), where C says the sequence
//                decoded from w starts at x, steps through the body relation
//                with the guard true, and reaches y at position i.
// The loop case codes whole variable vectors positionwise: position j of the
// sequence is the packed vector decoded via beta/L/R.
// ---------------------------------------------------------------------------

struct AlphaResult {
  FormulaPtr alpha;
  std::vector<std::string> xvars;
  std::vector<std::string> yvars;
  std::uint64_t fresh_counter = 0;
};

namespace detail {

/// Conjunction of componentwise equations, folded to the right.
inline FormulaPtr vec_eq(const std::vector<TermPtr>& lhs, const std::vector<TermPtr>& rhs) {
  FormulaPtr acc = f_eq(lhs.back(), rhs.back());
  for (std::size_t k = lhs.size() - 1; k-- > 0;) acc = f_and(f_eq(lhs[k], rhs[k]), acc);
  return acc;
}

class AlphaBuilder {
 public:
  AlphaBuilder(std::vector<std::string> progvars, FreshNames fresh = {})
      : progvars_(std::move(progvars)), fresh_(fresh) {}

  std::size_t arity() const { return progvars_.size(); }
  const FreshNames& fresh_state() const { return fresh_; }

  TermSubst to_subst(const std::vector<TermPtr>& terms) const {
    TermSubst sub;
    for (std::size_t k = 0; k < progvars_.size(); ++k) sub[progvars_[k]] = terms[k];
    return sub;
  }

  /// Projection terms of the vector coded at position `idx` of code `w`:
  /// beta(w, idx) unpacked into arity() components (identity at arity 1).
  std::vector<TermPtr> unpack_at(const TermPtr& w, const TermPtr& idx) const {
    std::size_t n = arity();
    TermPtr packed = t_ext(ExtFn::Beta, {w, idx});
    std::vector<TermPtr> out;
    out.reserve(n);
    TermPtr cur = packed;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      out.push_back(t_ext(ExtFn::Left, {cur}));
      cur = t_ext(ExtFn::Right, {cur});
    }
    out.push_back(cur);
    return out;
  }

  FormulaPtr build(const ProgramPtr& s, const std::vector<TermPtr>& in,
                   const std::vector<TermPtr>& out) {
    return std::visit(
        overloaded{
            [&](const Program::Assign& n) {
              std::size_t idx = index_of(n.var);
              std::vector<FormulaPtr> conj;
              conj.push_back(f_eq(out[idx], substitute(n.value, to_subst(in))));
              for (std::size_t j = 0; j < arity(); ++j)
                if (j != idx) conj.push_back(f_eq(out[j], in[j]));
              FormulaPtr acc = conj.back();
              for (std::size_t k = conj.size() - 1; k-- > 0;) acc = f_and(conj[k], acc);
              return acc;
            },
            [&](const Program::Seq& n) {
              std::vector<std::string> zn;
              std::vector<TermPtr> zt;
              for (std::size_t k = 0; k < arity(); ++k) {
                zn.push_back(fresh_.make("z"));
                zt.push_back(t_var(zn.back()));
              }
              FormulaPtr body = f_and(build(n.first, in, zt), build(n.second, zt, out));
              for (std::size_t k = arity(); k-- > 0;) body = f_exists(zn[k], body);
              return body;
            },
            [&](const Program::If& n) {
              FormulaPtr guard = embed_subst(n.cond, to_subst(in));
              return f_or(f_and(guard, build(n.then_branch, in, out)),
                          f_and(f_not(guard), build(n.else_branch, in, out)));
            },
            [&](const Program::While& n) {
              std::string ivar = fresh_.make("i");
              FormulaPtr star = build_star(n, ivar, in, out);
              FormulaPtr exit_guard = f_not(embed_subst(n.cond, to_subst(out)));
              return f_exists(ivar, f_and(star, exit_guard));
            }},
        s->node);
  }

  /// ∃w C(i,w,in,out) for a loop node.
  FormulaPtr build_star(const Program::While& loop, const std::string& ivar,
                        const std::vector<TermPtr>& in, const std::vector<TermPtr>& out) {
    std::string wvar = fresh_.make("w");
    std::string jvar = fresh_.make("j");
    TermPtr w = t_var(wvar);
    std::vector<TermPtr> unp0 = unpack_at(w, t_zero());
    std::vector<TermPtr> unpj = unpack_at(w, t_var(jvar));
    std::vector<TermPtr> unpj1 = unpack_at(w, t_add(t_var(jvar), t_one()));
    std::vector<TermPtr> unpi = unpack_at(w, t_var(ivar));
    FormulaPtr step = f_and(embed_subst(loop.cond, to_subst(unpj)), build(loop.body, unpj, unpj1));
    FormulaPtr c = f_and(vec_eq(in, unp0),
                         f_and(f_bforall(jvar, t_var(ivar), step), vec_eq(out, unpi)));
    return f_exists(wvar, c);
  }

  /// Trace-prefix formula: some code w decodes to a sequence that starts at
  /// `x`, steps through the body relation below `len`, and reaches `z` at
  /// position `len`.
  FormulaPtr build_phi(const ProgramPtr& body, const std::vector<TermPtr>& x, const TermPtr& len,
                       const std::vector<TermPtr>& z) {
    std::string wvar = fresh_.make("w");
    std::string jvar = fresh_.make("j");
    TermPtr w = t_var(wvar);
    std::vector<TermPtr> unp0 = unpack_at(w, t_zero());
    std::vector<TermPtr> unpj = unpack_at(w, t_var(jvar));
    std::vector<TermPtr> unpj1 = unpack_at(w, t_add(t_var(jvar), t_one()));
    std::vector<TermPtr> unplen = unpack_at(w, len);
    FormulaPtr mid = f_bforall(jvar, len, build(body, unpj, unpj1));
    return f_exists(wvar, f_and(vec_eq(unp0, x), f_and(mid, vec_eq(unplen, z))));
  }

 private:
  std::size_t index_of(const std::string& var) const {
    for (std::size_t k = 0; k < progvars_.size(); ++k)
      if (progvars_[k] == var) return k;
    throw std::invalid_argument("program variable outside the declared vector: " + var);
  }

  std::vector<std::string> progvars_;
  FreshNames fresh_;
};

inline std::vector<TermPtr> vars_to_terms(const std::vector<std::string>& names) {
  std::vector<TermPtr> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(t_var(n));
  return out;
}

}  // namespace detail

/// Constructs the input-output formula of S over x = pvars(S) and a fresh
/// disjoint output vector y.
inline AlphaResult alpha(const ProgramPtr& s) {
  std::vector<std::string> xv = pvars(s);
  std::set<std::string> avoid(xv.begin(), xv.end());
  std::vector<std::string> yv = pick_names(xv.size(), "y", avoid);
  detail::AlphaBuilder b(xv);
  FormulaPtr f = b.build(s, detail::vars_to_terms(xv), detail::vars_to_terms(yv));
  return {f, xv, yv, b.fresh_state().counter};
}

/// phi for a loop body: relates an input vector, a length, and the vector
/// reached after that many body steps. `progvars` names the variable each
/// vector position denotes; it defaults to pvars(body).
inline FormulaPtr phi(const ProgramPtr& body, const std::vector<std::string>& xvec,
                      const std::string& yvar, const std::vector<std::string>& zvec,
                      std::vector<std::string> progvars = {}) {
  if (progvars.empty()) progvars = pvars(body);
  if (xvec.size() != progvars.size() || zvec.size() != progvars.size())
    throw std::invalid_argument("phi: vector arity mismatch");
  detail::AlphaBuilder b(progvars);
  return b.build_phi(body, detail::vars_to_terms(xvec), t_var(yvar),
                     detail::vars_to_terms(zvec));
}

/// alpha_star of a loop: ∃w C(i,w,x,y) with the iteration count free as
/// `ivar`. S must be a While program.
inline FormulaPtr alpha_star(const ProgramPtr& s, const std::string& ivar,
                             const std::vector<std::string>& xvec,
                             const std::vector<std::string>& yvec,
                             std::vector<std::string> progvars = {}) {
  const auto* loop = std::get_if<Program::While>(&s->node);
  if (!loop) throw std::invalid_argument("alpha_star: program is not a while loop");
  if (progvars.empty()) progvars = pvars(s);
  if (xvec.size() != progvars.size() || yvec.size() != progvars.size())
    throw std::invalid_argument("alpha_star: vector arity mismatch");
  detail::AlphaBuilder b(progvars);
  return b.build_star(*loop, ivar, detail::vars_to_terms(xvec), detail::vars_to_terms(yvec));
}

// ---------------------------------------------------------------------------
// Syntactic classification.
// ---------------------------------------------------------------------------

enum class FormulaClass { Delta0, Sigma1, GeneralizedSigma1, Other };

inline bool is_delta0(const FormulaPtr& f) {
  return std::visit(
      overloaded{[](const Formula::Eq&) { return true; },
                 [](const Formula::Lt&) { return true; },
                 [](const Formula::Not& n) { return is_delta0(n.sub); },
                 [](const Formula::And& n) { return is_delta0(n.lhs) && is_delta0(n.rhs); },
                 [](const Formula::Or& n) { return is_delta0(n.lhs) && is_delta0(n.rhs); },
                 [](const Formula::Imp& n) { return is_delta0(n.lhs) && is_delta0(n.rhs); },
                 [](const Formula::Iff& n) { return is_delta0(n.lhs) && is_delta0(n.rhs); },
                 [](const Formula::Forall&) { return false; },
                 [](const Formula::Exists&) { return false; },
                 [](const Formula::BForall& n) { return is_delta0(n.body); },
                 [](const Formula::BExists& n) { return is_delta0(n.body); }},
      f->node);
}

inline bool is_generalized_sigma1(const FormulaPtr& f) {
  if (is_delta0(f)) return true;
  return std::visit(
      overloaded{[](const Formula::And& n) {
                   return is_generalized_sigma1(n.lhs) && is_generalized_sigma1(n.rhs);
                 },
                 [](const Formula::Or& n) {
                   return is_generalized_sigma1(n.lhs) && is_generalized_sigma1(n.rhs);
                 },
                 [](const Formula::Exists& n) { return is_generalized_sigma1(n.body); },
                 [](const Formula::BForall& n) { return is_generalized_sigma1(n.body); },
                 [](const Formula::BExists& n) { return is_generalized_sigma1(n.body); },
                 [](const auto&) { return false; }},
      f->node);
}

inline FormulaClass classify(const FormulaPtr& f) {
  if (is_delta0(f)) return FormulaClass::Delta0;
  if (const auto* ex = std::get_if<Formula::Exists>(&f->node))
    if (is_delta0(ex->body)) return FormulaClass::Sigma1;
  if (is_generalized_sigma1(f)) return FormulaClass::GeneralizedSigma1;
  return FormulaClass::Other;
}

inline const char* to_string(FormulaClass c) {
  switch (c) {
    case FormulaClass::Delta0: return "Delta0";
    case FormulaClass::Sigma1: return "Sigma1";
    case FormulaClass::GeneralizedSigma1: return "GeneralizedSigma1";
    case FormulaClass::Other: return "Other";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Elimination of extended function symbols. Every occurrence is replaced by
// a bounded existential constrained by the function's defining formula; the
// result is over the base signature and equivalent over N.
// ---------------------------------------------------------------------------

namespace detail {

inline FormulaPtr le(const TermPtr& a, const TermPtr& b) { return f_lt(a, t_add(b, t_one())); }

/// c + c = (a+b+1)(a+b) + (b+b): the graph of c = pair(a, b).
inline FormulaPtr pair_graph(const TermPtr& a, const TermPtr& b, const TermPtr& c) {
  TermPtr s = t_add(a, b);
  return f_eq(t_add(c, c), t_add(t_mul(t_add(s, t_one()), s), t_add(b, b)));
}

/// Graph of v = rem(x, y): either y > 0 and x = y*q + v with v < y for some
/// q <= x, or y = 0 and v = x.
inline FormulaPtr rem_graph(const TermPtr& x, const TermPtr& y, const TermPtr& v,
                            FreshNames& fresh) {
  std::string q = fresh.make("e");
  FormulaPtr pos =
      f_and(f_lt(t_zero(), y),
            f_bexists(q, t_add(x, t_one()),
                      f_and(f_eq(t_add(t_mul(y, t_var(q)), v), x), f_lt(v, y))));
  FormulaPtr zero = f_and(f_eq(y, t_zero()), f_eq(v, x));
  return f_or(pos, zero);
}

/// Defining formula of v = fn(args) over the base signature.
inline FormulaPtr ext_graph(ExtFn fn, const std::vector<TermPtr>& args, const TermPtr& v,
                            FreshNames& fresh) {
  switch (fn) {
    case ExtFn::Div: {
      const TermPtr &x = args[0], &y = args[1];
      FormulaPtr pos = f_and(f_lt(t_zero(), y),
                             f_and(le(t_mul(v, y), x), f_lt(x, t_mul(t_add(v, t_one()), y))));
      FormulaPtr zero = f_and(f_eq(y, t_zero()), f_eq(v, t_zero()));
      return f_or(pos, zero);
    }
    case ExtFn::Rem:
      return rem_graph(args[0], args[1], v, fresh);
    case ExtFn::Monus: {
      const TermPtr &x = args[0], &y = args[1];
      return f_or(f_and(le(y, x), f_eq(x, t_add(y, v))),
                  f_and(f_lt(x, y), f_eq(v, t_zero())));
    }
    case ExtFn::Sqrt: {
      const TermPtr& x = args[0];
      return f_and(le(t_mul(v, v), x), f_lt(x, t_mul(t_add(v, t_one()), t_add(v, t_one()))));
    }
    case ExtFn::Pair:
      return pair_graph(args[0], args[1], v);
    case ExtFn::Left: {
      std::string r = fresh.make("e");
      return f_bexists(r, t_add(args[0], t_one()), pair_graph(v, t_var(r), args[0]));
    }
    case ExtFn::Right: {
      std::string l = fresh.make("e");
      return f_bexists(l, t_add(args[0], t_one()), pair_graph(t_var(l), v, args[0]));
    }
    case ExtFn::Beta: {
      const TermPtr &w = args[0], &idx = args[1];
      std::string l = fresh.make("e");
      std::string r = fresh.make("e");
      TermPtr modulus = t_add(t_mul(t_var(r), t_add(idx, t_one())), t_one());
      FormulaPtr inner = f_and(pair_graph(t_var(l), t_var(r), w),
                               rem_graph(t_var(l), modulus, v, fresh));
      return f_bexists(l, t_add(w, t_one()), f_bexists(r, t_add(w, t_one()), inner));
    }
  }
  throw std::logic_error("ext_graph: bad function");
}

/// A pure upper bound on fn(args) in terms of the (pure) arguments.
inline TermPtr ext_bound(ExtFn fn, const std::vector<TermPtr>& args) {
  switch (fn) {
    case ExtFn::Pair: {
      TermPtr s = t_add(args[0], args[1]);
      return t_add(t_mul(t_add(s, t_one()), s), args[1]);
    }
    default:
      return args[0];  // div, rem, monus, sqrt, L, R, beta are bounded by arg 0
  }
}

struct LiftedAux {
  std::string var;
  TermPtr bound_plus_one;
  FormulaPtr guard;
};

inline TermPtr lift_term(const TermPtr& t, std::vector<LiftedAux>& aux, FreshNames& fresh) {
  return std::visit(
      overloaded{[&](const Term::Add& n) {
                   return t_add(lift_term(n.lhs, aux, fresh), lift_term(n.rhs, aux, fresh));
                 },
                 [&](const Term::Mul& n) {
                   return t_mul(lift_term(n.lhs, aux, fresh), lift_term(n.rhs, aux, fresh));
                 },
                 [&](const Term::Ext& n) {
                   std::vector<TermPtr> pargs;
                   pargs.reserve(n.args.size());
                   for (const auto& a : n.args) pargs.push_back(lift_term(a, aux, fresh));
                   std::string v = fresh.make("e");
                   aux.push_back({v, t_add(ext_bound(n.fn, pargs), t_one()),
                                  ext_graph(n.fn, pargs, t_var(v), fresh)});
                   return t_var(v);
                 },
                 [&](const auto&) { return t; }},
      t->node);
}

inline FormulaPtr wrap_aux(const std::vector<LiftedAux>& aux, FormulaPtr core) {
  for (std::size_t k = aux.size(); k-- > 0;)
    core = f_bexists(aux[k].var, aux[k].bound_plus_one, f_and(aux[k].guard, core));
  return core;
}

inline FormulaPtr eliminate_atom(const TermPtr& lhs, const TermPtr& rhs, bool is_eq,
                                 FreshNames& fresh) {
  std::vector<LiftedAux> aux;
  TermPtr l = lift_term(lhs, aux, fresh);
  TermPtr r = lift_term(rhs, aux, fresh);
  FormulaPtr core = is_eq ? f_eq(l, r) : f_lt(l, r);
  return wrap_aux(aux, core);
}

inline FormulaPtr eliminate_impl(const FormulaPtr& f, FreshNames& fresh) {
  return std::visit(
      overloaded{
          [&](const Formula::Eq& n) {
            if (pure(n.lhs) && pure(n.rhs)) return f;
            return eliminate_atom(n.lhs, n.rhs, true, fresh);
          },
          [&](const Formula::Lt& n) {
            if (pure(n.lhs) && pure(n.rhs)) return f;
            return eliminate_atom(n.lhs, n.rhs, false, fresh);
          },
          [&](const Formula::Not& n) { return f_not(eliminate_impl(n.sub, fresh)); },
          [&](const Formula::And& n) {
            return f_and(eliminate_impl(n.lhs, fresh), eliminate_impl(n.rhs, fresh));
          },
          [&](const Formula::Or& n) {
            return f_or(eliminate_impl(n.lhs, fresh), eliminate_impl(n.rhs, fresh));
          },
          [&](const Formula::Imp& n) {
            return f_imp(eliminate_impl(n.lhs, fresh), eliminate_impl(n.rhs, fresh));
          },
          [&](const Formula::Iff& n) {
            return f_iff(eliminate_impl(n.lhs, fresh), eliminate_impl(n.rhs, fresh));
          },
          [&](const Formula::Forall& n) {
            return f_forall(n.var, eliminate_impl(n.body, fresh));
          },
          [&](const Formula::Exists& n) {
            return f_exists(n.var, eliminate_impl(n.body, fresh));
          },
          [&](const Formula::BForall& n) {
            FormulaPtr body = eliminate_impl(n.body, fresh);
            if (pure(n.bound)) return f_bforall(n.var, n.bound, body);
            std::vector<LiftedAux> aux;
            TermPtr b = lift_term(n.bound, aux, fresh);
            return wrap_aux(aux, f_bforall(n.var, b, body));
          },
          [&](const Formula::BExists& n) {
            FormulaPtr body = eliminate_impl(n.body, fresh);
            if (pure(n.bound)) return f_bexists(n.var, n.bound, body);
            std::vector<LiftedAux> aux;
            TermPtr b = lift_term(n.bound, aux, fresh);
            return wrap_aux(aux, f_bexists(n.var, b, body));
          }},
      f->node);
}

/// Fresh-name state safe against $-names already present in f.
inline FreshNames fresh_for(const FormulaPtr& f) {
  std::set<std::string> names;
  collect_all_vars(f, names);
  FreshNames fn;
  for (const auto& n : names) {
    if (n.empty() || n[0] != '$') continue;
    std::size_t k = n.size();
    while (k > 1 && std::isdigit(static_cast<unsigned char>(n[k - 1]))) --k;
    if (k < n.size()) {
      std::uint64_t suffix = std::stoull(n.substr(k));
      if (suffix > fn.counter) fn.counter = suffix;
    }
  }
  return fn;
}

}  // namespace detail

/// Replaces every extended-function occurrence with a bounded existential
/// constrained by its defining formula. The result has no extended symbols
/// and is equivalent over N; it is Delta0 whenever the input is.
inline FormulaPtr eliminate_extended(const FormulaPtr& f) {
  FreshNames fresh = detail::fresh_for(f);
  return detail::eliminate_impl(f, fresh);
}

// ---------------------------------------------------------------------------
// Sigma1 normalization of generalized Sigma1 formulas:
//   - nested existentials collapse through the pairing bijection,
//   - a bounded universal over an existential collects its witnesses into a
//     beta-coded sequence,
//   - disjunctions share one witness variable, conjunctions pair theirs.
// ---------------------------------------------------------------------------

namespace detail {

struct NormResult {
  std::optional<std::string> var;  // outer existential, absent for Delta0
  FormulaPtr matrix;
};

inline NormResult normalize_sigma1(const FormulaPtr& f, FreshNames& fresh);

inline NormResult norm_pair_collapse(const std::string& v1, const FormulaPtr& m1,
                                     const std::string& v2, const FormulaPtr& m2, bool disjunct,
                                     FreshNames& fresh) {
  if (disjunct) {
    // ∃a F ∨ ∃b G  ≡  ∃c (F[c/a] ∨ G[c/b])
    std::string c = fresh.make("s");
    return {c, f_or(substitute(m1, {{v1, t_var(c)}}), substitute(m2, {{v2, t_var(c)}}))};
  }
  // ∃a F ∧ ∃b G  ≡  ∃w ∃a<=w ∃b<=w (w = <a,b> ∧ F ∧ G)
  std::string w = fresh.make("s");
  std::string a = fresh.make("s");
  std::string b = fresh.make("s");
  TermPtr wp1 = t_add(t_var(w), t_one());
  FormulaPtr body = f_and(pair_graph(t_var(a), t_var(b), t_var(w)),
                          f_and(substitute(m1, {{v1, t_var(a)}}),
                                substitute(m2, {{v2, t_var(b)}})));
  return {w, f_bexists(a, wp1, f_bexists(b, wp1, body))};
}

inline NormResult norm_binary(const FormulaPtr& lhs, const FormulaPtr& rhs, bool disjunct,
                              FreshNames& fresh) {
  NormResult a = normalize_sigma1(lhs, fresh);
  NormResult b = normalize_sigma1(rhs, fresh);
  auto join = [&](FormulaPtr x, FormulaPtr y) {
    return disjunct ? f_or(std::move(x), std::move(y)) : f_and(std::move(x), std::move(y));
  };
  if (!a.var && !b.var) return {std::nullopt, join(a.matrix, b.matrix)};
  if (a.var && !b.var) {
    std::string c = fresh.make("s");
    return {c, join(substitute(a.matrix, {{*a.var, t_var(c)}}), b.matrix)};
  }
  if (!a.var && b.var) {
    std::string c = fresh.make("s");
    return {c, join(a.matrix, substitute(b.matrix, {{*b.var, t_var(c)}}))};
  }
  return norm_pair_collapse(*a.var, a.matrix, *b.var, b.matrix, disjunct, fresh);
}

inline NormResult normalize_sigma1(const FormulaPtr& f, FreshNames& fresh) {
  if (is_delta0(f)) return {std::nullopt, f};
  return std::visit(
      overloaded{
          [&](const Formula::And& n) { return norm_binary(n.lhs, n.rhs, false, fresh); },
          [&](const Formula::Or& n) { return norm_binary(n.lhs, n.rhs, true, fresh); },
          [&](const Formula::Exists& n) -> NormResult {
            NormResult g = normalize_sigma1(n.body, fresh);
            if (!g.var) return {n.var, g.matrix};
            if (*g.var == n.var) return g;  // outer binder is vacuous
            // ∃x ∃b M ≡ ∃w ∃x<=w ∃b<=w (w = <x,b> ∧ M), left component first
            std::string w = fresh.make("s");
            std::string a = fresh.make("s");
            std::string b = fresh.make("s");
            TermPtr wp1 = t_add(t_var(w), t_one());
            FormulaPtr m =
                substitute(g.matrix, {{n.var, t_var(a)}, {*g.var, t_var(b)}});
            return {w, f_bexists(a, wp1,
                                 f_bexists(b, wp1,
                                           f_and(pair_graph(t_var(a), t_var(b), t_var(w)), m)))};
          },
          [&](const Formula::BExists& n) -> NormResult {
            NormResult g = normalize_sigma1(n.body, fresh);
            if (!g.var) return {std::nullopt, f_bexists(n.var, n.bound, g.matrix)};
            std::string c = fresh.make("s");
            FormulaPtr m = substitute(g.matrix, {{*g.var, t_var(c)}});
            return {c, f_bexists(n.var, n.bound, m)};
          },
          [&](const Formula::BForall& n) -> NormResult {
            NormResult g = normalize_sigma1(n.body, fresh);
            if (!g.var) return {std::nullopt, f_bforall(n.var, n.bound, g.matrix)};
            // ∀x<t ∃y M ≡ ∃w ∀x<t ∃y<=w (y = beta(w,x) ∧ M): the witnesses
            // below t are collected into one coded sequence.
            std::string w = fresh.make("s");
            std::string y = fresh.make("s");
            FormulaPtr m = substitute(g.matrix, {{*g.var, t_var(y)}});
            FormulaPtr graph =
                ext_graph(ExtFn::Beta, {t_var(w), t_var(n.var)}, t_var(y), fresh);
            FormulaPtr inner =
                f_bexists(y, t_add(t_var(w), t_one()), f_and(graph, m));
            return {w, f_bforall(n.var, n.bound, inner)};
          },
          [&](const auto&) -> NormResult {
            throw std::invalid_argument("to_sigma1: formula is not generalized Sigma1");
          }},
      f->node);
}

}  // namespace detail

/// Normalizes a generalized Sigma1 formula to the form ∃x F with F Delta0,
/// equivalent over N. Throws on formulas that classify as Other.
inline FormulaPtr to_sigma1(const FormulaPtr& f) {
  if (classify(f) == FormulaClass::Other)
    throw std::invalid_argument("to_sigma1: formula is not generalized Sigma1");
  FreshNames fresh = detail::fresh_for(f);
  detail::NormResult n = detail::normalize_sigma1(f, fresh);
  if (!n.var) {
    std::string d = fresh.make("s");
    return f_exists(d, f_and(f_eq(t_var(d), t_var(d)), n.matrix));
  }
  return f_exists(*n.var, n.matrix);
}

}  // namespace arithvc

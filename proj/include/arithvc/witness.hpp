// Part of the arithvc project, licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "arithvc/evaluator.hpp"
#include "arithvc/interpreter.hpp"
#include "arithvc/translator.hpp"

namespace arithvc {

class trace_mismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Builds witness maps for the existential binders of translated formulas
/// out of execution traces, walking the trace in step with the formula shape
/// the translator produces. Values at each loop are the iteration count and
/// the coded sequence of loop-head vectors.
class WitnessRecorder {
 public:
  explicit WitnessRecorder(std::vector<std::string> progvars) : vars_(std::move(progvars)) {}

  WitnessMap take() { return std::move(wm_); }

  /// Walks subprogram s under trace node t from vector `in`; records
  /// witnesses for every existential at or below path `p` and returns the
  /// resulting vector.
  std::vector<Nat> record_program(const ProgramPtr& s, const TraceNodePtr& t,
                                  const std::vector<Nat>& in, const std::string& p) {
    return std::visit(
        overloaded{
            [&](const Program::Assign& n) {
              const auto* ta = std::get_if<TraceNode::Assign>(&t->node);
              if (!ta) throw trace_mismatch("trace does not match program: assignment expected");
              std::vector<Nat> out = in;
              out[index_of(n.var)] = eval_term_pure(n.value, to_state(in));
              return out;
            },
            [&](const Program::Seq& n) {
              const auto* ts = std::get_if<TraceNode::Seq>(&t->node);
              if (!ts) throw trace_mismatch("trace does not match program: sequence expected");
              // The intermediate-state existentials form a nest of arity()
              // binders above the conjunction of the two halves.
              std::string q = p;
              for (std::size_t k = 0; k < vars_.size(); ++k) q = path::child(q, "Q");
              std::vector<Nat> mid =
                  record_program(n.first, ts->first, in, path::child(q, "L"));
              std::string zp = p;
              for (std::size_t k = 0; k < vars_.size(); ++k) {
                wm_[zp] = mid[k];
                zp = path::child(zp, "Q");
              }
              return record_program(n.second, ts->second, mid, path::child(q, "R"));
            },
            [&](const Program::If& n) {
              const auto* ti = std::get_if<TraceNode::If>(&t->node);
              if (!ti) throw trace_mismatch("trace does not match program: conditional expected");
              bool c = eval_bool(n.cond, to_state(in));
              if (c != ti->took_then)
                throw trace_mismatch("trace does not match program: branch disagrees with guard");
              std::string branch =
                  c ? path::child(path::child(p, "L"), "R") : path::child(path::child(p, "R"), "R");
              return record_program(c ? n.then_branch : n.else_branch, ti->taken, in, branch);
            },
            [&](const Program::While& n) {
              const auto* tw = std::get_if<TraceNode::While>(&t->node);
              if (!tw) throw trace_mismatch("trace does not match program: loop expected");
              if (tw->head_vectors.size() != tw->body_traces.size() + 1 ||
                  tw->head_vectors.empty() || tw->head_vectors.front() != in)
                throw trace_mismatch("trace does not match program: bad loop head sequence");
              Nat iterations = tw->body_traces.size();
              wm_[p] = iterations;
              record_star(n, tw->head_vectors, tw->body_traces,
                          path::child(path::child(p, "Q"), "L"));
              return tw->head_vectors.back();
            }},
        s->node);
  }

  /// Records the code witness and the per-iteration body witnesses for the
  /// ∃w part of a loop formula rooted at `star_path`.
  void record_star(const Program::While& loop, const std::vector<std::vector<Nat>>& heads,
                   const std::vector<TraceNodePtr>& bodies, const std::string& star_path) {
    std::vector<Nat> packed;
    packed.reserve(heads.size());
    for (const auto& h : heads) packed.push_back(pack_vec(h));
    wm_[star_path] = encode_seq(packed);
    // C = (in = unp0) ∧ ((∀j<i step) ∧ (out = unpi)); the bounded universal
    // sits at C.R.L and each instance j wraps the guard and the body relation.
    std::string c = path::child(star_path, "Q");
    std::string mid = path::child(path::child(c, "R"), "L");
    for (std::size_t j = 0; j < bodies.size(); ++j) {
      if (!eval_bool(loop.cond, to_state(heads[j])))
        throw trace_mismatch("trace does not match program: guard false mid-loop");
      std::string inst = path::child(path::instance(mid, Nat(j)), "R");
      std::vector<Nat> out = record_program(loop.body, bodies[j], heads[j], inst);
      if (out != heads[j + 1])
        throw trace_mismatch("trace does not match program: body step disagrees");
    }
  }

 private:
  State to_state(const std::vector<Nat>& vec) const {
    State s;
    for (std::size_t k = 0; k < vars_.size(); ++k) s[vars_[k]] = vec[k];
    return s;
  }

  std::size_t index_of(const std::string& var) const {
    for (std::size_t k = 0; k < vars_.size(); ++k)
      if (vars_[k] == var) return k;
    throw trace_mismatch("variable outside program vector: " + var);
  }

  std::vector<std::string> vars_;
  WitnessMap wm_;
};

/// Constructs witnesses for alpha(S) at the input/output vectors a and b of
/// a completed run: intermediate states for compositions, iteration counts
/// and coded head sequences for loops. eval_with_witnesses(alpha, ...) is
/// True on the result.
inline WitnessMap witness_alpha(const ProgramPtr& s, const Trace& trace, const std::vector<Nat>& a,
                                const std::vector<Nat>& b) {
  if (!trace.program || !equal(trace.program, s))
    throw trace_mismatch("trace does not match program");
  WitnessRecorder rec(trace.vars);
  std::vector<Nat> out = rec.record_program(s, trace.root, a, "");
  if (out != b) throw trace_mismatch("trace output disagrees with expected vector");
  return rec.take();
}

}  // namespace arithvc

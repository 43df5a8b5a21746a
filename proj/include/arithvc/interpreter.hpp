// Part of the arithvc project, licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "arithvc/ast.hpp"
#include "arithvc/nat.hpp"

namespace arithvc {

/// A program state: finite map from variables to naturals. Unmapped
/// variables read as 0.
using State = std::map<std::string, Nat>;

inline Nat state_get(const State& s, const std::string& v) {
  auto it = s.find(v);
  return it == s.end() ? Nat(0) : it->second;
}

/// Evaluates a pure term in a state.
inline Nat eval_term_pure(const TermPtr& t, const State& s) {
  return std::visit(
      overloaded{[&](const Term::Zero&) { return Nat(0); },
                 [&](const Term::One&) { return Nat(1); },
                 [&](const Term::Var& n) { return state_get(s, n.name); },
                 [&](const Term::Add& n) {
                   return eval_term_pure(n.lhs, s) + eval_term_pure(n.rhs, s);
                 },
                 [&](const Term::Mul& n) {
                   return eval_term_pure(n.lhs, s) * eval_term_pure(n.rhs, s);
                 },
                 [&](const Term::Ext&) -> Nat {
                   throw std::invalid_argument("eval_term_pure: extended function in program term");
                 }},
      t->node);
}

inline bool eval_bool(const BoolPtr& b, const State& s) {
  return std::visit(
      overloaded{[&](const BoolExpr::Lt& n) {
                   return eval_term_pure(n.lhs, s) < eval_term_pure(n.rhs, s);
                 },
                 [&](const BoolExpr::Not& n) { return !eval_bool(n.sub, s); },
                 [&](const BoolExpr::Imp& n) {
                   return !eval_bool(n.lhs, s) || eval_bool(n.rhs, s);
                 }},
      b->node);
}

// ---------------------------------------------------------------------------
// Execution traces. A trace mirrors the program structure; each While node
// records the vector of program-variable values at every loop-head visit
// (the values quantified by the loop's input-output formula), and one child
// trace per completed body iteration.
// ---------------------------------------------------------------------------

struct TraceNode;
using TraceNodePtr = std::shared_ptr<const TraceNode>;

struct TraceNode {
  struct Assign {};
  struct Seq {
    TraceNodePtr first, second;
  };
  struct If {
    bool took_then;
    TraceNodePtr taken;
  };
  struct While {
    std::vector<std::vector<Nat>> head_vectors;  // i+1 entries for i iterations
    std::vector<TraceNodePtr> body_traces;       // i entries
    Span at;
  };
  std::variant<Assign, Seq, If, While> node;
};

struct Trace {
  ProgramPtr program;
  std::vector<std::string> vars;  // pvars(program): the vector layout
  TraceNodePtr root;
};

struct RunOutcome {
  enum class Kind { Done, FuelExhausted };
  Kind kind = Kind::Done;
  State state;                  // final state (Done only)
  std::optional<Trace> trace;   // Done on structured programs only
  std::uint64_t steps = 0;      // primitive steps consumed
};

inline constexpr std::uint64_t kDefaultFuel = 1000000;

namespace detail {

struct OutOfFuel {};

class Runner {
 public:
  Runner(std::vector<std::string> vars, std::uint64_t fuel) : vars_(std::move(vars)), fuel_(fuel) {}

  std::vector<Nat> snapshot(const State& s) const {
    std::vector<Nat> v;
    v.reserve(vars_.size());
    for (const auto& x : vars_) v.push_back(state_get(s, x));
    return v;
  }

  TraceNodePtr exec(const ProgramPtr& p, State& s) {
    return std::visit(
        overloaded{[&](const Program::Assign& n) -> TraceNodePtr {
                     tick();
                     s[n.var] = eval_term_pure(n.value, s);
                     return std::make_shared<TraceNode>(TraceNode{TraceNode::Assign{}});
                   },
                   [&](const Program::Seq& n) -> TraceNodePtr {
                     TraceNodePtr a = exec(n.first, s);
                     TraceNodePtr b = exec(n.second, s);
                     return std::make_shared<TraceNode>(TraceNode{TraceNode::Seq{a, b}});
                   },
                   [&](const Program::If& n) -> TraceNodePtr {
                     tick();
                     bool c = eval_bool(n.cond, s);
                     TraceNodePtr t = exec(c ? n.then_branch : n.else_branch, s);
                     return std::make_shared<TraceNode>(TraceNode{TraceNode::If{c, t}});
                   },
                   [&](const Program::While& n) -> TraceNodePtr {
                     TraceNode::While w;
                     w.at = p->span;
                     w.head_vectors.push_back(snapshot(s));
                     tick();
                     while (eval_bool(n.cond, s)) {
                       w.body_traces.push_back(exec(n.body, s));
                       w.head_vectors.push_back(snapshot(s));
                       tick();
                     }
                     return std::make_shared<TraceNode>(TraceNode{std::move(w)});
                   }},
        p->node);
  }

  std::uint64_t used() const { return used_; }

 private:
  void tick() {
    if (used_ >= fuel_) throw OutOfFuel{};
    ++used_;
  }

  std::vector<std::string> vars_;
  std::uint64_t fuel_;
  std::uint64_t used_ = 0;
};

}  // namespace detail

/// Runs a program from a state with a step budget (assignments and guard
/// evaluations each cost one step). Deterministic; records loop traces.
inline RunOutcome run(const ProgramPtr& p, const State& s, std::uint64_t fuel = kDefaultFuel) {
  detail::Runner r(pvars(p), fuel);
  State cur = s;
  RunOutcome out;
  try {
    TraceNodePtr root = r.exec(p, cur);
    out.kind = RunOutcome::Kind::Done;
    out.state = std::move(cur);
    out.trace = Trace{p, pvars(p), root};
    out.steps = r.used();
  } catch (detail::OutOfFuel) {
    out.kind = RunOutcome::Kind::FuelExhausted;
    out.steps = fuel;
  }
  return out;
}

/// Small-step execution of a labeled program. Control lives in a reserved
/// variable while running and is dropped from the final state. Halts when
/// control leaves the label set; after an assignment, control falls through
/// to the next command in list order (the exit label after the last).
inline RunOutcome run_labeled(const LabeledProgram& p, const State& s,
                              std::uint64_t fuel = kDefaultFuel) {
  if (!labels_distinct(p)) throw std::invalid_argument("run_labeled: duplicate labels");
  std::map<Nat, std::size_t> index;
  for (std::size_t i = 0; i < p.commands.size(); ++i) index[p.commands[i].label] = i;
  auto next_label = [&](std::size_t i) -> Nat {
    return i + 1 < p.commands.size() ? p.commands[i + 1].label : p.exit_label;
  };

  State cur = s;
  Nat pc = p.commands.empty() ? p.exit_label : p.commands.front().label;
  RunOutcome out;
  std::uint64_t used = 0;
  while (true) {
    auto it = index.find(pc);
    if (it == index.end()) {
      out.kind = RunOutcome::Kind::Done;
      out.state = std::move(cur);
      out.steps = used;
      return out;
    }
    if (used >= fuel) {
      out.kind = RunOutcome::Kind::FuelExhausted;
      out.steps = fuel;
      return out;
    }
    ++used;
    std::size_t i = it->second;
    const LabeledCommand& c = p.commands[i];
    if (const auto* a = std::get_if<LabeledCommand::Assign>(&c.cmd)) {
      cur[a->var] = eval_term_pure(a->value, cur);
      pc = next_label(i);
    } else {
      const auto& g = std::get<LabeledCommand::CondGoto>(c.cmd);
      pc = eval_bool(g.cond, cur) ? g.target : next_label(i);
    }
  }
}

}  // namespace arithvc

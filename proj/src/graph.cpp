// Copyright 2026 The efgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "efgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "efgraph/error.hpp"

namespace efg {

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::kStaticBackward: return "static-backward";
    case Phase::kStaticForward: return "static-forward";
    case Phase::kDynamicBackward: return "dynamic-backward";
    case Phase::kDynamicForward: return "dynamic-forward";
  }
  return "?";
}

namespace ops {

namespace {
Op make(OpCode code, std::vector<Operand> operands, double value = 0.0) {
  Op op;
  op.code = code;
  op.operands = std::move(operands);
  op.value = value;
  return op;
}
}  // namespace

Op const_scalar(double value) { return make(OpCode::kConstScalar, {}, value); }
Op const_vector(double value) { return make(OpCode::kConstVector, {}, value); }
Op add(Operand lhs, Operand rhs) { return make(OpCode::kAdd, {lhs, rhs}); }
Op sub(Operand lhs, Operand rhs) { return make(OpCode::kSub, {lhs, rhs}); }
Op mul(Operand lhs, Operand rhs) { return make(OpCode::kMul, {lhs, rhs}); }
Op div(Operand lhs, Operand rhs) { return make(OpCode::kDiv, {lhs, rhs}); }
Op maximum(Operand x, Operand y) { return make(OpCode::kMaximum, {x, y}); }
Op minimum(Operand x, Operand y) { return make(OpCode::kMinimum, {x, y}); }
Op exp(NodeRef x) { return make(OpCode::kExp, {x}); }
Op log(NodeRef x) { return make(OpCode::kLog, {x}); }
Op pow(NodeRef x, double exponent) { return make(OpCode::kPow, {x}, exponent); }
Op sum(NodeRef x) { return make(OpCode::kSum, {x}); }
Op mean(NodeRef x) { return make(OpCode::kMean, {x}); }
Op max(NodeRef x) { return make(OpCode::kMax, {x}); }
Op min(NodeRef x) { return make(OpCode::kMin, {x}); }
Op dot(NodeRef x, NodeRef y) { return make(OpCode::kDot, {x, y}); }

Op normalize(NodeRef x, bool ignore_negative) {
  Op op = make(OpCode::kNormalize, {x});
  op.ignore_negative = ignore_negative;
  return op;
}

Op aggregate(NodeRef source, Aggregator aggregator, AggregateObject object, PlayerScope scope,
             double padding) {
  Op op = make(OpCode::kAggregate, {source}, padding);
  op.aggregator = aggregator;
  op.object = object;
  op.scope = scope;
  return op;
}

Op builtin(Builtin which) {
  Op op = make(OpCode::kBuiltin, {});
  op.builtin = which;
  return op;
}

Op copy(NodeRef x) { return make(OpCode::kCopy, {x}); }

}  // namespace ops

namespace {

const char* op_name(OpCode code) {
  switch (code) {
    case OpCode::kConstScalar: return "const_scalar";
    case OpCode::kConstVector: return "const_vector";
    case OpCode::kAdd: return "add";
    case OpCode::kSub: return "sub";
    case OpCode::kMul: return "mul";
    case OpCode::kDiv: return "div";
    case OpCode::kMaximum: return "maximum";
    case OpCode::kMinimum: return "minimum";
    case OpCode::kExp: return "exp";
    case OpCode::kLog: return "log";
    case OpCode::kPow: return "pow";
    case OpCode::kSum: return "sum";
    case OpCode::kMean: return "mean";
    case OpCode::kMax: return "max";
    case OpCode::kMin: return "min";
    case OpCode::kDot: return "dot";
    case OpCode::kNormalize: return "normalize";
    case OpCode::kAggregate: return "aggregate";
    case OpCode::kBuiltin: return "builtin";
    case OpCode::kCopy: return "copy";
  }
  return "?";
}

std::string describe(const Op& op) {
  std::string out = op_name(op.code);
  out += '(';
  for (std::size_t k = 0; k < op.operands.size(); ++k) {
    if (k) out += ", ";
    if (const auto* node = std::get_if<NodeRef>(&op.operands[k])) {
      out += fmt::format("%{}", node->id);
    } else {
      out += fmt::format("{:.17g}", std::get<double>(op.operands[k]));
    }
  }
  switch (op.code) {
    case OpCode::kConstScalar:
    case OpCode::kConstVector:
      out += fmt::format("{:.17g}", op.value);
      break;
    case OpCode::kPow:
      out += fmt::format(", {:.17g}", op.value);
      break;
    case OpCode::kNormalize:
      out += op.ignore_negative ? ", ignore_negative" : "";
      break;
    case OpCode::kAggregate: {
      static constexpr const char* kAgg[] = {"sum", "mean", "max", "min"};
      out += fmt::format(", {}, {}, {}, padding={:.17g}", kAgg[static_cast<int>(op.aggregator)],
                         op.object == AggregateObject::kChildren ? "children" : "parent",
                         op.scope == PlayerScope::kSelf ? "self" : "opponents", op.value);
      break;
    }
    case OpCode::kBuiltin: {
      static constexpr const char* kNames[] = {"utility", "action_set_size", "reach_prob"};
      out += kNames[static_cast<int>(op.builtin)];
      break;
    }
    default:
      break;
  }
  out += ')';
  return out;
}

[[noreturn]] void fail(GraphError::Kind kind, const OpContext& ctx, const std::string& msg) {
  throw GraphError(kind, fmt::format("{} at infoset {}", msg, ctx.infoset));
}

const Variable& arg(std::span<const Variable* const> args, std::size_t k) { return *args[k]; }

template <typename F>
void elementwise(const Variable& a, const Variable& b, const OpContext& ctx, Variable& out,
                 F&& f) {
  if (a.size() == b.size()) {
    out.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i], b[i]);
  } else if (b.size() == 1) {
    out.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i], b[0]);
  } else if (a.size() == 1) {
    out.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = f(a[0], b[i]);
  } else {
    fail(GraphError::Kind::kShapeMismatch, ctx,
         fmt::format("elementwise operands of length {} and {}", a.size(), b.size()));
  }
}

template <typename F>
void unary(const Variable& a, Variable& out, F&& f) {
  out.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
}

void require_finite(const Variable& v, const OpContext& ctx, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) fail(GraphError::Kind::kDomainError, ctx, fmt::format("{} produced a non-finite value", what));
  }
}

void uniform(std::size_t n, Variable& out) { out.assign(n, 1.0 / static_cast<double>(n)); }

}  // namespace

std::string ComputationGraph::dump() const {
  std::string out;
  for (const GraphNodeDef& n : nodes_) {
    out += fmt::format("node %{} {}{}\n", n.id, to_string(n.phase),
                       n.is_placeholder ? fmt::format(" placeholder {:.17g}", n.initial) : "");
  }
  for (const Step& s : steps_) {
    out += fmt::format("{} %{} {} {}\n", s.inplace ? "inplace" : "define", s.target.id,
                       to_string(s.phase), describe(s.op));
  }
  return out;
}

Phase GraphBuilder::current_phase() const {
  if (!phase_) {
    throw GraphError(GraphError::Kind::kNoPhase, "node declared outside of any phase scope");
  }
  return *phase_;
}

void GraphBuilder::check_inputs(Phase phase, const Op& op) const {
  for (const Operand& operand : op.operands) {
    const auto* node = std::get_if<NodeRef>(&operand);
    if (!node) continue;
    if (node->id < 0 || node->id >= static_cast<int>(nodes_.size())) {
      throw GraphError(GraphError::Kind::kUnknownInput,
                       fmt::format("{} reads undeclared node %{}", op_name(op.code), node->id));
    }
    const Phase input_phase = nodes_[node->id].phase;
    // Static steps run once, before anything later has a value.
    if (is_static(phase) && input_phase > phase) {
      throw GraphError(GraphError::Kind::kPhaseViolation,
                       fmt::format("{} step reads %{} declared in later phase {}",
                                   to_string(phase), node->id, to_string(input_phase)));
    }
  }
}

NodeRef GraphBuilder::declare(Phase phase, Op op) {
  check_inputs(phase, op);
  const NodeRef ref{static_cast<int>(nodes_.size())};
  nodes_.push_back({ref.id, phase, false, 0.0});
  steps_.push_back({ref, phase, std::move(op), false});
  return ref;
}

NodeRef GraphBuilder::placeholder(Phase phase, double initial) {
  const NodeRef ref{static_cast<int>(nodes_.size())};
  nodes_.push_back({ref.id, phase, true, initial});
  return ref;
}

void GraphBuilder::inplace(Phase phase, NodeRef target, Op op) {
  if (target.id < 0 || target.id >= static_cast<int>(nodes_.size())) {
    throw GraphError(GraphError::Kind::kUnknownTarget,
                     fmt::format("inplace target %{} is not declared", target.id));
  }
  check_inputs(phase, op);
  steps_.push_back({target, phase, std::move(op), true});
}

ComputationGraph GraphBuilder::seal() && {
  ComputationGraph graph;
  graph.nodes_ = std::move(nodes_);
  graph.steps_ = std::move(steps_);
  for (const Step& s : graph.steps_) graph.by_phase_[static_cast<int>(s.phase)].push_back(s);
  return graph;
}

void evaluate_op(const Op& op, std::span<const Variable* const> args, const OpContext& ctx,
                 Variable& out) {
  if (args.size() < op.operands.size()) {
    fail(GraphError::Kind::kShapeMismatch, ctx, "missing operand values");
  }
  switch (op.code) {
    case OpCode::kConstScalar:
      out.assign(1, op.value);
      return;
    case OpCode::kConstVector:
      out.assign(static_cast<std::size_t>(ctx.action_count), op.value);
      return;
    case OpCode::kAdd:
      return elementwise(arg(args, 0), arg(args, 1), ctx, out, [](double x, double y) { return x + y; });
    case OpCode::kSub:
      return elementwise(arg(args, 0), arg(args, 1), ctx, out, [](double x, double y) { return x - y; });
    case OpCode::kMul:
      return elementwise(arg(args, 0), arg(args, 1), ctx, out, [](double x, double y) { return x * y; });
    case OpCode::kDiv:
      for (double d : arg(args, 1)) {
        if (d == 0.0) fail(GraphError::Kind::kDomainError, ctx, "division by zero");
      }
      elementwise(arg(args, 0), arg(args, 1), ctx, out, [](double x, double y) { return x / y; });
      return require_finite(out, ctx, "div");
    case OpCode::kMaximum:
      return elementwise(arg(args, 0), arg(args, 1), ctx, out,
                         [](double x, double y) { return std::max(x, y); });
    case OpCode::kMinimum:
      return elementwise(arg(args, 0), arg(args, 1), ctx, out,
                         [](double x, double y) { return std::min(x, y); });
    case OpCode::kExp:
      unary(arg(args, 0), out, [](double x) { return std::exp(x); });
      return require_finite(out, ctx, "exp");
    case OpCode::kLog:
      for (double x : arg(args, 0)) {
        if (!(x > 0.0)) fail(GraphError::Kind::kDomainError, ctx, fmt::format("log of {}", x));
      }
      return unary(arg(args, 0), out, [](double x) { return std::log(x); });
    case OpCode::kPow: {
      const double e = op.value;
      unary(arg(args, 0), out, [e](double x) { return std::pow(x, e); });
      return require_finite(out, ctx, "pow");
    }
    case OpCode::kSum:
    case OpCode::kMean:
    case OpCode::kMax:
    case OpCode::kMin: {
      const Variable& a = arg(args, 0);
      double r = 0.0;
      if (op.code == OpCode::kMax) r = *std::max_element(a.begin(), a.end());
      else if (op.code == OpCode::kMin) r = *std::min_element(a.begin(), a.end());
      else {
        for (double x : a) r += x;
        if (op.code == OpCode::kMean) r /= static_cast<double>(a.size());
      }
      out.assign(1, r);
      return;
    }
    case OpCode::kDot: {
      const Variable& a = arg(args, 0);
      const Variable& b = arg(args, 1);
      double r = 0.0;
      if (a.size() == b.size()) {
        for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
      } else if (a.size() == 1 || b.size() == 1) {
        const double s = a.size() == 1 ? a[0] : b[0];
        for (double x : (a.size() == 1 ? b : a)) r += s * x;
      } else {
        fail(GraphError::Kind::kShapeMismatch, ctx,
             fmt::format("dot of lengths {} and {}", a.size(), b.size()));
      }
      out.assign(1, r);
      return;
    }
    case OpCode::kNormalize: {
      const Variable& a = arg(args, 0);
      double total = 0.0;
      for (double x : a) {
        if (x < 0.0 && !op.ignore_negative) {
          fail(GraphError::Kind::kDomainError, ctx, "normalize of a negative entry");
        }
        if (x > 0.0) total += x;
      }
      if (!(total > 0.0) || !std::isfinite(total)) return uniform(a.size(), out);
      unary(a, out, [total](double x) { return x > 0.0 ? x / total : 0.0; });
      return;
    }
    case OpCode::kBuiltin:
      switch (op.builtin) {
        case Builtin::kUtility:
          if (ctx.utility.empty()) out.assign(static_cast<std::size_t>(ctx.action_count), 0.0);
          else out.assign(ctx.utility.begin(), ctx.utility.end());
          return;
        case Builtin::kActionSetSize:
          out.assign(1, static_cast<double>(ctx.action_count));
          return;
        case Builtin::kReachProb:
          out.assign(1, ctx.reach_prob);
          return;
      }
      return;
    case OpCode::kCopy:
      out = arg(args, 0);
      return;
    case OpCode::kAggregate:
      fail(GraphError::Kind::kShapeMismatch, ctx, "aggregate needs an environment");
  }
}

Variable evaluate_op(const Op& op, std::span<const Variable> inputs, const OpContext& ctx) {
  std::vector<Variable> literals;
  literals.reserve(op.operands.size());
  std::vector<const Variable*> args;
  std::size_t next = 0;
  for (const Operand& operand : op.operands) {
    if (const auto* value = std::get_if<double>(&operand)) {
      literals.push_back({*value});
      args.push_back(&literals.back());
    } else {
      if (next >= inputs.size()) {
        throw GraphError(GraphError::Kind::kShapeMismatch, "not enough node inputs");
      }
      args.push_back(&inputs[next++]);
    }
  }
  Variable out;
  evaluate_op(op, args, ctx, out);
  return out;
}

}  // namespace efg

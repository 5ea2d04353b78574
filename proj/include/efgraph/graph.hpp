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

#ifndef EFGRAPH_GRAPH_HPP
#define EFGRAPH_GRAPH_HPP

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace efg {

// Per-infoset value held by a graph node. Length-1 vectors are scalars.
using Variable = std::vector<double>;

// Execution precedence follows declaration order of the enumerators.
enum class Phase { kStaticBackward, kStaticForward, kDynamicBackward, kDynamicForward };

inline bool is_static(Phase p) {
  return p == Phase::kStaticBackward || p == Phase::kStaticForward;
}
inline bool is_backward(Phase p) {
  return p == Phase::kStaticBackward || p == Phase::kDynamicBackward;
}
const char* to_string(Phase phase);

// Handle to a node of a computation graph.
struct NodeRef {
  int id = -1;

  auto operator<=>(const NodeRef&) const = default;
};

// A node reference or a scalar literal.
using Operand = std::variant<NodeRef, double>;

enum class OpCode {
  kConstScalar,
  kConstVector,  // length equals the infoset's action count
  kAdd,
  kSub,
  kMul,
  kDiv,
  kMaximum,
  kMinimum,
  kExp,
  kLog,
  kPow,
  kSum,
  kMean,
  kMax,
  kMin,
  kDot,
  kNormalize,
  kAggregate,
  kBuiltin,
  kCopy,
};

enum class Aggregator { kSum, kMean, kMax, kMin };
enum class AggregateObject { kChildren, kParent };
enum class PlayerScope { kSelf, kOpponents };
enum class Builtin { kUtility, kActionSetSize, kReachProb };

struct Op {
  OpCode code = OpCode::kConstScalar;
  std::vector<Operand> operands;
  // Constant value, exponent or aggregate padding depending on `code`.
  double value = 0.0;
  bool ignore_negative = false;
  Aggregator aggregator = Aggregator::kSum;
  AggregateObject object = AggregateObject::kChildren;
  PlayerScope scope = PlayerScope::kSelf;
  Builtin builtin = Builtin::kUtility;
};

// Op constructors. Binary elementwise ops broadcast scalars over vectors.
namespace ops {
Op const_scalar(double value);
Op const_vector(double value);
Op add(Operand lhs, Operand rhs);
Op sub(Operand lhs, Operand rhs);
Op mul(Operand lhs, Operand rhs);
Op div(Operand lhs, Operand rhs);
Op maximum(Operand x, Operand y);
Op minimum(Operand x, Operand y);
Op exp(NodeRef x);
Op log(NodeRef x);
Op pow(NodeRef x, double exponent);
Op sum(NodeRef x);
Op mean(NodeRef x);
Op max(NodeRef x);
Op min(NodeRef x);
Op dot(NodeRef x, NodeRef y);
Op normalize(NodeRef x, bool ignore_negative = false);
Op aggregate(NodeRef source, Aggregator aggregator,
             AggregateObject object = AggregateObject::kChildren,
             PlayerScope scope = PlayerScope::kSelf, double padding = 0.0);
Op builtin(Builtin which);
Op copy(NodeRef x);
}  // namespace ops

struct GraphNodeDef {
  int id = 0;
  Phase phase = Phase::kStaticBackward;
  bool is_placeholder = false;
  // Storage value before the node is first assigned.
  double initial = 0.0;
};

// One assignment executed per infoset: either the defining op of a new node
// or an inplace re-assignment of an existing one.
struct Step {
  NodeRef target;
  Phase phase = Phase::kStaticBackward;
  Op op;
  bool inplace = false;
};

class GraphBuilder;

// Sealed, immutable graph template. Only GraphBuilder::seal creates one.
class ComputationGraph {
 public:
  // An empty graph; non-empty graphs come from GraphBuilder::seal().
  ComputationGraph() = default;

  const std::vector<GraphNodeDef>& nodes() const { return nodes_; }
  const std::vector<Step>& steps() const { return steps_; }
  // Steps of one phase in declaration order.
  const std::vector<Step>& steps(Phase phase) const {
    return by_phase_[static_cast<int>(phase)];
  }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }

  // Line-per-step textual listing, stable across builds of the same graph.
  std::string dump() const;

 private:
  friend class GraphBuilder;

  std::vector<GraphNodeDef> nodes_;
  std::vector<Step> steps_;
  std::vector<Step> by_phase_[4];
};

// Declares graph nodes. Every call can name its phase explicitly or rely on
// the phase selected with set_phase()/PhaseScope.
class GraphBuilder {
 public:
  NodeRef declare(Phase phase, Op op);
  NodeRef declare(Op op) { return declare(current_phase(), std::move(op)); }

  NodeRef placeholder(Phase phase, double initial = 0.0);
  NodeRef placeholder(double initial = 0.0) { return placeholder(current_phase(), initial); }

  void inplace(Phase phase, NodeRef target, Op op);
  void inplace(NodeRef target, Op op) { inplace(current_phase(), target, std::move(op)); }

  void set_phase(std::optional<Phase> phase) { phase_ = phase; }
  std::optional<Phase> phase() const { return phase_; }

  ComputationGraph seal() &&;

 private:
  Phase current_phase() const;
  void check_inputs(Phase phase, const Op& op) const;

  std::vector<GraphNodeDef> nodes_;
  std::vector<Step> steps_;
  std::optional<Phase> phase_;
};

// Selects the builder's phase for its lifetime.
class PhaseScope {
 public:
  PhaseScope(GraphBuilder& builder, Phase phase) : builder_(builder), saved_(builder.phase()) {
    builder_.set_phase(phase);
  }
  ~PhaseScope() { builder_.set_phase(saved_); }
  PhaseScope(const PhaseScope&) = delete;
  PhaseScope& operator=(const PhaseScope&) = delete;

 private:
  GraphBuilder& builder_;
  std::optional<Phase> saved_;
};

// Built-in quantities and shape information visible to one evaluation.
struct OpContext {
  int infoset = -1;
  int action_count = 1;
  std::span<const double> utility;
  double reach_prob = 1.0;
};

// Evaluates every op except Aggregate, which needs the environment.
// `args[k]` holds the value of `op.operands[k]`. Throws GraphError on shape
// or domain errors.
void evaluate_op(const Op& op, std::span<const Variable* const> args, const OpContext& ctx,
                 Variable& out);

// Convenience form; `inputs` supplies the node operands in order.
Variable evaluate_op(const Op& op, std::span<const Variable> inputs, const OpContext& ctx);

}  // namespace efg

#endif  // EFGRAPH_GRAPH_HPP

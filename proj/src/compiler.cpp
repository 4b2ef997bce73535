/* Copyright 2026 The EdgeAudio Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "edgeaudio/compiler.hpp"

#include <algorithm>
#include <sstream>

#include "edgeaudio/error.hpp"

namespace edgeaudio::compiler {

using graph::LayerKind;
using graph::ModelGraph;
using graph::Node;
using graph::ValueRef;

OpSupportPolicy OpSupportPolicy::defaults() {
  OpSupportPolicy p;
  p.supported_kinds = {
      LayerKind::kConv2D,        LayerKind::kDepthwiseConv2D,
      LayerKind::kDense,         LayerKind::kRelu6,
      LayerKind::kMaxPool2D,     LayerKind::kAvgPool2D,
      LayerKind::kGlobalAvgPool, LayerKind::kSoftmax,
      LayerKind::kLayerNorm,     LayerKind::kAttentionSingleHead,
      LayerKind::kAdd,           LayerKind::kMul,
      LayerKind::kSub,           LayerKind::kConcat,
      LayerKind::kReshape,       LayerKind::kTranspose,
      LayerKind::kSlice,         LayerKind::kSigmoid,
      LayerKind::kPosEncoding,   LayerKind::kBatchNorm,
  };
  return p;
}

const char* unsupported_reason_name(UnsupportedReason r) {
  switch (r) {
    case UnsupportedReason::kNone: return "NONE";
    case UnsupportedReason::kUnknownOp: return "UNKNOWN_OP";
    case UnsupportedReason::kRankViolation: return "RANK_VIOLATION";
    case UnsupportedReason::kDynamicShape: return "DYNAMIC_SHAPE";
    case UnsupportedReason::kNonInt8: return "NON_INT8";
    case UnsupportedReason::kBatchedInput: return "BATCHED_INPUT";
  }
  return "UNKNOWN";
}

namespace {

bool rank_rule_ok(const Shape& s) {
  if (s.size() <= 3) return true;
  // Higher-rank tensors may only extend in the three innermost dimensions.
  for (size_t i = 0; i + 3 < s.size(); ++i) {
    if (s[i] != 1) return false;
  }
  return true;
}

bool shape_static(const Shape& s) {
  return std::all_of(s.begin(), s.end(), [](int d) { return d > 0; });
}

NodeVerdict unsupported(const Node& n, UnsupportedReason r,
                        const std::string& detail) {
  return NodeVerdict{n.id, n.name, Verdict::kUnsupported, r, detail};
}

}  // namespace

std::vector<NodeVerdict> validate(const ModelGraph& g,
                                  const OpSupportPolicy& policy) {
  check(!g.nodes.empty(), ErrorCategory::kGraph, "empty graph");
  for (const Node& n : g.nodes) {
    check(!n.out_shape.empty(), ErrorCategory::kGraph,
          "graph must be shape-inferred before validation");
  }

  std::vector<NodeVerdict> verdicts;
  verdicts.reserve(g.nodes.size());
  for (const Node& n : g.nodes) {
    if (g.batch > 1) {
      const bool eats_input =
          std::any_of(n.inputs.begin(), n.inputs.end(),
                      [](ValueRef r) { return r.is_input(); });
      if (eats_input) {
        verdicts.push_back(unsupported(
            n, UnsupportedReason::kBatchedInput,
            "graph declares batch " + std::to_string(g.batch) +
                "; the device processes unbatched inputs only"));
        continue;
      }
    }
    if (!policy.supported_kinds.count(n.kind)) {
      verdicts.push_back(unsupported(n, UnsupportedReason::kUnknownOp,
                                     std::string(layer_kind_name(n.kind)) +
                                         " is not in the device op set"));
      continue;
    }
    if (policy.require_static_shapes && !shape_static(n.out_shape)) {
      verdicts.push_back(unsupported(n, UnsupportedReason::kDynamicShape,
                                     "non-static output shape"));
      continue;
    }
    if (policy.require_int8 && !g.quantized) {
      verdicts.push_back(unsupported(
          n, UnsupportedReason::kNonInt8,
          "FLOAT32 activations; the device executes INT8 only"));
      continue;
    }
    if (policy.enforce_rank_rule) {
      bool bad = !rank_rule_ok(n.out_shape);
      std::string detail =
          "tensor " + shape_str(n.out_shape) +
          " extends beyond the three innermost dimensions";
      // Fully-connected layers additionally require a plain vector input;
      // feeding them 2-D token stacks is what the 1x1-conv rewrite fixes.
      if (!bad && n.kind == LayerKind::kDense) {
        const Shape& in_shape =
            n.inputs[0].is_input() ? g.inputs[n.inputs[0].input_index()].shape
                                   : g.nodes[n.inputs[0].node_id()].out_shape;
        if (in_shape.size() >= 2) {
          bad = true;
          detail = "fully-connected layer fed a rank-" +
                   std::to_string(in_shape.size()) +
                   " tensor; device supports vectors only";
        }
      }
      if (bad) {
        verdicts.push_back(
            unsupported(n, UnsupportedReason::kRankViolation, detail));
        continue;
      }
    }
    verdicts.push_back(NodeVerdict{n.id, n.name, Verdict::kSupported,
                                   UnsupportedReason::kNone, ""});
  }
  return verdicts;
}

// ---------------------------------------------------------------------------
// Rewrite
// ---------------------------------------------------------------------------

namespace {

// One rewrite sweep; returns true when something changed.
bool rewrite_pass(const ModelGraph& in, ModelGraph* out, RewriteLog* log) {
  bool changed = false;
  ModelGraph g = in;
  g.nodes.clear();

  // old node id -> new node id of the value that replaces it
  std::vector<int> remap(in.nodes.size(), -1);
  auto map_ref = [&](ValueRef ref) {
    return ref.is_input() ? ref : ValueRef::node(remap[ref.node_id()]);
  };

  for (const Node& n : in.nodes) {
    if (n.kind == LayerKind::kSquaredDifference) {
      Node sub;
      sub.name = n.name + "/sub";
      sub.kind = LayerKind::kSub;
      sub.inputs = {map_ref(n.inputs[0]), map_ref(n.inputs[1])};
      sub.oqp = n.oqp;
      const int sub_id = g.add(std::move(sub));

      Node mul;
      mul.name = n.name;
      mul.kind = LayerKind::kMul;
      mul.inputs = {ValueRef::node(sub_id), ValueRef::node(sub_id)};
      mul.oqp = n.oqp;
      remap[n.id] = g.add(std::move(mul));
      if (log) log->entries.push_back({"squared_difference_to_sub_mul", n.name});
      changed = true;
      continue;
    }

    if (n.kind == LayerKind::kDense) {
      const Shape in_shape =
          n.inputs[0].is_input()
              ? in.inputs[n.inputs[0].input_index()].shape
              : in.nodes[n.inputs[0].node_id()].out_shape;
      if (in_shape.size() >= 2) {
        const int features = in_shape.back();
        const int units = n.weights[0].dim(1);
        int64_t rows = 1;
        for (size_t i = 0; i + 1 < in_shape.size(); ++i) rows *= in_shape[i];

        ValueRef conv_in = map_ref(n.inputs[0]);
        const bool needs_reshape = in_shape.size() != 3;
        if (needs_reshape) {
          Node rs;
          rs.name = n.name + "/tokens3d";
          rs.kind = LayerKind::kReshape;
          rs.attrs.new_shape = {static_cast<int>(rows), 1, features};
          rs.inputs = {conv_in};
          rs.oqp = n.inputs[0].is_input()
                       ? in.inputs[n.inputs[0].input_index()].qp
                       : in.nodes[n.inputs[0].node_id()].oqp;
          conv_in = ValueRef::node(g.add(std::move(rs)));
        }

        Node conv;
        conv.name = n.name + "/conv1x1";
        conv.kind = LayerKind::kConv2D;
        conv.attrs.stride = {1, 1};
        conv.attrs.padding = ops::Padding::kValid;
        conv.inputs = {conv_in};
        conv.weights.push_back(
            n.weights[0].reshaped({1, 1, features, units}));
        conv.weights.push_back(n.weights[1]);
        conv.oqp = n.oqp;
        const int conv_id = g.add(std::move(conv));

        Shape out_shape = in_shape;
        out_shape.back() = units;
        Node back;
        back.name = n.name;
        back.kind = LayerKind::kReshape;
        back.attrs.new_shape = out_shape;
        back.inputs = {ValueRef::node(conv_id)};
        back.oqp = n.oqp;
        remap[n.id] = g.add(std::move(back));
        if (log) log->entries.push_back({"dense_to_conv1x1", n.name});
        changed = true;
        continue;
      }
    }

    Node copy = n;
    copy.id = -1;
    for (ValueRef& ref : copy.inputs) ref = map_ref(ref);
    remap[n.id] = g.add(std::move(copy));
  }

  for (graph::GraphOutput& o : g.outputs) o.node_id = remap[o.node_id];
  *out = std::move(g);
  return changed;
}

}  // namespace

ModelGraph rewrite(const ModelGraph& input, const OpSupportPolicy& policy,
                   RewriteLog* log) {
  (void)policy;
  check(input.batch <= 1, ErrorCategory::kGraph,
        "batched graphs cannot be rewritten for the accelerator; "
        "fold the batch dimension before compiling");
  ModelGraph current = input;
  for (int iter = 0; iter < 8; ++iter) {
    ModelGraph next;
    const bool changed = rewrite_pass(current, &next, log);
    if (!changed) break;
    current = std::move(next);
  }
  graph::infer_shapes(current);
  return current;
}

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

int PartitionPlan::fallback_node_count() const {
  int count = 0;
  for (const Segment& s : segments) {
    if (s.target == SegmentTarget::kFallback) {
      count += static_cast<int>(s.node_ids.size());
    }
  }
  return count;
}

PartitionPlan partition(const ModelGraph& g,
                        const std::vector<NodeVerdict>& verdicts) {
  check(verdicts.size() == g.nodes.size(), ErrorCategory::kGraph,
        "verdicts must cover every node");

  PartitionPlan plan;
  plan.diagnostics = verdicts;

  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const SegmentTarget target = verdicts[i].verdict == Verdict::kSupported
                                     ? SegmentTarget::kAccelerator
                                     : SegmentTarget::kFallback;
    if (plan.segments.empty() || plan.segments.back().target != target) {
      plan.segments.push_back(Segment{target, {}, {}, {}});
    }
    plan.segments.back().node_ids.push_back(static_cast<int>(i));
  }

  // Boundary tensors: values entering the segment and values consumed
  // beyond it (or exported as graph outputs).
  for (Segment& seg : plan.segments) {
    const int first = seg.node_ids.front();
    const int last = seg.node_ids.back();
    auto inside = [&](int id) { return id >= first && id <= last; };

    for (int id : seg.node_ids) {
      for (ValueRef ref : g.nodes[id].inputs) {
        std::string name;
        if (ref.is_input()) {
          name = "input:" + g.inputs[ref.input_index()].name;
        } else if (!inside(ref.node_id())) {
          name = g.nodes[ref.node_id()].name;
        } else {
          continue;
        }
        if (std::find(seg.boundary_inputs.begin(), seg.boundary_inputs.end(),
                      name) == seg.boundary_inputs.end()) {
          seg.boundary_inputs.push_back(name);
        }
      }
    }
    auto add_output = [&](int id) {
      const std::string& name = g.nodes[id].name;
      if (std::find(seg.boundary_outputs.begin(), seg.boundary_outputs.end(),
                    name) == seg.boundary_outputs.end()) {
        seg.boundary_outputs.push_back(name);
      }
    };
    for (const Node& n : g.nodes) {
      if (inside(n.id)) continue;
      for (ValueRef ref : n.inputs) {
        if (!ref.is_input() && inside(ref.node_id())) add_output(ref.node_id());
      }
    }
    for (const graph::GraphOutput& o : g.outputs) {
      if (inside(o.node_id)) add_output(o.node_id);
    }
  }
  return plan;
}

BudgetReport check_budget(const ModelGraph& g, const OpSupportPolicy& policy) {
  BudgetReport report;
  report.parameter_bytes = g.param_bytes();
  report.budget_bytes = policy.param_cache_budget_bytes;
  report.within_budget = report.parameter_bytes <= report.budget_bytes;
  return report;
}

CompileReport compile(const ModelGraph& g, const OpSupportPolicy& policy) {
  CompileReport report;
  report.arch = g.arch;
  report.quantized = g.quantized;
  if (policy.require_int8 && !g.quantized) {
    report.warnings.push_back(
        "graph holds FLOAT32 activations; quantize before deployment");
  }

  const ModelGraph rewritten = rewrite(g, policy, &report.rewrites);
  const std::vector<NodeVerdict> verdicts = validate(rewritten, policy);
  report.plan = partition(rewritten, verdicts);
  report.budget = check_budget(rewritten, policy);

  if (!report.budget.within_budget) {
    report.warnings.push_back(
        "parameters exceed the on-chip cache budget by " +
        std::to_string(report.budget.parameter_bytes -
                       report.budget.budget_bytes) +
        " bytes");
  }
  for (const NodeVerdict& v : verdicts) {
    if (v.verdict == Verdict::kUnsupported) {
      report.warnings.push_back(
          v.node_name + ": " + unsupported_reason_name(v.reason) +
          (v.detail.empty() ? "" : " (" + v.detail + ")"));
    }
  }
  return report;
}

nlohmann::json report_to_json(const CompileReport& report) {
  nlohmann::json j;
  j["arch"] = report.arch;
  j["quantized"] = report.quantized;
  j["fully_accelerated"] = report.fully_accelerated();
  j["fallback_nodes"] = report.plan.fallback_node_count();

  nlohmann::json rewrites = nlohmann::json::array();
  for (const auto& e : report.rewrites.entries) {
    rewrites.push_back({{"rule", e.rule}, {"node", e.node_name}});
  }
  j["rewrites"] = std::move(rewrites);

  nlohmann::json segments = nlohmann::json::array();
  for (const Segment& s : report.plan.segments) {
    segments.push_back(
        {{"target", s.target == SegmentTarget::kAccelerator ? "ACCELERATOR"
                                                            : "FALLBACK"},
         {"nodes", s.node_ids},
         {"boundary_inputs", s.boundary_inputs},
         {"boundary_outputs", s.boundary_outputs}});
  }
  j["segments"] = std::move(segments);

  nlohmann::json diags = nlohmann::json::array();
  for (const NodeVerdict& v : report.plan.diagnostics) {
    if (v.verdict == Verdict::kSupported) continue;
    diags.push_back({{"node", v.node_name},
                     {"reason", unsupported_reason_name(v.reason)},
                     {"detail", v.detail}});
  }
  j["unsupported"] = std::move(diags);

  j["budget"] = {{"parameter_bytes", report.budget.parameter_bytes},
                 {"budget_bytes", report.budget.budget_bytes},
                 {"within_budget", report.budget.within_budget}};
  j["warnings"] = report.warnings;
  return j;
}

std::string report_to_text(const CompileReport& report) {
  std::ostringstream os;
  os << "compile report: " << report.arch
     << (report.quantized ? " (int8)" : " (float32)") << "\n";
  os << "fully accelerated: "
     << (report.fully_accelerated() ? "true" : "false") << "\n";
  os << "segments: " << report.plan.segments.size() << "\n";
  for (size_t i = 0; i < report.plan.segments.size(); ++i) {
    const Segment& s = report.plan.segments[i];
    os << "  [" << i << "] "
       << (s.target == SegmentTarget::kAccelerator ? "ACCELERATOR" : "FALLBACK")
       << ", " << s.node_ids.size() << " nodes (" << s.node_ids.front() << ".."
       << s.node_ids.back() << ")\n";
  }
  os << "rewrites applied: " << report.rewrites.entries.size() << "\n";
  for (const auto& e : report.rewrites.entries) {
    os << "  " << e.rule << ": " << e.node_name << "\n";
  }
  os << "parameter bytes: " << report.budget.parameter_bytes << " / "
     << report.budget.budget_bytes
     << (report.budget.within_budget ? " (within budget)" : " (OVER BUDGET)")
     << "\n";
  if (!report.warnings.empty()) {
    os << "warnings:\n";
    for (const std::string& w : report.warnings) os << "  " << w << "\n";
  }
  return os.str();
}

}  // namespace edgeaudio::compiler

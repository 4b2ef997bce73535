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
//
// Deployment pass for a tensor accelerator with a restricted operator set:
// validate nodes against the device constraints, rewrite unsupported
// constructs into supported primitives, partition the graph into accelerator
// and CPU-fallback segments, and check the parameter-cache budget.

#ifndef EDGEAUDIO_COMPILER_HPP_
#define EDGEAUDIO_COMPILER_HPP_

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgeaudio/graph.hpp"

namespace edgeaudio::compiler {

struct OpSupportPolicy {
  std::set<graph::LayerKind> supported_kinds;
  // Activation tensors: rank <= 3, or higher rank with only the three
  // innermost extents greater than one.
  bool enforce_rank_rule = true;
  bool require_static_shapes = true;
  bool require_int8 = true;
  int64_t param_cache_budget_bytes = 8ll * 1024 * 1024;

  static OpSupportPolicy defaults();
};

enum class Verdict { kSupported, kUnsupported };

enum class UnsupportedReason {
  kNone,
  kUnknownOp,
  kRankViolation,
  kDynamicShape,
  kNonInt8,
  kBatchedInput,
};

const char* unsupported_reason_name(UnsupportedReason r);

struct NodeVerdict {
  int node_id = -1;
  std::string node_name;
  Verdict verdict = Verdict::kSupported;
  UnsupportedReason reason = UnsupportedReason::kNone;
  std::string detail;
};

// Per-node support check; the graph must be shape-inferred.
std::vector<NodeVerdict> validate(const graph::ModelGraph& graph,
                                  const OpSupportPolicy& policy);

struct RewriteLog {
  struct Entry {
    std::string rule;
    std::string node_name;
  };
  std::vector<Entry> entries;
};

// Applies rewrite rules to a fixpoint:
//   * SQUARED_DIFFERENCE(a, b)  ->  MUL(SUB(a, b), SUB(a, b))
//   * DENSE on rank >= 2 input  ->  RESHAPE - 1x1 CONV2D - RESHAPE
// Nodes without a rule are left in place for the fallback partition.
// Throws GraphError for batched graphs, which cannot be rewritten away.
graph::ModelGraph rewrite(const graph::ModelGraph& graph,
                          const OpSupportPolicy& policy, RewriteLog* log);

enum class SegmentTarget { kAccelerator, kFallback };

struct Segment {
  SegmentTarget target = SegmentTarget::kAccelerator;
  std::vector<int> node_ids;  // contiguous in topological order
  // Values crossing into the segment (graph inputs or producer node names).
  std::vector<std::string> boundary_inputs;
  std::vector<std::string> boundary_outputs;
};

struct PartitionPlan {
  std::vector<Segment> segments;
  std::vector<NodeVerdict> diagnostics;

  bool fully_accelerated() const {
    return segments.size() == 1 &&
           segments[0].target == SegmentTarget::kAccelerator;
  }
  int fallback_node_count() const;
};

// Groups maximal contiguous runs of supported nodes into accelerator
// segments; every node lands in exactly one segment.
PartitionPlan partition(const graph::ModelGraph& graph,
                        const std::vector<NodeVerdict>& verdicts);

struct BudgetReport {
  int64_t parameter_bytes = 0;
  int64_t budget_bytes = 0;
  bool within_budget = false;
};

BudgetReport check_budget(const graph::ModelGraph& graph,
                          const OpSupportPolicy& policy);

struct CompileReport {
  std::string arch;
  bool quantized = false;
  RewriteLog rewrites;
  PartitionPlan plan;
  BudgetReport budget;
  std::vector<std::string> warnings;

  bool fully_accelerated() const { return plan.fully_accelerated(); }
};

// quantize-check -> rewrite -> validate -> partition -> budget.
CompileReport compile(const graph::ModelGraph& graph,
                      const OpSupportPolicy& policy);

nlohmann::json report_to_json(const CompileReport& report);
std::string report_to_text(const CompileReport& report);

}  // namespace edgeaudio::compiler

#endif  // EDGEAUDIO_COMPILER_HPP_

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
#include "edgeaudio/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "edgeaudio/error.hpp"
#include "edgeaudio/executor.hpp"

namespace edgeaudio::graph {

namespace {

void update_range(CalibrationTable::Range& r, const TensorValue& t,
                  bool first) {
  double lo = first ? std::numeric_limits<double>::infinity() : r.min;
  double hi = first ? -std::numeric_limits<double>::infinity() : r.max;
  for (float v : t.f32()) {
    lo = std::min(lo, static_cast<double>(v));
    hi = std::max(hi, static_cast<double>(v));
  }
  r.min = lo;
  r.max = hi;
}

}  // namespace

CalibrationTable calibrate(
    const ModelGraph& graph,
    const std::vector<std::vector<TensorValue>>& samples) {
  check(!samples.empty(), ErrorCategory::kCalibration,
        "calibration set is empty");
  CalibrationTable table;
  table.input_ranges.resize(graph.inputs.size());
  table.node_ranges.resize(graph.nodes.size());
  bool first = true;
  for (const auto& sample : samples) {
    const ExecResult res = execute_float(graph, sample);
    for (size_t i = 0; i < sample.size(); ++i) {
      update_range(table.input_ranges[i], sample[i], first);
    }
    for (size_t i = 0; i < res.activations.size(); ++i) {
      update_range(table.node_ranges[i], res.activations[i], first);
    }
    first = false;
  }
  return table;
}

QuantParams activation_params(double min_v, double max_v) {
  // Always cover zero so padding and zero activations stay exact.
  min_v = std::min(min_v, 0.0);
  max_v = std::max(max_v, 0.0);
  double scale = (max_v - min_v) / 255.0;
  if (scale < 1e-8) {
    return QuantParams{1e-8, 0};
  }
  const int zp = static_cast<int>(
      std::clamp(std::round(-128.0 - min_v / scale), -128.0, 127.0));
  return QuantParams{scale, zp};
}

QuantParams weight_params(const TensorValue& weights) {
  double max_abs = 0.0;
  for (float v : weights.f32()) {
    max_abs = std::max(max_abs, std::abs(static_cast<double>(v)));
  }
  const double scale = std::max(max_abs / 127.0, 1e-8);
  return QuantParams{scale, 0};
}

ModelGraph fold_batchnorm_pass(const ModelGraph& graph) {
  ModelGraph out = graph;
  // Maps old node id -> new node id (or the id BN collapsed into).
  std::vector<int> remap(graph.nodes.size(), -1);
  std::vector<Node> nodes;
  nodes.reserve(graph.nodes.size());

  for (const Node& n : graph.nodes) {
    if (n.kind == LayerKind::kBatchNorm) {
      check(n.inputs.size() == 1 && !n.inputs[0].is_input(),
            ErrorCategory::kGraph, "batch norm must follow another node");
      const int producer_old = n.inputs[0].node_id();
      const int producer_new = remap[producer_old];
      Node& conv = nodes[producer_new];
      check(conv.kind == LayerKind::kConv2D ||
                conv.kind == LayerKind::kDepthwiseConv2D,
            ErrorCategory::kGraph,
            "batch norm folding requires a convolution producer, node '" +
                n.name + "'");
      const ops::FoldedConv folded = ops::fold_batchnorm(
          conv.weights[0], conv.weights[1], n.weights[0], n.weights[1],
          n.weights[2], n.weights[3], n.attrs.eps);
      conv.weights[0] = folded.weights;
      conv.weights[1] = folded.bias;
      remap[n.id] = producer_new;
      continue;
    }
    Node copy = n;
    copy.id = static_cast<int>(nodes.size());
    for (ValueRef& ref : copy.inputs) {
      if (!ref.is_input()) ref = ValueRef::node(remap[ref.node_id()]);
    }
    remap[n.id] = copy.id;
    nodes.push_back(std::move(copy));
  }

  out.nodes = std::move(nodes);
  for (GraphOutput& o : out.outputs) o.node_id = remap[o.node_id];
  infer_shapes(out);
  return out;
}

ModelGraph quantize_graph(
    const ModelGraph& graph,
    const std::vector<std::vector<TensorValue>>& samples) {
  check(!graph.quantized, ErrorCategory::kGraph, "graph is already quantized");
  ModelGraph folded = fold_batchnorm_pass(graph);
  const CalibrationTable table = calibrate(folded, samples);

  ModelGraph q = folded;
  for (size_t i = 0; i < q.inputs.size(); ++i) {
    q.inputs[i].qp = activation_params(table.input_ranges[i].min,
                                       table.input_ranges[i].max);
  }
  const auto bias_to_i32 = [](const TensorValue& bias_f,
                              double bias_scale) {
    TensorValue bias = TensorValue::zeros(DType::kInt32, bias_f.shape());
    const auto& bf = bias_f.f32();
    auto& bq = bias.i32();
    for (size_t j = 0; j < bf.size(); ++j) {
      const double v = std::round(static_cast<double>(bf[j]) / bias_scale);
      bq[j] =
          static_cast<int32_t>(std::clamp(v, -2147483648.0, 2147483647.0));
    }
    bias.set_quant(QuantParams{bias_scale, 0});
    return bias;
  };

  for (size_t i = 0; i < q.nodes.size(); ++i) {
    Node& n = q.nodes[i];
    n.oqp = activation_params(table.node_ranges[i].min,
                              table.node_ranges[i].max);
    const auto input_qp = [&]() {
      return n.inputs[0].is_input() ? q.inputs[n.inputs[0].input_index()].qp
                                    : q.nodes[n.inputs[0].node_id()].oqp;
    };
    switch (n.kind) {
      case LayerKind::kConv2D:
      case LayerKind::kDepthwiseConv2D:
      case LayerKind::kDense: {
        const QuantParams in_qp = input_qp();
        const QuantParams wq = weight_params(n.weights[0]);
        n.weights[0] = quantize_tensor(n.weights[0], wq);
        // Bias INT32 at scale in_scale * w_scale, zero point 0.
        n.weights[1] = bias_to_i32(n.weights[1], in_qp.scale * wq.scale);
        break;
      }
      case LayerKind::kAttentionSingleHead: {
        // Projection weights are stored INT8 like any other matmul weight;
        // the executor dequantizes them inside the node.
        const QuantParams in_qp = input_qp();
        for (int wi = 0; wi < 8; wi += 2) {
          const QuantParams wq = weight_params(n.weights[wi]);
          n.weights[wi] = quantize_tensor(n.weights[wi], wq);
          n.weights[wi + 1] =
              bias_to_i32(n.weights[wi + 1], in_qp.scale * wq.scale);
        }
        break;
      }
      case LayerKind::kMaxPool2D:
      case LayerKind::kAvgPool2D:
      case LayerKind::kGlobalAvgPool:
      case LayerKind::kRelu6:
      case LayerKind::kReshape:
      case LayerKind::kTranspose:
      case LayerKind::kSlice: {
        // Data-movement and clamp ops keep their input's parameters.
        const QuantParams in_qp =
            n.inputs[0].is_input() ? q.inputs[n.inputs[0].input_index()].qp
                                   : q.nodes[n.inputs[0].node_id()].oqp;
        n.oqp = in_qp;
        break;
      }
      default:
        // Float-fallback and elementwise kinds keep calibrated ranges;
        // remaining weights (layer norm, attention) stay float32 inside the
        // node and are dequantized on the fly.
        break;
    }
  }
  q.quantized = true;
  return q;
}

}  // namespace edgeaudio::graph

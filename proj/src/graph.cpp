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
#include "edgeaudio/graph.hpp"

#include <algorithm>

#include "edgeaudio/error.hpp"

namespace edgeaudio::graph {

const char* layer_kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::kConv2D: return "CONV2D";
    case LayerKind::kDepthwiseConv2D: return "DEPTHWISE_CONV2D";
    case LayerKind::kDense: return "DENSE";
    case LayerKind::kRelu6: return "RELU6";
    case LayerKind::kMaxPool2D: return "MAXPOOL2D";
    case LayerKind::kAvgPool2D: return "AVGPOOL2D";
    case LayerKind::kGlobalAvgPool: return "GLOBAL_AVG_POOL";
    case LayerKind::kSoftmax: return "SOFTMAX";
    case LayerKind::kLayerNorm: return "LAYER_NORM";
    case LayerKind::kAttentionSingleHead: return "ATTENTION_SINGLE_HEAD";
    case LayerKind::kAdd: return "ADD";
    case LayerKind::kMul: return "MUL";
    case LayerKind::kSub: return "SUB";
    case LayerKind::kConcat: return "CONCAT";
    case LayerKind::kReshape: return "RESHAPE";
    case LayerKind::kTranspose: return "TRANSPOSE";
    case LayerKind::kSlice: return "SLICE";
    case LayerKind::kSigmoid: return "SIGMOID";
    case LayerKind::kPosEncoding: return "POS_ENCODING";
    case LayerKind::kBatchNorm: return "BATCHNORM";
    case LayerKind::kSquaredDifference: return "SQUARED_DIFFERENCE";
    case LayerKind::kSubSpectralNorm: return "SUB_SPECTRAL_NORM";
  }
  return "UNKNOWN";
}

std::vector<std::string> weight_roles(LayerKind k) {
  switch (k) {
    case LayerKind::kConv2D:
    case LayerKind::kDepthwiseConv2D:
    case LayerKind::kDense:
      return {"weight", "bias"};
    case LayerKind::kLayerNorm:
      return {"gamma", "beta"};
    case LayerKind::kBatchNorm:
      return {"gamma", "beta", "mean", "variance"};
    case LayerKind::kAttentionSingleHead:
      return {"wq", "bq", "wk", "bk", "wv", "bv", "wo", "bo"};
    default:
      return {};
  }
}

const Node* ModelGraph::find_node(const std::string& name) const {
  for (const Node& n : nodes) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

int64_t node_param_count(const Node& node) {
  int64_t count = 0;
  const auto roles = weight_roles(node.kind);
  for (size_t i = 0; i < node.weights.size(); ++i) {
    // Running statistics are bookkeeping, not trainable parameters.
    if (node.kind == LayerKind::kBatchNorm && i >= 2) continue;
    count += node.weights[i].elems();
  }
  (void)roles;
  return count;
}

int64_t ModelGraph::param_count() const {
  int64_t count = 0;
  for (const Node& n : nodes) count += node_param_count(n);
  return count;
}

int64_t ModelGraph::param_bytes() const {
  int64_t bytes = 0;
  for (const Node& n : nodes) {
    for (const TensorValue& w : n.weights) {
      bytes += static_cast<int64_t>(w.byte_size());
    }
  }
  return bytes;
}

int ModelGraph::add(Node node) {
  node.id = static_cast<int>(nodes.size());
  nodes.push_back(std::move(node));
  return nodes.back().id;
}

namespace {

void expect_inputs(const Node& n, size_t count) {
  check(n.inputs.size() == count, ErrorCategory::kGraph,
        std::string(layer_kind_name(n.kind)) + " node '" + n.name +
            "' expects " + std::to_string(count) + " inputs, has " +
            std::to_string(n.inputs.size()));
}

void expect_weights(const Node& n, size_t count) {
  check(n.weights.size() == count, ErrorCategory::kGraph,
        std::string(layer_kind_name(n.kind)) + " node '" + n.name +
            "' expects " + std::to_string(count) + " weight tensors, has " +
            std::to_string(n.weights.size()));
}

Shape binary_shape(const Node& n, const Shape& a, const Shape& b) {
  if (a == b) return a;
  // Trailing broadcast of b onto a.
  bool suffix = b.size() <= a.size();
  if (suffix) {
    for (size_t i = 0; i < b.size(); ++i) {
      if (b[b.size() - 1 - i] != a[a.size() - 1 - i]) {
        suffix = false;
        break;
      }
    }
  }
  check(suffix, ErrorCategory::kShape,
        "node '" + n.name + "': incompatible operand shapes " + shape_str(a) +
            " vs " + shape_str(b));
  return a;
}

}  // namespace

Shape infer_node_shape(const Node& n, const std::vector<Shape>& in) {
  switch (n.kind) {
    case LayerKind::kConv2D: {
      expect_inputs(n, 1);
      expect_weights(n, 2);
      const Shape& s = in[0];
      check(s.size() == 3, ErrorCategory::kShape,
            "conv2d input must be rank 3, node '" + n.name + "'");
      const TensorValue& w = n.weights[0];
      check(w.rank() == 4 && w.dim(2) == s[2], ErrorCategory::kShape,
            "conv2d weight/channel mismatch at '" + n.name + "'");
      int oh = 0, ow = 0, pad = 0;
      ops::conv_axis_geometry(s[0], w.dim(0), n.attrs.stride.h, n.attrs.padding,
                              &oh, &pad);
      ops::conv_axis_geometry(s[1], w.dim(1), n.attrs.stride.w, n.attrs.padding,
                              &ow, &pad);
      return {oh, ow, w.dim(3)};
    }
    case LayerKind::kDepthwiseConv2D: {
      expect_inputs(n, 1);
      expect_weights(n, 2);
      const Shape& s = in[0];
      check(s.size() == 3, ErrorCategory::kShape,
            "depthwise input must be rank 3, node '" + n.name + "'");
      const TensorValue& w = n.weights[0];
      check(w.rank() == 3 && w.dim(2) == s[2], ErrorCategory::kShape,
            "depthwise kernel/channel mismatch at '" + n.name + "'");
      int oh = 0, ow = 0, pad = 0;
      ops::conv_axis_geometry(s[0], w.dim(0), n.attrs.stride.h, n.attrs.padding,
                              &oh, &pad);
      ops::conv_axis_geometry(s[1], w.dim(1), n.attrs.stride.w, n.attrs.padding,
                              &ow, &pad);
      return {oh, ow, s[2]};
    }
    case LayerKind::kDense: {
      expect_inputs(n, 1);
      expect_weights(n, 2);
      Shape s = in[0];
      const TensorValue& w = n.weights[0];
      check(!s.empty() && w.rank() == 2 && s.back() == w.dim(0),
            ErrorCategory::kShape, "dense dimension mismatch at '" + n.name +
                                       "': input " + shape_str(in[0]) +
                                       " weights " + shape_str(w.shape()));
      s.back() = w.dim(1);
      return s;
    }
    case LayerKind::kRelu6:
    case LayerKind::kSigmoid:
    case LayerKind::kSoftmax:
    case LayerKind::kPosEncoding:
    case LayerKind::kSubSpectralNorm:
      expect_inputs(n, 1);
      return in[0];
    case LayerKind::kLayerNorm: {
      expect_inputs(n, 1);
      expect_weights(n, 2);
      check(n.weights[0].dim(0) == in[0].back(), ErrorCategory::kShape,
            "layer_norm parameter mismatch at '" + n.name + "'");
      return in[0];
    }
    case LayerKind::kBatchNorm: {
      expect_inputs(n, 1);
      expect_weights(n, 4);
      check(n.weights[0].dim(0) == in[0].back(), ErrorCategory::kShape,
            "batch_norm parameter mismatch at '" + n.name + "'");
      return in[0];
    }
    case LayerKind::kMaxPool2D:
    case LayerKind::kAvgPool2D: {
      expect_inputs(n, 1);
      const Shape& s = in[0];
      check(s.size() == 3, ErrorCategory::kShape,
            "pool input must be rank 3, node '" + n.name + "'");
      int oh = 0, ow = 0, pad = 0;
      ops::conv_axis_geometry(s[0], n.attrs.window.h, n.attrs.stride.h,
                              n.attrs.padding, &oh, &pad);
      ops::conv_axis_geometry(s[1], n.attrs.window.w, n.attrs.stride.w,
                              n.attrs.padding, &ow, &pad);
      return {oh, ow, s[2]};
    }
    case LayerKind::kGlobalAvgPool: {
      expect_inputs(n, 1);
      check(in[0].size() >= 2, ErrorCategory::kShape,
            "global_avg_pool input must have rank >= 2");
      return {in[0].back()};
    }
    case LayerKind::kAttentionSingleHead: {
      expect_inputs(n, 1);
      expect_weights(n, 8);
      check(in[0].size() == 2 && n.weights[0].dim(0) == in[0][1],
            ErrorCategory::kShape,
            "attention expects [n x d] tokens at '" + n.name + "'");
      return in[0];
    }
    case LayerKind::kAdd:
    case LayerKind::kMul:
    case LayerKind::kSub:
    case LayerKind::kSquaredDifference: {
      expect_inputs(n, 2);
      return binary_shape(n, in[0], in[1]);
    }
    case LayerKind::kConcat: {
      check(!n.inputs.empty(), ErrorCategory::kGraph,
            "concat node '" + n.name + "' has no inputs");
      Shape s = in[0];
      int axis = n.attrs.axis < 0 ? n.attrs.axis + static_cast<int>(s.size())
                                  : n.attrs.axis;
      check(axis >= 0 && axis < static_cast<int>(s.size()),
            ErrorCategory::kShape, "concat axis out of range at '" + n.name +
                                       "'");
      for (size_t i = 1; i < in.size(); ++i) {
        check(in[i].size() == s.size(), ErrorCategory::kShape,
              "concat rank mismatch at '" + n.name + "'");
        for (size_t d = 0; d < s.size(); ++d) {
          if (static_cast<int>(d) == axis) continue;
          check(in[i][d] == s[d], ErrorCategory::kShape,
                "concat shape mismatch at '" + n.name + "'");
        }
        s[axis] += in[i][axis];
      }
      return s;
    }
    case LayerKind::kReshape: {
      expect_inputs(n, 1);
      check(shape_elems(n.attrs.new_shape) == shape_elems(in[0]),
            ErrorCategory::kShape,
            "reshape changes element count at '" + n.name + "': " +
                shape_str(in[0]) + " -> " + shape_str(n.attrs.new_shape));
      return n.attrs.new_shape;
    }
    case LayerKind::kTranspose: {
      expect_inputs(n, 1);
      const Shape& s = in[0];
      std::vector<int> perm = n.attrs.perm;
      if (perm.empty()) {
        check(s.size() == 2, ErrorCategory::kShape,
              "transpose without perm requires rank 2 at '" + n.name + "'");
        perm = {1, 0};
      }
      check(perm.size() == s.size(), ErrorCategory::kShape,
            "transpose perm rank mismatch at '" + n.name + "'");
      Shape out(s.size());
      for (size_t i = 0; i < perm.size(); ++i) out[i] = s[perm[i]];
      return out;
    }
    case LayerKind::kSlice: {
      expect_inputs(n, 1);
      const Shape& s = in[0];
      check(n.attrs.begin.size() == s.size() &&
                n.attrs.size.size() == s.size(),
            ErrorCategory::kShape, "slice begin/size rank mismatch at '" +
                                       n.name + "'");
      Shape out(s.size());
      for (size_t i = 0; i < s.size(); ++i) {
        const int b = n.attrs.begin[i];
        const int sz = n.attrs.size[i];
        check(b >= 0 && sz > 0 && b + sz <= s[i], ErrorCategory::kShape,
              "slice out of range at '" + n.name + "'");
        out[i] = sz;
      }
      return out;
    }
  }
  raise(ErrorCategory::kGraph, "unknown layer kind");
}

void infer_shapes(ModelGraph& graph) {
  check(!graph.inputs.empty(), ErrorCategory::kGraph, "graph has no inputs");
  for (size_t i = 0; i < graph.nodes.size(); ++i) {
    Node& n = graph.nodes[i];
    check(n.id == static_cast<int>(i), ErrorCategory::kGraph,
          "node ids must be dense and ordered");
    std::vector<Shape> in_shapes;
    in_shapes.reserve(n.inputs.size());
    for (const ValueRef& ref : n.inputs) {
      if (ref.is_input()) {
        check(ref.input_index() < static_cast<int>(graph.inputs.size()),
              ErrorCategory::kGraph,
              "node '" + n.name + "' references missing graph input");
        in_shapes.push_back(graph.inputs[ref.input_index()].shape);
      } else {
        check(ref.node_id() < n.id, ErrorCategory::kGraph,
              "node '" + n.name + "' references a later node; graph must be "
              "topologically ordered");
        in_shapes.push_back(graph.nodes[ref.node_id()].out_shape);
      }
    }
    n.out_shape = infer_node_shape(n, in_shapes);
  }
  for (const GraphOutput& out : graph.outputs) {
    check(out.node_id >= 0 &&
              out.node_id < static_cast<int>(graph.nodes.size()),
          ErrorCategory::kGraph, "graph output references missing node");
  }
}

}  // namespace edgeaudio::graph

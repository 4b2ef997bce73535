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
// Static inference graph: an ordered DAG of layer nodes with constant
// weights and fully static shapes. Node inputs refer either to earlier
// nodes (by id) or to graph inputs.

#ifndef EDGEAUDIO_GRAPH_HPP_
#define EDGEAUDIO_GRAPH_HPP_

#include <string>
#include <vector>

#include "edgeaudio/ops.hpp"
#include "edgeaudio/tensor.hpp"

namespace edgeaudio::graph {

enum class LayerKind {
  kConv2D,
  kDepthwiseConv2D,
  kDense,
  kRelu6,
  kMaxPool2D,
  kAvgPool2D,
  kGlobalAvgPool,
  kSoftmax,
  kLayerNorm,
  kAttentionSingleHead,
  kAdd,
  kMul,
  kSub,
  kConcat,
  kReshape,
  kTranspose,
  kSlice,
  kSigmoid,
  kPosEncoding,
  kBatchNorm,
  // Present in the IR for compiler stress cases; never emitted by builders.
  kSquaredDifference,
  kSubSpectralNorm,
};

const char* layer_kind_name(LayerKind k);

// Attributes are a flat union; each kind reads the fields it needs.
struct Attrs {
  ops::Stride2D stride;
  ops::Window2D window;
  ops::Padding padding = ops::Padding::kValid;
  int units = 0;
  int axis = -1;
  double eps = 1e-3;
  Shape new_shape;          // kReshape
  std::vector<int> perm;    // kTranspose
  std::vector<int> begin;   // kSlice
  std::vector<int> size;    // kSlice
};

// Reference to a value: node output (id >= 0) or graph input (~input_index).
struct ValueRef {
  int ref = 0;

  static ValueRef node(int id) { return {id}; }
  static ValueRef input(int index) { return {~index}; }
  bool is_input() const { return ref < 0; }
  int input_index() const { return ~ref; }
  int node_id() const { return ref; }
};

struct Node {
  int id = -1;
  std::string name;
  LayerKind kind = LayerKind::kRelu6;
  std::vector<ValueRef> inputs;
  Attrs attrs;
  // Weight tensors in the kind's canonical role order (see weight_roles).
  std::vector<TensorValue> weights;

  // Filled by infer_shapes.
  Shape out_shape;
  // Output quantization, meaningful once the graph is quantized.
  QuantParams oqp;
};

// Canonical weight-role names per kind (e.g. {"weight","bias"}).
std::vector<std::string> weight_roles(LayerKind k);

struct GraphInput {
  std::string name;
  Shape shape;
  QuantParams qp;  // meaningful once quantized
};

struct GraphOutput {
  std::string name;
  int node_id = -1;
};

struct ModelGraph {
  std::string arch;  // "kws", "emotion", or "custom"
  std::vector<std::string> labels;
  std::vector<GraphInput> inputs;
  std::vector<Node> nodes;  // topological order
  std::vector<GraphOutput> outputs;
  bool quantized = false;
  int batch = 1;  // leading batch extent; accelerators require 1

  const Node* find_node(const std::string& name) const;
  int64_t param_count() const;     // trainable parameters
  int64_t param_bytes() const;     // storage bytes of all weight tensors

  // Appends a node and returns its id.
  int add(Node node);
};

// Number of trainable parameters of one node (BatchNorm running stats are
// not trainable and are excluded).
int64_t node_param_count(const Node& node);

// Computes and stores every node's out_shape; validates reference order,
// weight shapes and attribute consistency. Throws GraphError / ShapeError.
void infer_shapes(ModelGraph& graph);

Shape infer_node_shape(const Node& node,
                       const std::vector<Shape>& input_shapes);

}  // namespace edgeaudio::graph

#endif  // EDGEAUDIO_GRAPH_HPP_

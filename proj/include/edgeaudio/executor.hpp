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
#ifndef EDGEAUDIO_EXECUTOR_HPP_
#define EDGEAUDIO_EXECUTOR_HPP_

#include <vector>

#include "edgeaudio/graph.hpp"

namespace edgeaudio::graph {

// One activation per node, in node order, plus the graph outputs by name.
struct ExecResult {
  std::vector<TensorValue> activations;

  const TensorValue& of(const ModelGraph& g, const std::string& node_name) const;
  std::vector<TensorValue> outputs(const ModelGraph& g) const;
};

// Runs the float32 path. `inputs` must match graph.inputs order and shapes.
ExecResult execute_float(const ModelGraph& graph,
                         const std::vector<TensorValue>& inputs);

// Runs the INT8 path of a quantized graph. Float inputs are quantized with
// the stored input parameters; activations stay int8 between nodes.
// Convolutions and dense layers accumulate in INT32; lookup-style ops
// (softmax, layer norm, sigmoid, attention) dequantize, run in float and
// requantize their output.
ExecResult execute_quantized(const ModelGraph& graph,
                             const std::vector<TensorValue>& inputs);

// Dequantized float views of the quantized graph outputs.
std::vector<TensorValue> execute_quantized_dequant(
    const ModelGraph& graph, const std::vector<TensorValue>& inputs);

}  // namespace edgeaudio::graph

#endif  // EDGEAUDIO_EXECUTOR_HPP_

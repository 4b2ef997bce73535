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
#ifndef EDGEAUDIO_QUANTIZE_HPP_
#define EDGEAUDIO_QUANTIZE_HPP_

#include <vector>

#include "edgeaudio/graph.hpp"

namespace edgeaudio::graph {

// Observed float range of every graph input and node output.
struct CalibrationTable {
  struct Range {
    double min = 0.0;
    double max = 0.0;
  };
  std::vector<Range> input_ranges;  // per graph input
  std::vector<Range> node_ranges;   // per node
};

// Runs the float path over the calibration set and records min/max ranges.
// Throws CalibrationError on an empty set.
CalibrationTable calibrate(const ModelGraph& graph,
                           const std::vector<std::vector<TensorValue>>& samples);

// Activation parameters from an observed range: scale = (max-min)/255 with a
// 1e-8 floor, zero point placed so the range covers [min, max].
QuantParams activation_params(double min_v, double max_v);

// Symmetric weight parameters: scale = max|w| / 127, zero point 0.
QuantParams weight_params(const TensorValue& weights);

// Folds every BatchNorm node into its producer convolution and drops the BN
// node. Requires conv -> BN adjacency, which the builders guarantee.
ModelGraph fold_batchnorm_pass(const ModelGraph& graph);

// Produces the INT8 twin of a float graph: BN folded, weights quantized
// symmetric, biases INT32 at scale in_scale*w_scale, activation parameters
// from the calibration table (re-run after folding).
ModelGraph quantize_graph(const ModelGraph& graph,
                          const std::vector<std::vector<TensorValue>>& samples);

}  // namespace edgeaudio::graph

#endif  // EDGEAUDIO_QUANTIZE_HPP_

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
#ifndef EDGEAUDIO_WEIGHTS_HPP_
#define EDGEAUDIO_WEIGHTS_HPP_

#include <string>

#include "edgeaudio/graph.hpp"

namespace edgeaudio::models {

// Serializes a built model (float or quantized) into the tensor container.
// Tensor names are "<node>/<role>"; the meta block records the architecture,
// builder parameters, labels, and per-node quantization so that loading
// reproduces bit-identical inference.
void save_weights(const graph::ModelGraph& model, const std::string& path);

// Rebuilds the architecture from the manifest and fills in the stored
// tensors. Missing tensors, shape mismatches and dtype mismatches raise
// distinct Manifest errors.
graph::ModelGraph load_weights(const std::string& path);

// Copies every "kw/kws/..." tensor of the emotion model from a keyword
// model's weights (node prefix "kws/..."), i.e. installs a trained frozen
// embedding branch. Both graphs must be float (pre-quantization).
void import_kws_branch(graph::ModelGraph& emotion,
                       const graph::ModelGraph& kws);

}  // namespace edgeaudio::models

#endif  // EDGEAUDIO_WEIGHTS_HPP_

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
// Model builders and inference entry points.
//
//  * kws: residual depthwise-separable CNN with squeeze-excitation gating.
//    Consumes a 32x490 log-mel window (five seconds minus the edge frames)
//    and emits five per-second distributions over the keyword classes in a
//    single pass, plus a 256-d embedding tapped from the pooled features.
//
//  * emotion: late-fusion classifier. One branch clips the spectrogram to
//    the keyword model's input, runs the frozen keyword feature extractor
//    and adapts its embedding; the other encodes the full 32x498
//    spectrogram with strided conv blocks and a 4-block single-head
//    transformer encoder; a shared head fuses both embeddings into five
//    emotion probabilities.

#ifndef EDGEAUDIO_MODELS_HPP_
#define EDGEAUDIO_MODELS_HPP_

#include <string>
#include <vector>

#include "edgeaudio/frontend.hpp"
#include "edgeaudio/graph.hpp"

namespace edgeaudio::models {

inline constexpr int kKwsInputFrames = 490;
inline constexpr int kEmotionInputFrames = 498;
inline constexpr int kMelChannels = 32;
inline constexpr int kEmbeddingDim = 256;
inline constexpr int kKwsPredictionsPerClip = 5;

struct BuildOptions {
  uint64_t seed = 20260809;
  // Global multiplier on the fan-in-scaled random init.
  double init_scale = 1.0;
  // Typical magnitude of raw log-mel counts; first-layer inits are divided
  // by this so randomly initialized graphs do not saturate their ReLU6s.
  double input_rms = 400.0;
};

// Keyword model per the published layer table. Outputs:
//   "probs"     [5 x num_classes]  (row-stochastic)
//   "embedding" [256]              (pooled features for the fusion model)
graph::ModelGraph build_kws_model(int num_classes = 51, int se_reduction = 8,
                                  const BuildOptions& opts = {});

// Late-fusion emotion model; single input [32 x 498], output "probs" [5].
graph::ModelGraph build_emotion_model(int d_model = 128, int se_reduction = 8,
                                      const BuildOptions& opts = {});

std::vector<std::string> emotion_labels();
std::vector<std::string> kws_labels(int num_classes = 51);

struct KwsOutput {
  TensorValue probs;  // [5 x num_classes]
};

struct EmotionOutput {
  std::vector<float> probs;  // over (happy, neutral, sad, angry, none)
};

struct KwsEmbedding {
  std::vector<float> vector;  // length 256
};

TensorValue spectrogram_to_tensor(const frontend::Spectrogram& spec);

KwsOutput infer_kws(const graph::ModelGraph& model,
                    const frontend::Spectrogram& spec);
EmotionOutput infer_emotion(const graph::ModelGraph& model,
                            const frontend::Spectrogram& spec);
KwsEmbedding extract_kws_embedding(const graph::ModelGraph& kws,
                                   const frontend::Spectrogram& spec);

// Tensor-level variants used when the caller already has a float tensor.
KwsOutput infer_kws_tensor(const graph::ModelGraph& model,
                           const TensorValue& input);
EmotionOutput infer_emotion_tensor(const graph::ModelGraph& model,
                                   const TensorValue& input);

// ---------------------------------------------------------------------------
// Parameter reconciliation
// ---------------------------------------------------------------------------

// One architecture-table row. `params` is counted from the built graph;
// `design_params` is the architecture's published size for that row (-1 when
// the design table has no figure). The two differ where the design document
// is not reproducible from standard parameter formulas; the summary reports
// the delta instead of forcing agreement.
struct SummaryRow {
  std::string section;
  std::string operation;
  Shape input_shape;
  int64_t params = 0;
  int64_t design_params = -1;
};

struct ModelSummary {
  std::string arch;
  std::vector<SummaryRow> rows;
  int64_t total_params = 0;
  int64_t design_total = 0;
};

ModelSummary model_summary(const graph::ModelGraph& model);

std::string summary_table(const ModelSummary& summary);
void write_summary_csv(const std::string& path, const ModelSummary& summary);

// Parameters of the embedded keyword feature extractor inside the emotion
// graph (the frozen branch), and the remainder.
int64_t kws_branch_param_count(const graph::ModelGraph& emotion);
int64_t non_kws_param_count(const graph::ModelGraph& emotion);

}  // namespace edgeaudio::models

#endif  // EDGEAUDIO_MODELS_HPP_

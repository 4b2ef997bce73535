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
// Single-file tensor container:
//
//   bytes 0..3   magic "EATC"
//   bytes 4..7   uint32 LE, manifest length M
//   bytes 8..8+M JSON manifest (names, shapes, dtypes, quantization
//                parameters, byte offsets, blob checksum, free-form meta)
//   rest         raw little-endian tensor payloads
//
// The same format carries single spectrograms and full weight sets; the
// manifest's "meta" object distinguishes them.

#ifndef EDGEAUDIO_CONTAINER_HPP_
#define EDGEAUDIO_CONTAINER_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "edgeaudio/error.hpp"
#include "edgeaudio/frontend.hpp"
#include "edgeaudio/tensor.hpp"

namespace edgeaudio {

struct NamedTensor {
  std::string name;
  TensorValue value;
};

struct Container {
  std::vector<NamedTensor> tensors;
  nlohmann::json meta;

  const NamedTensor* find(const std::string& name) const;
};

void write_container(const std::string& path,
                     const std::vector<NamedTensor>& tensors,
                     const nlohmann::json& meta);

// Throws with the given category on structural damage (bad magic, truncation,
// checksum mismatch, manifest/blob disagreement).
Container read_container(const std::string& path,
                         ErrorCategory error_category = ErrorCategory::kContainer);

// Spectrogram convenience wrappers (stored as one INT16 tensor "spectrogram"
// with frontend metadata).
void write_spectrogram_container(const std::string& path,
                                 const frontend::Spectrogram& spec);
frontend::Spectrogram read_spectrogram_container(const std::string& path);

uint64_t fnv1a64(const void* data, size_t bytes, uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace edgeaudio

#endif  // EDGEAUDIO_CONTAINER_HPP_

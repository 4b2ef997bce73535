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
#ifndef EDGEAUDIO_WAV_HPP_
#define EDGEAUDIO_WAV_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace edgeaudio {

// Mono INT16 PCM clip, the raw unit the whole pipeline operates on.
struct PcmBuffer {
  std::vector<int16_t> samples;
  int sample_rate_hz = 16000;

  int64_t size() const { return static_cast<int64_t>(samples.size()); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// Decoded WAV payload; channels are interleaved.
struct WavData {
  int sample_rate_hz = 0;
  int num_channels = 0;
  std::vector<int16_t> samples;  // interleaved

  int64_t frames() const {
    return num_channels == 0 ? 0
                             : static_cast<int64_t>(samples.size()) /
                                   num_channels;
  }
};

// Reads a 16-bit PCM RIFF/WAVE file. Anything else (float WAV, 24-bit,
// compressed) is rejected with an Io error.
WavData read_wav(const std::string& path);

// Convenience: read and require mono 16 kHz, the frontend's input contract.
PcmBuffer read_wav_mono16k(const std::string& path);

void write_wav(const std::string& path, const WavData& wav);
void write_wav(const std::string& path, const PcmBuffer& pcm);

}  // namespace edgeaudio

#endif  // EDGEAUDIO_WAV_HPP_

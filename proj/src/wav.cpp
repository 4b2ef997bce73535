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
#include "edgeaudio/wav.hpp"

#include <cstring>
#include <fstream>

#include "edgeaudio/error.hpp"

namespace edgeaudio {

namespace {

uint32_t read_u32le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16le(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32le(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 24) & 0xff);
}

void put_u16le(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.good(), ErrorCategory::kIo, "cannot open WAV file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  check(bytes.size() >= 44, ErrorCategory::kIo, "WAV file too short: " + path);
  check(std::memcmp(bytes.data(), "RIFF", 4) == 0 &&
            std::memcmp(bytes.data() + 8, "WAVE", 4) == 0,
        ErrorCategory::kIo, "not a RIFF/WAVE file: " + path);

  WavData wav;
  bool have_fmt = false;
  bool have_data = false;
  uint16_t bits_per_sample = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const uint32_t chunk_size = read_u32le(bytes.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      raise(ErrorCategory::kIo, "truncated WAV chunk in " + path);
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      check(chunk_size >= 16, ErrorCategory::kIo, "bad fmt chunk");
      const uint16_t format = read_u16le(bytes.data() + body);
      wav.num_channels = read_u16le(bytes.data() + body + 2);
      wav.sample_rate_hz = static_cast<int>(read_u32le(bytes.data() + body + 4));
      bits_per_sample = read_u16le(bytes.data() + body + 14);
      check(format == 1, ErrorCategory::kIo,
            "only PCM WAV is supported (format tag " + std::to_string(format) +
                ")");
      check(bits_per_sample == 16, ErrorCategory::kIo,
            "only 16-bit WAV is supported (got " +
                std::to_string(bits_per_sample) + " bits)");
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      check(have_fmt, ErrorCategory::kIo, "data chunk before fmt chunk");
      const size_t n = chunk_size / 2;
      wav.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        wav.samples[i] = static_cast<int16_t>(
            read_u16le(bytes.data() + body + 2 * i));
      }
      have_data = true;
    }
    // Chunks are word-aligned.
    pos = body + chunk_size + (chunk_size & 1);
  }
  check(have_fmt && have_data, ErrorCategory::kIo,
        "missing fmt or data chunk in " + path);
  check(wav.num_channels >= 1, ErrorCategory::kIo, "zero-channel WAV");
  return wav;
}

PcmBuffer read_wav_mono16k(const std::string& path) {
  WavData wav = read_wav(path);
  check(wav.num_channels == 1, ErrorCategory::kChannel,
        "expected mono input, got " + std::to_string(wav.num_channels) +
            " channels: " + path);
  check(wav.sample_rate_hz == 16000, ErrorCategory::kConfig,
        "expected 16 kHz input, got " + std::to_string(wav.sample_rate_hz) +
            " Hz: " + path);
  PcmBuffer pcm;
  pcm.sample_rate_hz = wav.sample_rate_hz;
  pcm.samples = std::move(wav.samples);
  return pcm;
}

void write_wav(const std::string& path, const WavData& wav) {
  check(wav.num_channels >= 1, ErrorCategory::kConfig, "zero-channel WAV");
  const uint32_t data_bytes = static_cast<uint32_t>(wav.samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32le(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32le(out, 16);
  put_u16le(out, 1);  // PCM
  put_u16le(out, static_cast<uint16_t>(wav.num_channels));
  put_u32le(out, static_cast<uint32_t>(wav.sample_rate_hz));
  put_u32le(out, static_cast<uint32_t>(wav.sample_rate_hz * wav.num_channels *
                                       2));
  put_u16le(out, static_cast<uint16_t>(wav.num_channels * 2));
  put_u16le(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32le(out, data_bytes);
  for (int16_t s : wav.samples) {
    put_u16le(out, static_cast<uint16_t>(s));
  }
  std::ofstream f(path, std::ios::binary);
  check(f.good(), ErrorCategory::kIo, "cannot write WAV file: " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  check(f.good(), ErrorCategory::kIo, "short write: " + path);
}

void write_wav(const std::string& path, const PcmBuffer& pcm) {
  WavData wav;
  wav.sample_rate_hz = pcm.sample_rate_hz;
  wav.num_channels = 1;
  wav.samples = pcm.samples;
  write_wav(path, wav);
}

}  // namespace edgeaudio

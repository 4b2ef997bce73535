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
// Fixed-point log-mel feature pipeline:
//
//   INT16 PCM -> framing -> window -> FFT power -> mel filterbank
//             -> noise reduction -> (optional per-channel gain) -> log scale
//
// Spectral analysis runs in double precision; everything after the mel
// filterbank is integer arithmetic so that batch and streaming extraction
// are bit-identical and the result matches what a microcontroller build of
// the same pipeline would produce.

#ifndef EDGEAUDIO_FRONTEND_HPP_
#define EDGEAUDIO_FRONTEND_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "edgeaudio/wav.hpp"

namespace edgeaudio::frontend {

enum class WindowKind { kKaiser, kHann };

struct FrontendConfig {
  int window_ms = 25;
  int hop_ms = 10;
  int num_channels = 32;
  double lower_hz = 80.0;
  double upper_hz = 7600.0;

  bool noise_reduction_enabled = true;
  int smoothing_bits = 10;
  double even_smoothing = 0.025;
  double odd_smoothing = 0.06;
  double min_signal_remaining = 0.05;

  bool pcan_enabled = false;
  double pcan_strength = 0.95;
  double pcan_offset = 80.0;

  int log_scale_shift = 6;

  WindowKind window_kind = WindowKind::kKaiser;
  double kaiser_beta = 6.0;
  int fft_size = 512;

  int window_length(int sample_rate_hz = 16000) const {
    return window_ms * sample_rate_hz / 1000;
  }
  int hop_length(int sample_rate_hz = 16000) const {
    return hop_ms * sample_rate_hz / 1000;
  }
};

// Throws ConfigError when a field is out of contract.
void validate_config(const FrontendConfig& cfg, int sample_rate_hz = 16000);

// Power-of-two FFT bins of mel power are scaled down by this many bits before
// entering the UINT32 integer stages; chosen so a full-scale 25 ms INT16
// frame cannot overflow a channel energy.
inline constexpr int kEnergyScaleBits = 18;

// Per-channel running noise estimate, stored with smoothing_bits extra
// fractional bits as UINT32.
struct NoiseState {
  std::vector<uint32_t> estimate_scaled;

  static NoiseState zeros(int num_channels) {
    return NoiseState{std::vector<uint32_t>(num_channels, 0)};
  }
  // Estimate in plain energy units (fractional bits rounded away).
  uint32_t estimate(int channel, int smoothing_bits) const;
};

// Log-mel feature matrix, row-major [num_channels x num_frames]. Values are
// round(ln(energy) * 2^log_scale_shift) counts.
struct Spectrogram {
  int num_channels = 0;
  int num_frames = 0;
  int frame_duration_ms = 10;
  int log_scale_shift = 6;
  std::vector<uint16_t> values;

  uint16_t at(int channel, int frame) const {
    return values[static_cast<size_t>(channel) * num_frames + frame];
  }
  uint16_t& at(int channel, int frame) {
    return values[static_cast<size_t>(channel) * num_frames + frame];
  }
};

int64_t frame_count(int64_t num_samples, const FrontendConfig& cfg);

// Splits the signal into overlapping windows. Views alias `pcm.samples`.
// Throws SignalTooShort when the input is shorter than one window.
std::vector<std::span<const int16_t>> frame_signal(const PcmBuffer& pcm,
                                                   const FrontendConfig& cfg);

// Window coefficients for the configured kind, length == window_length.
std::vector<double> window_coefficients(const FrontendConfig& cfg,
                                        int sample_rate_hz = 16000);

// |DFT(window .* frame, zero-padded to fft_size)|^2 for bins 0..fft_size/2.
std::vector<double> power_spectrum(std::span<const int16_t> frame,
                                   const FrontendConfig& cfg);

// Triangular mel filterbank, peaks equally spaced on the mel scale between
// mel(lower_hz) and mel(upper_hz).
class MelFilterbank {
 public:
  MelFilterbank(const FrontendConfig& cfg, int sample_rate_hz = 16000);

  // power has fft_size/2 + 1 bins.
  std::vector<double> apply(std::span<const double> power) const;

  // Sum of the triangle weights of one channel (white-spectrum response).
  double weight_sum(int channel) const;

  int num_channels() const { return num_channels_; }

 private:
  int num_channels_;
  int num_bins_;
  std::vector<double> weights_;  // [num_channels_ x num_bins_]
};

std::vector<double> mel_filterbank(std::span<const double> power,
                                   const FrontendConfig& cfg);

// One step of the running spectral-subtraction noise reducer.
//   estimate <- estimate*(1-s) + energy*s   (s has smoothing_bits frac bits)
//   output   <- max(energy - estimate, min_signal_remaining * energy)
// Throws StateError when state size does not match.
std::vector<uint32_t> noise_reduce(std::span<const uint32_t> energies,
                                   NoiseState& state,
                                   const FrontendConfig& cfg);

// Optional auto-gain driven by the smoothed noise estimate. Identity when
// pcan_enabled is false or strength is 0.
std::vector<uint32_t> pcan_gain(std::span<const uint32_t> energies,
                                const NoiseState& state,
                                const FrontendConfig& cfg);

// round(ln(max(energy, 1)) * 2^log_scale_shift), integer arithmetic only
// (normalize, 64-segment lookup table, linear interpolation). Stays within
// +/-1 count of the floating-point value.
uint16_t log_compress(uint32_t energy, const FrontendConfig& cfg);

// Mel energies of one frame quantized to the UINT32 integer domain.
std::vector<uint32_t> quantize_energies(std::span<const double> mel);

// Incremental extractor. Feeding a signal in arbitrary chunks produces the
// same columns as one batch call; noise state threads across frames.
class FrontendStreamer {
 public:
  explicit FrontendStreamer(const FrontendConfig& cfg,
                            int sample_rate_hz = 16000);

  // Consumes samples and returns the feature columns completed by this chunk
  // (possibly none), each of length num_channels.
  std::vector<std::vector<uint16_t>> push(std::span<const int16_t> samples);

  void reset_noise_state();
  const NoiseState& noise_state() const { return noise_state_; }
  int64_t frames_emitted() const { return frames_emitted_; }

 private:
  std::vector<uint16_t> process_frame(std::span<const int16_t> frame);

  FrontendConfig cfg_;
  MelFilterbank filterbank_;
  NoiseState noise_state_;
  std::vector<int16_t> pending_;
  int64_t frames_emitted_ = 0;

  friend Spectrogram compute_spectrogram(const PcmBuffer&,
                                         const FrontendConfig&);
};

// Whole-clip extraction; exactly frame_count(N) columns.
Spectrogram compute_spectrogram(const PcmBuffer& pcm,
                                const FrontendConfig& cfg);

void write_spectrogram_csv(const std::string& path, const Spectrogram& spec);

}  // namespace edgeaudio::frontend

#endif  // EDGEAUDIO_FRONTEND_HPP_

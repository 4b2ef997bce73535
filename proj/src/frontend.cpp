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
#include "edgeaudio/frontend.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>

#include "edgeaudio/error.hpp"

namespace edgeaudio::frontend {

namespace {

constexpr double kMelBreakHz = 700.0;
constexpr double kMelScale = 1127.0;

double hz_to_mel(double hz) { return kMelScale * std::log1p(hz / kMelBreakHz); }

// Zeroth-order modified Bessel function, power series.
double bessel_i0(double x) {
  double sum = 1.0;
  double term = 1.0;
  const double half_x = x / 2.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half_x / k) * (half_x / k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// In-place radix-2 FFT; n must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// ln(1 + i/64) in Q16, 65 entries. Interpolating this table keeps the
// integer log within a small fraction of one output count.
std::array<uint32_t, 65> build_log_table() {
  std::array<uint32_t, 65> t{};
  for (int i = 0; i <= 64; ++i) {
    t[i] = static_cast<uint32_t>(
        std::lround(std::log1p(static_cast<double>(i) / 64.0) * 65536.0));
  }
  return t;
}

const std::array<uint32_t, 65>& log_table() {
  static const std::array<uint32_t, 65> t = build_log_table();
  return t;
}

// round(ln 2 * 2^16)
constexpr uint32_t kLn2Q16 = 45426;

}  // namespace

void validate_config(const FrontendConfig& cfg, int sample_rate_hz) {
  check(sample_rate_hz == 16000, ErrorCategory::kConfig,
        "sample rate must be 16000 Hz");
  check(cfg.window_ms > 0 && cfg.hop_ms > 0, ErrorCategory::kConfig,
        "window and hop must be positive");
  check(cfg.fft_size > 0 && std::has_single_bit(static_cast<uint32_t>(cfg.fft_size)),
        ErrorCategory::kConfig, "fft_size must be a power of two");
  check(cfg.window_length(sample_rate_hz) <= cfg.fft_size,
        ErrorCategory::kConfig, "window length exceeds fft_size");
  check(cfg.num_channels >= 1, ErrorCategory::kConfig,
        "num_channels must be >= 1");
  check(cfg.lower_hz < cfg.upper_hz && cfg.upper_hz <= sample_rate_hz / 2.0,
        ErrorCategory::kConfig, "mel band edges out of range");
  check(cfg.min_signal_remaining > 0.0 && cfg.min_signal_remaining < 1.0,
        ErrorCategory::kConfig, "min_signal_remaining must be in (0,1)");
  check(cfg.even_smoothing >= 0.0 && cfg.even_smoothing <= 1.0 &&
            cfg.odd_smoothing >= 0.0 && cfg.odd_smoothing <= 1.0,
        ErrorCategory::kConfig, "smoothing coefficients must be in [0,1]");
  check(cfg.smoothing_bits > 0 && cfg.smoothing_bits < 16,
        ErrorCategory::kConfig, "smoothing_bits out of range");
  check(cfg.log_scale_shift >= 0 && cfg.log_scale_shift <= 10,
        ErrorCategory::kConfig, "log_scale_shift out of range");
}

uint32_t NoiseState::estimate(int channel, int smoothing_bits) const {
  const uint32_t half = 1u << (smoothing_bits - 1);
  return (estimate_scaled[channel] + half) >> smoothing_bits;
}

int64_t frame_count(int64_t num_samples, const FrontendConfig& cfg) {
  const int win = cfg.window_length();
  const int hop = cfg.hop_length();
  if (num_samples < win) return 0;
  return (num_samples - win) / hop + 1;
}

std::vector<std::span<const int16_t>> frame_signal(const PcmBuffer& pcm,
                                                   const FrontendConfig& cfg) {
  validate_config(cfg, pcm.sample_rate_hz);
  const int win = cfg.window_length();
  const int hop = cfg.hop_length();
  check(pcm.size() >= win, ErrorCategory::kSignalTooShort,
        "input has " + std::to_string(pcm.size()) + " samples, need at least " +
            std::to_string(win));
  const int64_t n = frame_count(pcm.size(), cfg);
  std::vector<std::span<const int16_t>> frames;
  frames.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    frames.emplace_back(pcm.samples.data() + i * hop, static_cast<size_t>(win));
  }
  return frames;
}

std::vector<double> window_coefficients(const FrontendConfig& cfg,
                                        int sample_rate_hz) {
  const int n = cfg.window_length(sample_rate_hz);
  std::vector<double> w(n);
  if (cfg.window_kind == WindowKind::kHann) {
    for (int i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / (n - 1));
    }
  } else {
    const double denom = bessel_i0(cfg.kaiser_beta);
    for (int i = 0; i < n; ++i) {
      const double r = 2.0 * i / (n - 1) - 1.0;
      w[i] = bessel_i0(cfg.kaiser_beta * std::sqrt(1.0 - r * r)) / denom;
    }
  }
  return w;
}

std::vector<double> power_spectrum(std::span<const int16_t> frame,
                                   const FrontendConfig& cfg) {
  validate_config(cfg);
  check(static_cast<int>(frame.size()) == cfg.window_length(),
        ErrorCategory::kConfig, "frame length does not match window length");
  static thread_local std::vector<double> window;
  static thread_local FrontendConfig window_cfg;
  if (window.empty() || window_cfg.window_kind != cfg.window_kind ||
      window_cfg.kaiser_beta != cfg.kaiser_beta ||
      window_cfg.window_ms != cfg.window_ms) {
    window = window_coefficients(cfg);
    window_cfg = cfg;
  }

  std::vector<std::complex<double>> buf(static_cast<size_t>(cfg.fft_size),
                                        {0.0, 0.0});
  for (size_t i = 0; i < frame.size(); ++i) {
    buf[i] = {static_cast<double>(frame[i]) * window[i], 0.0};
  }
  fft_radix2(buf);

  const int bins = cfg.fft_size / 2 + 1;
  std::vector<double> power(static_cast<size_t>(bins));
  for (int k = 0; k < bins; ++k) {
    power[k] = std::norm(buf[k]);
  }
  return power;
}

MelFilterbank::MelFilterbank(const FrontendConfig& cfg, int sample_rate_hz)
    : num_channels_(cfg.num_channels), num_bins_(cfg.fft_size / 2 + 1) {
  validate_config(cfg, sample_rate_hz);
  weights_.assign(static_cast<size_t>(num_channels_) * num_bins_, 0.0);

  const double mel_lo = hz_to_mel(cfg.lower_hz);
  const double mel_hi = hz_to_mel(cfg.upper_hz);
  // num_channels triangles need num_channels + 2 equally spaced edge points.
  std::vector<double> edges(static_cast<size_t>(num_channels_) + 2);
  for (int i = 0; i < num_channels_ + 2; ++i) {
    edges[i] = mel_lo + (mel_hi - mel_lo) * i / (num_channels_ + 1);
  }
  const double hz_per_bin =
      static_cast<double>(sample_rate_hz) / cfg.fft_size;
  for (int c = 0; c < num_channels_; ++c) {
    const double left = edges[c];
    const double center = edges[c + 1];
    const double right = edges[c + 2];
    for (int k = 0; k < num_bins_; ++k) {
      const double mel_k = hz_to_mel(k * hz_per_bin);
      double w = 0.0;
      if (mel_k > left && mel_k < center) {
        w = (mel_k - left) / (center - left);
      } else if (mel_k >= center && mel_k < right) {
        w = (right - mel_k) / (right - center);
      }
      weights_[static_cast<size_t>(c) * num_bins_ + k] = w;
    }
  }
}

std::vector<double> MelFilterbank::apply(std::span<const double> power) const {
  check(static_cast<int>(power.size()) == num_bins_, ErrorCategory::kConfig,
        "power spectrum has wrong number of bins");
  std::vector<double> out(static_cast<size_t>(num_channels_), 0.0);
  for (int c = 0; c < num_channels_; ++c) {
    const double* w = &weights_[static_cast<size_t>(c) * num_bins_];
    double acc = 0.0;
    for (int k = 0; k < num_bins_; ++k) {
      acc += w[k] * power[k];
    }
    out[c] = acc;
  }
  return out;
}

double MelFilterbank::weight_sum(int channel) const {
  const double* w = &weights_[static_cast<size_t>(channel) * num_bins_];
  double acc = 0.0;
  for (int k = 0; k < num_bins_; ++k) acc += w[k];
  return acc;
}

std::vector<double> mel_filterbank(std::span<const double> power,
                                   const FrontendConfig& cfg) {
  MelFilterbank fb(cfg);
  return fb.apply(power);
}

std::vector<uint32_t> quantize_energies(std::span<const double> mel) {
  std::vector<uint32_t> out(mel.size());
  constexpr double kScale = 1.0 / static_cast<double>(1u << kEnergyScaleBits);
  constexpr double kMax = static_cast<double>(std::numeric_limits<uint32_t>::max());
  for (size_t i = 0; i < mel.size(); ++i) {
    const double v = std::round(mel[i] * kScale);
    out[i] = static_cast<uint32_t>(std::clamp(v, 0.0, kMax));
  }
  return out;
}

std::vector<uint32_t> noise_reduce(std::span<const uint32_t> energies,
                                   NoiseState& state,
                                   const FrontendConfig& cfg) {
  check(state.estimate_scaled.size() == energies.size(), ErrorCategory::kState,
        "noise state size does not match channel count");
  const int bits = cfg.smoothing_bits;
  const uint32_t one = 1u << bits;
  const uint32_t half = 1u << (bits - 1);
  const uint32_t s_even =
      static_cast<uint32_t>(std::lround(cfg.even_smoothing * one));
  const uint32_t s_odd =
      static_cast<uint32_t>(std::lround(cfg.odd_smoothing * one));
  const uint32_t min_signal =
      static_cast<uint32_t>(std::lround(cfg.min_signal_remaining * one));

  std::vector<uint32_t> out(energies.size());
  for (size_t c = 0; c < energies.size(); ++c) {
    const uint32_t s = (c % 2 == 0) ? s_even : s_odd;
    const uint64_t signal_scaled = static_cast<uint64_t>(energies[c]) << bits;
    const uint64_t updated =
        (signal_scaled * s +
         static_cast<uint64_t>(state.estimate_scaled[c]) * (one - s) + half) >>
        bits;
    state.estimate_scaled[c] = static_cast<uint32_t>(
        std::min<uint64_t>(updated, std::numeric_limits<uint32_t>::max()));

    const uint32_t estimate = static_cast<uint32_t>((updated + half) >> bits);
    const uint32_t subtracted =
        energies[c] > estimate ? energies[c] - estimate : 0u;
    const uint32_t floor = static_cast<uint32_t>(
        (static_cast<uint64_t>(energies[c]) * min_signal + half) >> bits);
    out[c] = std::max(subtracted, floor);
  }
  return out;
}

std::vector<uint32_t> pcan_gain(std::span<const uint32_t> energies,
                                const NoiseState& state,
                                const FrontendConfig& cfg) {
  std::vector<uint32_t> out(energies.begin(), energies.end());
  if (!cfg.pcan_enabled || cfg.pcan_strength == 0.0) {
    return out;
  }
  check(state.estimate_scaled.size() == energies.size(), ErrorCategory::kState,
        "noise state size does not match channel count");
  for (size_t c = 0; c < energies.size(); ++c) {
    const double est =
        state.estimate(static_cast<int>(c), cfg.smoothing_bits);
    const double gain = std::pow((cfg.pcan_offset + 1.0) /
                                     (cfg.pcan_offset + 1.0 + est),
                                 cfg.pcan_strength);
    const double v = std::round(static_cast<double>(energies[c]) * gain);
    out[c] = static_cast<uint32_t>(std::clamp(
        v, 0.0, static_cast<double>(std::numeric_limits<uint32_t>::max())));
  }
  return out;
}

uint16_t log_compress(uint32_t energy, const FrontendConfig& cfg) {
  if (energy <= 1) return 0;
  // Normalize to [2^30, 2^31): energy = 2^msb * (1 + frac/2^30).
  const int msb = 31 - std::countl_zero(energy);
  const uint32_t normalized =
      msb <= 30 ? energy << (30 - msb) : energy >> (msb - 30);
  const uint32_t frac = normalized - (1u << 30);

  const auto& table = log_table();
  const uint32_t idx = frac >> 24;           // 6-bit segment index
  const uint32_t rem = frac & 0x00ffffffu;   // 24-bit remainder
  const uint32_t seg_lo = table[idx];
  const uint32_t seg_hi = table[idx + 1];
  const uint32_t ln_frac_q16 =
      seg_lo + static_cast<uint32_t>(
                   (static_cast<uint64_t>(seg_hi - seg_lo) * rem) >> 24);

  const uint64_t ln_q16 = static_cast<uint64_t>(msb) * kLn2Q16 + ln_frac_q16;
  const int shift = 16 - cfg.log_scale_shift;
  const uint64_t scaled = (ln_q16 + (1ull << (shift - 1))) >> shift;
  return static_cast<uint16_t>(
      std::min<uint64_t>(scaled, std::numeric_limits<uint16_t>::max()));
}

FrontendStreamer::FrontendStreamer(const FrontendConfig& cfg,
                                   int sample_rate_hz)
    : cfg_(cfg),
      filterbank_(cfg, sample_rate_hz),
      noise_state_(NoiseState::zeros(cfg.num_channels)) {}

std::vector<uint16_t> FrontendStreamer::process_frame(
    std::span<const int16_t> frame) {
  const std::vector<double> power = power_spectrum(frame, cfg_);
  const std::vector<double> mel = filterbank_.apply(power);
  std::vector<uint32_t> energies = quantize_energies(mel);
  if (cfg_.noise_reduction_enabled) {
    energies = noise_reduce(energies, noise_state_, cfg_);
  }
  if (cfg_.pcan_enabled) {
    energies = pcan_gain(energies, noise_state_, cfg_);
  }
  std::vector<uint16_t> column(energies.size());
  for (size_t c = 0; c < energies.size(); ++c) {
    column[c] = log_compress(energies[c], cfg_);
  }
  ++frames_emitted_;
  return column;
}

std::vector<std::vector<uint16_t>> FrontendStreamer::push(
    std::span<const int16_t> samples) {
  pending_.insert(pending_.end(), samples.begin(), samples.end());
  const int win = cfg_.window_length();
  const int hop = cfg_.hop_length();
  std::vector<std::vector<uint16_t>> columns;
  size_t start = 0;
  while (pending_.size() - start >= static_cast<size_t>(win)) {
    columns.push_back(process_frame(
        std::span<const int16_t>(pending_.data() + start, win)));
    start += hop;
  }
  if (start > 0) {
    pending_.erase(pending_.begin(),
                   pending_.begin() + static_cast<std::ptrdiff_t>(start));
  }
  return columns;
}

void FrontendStreamer::reset_noise_state() {
  noise_state_ = NoiseState::zeros(cfg_.num_channels);
}

Spectrogram compute_spectrogram(const PcmBuffer& pcm,
                                const FrontendConfig& cfg) {
  const auto frames = frame_signal(pcm, cfg);
  FrontendStreamer streamer(cfg, pcm.sample_rate_hz);

  Spectrogram spec;
  spec.num_channels = cfg.num_channels;
  spec.num_frames = static_cast<int>(frames.size());
  spec.log_scale_shift = cfg.log_scale_shift;
  spec.frame_duration_ms = cfg.hop_ms;
  spec.values.resize(static_cast<size_t>(spec.num_channels) * spec.num_frames);
  for (size_t i = 0; i < frames.size(); ++i) {
    const std::vector<uint16_t> column = streamer.process_frame(frames[i]);
    for (int c = 0; c < spec.num_channels; ++c) {
      spec.at(c, static_cast<int>(i)) = column[c];
    }
  }
  return spec;
}

void write_spectrogram_csv(const std::string& path, const Spectrogram& spec) {
  std::ofstream out(path);
  check(out.good(), ErrorCategory::kIo, "cannot write CSV: " + path);
  for (int c = 0; c < spec.num_channels; ++c) {
    for (int f = 0; f < spec.num_frames; ++f) {
      if (f > 0) out << ',';
      out << spec.at(c, f);
    }
    out << '\n';
  }
  check(out.good(), ErrorCategory::kIo, "short write: " + path);
}

}  // namespace edgeaudio::frontend

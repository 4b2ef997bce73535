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
#include "edgeaudio/datapipe.hpp"

#include <algorithm>
#include <cmath>

#include "edgeaudio/error.hpp"

namespace edgeaudio::datapipe {

namespace {

int16_t clamp_sample(double v) {
  return static_cast<int16_t>(std::clamp(std::round(v), -32768.0, 32767.0));
}

double signal_power(const std::vector<int16_t>& samples) {
  double acc = 0.0;
  for (int16_t s : samples) acc += static_cast<double>(s) * s;
  return samples.empty() ? 0.0 : acc / static_cast<double>(samples.size());
}

}  // namespace

std::vector<PcmBuffer> segment_audio(const PcmBuffer& pcm, double window_s,
                                     double overlap_s) {
  check(window_s > overlap_s && overlap_s >= 0.0, ErrorCategory::kConfig,
        "segment window must exceed the overlap");
  const int64_t win = static_cast<int64_t>(
      std::llround(window_s * pcm.sample_rate_hz));
  const int64_t hop = static_cast<int64_t>(
      std::llround((window_s - overlap_s) * pcm.sample_rate_hz));
  std::vector<PcmBuffer> segments;
  for (int64_t start = 0; start + win <= pcm.size(); start += hop) {
    PcmBuffer seg;
    seg.sample_rate_hz = pcm.sample_rate_hz;
    seg.samples.assign(pcm.samples.begin() + start,
                       pcm.samples.begin() + start + win);
    segments.push_back(std::move(seg));
  }
  return segments;
}

std::pair<PcmBuffer, PcmBuffer> isolate_channels(const WavData& stereo) {
  check(stereo.num_channels == 2, ErrorCategory::kChannel,
        "channel isolation needs a stereo clip, got " +
            std::to_string(stereo.num_channels) + " channel(s)");
  PcmBuffer left, right;
  left.sample_rate_hz = right.sample_rate_hz = stereo.sample_rate_hz;
  const int64_t frames = stereo.frames();
  left.samples.resize(frames);
  right.samples.resize(frames);
  for (int64_t i = 0; i < frames; ++i) {
    left.samples[i] = stereo.samples[2 * i];
    right.samples[i] = stereo.samples[2 * i + 1];
  }
  return {std::move(left), std::move(right)};
}

PcmBuffer stitch_five(const std::vector<PcmBuffer>& clips) {
  check(clips.size() == 5, ErrorCategory::kStitch,
        "stitch_five needs exactly five clips");
  PcmBuffer out;
  out.sample_rate_hz = clips[0].sample_rate_hz;
  const int64_t second = out.sample_rate_hz;
  for (const PcmBuffer& c : clips) {
    check(c.sample_rate_hz == out.sample_rate_hz, ErrorCategory::kStitch,
          "sample rate mismatch between stitched clips");
    check(c.size() == second, ErrorCategory::kStitch,
          "each stitched clip must be exactly one second, got " +
              std::to_string(c.size()) + " samples");
    out.samples.insert(out.samples.end(), c.samples.begin(), c.samples.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

namespace {

// Retained emotion classes, in the canonical output order.
const std::vector<std::string>& retained_classes() {
  static const std::vector<std::string> classes = {"happy", "neutral", "sad",
                                                   "angry", "none"};
  return classes;
}

}  // namespace

SoftLabel make_soft_label(const AnnotationRecord& record) {
  check(!record.votes.empty(), ErrorCategory::kLabel,
        "annotation record has no votes: " + record.clip_id);
  const auto& classes = retained_classes();
  std::vector<double> counts(classes.size(), 0.0);
  double total = 0.0;
  for (const std::string& raw : record.votes) {
    std::string vote = raw;
    std::transform(vote.begin(), vote.end(), vote.begin(), ::tolower);
    if (vote == "excited") vote = "happy";  // merged class
    const auto it = std::find(classes.begin(), classes.end(), vote);
    if (it == classes.end()) continue;  // dropped class
    counts[static_cast<size_t>(it - classes.begin())] += 1.0;
    total += 1.0;
  }
  check(total > 0.0, ErrorCategory::kLabel,
        "no votes map to a retained class: " + record.clip_id);
  for (double& c : counts) c /= total;
  return SoftLabel{std::move(counts)};
}

// ---------------------------------------------------------------------------
// Keyword curation
// ---------------------------------------------------------------------------

CurationResult curate_keywords(const WordFrequencies& freq_per_emotion,
                               const std::set<std::string>& stopwords,
                               int64_t min_count, int64_t max_count,
                               int per_emotion_top) {
  check(min_count <= max_count, ErrorCategory::kConfig,
        "min_count must not exceed max_count");

  const auto is_english_word = [](const std::string& w) {
    return !w.empty() && std::all_of(w.begin(), w.end(), [](unsigned char c) {
      return std::isalpha(c) || c == '\'';
    });
  };

  // Top-N per emotion, stopwords and non-words removed.
  std::set<std::string> candidates;
  for (const auto& [emotion, words] : freq_per_emotion) {
    std::vector<std::pair<std::string, int64_t>> ranked(words.begin(),
                                                        words.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    int taken = 0;
    for (const auto& [word, count] : ranked) {
      if (taken >= per_emotion_top) break;
      if (stopwords.count(word) || !is_english_word(word)) continue;
      candidates.insert(word);
      ++taken;
    }
  }

  // Total instance counts across emotions decide the keep/downsample fate.
  CurationResult result;
  for (const std::string& word : candidates) {
    int64_t total = 0;
    for (const auto& [emotion, words] : freq_per_emotion) {
      const auto it = words.find(word);
      if (it != words.end()) total += it->second;
    }
    if (total < min_count) continue;
    result.keywords.push_back(word);
    if (total > max_count) result.downsample_to[word] = max_count;
  }
  std::sort(result.keywords.begin(), result.keywords.end());
  check(!result.keywords.empty(), ErrorCategory::kCuration,
        "no keyword survived curation");

  result.class_set = result.keywords;
  result.class_set.push_back("UNKNOWN");
  result.class_set.push_back("NEGATIVE");
  return result;
}

// ---------------------------------------------------------------------------
// Keyword clip extraction
// ---------------------------------------------------------------------------

PcmBuffer extract_keyword_clip(const PcmBuffer& pcm,
                               const AlignmentRecord& alignment,
                               double duration_s) {
  check(alignment.start_s >= 0.0 && alignment.start_s < alignment.end_s,
        ErrorCategory::kAlignment,
        "bad alignment times for word '" + alignment.word + "'");
  check(alignment.end_s * pcm.sample_rate_hz <= static_cast<double>(pcm.size()),
        ErrorCategory::kAlignment,
        "alignment for '" + alignment.word + "' lies outside the clip");

  const int64_t length =
      static_cast<int64_t>(std::llround(duration_s * pcm.sample_rate_hz));
  const double mid_s = (alignment.start_s + alignment.end_s) / 2.0;
  const int64_t mid = static_cast<int64_t>(
      std::llround(mid_s * pcm.sample_rate_hz));
  const int64_t begin = mid - length / 2;

  PcmBuffer out;
  out.sample_rate_hz = pcm.sample_rate_hz;
  out.samples.assign(static_cast<size_t>(length), 0);
  for (int64_t i = 0; i < length; ++i) {
    const int64_t src = begin + i;
    if (src >= 0 && src < pcm.size()) out.samples[i] = pcm.samples[src];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Augmentation
// ---------------------------------------------------------------------------

AugmentConfig AugmentConfig::kws_defaults() {
  AugmentConfig cfg;
  cfg.shift_ms_range = 100.0;
  cfg.noise_prob = 0.8;
  cfg.snr_db_min = 0.0;
  cfg.snr_db_max = 15.0;
  cfg.pitch_prob = 0.3;
  cfg.pitch_semitones_min = 1.0;
  cfg.pitch_semitones_max = 2.0;
  cfg.rir_prob = 1.0;
  cfg.gaussian_prob = 0.0;
  cfg.specaug = {2, 20, 2, 7, 1.0, 1.0};
  return cfg;
}

AugmentConfig AugmentConfig::emotion_defaults() {
  AugmentConfig cfg;
  cfg.shift_ms_range = 0.0;
  cfg.gaussian_prob = 0.15;
  cfg.gaussian_sigma = 5e-3;
  cfg.noise_prob = 0.2;
  cfg.snr_db_min = 0.0;
  cfg.snr_db_max = 15.0;
  cfg.pitch_prob = 0.0;
  cfg.rir_prob = 0.1;
  cfg.specaug = {1, 50, 1, 4, 0.2, 0.2};
  return cfg;
}

void validate_augment_config(const AugmentConfig& cfg) {
  const auto in01 = [](double p) { return p >= 0.0 && p <= 1.0; };
  check(in01(cfg.noise_prob) && in01(cfg.pitch_prob) && in01(cfg.rir_prob) &&
            in01(cfg.gaussian_prob) && in01(cfg.specaug.time_mask_prob) &&
            in01(cfg.specaug.freq_mask_prob),
        ErrorCategory::kConfig, "augmentation probabilities must be in [0,1]");
  check(cfg.snr_db_min <= cfg.snr_db_max, ErrorCategory::kConfig,
        "SNR range is inverted");
  check(cfg.pitch_semitones_min <= cfg.pitch_semitones_max,
        ErrorCategory::kConfig, "pitch range is inverted");
  check(cfg.shift_ms_range >= 0.0, ErrorCategory::kConfig,
        "shift range must be non-negative");
}

PcmBuffer mix_at_snr(const PcmBuffer& signal, const PcmBuffer& noise,
                     double snr_db) {
  check(!noise.samples.empty(), ErrorCategory::kConfig, "empty noise clip");
  const double p_signal = signal_power(signal.samples);
  // Tile or cut the noise to the signal length.
  std::vector<int16_t> tiled(signal.samples.size());
  for (size_t i = 0; i < tiled.size(); ++i) {
    tiled[i] = noise.samples[i % noise.samples.size()];
  }
  const double p_noise = signal_power(tiled);
  if (p_signal <= 0.0 || p_noise <= 0.0) return signal;

  // 10*log10(p_signal / (g^2 p_noise)) = snr_db
  const double gain =
      std::sqrt(p_signal / (p_noise * std::pow(10.0, snr_db / 10.0)));
  PcmBuffer out;
  out.sample_rate_hz = signal.sample_rate_hz;
  out.samples.resize(signal.samples.size());
  for (size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = clamp_sample(static_cast<double>(signal.samples[i]) +
                                  gain * static_cast<double>(tiled[i]));
  }
  return out;
}

namespace {

PcmBuffer shift_samples(const PcmBuffer& pcm, int64_t shift) {
  PcmBuffer out;
  out.sample_rate_hz = pcm.sample_rate_hz;
  out.samples.assign(pcm.samples.size(), 0);
  for (int64_t i = 0; i < pcm.size(); ++i) {
    const int64_t src = i - shift;
    if (src >= 0 && src < pcm.size()) out.samples[i] = pcm.samples[src];
  }
  return out;
}

std::vector<double> resample_linear(const std::vector<int16_t>& in,
                                    int64_t out_len) {
  std::vector<double> out(static_cast<size_t>(out_len));
  if (in.empty() || out_len <= 0) return out;
  const double step =
      static_cast<double>(in.size() - 1) / std::max<int64_t>(out_len - 1, 1);
  for (int64_t i = 0; i < out_len; ++i) {
    const double pos = i * step;
    const int64_t i0 = static_cast<int64_t>(pos);
    const int64_t i1 = std::min<int64_t>(i0 + 1, in.size() - 1);
    const double frac = pos - static_cast<double>(i0);
    out[i] = (1.0 - frac) * in[i0] + frac * in[i1];
  }
  return out;
}

// Pitch shift by resampling followed by a grain-based time stretch back to
// the original duration. Fidelity is not the goal here; determinism and the
// semitone bound are.
PcmBuffer pitch_shift(const PcmBuffer& pcm, double semitones) {
  const double ratio = std::pow(2.0, semitones / 12.0);
  const int64_t resampled_len =
      std::max<int64_t>(1, static_cast<int64_t>(
                               std::llround(pcm.size() / ratio)));
  const std::vector<double> resampled =
      resample_linear(pcm.samples, resampled_len);

  PcmBuffer out;
  out.sample_rate_hz = pcm.sample_rate_hz;
  out.samples.assign(pcm.samples.size(), 0);

  const int64_t grain = std::min<int64_t>(400, resampled_len);
  if (grain <= 1) return out;
  const int64_t out_hop = grain / 2;
  std::vector<double> mixed(pcm.samples.size(), 0.0);
  std::vector<double> weight(pcm.samples.size(), 0.0);
  const double stretch =
      static_cast<double>(resampled_len) / static_cast<double>(pcm.size());
  for (int64_t out_pos = 0; out_pos < pcm.size(); out_pos += out_hop) {
    const int64_t in_pos = std::min<int64_t>(
        static_cast<int64_t>(std::llround(out_pos * stretch)),
        resampled_len - 1);
    for (int64_t i = 0; i < grain; ++i) {
      const int64_t o = out_pos + i;
      const int64_t s = in_pos + i;
      if (o >= pcm.size() || s >= resampled_len) break;
      const double w =
          0.5 - 0.5 * std::cos(2.0 * M_PI * i / static_cast<double>(grain));
      mixed[o] += w * resampled[s];
      weight[o] += w;
    }
  }
  for (size_t i = 0; i < mixed.size(); ++i) {
    out.samples[i] =
        clamp_sample(weight[i] > 1e-9 ? mixed[i] / weight[i] : 0.0);
  }
  return out;
}

PcmBuffer convolve_rir(const PcmBuffer& pcm, const PcmBuffer& rir) {
  check(!rir.samples.empty(), ErrorCategory::kConfig, "empty impulse clip");
  // Normalize the impulse energy so the output level stays comparable.
  double energy = 0.0;
  for (int16_t s : rir.samples) energy += static_cast<double>(s) * s;
  const double norm = energy > 0.0 ? 1.0 / std::sqrt(energy) : 0.0;

  PcmBuffer out;
  out.sample_rate_hz = pcm.sample_rate_hz;
  out.samples.assign(pcm.samples.size(), 0);
  const int64_t klen = std::min<int64_t>(rir.size(), pcm.size());
  for (int64_t i = 0; i < pcm.size(); ++i) {
    double acc = 0.0;
    const int64_t kmax = std::min<int64_t>(klen, i + 1);
    for (int64_t k = 0; k < kmax; ++k) {
      acc += static_cast<double>(pcm.samples[i - k]) *
             (static_cast<double>(rir.samples[k]) * norm);
    }
    out.samples[i] = clamp_sample(acc);
  }
  return out;
}

}  // namespace

PcmBuffer augment_waveform(const PcmBuffer& pcm, const AugmentConfig& cfg,
                           Rng& rng, const std::vector<PcmBuffer>& noise_bank,
                           const std::vector<PcmBuffer>& rir_bank,
                           AugmentTrace* trace) {
  validate_augment_config(cfg);
  check(cfg.noise_prob == 0.0 || !noise_bank.empty(), ErrorCategory::kConfig,
        "noise_prob > 0 requires a noise bank");
  check(cfg.rir_prob == 0.0 || !rir_bank.empty(), ErrorCategory::kConfig,
        "rir_prob > 0 requires an impulse-response bank");

  PcmBuffer out = pcm;
  AugmentTrace t;

  if (cfg.shift_ms_range > 0.0) {
    t.shift_ms = rng.uniform(-cfg.shift_ms_range, cfg.shift_ms_range);
    const int64_t shift = static_cast<int64_t>(
        std::llround(t.shift_ms * pcm.sample_rate_hz / 1000.0));
    out = shift_samples(out, shift);
  }

  if (cfg.noise_prob > 0.0 && rng.bernoulli(cfg.noise_prob)) {
    t.noise = true;
    t.snr_db = rng.uniform(cfg.snr_db_min, cfg.snr_db_max);
    const size_t pick =
        static_cast<size_t>(rng.uniform_int(0, noise_bank.size() - 1));
    out = mix_at_snr(out, noise_bank[pick], t.snr_db);
  }

  if (cfg.pitch_prob > 0.0 && rng.bernoulli(cfg.pitch_prob)) {
    t.pitch = true;
    const double magnitude =
        rng.uniform(cfg.pitch_semitones_min, cfg.pitch_semitones_max);
    t.pitch_semitones = rng.bernoulli(0.5) ? magnitude : -magnitude;
    out = pitch_shift(out, t.pitch_semitones);
  }

  if (cfg.rir_prob > 0.0 && rng.bernoulli(cfg.rir_prob)) {
    t.rir = true;
    const size_t pick =
        static_cast<size_t>(rng.uniform_int(0, rir_bank.size() - 1));
    out = convolve_rir(out, rir_bank[pick]);
  }

  if (cfg.gaussian_prob > 0.0 && rng.bernoulli(cfg.gaussian_prob)) {
    t.gaussian = true;
    const double sigma = cfg.gaussian_sigma * 32768.0;
    for (int16_t& s : out.samples) {
      s = clamp_sample(static_cast<double>(s) + rng.normal(0.0, sigma));
    }
  }

  if (trace) *trace = t;
  return out;
}

frontend::Spectrogram spec_augment(const frontend::Spectrogram& spec,
                                   const SpecAugmentConfig& cfg, Rng& rng) {
  check(cfg.time_mask_max < spec.num_frames || cfg.num_time_masks == 0,
        ErrorCategory::kConfig, "time mask wider than the spectrogram");
  check(cfg.freq_mask_max < spec.num_channels || cfg.num_freq_masks == 0,
        ErrorCategory::kConfig, "frequency mask taller than the spectrogram");

  frontend::Spectrogram out = spec;
  for (int m = 0; m < cfg.num_time_masks; ++m) {
    if (!rng.bernoulli(cfg.time_mask_prob)) continue;
    const int width = static_cast<int>(rng.uniform_int(1, cfg.time_mask_max));
    const int start =
        static_cast<int>(rng.uniform_int(0, spec.num_frames - width));
    for (int c = 0; c < spec.num_channels; ++c) {
      for (int f = start; f < start + width; ++f) out.at(c, f) = 0;
    }
  }
  for (int m = 0; m < cfg.num_freq_masks; ++m) {
    if (!rng.bernoulli(cfg.freq_mask_prob)) continue;
    const int height =
        static_cast<int>(rng.uniform_int(1, cfg.freq_mask_max));
    const int start =
        static_cast<int>(rng.uniform_int(0, spec.num_channels - height));
    for (int c = start; c < start + height; ++c) {
      for (int f = 0; f < spec.num_frames; ++f) out.at(c, f) = 0;
    }
  }
  return out;
}

}  // namespace edgeaudio::datapipe

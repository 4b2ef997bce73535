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
// Dataset preparation: segmentation, channel isolation, label construction
// (class merging, annotator-vote soft labels), keyword-list curation, and
// the waveform / spectrogram augmentation stacks. Everything is
// deterministic given an explicit RNG seed.

#ifndef EDGEAUDIO_DATAPIPE_HPP_
#define EDGEAUDIO_DATAPIPE_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edgeaudio/frontend.hpp"
#include "edgeaudio/rng.hpp"
#include "edgeaudio/wav.hpp"

namespace edgeaudio::datapipe {

// ---------------------------------------------------------------------------
// Segmentation and channel handling
// ---------------------------------------------------------------------------

// Cuts a clip into fixed windows (default 5 s with 1 s overlap, i.e. 4 s
// hop). The trailing partial window is discarded; clips shorter than one
// window yield an empty list.
std::vector<PcmBuffer> segment_audio(const PcmBuffer& pcm,
                                     double window_s = 5.0,
                                     double overlap_s = 1.0);

// Splits an interleaved stereo clip into its two mono channels.
// Throws ChannelError unless the input has exactly two channels.
std::pair<PcmBuffer, PcmBuffer> isolate_channels(const WavData& stereo);

// Concatenates five one-second clips into one five-second buffer.
PcmBuffer stitch_five(const std::vector<PcmBuffer>& clips);

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

struct AnnotationRecord {
  std::string clip_id;
  std::vector<std::string> votes;
};

struct SoftLabel {
  // Over (happy, neutral, sad, angry, none); non-negative, sums to 1.
  std::vector<double> distribution;
};

// Vote-fraction soft label. "excited" votes merge into "happy"; votes for
// classes outside the retained set are dropped. Throws LabelError when no
// votes survive.
SoftLabel make_soft_label(const AnnotationRecord& votes);

// ---------------------------------------------------------------------------
// Keyword curation
// ---------------------------------------------------------------------------

struct CurationResult {
  std::vector<std::string> keywords;              // sorted
  std::map<std::string, int64_t> downsample_to;   // word -> target count
  std::vector<std::string> class_set;             // keywords + UNKNOWN/NEGATIVE
};

// word -> count per emotion category.
using WordFrequencies = std::map<std::string, std::map<std::string, int64_t>>;

// Takes the top `per_emotion_top` words of every emotion, removes stopwords
// and non-alphabetic tokens, drops words under `min_count` total instances,
// and flags words over `max_count` for downsampling. UNKNOWN and NEGATIVE
// complete the class set. Throws CurationError when nothing survives.
CurationResult curate_keywords(const WordFrequencies& freq_per_emotion,
                               const std::set<std::string>& stopwords,
                               int64_t min_count = 2000,
                               int64_t max_count = 20000,
                               int per_emotion_top = 100);

// ---------------------------------------------------------------------------
// Keyword clip extraction
// ---------------------------------------------------------------------------

struct AlignmentRecord {
  std::string word;
  double start_s = 0.0;
  double end_s = 0.0;
};

// One-second window centered on the aligned word's midpoint, zero-padded at
// the clip edges. Throws AlignmentError when the alignment lies outside the
// clip or is degenerate.
PcmBuffer extract_keyword_clip(const PcmBuffer& pcm,
                               const AlignmentRecord& alignment,
                               double duration_s = 1.0);

// ---------------------------------------------------------------------------
// Augmentation
// ---------------------------------------------------------------------------

struct SpecAugmentConfig {
  int num_time_masks = 2;
  int time_mask_max = 20;
  int num_freq_masks = 2;
  int freq_mask_max = 7;
  double time_mask_prob = 1.0;
  double freq_mask_prob = 1.0;
};

struct AugmentConfig {
  double shift_ms_range = 100.0;  // uniform +/- shift
  double noise_prob = 0.8;
  double snr_db_min = 0.0;
  double snr_db_max = 15.0;
  double pitch_prob = 0.3;
  double pitch_semitones_min = 1.0;
  double pitch_semitones_max = 2.0;
  double rir_prob = 0.0;
  double gaussian_prob = 0.0;
  double gaussian_sigma = 5e-3;  // relative to full scale
  SpecAugmentConfig specaug;
  uint64_t rng_seed = 1;

  // Keyword training stack: shift, heavy background noise, pitch, reverb,
  // and 2x20-frame / 2x7-bin spectrogram masks.
  static AugmentConfig kws_defaults();
  // Emotion training stack: gaussian noise, lighter background noise,
  // reverb, and up-to-50-frame / up-to-4-bin masks, each gated by its own
  // tuned probability.
  static AugmentConfig emotion_defaults();
};

void validate_augment_config(const AugmentConfig& cfg);

// Mixes noise into signal at the requested SNR:
// gain chosen so 10*log10(P_signal / (g^2 P_noise)) == snr_db.
PcmBuffer mix_at_snr(const PcmBuffer& signal, const PcmBuffer& noise,
                     double snr_db);

// Which augmentations fired, for dataset manifests.
struct AugmentTrace {
  double shift_ms = 0.0;
  bool noise = false;
  double snr_db = 0.0;
  bool pitch = false;
  double pitch_semitones = 0.0;
  bool rir = false;
  bool gaussian = false;
};

// Waveform augmentation stack. Noise and impulse-response banks must be
// non-empty when the corresponding probability is positive (ConfigError).
PcmBuffer augment_waveform(const PcmBuffer& pcm, const AugmentConfig& cfg,
                           Rng& rng,
                           const std::vector<PcmBuffer>& noise_bank = {},
                           const std::vector<PcmBuffer>& rir_bank = {},
                           AugmentTrace* trace = nullptr);

// Zeroes out random time/frequency stripes.
frontend::Spectrogram spec_augment(const frontend::Spectrogram& spec,
                                   const SpecAugmentConfig& cfg, Rng& rng);

}  // namespace edgeaudio::datapipe

#endif  // EDGEAUDIO_DATAPIPE_HPP_

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
#ifndef EDGEAUDIO_EVALMETRICS_HPP_
#define EDGEAUDIO_EVALMETRICS_HPP_

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace edgeaudio::eval {

using LabelSequence = std::vector<int>;

struct EditCounts {
  int64_t substitutions = 0;
  int64_t deletions = 0;
  int64_t insertions = 0;
  int64_t ref_length = 0;

  int64_t errors() const { return substitutions + deletions + insertions; }
};

// Minimal-edit alignment with unit costs. Ties are broken in favour of
// substitution over paired insertion+deletion; the total error count is the
// plain Levenshtein distance either way.
EditCounts align_and_count(const LabelSequence& ref, const LabelSequence& hyp);

// (S + D + I) / N. Throws MetricError on an empty reference.
double wer(const LabelSequence& ref, const LabelSequence& hyp);
double wer(const EditCounts& counts);

// Detection outcomes for false-alarm / miss rates: an event is positive when
// its label is not in `negative_classes`.
struct DetectionTally {
  int64_t true_positives = 0;
  int64_t false_positives = 0;
  int64_t true_negatives = 0;
  int64_t false_negatives = 0;
};

DetectionTally tally_detections(const LabelSequence& refs,
                                const LabelSequence& hyps,
                                const std::set<int>& negative_classes);

// FP / (FP + TN); throws MetricError with no negative events.
double far(const DetectionTally& tally);
// FN / (FN + TP); throws MetricError with no positive events.
double mr(const DetectionTally& tally);

struct ClassMetrics {
  int64_t support = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::vector<std::vector<int64_t>> confusion;  // [ref][hyp]
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  std::vector<std::string> warnings;
};

// Standard multi-class report. Lengths must match; class ids must lie in
// [0, class_count). Zero-support / never-predicted classes score 0 with a
// warning instead of dividing by zero.
EvalReport classification_report(const LabelSequence& refs,
                                 const LabelSequence& hyps, int class_count);

// Argmax with ties broken toward the lowest class id.
int resolve_soft_label(const std::vector<double>& distribution);

nlohmann::json report_to_json(const EvalReport& report,
                              const std::vector<std::string>& labels = {});
std::string report_to_text(const EvalReport& report,
                           const std::vector<std::string>& labels = {});

}  // namespace edgeaudio::eval

#endif  // EDGEAUDIO_EVALMETRICS_HPP_

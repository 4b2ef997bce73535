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
#include "edgeaudio/evalmetrics.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "edgeaudio/error.hpp"

namespace edgeaudio::eval {

EditCounts align_and_count(const LabelSequence& ref, const LabelSequence& hyp) {
  const size_t m = ref.size();
  const size_t n = hyp.size();
  // dist[i][j]: edit distance between ref[0..i) and hyp[0..j).
  std::vector<std::vector<int32_t>> dist(m + 1, std::vector<int32_t>(n + 1));
  for (size_t i = 0; i <= m; ++i) dist[i][0] = static_cast<int32_t>(i);
  for (size_t j = 0; j <= n; ++j) dist[0][j] = static_cast<int32_t>(j);
  for (size_t i = 1; i <= m; ++i) {
    for (size_t j = 1; j <= n; ++j) {
      if (ref[i - 1] == hyp[j - 1]) {
        dist[i][j] = dist[i - 1][j - 1];
      } else {
        dist[i][j] = 1 + std::min({dist[i - 1][j - 1],  // substitution
                                   dist[i - 1][j],      // deletion
                                   dist[i][j - 1]});    // insertion
      }
    }
  }

  // Backtrace, preferring match/substitution on ties so that a wrong label
  // counts once instead of as a deletion plus an insertion.
  EditCounts counts;
  counts.ref_length = static_cast<int64_t>(m);
  size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const int32_t diag = dist[i - 1][j - 1];
      if (ref[i - 1] == hyp[j - 1] && dist[i][j] == diag) {
        --i;
        --j;
        continue;
      }
      if (dist[i][j] == diag + 1) {
        ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && dist[i][j] == dist[i - 1][j] + 1) {
      ++counts.deletions;
      --i;
      continue;
    }
    ++counts.insertions;
    --j;
  }
  return counts;
}

double wer(const EditCounts& counts) {
  check(counts.ref_length >= 1, ErrorCategory::kMetric,
        "WER needs a non-empty reference");
  return static_cast<double>(counts.errors()) /
         static_cast<double>(counts.ref_length);
}

double wer(const LabelSequence& ref, const LabelSequence& hyp) {
  return wer(align_and_count(ref, hyp));
}

DetectionTally tally_detections(const LabelSequence& refs,
                                const LabelSequence& hyps,
                                const std::set<int>& negative_classes) {
  check(refs.size() == hyps.size(), ErrorCategory::kMetric,
        "reference/hypothesis length mismatch");
  DetectionTally t;
  for (size_t i = 0; i < refs.size(); ++i) {
    const bool ref_pos = !negative_classes.count(refs[i]);
    const bool hyp_pos = !negative_classes.count(hyps[i]);
    if (ref_pos && hyp_pos) ++t.true_positives;
    if (ref_pos && !hyp_pos) ++t.false_negatives;
    if (!ref_pos && hyp_pos) ++t.false_positives;
    if (!ref_pos && !hyp_pos) ++t.true_negatives;
  }
  return t;
}

double far(const DetectionTally& t) {
  const int64_t negatives = t.false_positives + t.true_negatives;
  check(negatives >= 1, ErrorCategory::kMetric,
        "false-alarm rate needs at least one negative event");
  return static_cast<double>(t.false_positives) /
         static_cast<double>(negatives);
}

double mr(const DetectionTally& t) {
  const int64_t positives = t.false_negatives + t.true_positives;
  check(positives >= 1, ErrorCategory::kMetric,
        "miss rate needs at least one positive event");
  return static_cast<double>(t.false_negatives) /
         static_cast<double>(positives);
}

EvalReport classification_report(const LabelSequence& refs,
                                 const LabelSequence& hyps, int class_count) {
  check(refs.size() == hyps.size(), ErrorCategory::kMetric,
        "reference/hypothesis length mismatch");
  check(!refs.empty(), ErrorCategory::kMetric, "empty evaluation set");
  check(class_count >= 1, ErrorCategory::kMetric, "class_count must be >= 1");

  EvalReport report;
  report.confusion.assign(class_count, std::vector<int64_t>(class_count, 0));
  int64_t correct = 0;
  for (size_t i = 0; i < refs.size(); ++i) {
    check(refs[i] >= 0 && refs[i] < class_count && hyps[i] >= 0 &&
              hyps[i] < class_count,
          ErrorCategory::kMetric, "class id out of range");
    report.confusion[refs[i]][hyps[i]] += 1;
    if (refs[i] == hyps[i]) ++correct;
  }
  report.accuracy = static_cast<double>(correct) / refs.size();

  report.per_class.resize(class_count);
  double macro_sum = 0.0;
  double weighted_sum = 0.0;
  int64_t total_support = 0;
  for (int c = 0; c < class_count; ++c) {
    ClassMetrics& m = report.per_class[c];
    int64_t tp = report.confusion[c][c];
    int64_t ref_total = 0;
    int64_t hyp_total = 0;
    for (int k = 0; k < class_count; ++k) {
      ref_total += report.confusion[c][k];
      hyp_total += report.confusion[k][c];
    }
    m.support = ref_total;
    if (hyp_total == 0) {
      m.precision = 0.0;
      report.warnings.push_back("class " + std::to_string(c) +
                                " never predicted; precision set to 0");
    } else {
      m.precision = static_cast<double>(tp) / hyp_total;
    }
    if (ref_total == 0) {
      m.recall = 0.0;
      report.warnings.push_back("class " + std::to_string(c) +
                                " has no support; recall set to 0");
    } else {
      m.recall = static_cast<double>(tp) / ref_total;
    }
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    macro_sum += m.f1;
    weighted_sum += m.f1 * static_cast<double>(m.support);
    total_support += m.support;
  }
  report.macro_f1 = macro_sum / class_count;
  report.weighted_f1 = weighted_sum / static_cast<double>(total_support);
  return report;
}

int resolve_soft_label(const std::vector<double>& distribution) {
  check(!distribution.empty(), ErrorCategory::kLabel, "empty distribution");
  int best = 0;
  for (size_t i = 1; i < distribution.size(); ++i) {
    if (distribution[i] > distribution[best]) best = static_cast<int>(i);
  }
  return best;
}

nlohmann::json report_to_json(const EvalReport& report,
                              const std::vector<std::string>& labels) {
  nlohmann::json j;
  j["accuracy"] = report.accuracy;
  j["macro_f1"] = report.macro_f1;
  j["weighted_f1"] = report.weighted_f1;
  j["confusion"] = report.confusion;
  nlohmann::json per_class = nlohmann::json::array();
  for (size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    nlohmann::json e = {{"precision", m.precision},
                        {"recall", m.recall},
                        {"f1", m.f1},
                        {"support", m.support}};
    e["class"] = c < labels.size() ? labels[c] : std::to_string(c);
    per_class.push_back(std::move(e));
  }
  j["per_class"] = std::move(per_class);
  j["warnings"] = report.warnings;
  return j;
}

std::string report_to_text(const EvalReport& report,
                           const std::vector<std::string>& labels) {
  std::ostringstream os;
  os << std::left << std::setw(14) << "class" << std::right << std::setw(11)
     << "precision" << std::setw(9) << "recall" << std::setw(9) << "f1"
     << std::setw(9) << "support" << "\n";
  os << std::fixed << std::setprecision(4);
  for (size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    const std::string name =
        c < labels.size() ? labels[c] : std::to_string(c);
    os << std::left << std::setw(14) << name << std::right << std::setw(11)
       << m.precision << std::setw(9) << m.recall << std::setw(9) << m.f1
       << std::setw(9) << m.support << "\n";
  }
  os << std::left << std::setw(14) << "macro avg" << std::right
     << std::setw(29) << report.macro_f1 << "\n";
  os << std::left << std::setw(14) << "weighted avg" << std::right
     << std::setw(29) << report.weighted_f1 << "\n";
  os << std::left << std::setw(14) << "accuracy" << std::right << std::setw(29)
     << report.accuracy << "\n";
  return os.str();
}

}  // namespace edgeaudio::eval

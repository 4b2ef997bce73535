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
#include "edgeaudio/error.hpp"

namespace edgeaudio {

const char* error_category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kConfig: return "ConfigError";
    case ErrorCategory::kSignalTooShort: return "SignalTooShort";
    case ErrorCategory::kState: return "StateError";
    case ErrorCategory::kShape: return "ShapeError";
    case ErrorCategory::kNumerical: return "NumericalError";
    case ErrorCategory::kCalibration: return "CalibrationError";
    case ErrorCategory::kGraph: return "GraphError";
    case ErrorCategory::kManifest: return "ManifestError";
    case ErrorCategory::kContainer: return "ContainerError";
    case ErrorCategory::kChannel: return "ChannelError";
    case ErrorCategory::kLabel: return "LabelError";
    case ErrorCategory::kCuration: return "CurationError";
    case ErrorCategory::kAlignment: return "AlignmentError";
    case ErrorCategory::kStitch: return "StitchError";
    case ErrorCategory::kMetric: return "MetricError";
    case ErrorCategory::kIo: return "IoError";
    case ErrorCategory::kUsage: return "UsageError";
  }
  return "Error";
}

}  // namespace edgeaudio

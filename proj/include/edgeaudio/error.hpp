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
#ifndef EDGEAUDIO_ERROR_HPP_
#define EDGEAUDIO_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace edgeaudio {

// Every failure raised by the library carries one of these categories so
// callers (and the CLI exit-code mapping) can react without string matching.
enum class ErrorCategory {
  kConfig,
  kSignalTooShort,
  kState,
  kShape,
  kNumerical,
  kCalibration,
  kGraph,
  kManifest,
  kContainer,
  kChannel,
  kLabel,
  kCuration,
  kAlignment,
  kStitch,
  kMetric,
  kIo,
  kUsage,
};

const char* error_category_name(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(std::string(error_category_name(category)) + ": " +
                           message),
        category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void raise(ErrorCategory c, const std::string& msg) {
  throw Error(c, msg);
}

inline void check(bool cond, ErrorCategory c, const std::string& msg) {
  if (!cond) raise(c, msg);
}

}  // namespace edgeaudio

#endif  // EDGEAUDIO_ERROR_HPP_

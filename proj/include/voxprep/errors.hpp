/* Copyright 2026 The Voxprep Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace voxprep {

// Error categories used across the library. Batch stages catch by code and
// turn per-clip categories (all_silent, clip_too_short, ...) into terminal
// clip statuses instead of aborting the run.
enum class Errc {
  unreadable_file,
  unsupported_encoding,
  empty_audio,
  invalid_argument,
  clip_too_short,
  all_silent,
  io_error,
  bad_manifest,
  bad_config,
  bad_checkpoint,
  missing_scores,
  insufficient_hours,
  missing_original,
  protocol_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace voxprep

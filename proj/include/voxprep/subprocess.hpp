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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace voxprep {

std::string shell_quote(const std::string& s);

// Replaces {name} placeholders with shell-quoted values.
std::string expand_command(const std::string& command_template,
                           const std::vector<std::pair<std::string, std::string>>& values);

struct CommandResult {
  int exit_code = -1;  // 128 + signal when killed by a signal
  bool timed_out = false;
};

// Runs a shell command with a wall-clock timeout. The child's process group
// is killed on timeout. stdin reads from /dev/null; stderr (and stdout) are
// appended to stderr_path when given, otherwise discarded.
CommandResult run_command(const std::string& command, double timeout_s,
                          const std::filesystem::path& stderr_path = {});

// Child process spoken to over stdin/stdout, one line at a time.
class LineProcess {
 public:
  enum class ReadStatus { line, eof, timeout };

  LineProcess(const std::string& command, const std::filesystem::path& stderr_path = {});
  ~LineProcess();

  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  bool spawned() const { return pid_ > 0; }
  bool write_line(const std::string& line);  // false once the pipe is broken
  void close_stdin();
  ReadStatus read_line(std::string* out, double timeout_s);

  // Reaps the child, killing it first if still alive after timeout_s.
  // Returns the exit code (128 + signal for signal deaths).
  int wait(double timeout_s);
  void kill_now();

 private:
  int pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  std::string buffer_;
  int exit_code_ = -1;
  bool reaped_ = false;
};

}  // namespace voxprep

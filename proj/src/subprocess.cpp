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

#include "voxprep/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "voxprep/errors.hpp"

namespace voxprep {
namespace {

using Clock = std::chrono::steady_clock;

void ignore_sigpipe_once() {
  static const bool done = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

int exit_code_from_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

// Child-side setup shared by both spawn paths. Never returns.
[[noreturn]] void exec_shell(const std::string& command, const std::filesystem::path& stderr_path,
                             bool stdout_to_stderr) {
  ::setpgid(0, 0);  // own process group so timeouts can kill the whole tree
  if (!stderr_path.empty()) {
    const int fd = ::open(stderr_path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd >= 0) {
      ::dup2(fd, STDERR_FILENO);
      if (stdout_to_stderr) ::dup2(fd, STDOUT_FILENO);
      ::close(fd);
    }
  } else {
    const int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) {
      ::dup2(devnull, STDERR_FILENO);
      if (stdout_to_stderr) ::dup2(devnull, STDOUT_FILENO);
      ::close(devnull);
    }
  }
  ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
  ::_exit(127);
}

}  // namespace

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

std::string expand_command(const std::string& command_template,
                           const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out = command_template;
  for (const auto& [name, value] : values) {
    const std::string token = "{" + name + "}";
    const std::string quoted = shell_quote(value);
    std::size_t pos = 0;
    while ((pos = out.find(token, pos)) != std::string::npos) {
      out.replace(pos, token.size(), quoted);
      pos += quoted.size();
    }
  }
  return out;
}

CommandResult run_command(const std::string& command, double timeout_s,
                          const std::filesystem::path& stderr_path) {
  ignore_sigpipe_once();
  const pid_t pid = ::fork();
  if (pid < 0) raise(Errc::io_error, "fork failed: " + std::string(std::strerror(errno)));
  if (pid == 0) {
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) {
      ::dup2(devnull, STDIN_FILENO);
      ::close(devnull);
    }
    exec_shell(command, stderr_path, /*stdout_to_stderr=*/true);
  }

  CommandResult result;
  const auto deadline = Clock::now() + std::chrono::duration<double>(timeout_s);
  int status = 0;
  for (;;) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      result.exit_code = exit_code_from_status(status);
      return result;
    }
    if (r < 0 && errno != EINTR) {
      raise(Errc::io_error, "waitpid failed: " + std::string(std::strerror(errno)));
    }
    if (Clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      result.exit_code = exit_code_from_status(status);
      result.timed_out = true;
      return result;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

LineProcess::LineProcess(const std::string& command, const std::filesystem::path& stderr_path) {
  ignore_sigpipe_once();
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
    raise(Errc::io_error, "pipe failed: " + std::string(std::strerror(errno)));
  }
  const pid_t pid = ::fork();
  if (pid < 0) raise(Errc::io_error, "fork failed: " + std::string(std::strerror(errno)));
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    exec_shell(command, stderr_path, /*stdout_to_stderr=*/false);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  pid_ = pid;
  stdin_fd_ = to_child[1];
  stdout_fd_ = from_child[0];
}

LineProcess::~LineProcess() {
  kill_now();
  if (stdin_fd_ >= 0) ::close(stdin_fd_);
  if (stdout_fd_ >= 0) ::close(stdout_fd_);
  if (pid_ > 0 && !reaped_) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
}

bool LineProcess::write_line(const std::string& line) {
  if (stdin_fd_ < 0) return false;
  std::string payload = line;
  payload += '\n';
  std::size_t written = 0;
  while (written < payload.size()) {
    const ssize_t r = ::write(stdin_fd_, payload.data() + written, payload.size() - written);
    if (r < 0) {
      if (errno == EINTR) continue;
      return false;  // EPIPE: child is gone
    }
    written += static_cast<std::size_t>(r);
  }
  return true;
}

void LineProcess::close_stdin() {
  if (stdin_fd_ >= 0) {
    ::close(stdin_fd_);
    stdin_fd_ = -1;
  }
}

LineProcess::ReadStatus LineProcess::read_line(std::string* out, double timeout_s) {
  const auto deadline = Clock::now() + std::chrono::duration<double>(timeout_s);
  for (;;) {
    const std::size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      *out = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!out->empty() && out->back() == '\r') out->pop_back();
      return ReadStatus::line;
    }
    const auto remaining = std::chrono::duration<double>(deadline - Clock::now()).count();
    if (remaining <= 0) return ReadStatus::timeout;

    struct pollfd pfd = {stdout_fd_, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, static_cast<int>(std::min(remaining * 1000.0, 250.0)));
    if (pr < 0 && errno != EINTR) return ReadStatus::eof;
    if (pr <= 0) continue;

    char chunk[4096];
    const ssize_t r = ::read(stdout_fd_, chunk, sizeof(chunk));
    if (r < 0) {
      if (errno == EINTR) continue;
      return ReadStatus::eof;
    }
    if (r == 0) {
      if (buffer_.empty()) return ReadStatus::eof;
      // Final unterminated line.
      *out = buffer_;
      buffer_.clear();
      return ReadStatus::line;
    }
    buffer_.append(chunk, static_cast<std::size_t>(r));
  }
}

int LineProcess::wait(double timeout_s) {
  if (pid_ <= 0) return -1;
  if (reaped_) return exit_code_;
  const auto deadline = Clock::now() + std::chrono::duration<double>(timeout_s);
  int status = 0;
  for (;;) {
    const pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == pid_) {
      exit_code_ = exit_code_from_status(status);
      reaped_ = true;
      return exit_code_;
    }
    if (Clock::now() >= deadline) {
      kill_now();
      ::waitpid(pid_, &status, 0);
      exit_code_ = exit_code_from_status(status);
      reaped_ = true;
      return exit_code_;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
}

void LineProcess::kill_now() {
  if (pid_ > 0 && !reaped_) {
    ::kill(-pid_, SIGKILL);
    ::kill(pid_, SIGKILL);
  }
}

}  // namespace voxprep

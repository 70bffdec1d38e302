#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <sys/types.h>
#include <vector>

namespace rdinst {

/// A child process with piped stdin/stdout/stderr. Killed on destruction.
class ChildProcess {
 public:
  enum class ReadStatus { Data, Timeout, Eof };
  using Clock = std::chrono::steady_clock;

  /// Starts `argv[0]` (looked up in PATH). Throws BackendError naming the
  /// executable when it cannot be started.
  explicit ChildProcess(const std::vector<std::string>& argv);
  ~ChildProcess();
  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  /// Throws BackendError when the child has gone away.
  void write(std::string_view data);
  /// Appends whatever stdout data arrives before `deadline` to `out`.
  ReadStatus read_some(std::string& out, Clock::time_point deadline);
  /// Everything the child wrote to stderr so far.
  std::string drain_stderr();

  void kill();
  bool running() const { return pid_ > 0; }
  pid_t pid() const { return pid_; }

 private:
  void pump_stderr();

  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  int err_fd_ = -1;
  std::string err_buf_;
};

}  // namespace rdinst

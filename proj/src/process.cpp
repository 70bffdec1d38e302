#include "rdinst/process.hpp"

#include "rdinst/errors.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace rdinst {

namespace {

void ignore_sigpipe() {
  // Writes to a dead child must surface as EPIPE, not terminate the process.
  static const bool done = [] {
    std::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

}  // namespace

ChildProcess::ChildProcess(const std::vector<std::string>& argv) {
  if (argv.empty()) throw BackendError("empty backend command");
  ignore_sigpipe();

  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw BackendError(std::string("pipe: ") + std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_pipe[1], STDERR_FILENO);

  std::vector<char*> args;
  for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);
    throw BackendError("cannot start backend '" + argv[0] + "': " + std::strerror(rc));
  }
  pid_ = pid;
  in_fd_ = in_pipe[1];
  out_fd_ = out_pipe[0];
  err_fd_ = err_pipe[0];
  ::fcntl(err_fd_, F_SETFL, ::fcntl(err_fd_, F_GETFL) | O_NONBLOCK);
}

ChildProcess::~ChildProcess() { kill(); }

void ChildProcess::kill() {
  close_fd(in_fd_);
  close_fd(out_fd_);
  close_fd(err_fd_);
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    int status = 0;
    while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
    pid_ = -1;
  }
}

void ChildProcess::write(std::string_view data) {
  if (in_fd_ < 0) throw BackendError("backend is not running");
  while (!data.empty()) {
    const ssize_t n = ::write(in_fd_, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw BackendError(std::string("write to backend failed: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void ChildProcess::pump_stderr() {
  if (err_fd_ < 0) return;
  char buf[4096];
  while (true) {
    const ssize_t n = ::read(err_fd_, buf, sizeof buf);
    if (n > 0) {
      err_buf_.append(buf, static_cast<std::size_t>(n));
      continue;
    }
    if (n == 0) close_fd(err_fd_);
    break;
  }
}

std::string ChildProcess::drain_stderr() {
  pump_stderr();
  return std::move(err_buf_);
}

ChildProcess::ReadStatus ChildProcess::read_some(std::string& out, Clock::time_point deadline) {
  if (out_fd_ < 0) return ReadStatus::Eof;
  while (true) {
    const auto now = Clock::now();
    if (now >= deadline) return ReadStatus::Timeout;
    const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1;
    pollfd fds[2] = {{out_fd_, POLLIN, 0}, {err_fd_, POLLIN, 0}};
    const int nfds = err_fd_ >= 0 ? 2 : 1;
    const int rc = ::poll(fds, nfds, static_cast<int>(std::min<long long>(wait, 1 << 30)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw BackendError(std::string("poll failed: ") + std::strerror(errno));
    }
    if (rc == 0) continue;
    if (nfds == 2 && fds[1].revents) pump_stderr();
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      char buf[8192];
      const ssize_t n = ::read(out_fd_, buf, sizeof buf);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw BackendError(std::string("read from backend failed: ") + std::strerror(errno));
      }
      if (n == 0) return ReadStatus::Eof;
      out.append(buf, static_cast<std::size_t>(n));
      return ReadStatus::Data;
    }
  }
}

}  // namespace rdinst

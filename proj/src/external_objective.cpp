#include <sys/wait.h>
#include <unistd.h>

#include <pthread.h>

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <cstring>

#include "mixedbo/error.hpp"
#include "mixedbo/harness.hpp"

namespace mixedbo {

namespace {

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

}  // namespace

double run_external_objective(const std::string& command, const std::string& config_json) {
  int to_child[2] = {-1, -1};
  int from_child[2] = {-1, -1};
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
    close_fd(to_child[0]);
    close_fd(to_child[1]);
    throw Error(ErrorCode::Objective, std::string("pipe failed: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int* fd : {&to_child[0], &to_child[1], &from_child[0], &from_child[1]}) close_fd(*fd);
    throw Error(ErrorCode::Objective, std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  close_fd(to_child[0]);
  close_fd(from_child[1]);

  // A child that exits without reading stdin must not kill us with SIGPIPE:
  // block it on this thread and discard any pending instance afterwards.
  sigset_t pipe_set, old_set;
  sigemptyset(&pipe_set);
  sigaddset(&pipe_set, SIGPIPE);
  ::pthread_sigmask(SIG_BLOCK, &pipe_set, &old_set);
  const std::string line = config_json + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(to_child[1], line.data() + written, line.size() - written);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      break;
    }
    written += static_cast<std::size_t>(n);
  }
  close_fd(to_child[1]);
  const timespec no_wait{0, 0};
  while (::sigtimedwait(&pipe_set, nullptr, &no_wait) > 0) {
  }
  ::pthread_sigmask(SIG_SETMASK, &old_set, nullptr);

  std::string output;
  char buf[4096];
  while (true) {
    const ssize_t n = ::read(from_child[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  close_fd(from_child[0]);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error(ErrorCode::Objective, "objective command '" + command + "' exited with status " +
                                          std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));
  }
  const char* begin = output.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  const bool converted = end != begin;
  while (*end == ' ' || *end == '\n' || *end == '\r' || *end == '\t') ++end;
  if (!converted || *end != '\0' || !std::isfinite(value)) {
    throw Error(ErrorCode::Objective, "objective command printed '" + output + "', not a number");
  }
  return value;
}

}  // namespace mixedbo

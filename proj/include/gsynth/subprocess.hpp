#pragma once

#include <chrono>
#include <csignal>
#include <cstring>
#include <string>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "gsynth/errors.hpp"

namespace gsynth {

struct SubprocessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string out;
  std::string err;
};

/// Runs `command`, feeds `input` on stdin, and collects stdout/stderr.
/// Kills the child when the deadline passes (timeout_s <= 0 means no
/// limit). Blocking; one process per call.
inline SubprocessResult run_subprocess(const std::vector<std::string> &command,
                                       const std::string &input, double timeout_s) {
  if (command.empty())
    throw Error("empty command");

  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (pipe(in_pipe) || pipe(out_pipe) || pipe(err_pipe))
    throw Error("pipe() failed: " + std::string(strerror(errno)));

  pid_t pid = fork();
  if (pid < 0)
    throw Error("fork() failed: " + std::string(strerror(errno)));

  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]})
      close(fd);
    std::vector<char *> argv;
    argv.reserve(command.size() + 1);
    for (const std::string &c : command)
      argv.push_back(const_cast<char *>(c.c_str()));
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    _exit(127);
  }

  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);
  for (int fd : {in_pipe[1], out_pipe[0], err_pipe[0]})
    fcntl(fd, F_SETFL, fcntl(fd, F_GETFL) | O_NONBLOCK);
  // A dying child must not take us down with SIGPIPE.
  signal(SIGPIPE, SIG_IGN);

  SubprocessResult result;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(timeout_s > 0 ? timeout_s : 1e9));
  size_t written = 0;
  bool stdin_open = true, stdout_open = true, stderr_open = true;
  char buf[4096];

  while (stdout_open || stderr_open) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      kill(pid, SIGKILL);
      break;
    }
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
    wait_ms = std::min(wait_ms, 200);

    struct pollfd fds[3];
    nfds_t nfds = 0;
    int in_idx = -1, out_idx = -1, err_idx = -1;
    if (stdin_open) {
      in_idx = static_cast<int>(nfds);
      fds[nfds++] = {in_pipe[1], POLLOUT, 0};
    }
    if (stdout_open) {
      out_idx = static_cast<int>(nfds);
      fds[nfds++] = {out_pipe[0], POLLIN, 0};
    }
    if (stderr_open) {
      err_idx = static_cast<int>(nfds);
      fds[nfds++] = {err_pipe[0], POLLIN, 0};
    }
    if (poll(fds, nfds, wait_ms) < 0 && errno != EINTR)
      break;

    if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (fds[in_idx].revents & (POLLERR | POLLHUP)) {
        close(in_pipe[1]);
        stdin_open = false;
      } else {
        ssize_t n = write(in_pipe[1], input.data() + written, input.size() - written);
        if (n > 0)
          written += static_cast<size_t>(n);
        if (written >= input.size() || (n < 0 && errno != EAGAIN && errno != EINTR)) {
          close(in_pipe[1]);
          stdin_open = false;
        }
      }
    }
    auto drain = [&](int idx, int fd, std::string &sink, bool &open_flag) {
      if (idx < 0 || !(fds[idx].revents & (POLLIN | POLLHUP)))
        return;
      ssize_t n;
      while ((n = read(fd, buf, sizeof buf)) > 0)
        sink.append(buf, static_cast<size_t>(n));
      if (n == 0 || (n < 0 && errno != EAGAIN && errno != EINTR)) {
        close(fd);
        open_flag = false;
      }
    };
    drain(out_idx, out_pipe[0], result.out, stdout_open);
    drain(err_idx, err_pipe[0], result.err, stderr_open);
  }

  if (stdin_open)
    close(in_pipe[1]);
  if (stdout_open)
    close(out_pipe[0]);
  if (stderr_open)
    close(err_pipe[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    result.exit_code = 128 + WTERMSIG(status);
  return result;
}

} // namespace gsynth

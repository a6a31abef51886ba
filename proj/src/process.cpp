#include "dqprep/process.hpp"

#include <csignal>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <stdexcept>

#include <chrono>
#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace dqprep {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string expand_command(const std::string& tmpl, const std::string& path) {
  static const std::string placeholder = "{file}";
  const std::string quoted = shell_quote(path);
  std::string out;
  bool replaced = false;
  std::size_t pos = 0;
  for (;;) {
    const auto hit = tmpl.find(placeholder, pos);
    if (hit == std::string::npos) break;
    out.append(tmpl, pos, hit - pos);
    out += quoted;
    pos = hit + placeholder.size();
    replaced = true;
  }
  out.append(tmpl, pos, std::string::npos);
  if (!replaced) out += " " + quoted;
  return out;
}

TempFile::TempFile(const std::string& suffix) {
  std::string templ = (std::filesystem::temp_directory_path() / "dqprep-XXXXXX").string() + suffix;
  const int fd = mkstemps(templ.data(), static_cast<int>(suffix.size()));
  if (fd < 0) throw std::runtime_error("mkstemps failed: " + std::string(std::strerror(errno)));
  close(fd);
  path_ = templ;
}

TempFile::~TempFile() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

ProcessResult run_shell(const std::string& command, double timeout_seconds) {
  ProcessResult r;
  int out_pipe[2];
  int err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) throw std::runtime_error("pipe failed");

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    const int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(out_pipe[0]);
    close(err_pipe[0]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(out_pipe[1]);
  close(err_pipe[1]);

  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  int open_fds = 2;
  char buf[4096];
  while (open_fds > 0) {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double remaining = timeout_seconds - elapsed;
    if (remaining <= 0) {
      r.timed_out = true;
      kill(-pid, SIGKILL);
      break;
    }
    const int wait_ms = static_cast<int>(std::min(remaining * 1000.0 + 1, 1000.0));
    const int n = poll(fds, 2, wait_ms);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const ssize_t got = read(fds[i].fd, buf, sizeof buf);
      if (got > 0) {
        (i == 0 ? r.out : r.err).append(buf, static_cast<std::size_t>(got));
      } else {
        close(fds[i].fd);
        fds[i].fd = -1;
        --open_fds;
      }
    }
  }
  for (auto& p : fds)
    if (p.fd >= 0) close(p.fd);

  int status = 0;
  waitpid(pid, &status, 0);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.timed_out) return r;
  if (WIFSIGNALED(status)) {
    r.signal = WTERMSIG(status);
  } else if (WIFEXITED(status)) {
    r.exit_code = WEXITSTATUS(status);
    if (r.exit_code == 126 || r.exit_code == 127) r.spawn_failed = true;
    if (r.exit_code > 128 && r.exit_code < 128 + 32) r.signal = r.exit_code - 128;
  }
  return r;
}

} // namespace dqprep

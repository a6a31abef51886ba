#pragma once

// Child-process plumbing shared by the external SAT adapter, fuzz campaigns
// and the delta debugger.

#include <string>

namespace dqprep {

struct ProcessResult {
  int exit_code = -1;
  // Terminating signal; also set when the shell reports 128+N.
  int signal = 0;
  bool timed_out = false;
  // The shell could not find or execute the command (exit 126/127).
  bool spawn_failed = false;
  std::string out;
  std::string err;
  double seconds = 0;
};

// Runs `/bin/sh -c command` in its own process group; the group is killed
// when timeout_seconds elapses.
ProcessResult run_shell(const std::string& command, double timeout_seconds);

// Replaces every `{file}` with the quoted path, or appends it if absent.
std::string expand_command(const std::string& tmpl, const std::string& path);

std::string shell_quote(const std::string& s);

// A uniquely named file removed on destruction.
class TempFile {
public:
  explicit TempFile(const std::string& suffix = "");
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

private:
  std::string path_;
};

} // namespace dqprep

#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

namespace classbot {

struct RunResult {
  int exit_code = -1;
  bool timed_out = false;
  bool spawn_failed = false;  // binary missing / exec error
  std::string output;         // stdout + stderr, merged
};

struct RunOptions {
  std::string workdir;  // empty = inherit
  std::chrono::seconds timeout{120};
  bool scrub_env = false;  // keep only PATH, HOME, LANG plus extra_env
  std::map<std::string, std::string> extra_env;
};

// Runs argv[0] with args, capturing merged stdout+stderr. The child is put in
// its own process group; on timeout the whole group is killed.
RunResult run_command(const std::vector<std::string>& argv,
                      const RunOptions& opts);

// Replaces invalid UTF-8 byte sequences with U+FFFD.
std::string sanitize_utf8(const std::string& bytes);

}  // namespace classbot

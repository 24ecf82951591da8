#include "classbot/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

namespace classbot {

namespace {

std::vector<std::string> build_env(const RunOptions& opts) {
  std::vector<std::string> env;
  if (opts.scrub_env) {
    for (const char* key : {"PATH", "HOME", "LANG"}) {
      const char* v = std::getenv(key);
      if (v) env.push_back(std::string(key) + "=" + v);
    }
  } else {
    for (char** e = environ; *e; ++e) env.emplace_back(*e);
  }
  for (const auto& [k, v] : opts.extra_env) env.push_back(k + "=" + v);
  return env;
}

}  // namespace

RunResult run_command(const std::vector<std::string>& argv,
                      const RunOptions& opts) {
  RunResult result;
  if (argv.empty()) {
    result.spawn_failed = true;
    return result;
  }

  int out_pipe[2];
  int err_pipe[2];  // exec-failure reporting, CLOEXEC
  if (pipe(out_pipe) != 0) {
    result.spawn_failed = true;
    return result;
  }
  if (pipe2(err_pipe, O_CLOEXEC) != 0) {
    close(out_pipe[0]);
    close(out_pipe[1]);
    result.spawn_failed = true;
    return result;
  }

  std::vector<std::string> env = build_env(opts);

  pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]})
      close(fd);
    result.spawn_failed = true;
    return result;
  }

  if (pid == 0) {
    setpgid(0, 0);
    close(out_pipe[0]);
    close(err_pipe[0]);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(out_pipe[1], STDERR_FILENO);
    close(out_pipe[1]);
    if (!opts.workdir.empty() && chdir(opts.workdir.c_str()) != 0) {
      int e = errno;
      (void)!write(err_pipe[1], &e, sizeof(e));
      _exit(127);
    }
    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    std::vector<char*> cenv;
    for (const auto& e : env) cenv.push_back(const_cast<char*>(e.c_str()));
    cenv.push_back(nullptr);
    execvpe(cargv[0], cargv.data(), cenv.data());
    int e = errno;
    (void)!write(err_pipe[1], &e, sizeof(e));
    _exit(127);
  }

  setpgid(pid, pid);  // may race with the child's own call; either wins
  close(out_pipe[1]);
  close(err_pipe[1]);

  auto deadline = std::chrono::steady_clock::now() + opts.timeout;
  char buf[4096];
  bool open = true;
  while (open) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      killpg(pid, SIGKILL);
      break;
    }
    auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       deadline - now)
                       .count();
    struct pollfd pfd{out_pipe[0], POLLIN, 0};
    int rc = poll(&pfd, 1, static_cast<int>(wait_ms));
    if (rc == 0) continue;  // re-check deadline
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    ssize_t n = read(out_pipe[0], buf, sizeof(buf));
    if (n > 0)
      result.output.append(buf, static_cast<size_t>(n));
    else
      open = false;
  }
  close(out_pipe[0]);

  int exec_errno = 0;
  if (read(err_pipe[0], &exec_errno, sizeof(exec_errno)) ==
      sizeof(exec_errno)) {
    result.spawn_failed = true;
  }
  close(err_pipe[0]);

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (result.timed_out) {
    killpg(pid, SIGKILL);  // stragglers started after the first kill
    result.exit_code = -1;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

std::string sanitize_utf8(const std::string& bytes) {
  static const char kReplacement[] = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(bytes.size());
  size_t i = 0;
  const auto cont = [&](size_t j) {
    return j < bytes.size() && (static_cast<unsigned char>(bytes[j]) & 0xC0) == 0x80;
  };
  while (i < bytes.size()) {
    unsigned char c = static_cast<unsigned char>(bytes[i]);
    size_t len = 0;
    if (c < 0x80)
      len = 1;
    else if ((c & 0xE0) == 0xC0 && c >= 0xC2)
      len = 2;
    else if ((c & 0xF0) == 0xE0)
      len = 3;
    else if ((c & 0xF8) == 0xF0 && c <= 0xF4)
      len = 4;
    bool ok = len > 0;
    for (size_t j = 1; ok && j < len; ++j) ok = cont(i + j);
    if (ok) {
      out.append(bytes, i, len);
      i += len;
    } else {
      out.append(kReplacement, 3);
      ++i;
    }
  }
  return out;
}

}  // namespace classbot

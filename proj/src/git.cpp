#include "classbot/git.hpp"

#include <filesystem>

#include "classbot/subprocess.hpp"

namespace classbot {

namespace fs = std::filesystem;

std::string git(const std::vector<std::string>& args,
                const std::string& workdir) {
  std::vector<std::string> argv = {"git"};
  argv.insert(argv.end(), args.begin(), args.end());
  RunOptions opts;
  opts.workdir = workdir;
  opts.timeout = std::chrono::seconds(300);
  RunResult res = run_command(argv, opts);
  if (res.spawn_failed) throw GitError("git binary not found");
  if (res.timed_out) throw GitError("git timed out");
  std::string out = res.output;
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r'))
    out.pop_back();
  if (res.exit_code != 0) {
    std::string cmd;
    for (const auto& a : args) cmd += " " + a;
    throw GitError("git" + cmd + " failed: " + out);
  }
  return out;
}

std::string sync_clone(const std::string& url, const std::string& dir) {
  if (!fs::exists(fs::path(dir) / ".git")) {
    fs::create_directories(fs::path(dir).parent_path());
    git({"clone", "--quiet", url, dir});
  } else {
    git({"fetch", "--quiet", "origin", "HEAD"}, dir);
    git({"reset", "--hard", "--quiet", "FETCH_HEAD"}, dir);
  }
  return rev_parse_head(dir);
}

std::string remote_head(const std::string& url) {
  std::string out = git({"ls-remote", url, "HEAD"});
  auto tab = out.find('\t');
  if (tab == std::string::npos || tab != 40)
    throw GitError("unexpected ls-remote output for " + url);
  return out.substr(0, 40);
}

std::string rev_parse_head(const std::string& dir) {
  return git({"rev-parse", "HEAD"}, dir);
}

std::string ref_snapshot(const std::string& dir) {
  std::string refs = git({"for-each-ref"}, dir);
  std::string head = git({"rev-parse", "HEAD"}, dir);
  return refs + "\nHEAD " + head;
}

std::string repo_slug(const std::string& url, const std::string& fallback) {
  // https://host/owner/name(.git) or git@host:owner/name(.git)
  std::string s = url;
  if (s.size() >= 4 && s.substr(s.size() - 4) == ".git")
    s = s.substr(0, s.size() - 4);
  while (!s.empty() && s.back() == '/') s.pop_back();
  auto scheme = s.find("://");
  if (scheme != std::string::npos) s = s.substr(scheme + 3);
  auto colon = s.find(':');
  if (colon != std::string::npos && s.find('/') > colon)
    s = s.substr(colon + 1);
  auto last = s.rfind('/');
  if (last == std::string::npos) return fallback;
  auto prev = s.rfind('/', last - 1);
  std::string slug =
      prev == std::string::npos ? s : s.substr(prev + 1);
  // Local paths ("/tmp/x/y") reach here too; require a host-like prefix
  // stripped above, so absolute paths fall back.
  if (url.rfind('/', 0) == 0 || url.rfind("file://", 0) == 0 ||
      url.rfind("./", 0) == 0 || url.rfind("../", 0) == 0)
    return fallback;
  auto slash = slug.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == slug.size())
    return fallback;
  return slug;
}

}  // namespace classbot

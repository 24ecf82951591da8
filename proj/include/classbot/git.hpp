#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace classbot {

class GitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs git with the given arguments, returning trimmed stdout+stderr.
// Throws GitError on nonzero exit.
std::string git(const std::vector<std::string>& args,
                const std::string& workdir = {});

// Clones url into dir if absent, otherwise fetches and hard-resets the
// working tree to the remote head. Returns the resulting HEAD hash.
std::string sync_clone(const std::string& url, const std::string& dir);

// Remote HEAD without touching any local clone.
std::string remote_head(const std::string& url);

std::string rev_parse_head(const std::string& dir);

// Snapshot of every ref plus HEAD; for before/after mutation checks.
std::string ref_snapshot(const std::string& dir);

// "owner/name" slug from a clone URL; falls back to the given id for URLs
// with no recognizable owner/name tail (e.g. local fixture paths).
std::string repo_slug(const std::string& url, const std::string& fallback);

}  // namespace classbot

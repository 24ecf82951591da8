#pragma once

#include <mutex>
#include <optional>
#include <string>

#include "classbot/forge.hpp"
#include "classbot/time_util.hpp"

namespace classbot {

struct RepoState {
  std::string repo_id;
  std::optional<IssueRef> issue;
  std::optional<std::string> last_content_hash;  // present whenever issue is
  std::optional<std::string> last_assessed_commit;
  TimePoint last_run_at{};
};

// One JSON document per roster, rewritten atomically (temp file + rename) on
// every put. Per-repo read-modify-write is serialized by an internal mutex.
class StateStore {
 public:
  explicit StateStore(std::string path);

  std::optional<RepoState> get(const std::string& repo_id);
  void put(const RepoState& state);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::mutex mutex_;
};

}  // namespace classbot

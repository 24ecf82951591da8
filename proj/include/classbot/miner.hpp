#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "classbot/orchestrator.hpp"
#include "classbot/time_util.hpp"

namespace classbot {

struct CommitRecord {
  std::string hash;
  std::string author;  // "Name <email>"
  TimePoint timestamp; // author timestamp
  std::int64_t lines_added = 0;
  std::int64_t lines_deleted = 0;
};

struct RepoMetrics {
  std::string repo_id;
  std::string group_label;
  std::int64_t commit_count = 0;
  std::int64_t code_churn = 0;  // added + deleted over counted commits
  // Absent when commit_count == 0.
  std::optional<double> first_commit_days;  // from start to earliest commit
  std::optional<double> last_commit_hours;  // from deadline; negative = early
};

struct MiningWindow {
  TimePoint start;
  TimePoint deadline;  // counting extends to deadline + 24 h
};

// First-parent commit list of HEAD's branch, newest first, with per-commit
// added/deleted line totals (binary files count zero).
std::vector<CommitRecord> read_commits(const std::string& repo_path);

// Counts first-parent commits with author timestamp in
// [start, deadline + 24 h], excluding authors matching any of the regex
// patterns. Churn sums added + deleted lines over counted commits.
RepoMetrics mine_repo(const std::string& repo_path, const MiningWindow& window,
                      const std::vector<std::string>& exclude_authors,
                      const std::string& repo_id = {},
                      const std::string& group_label = {});

struct MiningRosterResult {
  std::vector<RepoMetrics> metrics;      // ordered by repo_id
  std::vector<std::string> skipped;      // repo ids that failed, with reason
  std::vector<CommitRecord> per_commit;  // filled when per_commit requested
  std::vector<std::string> per_commit_repo;  // parallel repo ids
};

MiningRosterResult mine_roster(
    const Roster& roster, const std::string& group_label,
    const MiningWindow& window, const std::vector<std::string>& exclude_authors,
    const std::string& workdir_root, bool per_commit = false,
    const std::function<void(const std::string&)>& log = [](const std::string&) {},
    int jobs = 1);

// Header: repo_id,group,commits,churn,first_commit_days,last_commit_hours
// Absent metrics render as empty fields.
std::string metrics_csv(const std::vector<RepoMetrics>& metrics);

// Per-commit rows: repo_id,group,commit,author_timestamp,added,deleted,churn
std::string per_commit_csv(const MiningRosterResult& result,
                           const std::string& group_label);

}  // namespace classbot

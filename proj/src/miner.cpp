#include "classbot/miner.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <regex>
#include <sstream>

#include "classbot/git.hpp"

namespace classbot {

namespace fs = std::filesystem;

namespace {

constexpr std::chrono::hours kLateWindow{24};

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::vector<CommitRecord> read_commits(const std::string& repo_path) {
  // %x1e separates commits, %x09 separates header fields.
  std::string out = git({"log", "--first-parent", "--no-renames", "--numstat",
                         "--format=%x1e%H%x09%an <%ae>%x09%at", "HEAD"},
                        repo_path);
  std::vector<CommitRecord> commits;
  std::istringstream records(out);
  std::string record;
  while (std::getline(records, record, '\x1e')) {
    if (record.empty()) continue;
    std::istringstream lines(record);
    std::string header;
    if (!std::getline(lines, header)) continue;
    auto t1 = header.find('\t');
    auto t2 = header.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) continue;
    CommitRecord commit;
    commit.hash = header.substr(0, t1);
    commit.author = header.substr(t1 + 1, t2 - t1 - 1);
    commit.timestamp = from_unix_seconds(std::stoll(header.substr(t2 + 1)));
    std::string stat;
    while (std::getline(lines, stat)) {
      if (stat.empty()) continue;
      auto s1 = stat.find('\t');
      auto s2 = stat.find('\t', s1 + 1);
      if (s1 == std::string::npos || s2 == std::string::npos) continue;
      std::string added = stat.substr(0, s1);
      std::string deleted = stat.substr(s1 + 1, s2 - s1 - 1);
      if (added != "-") commit.lines_added += std::stoll(added);
      if (deleted != "-") commit.lines_deleted += std::stoll(deleted);
    }
    commits.push_back(std::move(commit));
  }
  return commits;
}

RepoMetrics mine_repo(const std::string& repo_path, const MiningWindow& window,
                      const std::vector<std::string>& exclude_authors,
                      const std::string& repo_id,
                      const std::string& group_label) {
  RepoMetrics metrics;
  metrics.repo_id = repo_id.empty() ? fs::path(repo_path).filename().string()
                                    : repo_id;
  metrics.group_label = group_label;

  std::vector<std::regex> excludes;
  for (const auto& pattern : exclude_authors) excludes.emplace_back(pattern);

  TimePoint cutoff = window.deadline + kLateWindow;
  std::optional<TimePoint> earliest, latest;
  for (const CommitRecord& commit : read_commits(repo_path)) {
    if (commit.timestamp < window.start || commit.timestamp > cutoff) continue;
    bool excluded =
        std::any_of(excludes.begin(), excludes.end(), [&](const std::regex& re) {
          return std::regex_search(commit.author, re);
        });
    if (excluded) continue;
    ++metrics.commit_count;
    metrics.code_churn += commit.lines_added + commit.lines_deleted;
    if (!earliest || commit.timestamp < *earliest) earliest = commit.timestamp;
    if (!latest || commit.timestamp > *latest) latest = commit.timestamp;
  }

  if (metrics.commit_count > 0) {
    using FSecs = std::chrono::duration<double>;
    metrics.first_commit_days =
        std::chrono::duration_cast<FSecs>(*earliest - window.start).count() /
        86400.0;
    metrics.last_commit_hours =
        std::chrono::duration_cast<FSecs>(*latest - window.deadline).count() /
        3600.0;
  }
  return metrics;
}

MiningRosterResult mine_roster(
    const Roster& roster, const std::string& group_label,
    const MiningWindow& window, const std::vector<std::string>& exclude_authors,
    const std::string& workdir_root, bool per_commit,
    const std::function<void(const std::string&)>& log, int jobs) {
  (void)jobs;  // mining is fast enough sequentially at roster scale
  MiningRosterResult result;
  std::vector<RepoEntry> entries = roster.repos;
  std::sort(entries.begin(), entries.end(),
            [](const RepoEntry& a, const RepoEntry& b) { return a.id < b.id; });

  for (const RepoEntry& entry : entries) {
    std::string path = entry.url;
    try {
      if (!fs::exists(fs::path(path) / ".git") &&
          !fs::exists(fs::path(path) / "HEAD")) {
        path = (fs::path(workdir_root) / entry.id).string();
        sync_clone(entry.url, path);
      }
      RepoMetrics metrics = mine_repo(path, window, exclude_authors, entry.id,
                                      group_label);
      result.metrics.push_back(std::move(metrics));
      if (per_commit) {
        std::vector<std::regex> excludes;
        for (const auto& pattern : exclude_authors) excludes.emplace_back(pattern);
        TimePoint cutoff = window.deadline + kLateWindow;
        for (const CommitRecord& c : read_commits(path)) {
          if (c.timestamp < window.start || c.timestamp > cutoff) continue;
          bool excluded = std::any_of(
              excludes.begin(), excludes.end(),
              [&](const std::regex& re) { return std::regex_search(c.author, re); });
          if (excluded) continue;
          result.per_commit.push_back(c);
          result.per_commit_repo.push_back(entry.id);
        }
      }
    } catch (const std::exception& e) {
      result.skipped.push_back(entry.id);
      log("repo=" + entry.id + " outcome=skipped detail=" + e.what());
    }
  }
  return result;
}

std::string metrics_csv(const std::vector<RepoMetrics>& metrics) {
  std::string out =
      "repo_id,group,commits,churn,first_commit_days,last_commit_hours\n";
  for (const RepoMetrics& m : metrics) {
    out += m.repo_id + "," + m.group_label + "," +
           std::to_string(m.commit_count) + "," + std::to_string(m.code_churn) +
           ",";
    if (m.first_commit_days) out += fmt_real(*m.first_commit_days);
    out += ",";
    if (m.last_commit_hours) out += fmt_real(*m.last_commit_hours);
    out += "\n";
  }
  return out;
}

std::string per_commit_csv(const MiningRosterResult& result,
                           const std::string& group_label) {
  std::string out = "repo_id,group,commit,author_timestamp,added,deleted,churn\n";
  for (size_t i = 0; i < result.per_commit.size(); ++i) {
    const CommitRecord& c = result.per_commit[i];
    out += result.per_commit_repo[i] + "," + group_label + "," + c.hash + "," +
           format_iso8601(c.timestamp) + "," + std::to_string(c.lines_added) +
           "," + std::to_string(c.lines_deleted) + "," +
           std::to_string(c.lines_added + c.lines_deleted) + "\n";
  }
  return out;
}

}  // namespace classbot

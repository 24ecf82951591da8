#include "classbot/orchestrator.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "classbot/git.hpp"
#include "classbot/renderer.hpp"

namespace classbot {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::chrono::hours kGraceWindow{24};

TimePoint daily_instant(TimePoint now, int hour_utc) {
  time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  tm.tm_hour = hour_utc;
  tm.tm_min = 0;
  tm.tm_sec = 0;
  return std::chrono::system_clock::from_time_t(timegm(&tm));
}

void for_each_parallel(size_t count, int jobs,
                       const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> workers;
  int n = std::min<int>(jobs, static_cast<int>(count));
  for (int w = 0; w < n; ++w) {
    workers.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::created: return "created";
    case Outcome::updated: return "updated";
    case Outcome::unchanged: return "unchanged";
    case Outcome::skipped: return "skipped";
    case Outcome::failed: return "failed";
  }
  return "?";
}

Roster parse_roster(const std::string& source) {
  json doc = json::parse(source, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw std::runtime_error("roster: not a JSON object");
  Roster roster;
  if (!doc.contains("rubric") || !doc["rubric"].is_string())
    throw std::runtime_error("roster.rubric: missing rubric path");
  roster.rubric_path = doc["rubric"].get<std::string>();
  if (!doc.contains("repos") || !doc["repos"].is_array())
    throw std::runtime_error("roster.repos: missing repo array");
  std::set<std::string> seen;
  for (const auto& r : doc["repos"]) {
    if (!r.is_object() || !r.contains("id") || !r.contains("url"))
      throw std::runtime_error("roster.repos: entries need id and url");
    RepoEntry entry{r["id"].get<std::string>(), r["url"].get<std::string>()};
    if (!seen.insert(entry.id).second)
      throw std::runtime_error("roster.repos: duplicate repo id \"" +
                               entry.id + "\"");
    roster.repos.push_back(std::move(entry));
  }
  return roster;
}

Roster load_roster_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open roster file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Roster roster = parse_roster(buf.str());
  fs::path rubric(roster.rubric_path);
  if (rubric.is_relative())
    roster.rubric_path = (fs::path(path).parent_path() / rubric).string();
  return roster;
}

NudgeResult nudge_once(const RepoEntry& entry, NudgeContext& ctx) {
  NudgeResult result;
  TimePoint now = ctx.clock();
  if (now > ctx.rubric->deadline + kGraceWindow) {
    result.outcome = Outcome::skipped;
    result.detail = "past deadline grace window";
    return result;
  }

  std::string workdir = (fs::path(ctx.workdir_root) / entry.id).string();
  std::string head;
  try {
    head = sync_clone(entry.url, workdir);
  } catch (const GitError& e) {
    result.outcome = Outcome::failed;
    result.detail = e.what();
    return result;
  }

  RepoState state =
      ctx.store->get(entry.id).value_or(RepoState{.repo_id = entry.id});

  if (ctx.rubric->update_mode == UpdateMode::on_change && state.issue &&
      state.last_assessed_commit == head) {
    if (!ctx.dry_run) {
      state.last_run_at = now;
      ctx.store->put(state);
    }
    result.outcome = Outcome::unchanged;
    result.detail = "head unchanged";
    return result;
  }

  AssessmentReport report =
      assess(workdir, entry.id, *ctx.rubric, head, now, ctx.analyzer);
  NudgeIssue issue = render(report, *ctx.rubric);
  result.body = issue.body;

  std::string slug = repo_slug(entry.url, entry.id);
  try {
    std::optional<IssueRef> ref = state.issue;
    if (!ref) {
      // Crash recovery: a previously created issue may exist without state.
      MarkedIssueLookup lookup = ctx.forge->find_marked_issue(slug, issue.marker);
      if (lookup.marked_count > 1)
        ctx.log("repo=" + entry.id + " warning=multiple marked issues, using #" +
                std::to_string(lookup.ref->number));
      ref = lookup.ref;
    }

    if (!ref) {
      result.outcome = Outcome::created;
      if (ctx.dry_run) return result;
      IssueRef created = ctx.forge->create_issue(slug, issue.title, issue.body);
      if (ctx.after_forge_write) ctx.after_forge_write();
      state.issue = created;
    } else if (state.last_content_hash != issue.content_hash ||
               !state.last_content_hash) {
      result.outcome = Outcome::updated;
      if (ctx.dry_run) return result;
      ctx.forge->update_issue(*ref, issue.body);
      if (ctx.after_forge_write) ctx.after_forge_write();
      state.issue = *ref;
    } else {
      result.outcome = Outcome::unchanged;
      result.detail = "issue body already current";
      if (ctx.dry_run) return result;
      state.issue = *ref;
    }
  } catch (const ForgeError& e) {
    result.outcome = Outcome::failed;
    result.detail = e.what();
    return result;
  }

  state.last_content_hash = issue.content_hash;
  state.last_assessed_commit = head;
  state.last_run_at = now;
  ctx.store->put(state);
  return result;
}

int scheduler_tick(const Roster& roster, NudgeContext& ctx, int jobs) {
  TimePoint now = ctx.clock();
  std::atomic<int> attempted{0};
  std::mutex log_mutex;

  auto process = [&](size_t i) {
    const RepoEntry& entry = roster.repos[i];
    bool due = false;
    std::string why;
    auto state = ctx.store->get(entry.id);
    if (ctx.rubric->update_mode == UpdateMode::daily) {
      TimePoint scheduled = daily_instant(now, ctx.rubric->update_hour_utc);
      due = now >= scheduled &&
            (!state || state->last_run_at < scheduled);
      why = "daily schedule";
    } else {
      try {
        std::string head = remote_head(entry.url);
        due = !state || state->last_assessed_commit != head;
        why = "head moved";
      } catch (const GitError& e) {
        std::lock_guard lock(log_mutex);
        ctx.log("repo=" + entry.id + " outcome=failed detail=" + e.what());
        return;
      }
    }
    if (!due) return;
    ++attempted;
    NudgeResult result;
    try {
      result = nudge_once(entry, ctx);
    } catch (const std::exception& e) {
      result.outcome = Outcome::failed;
      result.detail = e.what();
    }
    std::lock_guard lock(log_mutex);
    ctx.log("repo=" + entry.id + " trigger=" + why +
            " outcome=" + outcome_name(result.outcome) +
            (result.detail.empty() ? "" : " detail=" + result.detail));
  };

  for_each_parallel(roster.repos.size(), jobs, process);
  return attempted.load();
}

void run_scheduler(const Roster& roster, NudgeContext& ctx,
                   const SchedulerOptions& opts) {
  auto sleep = opts.sleep ? opts.sleep : [](std::chrono::seconds d) {
    std::this_thread::sleep_for(d);
  };
  while (!opts.should_stop()) {
    scheduler_tick(roster, ctx, opts.jobs);
    if (opts.should_stop()) break;
    sleep(opts.poll_interval);
  }
}

}  // namespace classbot

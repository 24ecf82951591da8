#pragma once

#include <functional>
#include <string>
#include <vector>

#include "classbot/analyzer.hpp"
#include "classbot/forge.hpp"
#include "classbot/rubric.hpp"
#include "classbot/state_store.hpp"
#include "classbot/time_util.hpp"

namespace classbot {

struct RepoEntry {
  std::string id;
  std::string url;
};

struct Roster {
  std::string rubric_path;  // relative paths resolve against the roster file
  std::vector<RepoEntry> repos;
};

Roster parse_roster(const std::string& source);
Roster load_roster_file(const std::string& path);

enum class Outcome { created, updated, unchanged, skipped, failed };
const char* outcome_name(Outcome o);

struct NudgeResult {
  Outcome outcome = Outcome::failed;
  std::string detail;
  std::string body;  // rendered issue body, when an assessment ran
};

struct NudgeContext {
  const Rubric* rubric = nullptr;
  Forge* forge = nullptr;
  StateStore* store = nullptr;
  std::string workdir_root;  // per-repo clones live under here
  bool dry_run = false;
  std::function<TimePoint()> clock = [] {
    return std::chrono::system_clock::now();
  };
  std::function<void(const std::string&)> log = [](const std::string&) {};
  // Test hook, invoked between the forge write and the state write.
  std::function<void()> after_forge_write;
  AnalyzerOptions analyzer;
};

// One full nudge cycle for one repo: sync clone, assess, render, create or
// update the marked issue, persist state. Nudging stops (outcome skipped)
// past deadline + 24 h. dry_run assesses and renders but never touches the
// forge or the state store.
NudgeResult nudge_once(const RepoEntry& entry, NudgeContext& ctx);

struct SchedulerOptions {
  int jobs = 1;
  std::chrono::seconds poll_interval{300};
  std::function<void(std::chrono::seconds)> sleep;
  std::function<bool()> should_stop = [] { return false; };
};

// One scheduler pass; returns the number of nudges attempted. Daily mode
// fires once per repo per UTC day at update_hour_utc (with catch-up after
// restarts); on_change mode nudges when the remote head moved.
int scheduler_tick(const Roster& roster, NudgeContext& ctx, int jobs = 1);

// Loops scheduler_tick until should_stop; never throws past a repo failure.
void run_scheduler(const Roster& roster, NudgeContext& ctx,
                   const SchedulerOptions& opts);

}  // namespace classbot

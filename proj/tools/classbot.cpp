#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "classbot/analyzer.hpp"
#include "classbot/fake_forge.hpp"
#include "classbot/git.hpp"
#include "classbot/http_forge.hpp"
#include "classbot/miner.hpp"
#include "classbot/orchestrator.hpp"
#include "classbot/renderer.hpp"
#include "classbot/retry_forge.hpp"
#include "classbot/rubric.hpp"
#include "classbot/state_store.hpp"
#include "classbot/stats.hpp"

namespace fs = std::filesystem;
using namespace classbot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

struct GlobalOptions {
  bool dry_run = false;
  bool verbose = false;
  bool fake_forge = false;
  std::string forge_url = "https://api.github.com";
  std::string state_dir = ".classbot-state";
  std::string workdir_root = ".classbot-work";
  int jobs = 1;
  std::string clock_override;  // ISO-8601, for deterministic runs
};

void log_line(const GlobalOptions& opts, const std::string& msg) {
  (void)opts;
  std::fprintf(stderr, "[classbot] %s\n", msg.c_str());
}

ForgeConfig make_forge_config(const GlobalOptions& opts) {
  ForgeConfig config;
  config.base_url = opts.forge_url;
  const char* token = std::getenv("CLASSBOT_TOKEN");
  if (token) config.token = token;
  config.min_request_interval = std::chrono::milliseconds(500);
  return config;
}

NudgeContext make_context(const GlobalOptions& opts, const Rubric& rubric,
                          Forge& forge, StateStore& store) {
  NudgeContext ctx;
  ctx.rubric = &rubric;
  ctx.forge = &forge;
  ctx.store = &store;
  ctx.workdir_root = opts.workdir_root;
  ctx.dry_run = opts.dry_run;
  ctx.log = [&opts](const std::string& msg) { log_line(opts, msg); };
  if (!opts.clock_override.empty()) {
    TimePoint fixed = parse_iso8601(opts.clock_override);
    ctx.clock = [fixed] { return fixed; };
  }
  return ctx;
}

int cmd_check(const GlobalOptions& opts, const std::string& rubric_path,
              const std::string& repo_dir) {
  (void)opts;
  Rubric rubric = load_rubric_file(rubric_path);
  std::string head = "0000000";
  try {
    head = rev_parse_head(repo_dir);
  } catch (const GitError&) {
    // plain directory; assess anyway
  }
  AssessmentReport report = assess(repo_dir,
                                   fs::path(repo_dir).filename().string(),
                                   rubric, head,
                                   std::chrono::system_clock::now());
  NudgeIssue issue = render(report, rubric);
  std::fputs(issue.body.c_str(), stdout);
  return report.pass_count() == report.results.size() ? kExitOk
                                                      : kExitCheckFailed;
}

struct LoadedRoster {
  Roster roster;
  Rubric rubric;
};

LoadedRoster load(const std::string& roster_path) {
  LoadedRoster out{load_roster_file(roster_path), {}};
  out.rubric = load_rubric_file(out.roster.rubric_path);
  return out;
}

std::unique_ptr<Forge> make_raw_forge(const GlobalOptions& opts) {
  if (opts.fake_forge) return std::make_unique<FakeForge>();
  return std::make_unique<HttpForge>(make_forge_config(opts));
}

int cmd_nudge(const GlobalOptions& opts, const std::string& roster_path) {
  LoadedRoster loaded = load(roster_path);
  auto raw = make_raw_forge(opts);
  RetryForge forge(*raw, make_forge_config(opts));
  StateStore store((fs::path(opts.state_dir) /
                    (fs::path(roster_path).stem().string() + ".state.json"))
                       .string());
  NudgeContext ctx = make_context(opts, loaded.rubric, forge, store);

  bool any_failed = false;
  for (const RepoEntry& entry : loaded.roster.repos) {
    NudgeResult result = nudge_once(entry, ctx);
    log_line(opts, "repo=" + entry.id +
                       " outcome=" + outcome_name(result.outcome) +
                       (result.detail.empty() ? "" : " detail=" + result.detail));
    if (opts.dry_run && !result.body.empty()) std::fputs(result.body.c_str(), stdout);
    if (result.outcome == Outcome::failed) any_failed = true;
  }
  return any_failed ? kExitCheckFailed : kExitOk;
}

int cmd_serve(const GlobalOptions& opts, const std::string& roster_path,
              int poll_interval) {
  LoadedRoster loaded = load(roster_path);
  auto raw = make_raw_forge(opts);
  RetryForge forge(*raw, make_forge_config(opts));
  StateStore store((fs::path(opts.state_dir) /
                    (fs::path(roster_path).stem().string() + ".state.json"))
                       .string());
  NudgeContext ctx = make_context(opts, loaded.rubric, forge, store);
  SchedulerOptions sched;
  sched.jobs = opts.jobs;
  sched.poll_interval = std::chrono::seconds(poll_interval);
  run_scheduler(loaded.roster, ctx, sched);
  return kExitOk;
}

int cmd_mine(const GlobalOptions& opts, const std::string& roster_path,
             const std::string& group, const std::string& out_path,
             const std::vector<std::string>& exclude_authors, bool per_commit) {
  LoadedRoster loaded = load(roster_path);
  MiningWindow window{loaded.rubric.start, loaded.rubric.deadline};
  MiningRosterResult result = mine_roster(
      loaded.roster, group, window, exclude_authors, opts.workdir_root,
      per_commit, [&](const std::string& msg) { log_line(opts, msg); },
      opts.jobs);
  std::string csv = per_commit ? per_commit_csv(result, group)
                               : metrics_csv(result.metrics);
  if (out_path.empty() || out_path == "-") {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      log_line(opts, "cannot write " + out_path);
      return kExitConfigError;
    }
    out << csv;
  }
  for (const auto& id : result.skipped)
    log_line(opts, "repo=" + id + " outcome=skipped");
  return kExitOk;
}

int cmd_compare(const GlobalOptions& opts, const std::string& csv_path,
                const std::vector<std::string>& metrics,
                const std::string& group_col, const std::string& control,
                double alpha, const std::string& format) {
  (void)opts;
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw StatsError("cannot open CSV file: " + csv_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  IngestResult ingest = ingest_csv(buf.str(), metrics, group_col, control);
  if (ingest.skipped_cells || ingest.skipped_rows)
    log_line(opts, "skipped " + std::to_string(ingest.skipped_rows) +
                       " rows, " + std::to_string(ingest.skipped_cells) +
                       " cells");
  std::vector<StatTestResult> results = compare_metrics(ingest.rows, alpha);
  std::string report = format == "csv" ? format_report_csv(results)
                                       : format_report_text(results);
  std::fputs(report.c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"class-bot: nudges students with rubric progress issues"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_flag("--dry-run", opts.dry_run,
               "assess and render, but never write to the forge or state");
  app.add_flag("-v,--verbose", opts.verbose, "verbose logging");
  app.add_flag("--fake-forge", opts.fake_forge,
               "use the in-memory forge (offline demo mode)");
  app.add_option("--forge-url", opts.forge_url, "forge API base URL");
  app.add_option("--state-dir", opts.state_dir, "state directory");
  app.add_option("--workdir", opts.workdir_root, "clone cache directory");
  app.add_option("--jobs", opts.jobs, "concurrent repo workers")
      ->check(CLI::PositiveNumber);
  app.add_option("--clock", opts.clock_override,
                 "fixed UTC clock, e.g. 2020-03-05T12:00:00Z");

  std::string rubric_path, repo_dir, roster_path, out_path = "-";
  std::string csv_path, group = "nudge", group_col = "group", control, format = "text";
  std::vector<std::string> exclude_authors, metrics;
  int poll_interval = 300;
  double alpha = 0.05;
  bool per_commit = false;

  auto* check = app.add_subcommand("check", "assess one local repo");
  check->add_option("--rubric", rubric_path, "rubric JSON file")->required();
  check->add_option("--repo", repo_dir, "repository directory")->required();

  auto* nudge = app.add_subcommand("nudge", "one nudge pass over a roster");
  nudge->add_option("--roster", roster_path, "roster JSON file")->required();

  auto* serve = app.add_subcommand("serve", "run the scheduler loop");
  serve->add_option("--roster", roster_path, "roster JSON file")->required();
  serve->add_option("--poll-interval", poll_interval, "seconds between polls");

  auto* mine = app.add_subcommand("mine", "extract productivity metrics");
  mine->add_option("--roster", roster_path, "roster JSON file")->required();
  mine->add_option("--group", group, "group label for CSV rows");
  mine->add_option("--out", out_path, "output CSV path ('-' = stdout)");
  mine->add_option("--exclude-author", exclude_authors,
                   "author regex to exclude (repeatable)");
  mine->add_flag("--per-commit", per_commit, "emit one row per commit");

  auto* compare = app.add_subcommand("compare", "group comparison report");
  compare->add_option("--csv", csv_path, "metrics CSV file")->required();
  compare->add_option("--metrics", metrics, "metric column names")
      ->required()
      ->delimiter(',');
  compare->add_option("--group-col", group_col, "group column name");
  compare->add_option("--control", control, "control group label");
  compare->add_option("--alpha", alpha, "significance level");
  compare->add_option("--format", format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check(opts, rubric_path, repo_dir);
    if (*nudge) return cmd_nudge(opts, roster_path);
    if (*serve) return cmd_serve(opts, roster_path, poll_interval);
    if (*mine)
      return cmd_mine(opts, roster_path, group, out_path, exclude_authors,
                      per_commit);
    if (*compare)
      return cmd_compare(opts, csv_path, metrics, group_col, control, alpha,
                         format);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[classbot] error: %s\n", e.what());
    return kExitConfigError;
  }
  return kExitConfigError;
}

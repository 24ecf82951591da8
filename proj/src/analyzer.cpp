#include "classbot/analyzer.hpp"

#include <chrono>
#include <filesystem>
#include <regex>
#include <sstream>

#include "classbot/subprocess.hpp"

namespace classbot {

namespace fs = std::filesystem;

namespace {

CheckResult file_check(const std::string& workdir, const CheckSpec& spec) {
  CheckResult res;
  res.item_id = spec.id;
  std::error_code ec;
  bool present = fs::is_regular_file(fs::path(workdir) / spec.path, ec);
  bool want_present = spec.kind == CheckKind::file_exists;
  if (present == want_present) {
    res.status = CheckStatus::pass;
    res.detail = present ? "file present" : "file absent";
  } else {
    res.status = CheckStatus::fail;
    res.detail = present ? spec.path + " present" : spec.path + " not found";
  }
  return res;
}

size_t count_pattern_lines(const std::string& output, const std::regex& re) {
  size_t count = 0;
  std::istringstream lines(sanitize_utf8(output));
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::regex_search(line, re)) ++count;
  }
  return count;
}

CheckResult command_check(const std::string& workdir, const CheckSpec& spec,
                          const AnalyzerOptions& opts) {
  CheckResult res;
  res.item_id = spec.id;

  RunOptions run_opts;
  run_opts.workdir = workdir;
  run_opts.timeout = std::chrono::seconds(spec.timeout_seconds);
  run_opts.scrub_env = true;
  run_opts.extra_env = opts.extra_env;
  RunResult run = run_command(spec.command, run_opts);

  if (run.timed_out) {
    res.status = CheckStatus::fail;
    res.detail = "timeout";
    return res;
  }
  if (run.spawn_failed) {
    res.status = CheckStatus::fail;
    res.detail = "command not found";
    return res;
  }

  if (spec.kind == CheckKind::command_succeeds) {
    if (run.exit_code == 0) {
      res.status = CheckStatus::pass;
      res.detail = "exit 0";
    } else {
      res.status = CheckStatus::fail;
      res.detail = "exit " + std::to_string(run.exit_code);
    }
    return res;
  }

  // max_pattern_count: count matching lines over merged output.
  std::regex re(spec.pattern);
  size_t count = count_pattern_lines(run.output, re);
  if (count <= static_cast<size_t>(spec.threshold)) {
    res.status = CheckStatus::pass;
    res.detail = std::to_string(count) + " <= " + std::to_string(spec.threshold);
  } else {
    res.status = CheckStatus::fail;
    res.detail = std::to_string(count) + " > " + std::to_string(spec.threshold);
  }
  return res;
}

}  // namespace

size_t AssessmentReport::pass_count() const {
  size_t n = 0;
  for (const auto& r : results)
    if (r.status == CheckStatus::pass) ++n;
  return n;
}

CheckResult run_check(const std::string& workdir, const CheckSpec& spec,
                      const AnalyzerOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult res;
  switch (spec.kind) {
    case CheckKind::file_exists:
    case CheckKind::file_absent:
      res = file_check(workdir, spec);
      break;
    case CheckKind::command_succeeds:
    case CheckKind::max_pattern_count:
      res = command_check(workdir, spec, opts);
      break;
  }
  res.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  return res;
}

AssessmentReport assess(const std::string& workdir, const std::string& repo_id,
                        const Rubric& rubric, const std::string& head,
                        TimePoint now, const AnalyzerOptions& opts) {
  if (!fs::is_directory(workdir))
    throw AnalyzerError("working tree does not exist: " + workdir);
  AssessmentReport report;
  report.repo_id = repo_id;
  report.rubric_name = rubric.assignment_name;
  report.generated_at = now;
  report.head_commit = head;
  for (const CheckSpec* spec : rubric.all_items())
    report.results.push_back(run_check(workdir, *spec, opts));
  return report;
}

}  // namespace classbot

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "classbot/rubric.hpp"
#include "classbot/time_util.hpp"

namespace classbot {

enum class CheckStatus { pass, fail };

struct CheckResult {
  std::string item_id;
  CheckStatus status = CheckStatus::fail;
  std::string detail;  // non-empty whenever status is fail
  std::int64_t duration_ms = 0;
};

struct AssessmentReport {
  std::string repo_id;
  std::string rubric_name;
  TimePoint generated_at;
  std::vector<CheckResult> results;  // one per rubric item, rubric order
  std::string head_commit;

  size_t pass_count() const;
};

struct AnalyzerOptions {
  // Extra environment handed to check commands on top of PATH/HOME/LANG.
  std::map<std::string, std::string> extra_env;
};

class AnalyzerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs one check against a working tree. Missing binaries and timeouts are
// failed checks, not errors.
CheckResult run_check(const std::string& workdir, const CheckSpec& spec,
                      const AnalyzerOptions& opts = {});

// Runs every rubric check in order. A failing check never aborts the rest.
// Throws AnalyzerError if workdir does not exist.
AssessmentReport assess(const std::string& workdir, const std::string& repo_id,
                        const Rubric& rubric, const std::string& head,
                        TimePoint now, const AnalyzerOptions& opts = {});

}  // namespace classbot

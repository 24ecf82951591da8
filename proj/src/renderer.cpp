#include "classbot/renderer.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

namespace classbot {

namespace {

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

bool is_timestamp_line(const std::string& line) {
  return line.rfind("_Last updated:", 0) == 0;
}

}  // namespace

std::string content_hash(const std::string& body) {
  std::string stripped;
  std::istringstream lines(body);
  std::string line;
  while (std::getline(lines, line)) {
    if (is_timestamp_line(line)) continue;
    stripped += line;
    stripped += '\n';
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(stripped)));
  return buf;
}

NudgeIssue render(const AssessmentReport& report, const Rubric& rubric) {
  auto items = rubric.all_items();
  if (report.results.size() != items.size())
    throw RenderError("report has " + std::to_string(report.results.size()) +
                      " results for a rubric of " +
                      std::to_string(items.size()) + " items");
  for (size_t i = 0; i < items.size(); ++i) {
    if (report.results[i].item_id != items[i]->id)
      throw RenderError("report item \"" + report.results[i].item_id +
                        "\" does not match rubric item \"" + items[i]->id +
                        "\" at position " + std::to_string(i));
  }

  std::ostringstream body;
  body << kIssueMarker << "\n";
  body << "# " << rubric.assignment_name
       << " — Development Process Progress\n";
  body << "_Last updated: " << format_iso8601(report.generated_at)
       << " (commit " << report.head_commit.substr(0, 7) << ")_\n";

  size_t idx = 0;
  for (const auto& phase : rubric.phases) {
    body << "\n## " << phase.title << " (" << phase_id_name(phase.id) << ")\n";
    for (const auto& item : phase.items) {
      const CheckResult& res = report.results[idx++];
      const char* mark = res.status == CheckStatus::pass ? ":white_check_mark:"
                                                         : ":x:";
      body << "- " << mark << " " << item.description << "\n";
    }
  }

  body << "\nProgress: " << report.pass_count() << "/" << items.size()
       << " tasks complete.\n";

  NudgeIssue issue;
  issue.marker = kIssueMarker;
  issue.title = "[class-bot] " + rubric.assignment_name + " progress";
  issue.body = body.str();
  issue.content_hash = content_hash(issue.body);
  return issue;
}

}  // namespace classbot

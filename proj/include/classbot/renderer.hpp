#pragma once

#include <stdexcept>
#include <string>

#include "classbot/analyzer.hpp"
#include "classbot/rubric.hpp"

namespace classbot {

// First line of every bot-owned issue body; how the bot finds "its" issue.
inline constexpr const char* kIssueMarker = "<!-- class-bot:v1 -->";

struct NudgeIssue {
  std::string title;
  std::string body;          // first line is exactly the marker
  std::string marker;
  std::string content_hash;  // hash of body with the timestamp line blanked
};

class RenderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Renders a report into the deterministic issue body. Throws RenderError when
// report items do not match the rubric (same ids, same order).
NudgeIssue render(const AssessmentReport& report, const Rubric& rubric);

// FNV-1a over the body with the "_Last updated:" line excluded; stable under
// timestamp-only changes.
std::string content_hash(const std::string& body);

}  // namespace classbot

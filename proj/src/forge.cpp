#include "classbot/forge.hpp"

namespace classbot {

std::string clamp_issue_body(const std::string& body) {
  static const std::string kNotice = "\n\n[body truncated at forge size limit]";
  if (body.size() <= kMaxIssueBody) return body;
  std::string out = body.substr(0, kMaxIssueBody - kNotice.size());
  out += kNotice;
  return out;
}

}  // namespace classbot

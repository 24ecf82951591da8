#include "classbot/fake_forge.hpp"

#include <algorithm>

namespace classbot {

void FakeForge::bump(bool is_write) {
  ++call_count_;
  if (is_write) ++write_count_;
  if (fail_next_ > 0) {
    --fail_next_;
    throw TransientForgeError("injected failure");
  }
}

MarkedIssueLookup FakeForge::find_marked_issue(const std::string& repo,
                                               const std::string& marker) {
  std::lock_guard lock(mutex_);
  bump(false);
  MarkedIssueLookup out;
  auto it = repos_.find(repo);
  if (it == repos_.end()) return out;
  for (const Issue& issue : it->second) {
    if (!issue.open) continue;
    if (issue.body.rfind(marker, 0) != 0) continue;
    ++out.marked_count;
    if (!out.ref || issue.number < out.ref->number)
      out.ref = IssueRef{repo, issue.number};
  }
  return out;
}

IssueRef FakeForge::create_issue(const std::string& repo,
                                 const std::string& title,
                                 const std::string& body) {
  std::lock_guard lock(mutex_);
  bump(true);
  if (body.empty()) throw ForgeError("empty issue body");
  Issue issue;
  issue.number = ++next_number_[repo];
  issue.title = title;
  issue.body = clamp_issue_body(body);
  repos_[repo].push_back(issue);
  return IssueRef{repo, issue.number};
}

void FakeForge::update_issue(const IssueRef& ref, const std::string& body) {
  std::lock_guard lock(mutex_);
  bump(true);
  if (body.empty()) throw ForgeError("empty issue body");
  auto it = repos_.find(ref.repo);
  if (it == repos_.end())
    throw IssueGoneError("no such repo: " + ref.repo);
  for (Issue& issue : it->second) {
    if (issue.number != ref.number) continue;
    if (!issue.open)
      throw IssueGoneError(ref.repo + "#" + std::to_string(ref.number) +
                           " is closed");
    issue.body = clamp_issue_body(body);
    return;
  }
  throw IssueGoneError(ref.repo + "#" + std::to_string(ref.number) +
                       " not found");
}

IssueRef FakeForge::seed_issue(const std::string& repo,
                               const std::string& title,
                               const std::string& body, bool open) {
  std::lock_guard lock(mutex_);
  Issue issue;
  issue.number = ++next_number_[repo];
  issue.title = title;
  issue.body = body;
  issue.open = open;
  repos_[repo].push_back(issue);
  return IssueRef{repo, issue.number};
}

std::vector<FakeForge::Issue> FakeForge::issues(const std::string& repo) const {
  std::lock_guard lock(mutex_);
  auto it = repos_.find(repo);
  return it == repos_.end() ? std::vector<Issue>{} : it->second;
}

std::optional<FakeForge::Issue> FakeForge::issue(const IssueRef& ref) const {
  std::lock_guard lock(mutex_);
  auto it = repos_.find(ref.repo);
  if (it == repos_.end()) return std::nullopt;
  auto found = std::find_if(it->second.begin(), it->second.end(),
                            [&](const Issue& i) { return i.number == ref.number; });
  if (found == it->second.end()) return std::nullopt;
  return *found;
}

}  // namespace classbot

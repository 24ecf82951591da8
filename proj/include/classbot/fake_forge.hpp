#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "classbot/forge.hpp"

namespace classbot {

// In-memory forge: the acceptance suite's test double and the CLI's offline
// demo mode. Stores bodies bit-exactly and counts every call, including
// attempts that fail via the injected failure schedule.
class FakeForge : public Forge {
 public:
  struct Issue {
    int number = 0;
    std::string title;
    std::string body;
    bool open = true;
  };

  MarkedIssueLookup find_marked_issue(const std::string& repo,
                                      const std::string& marker) override;
  IssueRef create_issue(const std::string& repo, const std::string& title,
                        const std::string& body) override;
  void update_issue(const IssueRef& ref, const std::string& body) override;

  // Seeding and inspection.
  IssueRef seed_issue(const std::string& repo, const std::string& title,
                      const std::string& body, bool open = true);
  std::vector<Issue> issues(const std::string& repo) const;
  std::optional<Issue> issue(const IssueRef& ref) const;

  // Next n calls (reads and writes alike) throw TransientForgeError.
  void fail_next(int n) { fail_next_ = n; }

  int call_count() const { return call_count_; }
  int write_count() const { return write_count_; }

 private:
  void bump(bool is_write);

  mutable std::mutex mutex_;
  std::map<std::string, std::vector<Issue>> repos_;
  std::map<std::string, int> next_number_;
  int fail_next_ = 0;
  int call_count_ = 0;
  int write_count_ = 0;
};

}  // namespace classbot

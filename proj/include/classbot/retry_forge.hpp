#pragma once

#include <functional>
#include <map>
#include <mutex>

#include "classbot/forge.hpp"

namespace classbot {

// Wraps any Forge with retry, exponential backoff, and per-repo request
// spacing. The wrapped forge sees every attempt, so a FakeForge underneath
// observes the total call count.
class RetryForge : public Forge {
 public:
  using MonoClock = std::function<std::chrono::steady_clock::time_point()>;
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  RetryForge(Forge& inner, ForgeConfig config);
  RetryForge(Forge& inner, ForgeConfig config, MonoClock clock, Sleeper sleep);

  MarkedIssueLookup find_marked_issue(const std::string& repo,
                                      const std::string& marker) override;
  IssueRef create_issue(const std::string& repo, const std::string& title,
                        const std::string& body) override;
  void update_issue(const IssueRef& ref, const std::string& body) override;

 private:
  void pace(const std::string& repo);

  template <typename F>
  auto with_retries(const std::string& repo, F&& op) -> decltype(op());

  Forge& inner_;
  ForgeConfig config_;
  MonoClock clock_;
  Sleeper sleep_;
  std::mutex mutex_;
  std::map<std::string, std::chrono::steady_clock::time_point> last_request_;
};

}  // namespace classbot

#include "classbot/retry_forge.hpp"

#include <thread>

namespace classbot {

RetryForge::RetryForge(Forge& inner, ForgeConfig config)
    : RetryForge(inner, std::move(config),
                 [] { return std::chrono::steady_clock::now(); },
                 [](std::chrono::milliseconds d) {
                   std::this_thread::sleep_for(d);
                 }) {}

RetryForge::RetryForge(Forge& inner, ForgeConfig config, MonoClock clock,
                       Sleeper sleep)
    : inner_(inner),
      config_(std::move(config)),
      clock_(std::move(clock)),
      sleep_(std::move(sleep)) {}

void RetryForge::pace(const std::string& repo) {
  std::chrono::milliseconds wait{0};
  {
    std::lock_guard lock(mutex_);
    auto now = clock_();
    auto it = last_request_.find(repo);
    if (it != last_request_.end()) {
      auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
          now - it->second);
      if (elapsed < config_.min_request_interval)
        wait = config_.min_request_interval - elapsed;
    }
    last_request_[repo] = now + wait;
  }
  if (wait.count() > 0) sleep_(wait);
}

template <typename F>
auto RetryForge::with_retries(const std::string& repo, F&& op)
    -> decltype(op()) {
  int attempt = 0;
  for (;;) {
    pace(repo);
    try {
      return op();
    } catch (const TransientForgeError&) {
      if (attempt >= config_.max_retries) throw;
      auto delay = config_.backoff_base * (1 << attempt);
      sleep_(std::chrono::duration_cast<std::chrono::milliseconds>(delay));
      ++attempt;
    }
  }
}

MarkedIssueLookup RetryForge::find_marked_issue(const std::string& repo,
                                                const std::string& marker) {
  return with_retries(repo,
                      [&] { return inner_.find_marked_issue(repo, marker); });
}

IssueRef RetryForge::create_issue(const std::string& repo,
                                  const std::string& title,
                                  const std::string& body) {
  return with_retries(repo,
                      [&] { return inner_.create_issue(repo, title, body); });
}

void RetryForge::update_issue(const IssueRef& ref, const std::string& body) {
  with_retries(ref.repo, [&] {
    inner_.update_issue(ref, body);
    return 0;
  });
}

}  // namespace classbot

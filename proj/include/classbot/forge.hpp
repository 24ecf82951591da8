#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace classbot {

struct IssueRef {
  std::string repo;  // "owner/name"
  int number = 0;

  bool operator==(const IssueRef&) const = default;
};

// Forge size limit for issue bodies; longer bodies are truncated with a
// trailing notice so the stored body is exactly this long.
inline constexpr size_t kMaxIssueBody = 65536;

std::string clamp_issue_body(const std::string& body);

struct MarkedIssueLookup {
  std::optional<IssueRef> ref;  // lowest-numbered open marked issue
  int marked_count = 0;         // >1 means a warning should be surfaced
};

class ForgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Transient: network trouble, 5xx, rate limiting. Retried with backoff.
class TransientForgeError : public ForgeError {
 public:
  using ForgeError::ForgeError;
};

class AuthForgeError : public ForgeError {
 public:
  using ForgeError::ForgeError;
};

class RateLimitForgeError : public TransientForgeError {
 public:
  using TransientForgeError::TransientForgeError;
};

// Update target closed or missing.
class IssueGoneError : public ForgeError {
 public:
  using ForgeError::ForgeError;
};

class Forge {
 public:
  virtual ~Forge() = default;

  virtual MarkedIssueLookup find_marked_issue(const std::string& repo,
                                              const std::string& marker) = 0;
  virtual IssueRef create_issue(const std::string& repo,
                                const std::string& title,
                                const std::string& body) = 0;
  virtual void update_issue(const IssueRef& ref, const std::string& body) = 0;
};

struct ForgeConfig {
  std::string base_url = "https://api.github.com";
  std::string token;  // never logged
  int max_retries = 3;
  std::chrono::milliseconds min_request_interval{0};
  std::chrono::milliseconds backoff_base{250};
};

}  // namespace classbot

#pragma once

#include <memory>

#include "classbot/forge.hpp"

namespace httplib {
class Client;
}

namespace classbot {

// GitHub-compatible REST client:
//   GET  /repos/{repo}/issues?state=open&page=N&per_page=100
//   POST /repos/{repo}/issues            {"title": ..., "body": ...}
//   PATCH /repos/{repo}/issues/{number}  {"body": ...}
// Token goes in "Authorization: token <T>". One raw attempt per call;
// retries and pacing come from wrapping in RetryForge.
class HttpForge : public Forge {
 public:
  explicit HttpForge(const ForgeConfig& config);
  ~HttpForge() override;

  MarkedIssueLookup find_marked_issue(const std::string& repo,
                                      const std::string& marker) override;
  IssueRef create_issue(const std::string& repo, const std::string& title,
                        const std::string& body) override;
  void update_issue(const IssueRef& ref, const std::string& body) override;

 private:
  std::string token_;
  std::unique_ptr<httplib::Client> client_;
};

}  // namespace classbot

#include "classbot/http_forge.hpp"

#include <httplib.h>
#include <json.hpp>

namespace classbot {

using nlohmann::json;

namespace {

httplib::Headers auth_headers(const std::string& token) {
  httplib::Headers headers = {{"Accept", "application/vnd.github+json"},
                              {"User-Agent", "class-bot"}};
  if (!token.empty()) headers.emplace("Authorization", "token " + token);
  return headers;
}

[[noreturn]] void raise_http_error(const httplib::Result& res,
                                   const std::string& what) {
  if (!res)
    throw TransientForgeError(what + ": network error (" +
                              httplib::to_string(res.error()) + ")");
  int status = res->status;
  if (status == 401) throw AuthForgeError(what + ": authentication failed");
  if (status == 403 || status == 429)
    throw RateLimitForgeError(what + ": rate limited (HTTP " +
                              std::to_string(status) + ")");
  if (status == 404 || status == 410)
    throw IssueGoneError(what + ": not found (HTTP " + std::to_string(status) +
                         ")");
  if (status >= 500)
    throw TransientForgeError(what + ": HTTP " + std::to_string(status));
  throw ForgeError(what + ": HTTP " + std::to_string(status));
}

json parse_json(const std::string& body, const std::string& what) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded())
    throw ForgeError(what + ": unparseable response body");
  return doc;
}

}  // namespace

HttpForge::HttpForge(const ForgeConfig& config) : token_(config.token) {
  client_ = std::make_unique<httplib::Client>(config.base_url);
  client_->set_connection_timeout(10);
  client_->set_read_timeout(30);
  client_->set_follow_location(true);
}

HttpForge::~HttpForge() = default;

MarkedIssueLookup HttpForge::find_marked_issue(const std::string& repo,
                                               const std::string& marker) {
  MarkedIssueLookup out;
  for (int page = 1;; ++page) {
    std::string path = "/repos/" + repo + "/issues?state=open&per_page=100" +
                       "&page=" + std::to_string(page);
    auto res = client_->Get(path, auth_headers(token_));
    if (!res || res->status != 200) raise_http_error(res, "list issues");
    json issues = parse_json(res->body, "list issues");
    if (!issues.is_array()) throw ForgeError("list issues: expected an array");
    for (const auto& issue : issues) {
      if (!issue.contains("number") || !issue.contains("body")) continue;
      if (issue["body"].is_null()) continue;
      std::string body = issue["body"].get<std::string>();
      if (body.rfind(marker, 0) != 0) continue;
      int number = issue["number"].get<int>();
      ++out.marked_count;
      if (!out.ref || number < out.ref->number) out.ref = IssueRef{repo, number};
    }
    if (issues.size() < 100) break;
  }
  return out;
}

IssueRef HttpForge::create_issue(const std::string& repo,
                                 const std::string& title,
                                 const std::string& body) {
  json payload = {{"title", title}, {"body", clamp_issue_body(body)}};
  auto res = client_->Post("/repos/" + repo + "/issues", auth_headers(token_),
                           payload.dump(), "application/json");
  if (!res || res->status != 201) raise_http_error(res, "create issue");
  json created = parse_json(res->body, "create issue");
  if (!created.contains("number"))
    throw ForgeError("create issue: response missing issue number");
  return IssueRef{repo, created["number"].get<int>()};
}

void HttpForge::update_issue(const IssueRef& ref, const std::string& body) {
  json payload = {{"body", clamp_issue_body(body)}};
  std::string path =
      "/repos/" + ref.repo + "/issues/" + std::to_string(ref.number);
  auto res = client_->Patch(path, auth_headers(token_), payload.dump(),
                            "application/json");
  if (!res || res->status != 200) raise_http_error(res, "update issue");
}

}  // namespace classbot

#include "classbot/state_store.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace classbot {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_doc(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return json::object();
  std::ostringstream buf;
  buf << in.rdbuf();
  json doc = json::parse(buf.str(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return json::object();
  return doc;
}

void store_doc(const std::string& path, const json& doc) {
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write state file: " + path);
    out << doc.dump(2) << "\n";
    out.flush();
    if (!out) throw std::runtime_error("short write to state file: " + path);
  }
  fs::rename(tmp, target);
}

json to_json(const RepoState& s) {
  json j;
  j["repo_id"] = s.repo_id;
  if (s.issue)
    j["issue"] = {{"repo", s.issue->repo}, {"number", s.issue->number}};
  if (s.last_content_hash) j["last_content_hash"] = *s.last_content_hash;
  if (s.last_assessed_commit)
    j["last_assessed_commit"] = *s.last_assessed_commit;
  j["last_run_at"] = format_iso8601(s.last_run_at);
  return j;
}

RepoState from_json(const json& j) {
  RepoState s;
  s.repo_id = j.value("repo_id", "");
  if (j.contains("issue"))
    s.issue = IssueRef{j["issue"].value("repo", ""),
                       j["issue"].value("number", 0)};
  if (j.contains("last_content_hash"))
    s.last_content_hash = j["last_content_hash"].get<std::string>();
  if (j.contains("last_assessed_commit"))
    s.last_assessed_commit = j["last_assessed_commit"].get<std::string>();
  if (j.contains("last_run_at"))
    s.last_run_at = parse_iso8601(j["last_run_at"].get<std::string>());
  return s;
}

}  // namespace

StateStore::StateStore(std::string path) : path_(std::move(path)) {}

std::optional<RepoState> StateStore::get(const std::string& repo_id) {
  std::lock_guard lock(mutex_);
  json doc = load_doc(path_);
  if (!doc.contains(repo_id)) return std::nullopt;
  return from_json(doc[repo_id]);
}

void StateStore::put(const RepoState& state) {
  std::lock_guard lock(mutex_);
  json doc = load_doc(path_);
  doc[state.repo_id] = to_json(state);
  store_doc(path_, doc);
}

}  // namespace classbot

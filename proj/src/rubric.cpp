#include "classbot/rubric.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

namespace classbot {

using nlohmann::json;

namespace {

const char* const kPhaseNames[kPhaseCount] = {"Rq", "Ds", "Im", "Ut", "St", "Dp"};

bool is_command_kind(CheckKind k) {
  return k == CheckKind::command_succeeds || k == CheckKind::max_pattern_count;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw RubricError(path + ": " + what);
}

std::string require_string(const json& obj, const std::string& key,
                           const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  if (!obj[key].is_string()) fail(path + "." + key, "expected a string");
  return obj[key].get<std::string>();
}

TimePoint require_timestamp(const json& obj, const std::string& key,
                            const std::string& path) {
  std::string raw = require_string(obj, key, path);
  try {
    return parse_iso8601(raw);
  } catch (const std::invalid_argument& e) {
    fail(path + "." + key, e.what());
  }
}

CheckSpec parse_item(const json& item, const std::string& path) {
  if (!item.is_object()) fail(path, "expected an object");
  CheckSpec spec;
  spec.id = require_string(item, "id", path);
  spec.description = require_string(item, "description", path);
  std::string kind_name = require_string(item, "kind", path);
  auto kind = check_kind_from_name(kind_name);
  if (!kind) fail(path + ".kind", "unknown check kind \"" + kind_name + "\"");
  spec.kind = *kind;

  std::set<std::string> allowed = {"id", "description", "kind"};
  switch (spec.kind) {
    case CheckKind::file_exists:
    case CheckKind::file_absent:
      allowed.insert("path");
      spec.path = require_string(item, "path", path);
      break;
    case CheckKind::command_succeeds:
      allowed.insert({"command", "timeout"});
      break;
    case CheckKind::max_pattern_count:
      allowed.insert({"command", "timeout", "pattern", "threshold"});
      break;
  }

  if (is_command_kind(spec.kind)) {
    if (!item.contains("command") || !item["command"].is_array() ||
        item["command"].empty())
      fail(path + ".command", "expected a non-empty argument array");
    for (const auto& arg : item["command"]) {
      if (!arg.is_string()) fail(path + ".command", "arguments must be strings");
      spec.command.push_back(arg.get<std::string>());
    }
    if (item.contains("timeout")) {
      if (!item["timeout"].is_number_integer() ||
          item["timeout"].get<int>() <= 0)
        fail(path + ".timeout", "expected a positive integer");
      spec.timeout_seconds = item["timeout"].get<int>();
    }
  }
  if (spec.kind == CheckKind::max_pattern_count) {
    spec.pattern = require_string(item, "pattern", path);
    try {
      std::regex probe(spec.pattern);
    } catch (const std::regex_error& e) {
      fail(path + ".pattern", std::string("invalid regular expression: ") + e.what());
    }
    if (!item.contains("threshold") || !item["threshold"].is_number_integer() ||
        item["threshold"].get<int>() < 0)
      fail(path + ".threshold", "expected a non-negative integer");
    spec.threshold = item["threshold"].get<int>();
  }

  for (const auto& [key, _] : item.items()) {
    if (!allowed.count(key))
      fail(path + "." + key,
           "field not allowed for kind \"" + kind_name + "\"");
  }
  return spec;
}

}  // namespace

const char* phase_id_name(PhaseId id) {
  return kPhaseNames[static_cast<int>(id)];
}

std::optional<PhaseId> phase_id_from_name(const std::string& name) {
  for (int i = 0; i < kPhaseCount; ++i)
    if (name == kPhaseNames[i]) return static_cast<PhaseId>(i);
  return std::nullopt;
}

const char* check_kind_name(CheckKind kind) {
  switch (kind) {
    case CheckKind::file_exists: return "file_exists";
    case CheckKind::file_absent: return "file_absent";
    case CheckKind::command_succeeds: return "command_succeeds";
    case CheckKind::max_pattern_count: return "max_pattern_count";
  }
  return "?";
}

std::optional<CheckKind> check_kind_from_name(const std::string& name) {
  for (CheckKind k : {CheckKind::file_exists, CheckKind::file_absent,
                      CheckKind::command_succeeds, CheckKind::max_pattern_count})
    if (name == check_kind_name(k)) return k;
  return std::nullopt;
}

std::vector<const CheckSpec*> Rubric::all_items() const {
  std::vector<const CheckSpec*> out;
  for (const auto& phase : phases)
    for (const auto& item : phase.items) out.push_back(&item);
  return out;
}

size_t Rubric::item_count() const { return all_items().size(); }

Rubric parse_rubric(const std::string& source) {
  json doc = json::parse(source, nullptr, false);
  if (doc.is_discarded()) throw RubricError("document: not valid JSON");
  if (!doc.is_object()) throw RubricError("document: expected a JSON object");

  Rubric r;
  if (!doc.contains("assignment") || !doc["assignment"].is_object())
    throw RubricError("assignment: missing required object");
  const json& a = doc["assignment"];
  r.assignment_name = require_string(a, "name", "assignment");
  r.start = require_timestamp(a, "start", "assignment");
  r.deadline = require_timestamp(a, "deadline", "assignment");

  if (doc.contains("update")) {
    const json& u = doc["update"];
    if (!u.is_object()) throw RubricError("update: expected an object");
    std::string mode = require_string(u, "mode", "update");
    if (mode == "daily")
      r.update_mode = UpdateMode::daily;
    else if (mode == "on_change")
      r.update_mode = UpdateMode::on_change;
    else
      fail("update.mode", "expected \"daily\" or \"on_change\"");
    if (r.update_mode == UpdateMode::daily) {
      if (!u.contains("hour_utc") || !u["hour_utc"].is_number_integer() ||
          u["hour_utc"].get<int>() < 0 || u["hour_utc"].get<int>() > 23)
        fail("update.hour_utc", "expected an integer in [0, 23]");
      r.update_hour_utc = u["hour_utc"].get<int>();
    } else if (u.contains("hour_utc")) {
      fail("update.hour_utc", "not allowed in on_change mode");
    }
  }

  if (!doc.contains("phases") || !doc["phases"].is_array())
    throw RubricError("phases: missing required array");
  int idx = 0;
  for (const auto& p : doc["phases"]) {
    std::string ppath = "phases[" + std::to_string(idx++) + "]";
    if (!p.is_object()) fail(ppath, "expected an object");
    Phase phase;
    std::string id_name = require_string(p, "id", ppath);
    auto pid = phase_id_from_name(id_name);
    if (!pid) fail(ppath + ".id", "unknown phase id \"" + id_name + "\"");
    phase.id = *pid;
    phase.title = require_string(p, "title", ppath);
    if (!p.contains("items") || !p["items"].is_array())
      fail(ppath + ".items", "missing required array");
    int iidx = 0;
    for (const auto& item : p["items"])
      phase.items.push_back(
          parse_item(item, ppath + ".items[" + std::to_string(iidx++) + "]"));
    r.phases.push_back(std::move(phase));
  }

  auto violations = validate_rubric(r);
  if (!violations.empty()) throw RubricError(violations.front());
  return r;
}

std::vector<std::string> validate_rubric(const Rubric& r) {
  std::vector<std::string> out;
  if (r.start >= r.deadline)
    out.push_back("assignment.deadline: deadline must be after start");
  if (r.phases.empty())
    out.push_back("phases: at least one phase required");
  bool any_item = false;
  int last_order = -1;
  std::set<std::string> seen_ids;
  static const std::regex id_re("[a-z0-9_]+");
  for (size_t pi = 0; pi < r.phases.size(); ++pi) {
    const Phase& phase = r.phases[pi];
    std::string ppath = "phases[" + std::to_string(pi) + "]";
    int order = static_cast<int>(phase.id);
    if (order <= last_order)
      out.push_back(ppath + ".id: phase " + phase_id_name(phase.id) +
                    " out of process order or duplicated");
    last_order = order;
    if (phase.items.empty())
      out.push_back(ppath + ".items: phase has no items");
    for (size_t ii = 0; ii < phase.items.size(); ++ii) {
      const CheckSpec& item = phase.items[ii];
      std::string ipath = ppath + ".items[" + std::to_string(ii) + "]";
      any_item = true;
      if (!std::regex_match(item.id, id_re))
        out.push_back(ipath + ".id: \"" + item.id +
                      "\" must be lowercase alphanumeric or underscore");
      if (!seen_ids.insert(item.id).second)
        out.push_back(ipath + ".id: duplicate item id \"" + item.id + "\"");
      if (item.timeout_seconds <= 0)
        out.push_back(ipath + ".timeout: must be positive");
      if (item.kind == CheckKind::max_pattern_count && item.threshold < 0)
        out.push_back(ipath + ".threshold: must be non-negative");
    }
  }
  if (!r.phases.empty() && !any_item)
    out.push_back("phases: rubric has no check items");
  if (r.update_hour_utc < 0 || r.update_hour_utc > 23)
    out.push_back("update.hour_utc: must be in [0, 23]");
  return out;
}

std::string serialize_rubric(const Rubric& r) {
  json doc;
  doc["assignment"] = {{"name", r.assignment_name},
                       {"start", format_iso8601(r.start)},
                       {"deadline", format_iso8601(r.deadline)}};
  if (r.update_mode == UpdateMode::daily)
    doc["update"] = {{"mode", "daily"}, {"hour_utc", r.update_hour_utc}};
  else
    doc["update"] = {{"mode", "on_change"}};
  doc["phases"] = json::array();
  for (const auto& phase : r.phases) {
    json p = {{"id", phase_id_name(phase.id)},
              {"title", phase.title},
              {"items", json::array()}};
    for (const auto& item : phase.items) {
      json i = {{"id", item.id},
                {"description", item.description},
                {"kind", check_kind_name(item.kind)}};
      switch (item.kind) {
        case CheckKind::file_exists:
        case CheckKind::file_absent:
          i["path"] = item.path;
          break;
        case CheckKind::max_pattern_count:
          i["pattern"] = item.pattern;
          i["threshold"] = item.threshold;
          [[fallthrough]];
        case CheckKind::command_succeeds:
          i["command"] = item.command;
          i["timeout"] = item.timeout_seconds;
          break;
      }
      p["items"].push_back(std::move(i));
    }
    doc["phases"].push_back(std::move(p));
  }
  return doc.dump(2);
}

Rubric load_rubric_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RubricError("cannot open rubric file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rubric(buf.str());
}

}  // namespace classbot

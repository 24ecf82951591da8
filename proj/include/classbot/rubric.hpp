#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "classbot/time_util.hpp"

namespace classbot {

// Software development process phases, in process order.
enum class PhaseId { Rq, Ds, Im, Ut, St, Dp };

constexpr int kPhaseCount = 6;

const char* phase_id_name(PhaseId id);
std::optional<PhaseId> phase_id_from_name(const std::string& name);

enum class CheckKind { file_exists, file_absent, command_succeeds, max_pattern_count };

const char* check_kind_name(CheckKind kind);
std::optional<CheckKind> check_kind_from_name(const std::string& name);

struct CheckSpec {
  std::string id;           // lowercase alnum + underscore, unique in rubric
  std::string description;
  CheckKind kind = CheckKind::file_exists;
  std::string path;                  // file_exists / file_absent
  std::vector<std::string> command;  // command kinds
  int timeout_seconds = 120;         // command kinds
  std::string pattern;               // max_pattern_count
  int threshold = 0;                 // max_pattern_count
};

struct Phase {
  PhaseId id = PhaseId::Rq;
  std::string title;
  std::vector<CheckSpec> items;
};

enum class UpdateMode { daily, on_change };

struct Rubric {
  std::string assignment_name;
  TimePoint start;
  TimePoint deadline;
  std::vector<Phase> phases;
  UpdateMode update_mode = UpdateMode::daily;
  int update_hour_utc = 0;

  std::vector<const CheckSpec*> all_items() const;
  size_t item_count() const;
};

class RubricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses and validates a JSON rubric document. Total over arbitrary bytes:
// bad input raises RubricError, never crashes. A returned Rubric always
// satisfies validate_rubric(r).empty().
Rubric parse_rubric(const std::string& source);

// Returns one description per violated invariant; empty means valid.
// Each entry names the offending field path and the rule.
std::vector<std::string> validate_rubric(const Rubric& r);

// Inverse of parse_rubric on valid rubrics.
std::string serialize_rubric(const Rubric& r);

Rubric load_rubric_file(const std::string& path);

}  // namespace classbot

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "classbot/renderer.hpp"
#include "test_util.hpp"

using namespace classbot;
namespace tu = classbot::testutil;

namespace {

Rubric sample_rubric() {
  return parse_rubric(tu::read_file(tu::data_path("sample_rubric.json")));
}

AssessmentReport fixed_report(const Rubric& rubric,
                              const std::vector<bool>& passes) {
  AssessmentReport report;
  report.repo_id = "stu01";
  report.rubric_name = rubric.assignment_name;
  report.generated_at = parse_iso8601("2020-03-05T06:00:00Z");
  report.head_commit = "a1b2c3d4e5f60718293a4b5c6d7e8f9012345678";
  auto items = rubric.all_items();
  REQUIRE(passes.size() == items.size());
  for (size_t i = 0; i < items.size(); ++i) {
    CheckResult res;
    res.item_id = items[i]->id;
    res.status = passes[i] ? CheckStatus::pass : CheckStatus::fail;
    res.detail = passes[i] ? "ok" : "missing";
    report.results.push_back(res);
  }
  return report;
}

}  // namespace

TEST_CASE("golden body for the sample rubric") {
  Rubric rubric = sample_rubric();
  auto report = fixed_report(
      rubric, {true, false, true, false, true, false, true, true});
  NudgeIssue issue = render(report, rubric);
  CHECK(issue.body == tu::read_file(tu::data_path("golden_issue_body.md")));
  CHECK(issue.title == "[class-bot] Project 6 progress");
}

TEST_CASE("body starts with the marker line") {
  Rubric rubric = sample_rubric();
  auto report = fixed_report(
      rubric, {true, true, true, true, true, true, true, true});
  NudgeIssue issue = render(report, rubric);
  CHECK(issue.marker == kIssueMarker);
  CHECK(issue.body.rfind(std::string(kIssueMarker) + "\n", 0) == 0);
  CHECK(issue.body.find("Progress: 8/8 tasks complete.\n") != std::string::npos);
}

TEST_CASE("pass and fail map to check mark and x") {
  Rubric rubric = sample_rubric();
  auto report = fixed_report(
      rubric, {false, false, true, false, false, false, true, false});
  NudgeIssue issue = render(report, rubric);
  CHECK(issue.body.find("- :white_check_mark: Code compiles") != std::string::npos);
  CHECK(issue.body.find("- :x: README describes functionality") != std::string::npos);
  CHECK(issue.body.find("- :white_check_mark: .gitignore present") != std::string::npos);
  CHECK(issue.body.find("Progress: 2/8 tasks complete.") != std::string::npos);
}

TEST_CASE("every rubric item appears exactly once in the body") {
  Rubric rubric = sample_rubric();
  auto report = fixed_report(
      rubric, {true, false, true, false, true, false, true, false});
  NudgeIssue issue = render(report, rubric);
  for (const CheckSpec* item : rubric.all_items()) {
    std::string needle = " " + item->description + "\n";
    size_t first = issue.body.find(needle);
    REQUIRE(first != std::string::npos);
    CHECK(issue.body.find(needle, first + 1) == std::string::npos);
  }
}

TEST_CASE("content hash ignores the timestamp line only") {
  Rubric rubric = sample_rubric();
  std::vector<bool> passes = {true, false, true, false, true, false, true, true};
  auto a = fixed_report(rubric, passes);
  auto b = fixed_report(rubric, passes);
  b.generated_at = parse_iso8601("2020-03-06T06:00:00Z");
  CHECK(render(a, rubric).content_hash == render(b, rubric).content_hash);

  passes[0] = false;
  auto c = fixed_report(rubric, passes);
  CHECK(render(a, rubric).content_hash != render(c, rubric).content_hash);
}

TEST_CASE("report/rubric mismatch is a hard error") {
  Rubric rubric = sample_rubric();
  auto report = fixed_report(
      rubric, {true, true, true, true, true, true, true, true});
  report.results.pop_back();
  CHECK_THROWS_AS(render(report, rubric), RenderError);

  auto swapped = fixed_report(
      rubric, {true, true, true, true, true, true, true, true});
  std::swap(swapped.results[0].item_id, swapped.results[1].item_id);
  CHECK_THROWS_AS(render(swapped, rubric), RenderError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "test_util.hpp"

namespace tu = classbot::testutil;

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

CliResult run_cli(const std::string& args, const std::string& workdir) {
  std::string out;
  int code = tu::sh(std::string(CLASSBOT_BINARY) + " " + args, workdir, &out);
  return {code, out};
}

const char* kTinyRubric = R"({
  "assignment": {"name": "P1", "start": "2020-03-01T00:00:00Z",
                  "deadline": "2020-03-15T23:59:59Z"},
  "phases": [
    {"id": "Rq", "title": "Requirements", "items": [
      {"id": "readme", "description": "README present",
       "kind": "file_exists", "path": "README.md"}]},
    {"id": "Dp", "title": "Deployment", "items": [
      {"id": "gitignore", "description": ".gitignore present",
       "kind": "file_exists", "path": ".gitignore"}]}
  ]})";

void make_repo(const std::string& dir, bool with_readme) {
  tu::git_init(dir);
  tu::write_file(dir + "/.gitignore", "build/\n");
  if (with_readme) tu::write_file(dir + "/README.md", "hello\n");
  tu::git_commit(dir, "init", "2020-03-02T00:00:00Z");
}

}  // namespace

TEST_CASE("check exits 0 on all-pass, 1 on failure, 2 on config error") {
  tu::TempDir dir;
  tu::write_file(dir.str() + "/rubric.json", kTinyRubric);
  make_repo(dir.str() + "/good", true);
  make_repo(dir.str() + "/bad", false);

  auto good = run_cli("check --rubric rubric.json --repo good", dir.str());
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("Progress: 2/2 tasks complete.") != std::string::npos);

  auto bad = run_cli("check --rubric rubric.json --repo bad", dir.str());
  CHECK(bad.exit_code == 1);
  CHECK(std::count(bad.output.begin(), bad.output.end(), ':') > 0);
  CHECK(bad.output.find(":x: README present") != std::string::npos);

  auto missing = run_cli("check --rubric nope.json --repo good", dir.str());
  CHECK(missing.exit_code == 2);
}

TEST_CASE("nudge over a fixture roster with the fake forge logs created") {
  tu::TempDir dir;
  tu::write_file(dir.str() + "/rubric.json", kTinyRubric);
  make_repo(dir.str() + "/stu01", true);
  make_repo(dir.str() + "/stu02", false);
  tu::write_file(dir.str() + "/roster.json",
                 R"({"rubric": "rubric.json", "repos": [)"
                 R"({"id": "stu01", "url": "stu01"},)"
                 R"({"id": "stu02", "url": "stu02"}]})");
  auto res = run_cli(
      "--fake-forge --clock 2020-03-05T12:00:00Z nudge --roster roster.json",
      dir.str());
  CHECK(res.exit_code == 0);
  size_t first = res.output.find("outcome=created");
  REQUIRE(first != std::string::npos);
  CHECK(res.output.find("outcome=created", first + 1) != std::string::npos);
}

TEST_CASE("nudge --dry-run renders bodies and keeps state dir empty") {
  tu::TempDir dir;
  tu::write_file(dir.str() + "/rubric.json", kTinyRubric);
  make_repo(dir.str() + "/stu01", true);
  tu::write_file(dir.str() + "/roster.json",
                 R"({"rubric": "rubric.json", "repos": [)"
                 R"({"id": "stu01", "url": "stu01"}]})");
  auto res = run_cli(
      "--fake-forge --dry-run --clock 2020-03-05T12:00:00Z nudge "
      "--roster roster.json",
      dir.str());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("<!-- class-bot:v1 -->") != std::string::npos);
  CHECK(!tu::fs::exists(dir.str() + "/.classbot-state"));
}

TEST_CASE("mine produces the golden CSV for the fixture roster") {
  tu::TempDir dir;
  tu::write_file(dir.str() + "/rubric.json", kTinyRubric);
  // deterministic single-commit repos
  for (const char* id : {"alpha", "beta"}) {
    std::string repo = dir.str() + "/" + id;
    tu::git_init(repo);
    tu::write_file(repo + "/f.txt", "1\n2\n3\n");
    tu::git_commit(repo, "init", "2020-03-03T12:00:00Z");
  }
  tu::write_file(dir.str() + "/roster.json",
                 R"({"rubric": "rubric.json", "repos": [)"
                 R"({"id": "alpha", "url": "alpha"},)"
                 R"({"id": "beta", "url": "beta"}]})");
  auto res = run_cli("mine --roster roster.json --group control --out -",
                      dir.str());
  CHECK(res.exit_code == 0);
  // hand-computed: 1 commit, churn 3, first 2.5 days, last -299.99972 h
  std::string golden =
      "repo_id,group,commits,churn,first_commit_days,last_commit_hours\n"
      "alpha,control,1,3,2.5,-299.999722\n"
      "beta,control,1,3,2.5,-299.999722\n";
  CHECK(res.output == golden);
}

TEST_CASE("compare renders stars exactly where p is below alpha") {
  tu::TempDir dir;
  std::string csv = "id,group,metric_sep,metric_mixed\n";
  // metric_sep: disjoint n=8 vs 8 -> tiny p; metric_mixed: interleaved -> large p
  for (int i = 0; i < 8; ++i)
    csv += "c" + std::to_string(i) + ",control," + std::to_string(i) + "," +
           std::to_string(i % 4) + "\n";
  for (int i = 0; i < 8; ++i)
    csv += "n" + std::to_string(i) + ",nudge," + std::to_string(100 + i) + "," +
           std::to_string(i % 4) + "\n";
  tu::write_file(dir.str() + "/m.csv", csv);
  auto res = run_cli(
      "compare --csv m.csv --metrics metric_sep,metric_mixed --group-col group",
      dir.str());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("metric_sep***") != std::string::npos);
  CHECK(res.output.find("metric_mixed***") == std::string::npos);
  CHECK(res.output.find("p-value") != std::string::npos);

  auto as_csv = run_cli(
      "compare --csv m.csv --metrics metric_sep --group-col group --format csv",
      dir.str());
  CHECK(as_csv.exit_code == 0);
  CHECK(as_csv.output.rfind("metric,group,mean,median,p_value,significant\n",
                            0) == 0);
}

TEST_CASE("compare with a malformed CSV path exits nonzero") {
  tu::TempDir dir;
  auto res = run_cli("compare --csv nope.csv --metrics a --group-col g",
                      dir.str());
  CHECK(res.exit_code == 2);
}

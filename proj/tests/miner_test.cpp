#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "classbot/miner.hpp"
#include "test_util.hpp"

using namespace classbot;
namespace tu = classbot::testutil;

namespace {

// Fixture repo: 4 commits at known offsets, one by a bot author.
//   start    = 2020-03-01T00:00:00Z
//   deadline = 2020-03-15T23:59:59Z
//
//   c1 2020-03-03T12:00:00Z student  +3 -0
//   c2 2020-03-05T00:00:00Z bot      +5 -0   (excluded)
//   c3 2020-03-10T08:30:00Z student  +2 -1   (one modify, one add)
//   c4 2020-03-15T22:23:59Z student  +1 -2   (one modify, one delete)
void build_fixture(const std::string& dir) {
  tu::git_init(dir);
  tu::write_file(dir + "/a.txt", "one\ntwo\nthree\n");
  tu::git_commit(dir, "c1", "2020-03-03T12:00:00Z");
  tu::write_file(dir + "/bot.txt", "b1\nb2\nb3\nb4\nb5\n");
  tu::git_commit(dir, "c2", "2020-03-05T00:00:00Z",
                 "Course Bot <bot@course.edu>");
  tu::write_file(dir + "/a.txt", "one\nTWO\nthree\nfour\n");  // modify+add: +2 -1
  tu::git_commit(dir, "c3", "2020-03-10T08:30:00Z");
  tu::write_file(dir + "/a.txt", "one\nthree\nfour!\n");  // +1 -2
  tu::git_commit(dir, "c4", "2020-03-15T22:23:59Z");
}

MiningWindow window() {
  return {parse_iso8601("2020-03-01T00:00:00Z"),
          parse_iso8601("2020-03-15T23:59:59Z")};
}

}  // namespace

TEST_CASE("read_commits reports per-commit numstat totals") {
  tu::TempDir dir;
  build_fixture(dir.str());
  auto commits = read_commits(dir.str());
  REQUIRE(commits.size() == 4);  // newest first
  CHECK(commits[0].lines_added == 1);
  CHECK(commits[0].lines_deleted == 2);
  CHECK(commits[3].lines_added == 3);
  CHECK(commits[3].lines_deleted == 0);
  CHECK(commits[2].author == "Course Bot <bot@course.edu>");
}

TEST_CASE("single commit adding 3 and deleting 2 lines has churn 5") {
  tu::TempDir dir;
  tu::git_init(dir.str());
  tu::write_file(dir.str() + "/f.txt", "a\nb\nc\nd\ne\n");
  tu::git_commit(dir.str(), "base", "2020-02-28T00:00:00Z");  // before window
  tu::write_file(dir.str() + "/f.txt", "a\nb\nc\nN1\nN2\nN3\n");  // +3 -2
  tu::git_commit(dir.str(), "edit", "2020-03-02T00:00:00Z");
  auto m = mine_repo(dir.str(), window(), {});
  CHECK(m.commit_count == 1);
  CHECK(m.code_churn == 5);
}

TEST_CASE("fixture metrics match hand-computed arithmetic") {
  tu::TempDir dir;
  build_fixture(dir.str());
  auto m = mine_repo(dir.str(), window(), {"bot@course\\.edu"}, "stu01", "nudge");

  CHECK(m.repo_id == "stu01");
  CHECK(m.group_label == "nudge");
  CHECK(m.commit_count == 3);
  // churn: c1 (+3 -0) + c3 (+2 -1) + c4 (+1 -2) = 9
  CHECK(m.code_churn == 9);
  // first commit: 2.5 days after start
  REQUIRE(m.first_commit_days);
  CHECK(*m.first_commit_days == doctest::Approx(2.5).epsilon(1e-9));
  // last commit: 1.6 h (96 min) before the deadline
  REQUIRE(m.last_commit_hours);
  CHECK(*m.last_commit_hours == doctest::Approx(-1.6).epsilon(1e-9));
}

TEST_CASE("zero counted commits leave the time metrics absent") {
  tu::TempDir dir;
  tu::git_init(dir.str());
  tu::write_file(dir.str() + "/f.txt", "x\n");
  tu::git_commit(dir.str(), "late", "2020-04-01T00:00:00Z");  // outside window
  auto m = mine_repo(dir.str(), window(), {});
  CHECK(m.commit_count == 0);
  CHECK(m.code_churn == 0);
  CHECK(!m.first_commit_days);
  CHECK(!m.last_commit_hours);
}

TEST_CASE("commits within the 24h late window still count") {
  tu::TempDir dir;
  tu::git_init(dir.str());
  tu::write_file(dir.str() + "/f.txt", "x\n");
  tu::git_commit(dir.str(), "late", "2020-03-16T12:00:00Z");  // 12h late
  auto m = mine_repo(dir.str(), window(), {});
  CHECK(m.commit_count == 1);
  REQUIRE(m.last_commit_hours);
  CHECK(*m.last_commit_hours ==
        doctest::Approx(12.0 + 1.0 / 3600.0).epsilon(1e-9));
}

TEST_CASE("widening the window never decreases the commit count") {
  tu::TempDir dir;
  build_fixture(dir.str());
  auto narrow = mine_repo(dir.str(), window(), {});
  MiningWindow wide{window().start - std::chrono::hours(24 * 30),
                    window().deadline + std::chrono::hours(24 * 30)};
  auto wider = mine_repo(dir.str(), wide, {});
  CHECK(wider.commit_count >= narrow.commit_count);
  // and excluding zero authors keeps every commit
  auto excluded = mine_repo(dir.str(), window(), {"bot@course\\.edu"});
  CHECK(excluded.commit_count <= narrow.commit_count);
}

TEST_CASE("metrics of a repo equal metrics of its bare clone") {
  tu::TempDir dir;
  std::string work = dir.str() + "/work";
  std::string bare = dir.str() + "/bare.git";
  build_fixture(work);
  tu::sh("git clone -q --bare work bare.git", dir.str());
  auto from_work = mine_repo(work, window(), {"bot@"});
  auto from_bare = mine_repo(bare, window(), {"bot@"});
  CHECK(from_work.commit_count == from_bare.commit_count);
  CHECK(from_work.code_churn == from_bare.code_churn);
  CHECK(*from_work.first_commit_days == *from_bare.first_commit_days);
  CHECK(*from_work.last_commit_hours == *from_bare.last_commit_hours);
}

TEST_CASE("merge commits are not double counted (first-parent only)") {
  tu::TempDir dir;
  tu::git_init(dir.str());
  tu::write_file(dir.str() + "/f.txt", "base\n");
  tu::git_commit(dir.str(), "base", "2020-03-02T00:00:00Z");
  tu::sh("git checkout -q -b feature", dir.str());
  tu::write_file(dir.str() + "/g.txt", "1\n2\n3\n");
  tu::git_commit(dir.str(), "feature work", "2020-03-03T00:00:00Z");
  tu::sh("git checkout -q main", dir.str());
  tu::sh("GIT_AUTHOR_DATE=2020-03-04T00:00:00Z "
         "GIT_COMMITTER_DATE=2020-03-04T00:00:00Z "
         "git merge -q --no-ff -m merge feature",
         dir.str());
  auto m = mine_repo(dir.str(), window(), {});
  // base + merge on the first-parent chain; the feature commit is not
  CHECK(m.commit_count == 2);
  // merge brings g.txt (+3) along the first-parent diff
  CHECK(m.code_churn == 1 + 3);
}

TEST_CASE("mine_roster emits deterministic rows and logs skips") {
  tu::TempDir dir;
  std::string r1 = dir.str() + "/beta";
  std::string r2 = dir.str() + "/alpha";
  build_fixture(r1);
  build_fixture(r2);
  Roster roster;
  roster.repos = {{"beta", r1}, {"alpha", r2}, {"broken", dir.str() + "/nope"}};
  std::vector<std::string> log;
  auto result = mine_roster(roster, "control", window(), {}, dir.str() + "/cache",
                            false, [&](const std::string& m) { log.push_back(m); });
  REQUIRE(result.metrics.size() == 2);
  CHECK(result.metrics[0].repo_id == "alpha");  // sorted by repo_id
  CHECK(result.metrics[1].repo_id == "beta");
  REQUIRE(result.skipped.size() == 1);
  CHECK(result.skipped[0] == "broken");
  CHECK(log.size() == 1);

  std::string csv = metrics_csv(result.metrics);
  CHECK(csv.rfind("repo_id,group,commits,churn,first_commit_days,"
                  "last_commit_hours\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("alpha,control,4,") != std::string::npos);
}

TEST_CASE("empty roster gives a header-only CSV") {
  CHECK(metrics_csv({}) ==
        "repo_id,group,commits,churn,first_commit_days,last_commit_hours\n");
}

TEST_CASE("absent metrics render as empty CSV fields") {
  RepoMetrics m;
  m.repo_id = "r";
  m.group_label = "g";
  std::string csv = metrics_csv({m});
  CHECK(csv.find("r,g,0,0,,\n") != std::string::npos);
}

TEST_CASE("per-commit rows cover counted commits only") {
  tu::TempDir dir;
  std::string repo = dir.str() + "/stu";
  build_fixture(repo);
  Roster roster;
  roster.repos = {{"stu", repo}};
  auto result = mine_roster(roster, "nudge", window(), {"bot@"},
                            dir.str() + "/cache", true);
  CHECK(result.per_commit.size() == 3);
  std::string csv = per_commit_csv(result, "nudge");
  CHECK(csv.rfind("repo_id,group,commit,author_timestamp,added,deleted,churn\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

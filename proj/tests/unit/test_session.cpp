#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "coach/session.hpp"
#include "support/temp_dir.hpp"

using namespace coach;
using testing_support::TempDir;

namespace {

struct Transcript {
  std::string id;
  std::string out;
};

Transcript run(TraineeStore& store, const std::string& input, const std::string& id = {}) {
  std::istringstream in(input);
  std::ostringstream out;
  Transcript t;
  t.id = run_session(in, out, store, id);
  t.out = out.str();
  return t;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("zero assessment offers six moderate three-day choices", "[session]") {
  TempDir dir;
  TraineeStore store(dir.path());
  const auto t = run(store, "Ana\n0\n0\n0\n");
  CHECK(t.id == "t0001");
  CHECK(count(t.out, " days/week") == 6);
  CHECK(count(t.out, "Moderate walk, ") == 6);
  CHECK(count(t.out, "x 3 days/week") == 6);
  CHECK(t.out.find("6) Moderate walk, 30 min") != std::string::npos);
  CHECK(t.out.find("2) Moderate walk, 10 min x 3 days/week (90 MET-min)  (about 9 weeks") != std::string::npos);
  CHECK(t.out.find("Progress saved") != std::string::npos);
  CHECK(store.with(t.id, [](Coach& c) { return c.state().phase; }) == Phase::Assessed);
}

TEST_CASE("reports update the schedule display", "[session]") {
  TempDir dir;
  TraineeStore store(dir.path());
  const auto t = run(store, "Ana\n0\n0\n0\n2\ndone, rpe 3\n");
  CHECK(t.out.find("about 9 weeks") != std::string::npos);
  CHECK(t.out.find("day 2: walk 10 min [done]") != std::string::npos);
  CHECK(t.out.find("progress: 1/3 sessions") != std::string::npos);
  const auto s = store.with(t.id, [](Coach& c) { return c.state(); });
  CHECK(s.current_week->days[1].status == DayStatus::Done);
}

TEST_CASE("invalid input is asked again", "[session]") {
  TempDir dir;
  TraineeStore store(dir.path());
  const auto t = run(store, "Ana\nlots\n0\n-1 2\n0\n0\n9\nx\n1\nmaybe\ndone\n7\n4\nnope\n8\n2\n");
  CHECK(count(t.out, "Please enter two numbers") == 2);
  CHECK(count(t.out, "Enter a number between 1 and 6") == 2);
  CHECK(t.out.find("Please answer done, almost or nope") != std::string::npos);
  CHECK(t.out.find("Tired, but can still talk") != std::string::npos);
  CHECK(t.out.find("I didn't have time") != std::string::npos);
  const auto s = store.with(t.id, [](Coach& c) { return c.state(); });
  REQUIRE(s.week_reports.size() == 2);
  CHECK(s.week_reports[0].rpe == 4);
  CHECK(s.week_reports[1].reason == Reason::NoTime);
}

TEST_CASE("end of input saves and resumes", "[session]") {
  TempDir dir;
  std::string id;
  {
    TraineeStore store(dir.path());
    id = run(store, "Ana\n0\n0\n0\n2\ndone 3\n").id;
  }
  TraineeStore store(dir.path());
  const auto t = run(store, "done 3\ndone 2\nagree\n", id);
  CHECK(t.out.find("Week closed") != std::string::npos);
  CHECK(t.out.find("a step up") != std::string::npos);
  const auto s = store.with(id, [](Coach& c) { return c.state(); });
  CHECK(s.history.size() == 1);
  CHECK(s.current_week->week_index == 2);
  CHECK(s.history[0].summary.done_count == 3);
}

TEST_CASE("close and disagree", "[session]") {
  TempDir dir;
  TraineeStore store(dir.path());
  const auto t = run(store, "Ana\n0\n0\n0\n2\ndone 3\ndone 3\ndone 3\nno\nquit\n");
  const auto s = store.with(t.id, [](Coach& c) { return c.state(); });
  CHECK(s.history.size() == 1);
  CHECK(*s.committed_goal == s.history[0].goal);
  CHECK(s.model->offset == 1);
}

TEST_CASE("unknown trainee", "[session]") {
  TempDir dir;
  TraineeStore store(dir.path());
  std::istringstream in;
  std::ostringstream out;
  CHECK_THROWS_AS(run_session(in, out, store, "t0042"), CoachError);
}

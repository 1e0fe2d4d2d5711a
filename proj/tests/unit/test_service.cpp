#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <thread>

#include "coach/service.hpp"
#include "support/temp_dir.hpp"

using namespace coach;
using testing_support::TempDir;

namespace {

/// Service on a free port, served from a background thread.
class Running {
public:
  explicit Running(const std::filesystem::path& dir, Coach::Clock clock = utc_now)
      : service_(ServiceConfig{"127.0.0.1", 0, dir, {}}, std::move(clock)) {
    port_ = service_.bind();
    thread_ = std::thread([this] { service_.serve(); });
    service_.wait_until_ready();
  }
  ~Running() {
    service_.stop();
    thread_.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(5);
    return c;
  }

private:
  Service service_;
  int port_ = 0;
  std::thread thread_;
};

json post(httplib::Client& c, const std::string& path, const json& payload, int expect = 200) {
  auto r = c.Post(path, payload.dump(), "application/json");
  REQUIRE(r);
  INFO(path << " -> " << r->body);
  CHECK(r->status == expect);
  return json::parse(r->body);
}

json get(httplib::Client& c, const std::string& path, int expect = 200) {
  auto r = c.Get(path);
  REQUIRE(r);
  INFO(path << " -> " << r->body);
  CHECK(r->status == expect);
  return json::parse(r->body);
}

std::size_t log_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty();
  return n;
}

json report(int week, int day, const std::string& status, std::optional<int> rpe, std::optional<std::string> reason) {
  json j{{"week_index", week}, {"day_index", day}, {"status", status}};
  if (rpe) j["rpe"] = *rpe;
  if (reason) j["reason"] = *reason;
  return j;
}

}  // namespace

TEST_CASE("health", "[service]") {
  TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  CHECK(get(c, "/health").at("status") == "ok");
}

TEST_CASE("onboarding, reports and negotiation over HTTP", "[service]") {
  TempDir dir;
  Running s(dir.path());
  auto c = s.client();

  const std::string id = post(c, "/trainees", {{"name", "Ana"}}, 201).at("trainee_id");
  CHECK(id == "t0001");
  const std::string base = "/trainees/" + id;

  const auto choices = post(c, base + "/assessment", json::object());
  CHECK(choices.at("exercise") == "Moderate");
  CHECK(choices.at("frequency") == 3);
  CHECK(choices.at("goals").size() == 6);
  post(c, base + "/assessment", json::object(), 409);

  post(c, base + "/goal-choice", {{"exercise", "Brisk"}, {"duration_min", 10}, {"frequency", 3}}, 400);
  const auto chosen = post(c, base + "/goal-choice", {{"exercise", "Moderate"}, {"duration_min", 10}, {"frequency", 3}});
  CHECK(chosen.at("projected_weeks") == 9);
  CHECK(chosen.at("model").at("span") == 9);
  CHECK(chosen.at("week_schedule").at("week").at("days").size() == 7);

  auto sched = get(c, base + "/schedule?day=0");
  CHECK(sched.at("view").size() == 7);
  CHECK(sched.at("progress").at("done_count") == 0);
  CHECK(sched.at("progress").at("frequency") == 3);
  CHECK(sched.at("progress").at("goal_volume") == 90.0);
  get(c, base + "/schedule?day=9", 400);

  const auto after = post(c, base + "/reports", report(1, 1, "done", 3, std::nullopt));
  CHECK(after.at("progress").at("done_count") == 1);
  CHECK(after.at("progress").at("performed_volume") == 30.0);
  post(c, base + "/reports", report(1, 1, "done", 3, std::nullopt), 409);
  post(c, base + "/reports", report(1, 0, "done", 3, std::nullopt), 409);
  post(c, base + "/reports", report(1, 3, "done", std::nullopt, std::nullopt), 400);
  post(c, base + "/reports", report(1, 3, "done", 3, std::nullopt));
  post(c, base + "/reports", report(1, 5, "done", 3, std::nullopt));

  const auto proposal = post(c, base + "/close-week", json::object());
  CHECK(proposal.at("direction") == "increase");
  CHECK(proposal.at("week_index") == 2);
  CHECK(get(c, base + "/schedule?day=6").at("pending_proposal").at("direction") == "increase");

  post(c, base + "/proposal-response", {{"answer", "maybe"}}, 400);
  const auto next = post(c, base + "/proposal-response", {{"answer", "agree"}});
  CHECK(next.at("week_index") == 2);
  CHECK(next.at("goal") == proposal.at("proposed_goal"));
  post(c, base + "/proposal-response", {{"answer", "agree"}}, 409);

  const auto hist = get(c, base + "/history");
  CHECK(hist.at("weeks").size() == 1);
  CHECK(hist.at("trajectory").at(0).at("goal_volume") == 90.0);
  CHECK(hist.at("trajectory").at(0).at("performed_volume") == 90.0);
}

TEST_CASE("error mapping", "[service]") {
  TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  get(c, "/trainees/t9999/history", 404);
  const std::string id = post(c, "/trainees", json::object(), 201).at("trainee_id");
  get(c, "/trainees/" + id + "/schedule", 409);
  auto r = c.Post("/trainees/" + id + "/assessment", "{not json", "application/json");
  REQUIRE(r);
  CHECK(r->status == 400);
  CHECK(json::parse(r->body).at("code") == "invalid_argument");
  post(c, "/trainees/" + id + "/assessment", {{"low", {{"duration_min", -3}, {"frequency", 1}}}}, 400);
}

TEST_CASE("each mutation is on disk before the response", "[service]") {
  TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  const std::string id = post(c, "/trainees", json::object(), 201).at("trainee_id");
  const auto log = dir.path() / "events" / (id + ".jsonl");
  CHECK(log_lines(log) == 1);
  post(c, "/trainees/" + id + "/assessment", json::object());
  CHECK(log_lines(log) == 2);
  post(c, "/trainees/" + id + "/goal-choice", {{"exercise", "Moderate"}, {"duration_min", 5}, {"frequency", 3}});
  CHECK(log_lines(log) == 5);  // chosen, planned, scheduled
  post(c, "/trainees/" + id + "/reports", report(1, 1, "done", 3, std::nullopt));
  CHECK(log_lines(log) == 6);
  post(c, "/trainees/" + id + "/reports", report(1, 1, "done", 3, std::nullopt), 409);
  CHECK(log_lines(log) == 6);
}

TEST_CASE("restart restores every trainee from the logs", "[service]") {
  TempDir dir;
  json history, schedule;
  {
    Running s(dir.path());
    auto c = s.client();
    for (int i = 0; i < 3; ++i) post(c, "/trainees", {{"name", "n" + std::to_string(i)}}, 201);
    post(c, "/trainees/t0002/assessment", {{"moderate", {{"duration_min", 10}, {"frequency", 3}}}});
    post(c, "/trainees/t0002/goal-choice", {{"exercise", "Moderate"}, {"duration_min", 15}, {"frequency", 5}});
    post(c, "/trainees/t0002/reports", report(1, 0, "nope", std::nullopt, "no_time"));
    history = get(c, "/trainees/t0002/history");
    schedule = get(c, "/trainees/t0002/schedule?day=2");
  }
  Running again(dir.path());
  auto c = again.client();
  CHECK(get(c, "/trainees/t0002/history") == history);
  CHECK(get(c, "/trainees/t0002/schedule?day=2") == schedule);
  CHECK(post(c, "/trainees", json::object(), 201).at("trainee_id") == "t0004");
}

TEST_CASE("concurrent reports for one trainee are serialized", "[service]") {
  TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  const std::string id = post(c, "/trainees", json::object(), 201).at("trainee_id");
  post(c, "/trainees/" + id + "/assessment", json::object());
  post(c, "/trainees/" + id + "/goal-choice", {{"exercise", "Moderate"}, {"duration_min", 5}, {"frequency", 3}});
  std::vector<int> statuses(8);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < statuses.size(); ++i) {
    threads.emplace_back([&, i] {
      auto ci = s.client();
      auto r = ci.Post("/trainees/" + id + "/reports", report(1, 3, "done", 3, std::nullopt).dump(), "application/json");
      statuses[i] = r ? r->status : -1;
    });
  }
  for (auto& t : threads) t.join();
  CHECK(std::count(statuses.begin(), statuses.end(), 200) == 1);
  CHECK(std::count(statuses.begin(), statuses.end(), 409) == static_cast<long>(statuses.size()) - 1);
  CHECK(replay(EventLogFile(dir.path() / "events" / (id + ".jsonl")).read_all()).week_reports.size() == 1);
}

TEST_CASE("today follows the clock from the start of the week", "[service]") {
  TempDir dir;
  std::string now = "2026-03-02T09:00:00Z";
  Running s(dir.path(), [&] { return now; });
  auto c = s.client();
  const std::string id = post(c, "/trainees", json::object(), 201).at("trainee_id");
  post(c, "/trainees/" + id + "/assessment", json::object());
  post(c, "/trainees/" + id + "/goal-choice", {{"exercise", "Moderate"}, {"duration_min", 5}, {"frequency", 3}});
  CHECK(get(c, "/trainees/" + id + "/schedule").at("today_index") == 0);
  now = "2026-03-05T10:00:00Z";
  CHECK(get(c, "/trainees/" + id + "/schedule").at("today_index") == 3);
  CHECK(get(c, "/trainees/" + id + "/schedule").at("view").at(0).at("day_index") == 3);
  now = "2026-03-20T10:00:00Z";
  CHECK(get(c, "/trainees/" + id + "/schedule").at("today_index") == 6);
}

TEST_CASE("damaged log surfaces as a server error", "[service]") {
  TempDir dir;
  {
    TraineeStore store(dir.path());
    store.create("x");
  }
  std::ofstream(dir.path() / "events" / "t0001.jsonl", std::ios::app) << "{garbage\n";
  Running s(dir.path());
  auto c = s.client();
  const auto r = get(c, "/trainees/t0001/history", 500);
  CHECK(r.at("code") == "corrupt_log");
}

TEST_CASE("port in use fails at startup", "[service]") {
  TempDir dir;
  Service first(ServiceConfig{"127.0.0.1", 0, dir.path(), {}});
  const int port = first.bind();
  Service second(ServiceConfig{"127.0.0.1", port, dir.path(), {}});
  CHECK_THROWS_AS(second.bind(), CoachError);
}

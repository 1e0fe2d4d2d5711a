#pragma once

// File-backed trainee store and the HTTP API in front of it.
//
// Layout of the data directory:
//   index.json         {"trainees":[{"id":"t0001","name":"..."}, ...]}
//   events/<id>.jsonl  one event per line, see events.hpp

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "coach/engine.hpp"
#include "coach/events.hpp"
#include "coach/serialization.hpp"

namespace coach {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path data_dir = "coach-data";
  CoachConfig coach;
};

/// Owns every trainee's engine. Operations on one trainee run under that
/// trainee's mutex; different trainees proceed in parallel.
class TraineeStore {
public:
  explicit TraineeStore(std::filesystem::path data_dir, CoachConfig config = {}, Coach::Clock clock = utc_now)
      : dir_(std::move(data_dir)), config_(config), clock_(std::move(clock)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_ / "events", ec);
    require(!ec, Errc::io, "cannot create data directory " + dir_.string() + ": " + ec.message());
    load_index();
  }

  const std::filesystem::path& data_dir() const { return dir_; }

  std::string create(const std::string& display_name) {
    std::lock_guard lock(index_mu_);
    char buf[16];
    std::snprintf(buf, sizeof buf, "t%04zu", index_.size() + 1);
    std::string id = buf;
    auto entry = std::make_shared<Entry>();
    entry->coach.emplace(id, config_, clock_);
    entry->coach->set_sink(sink_for(id));
    entry->coach->create(display_name);
    index_.emplace_back(id, display_name);
    entries_[id] = entry;
    save_index();
    return id;
  }

  bool exists(const std::string& id) const {
    std::lock_guard lock(index_mu_);
    return std::any_of(index_.begin(), index_.end(), [&](const auto& e) { return e.first == id; });
  }

  std::vector<std::pair<std::string, std::string>> list() const {
    std::lock_guard lock(index_mu_);
    return index_;
  }

  /// Runs `fn(Coach&)` with the trainee's engine loaded and locked.
  template <class Fn>
  decltype(auto) with(const std::string& id, Fn&& fn) {
    auto entry = find(id);
    std::lock_guard lock(entry->mu);
    if (!entry->coach) {
      auto events = EventLogFile(log_path(id)).read_all();
      entry->coach.emplace(events.empty() ? Coach(id, config_, clock_)
                                          : Coach::restore(std::move(events), config_, clock_));
      entry->coach->set_sink(sink_for(id));
    }
    return fn(*entry->coach);
  }

  std::filesystem::path log_path(const std::string& id) const { return dir_ / "events" / (id + ".jsonl"); }

private:
  struct Entry {
    std::mutex mu;
    std::optional<Coach> coach;
  };

  std::shared_ptr<Entry> find(const std::string& id) {
    std::lock_guard lock(index_mu_);
    const bool known = std::any_of(index_.begin(), index_.end(), [&](const auto& e) { return e.first == id; });
    require(known, Errc::not_found, "no trainee '" + id + "'");
    auto& slot = entries_[id];
    if (!slot) slot = std::make_shared<Entry>();
    return slot;
  }

  Coach::Sink sink_for(const std::string& id) const {
    return [log = EventLogFile(log_path(id))](std::span<const Event> batch) { log.append(batch); };
  }

  void load_index() {
    std::ifstream in(dir_ / "index.json");
    if (!in) return;
    try {
      const json j = json::parse(in);
      for (const auto& t : j.at("trainees")) index_.emplace_back(t.at("id").get<std::string>(), t.value("name", ""));
    } catch (const json::exception& e) {
      fail(Errc::corrupt_log, std::string("unreadable index.json: ") + e.what());
    }
  }

  void save_index() const {
    json arr = json::array();
    for (const auto& [id, name] : index_) arr.push_back({{"id", id}, {"name", name}});
    const auto tmp = dir_ / "index.json.tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << json{{"trainees", arr}}.dump(2) << '\n';
      out.flush();
      require(static_cast<bool>(out), Errc::io, "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, dir_ / "index.json");
  }

  std::filesystem::path dir_;
  CoachConfig config_;
  Coach::Clock clock_;
  mutable std::mutex index_mu_;
  std::vector<std::pair<std::string, std::string>> index_;
  std::map<std::string, std::shared_ptr<Entry>> entries_;
};

namespace api {

inline int http_status(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return 400;
    case Errc::not_found: return 404;
    case Errc::invalid_state:
    case Errc::conflict: return 409;
    case Errc::corrupt_log:
    case Errc::io: return 500;
  }
  return 500;
}

inline std::string_view code_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::not_found: return "not_found";
    case Errc::invalid_state: return "invalid_state";
    case Errc::conflict: return "conflict";
    case Errc::corrupt_log: return "corrupt_log";
    case Errc::io: return "io";
  }
  return "?";
}

/// Day of the current week according to the wall clock, 0..6.
inline int today_index(const CoachState& s, const std::string& now) {
  if (s.week_started_at.empty()) return 0;
  const auto elapsed = parse_utc(now) - parse_utc(s.week_started_at);
  const auto days = std::chrono::duration_cast<std::chrono::hours>(elapsed).count() / 24;
  return static_cast<int>(std::clamp<long long>(days, 0, kDaysPerWeek - 1));
}

inline json progress_json(const CoachState& s) {
  const auto& week = *s.current_week;
  const int done = week.done_count();
  return {{"done_count", done},
          {"frequency", week.goal.frequency},
          {"fraction", static_cast<double>(done) / week.goal.frequency},
          {"goal_volume", volume(week.goal)},
          {"performed_volume", done * met(week.goal.exercise) * week.goal.duration_min}};
}

inline json schedule_json(const Coach& c, int today) {
  const auto& s = c.state();
  json view = json::array();
  for (const auto& d : c.rolling_view(today)) view.push_back(d);
  return {{"trainee_id", s.trainee_id},
          {"phase", to_string(s.phase)},
          {"today_index", today},
          {"week_index", s.current_week->week_index},
          {"week_started_at", s.week_started_at},
          {"goal", *s.committed_goal},
          {"week", *s.current_week},
          {"view", view},
          {"progress", progress_json(s)},
          {"week_closed", s.week_closed},
          {"pending_proposal", s.pending_proposal ? json(*s.pending_proposal) : json(nullptr)}};
}

inline json history_json(const CoachState& s) {
  json trajectory = json::array();
  for (const auto& r : s.history)
    trajectory.push_back({{"week", r.week_index},
                          {"goal_volume", volume(r.goal)},
                          {"performed_volume", r.performed_volume},
                          {"mean_rpe", r.summary.mean_rpe ? json(*r.summary.mean_rpe) : json(nullptr)},
                          {"revision", to_string(r.revision)}});
  return {{"trainee_id", s.trainee_id},
          {"display_name", s.display_name},
          {"phase", to_string(s.phase)},
          {"baseline", s.baseline},
          {"model", s.model ? json(*s.model) : json(nullptr)},
          {"weeks", s.history},
          {"trajectory", trajectory}};
}

}  // namespace api

class Service {
public:
  explicit Service(ServiceConfig config, Coach::Clock clock = utc_now)
      : config_(std::move(config)), clock_(clock), store_(config_.data_dir, config_.coach, clock) {
    // SO_REUSEADDR only: the library default (SO_REUSEPORT) lets a second server share a busy port.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    routes();
  }

  TraineeStore& store() { return store_; }

  /// Binds the socket; returns the port (useful with port 0).
  int bind() {
    const int port = config_.port == 0 ? server_.bind_to_any_port(config_.host)
                                       : (server_.bind_to_port(config_.host, config_.port) ? config_.port : -1);
    require(port > 0, Errc::io, "cannot listen on " + config_.host + ":" + std::to_string(config_.port));
    return port;
  }

  /// Serves until stop() is called.
  void serve() { server_.listen_after_bind(); }

  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

private:
  using Req = httplib::Request;
  using Res = httplib::Response;

  static void send(Res& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static json body_of(const Req& req) {
    if (req.body.empty()) return json::object();
    try {
      return json::parse(req.body);
    } catch (const json::exception& e) {
      fail(Errc::invalid_argument, std::string("request body is not JSON: ") + e.what());
    }
  }

  template <class Fn>
  static httplib::Server::Handler guarded(Fn fn) {
    return [fn](const Req& req, Res& res) {
      try {
        fn(req, res);
      } catch (const CoachError& e) {
        send(res, api::http_status(e.code()), {{"error", e.what()}, {"code", api::code_name(e.code())}});
      } catch (const json::exception& e) {
        send(res, 400, {{"error", e.what()}, {"code", "invalid_argument"}});
      }
    };
  }

  int today_for(const Req& req, const CoachState& s) const {
    if (req.has_param("day")) {
      int day = -1;
      try {
        day = std::stoi(req.get_param_value("day"));
      } catch (const std::exception&) {
      }
      require(day >= 0 && day < kDaysPerWeek, Errc::invalid_argument, "day must be in 0..6");
      return day;
    }
    return api::today_index(s, clock_());
  }

  void routes() {
    server_.Get("/health", guarded([](const Req&, Res& res) { send(res, 200, {{"status", "ok"}}); }));

    server_.Post("/trainees", guarded([this](const Req& req, Res& res) {
                   const json body = body_of(req);
                   const std::string id = store_.create(body.value("name", std::string{}));
                   send(res, 201, {{"trainee_id", id}});
                 }));

    server_.Post(R"(/trainees/([^/]+)/assessment)", guarded([this](const Req& req, Res& res) {
                   const auto report = body_of(req).get<AssessmentReport>();
                   store_.with(req.matches[1], [&](Coach& c) {
                     const auto choices = c.handle_assessment(report);
                     json out = choices;
                     out["baseline"] = c.state().baseline;
                     send(res, 200, out);
                   });
                 }));

    server_.Post(R"(/trainees/([^/]+)/goal-choice)", guarded([this](const Req& req, Res& res) {
                   const auto goal = body_of(req).get<WeeklyGoal>();
                   store_.with(req.matches[1], [&](Coach& c) {
                     c.handle_goal_choice(goal);
                     const auto& s = c.state();
                     send(res, 200,
                          {{"model", *s.model},
                           {"projected_weeks", s.model->span},
                           {"goal", *s.committed_goal},
                           {"week_schedule", api::schedule_json(c, 0)}});
                   });
                 }));

    server_.Get(R"(/trainees/([^/]+)/schedule)", guarded([this](const Req& req, Res& res) {
                  store_.with(req.matches[1], [&](Coach& c) {
                    require(c.state().coaching(), Errc::invalid_state, "no active program yet");
                    send(res, 200, api::schedule_json(c, today_for(req, c.state())));
                  });
                }));

    server_.Post(R"(/trainees/([^/]+)/reports)", guarded([this](const Req& req, Res& res) {
                   const auto report = body_of(req).get<DailyReport>();
                   store_.with(req.matches[1], [&](Coach& c) {
                     c.handle_daily_report(report);
                     send(res, 200, api::schedule_json(c, report.day_index));
                   });
                 }));

    server_.Post(R"(/trainees/([^/]+)/close-week)", guarded([this](const Req& req, Res& res) {
                   store_.with(req.matches[1], [&](Coach& c) {
                     const Proposal p = c.close_week();
                     json out = p;
                     out["auto_committed"] = p.direction == Direction::Stay;
                     send(res, 200, out);
                   });
                 }));

    server_.Post(R"(/trainees/([^/]+)/proposal-response)", guarded([this](const Req& req, Res& res) {
                   const Answer answer = parse_answer(detail::get<std::string>(body_of(req), "answer"));
                   store_.with(req.matches[1], [&](Coach& c) {
                     c.handle_proposal_response(answer);
                     send(res, 200, api::schedule_json(c, 0));
                   });
                 }));

    server_.Get(R"(/trainees/([^/]+)/history)", guarded([this](const Req& req, Res& res) {
                  store_.with(req.matches[1], [&](Coach& c) { send(res, 200, api::history_json(c.state())); });
                }));
  }

  ServiceConfig config_;
  Coach::Clock clock_;
  TraineeStore store_;
  httplib::Server server_;
};

}  // namespace coach

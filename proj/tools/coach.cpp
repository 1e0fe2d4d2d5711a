// coach: command-line front end for the coaching engine.
//
//   coach catalog [--goals]
//   coach sim --profile A|B|C|FILE [--weeks N] [--seed S] [--out PATH]
//   coach serve [--host H] [--port P] [--data-dir DIR] [--delta D] [--target T]
//   coach session [--data-dir DIR] [--trainee ID]
//   coach schedule --trainee ID [--day N] [--json] [--data-dir DIR]
//   coach history --trainee ID [--data-dir DIR]

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "coach/service.hpp"
#include "coach/session.hpp"
#include "coach/simulator.hpp"

namespace {

using namespace coach;

int exit_code(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::not_found: return 2;
    default: return 1;
  }
}

std::string default_data_dir() {
  if (const char* env = std::getenv("COACH_DATA_DIR"); env && *env) return env;
  return "coach-data";
}

void print_schedule(const json& doc) {
  const auto& p = doc.at("progress");
  std::cout << "Trainee " << doc.at("trainee_id").get<std::string>() << ", week " << doc.at("week_index")
            << ": " << p.at("done_count") << "/" << p.at("frequency") << " sessions done\n";
  for (const auto& d : doc.at("view")) {
    std::cout << "  week " << d.at("week_index") << " day " << d.at("day_index").get<int>() + 1 << ": ";
    if (!d.at("session").get<bool>()) {
      std::cout << "rest\n";
      continue;
    }
    const auto& g = d.at("goal");
    std::cout << g.at("exercise").get<std::string>() << " walk " << g.at("duration_min") << " min ["
              << d.at("status").get<std::string>() << "]\n";
  }
}

TraineeProfile load_profile(const std::string& arg) {
  if (arg == "A" || arg == "B" || arg == "C") return builtin_profile(arg);
  std::ifstream in(arg);
  require(static_cast<bool>(in), Errc::not_found, "unknown profile '" + arg + "' (expected A, B, C or a profile file)");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(Errc::invalid_argument, "profile file " + arg + " is not JSON: " + e.what());
  }
  return profile_from_json(doc);
}

void print_catalog(bool goals) {
  std::cout << std::left << std::setw(10) << "exercise" << std::setw(6) << "met" << "description\n";
  for (const auto& e : kExercises)
    std::cout << std::setw(10) << e.name << std::setw(6) << e.met() << e.description << '\n';
  std::cout << "\nweekly target: " << kAhaTarget << " MET-min\n";
  if (!goals) return;
  std::cout << "\nexercise,duration,frequency,volume\n";
  for (const auto& g : goal_space())
    std::cout << to_string(g.exercise) << ',' << g.duration_min << ',' << g.frequency << ','
              << format_number(volume(g)) << '\n';
}

Service* g_service = nullptr;

extern "C" void on_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive walking coach"};
  app.require_subcommand(1);

  bool list_goals = false;
  auto* catalog = app.add_subcommand("catalog", "Print the exercise catalog");
  catalog->add_flag("--goals", list_goals, "Also list every weekly goal with its volume");

  std::string profile;
  int weeks = 8;
  std::uint64_t seed = 1;
  std::string out_path;
  auto* sim = app.add_subcommand("sim", "Simulate a trainee and print the weekly trajectory");
  sim->add_option("--profile", profile, "A, B, C or a profile JSON file")->required();
  sim->add_option("--weeks", weeks, "Weeks to simulate")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "Seed for skipped-session placement");
  sim->add_option("--out", out_path, "CSV output path (default: standard output)");

  std::string data_dir;
  ServiceConfig serve_cfg;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", serve_cfg.host, "Listen address");
  serve->add_option("--port", serve_cfg.port, "Listen port, 0 for any free port")->check(CLI::Range(0, 65535));
  serve->add_option("--data-dir", data_dir, "Event log directory (env COACH_DATA_DIR)");
  serve->add_option("--delta", serve_cfg.coach.revision_delta, "Weeks per model revision")->check(CLI::PositiveNumber);
  serve->add_option("--target", serve_cfg.coach.target, "Weekly target in MET-min")->check(CLI::PositiveNumber);

  std::string trainee;
  auto* session = app.add_subcommand("session", "Interactive coaching in the terminal");
  session->add_option("--data-dir", data_dir, "Event log directory (env COACH_DATA_DIR)");
  session->add_option("--trainee", trainee, "Resume an existing trainee");

  std::optional<int> day;
  bool as_json = false;
  auto* schedule = app.add_subcommand("schedule", "Print the next seven days for a trainee");
  schedule->add_option("--data-dir", data_dir, "Event log directory (env COACH_DATA_DIR)");
  schedule->add_option("--trainee", trainee, "Trainee id")->required();
  schedule->add_option("--day", day, "Day of the current week to start from, 0..6 (default: today)")
      ->check(CLI::Range(0, kDaysPerWeek - 1));
  schedule->add_flag("--json", as_json, "Print the service's JSON document instead");

  auto* history = app.add_subcommand("history", "Print a trainee's history rebuilt from the event log");
  history->add_option("--data-dir", data_dir, "Event log directory (env COACH_DATA_DIR)");
  history->add_option("--trainee", trainee, "Trainee id")->required();

  CLI11_PARSE(app, argc, argv);
  if (data_dir.empty()) data_dir = default_data_dir();

  try {
    if (*catalog) {
      print_catalog(list_goals);
    } else if (*sim) {
      const auto trajectory = simulate(load_profile(profile), weeks, seed);
      if (out_path.empty()) {
        write_csv(std::cout, trajectory);
      } else {
        std::ofstream out(out_path, std::ios::trunc);
        require(static_cast<bool>(out), Errc::io, "cannot write " + out_path);
        write_csv(out, trajectory);
        out.flush();
        require(static_cast<bool>(out), Errc::io, "cannot write " + out_path);
      }
    } else if (*serve) {
      serve_cfg.data_dir = data_dir;
      Service service(serve_cfg);
      const int port = service.bind();
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on " << serve_cfg.host << ':' << port << std::endl;
      service.serve();
      g_service = nullptr;
    } else if (*session) {
      TraineeStore store(data_dir);
      run_session(std::cin, std::cout, store, trainee);
    } else if (*schedule) {
      TraineeStore store(data_dir);
      const auto doc = store.with(trainee, [&](Coach& c) {
        require(c.state().coaching(), Errc::invalid_state, "trainee " + trainee + " has no weekly goal yet");
        return api::schedule_json(c, day ? *day : api::today_index(c.state(), utc_now()));
      });
      if (as_json) std::cout << doc.dump(2) << '\n';
      else print_schedule(doc);
    } else if (*history) {
      TraineeStore store(data_dir);
      std::cout << store.with(trainee, [](Coach& c) { return api::history_json(c.state()); }).dump(2) << '\n';
    }
  } catch (const CoachError& e) {
    std::cerr << "coach: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "coach: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#pragma once

#include <stdexcept>
#include <string>

namespace coach {

enum class Errc {
  invalid_argument,  // malformed input value
  invalid_state,     // operation not allowed in the current phase
  not_found,
  conflict,          // duplicate report, stale proposal, ...
  corrupt_log,       // replay found a gap, duplicate or unknown record
  io,
};

class CoachError : public std::runtime_error {
public:
  CoachError(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw CoachError(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace coach

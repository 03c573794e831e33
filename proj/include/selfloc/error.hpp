#pragma once
// Shared error taxonomy. Every failure in the library is thrown as an Error
// carrying a kind tag; the CLI maps kinds onto process exit codes.

#include <stdexcept>
#include <string>

namespace selfloc {

enum class Errc {
  // scenario text / structure
  syntax,              // malformed scenario text
  empty_scenario,      // no worlds declared
  duplicate_id,        // world/time/event id or (world, time) pair reused
  dangling_reference,  // center or event names an undeclared world/time
  ragged_signature,    // observation signatures disagree in length
  prior_range,         // a world prior outside [0, 1]
  prior_sum,           // world priors do not sum to 1
  bad_identifier,      // empty id, or id containing whitespace/reserved chars
  io,                  // scenario file unreadable
  // queries
  stage_out_of_range,
  unrealizable_evidence,  // no center carries the label, or the class has prior mass 0
  unknown_event,
  unknown_world,
  unknown_builtin,
  // dutch book machinery
  invalid_schedule,  // schedule references unknown points or events
  numeric_overflow,  // rational magnitude exceeded the configured bit bound
  internal,          // invariant failure: a bug, not a user error
};

struct Error : std::runtime_error {
  Errc code;
  int line = 0;  // 1-based; 0 when the error is not tied to scenario text
  int col = 0;

  Error(Errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
  Error(Errc c, const std::string& msg, int line_, int col_)
      : std::runtime_error(msg), code(c), line(line_), col(col_) {}
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

// Exit-code classes used by the CLI:
//   1 parse/validation error, 2 unrealizable query or unknown id, 3 internal.
inline int exit_code(Errc c) {
  switch (c) {
    case Errc::syntax:
    case Errc::empty_scenario:
    case Errc::duplicate_id:
    case Errc::dangling_reference:
    case Errc::ragged_signature:
    case Errc::prior_range:
    case Errc::prior_sum:
    case Errc::bad_identifier:
    case Errc::io:
      return 1;
    case Errc::stage_out_of_range:
    case Errc::unrealizable_evidence:
    case Errc::unknown_event:
    case Errc::unknown_world:
    case Errc::unknown_builtin:
      return 2;
    case Errc::invalid_schedule:
    case Errc::numeric_overflow:
    case Errc::internal:
      return 3;
  }
  return 3;
}

}  // namespace selfloc

#pragma once

// Line-oriented counterexample traces:
//
//   trace of two_sem: 6 steps
//   initial: sem[1].up sem[2].up ... | A[1].proc[1].start ...
//   step 1: A[1] | A[1].proc[1].start | proc[1]: ini -> first | emits A[1].sem[1].wait
//   ...
//   final servers: sem[1].down sem[2].down ...
//   pending: A[1].sem[2].wait A[2].sem[1].wait
//   terminated: -
//   blocked: agents A[1] A[2]; servers sem[2] sem[1]
//
// Steps are parseable back into actions, so a trace can be replayed.

#include <stdexcept>
#include <string>
#include <vector>

#include "rybu/imds/model.hpp"
#include "rybu/lts/deadlock.hpp"

namespace rybu::report {

/// One action of a trace split into what it does to messages and states.
struct TraceEvent {
  std::string agent;
  std::string server;
  std::string service;       // consumed
  std::string old_value;
  std::string new_value;
  bool terminates = false;
  std::string to_server;     // emitted message, unless terminating
  std::string to_service;
};

struct TraceDocument {
  std::string title;
  imds::Configuration initial;
  imds::Configuration final;
  std::vector<TraceEvent> events;
};

TraceDocument make_trace(const imds::SystemModel& model, const std::vector<imds::ActionId>& actions,
                         std::string title);

/// Header (2 lines), one line per step, footer (4 lines).
std::string render_trace(const imds::SystemModel& model, const TraceDocument& doc);

inline constexpr std::size_t kTraceHeaderLines = 2;
inline constexpr std::size_t kTraceFooterLines = 4;

class TraceParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Recovers the actions of a rendered trace by matching each step line
/// against the model, starting from its initial configuration.
std::vector<imds::ActionId> parse_trace(const imds::SystemModel& model, const std::string& text);

/// Re-applies the parsed steps; returns the configuration reached.
imds::Configuration replay_trace(const imds::SystemModel& model, const std::string& text);

}  // namespace rybu::report

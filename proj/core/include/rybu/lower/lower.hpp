#pragma once

// Conversion of a typechecked Rybu program into IMDS: every server instance
// becomes an IMDS server whose states are the Cartesian product of its
// variables; every thread becomes an IMDS server with program-counter
// states plus an agent that carries its calls and responses.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rybu/dedan/ast.hpp"
#include "rybu/imds/model.hpp"
#include "rybu/lang/ast.hpp"
#include "rybu/lang/typecheck.hpp"
#include "rybu/lower/value.hpp"

namespace rybu::lower {

class LowerError : public std::runtime_error {
 public:
  explicit LowerError(std::vector<lang::Diagnostic> diagnostics);
  const std::vector<lang::Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<lang::Diagnostic> diagnostics_;
};

struct LowerOptions {
  /// Start every thread server in `ini` with its agent holding a `start`
  /// message to itself, as hand-written Dedan processes usually do.
  bool bootstrap = false;
  /// Refuse servers whose state space exceeds this many states.
  std::uint64_t max_states_per_server = 1'000'000;
};

std::string thread_server_name(std::string_view thread);
std::string thread_agent_name(std::string_view thread);

struct LabeledState {
  StateAssignment assignment;
  std::string label;
};

/// Every combination of variable values, first variable slowest, with its
/// label. Throws LowerError when two combinations render to the same label.
std::vector<LabeledState> enumerate_states(const lang::ServerInfo& server, const LowerOptions& options = {});

/// An IMDS action with names instead of ids.
struct LoweredAction {
  std::string agent;
  std::string server;
  std::string service;
  std::string in_state;
  std::optional<std::string> out_server;  // absent: the agent terminates
  std::optional<std::string> out_service;
  std::string out_state;

  friend bool operator==(const LoweredAction&, const LoweredAction&) = default;
};

/// `{A.s.svc, s.v} -> {A.t.r, s.v'}` / `{A.s.svc, s.v} -> {s.v'}`
std::string to_string(const LoweredAction& a);

/// A thread and the services it calls on one server instance.
struct Caller {
  std::string thread;
  std::vector<std::string> services;
};

/// Callers of each instance, in thread declaration order.
std::map<std::string, std::vector<Caller>> collect_callers(const lang::RybuProgram& program);

/// Actions of one server instance: for each Rybu action, each calling
/// thread and each state satisfying the predicate. Warnings (unsatisfiable
/// predicates, services nobody calls) are appended to `warnings`.
std::vector<LoweredAction> lower_server(const lang::ProgramInfo& info, const lang::InstanceDecl& instance,
                                        const std::vector<Caller>& callers,
                                        std::vector<lang::Diagnostic>& warnings, const LowerOptions& options = {});

struct LoweredThread {
  std::string server;  // S_<thread>
  std::string agent;   // A_<thread>
  std::vector<std::string> states;
  std::vector<std::string> services;
  std::vector<LoweredAction> actions;
  std::string initial_state;
  std::string initial_server;   // target of the first message
  std::string initial_service;
  std::vector<std::string> used_instances;  // in order of first call
};

/// Program-counter states `s<k>_<instance>_<service>`, k numbering calls and
/// match subjects in pre-order; `stop` once the body runs to its end.
LoweredThread lower_thread(const lang::ProgramInfo& info, const lang::RybuProgram& program,
                           const lang::ThreadDecl& thread, const LowerOptions& options = {});

struct LoweredProgram {
  imds::SystemModel model;
  dedan::DedanUnit dedan;
  std::vector<lang::Diagnostic> warnings;
  /// Server instance -> state label -> (variable, displayed value).
  std::map<std::string, std::map<std::string, std::vector<std::pair<std::string, std::string>>>> decomposition;
};

/// Typechecks and lowers a whole program. Throws LowerError carrying every
/// error diagnostic.
LoweredProgram lower_program(const lang::RybuProgram& program, const LowerOptions& options = {},
                             std::string system_name = "rybu");

}  // namespace rybu::lower

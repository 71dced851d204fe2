#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rybu/lts/lts.hpp"
#include "rybu/service/session.hpp"

namespace rybu::service {

struct SimulatorOptions {
  std::uint64_t seed = 1;
  std::size_t walk_limit = 1000;
  lts::ExplorationLimits limits;
};

/// Terminal simulation loop. Commands:
///   <n>            fire enabled action number n
///   u              undo
///   r              reset
///   w [steps]      random walk (seeded) until nothing is enabled
///   d              jump to the first deadlock found by verification
///   l <file>       load a trace; then `n` replays its next step
///   n              next step of the loaded trace
///   h              help
///   q              quit
class Simulator {
 public:
  Simulator(std::shared_ptr<const imds::SystemModel> model, std::istream& in, std::ostream& out,
            SimulatorOptions options = {});

  /// Runs until `q` or end of input.
  void run();
  /// Executes one command line; false once the user quits.
  bool execute(const std::string& line);

  const Session& session() const { return session_; }

 private:
  void show();
  void random_walk(std::size_t steps);
  void to_deadlock();
  void load(const std::string& path);
  void replay_next();

  std::shared_ptr<const imds::SystemModel> model_;
  std::istream& in_;
  std::ostream& out_;
  SimulatorOptions options_;
  Session session_;
  std::mt19937_64 rng_;
  std::vector<imds::ActionId> replay_;
  std::size_t replay_pos_ = 0;
};

}  // namespace rybu::service

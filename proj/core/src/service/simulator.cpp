#include "rybu/service/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include "rybu/lts/deadlock.hpp"
#include "rybu/report/trace.hpp"
#include "rybu/service/loader.hpp"

namespace rybu::service {

namespace {

constexpr const char* kHelp =
    "commands: <n> fire action n | u undo | r reset | w [steps] random walk | d go to first deadlock |\n"
    "          l <file> load trace | n next trace step | h help | q quit\n";

}  // namespace

Simulator::Simulator(std::shared_ptr<const imds::SystemModel> model, std::istream& in, std::ostream& out,
                     SimulatorOptions options)
    : model_(std::move(model)), in_(in), out_(out), options_(options), session_(model_), rng_(options.seed) {}

void Simulator::run() {
  show();
  std::string line;
  while (out_ << "> " << std::flush, std::getline(in_, line)) {
    if (!execute(line)) return;
  }
  out_ << "\n";
}

bool Simulator::execute(const std::string& line) {
  std::istringstream words(line);
  std::string cmd;
  if (!(words >> cmd)) {
    show();
    return true;
  }
  if (cmd == "q" || cmd == "quit") return false;
  if (cmd == "h" || cmd == "help") {
    out_ << kHelp;
  } else if (cmd == "u") {
    if (!session_.undo()) out_ << "nothing to undo\n";
    show();
  } else if (cmd == "r") {
    session_.reset();
    replay_pos_ = 0;
    show();
  } else if (cmd == "w") {
    std::size_t steps = options_.walk_limit;
    words >> steps;
    random_walk(steps);
  } else if (cmd == "d") {
    to_deadlock();
  } else if (cmd == "l") {
    std::string path;
    std::getline(words >> std::ws, path);
    if (path.empty())
      out_ << "usage: l <trace file>\n";
    else
      load(path);
  } else if (cmd == "n") {
    replay_next();
  } else if (std::all_of(cmd.begin(), cmd.end(), [](unsigned char c) { return std::isdigit(c); })) {
    std::size_t n = 0;
    try {
      n = std::stoul(cmd);
    } catch (const std::exception&) {
    }
    if (n < 1 || n > session_.enabled().size()) {
      out_ << "no action " << cmd << "; choose 1.." << session_.enabled().size() << "\n";
    } else {
      session_.step(session_.enabled()[n - 1]);
      show();
    }
  } else {
    out_ << "unknown command '" << cmd << "'\n" << kHelp;
  }
  return true;
}

void Simulator::show() {
  const imds::SystemModel& m = *model_;
  const imds::Configuration& c = session_.current();
  out_ << "step " << session_.history().size() << ": " << imds::to_string(m, c) << "\n";
  if (session_.enabled().empty()) {
    if (c.all_terminated()) {
      out_ << "all agents terminated\n";
    } else {
      out_ << "DEADLOCK: no action enabled; blocked:";
      for (imds::AgentId a : c.pending_agents()) out_ << " " << m.name(a);
      out_ << "\n";
    }
    return;
  }
  for (std::size_t i = 0; i < session_.enabled().size(); ++i)
    out_ << "  " << i + 1 << ") " << imds::to_string(m, m.action(session_.enabled()[i])) << "\n";
}

void Simulator::random_walk(std::size_t steps) {
  std::size_t taken = 0;
  while (taken < steps && !session_.enabled().empty()) {
    const auto& enabled = session_.enabled();
    session_.step(enabled[rng_() % enabled.size()]);
    ++taken;
  }
  out_ << "walked " << taken << (taken == 1 ? " step\n" : " steps\n");
  show();
}

void Simulator::to_deadlock() {
  const lts::Lts graph = lts::build_lts(*model_, options_.limits);
  const lts::DeadlockReport report = lts::analyze(graph);
  const lts::Witness* w = nullptr;
  if (!report.total_deadlocks.empty())
    w = &report.total_deadlocks.front().witness;
  else if (!report.partial_deadlocks.empty())
    w = &report.partial_deadlocks.front().witness;
  if (!w) {
    out_ << "no deadlock found (" << lts::to_string(report.verdict) << ")\n";
    return;
  }
  session_.reset();
  for (imds::ActionId a : w->actions) session_.step(a);
  show();
}

void Simulator::load(const std::string& path) {
  try {
    replay_ = report::parse_trace(*model_, read_file(path));
  } catch (const std::exception& e) {
    out_ << "cannot load trace: " << e.what() << "\n";
    return;
  }
  replay_pos_ = 0;
  session_.reset();
  out_ << "loaded " << replay_.size() << " steps; press n to replay\n";
  show();
}

void Simulator::replay_next() {
  if (replay_pos_ >= replay_.size()) {
    out_ << "no more trace steps\n";
    return;
  }
  try {
    session_.step(replay_[replay_pos_]);
  } catch (const lts::StepRejected&) {
    out_ << "trace step " << replay_pos_ + 1 << " is not enabled here; reset to replay\n";
    return;
  }
  ++replay_pos_;
  show();
}

}  // namespace rybu::service

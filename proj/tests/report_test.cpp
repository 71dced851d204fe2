#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "dot_reader.hpp"
#include "fixtures.hpp"
#include "rybu/imds/semantics.hpp"
#include "rybu/lts/deadlock.hpp"
#include "rybu/report/dot.hpp"
#include "rybu/report/trace.hpp"

using namespace rybu;
using namespace rybu::report;

namespace {

imds::ActionId action_named(const imds::SystemModel& m, const std::string& text) {
  for (std::size_t i = 0; i < m.action_count(); ++i)
    if (imds::to_string(m, m.actions()[i]) == text) return imds::ActionId(i);
  throw std::runtime_error("no action " + text);
}

std::vector<imds::ActionId> crosswise(const imds::SystemModel& m) {
  return {
      action_named(m, "{A[1].proc[1].start, proc[1].ini} -> {A[1].sem[1].wait, proc[1].first}"),
      action_named(m, "{A[2].proc[2].start, proc[2].ini} -> {A[2].sem[2].wait, proc[2].first}"),
      action_named(m, "{A[1].sem[1].wait, sem[1].up} -> {A[1].proc[1].ok_wait, sem[1].down}"),
      action_named(m, "{A[2].sem[2].wait, sem[2].up} -> {A[2].proc[2].ok_wait, sem[2].down}"),
      action_named(m, "{A[1].proc[1].ok_wait, proc[1].first} -> {A[1].sem[2].wait, proc[1].sec}"),
      action_named(m, "{A[2].proc[2].ok_wait, proc[2].first} -> {A[2].sem[1].wait, proc[2].sec}"),
  };
}

const char* kCrosswiseTrace =
    "trace of two_sem: 6 steps\n"
    "initial: sem[1].up sem[2].up proc[1].ini proc[2].ini | A[1].proc[1].start A[2].proc[2].start\n"
    "step 1: A[1] | A[1].proc[1].start | proc[1]: ini -> first | emits A[1].sem[1].wait\n"
    "step 2: A[2] | A[2].proc[2].start | proc[2]: ini -> first | emits A[2].sem[2].wait\n"
    "step 3: A[1] | A[1].sem[1].wait | sem[1]: up -> down | emits A[1].proc[1].ok_wait\n"
    "step 4: A[2] | A[2].sem[2].wait | sem[2]: up -> down | emits A[2].proc[2].ok_wait\n"
    "step 5: A[1] | A[1].proc[1].ok_wait | proc[1]: first -> sec | emits A[1].sem[2].wait\n"
    "step 6: A[2] | A[2].proc[2].ok_wait | proc[2]: first -> sec | emits A[2].sem[1].wait\n"
    "final servers: sem[1].down sem[2].down proc[1].sec proc[2].sec\n"
    "pending: A[1].sem[2].wait A[2].sem[1].wait\n"
    "terminated: -\n"
    "blocked: agents A[1] A[2]; servers sem[2] sem[1]\n";

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(Trace, GoldenCrosswiseDeadlock) {
  auto loaded = fixtures::load("two_sem.dedan");
  const auto& m = *loaded.model;
  TraceDocument doc = make_trace(m, crosswise(m), "two_sem");
  EXPECT_EQ(render_trace(m, doc), kCrosswiseTrace);
}

TEST(Trace, EventsCarryOneStateChangeAndAtMostOneMessage) {
  auto loaded = fixtures::load("two_sem.dedan");
  const auto& m = *loaded.model;
  auto actions = crosswise(m);
  TraceDocument doc = make_trace(m, actions, "two_sem");
  ASSERT_EQ(doc.events.size(), actions.size());
  for (std::size_t k = 0; k < actions.size(); ++k) {
    const auto& a = m.action(actions[k]);
    EXPECT_EQ(doc.events[k].server, m.name(a.server()));
    EXPECT_EQ(doc.events[k].terminates, a.terminates());
    EXPECT_EQ(doc.events[k].to_server.empty(), a.terminates());
  }
}

TEST(Trace, TerminatingStep) {
  auto loaded = fixtures::load("two_sem_ordered.dedan");
  const auto& m = *loaded.model;
  lts::Lts lts = lts::build_lts(m);
  std::optional<lts::NodeId> done;
  for (lts::NodeId n = 0; n < lts.node_count(); ++n)
    if (lts.node(n).all_terminated()) done = n;
  ASSERT_TRUE(done.has_value());
  auto w = lts::extract_counterexample(lts, *done);
  const std::string text = render_trace(m, make_trace(m, w.actions, "ordered"));
  EXPECT_NE(text.find("| TERMINATES\n"), std::string::npos);
  EXPECT_NE(text.find("pending: -\n"), std::string::npos);
  EXPECT_NE(text.find("terminated: A[1] A[2]\n"), std::string::npos);
  EXPECT_NE(text.find("blocked: agents -; servers -\n"), std::string::npos);
}

TEST(Trace, LineCountIsStepsPlusHeaderAndFooter) {
  for (const auto& [name, model] : fixtures::oracle_suite()) {
    lts::DeadlockReport r = lts::verify(*model);
    for (const auto& t : r.total_deadlocks) {
      const std::string text = render_trace(*model, make_trace(*model, t.witness.actions, name));
      EXPECT_EQ(lines(text), t.witness.actions.size() + kTraceHeaderLines + kTraceFooterLines) << name;
    }
  }
}

TEST(Trace, ParseAndReplayRoundTrip) {
  for (const auto& [name, model] : fixtures::oracle_suite()) {
    lts::Lts lts = lts::build_lts(*model);
    for (lts::NodeId n : {lts::NodeId(lts.node_count() - 1), lts::NodeId(lts.node_count() / 2)}) {
      auto w = lts::extract_counterexample(lts, n);
      const std::string text = render_trace(*model, make_trace(*model, w.actions, name));
      EXPECT_EQ(parse_trace(*model, text), w.actions) << name;
      EXPECT_EQ(replay_trace(*model, text), lts.node(n)) << name;
    }
  }
}

TEST(Trace, ParseErrors) {
  auto loaded = fixtures::load("two_sem.dedan");
  const auto& m = *loaded.model;
  EXPECT_THROW(parse_trace(m, "step 1: A[1] | A[1].sem[1].wait | sem[1]: up -> down | emits A[1].proc[1].ok_wait\n"),
               TraceParseError);
  EXPECT_THROW(parse_trace(m, "step 2: A[1] | A[1].proc[1].start | proc[1]: ini -> first | emits A[1].sem[1].wait\n"),
               TraceParseError);
  EXPECT_THROW(parse_trace(m, "step x\n"), TraceParseError);
  EXPECT_TRUE(parse_trace(m, "trace of nothing: 0 steps\n").empty());
}

TEST(Dot, WholeGraphParsesAndMarksDeadlocks) {
  auto loaded = fixtures::load("two_sem.dedan");
  lts::Lts lts = lts::build_lts(*loaded.model);
  dot::Graph g = dot::parse(render_dot(lts));
  EXPECT_EQ(g.name, "lts");
  EXPECT_EQ(g.nodes.size(), lts.node_count());
  EXPECT_EQ(g.edges.size(), lts.edge_count());
  auto totals = lts::find_total_deadlocks(lts);
  std::size_t red = 0;
  for (const auto& [node, attrs] : g.node_attrs)
    if (attrs.count("color") && attrs.at("color") == "red") ++red;
  EXPECT_EQ(red, totals.size());
  for (lts::NodeId n : totals) EXPECT_EQ(g.node_attrs.at("n" + std::to_string(n)).at("shape"), "octagon");
  EXPECT_EQ(g.node_attrs.at("n0").at("penwidth"), "2");
  EXPECT_EQ(g.edges[0].attrs.at("label").find(':') != std::string::npos, true);
}

TEST(Dot, WitnessGraphNumbersItsEdges) {
  auto loaded = fixtures::load("two_sem.dedan");
  lts::Lts lts = lts::build_lts(*loaded.model);
  auto w = lts::extract_counterexample(lts, lts::find_total_deadlocks(lts).front());
  dot::Graph g = dot::parse(render_dot(lts, w));
  EXPECT_EQ(g.nodes.size(), w.nodes.size());
  ASSERT_EQ(g.edges.size(), w.actions.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    EXPECT_EQ(g.edges[k].attrs.at("label").rfind(std::to_string(k + 1) + ". ", 0), 0u);
}

TEST(Dot, CapRefusesLargeGraphs) {
  auto loaded = fixtures::load("buffers.rybu");
  lts::Lts lts = lts::build_lts(*loaded.model);
  EXPECT_THROW(render_dot(lts, {.max_nodes = 100, .graph_name = "lts"}), GraphTooLargeError);
  EXPECT_NO_THROW(render_dot(lts, {.max_nodes = 351, .graph_name = "lts"}));
}

TEST(Dot, ServerProjectionOfSemaphore) {
  auto loaded = fixtures::load("two_sem.rybu");
  const auto& m = *loaded.model;
  dot::Graph g = dot::parse(render_server_projection(m, *m.find_server("sem1")));
  EXPECT_EQ(g.nodes.size(), 2u);
  std::set<std::string> labels;
  for (const auto& e : g.edges) labels.insert(e.attrs.at("label"));
  EXPECT_TRUE(labels.count("A_proc1.wait"));
  EXPECT_TRUE(labels.count("A_proc2.signal"));
}

TEST(Dot, AgentProjection) {
  auto loaded = fixtures::load("two_sem.rybu");
  const auto& m = *loaded.model;
  dot::Graph g = dot::parse(render_agent_projection(m, *m.find_agent("A_proc1")));
  EXPECT_NE(std::find(g.nodes.begin(), g.nodes.end(), "(terminated)"), g.nodes.end());
  // four calls, the shared response S_proc1.ok and termination
  EXPECT_EQ(g.nodes.size(), 6u);
  // one wait action per semaphore, two signal actions (from up and from down), four thread steps
  EXPECT_EQ(g.edges.size(), 10u);
}

TEST(Dot, QuotingSurvivesTheReader) {
  const std::string raw = "a \"quoted\" \\ name\nline";
  dot::Graph g = dot::parse("digraph g { " + dot_quote(raw) + "; }");
  ASSERT_EQ(g.nodes.size(), 1u);
  EXPECT_EQ(g.nodes[0], raw);
}

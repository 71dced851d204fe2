#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "fixtures.hpp"
#include "rybu/dedan/text.hpp"
#include "rybu/imds/semantics.hpp"
#include "rybu/lang/parser.hpp"
#include "rybu/lower/lower.hpp"

using namespace rybu;
using namespace rybu::lower;

namespace {

const char* kSemServer = R"(server sem {
  var state : {up, down};
  { wait | state == :up } -> { state = :down; return :ok; }
  { signal } -> { state = :up; return :ok; }
}
var sem = sem() { state = :up };
)";

// Lowers one instance of `source` for the given callers.
std::vector<LoweredAction> lower_instance(const std::string& source, const std::string& instance,
                                          const std::vector<Caller>& callers,
                                          std::vector<lang::Diagnostic>* warnings = nullptr) {
  static std::vector<lang::RybuProgram> keep;
  keep.push_back(lang::parse_program(source));
  auto checked = lang::analyze(keep.back());
  std::vector<lang::Diagnostic> w;
  auto out = lower_server(checked.info, *keep.back().find_instance(instance), callers, w);
  if (warnings) *warnings = w;
  return out;
}

std::vector<std::string> rendered(const std::vector<LoweredAction>& actions) {
  std::vector<std::string> out;
  for (const auto& a : actions) out.push_back(to_string(a));
  return out;
}

std::vector<std::string> labels_of(const std::string& source, const std::string& server) {
  auto p = lang::parse_program(source);
  auto checked = lang::analyze(p);
  std::vector<std::string> out;
  for (const auto& s : enumerate_states(checked.info.servers.at(server))) out.push_back(s.label);
  return out;
}

LoweredProgram lower_source(const std::string& source, LowerOptions options = {}) {
  return lower_program(lang::parse_program(source), options);
}

std::string state_name(const imds::SystemModel& m, const std::string& server) {
  return m.name(m.initial().state_of(*m.find_server(server)));
}

const char* kThreadX = R"(server a {
  var n: 0..1;
  { y | n == 0 } -> { return :ok; }
  { y | n == 1 } -> { return :er; }
}
server b {
  var n: 0..1;
  { z } -> { return :ok; }
  { v } -> { return :ok; }
}
var s1 = a() { n = 0 };
var s2 = b() { n = 0 };
var s3 = b() { n = 0 };
thread x() {
  loop {
    match s1.y() {
      :ok => s2.z();
      :er => s3.v();
    }
  }
}
)";

}  // namespace

TEST(Enumerate, CartesianLabelsInDeclarationOrder) {
  const std::vector<std::string> expected{"val1_1_val2_true",  "val1_1_val2_false", "val1_2_val2_true",
                                          "val1_2_val2_false", "val1_3_val2_true",  "val1_3_val2_false"};
  EXPECT_EQ(labels_of("server test { var val1: 1..3; var val2: {true, false}; }", "test"), expected);
}

TEST(Enumerate, SingleEnum) {
  EXPECT_EQ(labels_of(kSemServer, "sem"), (std::vector<std::string>{"state_up", "state_down"}));
}

TEST(Enumerate, ProductSizes) {
  EXPECT_EQ(labels_of("server b { var c1: 0..3; var c2: 0..3; }", "b").size(), 16u);
  EXPECT_EQ(labels_of("server b { var a: 0..3; var b: {x, y, z, w}; var c: -1..2; }", "b").size(), 64u);
  EXPECT_EQ(labels_of("server b { var v: ({p, q})[3]; var k: 0..1; }", "b").size(), 16u);
  EXPECT_EQ(labels_of("server b { }", "b"), (std::vector<std::string>{"idle"}));
}

TEST(Enumerate, NegativeAndVectorRendering) {
  auto labels = labels_of("server b { var v: (-1..0)[2]; }", "b");
  EXPECT_EQ(labels, (std::vector<std::string>{"v_m1_m1", "v_m1_0", "v_0_m1", "v_0_0"}));
}

TEST(Enumerate, LabelCollisionIsAnError) {
  // x = :a_y, y = :z and x = :a, y = :y_z both render as x_a_y_y_z
  auto p = lang::parse_program("server c { var x: {a_y, a}; var y: {z, y_z}; }");
  auto checked = lang::analyze(p);
  EXPECT_THROW(enumerate_states(checked.info.servers.at("c")), LowerError);
}

TEST(Enumerate, StateLimit) {
  auto p = lang::parse_program("server b { var a: 0..99; var c: 0..99; }");
  auto checked = lang::analyze(p);
  LowerOptions o;
  o.max_states_per_server = 1000;
  EXPECT_THROW(enumerate_states(checked.info.servers.at("b"), o), LowerError);
}

TEST(Eval, BufferPredicates) {
  auto p = lang::parse_program(fixtures::read_model("buffers.rybu"));
  const std::map<std::string, std::int64_t> consts{{"N", 3}};
  StateAssignment zero{{{"count1", Value::integer(0)}, {"count2", Value::integer(0)}}};
  const auto& buf = *p.find_server("Buf");
  EXPECT_EQ(eval_expr(*buf.actions[0].predicate, zero, consts), Value::boolean(true));
  StateAssignment full{{{"value", Value::integer(3)}}};
  const auto& sem = *p.find_server("SemN");
  EXPECT_EQ(eval_expr(*sem.actions[1].predicate, full, consts), Value::boolean(true));
  EXPECT_EQ(eval_expr(*sem.actions[0].predicate, full, consts), Value::boolean(false));
}

TEST(Eval, AddingZeroIsIdentity) {
  for (int x = -5; x <= 5; ++x) {
    StateAssignment a{{{"x", Value::integer(x)}}};
    auto e = lang::Expr::binary(lang::BinaryOp::Add, lang::Expr::ref("x"), lang::Expr::integer(0));
    EXPECT_EQ(eval_expr(*e, a, {}), eval_expr(*lang::Expr::ref("x"), a, {}));
  }
}

TEST(LowerServer, SignalForTwoCallers) {
  auto actions = lower_instance(kSemServer, "sem", {{"t1", {"signal"}}, {"t2", {"signal"}}});
  const std::vector<std::string> expected{
      "{A_t1.sem.signal, sem.state_up} -> {A_t1.S_t1.ok, sem.state_up}",
      "{A_t1.sem.signal, sem.state_down} -> {A_t1.S_t1.ok, sem.state_up}",
      "{A_t2.sem.signal, sem.state_up} -> {A_t2.S_t2.ok, sem.state_up}",
      "{A_t2.sem.signal, sem.state_down} -> {A_t2.S_t2.ok, sem.state_up}",
  };
  auto got = rendered(actions);
  std::sort(got.begin(), got.end());
  auto want = expected;
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST(LowerServer, GuardedWaitSingleCaller) {
  auto actions = lower_instance(kSemServer, "sem", {{"t", {"wait"}}});
  ASSERT_EQ(actions.size(), 1u);
  EXPECT_EQ(to_string(actions[0]), "{A_t.sem.wait, sem.state_up} -> {A_t.S_t.ok, sem.state_down}");
}

TEST(LowerServer, ContradictoryPredicateWarns) {
  std::vector<lang::Diagnostic> w;
  auto actions = lower_instance(
      "const N = 2; server c { var value: 0..N; { f | value < 0 } -> { return :ok; } } var c = c() { value = 0 };", "c",
      {{"t", {"f"}}}, &w);
  EXPECT_TRUE(actions.empty());
  ASSERT_FALSE(w.empty());
  EXPECT_EQ(w[0].severity, lang::Diagnostic::Severity::Warning);
}

TEST(LowerServer, UncalledServiceWarns) {
  std::vector<lang::Diagnostic> w;
  auto actions = lower_instance(kSemServer, "sem", {{"t", {"wait"}}}, &w);
  EXPECT_EQ(actions.size(), 1u);
  bool found = false;
  for (const auto& d : w) found |= d.message.find("signal") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(LowerServer, OutOfRangeUpdateNamesActionAndState) {
  try {
    lower_instance("server c { var value: 0..2; { inc } -> { value = value + 1; return :ok; } } var c = c() { value = 0 };",
                   "c", {{"t", {"inc"}}});
    FAIL() << "expected an error";
  } catch (const LowerError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("inc"), std::string::npos) << what;
    EXPECT_NE(what.find("value_2"), std::string::npos) << what;
  }
}

TEST(LowerServer, UpdatesAreSimultaneous) {
  auto actions = lower_instance(
      "server w { var a: 0..1; var b: 0..1; { swap } -> { a = b; b = a; return :ok; } } var w = w() { a = 0, b = 0 };",
      "w", {{"t", {"swap"}}});
  auto list = rendered(actions);
  std::set<std::string> got(list.begin(), list.end());
  EXPECT_TRUE(got.count("{A_t.w.swap, w.a_0_b_1} -> {A_t.S_t.ok, w.a_1_b_0}"));
}

TEST(LowerServer, OverlappingActionsStayNondeterministic) {
  auto actions = lower_instance(R"(server n {
  var x: 0..2;
  { f | x < 2 } -> { x = x + 1; return :ok; }
  { f | x > 0 } -> { x = x - 1; return :ok; }
}
var n = n() { x = 0 };)",
                                "n", {{"t", {"f"}}});
  int at_one = 0;
  for (const auto& a : actions)
    if (a.in_state == "x_1") ++at_one;
  EXPECT_EQ(at_one, 2);
}

TEST(LowerThread, MatchLoopStructure) {
  auto p = lang::parse_program(kThreadX);
  auto checked = lang::analyze(p);
  auto t = lower_thread(checked.info, p, p.threads[0]);
  EXPECT_EQ(t.server, "S_x");
  EXPECT_EQ(t.agent, "A_x");
  EXPECT_EQ(t.initial_state, "s0_s1_y");
  EXPECT_EQ(t.initial_server, "s1");
  EXPECT_EQ(t.initial_service, "y");
  ASSERT_EQ(t.actions.size(), 4u);
  const std::vector<std::string> expected{
      "{A_x.S_x.ok, S_x.s0_s1_y} -> {A_x.s2.z, S_x.s1_s2_z}",
      "{A_x.S_x.er, S_x.s0_s1_y} -> {A_x.s3.v, S_x.s2_s3_v}",
      "{A_x.S_x.ok, S_x.s1_s2_z} -> {A_x.s1.y, S_x.s0_s1_y}",
      "{A_x.S_x.ok, S_x.s2_s3_v} -> {A_x.s1.y, S_x.s0_s1_y}",
  };
  auto got = rendered(t.actions);
  std::sort(got.begin(), got.end());
  auto want = expected;
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST(LowerThread, SequenceEndsWithTermination) {
  auto p = lang::parse_program(fixtures::read_model("two_sem.rybu"));
  auto checked = lang::analyze(p);
  auto t = lower_thread(checked.info, p, p.threads[0]);
  EXPECT_EQ(t.states, (std::vector<std::string>{"s0_sem1_wait", "s1_sem2_wait", "s2_sem1_signal", "s3_sem2_signal",
                                                 "stop"}));
  ASSERT_EQ(t.actions.size(), 4u);
  int terminating = 0;
  for (const auto& a : t.actions) terminating += a.out_server ? 0 : 1;
  EXPECT_EQ(terminating, 1);
  EXPECT_EQ(to_string(t.actions.back()), "{A_proc1.S_proc1.ok, S_proc1.s3_sem2_signal} -> {S_proc1.stop}");
}

TEST(LowerThread, SmallestCycle) {
  auto p = lang::parse_program(std::string(kSemServer) + "thread t() { loop { sem.signal(); } }");
  auto checked = lang::analyze(p);
  auto t = lower_thread(checked.info, p, p.threads[0]);
  EXPECT_EQ(t.states, (std::vector<std::string>{"s0_sem_signal"}));
  ASSERT_EQ(t.actions.size(), 1u);
  EXPECT_EQ(to_string(t.actions[0]), "{A_t.S_t.ok, S_t.s0_sem_signal} -> {A_t.sem.signal, S_t.s0_sem_signal}");
}

TEST(LowerThread, BootstrapAddsStartState) {
  auto p = lang::parse_program(fixtures::read_model("two_sem.rybu"));
  auto checked = lang::analyze(p);
  LowerOptions o;
  o.bootstrap = true;
  auto t = lower_thread(checked.info, p, p.threads[0], o);
  EXPECT_EQ(t.initial_state, "ini");
  EXPECT_EQ(t.initial_server, "S_proc1");
  EXPECT_EQ(t.initial_service, "start");
  EXPECT_EQ(t.actions.size(), 5u);
}

TEST(LowerThread, EmptyBodyIsAnError) {
  EXPECT_THROW(lower_source(std::string(kSemServer) + "thread t() { }"), LowerError);
}

TEST(LowerProgram, BuffersInitialConfiguration) {
  auto lp = lower_source(fixtures::read_model("buffers.rybu"));
  const auto& m = lp.model;
  EXPECT_EQ(state_name(m, "buf"), "count1_0_count2_0");
  EXPECT_EQ(state_name(m, "sBuf1"), "value_0");
  EXPECT_EQ(state_name(m, "sBuf2"), "value_0");
  EXPECT_EQ(state_name(m, "S_User1"), "s0_buf_shouldPut1");
  EXPECT_EQ(state_name(m, "S_User2"), "s0_buf_shouldPut2");
  EXPECT_EQ(imds::to_string(m, *m.initial().pending(*m.find_agent("A_User1"))), "A_User1.buf.shouldPut1");
  EXPECT_EQ(imds::to_string(m, *m.initial().pending(*m.find_agent("A_User2"))), "A_User2.buf.shouldPut2");
  EXPECT_EQ(lp.decomposition.at("buf").at("count1_1_count2_2"),
            (std::vector<std::pair<std::string, std::string>>{{"count1", "1"}, {"count2", "2"}}));
}

TEST(LowerProgram, ServersOnly) {
  auto lp = lower_source(fixtures::rybu_snippets().back());
  EXPECT_EQ(lp.model.agent_count(), 0u);
  EXPECT_EQ(lp.model.action_count(), 0u);
  EXPECT_TRUE(imds::validate_model(lp.model).empty());
}

TEST(LowerProgram, AllActionsValidAndCallerClosed) {
  std::vector<std::string> sources = fixtures::rybu_snippets();
  for (const auto& f : fixtures::model_files(".rybu"))
    if (f != "warehouse.rybu") sources.push_back(fixtures::read_model(f));
  for (const auto& src : sources) {
    auto program = lang::parse_program(src);
    auto lp = lower_program(program);
    EXPECT_TRUE(imds::validate_model(lp.model).empty()) << src;

    // Calls written in the thread bodies.
    std::set<std::string> calls;
    std::function<void(const std::string&, const std::vector<lang::Stmt>&)> walk =
        [&](const std::string& t, const std::vector<lang::Stmt>& body) {
          for (const auto& s : body) {
            if (s.kind != lang::Stmt::Kind::Loop) calls.insert("A_" + t + "." + s.instance + "." + s.service);
            walk(t, s.body);
            for (const auto& arm : s.arms) walk(t, arm.body);
          }
        };
    for (const auto& t : program.threads) walk(t.name, t.body);

    std::set<std::string> to_instances;
    for (const auto& m : lp.model.declared_messages()) {
      const std::string server = lp.model.name(m.server);
      if (server.rfind("S_", 0) != 0) to_instances.insert(imds::to_string(lp.model, m));
    }
    EXPECT_EQ(to_instances, calls) << src;
  }
}

TEST(LowerProgram, Deterministic) {
  for (const auto& f : fixtures::model_files(".rybu")) {
    if (f == "warehouse.rybu") continue;
    auto a = lower_source(fixtures::read_model(f));
    auto b = lower_source(fixtures::read_model(f));
    EXPECT_EQ(dedan::print_dedan(a.dedan), dedan::print_dedan(b.dedan)) << f;
    ASSERT_EQ(a.model.action_count(), b.model.action_count());
    for (std::size_t i = 0; i < a.model.action_count(); ++i)
      EXPECT_EQ(imds::to_string(a.model, a.model.actions()[i]), imds::to_string(b.model, b.model.actions()[i]));
  }
}

TEST(LowerProgram, DedanTextExpandsToTheSameModel) {
  for (const auto& f : fixtures::model_files(".rybu")) {
    if (f == "warehouse.rybu") continue;
    auto lp = lower_source(fixtures::read_model(f));
    auto reparsed = dedan::expand(dedan::parse_dedan(dedan::print_dedan(lp.dedan)));
    ASSERT_EQ(reparsed.action_count(), lp.model.action_count()) << f;
    std::set<std::string> x, y;
    for (const auto& a : lp.model.actions()) x.insert(imds::to_string(lp.model, a));
    for (const auto& a : reparsed.actions()) y.insert(imds::to_string(reparsed, a));
    EXPECT_EQ(x, y) << f;
    EXPECT_EQ(imds::to_string(lp.model, lp.model.initial()), imds::to_string(reparsed, reparsed.initial())) << f;
  }
}

TEST(LowerProgram, ThreadServerInitListsUsedInstances) {
  auto lp = lower_source(kThreadX);
  const std::string text = dedan::print_dedan(lp.dedan);
  EXPECT_NE(text.find("S_x(A_x,s1,s2,s3).s0_s1_y"), std::string::npos) << text;
  EXPECT_NE(text.find("A_x.s1.y"), std::string::npos) << text;
}

TEST(LowerProgram, TypeErrorsAbortLowering) {
  try {
    lower_source("server s { var x: 0..1; { f | y == 0 } -> { return :ok; } }");
    FAIL() << "expected an error";
  } catch (const LowerError& e) {
    ASSERT_FALSE(e.diagnostics().empty());
    EXPECT_TRUE(lang::has_errors(e.diagnostics()));
  }
}

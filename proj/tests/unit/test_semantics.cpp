#include <doctest.h>

#include <functional>
#include <map>

#include <json.hpp>

#include "kdb/net/canonical.hpp"
#include "kdb/semantics/run.hpp"
#include "kdb/semantics/trace_json.hpp"
#include "kdb/syntax/parser.hpp"
#include "support/generators.hpp"

using namespace kdb;

namespace {

struct Start {
  System sys;
  CanonicalNet cn;
};

Start start(const std::string & src)
{
  Start s{parse_system(src), {}};
  s.cn = canonicalize(*s.sys.net);
  return s;
}

std::string key(const std::string & src) { return state_key(canonicalize(*parse_system(src).net)); }

// Transitions from the start state, keyed by rule name.
std::multimap<std::string, Transition> steps_of(const Start & s)
{
  std::multimap<std::string, Transition> out;
  for (Transition & t : enumerate_transitions(s.cn, s.sys)) out.emplace(to_string(t.label.rule), std::move(t));
  return out;
}

// The unique successor by `rule`.
CanonicalNet only(const std::string & src, const std::string & rule)
{
  Start s = start(src);
  auto m = steps_of(s);
  REQUIRE(m.count(rule) == 1);
  return m.find(rule)->second.next;
}

// Number of maximal paths of the explored graph, from the start.
std::size_t count_paths(const Exploration & ex)
{
  std::vector<std::vector<std::size_t>> succ(ex.states.size());
  for (const auto & [from, to, label] : ex.edges) succ[from].push_back(to);
  std::vector<std::optional<std::size_t>> memo(ex.states.size());
  std::function<std::size_t(std::size_t)> go = [&](std::size_t v) -> std::size_t {
    if (memo[v]) return *memo[v];
    std::size_t n = succ[v].empty() ? 1 : 0;
    for (std::size_t w : succ[v]) n += go(w);
    memo[v] = n;
    return n;
  };
  return go(0);
}

std::string foreach_net(int n, const std::string & order)
{
  std::string rows;
  for (int i = 1; i <= n; ++i) rows += (i > 1 ? ", (" : "(") + std::to_string(10 - i) + ")";
  return "$l :: table Log : (Int) = {}\n|| $l :: foreach(table Src : (Int) = {" + rows + "}, (!x), true, " + order +
         ") : insert(Log@$l, (x)).nil";
}

}  // namespace

TEST_CASE("unordered iteration visits every permutation")
{
  std::size_t factorial = 1;
  for (int n = 1; n <= 3; ++n) {
    factorial *= static_cast<std::size_t>(n);
    Start s = start(foreach_net(n, "{}"));
    Exploration ex = explore(s.cn, s.sys, 10000);
    CHECK_FALSE(ex.truncated);
    CHECK(count_paths(ex) == factorial);
    REQUIRE(ex.quiescent.size() == 1);
    CHECK(find_tables(ex.states[ex.quiescent[0]], "l", "Log")[0]->rows.size() == static_cast<std::uint64_t>(n));
  }
}

TEST_CASE("ordered iteration is deterministic")
{
  for (const char * order : {"asc(1)", "desc(1)", "lex"}) {
    Start s = start(foreach_net(3, order));
    Exploration ex = explore(s.cn, s.sys, 10000);
    CHECK(count_paths(ex) == 1);
  }
}

TEST_CASE("iteration with a filter and an empty table")
{
  Start s = start("$l :: table Log : (Int) = {}\n|| $l :: foreach(table Src : (Int) = {(1), (2), (3)}, (!x), x > 1, asc(1)) : "
                  "insert(Log@$l, (x)).nil");
  Trace tr = run(s.cn, s.sys, 0, 100);
  CHECK(tr.terminal == Terminal::quiescent);
  CHECK(state_key(tr.final_state()) == key("$l :: table Log : (Int) = {(2), (3)}"));
  CanonicalNet done = only("$l :: foreach(table Src : (Int) = {}, (!x), true, {}) : nil", "FOR_FF");
  CHECK(done.items.empty());
}

TEST_CASE("two writers racing on one row")
{
  Start race = start("$l :: table T : (Int) = {(0)}\n|| $l :: update(T@$l, (!x), true, (1)).nil\n|| $l :: update(T@$l, (!y), true, (2)).nil");
  Exploration ex = explore(race.cn, race.sys, 1000);
  CHECK(ex.quiescent.size() == 2);
  CHECK_FALSE(ex.err_reachable);
  Start confluent = start("$l :: table T : (Int) = {}\n|| $l :: insert(T@$l, (1)).nil\n|| $l :: insert(T@$l, (2)).nil");
  Exploration ey = explore(confluent.cn, confluent.sys, 1000);
  CHECK(ey.quiescent.size() == 1);
  CHECK(ey.states.size() == 4);
}

TEST_CASE("explore of the empty net")
{
  Start s = start("nil");
  Exploration ex = explore(s.cn, s.sys, 10);
  CHECK(ex.states.size() == 1);
  CHECK(ex.quiescent.size() == 1);
}

TEST_CASE("insert")
{
  CHECK(state_key(only("$l :: table T : (Int) = {} || $l :: insert(T@$l, (7 / 0)).nil", "INS")) == key("$l :: table T : (Int) = {(0)}"));
  Start missing = start("$l :: table S : (Int) = {} || $l :: insert(T@$l, (1)).nil");
  CHECK(steps_of(missing).empty());
  CHECK(only("$l :: table T : (Int) = {} || $l :: insert(T@$l, (\"a\")).nil", "INS").err);
  CHECK(only("$l :: table T : (Int) = {} || $l :: insert(T@$l, (1 + \"a\")).nil", "INS").err);
}

TEST_CASE("delete")
{
  CHECK(state_key(only("$l :: table T : (Int, String) = {(1, \"a\"), (2, \"b\"), (1, \"c\")} || $l :: delete(T@$l, (!n, !s), n = 1).nil",
                       "DEL")) == key("$l :: table T : (Int, String) = {(2, \"b\")}"));
  CHECK(only("$l :: table T : (Int) = {(1)} || $l :: delete(T@$l, (!n, !s), true).nil", "DEL").err);
  // An erroneous predicate on some row is an error even if other rows are fine.
  CHECK(only("$l :: table T : (Int) = {(1)} || $l :: delete(T@$l, (!n), n = \"a\").nil", "DEL").err);
}

TEST_CASE("update applies to satisfying rows only")
{
  CHECK(state_key(only("$l :: table T : (Int, Int) = {(1, 1), (2, 2)} || $l :: update(T@$l, (!a, !b), a = 2, (a, b * 10)).nil", "UPD")) ==
        key("$l :: table T : (Int, Int) = {(1, 1), (2, 20)}"));
  CHECK(only("$l :: table T : (Int) = {(1)} || $l :: update(T@$l, (!a), true, (\"s\")).nil", "UPD").err);
}

TEST_CASE("aggregation binds the result in the continuation")
{
  CHECK(state_key(only("$l :: table T : (Int) = {(3), (4)} || $l :: table R : (Int) = {}\n"
                       "|| $l :: aggr(T@$l, (!a), a > 3, count, (!r)).insert(R@$l, (r)).nil",
                       "AGR")) == key("$l :: table T : (Int) = {(3), (4)} || $l :: table R : (Int) = {}\n"
                                      "|| $l :: insert(R@$l, (1)).nil"));
  CHECK(only("$l :: table T : (String) = {(\"a\")} || $l :: aggr(T@$l, (!a), true, sum(1), (!r)).nil", "AGR").err);
}

TEST_CASE("selection across two localities")
{
  Start s = start("$l1 :: table A : (Int) = {(1), (2)}\n|| $l2 :: table B : (String) = {(\"x\")}\n"
                  "|| $l0 :: table R : (Int, String) = {}\n"
                  "|| $l0 :: select([A@$l1, B@$l2], (!n, !s), n > 1, (n, s), !tb).foreach(tb, (!a, !b), true, {}) : insert(R@$l0, (a, b)).nil");
  Trace tr = run(s.cn, s.sys, 1, 100);
  CHECK(tr.terminal == Terminal::quiescent);
  CHECK(find_tables(tr.final_state(), "l0", "R")[0]->rows == Multiset<ValueTuple>{{int_value(2), str_value("x")}});
}

TEST_CASE("create, drop and eval")
{
  CanonicalNet skip = only("$l :: table T : (Int) = {(1)} || $l :: create(T@$l, (Int)).nil", "CRT");
  CHECK(state_key(skip) == key("$l :: table T : (Int) = {(1)}"));
  Start unknown = start("$l :: create(T@$m, (Int)).nil");
  CHECK(steps_of(unknown).empty());
  CHECK(state_key(only("$l :: table T : (Int) = {(1)} || $l :: drop(T@$l).nil", "DRP")) == key("$l :: nil"));
  CHECK(state_key(only("$a :: eval(insert(T@$b, (1)).nil)@$b.nil || $b :: nil", "EVL")) == key("$b :: insert(T@$b, (1)).nil"));
  Start nowhere = start("$a :: eval(nil)@$c.nil");
  CHECK(steps_of(nowhere).empty());
}

TEST_CASE("sequencing and calls")
{
  Start s = start("let put(n: Int) := insert(T@$l, (n)).nil in\n"
                  "$l :: table T : (Int) = {}\n|| $l :: (put(1) ; put(2)) ; insert(T@$l, (3)).nil");
  Exploration ex = explore(s.cn, s.sys, 1000);
  REQUIRE(ex.quiescent.size() == 1);
  CHECK(count_paths(ex) == 1);
  CHECK(find_tables(ex.states[ex.quiescent[0]], "l", "T")[0]->rows.size() == 3);
  // An error inside the first component surfaces through the sequence.
  Start bad = start("$l :: table T : (Int) = {} || $l :: insert(T@$l, (\"x\")).nil ; nil");
  auto m = steps_of(bad);
  REQUIRE(m.count("INS") == 1);
  CHECK(m.find("INS")->second.next.err);
}

TEST_CASE("runs are reproducible and respect the step limit")
{
  gen::Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    System sys = gen::well_typed(rng);
    CHECK(trace_jsonl(run(sys, 7, 50)) == trace_jsonl(run(sys, 7, 50)));
  }
  Start loop = start("let p() := p() in $l :: p()");
  Trace tr = run(loop.cn, loop.sys, 0, 25);
  CHECK(tr.terminal == Terminal::step_limit);
  CHECK(tr.steps.size() == 25);
}

TEST_CASE("trace lines")
{
  Start s = start("$l :: table T : (Int) = {} || $l :: insert(T@$l, (1)).nil");
  std::string out = trace_jsonl(run(s.cn, s.sys, 0, 10));
  std::istringstream in(out);
  std::string line;
  std::vector<nlohmann::json> lines;
  while (std::getline(in, line)) lines.push_back(nlohmann::json::parse(line));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0]["rule"] == "INS");
  CHECK(lines[0]["ok"] == true);
  CHECK(lines[1]["terminal"] == "quiescent");
}

TEST_CASE("no_rep is preserved along generated runs")
{
  gen::Rng rng(12);
  gen::Options o;
  o.allow_drop = true;
  for (int i = 0; i < 200; ++i) {
    System sys = gen::well_typed(rng, o);
    Trace tr = run(sys, static_cast<std::uint64_t>(i), 40);
    CHECK(tr.no_rep_violations == 0);
    CHECK(tr.terminal != Terminal::err);
  }
}

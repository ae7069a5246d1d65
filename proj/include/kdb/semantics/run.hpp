#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "kdb/semantics/engine.hpp"

namespace kdb {

enum class Terminal : std::uint8_t { quiescent, err, step_limit };

const char * to_string(Terminal t);

struct TraceStep {
  TransitionLabel label;
  CanonicalNet state;  // the net after the step
};

struct Trace {
  CanonicalNet initial;
  std::vector<TraceStep> steps;
  Terminal terminal = Terminal::quiescent;
  // Steps after which lid(N) had a repetition although it had none before.
  std::size_t no_rep_violations = 0;

  const CanonicalNet & final_state() const { return steps.empty() ? initial : steps.back().state; }
};

// Repeatedly picks one enabled transition uniformly at random with a seeded
// generator until quiescence, ERR or the step limit.
Trace run(const CanonicalNet & initial, const System & sys, std::uint64_t seed, std::size_t max_steps);
Trace run(const System & sys, std::uint64_t seed, std::size_t max_steps);

struct Exploration {
  std::vector<CanonicalNet> states;  // in discovery order; states[0] is the start
  std::vector<std::string> keys;
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> edges;
  std::vector<std::size_t> quiescent;
  bool err_reachable = false;
  bool truncated = false;
};

// Breadth-first exploration of the reachable states, up to `bound` states.
Exploration explore(const CanonicalNet & initial, const System & sys, std::size_t bound);

// The state graph in Graphviz dot syntax.
std::string to_dot(const Exploration & ex);

}  // namespace kdb

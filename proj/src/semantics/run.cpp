#include "kdb/semantics/run.hpp"

#include <deque>
#include <random>
#include <unordered_map>

namespace kdb {

const char * to_string(Terminal t)
{
  switch (t) {
    case Terminal::quiescent: return "quiescent";
    case Terminal::err: return "err";
    case Terminal::step_limit: return "step-limit";
  }
  return "?";
}

Trace run(const CanonicalNet & initial, const System & sys, std::uint64_t seed, std::size_t max_steps)
{
  Trace tr;
  tr.initial = initial;
  std::mt19937_64 rng(seed);
  const CanonicalNet * cur = &tr.initial;
  for (;;) {
    if (cur->err) {
      tr.terminal = Terminal::err;
      return tr;
    }
    auto ts = enumerate_transitions(*cur, sys);
    if (ts.empty()) {
      tr.terminal = Terminal::quiescent;
      return tr;
    }
    if (tr.steps.size() >= max_steps) {
      tr.terminal = Terminal::step_limit;
      return tr;
    }
    std::size_t pick = static_cast<std::size_t>(rng() % ts.size());
    bool before = no_rep(lid(*cur));
    tr.steps.push_back(TraceStep{std::move(ts[pick].label), std::move(ts[pick].next)});
    cur = &tr.steps.back().state;
    if (before && !no_rep(lid(*cur))) ++tr.no_rep_violations;
  }
}

Trace run(const System & sys, std::uint64_t seed, std::size_t max_steps)
{
  return run(canonicalize(*sys.net), sys, seed, max_steps);
}

Exploration explore(const CanonicalNet & initial, const System & sys, std::size_t bound)
{
  Exploration ex;
  std::unordered_map<std::string, std::size_t> index;
  auto add = [&](CanonicalNet cn) -> std::pair<std::size_t, bool> {
    std::string key = state_key(cn);
    auto it = index.find(key);
    if (it != index.end()) return {it->second, false};
    std::size_t id = ex.states.size();
    index.emplace(key, id);
    ex.keys.push_back(std::move(key));
    if (cn.err) ex.err_reachable = true;
    ex.states.push_back(std::move(cn));
    return {id, true};
  };
  add(initial);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    if (ex.states[s].err) continue;
    auto ts = enumerate_transitions(ex.states[s], sys);
    if (ts.empty()) {
      ex.quiescent.push_back(s);
      continue;
    }
    for (Transition & t : ts) {
      std::string label = to_string(t.label.rule);
      auto key = state_key(t.next);
      auto found = index.find(key);
      if (found == index.end() && ex.states.size() >= bound) {
        ex.truncated = true;
        continue;
      }
      auto [id, fresh] = add(std::move(t.next));
      ex.edges.emplace_back(s, id, label);
      if (fresh) queue.push_back(id);
    }
  }
  return ex;
}

namespace {

std::string dot_escape(const std::string & s)
{
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') out += "\\l";
    else out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const Exploration & ex)
{
  std::string out = "digraph states {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < ex.states.size(); ++i)
    out += "  s" + std::to_string(i) + " [label=\"" + dot_escape(ex.keys[i]) + "\"];\n";
  for (const auto & [from, to, label] : ex.edges)
    out += "  s" + std::to_string(from) + " -> s" + std::to_string(to) + " [label=\"" + label + "\"];\n";
  return out + "}\n";
}

}  // namespace kdb

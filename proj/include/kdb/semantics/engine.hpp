#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kdb/net/canonical.hpp"
#include "kdb/syntax/ast.hpp"

namespace kdb {

enum class Rule : std::uint8_t { INS, DEL, SEL, UPD, AGR, CRT, DRP, EVL, FOR_TT, FOR_FF, SEQ_TT, SEQ_FF, CALL };

const char * to_string(Rule r);

// `rule` is the base rule that fired; `via` lists the sequencing rules that
// lifted it, innermost first.
struct TransitionLabel {
  Rule rule = Rule::INS;
  std::vector<Rule> via;
  std::string actor;
  std::string detail;
  bool to_err = false;
};

struct Transition {
  TransitionLabel label;
  CanonicalNet next;
};

// All transitions of the net, one per enabled redex, in a deterministic order.
std::vector<Transition> enumerate_transitions(const CanonicalNet & cn, const System & sys);

// Applies the transition at `index` of enumerate_transitions; throws
// std::out_of_range when there is no such transition.
Transition step_interactive(const CanonicalNet & cn, const System & sys, std::size_t index);

}  // namespace kdb

#pragma once

#include <string>
#include <unordered_set>

#include "kdb/syntax/ast.hpp"

namespace kdb {

// Post-parse pass: classifies variable references as data or locality
// variables by their binders, renames bound names so that every binder in
// the system is distinct, and checks that calls name a declared procedure
// with the right arity. `names` holds every identifier of the source so that
// fresh names never collide with it. Throws ParseError.
System resolve_system(System raw, std::unordered_set<std::string> names, bool check_calls = true);
ProcP resolve_process(const ProcP & raw, std::unordered_set<std::string> names);

}  // namespace kdb

#pragma once

#include <set>
#include <string>

#include "kdb/syntax/ast.hpp"

namespace kdb {

// Free and bound variable names (data, locality and table variables).
// Templates bind in the predicate and tuple of their own action; delete,
// select and update templates do not reach the continuation, aggregation
// result templates and select table variables do. Foreach templates bind in
// the predicate and body. Seq never carries bindings across.
std::set<std::string> free_vars(const Expr & e);
std::set<std::string> free_vars(const Pred & p);
std::set<std::string> free_vars(const Tuple & t);
std::set<std::string> free_vars(const Action & a);
std::set<std::string> free_vars(const Process & p);
std::set<std::string> free_vars(const Net & n);

std::set<std::string> bound_vars(const Action & a);
std::set<std::string> bound_vars(const Process & p);
std::set<std::string> bound_vars(const Net & n);

bool is_closed(const Process & p);

// Localities not captured by a restriction, including those mentioned inside
// processes and table rows.
std::set<std::string> free_locs(const Net & n);

}  // namespace kdb

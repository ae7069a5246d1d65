#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kdb/syntax/ast.hpp"

namespace kdb {

using Rows = Multiset<ValueTuple>;

// sk↓^T_t. Each component is the sort of a constant, the schema component of
// a variable bound by T, or the sort inferred for a compound expression under
// T's bindings. nullopt is Undefined.
std::optional<Schema> project_schema(const Schema & sk, const Template & t, const Tuple & payload);

// A table present in the net, paired with its locality.
struct Located {
  std::string loc;
  const Table * table = nullptr;
};

// ⊗sk and ⊗R: flattened products over the referenced tables. Undefined when a
// reference is a table variable, has a locality variable, or names a table
// absent from `located`.
std::optional<Schema> join_schemas(const std::vector<TableRef> & refs, const std::vector<Located> & located);
std::optional<Rows> join_rows(const std::vector<TableRef> & refs, const std::vector<Located> & located);

// Minimal(R, ⪯) under the concrete order family. Asc/Desc compare one column
// and are partial (ties are incomparable, so all tied rows are minimal); Lex
// is the total lexicographic order; Unordered makes every row minimal.
std::vector<ValueTuple> minimal(const Rows & r, const OrderSpec & order);
bool precedes(const ValueTuple & a, const ValueTuple & b, const OrderSpec & order);

// f(R) as a unary tuple.
ValueTuple apply_aggr(const AggrFn & f, const Rows & r);
// Whether a row lies in the domain of f: the aggregated column must be Int.
bool aggr_accepts(const AggrFn & f, const ValueTuple & row);
// Range of f.
Schema aggr_result_schema(const AggrFn & f);

}  // namespace kdb

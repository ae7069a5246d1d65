#pragma once

#include <optional>

#include "kdb/syntax/ast.hpp"

namespace kdb {

// Ok(x) or the evaluation error (nullopt).
template <class X>
using EvalOutcome = std::optional<X>;

enum class Truth : std::uint8_t { tt, ff, err };

const char * to_string(Truth t);

// Closed expressions only; variables evaluate to an error.
EvalOutcome<Value> eval_expr(const Expr & e);
Truth eval_pred(const Pred & p);
EvalOutcome<ValueTuple> eval_tuple(const Tuple & t);

}  // namespace kdb

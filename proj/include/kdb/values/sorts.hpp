#pragma once

#include <functional>
#include <optional>
#include <string>

#include "kdb/syntax/ast.hpp"

namespace kdb {

// v ⊩ m and its componentwise lift to tuples.
bool well_sorted(const Value & v, const MType & m);
bool well_sorted(const ValueTuple & t, const Schema & sk);
// T ⊩ sk: !x fits every sort but Loc, !@u fits Loc only.
bool well_sorted(const Template & t, const Schema & sk);

// The sort of a constant. An untagged empty multiset defaults to {Int}.
MType sort_of(const Value & v);

// Sort of an expression. `any_set` marks an empty multiset of unknown element
// sort, which fits every multiset sort.
struct ExprSort {
  MType type;
  bool any_set = false;
};

bool fits(const ExprSort & s, const MType & m);

using SortLookup = std::function<std::optional<MType>(const std::string &)>;

// Sort inference without diagnostics; nullopt when the expression is ill-sorted.
std::optional<ExprSort> infer_sort(const Expr & e, const SortLookup & lookup);

// Environment produced by T against sk, or nullopt when T ⊮ sk.
std::optional<std::vector<std::pair<std::string, MType>>> template_env(const Template & t, const Schema & sk);

}  // namespace kdb

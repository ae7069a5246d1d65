#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "kdb/syntax/ast.hpp"

namespace kdb {

// Values for data and locality variables, tables for table variables.
struct Subst {
  std::unordered_map<std::string, Value> values;
  std::unordered_map<std::string, Shared<Table>> tables;

  bool empty() const { return values.empty() && tables.empty(); }
};

// et/T: nullopt is the matching error.
std::optional<Subst> match(const ValueTuple & et, const Template & t);

// Replaces free occurrences; binders that reuse a substituted name shadow it.
ExprP apply_subst(const Subst & s, const ExprP & e);
PredP apply_subst(const Subst & s, const PredP & p);
Tuple apply_subst(const Subst & s, const Tuple & t);
TableRef apply_subst(const Subst & s, const TableRef & r);
ProcP apply_subst(const Subst & s, const ProcP & p);

// Simultaneous renaming of locality constants.
using LocRenaming = std::map<std::string, std::string>;
ProcP rename_localities(const ProcP & p, const LocRenaming & m);
Shared<Table> rename_localities(const Shared<Table> & t, const LocRenaming & m);

// Renames a locality everywhere in a process, including table rows.
ProcP rename_locality(const ProcP & p, const std::string & from, const std::string & to);
Table rename_locality(const Table & t, const std::string & from, const std::string & to);

}  // namespace kdb

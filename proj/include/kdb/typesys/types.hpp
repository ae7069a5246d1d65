#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "kdb/syntax/ast.hpp"
#include "kdb/values/sorts.hpp"

namespace kdb {

// Type of a variable: a data sort, a table schema, or Loc.
struct SType {
  enum class Kind : std::uint8_t { Data, TableSchema, Locality };
  Kind kind = Kind::Data;
  MType data;
  Schema schema;

  static SType of_data(MType m);
  static SType of_schema(Schema sk);
  static SType locality();
  // Procedure parameters and template fields: Loc is a locality, the rest data.
  static SType of_sort(const MType & m);

  friend bool operator==(const SType &, const SType &) = default;
};

std::string to_string(const SType & t);

// Γ with constant-time extension and lookup. A later binding of the same name
// hides the earlier one until it is popped.
class TypeEnv {
 public:
  void bind(const std::string & name, SType t);
  const SType * lookup(const std::string & name) const;
  std::size_t mark() const { return trail_.size(); }
  void restore(std::size_t m);
  std::size_t size() const { return trail_.size(); }

 private:
  std::unordered_map<std::string, std::vector<SType>> slots_;
  std::vector<std::string> trail_;
};

using Bindings = std::vector<std::pair<std::string, SType>>;

// ∇
using SchemaMap = std::unordered_map<std::string, Schema>;

enum class TypeErrorKind : std::uint8_t {
  UnboundVariable,
  VariableKind,
  OperandMismatch,
  HeterogeneousSet,
  OrderingOnIdOrLoc,
  TemplateArity,
  TemplateSort,
  TupleArity,
  TupleSort,
  UnknownTable,
  TableRow,
  TableSchema,
  AggrSignature,
  CreateSchema,
  OrderColumn,
  UnknownProcedure,
  ArgumentCount,
  ArgumentType,
  ErrNet,
  SchemaConflict,
  OpenSystem,
};

const char * to_string(TypeErrorKind k);

struct TypeError {
  Span span;
  TypeErrorKind kind = TypeErrorKind::OperandMismatch;
  std::string message;
  std::string expected;
  std::string found;
};

using TypeErrors = std::vector<TypeError>;

struct TypeContext {
  const SchemaMap * nabla = nullptr;
  const System * sys = nullptr;  // procedure signatures for calls
};

// Judgments of the type system. Each appends its diagnostics to `errs` and
// returns nullopt/false when it does not hold.
std::optional<ExprSort> type_expr(const TypeEnv & g, const Expr & e, TypeErrors & errs);
bool type_pred(const TypeEnv & g, const Pred & p, TypeErrors & errs);
std::optional<Schema> type_tuple(const TypeEnv & g, const Tuple & t, TypeErrors & errs);
bool type_tuple_against(const TypeEnv & g, const Tuple & t, const Schema & sk, TypeErrors & errs);
std::optional<Bindings> type_template(const Schema & sk, const Template & t, TypeErrors & errs);
std::optional<Schema> type_table(const TypeEnv & g, const TypeContext & cx, const TableRef & r, TypeErrors & errs);
std::optional<Bindings> type_action(const TypeEnv & g, const TypeContext & cx, const Action & a, TypeErrors & errs);
bool type_process(TypeEnv & g, const TypeContext & cx, const Process & p, TypeErrors & errs);
bool type_component(TypeEnv & g, const TypeContext & cx, const Component & c, TypeErrors & errs);
bool type_net(TypeEnv & g, const TypeContext & cx, const Net & n, TypeErrors & errs);

// ∇ from schema declarations, table literals and create actions.
SchemaMap build_schema_map(const System & sys, TypeErrors & errs);

// Procedures once each under their parameters, then the net under [].
TypeErrors check_system(const System & sys);
// A net under [] with ∇ and procedures of `sys`; used on runtime states.
TypeErrors check_net(const System & sys, const SchemaMap & nabla, const Net & n);

nlohmann::json errors_json(const TypeErrors & errs);

}  // namespace kdb

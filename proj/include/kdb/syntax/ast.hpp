#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "kdb/values/value.hpp"

namespace kdb {

// Source position of a node. Positions never take part in structural
// equality, so two Spans always compare equal.
struct Span {
  std::uint32_t line = 0;
  std::uint32_t col = 0;

  friend bool operator==(const Span &, const Span &) { return true; }
};

// Immutable shared node. Equality is deep.
template <class T>
class Shared {
 public:
  Shared() = default;
  Shared(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}
  explicit Shared(std::shared_ptr<const T> p) : ptr_(std::move(p)) {}

  const T & operator*() const { return *ptr_; }
  const T * operator->() const { return ptr_.get(); }
  explicit operator bool() const { return static_cast<bool>(ptr_); }
  const T * get() const { return ptr_.get(); }

  friend bool operator==(const Shared & a, const Shared & b)
  {
    if (a.ptr_ == b.ptr_) return true;
    if (!a.ptr_ || !b.ptr_) return false;
    return *a.ptr_ == *b.ptr_;
  }

 private:
  std::shared_ptr<const T> ptr_;
};

struct Expr;
struct Pred;
struct Process;
struct Component;
struct Net;
using ExprP = Shared<Expr>;
using PredP = Shared<Pred>;
using ProcP = Shared<Process>;
using CompP = Shared<Component>;
using NetP = Shared<Net>;

enum class ArithOp : std::uint8_t { Add, Sub, Mul, Div };
enum class CmpOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

struct Expr {
  // Constant: integer, string, table identifier, locality, or (after
  // substitution) a multiset value.
  struct Lit {
    Value value;
    friend bool operator==(const Lit &, const Lit &) = default;
  };
  // Data variable x or locality variable u.
  struct Var {
    std::string name;
    bool is_loc = false;
    friend bool operator==(const Var &, const Var &) = default;
  };
  struct Concat {
    ExprP left, right;
    friend bool operator==(const Concat &, const Concat &) = default;
  };
  struct Arith {
    ArithOp op = ArithOp::Add;
    ExprP left, right;
    friend bool operator==(const Arith &, const Arith &) = default;
  };
  struct SetLit {
    std::vector<ExprP> elems;
    friend bool operator==(const SetLit &, const SetLit &) = default;
  };

  std::variant<Lit, Var, Concat, Arith, SetLit> node;
  Span span;

  friend bool operator==(const Expr &, const Expr &) = default;
};

struct Pred {
  struct True {
    friend bool operator==(const True &, const True &) = default;
  };
  struct Cmp {
    CmpOp op = CmpOp::Eq;
    ExprP left, right;
    friend bool operator==(const Cmp &, const Cmp &) = default;
  };
  struct Member {
    ExprP elem, set;
    friend bool operator==(const Member &, const Member &) = default;
  };
  // Proper subset between two multisets (extension).
  struct Subset {
    ExprP left, right;
    friend bool operator==(const Subset &, const Subset &) = default;
  };
  struct Not {
    PredP inner;
    friend bool operator==(const Not &, const Not &) = default;
  };
  struct And {
    PredP left, right;
    friend bool operator==(const And &, const And &) = default;
  };

  std::variant<True, Cmp, Member, Subset, Not, And> node;
  Span span;

  friend bool operator==(const Pred &, const Pred &) = default;
};

struct Tuple {
  std::vector<ExprP> items;
  Span span;
  friend bool operator==(const Tuple &, const Tuple &) = default;
};

struct Binder {
  std::string name;
  bool is_loc = false;  // !@u rather than !x
  Span span;
  friend bool operator==(const Binder &, const Binder &) = default;
};

struct Template {
  std::vector<Binder> fields;
  Span span;
  friend bool operator==(const Template &, const Template &) = default;
};

// A locality position: literal $l or locality variable u.
struct LocRef {
  std::string name;
  bool is_var = false;
  Span span;
  friend bool operator==(const LocRef &, const LocRef &) = default;
};

struct TableRef {
  struct ByName {
    std::string tid;
    LocRef loc;
    friend bool operator==(const ByName &, const ByName &) = default;
  };
  struct ByVar {
    std::string name;
    friend bool operator==(const ByVar &, const ByVar &) = default;
  };
  struct Literal {
    Shared<Table> table;
    friend bool operator==(const Literal &, const Literal &) = default;
  };

  std::variant<ByName, ByVar, Literal> node;
  Span span;
  friend bool operator==(const TableRef &, const TableRef &) = default;
};

struct AggrFn {
  enum class Kind : std::uint8_t { Sum, Avg, Count, Min, Max };
  Kind kind = Kind::Count;
  std::size_t col = 0;  // 1-based, unused for Count
  friend bool operator==(const AggrFn &, const AggrFn &) = default;
};

struct OrderSpec {
  enum class Kind : std::uint8_t { Unordered, Asc, Desc, Lex };
  Kind kind = Kind::Unordered;
  std::size_t col = 0;  // 1-based, Asc/Desc only
  friend bool operator==(const OrderSpec &, const OrderSpec &) = default;
};

struct Action {
  struct Insert {
    std::string tid;
    LocRef loc;
    Tuple tuple;
    friend bool operator==(const Insert &, const Insert &) = default;
  };
  struct Delete {
    std::string tid;
    LocRef loc;
    Template tmpl;
    PredP pred;
    friend bool operator==(const Delete &, const Delete &) = default;
  };
  struct Select {
    std::vector<TableRef> tables;
    Template tmpl;
    PredP pred;
    Tuple tuple;
    std::string bind;
    friend bool operator==(const Select &, const Select &) = default;
  };
  struct Update {
    std::string tid;
    LocRef loc;
    Template tmpl;
    PredP pred;
    Tuple tuple;
    friend bool operator==(const Update &, const Update &) = default;
  };
  struct Aggr {
    std::string tid;
    LocRef loc;
    Template tmpl;
    PredP pred;
    AggrFn fn;
    Template result;
    friend bool operator==(const Aggr &, const Aggr &) = default;
  };
  struct Create {
    std::string tid;
    LocRef loc;
    Schema schema;
    friend bool operator==(const Create &, const Create &) = default;
  };
  struct Drop {
    std::string tid;
    LocRef loc;
    friend bool operator==(const Drop &, const Drop &) = default;
  };
  struct Eval {
    ProcP process;
    LocRef loc;
    friend bool operator==(const Eval &, const Eval &) = default;
  };

  std::variant<Insert, Delete, Select, Update, Aggr, Create, Drop, Eval> node;
  Span span;
  friend bool operator==(const Action &, const Action &) = default;
};

struct Process {
  struct Nil {
    friend bool operator==(const Nil &, const Nil &) = default;
  };
  struct Prefix {
    Action action;
    ProcP cont;
    friend bool operator==(const Prefix &, const Prefix &) = default;
  };
  struct Call {
    std::string name;
    std::vector<ExprP> args;
    friend bool operator==(const Call &, const Call &) = default;
  };
  struct Foreach {
    TableRef table;
    Template tmpl;
    PredP pred;
    OrderSpec order;
    ProcP body;
    friend bool operator==(const Foreach &, const Foreach &) = default;
  };
  struct Seq {
    ProcP first, second;
    friend bool operator==(const Seq &, const Seq &) = default;
  };

  std::variant<Nil, Prefix, Call, Foreach, Seq> node;
  Span span;
  friend bool operator==(const Process &, const Process &) = default;
};

struct Component {
  struct Proc {
    ProcP process;
    friend bool operator==(const Proc &, const Proc &) = default;
  };
  struct Tab {
    Shared<Table> table;
    friend bool operator==(const Tab &, const Tab &) = default;
  };
  struct Par {
    CompP left, right;
    friend bool operator==(const Par &, const Par &) = default;
  };

  std::variant<Proc, Tab, Par> node;
  Span span;
  friend bool operator==(const Component &, const Component &) = default;
};

struct Net {
  struct Nil {
    friend bool operator==(const Nil &, const Nil &) = default;
  };
  struct Err {
    friend bool operator==(const Err &, const Err &) = default;
  };
  struct Par {
    NetP left, right;
    friend bool operator==(const Par &, const Par &) = default;
  };
  struct Restrict {
    std::string loc;
    NetP inner;
    friend bool operator==(const Restrict &, const Restrict &) = default;
  };
  struct Node {
    std::string loc;
    CompP comp;
    friend bool operator==(const Node &, const Node &) = default;
  };

  std::variant<Nil, Err, Par, Restrict, Node> node;
  Span span;
  friend bool operator==(const Net &, const Net &) = default;
};

struct Param {
  std::string name;
  MType type;
  Span span;
  friend bool operator==(const Param &, const Param &) = default;
};

struct Procedure {
  std::string name;
  std::vector<Param> params;
  ProcP body;
  Span span;
  friend bool operator==(const Procedure &, const Procedure &) = default;
};

struct SchemaDecl {
  std::string tid;
  Schema schema;
  Span span;
  friend bool operator==(const SchemaDecl &, const SchemaDecl &) = default;
};

struct System {
  std::vector<SchemaDecl> schemas;
  std::vector<Procedure> procedures;
  NetP net;

  const Procedure * find_procedure(const std::string & name) const;

  friend bool operator==(const System &, const System &) = default;
};

// Builders, mostly for tests and the engine.
ExprP lit(Value v, Span s = {});
ExprP var(std::string name, bool is_loc = false, Span s = {});
ExprP concat(ExprP l, ExprP r);
ExprP arith(ArithOp op, ExprP l, ExprP r);
ExprP set_lit(std::vector<ExprP> elems);
PredP pred_true();
PredP cmp(CmpOp op, ExprP l, ExprP r);
PredP member(ExprP e, ExprP s);
PredP subset(ExprP l, ExprP r);
PredP pred_not(PredP p);
PredP pred_and(PredP l, PredP r);
ProcP nil_proc();
ProcP prefix(Action a, ProcP cont);
ProcP seq(ProcP first, ProcP second);
NetP nil_net();
NetP err_net();
NetP par_net(NetP l, NetP r);
NetP node_net(std::string loc, CompP c);
CompP proc_comp(ProcP p);
CompP table_comp(Table t);
CompP par_comp(CompP l, CompP r);

bool is_nil(const Process & p);

}  // namespace kdb

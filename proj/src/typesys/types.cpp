#include "kdb/typesys/types.hpp"

#include "kdb/syntax/binding.hpp"
#include "kdb/syntax/render.hpp"
#include "kdb/values/relational.hpp"

namespace kdb {

SType SType::of_data(MType m) { return SType{Kind::Data, m, {}}; }
SType SType::of_schema(Schema sk) { return SType{Kind::TableSchema, {}, std::move(sk)}; }
SType SType::locality() { return SType{Kind::Locality, MType{BaseType::Loc, false}, {}}; }
SType SType::of_sort(const MType & m)
{
  if (!m.is_set && m.base == BaseType::Loc) return locality();
  return of_data(m);
}

std::string to_string(const SType & t)
{
  switch (t.kind) {
    case SType::Kind::Data: return to_string(t.data);
    case SType::Kind::TableSchema: return to_string(t.schema);
    case SType::Kind::Locality: return "Loc";
  }
  return "?";
}

void TypeEnv::bind(const std::string & name, SType t)
{
  slots_[name].push_back(std::move(t));
  trail_.push_back(name);
}

const SType * TypeEnv::lookup(const std::string & name) const
{
  auto it = slots_.find(name);
  if (it == slots_.end() || it->second.empty()) return nullptr;
  return &it->second.back();
}

void TypeEnv::restore(std::size_t m)
{
  while (trail_.size() > m) {
    auto it = slots_.find(trail_.back());
    it->second.pop_back();
    if (it->second.empty()) slots_.erase(it);
    trail_.pop_back();
  }
}

const char * to_string(TypeErrorKind k)
{
  switch (k) {
    case TypeErrorKind::UnboundVariable: return "unbound-variable";
    case TypeErrorKind::VariableKind: return "variable-kind";
    case TypeErrorKind::OperandMismatch: return "operand-mismatch";
    case TypeErrorKind::HeterogeneousSet: return "heterogeneous-multiset";
    case TypeErrorKind::OrderingOnIdOrLoc: return "ordering-on-id-or-loc";
    case TypeErrorKind::TemplateArity: return "template-arity";
    case TypeErrorKind::TemplateSort: return "template-sort";
    case TypeErrorKind::TupleArity: return "tuple-arity";
    case TypeErrorKind::TupleSort: return "tuple-sort";
    case TypeErrorKind::UnknownTable: return "unknown-table";
    case TypeErrorKind::TableRow: return "table-row";
    case TypeErrorKind::TableSchema: return "table-schema";
    case TypeErrorKind::AggrSignature: return "aggregator-signature";
    case TypeErrorKind::CreateSchema: return "create-schema";
    case TypeErrorKind::OrderColumn: return "order-column";
    case TypeErrorKind::UnknownProcedure: return "unknown-procedure";
    case TypeErrorKind::ArgumentCount: return "argument-count";
    case TypeErrorKind::ArgumentType: return "argument-type";
    case TypeErrorKind::ErrNet: return "err-net";
    case TypeErrorKind::SchemaConflict: return "schema-conflict";
    case TypeErrorKind::OpenSystem: return "open-system";
  }
  return "?";
}

namespace {

void report(TypeErrors & errs, Span s, TypeErrorKind k, std::string msg, std::string expected = {},
            std::string found = {})
{
  errs.push_back(TypeError{s, k, std::move(msg), std::move(expected), std::move(found)});
}

std::string sort_text(const ExprSort & s) { return s.any_set ? "{_}" : to_string(s.type); }

bool is_scalar(const ExprSort & s) { return !s.any_set && !s.type.is_set; }

bool is_loc(const MType & m) { return !m.is_set && m.base == BaseType::Loc; }

std::optional<ExprSort> literal_sort(const Value & v)
{
  if (auto * s = std::get_if<SetV>(&v)) {
    if (!s->items.empty()) {
      BaseType k = scalar_kind(s->items.begin()->first);
      for (const auto & [e, n] : s->items)
        if (scalar_kind(e) != k) return std::nullopt;
      return ExprSort{MType{k, true}};
    }
    if (s->elem) return ExprSort{MType{*s->elem, true}};
    return ExprSort{MType{BaseType::Int, true}, true};
  }
  return ExprSort{MType{*scalar_kind(v), false}};
}

bool type_loc(const TypeEnv & g, const LocRef & l, TypeErrors & errs)
{
  if (!l.is_var) return true;
  const SType * t = g.lookup(l.name);
  if (!t) {
    report(errs, l.span, TypeErrorKind::UnboundVariable, "unbound locality variable '" + l.name + "'");
    return false;
  }
  if (t->kind != SType::Kind::Locality) {
    report(errs, l.span, TypeErrorKind::VariableKind, "'" + l.name + "' is not a locality", "Loc", to_string(*t));
    return false;
  }
  return true;
}

void bind_all(TypeEnv & g, const Bindings & b)
{
  for (const auto & [n, t] : b) g.bind(n, t);
}

std::optional<Schema> lookup_nabla(const TypeContext & cx, const std::string & tid, Span s, TypeErrors & errs)
{
  auto it = cx.nabla->find(tid);
  if (it == cx.nabla->end()) {
    report(errs, s, TypeErrorKind::UnknownTable, "no schema is known for table '" + tid + "'");
    return std::nullopt;
  }
  return it->second;
}

bool type_rows(const Table & t, Span s, TypeErrors & errs)
{
  bool good = true;
  for (const auto & [row, n] : t.rows) {
    bool fit = row.size() == t.iface.schema.size();
    for (std::size_t i = 0; fit && i < row.size(); ++i) {
      auto ls = literal_sort(row[i]);
      fit = ls && fits(*ls, t.iface.schema[i]);
    }
    if (!fit) {
      report(errs, s, TypeErrorKind::TableRow, "row " + render_tuple(row) + " does not have the table schema",
             to_string(t.iface.schema));
      good = false;
    }
  }
  return good;
}

bool check_order(const OrderSpec & o, const Schema & sk, Span s, TypeErrors & errs)
{
  if (o.kind != OrderSpec::Kind::Asc && o.kind != OrderSpec::Kind::Desc) return true;
  if (o.col >= 1 && o.col <= sk.size()) return true;
  report(errs, s, TypeErrorKind::OrderColumn,
         "order column " + std::to_string(o.col) + " is outside a schema of " + std::to_string(sk.size()) +
             " columns");
  return false;
}

}  // namespace

std::optional<ExprSort> type_expr(const TypeEnv & g, const Expr & e, TypeErrors & errs)
{
  if (auto * l = std::get_if<Expr::Lit>(&e.node)) {
    auto s = literal_sort(l->value);
    if (!s) report(errs, e.span, TypeErrorKind::HeterogeneousSet, "multiset elements have different types");
    return s;
  }
  if (auto * v = std::get_if<Expr::Var>(&e.node)) {
    const SType * t = g.lookup(v->name);
    if (!t) {
      report(errs, e.span, TypeErrorKind::UnboundVariable, "unbound variable '" + v->name + "'");
      return std::nullopt;
    }
    if (v->is_loc) {
      if (t->kind == SType::Kind::Locality) return ExprSort{MType{BaseType::Loc, false}};
      report(errs, e.span, TypeErrorKind::VariableKind, "'" + v->name + "' is not a locality", "Loc", to_string(*t));
      return std::nullopt;
    }
    if (t->kind == SType::Kind::Data && !is_loc(t->data)) return ExprSort{t->data};
    report(errs, e.span, TypeErrorKind::VariableKind, "'" + v->name + "' is not a data variable", "data",
           to_string(*t));
    return std::nullopt;
  }
  auto operand = [&](const ExprP & x, BaseType want) -> bool {
    auto s = type_expr(g, *x, errs);
    if (!s) return false;
    if (is_scalar(*s) && s->type.base == want) return true;
    report(errs, x->span, TypeErrorKind::OperandMismatch, "operand has type " + sort_text(*s),
           to_string(want), sort_text(*s));
    return false;
  };
  if (auto * c = std::get_if<Expr::Concat>(&e.node)) {
    bool a = operand(c->left, BaseType::String);
    bool b = operand(c->right, BaseType::String);
    if (!a || !b) return std::nullopt;
    return ExprSort{MType{BaseType::String, false}};
  }
  if (auto * a = std::get_if<Expr::Arith>(&e.node)) {
    bool x = operand(a->left, BaseType::Int);
    bool y = operand(a->right, BaseType::Int);
    if (!x || !y) return std::nullopt;
    return ExprSort{MType{BaseType::Int, false}};
  }
  const auto & m = std::get<Expr::SetLit>(e.node);
  std::optional<BaseType> k;
  bool good = true;
  for (const ExprP & x : m.elems) {
    auto s = type_expr(g, *x, errs);
    if (!s) {
      good = false;
      continue;
    }
    if (!is_scalar(*s)) {
      report(errs, x->span, TypeErrorKind::OperandMismatch, "multiset elements must be scalar", "scalar",
             sort_text(*s));
      good = false;
    } else if (k && *k != s->type.base) {
      report(errs, x->span, TypeErrorKind::HeterogeneousSet, "multiset elements have different types",
             to_string(*k), sort_text(*s));
      good = false;
    } else {
      k = s->type.base;
    }
  }
  if (!good) return std::nullopt;
  if (!k) return ExprSort{MType{BaseType::Int, true}, true};
  return ExprSort{MType{*k, true}};
}

bool type_pred(const TypeEnv & g, const Pred & p, TypeErrors & errs)
{
  if (std::holds_alternative<Pred::True>(p.node)) return true;
  if (auto * c = std::get_if<Pred::Cmp>(&p.node)) {
    auto a = type_expr(g, *c->left, errs);
    auto b = type_expr(g, *c->right, errs);
    if (!a || !b) return false;
    if (!is_scalar(*a) || !is_scalar(*b) || a->type != b->type) {
      report(errs, p.span, TypeErrorKind::OperandMismatch, "comparison between " + sort_text(*a) + " and " +
                                                               sort_text(*b));
      return false;
    }
    bool ordering = c->op != CmpOp::Eq && c->op != CmpOp::Ne;
    if (ordering && a->type.base != BaseType::Int && a->type.base != BaseType::String) {
      report(errs, p.span, TypeErrorKind::OrderingOnIdOrLoc, "ordering comparison on " + sort_text(*a),
             "Int or String", sort_text(*a));
      return false;
    }
    return true;
  }
  if (auto * m = std::get_if<Pred::Member>(&p.node)) {
    auto a = type_expr(g, *m->elem, errs);
    auto b = type_expr(g, *m->set, errs);
    if (!a || !b) return false;
    if (!is_scalar(*a) || !b->type.is_set || (!b->any_set && b->type.base != a->type.base)) {
      report(errs, p.span, TypeErrorKind::OperandMismatch,
             "membership of " + sort_text(*a) + " in " + sort_text(*b));
      return false;
    }
    return true;
  }
  if (auto * s = std::get_if<Pred::Subset>(&p.node)) {
    auto a = type_expr(g, *s->left, errs);
    auto b = type_expr(g, *s->right, errs);
    if (!a || !b) return false;
    bool sets = a->type.is_set && b->type.is_set;
    if (!sets || (!a->any_set && !b->any_set && a->type.base != b->type.base)) {
      report(errs, p.span, TypeErrorKind::OperandMismatch,
             "subset between " + sort_text(*a) + " and " + sort_text(*b));
      return false;
    }
    return true;
  }
  if (auto * n = std::get_if<Pred::Not>(&p.node)) return type_pred(g, *n->inner, errs);
  const auto & a = std::get<Pred::And>(p.node);
  bool l = type_pred(g, *a.left, errs);
  bool r = type_pred(g, *a.right, errs);
  return l && r;
}

std::optional<Schema> type_tuple(const TypeEnv & g, const Tuple & t, TypeErrors & errs)
{
  Schema out;
  bool good = true;
  for (const ExprP & e : t.items) {
    auto s = type_expr(g, *e, errs);
    if (!s) good = false;
    else out.push_back(s->type);
  }
  if (!good) return std::nullopt;
  return out;
}

bool type_tuple_against(const TypeEnv & g, const Tuple & t, const Schema & sk, TypeErrors & errs)
{
  if (t.items.size() != sk.size()) {
    report(errs, t.span, TypeErrorKind::TupleArity,
           "tuple has " + std::to_string(t.items.size()) + " components but the schema has " +
               std::to_string(sk.size()),
           to_string(sk));
    return false;
  }
  bool good = true;
  for (std::size_t i = 0; i < sk.size(); ++i) {
    auto s = type_expr(g, *t.items[i], errs);
    if (!s) {
      good = false;
    } else if (!fits(*s, sk[i])) {
      report(errs, t.items[i]->span, TypeErrorKind::TupleSort,
             "component " + std::to_string(i + 1) + " has type " + sort_text(*s), to_string(sk[i]),
             sort_text(*s));
      good = false;
    }
  }
  return good;
}

std::optional<Bindings> type_template(const Schema & sk, const Template & t, TypeErrors & errs)
{
  if (t.fields.size() != sk.size()) {
    report(errs, t.span, TypeErrorKind::TemplateArity,
           "template has " + std::to_string(t.fields.size()) + " fields but the schema has " +
               std::to_string(sk.size()),
           to_string(sk));
    return std::nullopt;
  }
  Bindings out;
  bool good = true;
  for (std::size_t i = 0; i < sk.size(); ++i) {
    const Binder & b = t.fields[i];
    if (b.is_loc != is_loc(sk[i])) {
      report(errs, b.span, TypeErrorKind::TemplateSort,
             std::string(b.is_loc ? "!@" : "!") + b.name + " cannot bind a value of type " + to_string(sk[i]));
      good = false;
      continue;
    }
    out.emplace_back(b.name, SType::of_sort(sk[i]));
  }
  if (!good) return std::nullopt;
  return out;
}

std::optional<Schema> type_table(const TypeEnv & g, const TypeContext & cx, const TableRef & r, TypeErrors & errs)
{
  if (auto * b = std::get_if<TableRef::ByName>(&r.node)) {
    bool l = type_loc(g, b->loc, errs);
    auto sk = lookup_nabla(cx, b->tid, r.span, errs);
    if (!l || !sk) return std::nullopt;
    return sk;
  }
  if (auto * v = std::get_if<TableRef::ByVar>(&r.node)) {
    const SType * t = g.lookup(v->name);
    if (!t) {
      report(errs, r.span, TypeErrorKind::UnboundVariable, "unbound table variable '" + v->name + "'");
      return std::nullopt;
    }
    if (t->kind != SType::Kind::TableSchema) {
      report(errs, r.span, TypeErrorKind::VariableKind, "'" + v->name + "' is not a table variable", "schema",
             to_string(*t));
      return std::nullopt;
    }
    return t->schema;
  }
  const Table & tb = *std::get<TableRef::Literal>(r.node).table;
  bool good = type_rows(tb, r.span, errs);
  if (tb.iface.tid) {
    auto sk = lookup_nabla(cx, *tb.iface.tid, r.span, errs);
    if (!sk) return std::nullopt;
    if (*sk != tb.iface.schema) {
      report(errs, r.span, TypeErrorKind::TableSchema, "table '" + *tb.iface.tid + "' does not have its declared schema",
             to_string(*sk), to_string(tb.iface.schema));
      return std::nullopt;
    }
  }
  if (!good) return std::nullopt;
  return tb.iface.schema;
}

namespace {

// Runs `body` with the template's bindings in scope.
template <class F>
bool with_template(const TypeEnv & g, const Bindings & b, F body)
{
  TypeEnv & env = const_cast<TypeEnv &>(g);
  std::size_t m = env.mark();
  bind_all(env, b);
  bool r = body(env);
  env.restore(m);
  return r;
}

}  // namespace

std::optional<Bindings> type_action(const TypeEnv & g, const TypeContext & cx, const Action & a, TypeErrors & errs)
{
  return std::visit(
      [&](const auto & n) -> std::optional<Bindings> {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Action::Insert>) {
          bool l = type_loc(g, n.loc, errs);
          auto sk = lookup_nabla(cx, n.tid, a.span, errs);
          bool t = sk && type_tuple_against(g, n.tuple, *sk, errs);
          if (!l || !t) return std::nullopt;
          return Bindings{};
        } else if constexpr (std::is_same_v<N, Action::Delete> || std::is_same_v<N, Action::Update>) {
          bool l = type_loc(g, n.loc, errs);
          auto sk = lookup_nabla(cx, n.tid, a.span, errs);
          if (!sk) return std::nullopt;
          auto b = type_template(*sk, n.tmpl, errs);
          if (!b) return std::nullopt;
          bool body = with_template(g, *b, [&](const TypeEnv & e) {
            bool p = type_pred(e, *n.pred, errs);
            if constexpr (std::is_same_v<N, Action::Update>) {
              bool t = type_tuple_against(e, n.tuple, *sk, errs);
              return p && t;
            }
            return p;
          });
          if (!l || !body) return std::nullopt;
          return Bindings{};
        } else if constexpr (std::is_same_v<N, Action::Select>) {
          Schema joined;
          bool good = true;
          for (const TableRef & r : n.tables) {
            auto sk = type_table(g, cx, r, errs);
            if (!sk) good = false;
            else joined.insert(joined.end(), sk->begin(), sk->end());
          }
          if (!good) return std::nullopt;
          auto b = type_template(joined, n.tmpl, errs);
          if (!b) return std::nullopt;
          std::optional<Schema> out;
          bool body = with_template(g, *b, [&](const TypeEnv & e) {
            bool p = type_pred(e, *n.pred, errs);
            out = type_tuple(e, n.tuple, errs);
            return p && out;
          });
          if (!body) return std::nullopt;
          return Bindings{{n.bind, SType::of_schema(*out)}};
        } else if constexpr (std::is_same_v<N, Action::Aggr>) {
          bool l = type_loc(g, n.loc, errs);
          auto sk = lookup_nabla(cx, n.tid, a.span, errs);
          if (!sk) return std::nullopt;
          auto b = type_template(*sk, n.tmpl, errs);
          bool p = b && with_template(g, *b, [&](const TypeEnv & e) { return type_pred(e, *n.pred, errs); });
          bool f = true;
          if (n.fn.kind != AggrFn::Kind::Count) {
            std::size_t i = n.fn.col;
            if (i == 0 || i > sk->size() || (*sk)[i - 1] != MType{BaseType::Int, false}) {
              report(errs, a.span, TypeErrorKind::AggrSignature,
                     render(n.fn) + " needs an Int column " + std::to_string(i) + " in " + to_string(*sk));
              f = false;
            }
          }
          auto res = type_template(aggr_result_schema(n.fn), n.result, errs);
          if (!l || !b || !p || !f || !res) return std::nullopt;
          return *res;
        } else if constexpr (std::is_same_v<N, Action::Create>) {
          bool l = type_loc(g, n.loc, errs);
          auto sk = lookup_nabla(cx, n.tid, a.span, errs);
          if (sk && *sk != n.schema) {
            report(errs, a.span, TypeErrorKind::CreateSchema, "create declares a schema different from '" + n.tid + "'",
                   to_string(*sk), to_string(n.schema));
            return std::nullopt;
          }
          if (!l || !sk) return std::nullopt;
          return Bindings{};
        } else if constexpr (std::is_same_v<N, Action::Drop>) {
          if (!type_loc(g, n.loc, errs)) return std::nullopt;
          return Bindings{};
        } else {
          bool l = type_loc(g, n.loc, errs);
          TypeEnv & env = const_cast<TypeEnv &>(g);
          bool p = type_process(env, cx, *n.process, errs);
          if (!l || !p) return std::nullopt;
          return Bindings{};
        }
      },
      a.node);
}

bool type_process(TypeEnv & g, const TypeContext & cx, const Process & p, TypeErrors & errs)
{
  std::size_t outer = g.mark();
  bool good = true;
  const Process * cur = &p;
  while (auto * pre = std::get_if<Process::Prefix>(&cur->node)) {
    auto b = type_action(g, cx, pre->action, errs);
    if (!b) {
      good = false;
      // The continuation would only repeat errors about the missing bindings.
      bool exports = std::holds_alternative<Action::Select>(pre->action.node) ||
                     std::holds_alternative<Action::Aggr>(pre->action.node);
      if (exports) {
        g.restore(outer);
        return false;
      }
    } else {
      bind_all(g, *b);
    }
    cur = pre->cont.get();
  }
  if (auto * c = std::get_if<Process::Call>(&cur->node)) {
    const Procedure * proc = cx.sys ? cx.sys->find_procedure(c->name) : nullptr;
    if (!proc) {
      report(errs, cur->span, TypeErrorKind::UnknownProcedure, "unknown procedure '" + c->name + "'");
      good = false;
    } else if (proc->params.size() != c->args.size()) {
      report(errs, cur->span, TypeErrorKind::ArgumentCount,
             c->name + " expects " + std::to_string(proc->params.size()) + " arguments");
      good = false;
    } else {
      for (std::size_t i = 0; i < c->args.size(); ++i) {
        auto s = type_expr(g, *c->args[i], errs);
        if (!s) {
          good = false;
        } else if (!fits(*s, proc->params[i].type)) {
          report(errs, c->args[i]->span, TypeErrorKind::ArgumentType,
                 "argument " + std::to_string(i + 1) + " of " + c->name + " has type " + sort_text(*s),
                 to_string(proc->params[i].type), sort_text(*s));
          good = false;
        }
      }
    }
  } else if (auto * f = std::get_if<Process::Foreach>(&cur->node)) {
    auto sk = type_table(g, cx, f->table, errs);
    if (!sk) {
      good = false;
    } else {
      if (!check_order(f->order, *sk, cur->span, errs)) good = false;
      auto b = type_template(*sk, f->tmpl, errs);
      if (!b) {
        good = false;
      } else {
        std::size_t m = g.mark();
        bind_all(g, *b);
        if (!type_pred(g, *f->pred, errs)) good = false;
        if (!type_process(g, cx, *f->body, errs)) good = false;
        g.restore(m);
      }
    }
  } else if (auto * s = std::get_if<Process::Seq>(&cur->node)) {
    if (!type_process(g, cx, *s->first, errs)) good = false;
    if (!type_process(g, cx, *s->second, errs)) good = false;
  }
  g.restore(outer);
  return good;
}

bool type_component(TypeEnv & g, const TypeContext & cx, const Component & c, TypeErrors & errs)
{
  if (auto * p = std::get_if<Component::Proc>(&c.node)) return type_process(g, cx, *p->process, errs);
  if (auto * t = std::get_if<Component::Tab>(&c.node)) {
    const Table & tb = *t->table;
    if (!tb.iface.tid) {
      report(errs, c.span, TypeErrorKind::TableSchema, "an anonymous table cannot stand as a component");
      return false;
    }
    bool rows = type_rows(tb, c.span, errs);
    auto sk = lookup_nabla(cx, *tb.iface.tid, c.span, errs);
    if (!sk) return false;
    if (*sk != tb.iface.schema) {
      report(errs, c.span, TypeErrorKind::TableSchema, "table '" + *tb.iface.tid + "' does not have its declared schema",
             to_string(*sk), to_string(tb.iface.schema));
      return false;
    }
    return rows;
  }
  const auto & par = std::get<Component::Par>(c.node);
  bool l = type_component(g, cx, *par.left, errs);
  bool r = type_component(g, cx, *par.right, errs);
  return l && r;
}

bool type_net(TypeEnv & g, const TypeContext & cx, const Net & n, TypeErrors & errs)
{
  std::vector<const Net *> stack{&n};
  bool good = true;
  while (!stack.empty()) {
    const Net * cur = stack.back();
    stack.pop_back();
    if (auto * par = std::get_if<Net::Par>(&cur->node)) {
      stack.push_back(par->right.get());
      stack.push_back(par->left.get());
    } else if (auto * r = std::get_if<Net::Restrict>(&cur->node)) {
      stack.push_back(r->inner.get());
    } else if (auto * nd = std::get_if<Net::Node>(&cur->node)) {
      if (!type_component(g, cx, *nd->comp, errs)) good = false;
    } else if (std::holds_alternative<Net::Err>(cur->node)) {
      report(errs, cur->span, TypeErrorKind::ErrNet, "the net ERR has no type");
      good = false;
    }
  }
  return good;
}

namespace {

class SchemaCollector {
 public:
  SchemaCollector(SchemaMap & m, TypeErrors & errs) : m_(m), errs_(errs) {}

  void declare(const std::string & tid, const Schema & sk, Span s)
  {
    auto [it, fresh] = m_.emplace(tid, sk);
    if (!fresh && it->second != sk)
      report(errs_, s, TypeErrorKind::SchemaConflict, "table '" + tid + "' is used with two schemas",
             to_string(it->second), to_string(sk));
  }

  void table(const Table & t, Span s)
  {
    if (t.iface.tid) declare(*t.iface.tid, t.iface.schema, s);
  }

  void table_ref(const TableRef & r)
  {
    if (auto * l = std::get_if<TableRef::Literal>(&r.node)) table(*l->table, r.span);
  }

  void process(const Process & p)
  {
    std::vector<const Process *> stack{&p};
    while (!stack.empty()) {
      const Process * cur = stack.back();
      stack.pop_back();
      if (auto * pre = std::get_if<Process::Prefix>(&cur->node)) {
        const Action & a = pre->action;
        if (auto * c = std::get_if<Action::Create>(&a.node)) declare(c->tid, c->schema, a.span);
        else if (auto * s = std::get_if<Action::Select>(&a.node))
          for (const TableRef & r : s->tables) table_ref(r);
        else if (auto * e = std::get_if<Action::Eval>(&a.node)) stack.push_back(e->process.get());
        stack.push_back(pre->cont.get());
      } else if (auto * f = std::get_if<Process::Foreach>(&cur->node)) {
        table_ref(f->table);
        stack.push_back(f->body.get());
      } else if (auto * s = std::get_if<Process::Seq>(&cur->node)) {
        stack.push_back(s->second.get());
        stack.push_back(s->first.get());
      }
    }
  }

  void component(const Component & c)
  {
    if (auto * p = std::get_if<Component::Proc>(&c.node)) process(*p->process);
    else if (auto * t = std::get_if<Component::Tab>(&c.node)) table(*t->table, c.span);
    else {
      const auto & par = std::get<Component::Par>(c.node);
      component(*par.left);
      component(*par.right);
    }
  }

  void net(const Net & n)
  {
    std::vector<const Net *> stack{&n};
    while (!stack.empty()) {
      const Net * cur = stack.back();
      stack.pop_back();
      if (auto * par = std::get_if<Net::Par>(&cur->node)) {
        stack.push_back(par->right.get());
        stack.push_back(par->left.get());
      } else if (auto * r = std::get_if<Net::Restrict>(&cur->node)) {
        stack.push_back(r->inner.get());
      } else if (auto * nd = std::get_if<Net::Node>(&cur->node)) {
        component(*nd->comp);
      }
    }
  }

 private:
  SchemaMap & m_;
  TypeErrors & errs_;
};

}  // namespace

SchemaMap build_schema_map(const System & sys, TypeErrors & errs)
{
  SchemaMap m;
  SchemaCollector c(m, errs);
  for (const SchemaDecl & d : sys.schemas) c.declare(d.tid, d.schema, d.span);
  for (const Procedure & p : sys.procedures) c.process(*p.body);
  if (sys.net) c.net(*sys.net);
  return m;
}

TypeErrors check_system(const System & sys)
{
  TypeErrors errs;
  SchemaMap nabla = build_schema_map(sys, errs);
  TypeContext cx{&nabla, &sys};
  for (const Procedure & p : sys.procedures) {
    TypeEnv g;
    for (const Param & q : p.params) g.bind(q.name, SType::of_sort(q.type));
    type_process(g, cx, *p.body, errs);
  }
  if (sys.net) {
    TypeEnv g;
    type_net(g, cx, *sys.net, errs);
    if (errs.empty()) {
      auto fv = free_vars(*sys.net);
      if (!fv.empty()) report(errs, sys.net->span, TypeErrorKind::OpenSystem, "the net has free variable '" + *fv.begin() + "'");
    }
  }
  return errs;
}

TypeErrors check_net(const System & sys, const SchemaMap & nabla, const Net & n)
{
  TypeErrors errs;
  TypeContext cx{&nabla, &sys};
  TypeEnv g;
  type_net(g, cx, n, errs);
  return errs;
}

nlohmann::json errors_json(const TypeErrors & errs)
{
  nlohmann::json arr = nlohmann::json::array();
  for (const TypeError & e : errs) {
    nlohmann::json j = {{"span", {{"line", e.span.line}, {"col", e.span.col}}},
                        {"kind", to_string(e.kind)},
                        {"message", e.message}};
    if (!e.expected.empty()) j["expected"] = e.expected;
    if (!e.found.empty()) j["found"] = e.found;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace kdb

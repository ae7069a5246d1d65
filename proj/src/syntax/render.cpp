#include "kdb/syntax/render.hpp"

namespace kdb {

namespace {

// Binding strength of expression forms; literals and variables are atoms.
int prec(const Expr & e)
{
  if (std::holds_alternative<Expr::Concat>(e.node)) return 1;
  if (auto * a = std::get_if<Expr::Arith>(&e.node))
    return a->op == ArithOp::Add || a->op == ArithOp::Sub ? 2 : 3;
  return 4;
}

void put_expr(std::string & out, const Expr & e);

// Left operands need parentheses when looser, right ones also when equal,
// which keeps left-associative trees stable under re-parsing.
void put_operand(std::string & out, const Expr & e, int parent, bool right)
{
  int p = prec(e);
  bool paren = p < parent || (right && p == parent);
  if (paren) out += '(';
  put_expr(out, e);
  if (paren) out += ')';
}

const char * arith_sym(ArithOp op)
{
  switch (op) {
    case ArithOp::Add: return " + ";
    case ArithOp::Sub: return " - ";
    case ArithOp::Mul: return " * ";
    case ArithOp::Div: return " / ";
  }
  return " ? ";
}

void put_expr(std::string & out, const Expr & e)
{
  if (auto * l = std::get_if<Expr::Lit>(&e.node)) {
    out += render_value(l->value);
  } else if (auto * v = std::get_if<Expr::Var>(&e.node)) {
    out += v->name;
  } else if (auto * c = std::get_if<Expr::Concat>(&e.node)) {
    put_operand(out, *c->left, 1, false);
    out += " ++ ";
    put_operand(out, *c->right, 1, true);
  } else if (auto * a = std::get_if<Expr::Arith>(&e.node)) {
    int p = prec(e);
    put_operand(out, *a->left, p, false);
    out += arith_sym(a->op);
    put_operand(out, *a->right, p, true);
  } else {
    const auto & m = std::get<Expr::SetLit>(e.node);
    out += '{';
    for (std::size_t i = 0; i < m.elems.size(); ++i) {
      if (i) out += ", ";
      put_expr(out, *m.elems[i]);
    }
    out += '}';
  }
}

const char * cmp_sym(CmpOp op)
{
  switch (op) {
    case CmpOp::Eq: return " = ";
    case CmpOp::Ne: return " != ";
    case CmpOp::Lt: return " < ";
    case CmpOp::Le: return " <= ";
    case CmpOp::Gt: return " > ";
    case CmpOp::Ge: return " >= ";
  }
  return " ? ";
}

void put_pred(std::string & out, const Pred & p)
{
  std::visit(
      [&](const auto & n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Pred::True>) {
          out += "true";
        } else if constexpr (std::is_same_v<N, Pred::Cmp>) {
          put_expr(out, *n.left);
          out += cmp_sym(n.op);
          put_expr(out, *n.right);
        } else if constexpr (std::is_same_v<N, Pred::Member>) {
          put_expr(out, *n.elem);
          out += " in ";
          put_expr(out, *n.set);
        } else if constexpr (std::is_same_v<N, Pred::Subset>) {
          put_expr(out, *n.left);
          out += " subset ";
          put_expr(out, *n.right);
        } else if constexpr (std::is_same_v<N, Pred::Not>) {
          out += "not ";
          bool paren = std::holds_alternative<Pred::And>(n.inner->node);
          if (paren) out += '(';
          put_pred(out, *n.inner);
          if (paren) out += ')';
        } else {
          put_pred(out, *n.left);
          out += " && ";
          bool paren = std::holds_alternative<Pred::And>(n.right->node);
          if (paren) out += '(';
          put_pred(out, *n.right);
          if (paren) out += ')';
        }
      },
      p.node);
}

std::string schema_text(const Schema & sk) { return to_string(sk); }

void put_process(std::string & out, const Process & p);

// Prefix-level position: a sequence must be parenthesized.
void put_pref(std::string & out, const Process & p)
{
  bool paren = std::holds_alternative<Process::Seq>(p.node);
  if (paren) out += '(';
  put_process(out, p);
  if (paren) out += ')';
}

std::string target(const std::string & tid, const LocRef & l) { return tid + "@" + render(l); }

void put_process(std::string & out, const Process & p)
{
  // Prefix chains are walked iteratively so long programs do not recurse.
  const Process * cur = &p;
  while (auto * pre = std::get_if<Process::Prefix>(&cur->node)) {
    out += render(pre->action);
    out += '.';
    if (std::holds_alternative<Process::Seq>(pre->cont->node)) {
      put_pref(out, *pre->cont);
      return;
    }
    cur = pre->cont.get();
  }
  std::visit(
      [&](const auto & n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Process::Nil>) {
          out += "nil";
        } else if constexpr (std::is_same_v<N, Process::Call>) {
          out += n.name;
          out += '(';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            put_expr(out, *n.args[i]);
          }
          out += ')';
        } else if constexpr (std::is_same_v<N, Process::Foreach>) {
          out += "foreach(" + render(n.table) + ", " + render(n.tmpl) + ", " + render(*n.pred) + ", " +
                 render(n.order) + ") : ";
          put_pref(out, *n.body);
        } else if constexpr (std::is_same_v<N, Process::Seq>) {
          put_process(out, *n.first);
          out += " ; ";
          put_pref(out, *n.second);
        }
      },
      cur->node);
}

void put_component(std::string & out, const Component & c)
{
  if (auto * p = std::get_if<Component::Proc>(&c.node)) {
    put_process(out, *p->process);
  } else if (auto * t = std::get_if<Component::Tab>(&c.node)) {
    out += render(*t->table);
  } else {
    const auto & par = std::get<Component::Par>(c.node);
    put_component(out, *par.left);
    out += " | ";
    bool paren = std::holds_alternative<Component::Par>(par.right->node);
    if (paren) out += '(';
    put_component(out, *par.right);
    if (paren) out += ')';
  }
}

void put_net(std::string & out, const Net & n);

void put_net_atom(std::string & out, const Net & n)
{
  bool paren = std::holds_alternative<Net::Par>(n.node);
  if (paren) out += '(';
  put_net(out, n);
  if (paren) out += ')';
}

void put_net(std::string & out, const Net & n)
{
  std::visit(
      [&](const auto & x) {
        using N = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<N, Net::Nil>) {
          out += "nil";
        } else if constexpr (std::is_same_v<N, Net::Err>) {
          out += "ERR";
        } else if constexpr (std::is_same_v<N, Net::Par>) {
          put_net(out, *x.left);
          out += "\n|| ";
          put_net_atom(out, *x.right);
        } else if constexpr (std::is_same_v<N, Net::Restrict>) {
          out += "(new $" + x.loc + ") ";
          put_net_atom(out, *x.inner);
        } else {
          out += "$" + x.loc + " :: ";
          put_component(out, *x.comp);
        }
      },
      n.node);
}

}  // namespace

std::string render(const Expr & e)
{
  std::string out;
  put_expr(out, e);
  return out;
}

std::string render(const Pred & p)
{
  std::string out;
  put_pred(out, p);
  return out;
}

std::string render(const Tuple & t)
{
  std::string out = "(";
  for (std::size_t i = 0; i < t.items.size(); ++i) {
    if (i) out += ", ";
    put_expr(out, *t.items[i]);
  }
  return out + ")";
}

std::string render(const Template & t)
{
  std::string out = "(";
  for (std::size_t i = 0; i < t.fields.size(); ++i) {
    if (i) out += ", ";
    out += t.fields[i].is_loc ? "!@" : "!";
    out += t.fields[i].name;
  }
  return out + ")";
}

std::string render(const LocRef & l) { return l.is_var ? l.name : "$" + l.name; }

std::string render(const Table & t)
{
  std::string out = "table " + t.iface.tid.value_or("_") + " : " + schema_text(t.iface.schema) + " = {";
  bool first = true;
  for (const auto & [row, n] : t.rows) {
    std::string r = render_tuple(row);
    for (std::uint64_t k = 0; k < n; ++k) {
      if (!first) out += ", ";
      first = false;
      out += r;
    }
  }
  return out + "}";
}

std::string render(const TableRef & r)
{
  if (auto * b = std::get_if<TableRef::ByName>(&r.node)) return target(b->tid, b->loc);
  if (auto * v = std::get_if<TableRef::ByVar>(&r.node)) return v->name;
  return render(*std::get<TableRef::Literal>(r.node).table);
}

std::string render(const AggrFn & f)
{
  switch (f.kind) {
    case AggrFn::Kind::Count: return "count";
    case AggrFn::Kind::Sum: return "sum(" + std::to_string(f.col) + ")";
    case AggrFn::Kind::Avg: return "avg(" + std::to_string(f.col) + ")";
    case AggrFn::Kind::Min: return "min(" + std::to_string(f.col) + ")";
    case AggrFn::Kind::Max: return "max(" + std::to_string(f.col) + ")";
  }
  return "?";
}

std::string render(const OrderSpec & o)
{
  switch (o.kind) {
    case OrderSpec::Kind::Unordered: return "{}";
    case OrderSpec::Kind::Lex: return "lex";
    case OrderSpec::Kind::Asc: return "asc(" + std::to_string(o.col) + ")";
    case OrderSpec::Kind::Desc: return "desc(" + std::to_string(o.col) + ")";
  }
  return "?";
}

std::string render(const Action & a)
{
  return std::visit(
      [](const auto & n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Action::Insert>) {
          return "insert(" + target(n.tid, n.loc) + ", " + render(n.tuple) + ")";
        } else if constexpr (std::is_same_v<N, Action::Delete>) {
          return "delete(" + target(n.tid, n.loc) + ", " + render(n.tmpl) + ", " + render(*n.pred) + ")";
        } else if constexpr (std::is_same_v<N, Action::Select>) {
          std::string tabs;
          if (n.tables.size() == 1) {
            tabs = render(n.tables[0]);
          } else {
            tabs = "[";
            for (std::size_t i = 0; i < n.tables.size(); ++i) {
              if (i) tabs += ", ";
              tabs += render(n.tables[i]);
            }
            tabs += "]";
          }
          return "select(" + tabs + ", " + render(n.tmpl) + ", " + render(*n.pred) + ", " + render(n.tuple) +
                 ", !" + n.bind + ")";
        } else if constexpr (std::is_same_v<N, Action::Update>) {
          return "update(" + target(n.tid, n.loc) + ", " + render(n.tmpl) + ", " + render(*n.pred) + ", " +
                 render(n.tuple) + ")";
        } else if constexpr (std::is_same_v<N, Action::Aggr>) {
          return "aggr(" + target(n.tid, n.loc) + ", " + render(n.tmpl) + ", " + render(*n.pred) + ", " +
                 render(n.fn) + ", " + render(n.result) + ")";
        } else if constexpr (std::is_same_v<N, Action::Create>) {
          return "create(" + target(n.tid, n.loc) + ", " + schema_text(n.schema) + ")";
        } else if constexpr (std::is_same_v<N, Action::Drop>) {
          return "drop(" + target(n.tid, n.loc) + ")";
        } else {
          return "eval(" + render(*n.process) + ")@" + render(n.loc);
        }
      },
      a.node);
}

std::string render(const Process & p)
{
  std::string out;
  put_process(out, p);
  return out;
}

std::string render(const Component & c)
{
  std::string out;
  put_component(out, c);
  return out;
}

std::string render(const Net & n)
{
  std::string out;
  put_net(out, n);
  return out;
}

std::string render(const System & s)
{
  std::string out;
  for (const SchemaDecl & d : s.schemas) out += "schema " + d.tid + " : " + schema_text(d.schema) + "\n";
  if (!s.procedures.empty()) {
    out += "let\n";
    for (const Procedure & p : s.procedures) {
      out += "  " + p.name + "(";
      for (std::size_t i = 0; i < p.params.size(); ++i) {
        if (i) out += ", ";
        out += p.params[i].name + ": " + to_string(p.params[i].type);
      }
      out += ") :=\n    " + render(*p.body) + "\n";
    }
    out += "in\n";
  }
  out += render(*s.net);
  out += "\n";
  return out;
}

}  // namespace kdb

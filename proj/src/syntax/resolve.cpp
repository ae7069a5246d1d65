#include "kdb/syntax/resolve.hpp"

#include <unordered_map>

#include "kdb/syntax/parser.hpp"

namespace kdb {

namespace {

enum class Kind { Data, Loc, Table };

class Resolver {
 public:
  Resolver(std::unordered_set<std::string> names, const System * sys)
      : used_(std::move(names)), sys_(sys)
  {
  }

  System system(System raw)
  {
    System out;
    out.schemas = std::move(raw.schemas);
    std::unordered_set<std::string> seen;
    for (const Procedure & p : raw.procedures) {
      if (!seen.insert(p.name).second)
        throw ParseError(p.span.line, p.span.col, "procedure '" + p.name + "' is defined twice");
    }
    for (const Procedure & p : raw.procedures) {
      Procedure q;
      q.name = p.name;
      q.span = p.span;
      std::size_t m = mark();
      std::unordered_set<std::string> param_names;
      for (const Param & prm : p.params) {
        if (!param_names.insert(prm.name).second)
          throw ParseError(prm.span.line, prm.span.col, "parameter '" + prm.name + "' declared twice");
        Param r = prm;
        r.name = bind(prm.name, prm.type.base == BaseType::Loc && !prm.type.is_set ? Kind::Loc : Kind::Data);
        q.params.push_back(r);
      }
      q.body = process(p.body);
      restore(m);
      out.procedures.push_back(std::move(q));
    }
    out.net = net(raw.net);
    return out;
  }

  ProcP process(const ProcP & p)
  {
    Process out;
    out.span = p->span;
    std::visit([&](const auto & n) { out.node = process_node(n, p->span); }, p->node);
    return out;
  }

  NetP net(const NetP & n)
  {
    Net out;
    out.span = n->span;
    if (auto * par = std::get_if<Net::Par>(&n->node)) {
      out.node = Net::Par{net(par->left), net(par->right)};
    } else if (auto * r = std::get_if<Net::Restrict>(&n->node)) {
      std::string fresh_name = r->loc;
      if (!bound_locs_.insert(r->loc).second) fresh_name = fresh(r->loc);
      bound_locs_.insert(fresh_name);
      loc_scope_[r->loc].push_back(fresh_name);
      NetP inner = net(r->inner);
      loc_scope_[r->loc].pop_back();
      out.node = Net::Restrict{fresh_name, inner};
    } else if (auto * nd = std::get_if<Net::Node>(&n->node)) {
      out.node = Net::Node{loc_name(nd->loc), component(nd->comp)};
    } else {
      out.node = n->node;
    }
    return out;
  }

 private:
  struct Entry {
    std::string renamed;
    Kind kind;
  };

  // -- scopes --------------------------------------------------------------

  std::string fresh(const std::string & base)
  {
    for (std::size_t k = 1;; ++k) {
      std::string c = base + "_" + std::to_string(k);
      if (!used_.count(c)) {
        used_.insert(c);
        return c;
      }
    }
  }

  std::string bind(const std::string & name, Kind k)
  {
    std::string n = name;
    if (!bound_.insert(name).second) {
      n = fresh(name);
      bound_.insert(n);
    }
    scope_[name].push_back({n, k});
    trail_.push_back(name);
    return n;
  }

  std::size_t mark() const { return trail_.size(); }

  void restore(std::size_t m)
  {
    while (trail_.size() > m) {
      auto it = scope_.find(trail_.back());
      it->second.pop_back();
      trail_.pop_back();
    }
  }

  const Entry * lookup(const std::string & name) const
  {
    auto it = scope_.find(name);
    if (it == scope_.end() || it->second.empty()) return nullptr;
    return &it->second.back();
  }

  std::string loc_name(const std::string & l) const
  {
    auto it = loc_scope_.find(l);
    if (it == loc_scope_.end() || it->second.empty()) return l;
    return it->second.back();
  }

  bool renaming_locs() const
  {
    for (const auto & [name, stack] : loc_scope_)
      if (!stack.empty() && stack.back() != name) return true;
    return false;
  }

  // -- leaves --------------------------------------------------------------

  Value value(const Value & v) const
  {
    if (auto * l = std::get_if<LocV>(&v)) return LocV{loc_name(l->name)};
    if (auto * s = std::get_if<SetV>(&v)) {
      if (set_elem_kind(*s) != BaseType::Loc) return v;
      SetV out;
      out.elem = s->elem;
      for (const auto & [e, n] : s->items) out.items.add(*to_scalar(value(to_value(e))), n);
      return out;
    }
    return v;
  }

  LocRef loc_ref(const LocRef & r) const
  {
    LocRef out = r;
    if (!r.is_var) {
      out.name = loc_name(r.name);
    } else if (const Entry * e = lookup(r.name)) {
      out.name = e->renamed;
    }
    return out;
  }

  ExprP expr(const ExprP & e)
  {
    Expr out;
    out.span = e->span;
    if (auto * l = std::get_if<Expr::Lit>(&e->node)) {
      out.node = Expr::Lit{value(l->value)};
    } else if (auto * v = std::get_if<Expr::Var>(&e->node)) {
      const Entry * b = lookup(v->name);
      if (b) out.node = Expr::Var{b->renamed, b->kind == Kind::Loc};
      else out.node = *v;
    } else if (auto * c = std::get_if<Expr::Concat>(&e->node)) {
      out.node = Expr::Concat{expr(c->left), expr(c->right)};
    } else if (auto * a = std::get_if<Expr::Arith>(&e->node)) {
      out.node = Expr::Arith{a->op, expr(a->left), expr(a->right)};
    } else {
      Expr::SetLit m;
      for (const ExprP & x : std::get<Expr::SetLit>(e->node).elems) m.elems.push_back(expr(x));
      out.node = std::move(m);
    }
    return out;
  }

  PredP pred(const PredP & p)
  {
    Pred out;
    out.span = p->span;
    std::visit(
        [&](const auto & n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Pred::True>) out.node = n;
          else if constexpr (std::is_same_v<N, Pred::Cmp>) out.node = Pred::Cmp{n.op, expr(n.left), expr(n.right)};
          else if constexpr (std::is_same_v<N, Pred::Member>) out.node = Pred::Member{expr(n.elem), expr(n.set)};
          else if constexpr (std::is_same_v<N, Pred::Subset>) out.node = Pred::Subset{expr(n.left), expr(n.right)};
          else if constexpr (std::is_same_v<N, Pred::Not>) out.node = Pred::Not{pred(n.inner)};
          else out.node = Pred::And{pred(n.left), pred(n.right)};
        },
        p->node);
    return out;
  }

  Tuple tuple(const Tuple & t)
  {
    Tuple out;
    out.span = t.span;
    for (const ExprP & e : t.items) out.items.push_back(expr(e));
    return out;
  }

  Template templ(const Template & t)
  {
    Template out = t;
    for (Binder & b : out.fields) b.name = bind(b.name, b.is_loc ? Kind::Loc : Kind::Data);
    return out;
  }

  Shared<Table> table(const Shared<Table> & t) const
  {
    if (!renaming_locs()) return t;
    Table out;
    out.iface = t->iface;
    for (const auto & [row, n] : t->rows) {
      ValueTuple r;
      for (const Value & v : row) r.push_back(value(v));
      out.rows.add(r, n);
    }
    return Shared<Table>(std::move(out));
  }

  TableRef table_ref(const TableRef & r)
  {
    TableRef out;
    out.span = r.span;
    if (auto * b = std::get_if<TableRef::ByName>(&r.node)) {
      out.node = TableRef::ByName{b->tid, loc_ref(b->loc)};
    } else if (auto * v = std::get_if<TableRef::ByVar>(&r.node)) {
      const Entry * e = lookup(v->name);
      out.node = TableRef::ByVar{e ? e->renamed : v->name};
    } else {
      out.node = TableRef::Literal{table(std::get<TableRef::Literal>(r.node).table)};
    }
    return out;
  }

  CompP component(const CompP & c)
  {
    Component out;
    out.span = c->span;
    if (auto * p = std::get_if<Component::Proc>(&c->node)) {
      out.node = Component::Proc{process(p->process)};
    } else if (auto * t = std::get_if<Component::Tab>(&c->node)) {
      out.node = Component::Tab{table(t->table)};
    } else {
      auto & par = std::get<Component::Par>(c->node);
      out.node = Component::Par{component(par.left), component(par.right)};
    }
    return out;
  }

  // -- processes -----------------------------------------------------------

  Process::Nil process_node(const Process::Nil & n, const Span &) { return n; }

  Process::Seq process_node(const Process::Seq & s, const Span &)
  {
    ProcP first = process(s.first);
    return Process::Seq{first, process(s.second)};
  }

  Process::Call process_node(const Process::Call & c, const Span & sp)
  {
    if (sys_) {
      const Procedure * p = sys_->find_procedure(c.name);
      if (!p) throw ParseError(sp.line, sp.col, "call to undefined procedure '" + c.name + "'");
      if (p->params.size() != c.args.size())
        throw ParseError(sp.line, sp.col,
                         "procedure '" + c.name + "' expects " + std::to_string(p->params.size()) +
                             " argument(s), got " + std::to_string(c.args.size()));
    }
    Process::Call out{c.name, {}};
    for (const ExprP & e : c.args) out.args.push_back(expr(e));
    return out;
  }

  Process::Foreach process_node(const Process::Foreach & f, const Span &)
  {
    Process::Foreach out;
    out.table = table_ref(f.table);
    out.order = f.order;
    std::size_t m = mark();
    out.tmpl = templ(f.tmpl);
    out.pred = pred(f.pred);
    out.body = process(f.body);
    restore(m);
    return out;
  }

  Process::Prefix process_node(const Process::Prefix & p, const Span &)
  {
    Action a;
    a.span = p.action.span;
    std::size_t outer = mark();
    std::visit(
        [&](const auto & n) {
          using N = std::decay_t<decltype(n)>;
          N x = n;
          if constexpr (std::is_same_v<N, Action::Insert>) {
            x.loc = loc_ref(n.loc);
            x.tuple = tuple(n.tuple);
          } else if constexpr (std::is_same_v<N, Action::Delete>) {
            x.loc = loc_ref(n.loc);
            std::size_t m = mark();
            x.tmpl = templ(n.tmpl);
            x.pred = pred(n.pred);
            restore(m);
          } else if constexpr (std::is_same_v<N, Action::Select>) {
            x.tables.clear();
            for (const TableRef & r : n.tables) x.tables.push_back(table_ref(r));
            std::size_t m = mark();
            x.tmpl = templ(n.tmpl);
            x.pred = pred(n.pred);
            x.tuple = tuple(n.tuple);
            restore(m);
            x.bind = bind(n.bind, Kind::Table);
          } else if constexpr (std::is_same_v<N, Action::Update>) {
            x.loc = loc_ref(n.loc);
            std::size_t m = mark();
            x.tmpl = templ(n.tmpl);
            x.pred = pred(n.pred);
            x.tuple = tuple(n.tuple);
            restore(m);
          } else if constexpr (std::is_same_v<N, Action::Aggr>) {
            x.loc = loc_ref(n.loc);
            std::size_t m = mark();
            x.tmpl = templ(n.tmpl);
            x.pred = pred(n.pred);
            restore(m);
            x.result = templ(n.result);
          } else if constexpr (std::is_same_v<N, Action::Create> || std::is_same_v<N, Action::Drop>) {
            x.loc = loc_ref(n.loc);
          } else {
            x.process = process(n.process);
            x.loc = loc_ref(n.loc);
          }
          a.node = std::move(x);
        },
        p.action.node);
    ProcP cont = process(p.cont);
    restore(outer);
    return Process::Prefix{std::move(a), cont};
  }

  std::unordered_set<std::string> used_;
  std::unordered_set<std::string> bound_;
  std::unordered_set<std::string> bound_locs_;
  std::unordered_map<std::string, std::vector<Entry>> scope_;
  std::vector<std::string> trail_;
  std::unordered_map<std::string, std::vector<std::string>> loc_scope_;
  const System * sys_;
};

}  // namespace

System resolve_system(System raw, std::unordered_set<std::string> names, bool check_calls)
{
  System shape;
  if (check_calls) shape.procedures = raw.procedures;
  Resolver r(std::move(names), check_calls ? &shape : nullptr);
  return r.system(std::move(raw));
}

ProcP resolve_process(const ProcP & raw, std::unordered_set<std::string> names)
{
  Resolver r(std::move(names), nullptr);
  return r.process(raw);
}

}  // namespace kdb

#include "kdb/syntax/binding.hpp"

#include <unordered_map>

namespace kdb {

namespace {

// Walks a tree keeping the set of names in scope. Free variable references
// and binders are reported to the output sets; localities are collected in
// `locs` unless captured by a restriction.
class Walker {
 public:
  std::set<std::string> free;
  std::set<std::string> bound;
  std::set<std::string> locs;

  void expr(const Expr & e)
  {
    if (auto * l = std::get_if<Expr::Lit>(&e.node)) {
      value(l->value);
    } else if (auto * v = std::get_if<Expr::Var>(&e.node)) {
      use(v->name);
    } else if (auto * c = std::get_if<Expr::Concat>(&e.node)) {
      expr(*c->left);
      expr(*c->right);
    } else if (auto * a = std::get_if<Expr::Arith>(&e.node)) {
      expr(*a->left);
      expr(*a->right);
    } else {
      for (const ExprP & x : std::get<Expr::SetLit>(e.node).elems) expr(*x);
    }
  }

  void pred(const Pred & p)
  {
    std::visit(
        [&](const auto & n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Pred::Cmp> || std::is_same_v<N, Pred::Subset>) {
            expr(*n.left);
            expr(*n.right);
          } else if constexpr (std::is_same_v<N, Pred::Member>) {
            expr(*n.elem);
            expr(*n.set);
          } else if constexpr (std::is_same_v<N, Pred::Not>) {
            pred(*n.inner);
          } else if constexpr (std::is_same_v<N, Pred::And>) {
            pred(*n.left);
            pred(*n.right);
          }
        },
        p.node);
  }

  void tuple(const Tuple & t)
  {
    for (const ExprP & e : t.items) expr(*e);
  }

  void action(const Action & a, const Process * cont)
  {
    std::size_t outer = trail_.size();
    std::visit(
        [&](const auto & n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Action::Insert>) {
            loc(n.loc);
            tuple(n.tuple);
          } else if constexpr (std::is_same_v<N, Action::Delete>) {
            loc(n.loc);
            std::size_t m = trail_.size();
            templ(n.tmpl);
            pred(*n.pred);
            restore(m);
          } else if constexpr (std::is_same_v<N, Action::Select>) {
            for (const TableRef & r : n.tables) table_ref(r);
            std::size_t m = trail_.size();
            templ(n.tmpl);
            pred(*n.pred);
            tuple(n.tuple);
            restore(m);
            bind(n.bind);
          } else if constexpr (std::is_same_v<N, Action::Update>) {
            loc(n.loc);
            std::size_t m = trail_.size();
            templ(n.tmpl);
            pred(*n.pred);
            tuple(n.tuple);
            restore(m);
          } else if constexpr (std::is_same_v<N, Action::Aggr>) {
            loc(n.loc);
            std::size_t m = trail_.size();
            templ(n.tmpl);
            pred(*n.pred);
            restore(m);
            templ(n.result);
          } else if constexpr (std::is_same_v<N, Action::Create> || std::is_same_v<N, Action::Drop>) {
            loc(n.loc);
          } else {
            process(*n.process);
            loc(n.loc);
          }
        },
        a.node);
    if (cont) process(*cont);
    restore(outer);
  }

  void process(const Process & p)
  {
    const Process * cur = &p;
    std::size_t outer = trail_.size();
    // Prefix chains nest scopes; handle them in a loop.
    while (auto * pre = std::get_if<Process::Prefix>(&cur->node)) {
      action_head(pre->action);
      cur = pre->cont.get();
    }
    std::visit(
        [&](const auto & n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Process::Call>) {
            for (const ExprP & e : n.args) expr(*e);
          } else if constexpr (std::is_same_v<N, Process::Foreach>) {
            table_ref(n.table);
            std::size_t m = trail_.size();
            templ(n.tmpl);
            pred(*n.pred);
            process(*n.body);
            restore(m);
          } else if constexpr (std::is_same_v<N, Process::Seq>) {
            process(*n.first);
            process(*n.second);
          }
        },
        cur->node);
    restore(outer);
  }

  void component(const Component & c)
  {
    if (auto * p = std::get_if<Component::Proc>(&c.node)) {
      process(*p->process);
    } else if (auto * t = std::get_if<Component::Tab>(&c.node)) {
      table(*t->table);
    } else {
      auto & par = std::get<Component::Par>(c.node);
      component(*par.left);
      component(*par.right);
    }
  }

  void net(const Net & n)
  {
    if (auto * par = std::get_if<Net::Par>(&n.node)) {
      net(*par->left);
      net(*par->right);
    } else if (auto * r = std::get_if<Net::Restrict>(&n.node)) {
      ++restricted_[r->loc];
      net(*r->inner);
      --restricted_[r->loc];
    } else if (auto * nd = std::get_if<Net::Node>(&n.node)) {
      loc_name(nd->loc);
      component(*nd->comp);
    }
  }

 private:
  // Action of a prefix: binders that reach the continuation stay in scope
  // until the enclosing process() restores.
  void action_head(const Action & a)
  {
    if (auto * s = std::get_if<Action::Select>(&a.node)) {
      for (const TableRef & r : s->tables) table_ref(r);
      std::size_t m = trail_.size();
      templ(s->tmpl);
      pred(*s->pred);
      tuple(s->tuple);
      restore(m);
      bind(s->bind);
    } else if (auto * g = std::get_if<Action::Aggr>(&a.node)) {
      loc(g->loc);
      std::size_t m = trail_.size();
      templ(g->tmpl);
      pred(*g->pred);
      restore(m);
      templ(g->result);
    } else {
      action(a, nullptr);
    }
  }

  void use(const std::string & name)
  {
    auto it = scope_.find(name);
    if (it == scope_.end() || it->second == 0) free.insert(name);
  }

  void bind(const std::string & name)
  {
    bound.insert(name);
    ++scope_[name];
    trail_.push_back(name);
  }

  void restore(std::size_t m)
  {
    while (trail_.size() > m) {
      --scope_[trail_.back()];
      trail_.pop_back();
    }
  }

  void templ(const Template & t)
  {
    for (const Binder & b : t.fields) bind(b.name);
  }

  void loc(const LocRef & l)
  {
    if (l.is_var) use(l.name);
    else loc_name(l.name);
  }

  void loc_name(const std::string & l)
  {
    auto it = restricted_.find(l);
    if (it == restricted_.end() || it->second == 0) locs.insert(l);
  }

  void value(const Value & v)
  {
    if (auto * l = std::get_if<LocV>(&v)) {
      loc_name(l->name);
    } else if (auto * s = std::get_if<SetV>(&v)) {
      for (const auto & [e, n] : s->items)
        if (auto * l = std::get_if<LocV>(&e)) loc_name(l->name);
    }
  }

  void table(const Table & t)
  {
    for (const auto & [row, n] : t.rows)
      for (const Value & v : row) value(v);
  }

  void table_ref(const TableRef & r)
  {
    if (auto * b = std::get_if<TableRef::ByName>(&r.node)) loc(b->loc);
    else if (auto * v = std::get_if<TableRef::ByVar>(&r.node)) use(v->name);
    else table(*std::get<TableRef::Literal>(r.node).table);
  }

  std::unordered_map<std::string, int> scope_;
  std::vector<std::string> trail_;
  std::unordered_map<std::string, int> restricted_;
};

}  // namespace

std::set<std::string> free_vars(const Expr & e)
{
  Walker w;
  w.expr(e);
  return w.free;
}

std::set<std::string> free_vars(const Pred & p)
{
  Walker w;
  w.pred(p);
  return w.free;
}

std::set<std::string> free_vars(const Tuple & t)
{
  Walker w;
  w.tuple(t);
  return w.free;
}

std::set<std::string> free_vars(const Action & a)
{
  Walker w;
  w.action(a, nullptr);
  return w.free;
}

std::set<std::string> free_vars(const Process & p)
{
  Walker w;
  w.process(p);
  return w.free;
}

std::set<std::string> free_vars(const Net & n)
{
  Walker w;
  w.net(n);
  return w.free;
}

std::set<std::string> bound_vars(const Action & a)
{
  Walker w;
  w.action(a, nullptr);
  return w.bound;
}

std::set<std::string> bound_vars(const Process & p)
{
  Walker w;
  w.process(p);
  return w.bound;
}

std::set<std::string> bound_vars(const Net & n)
{
  Walker w;
  w.net(n);
  return w.bound;
}

bool is_closed(const Process & p) { return free_vars(p).empty(); }

std::set<std::string> free_locs(const Net & n)
{
  Walker w;
  w.net(n);
  return w.locs;
}

}  // namespace kdb

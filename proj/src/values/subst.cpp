#include "kdb/values/subst.hpp"

namespace kdb {

std::optional<Subst> match(const ValueTuple & et, const Template & t)
{
  if (et.size() != t.fields.size()) return std::nullopt;
  Subst s;
  for (std::size_t i = 0; i < et.size(); ++i) {
    bool is_loc = std::holds_alternative<LocV>(et[i]);
    if (is_loc != t.fields[i].is_loc) return std::nullopt;
    s.values[t.fields[i].name] = et[i];
  }
  return s;
}

namespace {

// Structural rewriter over processes. Subclasses decide what happens at
// variable occurrences, locality positions and values; binders are reported
// so that shadowing can be respected.
class Rewriter {
 public:
  virtual ~Rewriter() = default;

  ExprP expr(const ExprP & e)
  {
    if (auto * l = std::get_if<Expr::Lit>(&e->node)) {
      if (!touches_values()) return e;
      return Expr{Expr::Lit{value(l->value)}, e->span};
    }
    if (auto * v = std::get_if<Expr::Var>(&e->node)) {
      if (auto r = var(*v, e->span)) return *r;
      return e;
    }
    Expr out;
    out.span = e->span;
    if (auto * c = std::get_if<Expr::Concat>(&e->node)) {
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
    out.items.reserve(t.items.size());
    for (const ExprP & e : t.items) out.items.push_back(expr(e));
    return out;
  }

  TableRef table_ref(const TableRef & r)
  {
    TableRef out;
    out.span = r.span;
    if (auto * b = std::get_if<TableRef::ByName>(&r.node)) {
      out.node = TableRef::ByName{b->tid, loc(b->loc)};
    } else if (auto * v = std::get_if<TableRef::ByVar>(&r.node)) {
      if (auto t = table_var(v->name)) out.node = TableRef::Literal{*t};
      else out.node = *v;
    } else {
      out.node = TableRef::Literal{table(std::get<TableRef::Literal>(r.node).table)};
    }
    return out;
  }

  ProcP process(const ProcP & p)
  {
    Process out;
    out.span = p->span;
    if (auto * pre = std::get_if<Process::Prefix>(&p->node)) {
      std::size_t m = mark();
      Action a = action(pre->action);
      ProcP cont = process(pre->cont);
      restore(m);
      out.node = Process::Prefix{std::move(a), cont};
    } else if (auto * c = std::get_if<Process::Call>(&p->node)) {
      Process::Call x{c->name, {}};
      for (const ExprP & e : c->args) x.args.push_back(expr(e));
      out.node = std::move(x);
    } else if (auto * f = std::get_if<Process::Foreach>(&p->node)) {
      Process::Foreach x;
      x.table = table_ref(f->table);
      x.order = f->order;
      std::size_t m = mark();
      x.tmpl = f->tmpl;
      binders(f->tmpl);
      x.pred = pred(f->pred);
      x.body = process(f->body);
      restore(m);
      out.node = std::move(x);
    } else if (auto * s = std::get_if<Process::Seq>(&p->node)) {
      out.node = Process::Seq{process(s->first), process(s->second)};
    } else {
      return p;
    }
    return out;
  }

  Shared<Table> table(const Shared<Table> & t)
  {
    if (!touches_values()) return t;
    Table out;
    out.iface = t->iface;
    for (const auto & [row, n] : t->rows) {
      ValueTuple r;
      r.reserve(row.size());
      for (const Value & v : row) r.push_back(value(v));
      out.rows.add(r, n);
    }
    return Shared<Table>(std::move(out));
  }

 protected:
  virtual std::optional<ExprP> var(const Expr::Var & v, const Span & s) = 0;
  virtual LocRef loc(const LocRef & l) = 0;
  virtual std::optional<Shared<Table>> table_var(const std::string & name) = 0;
  virtual bool touches_values() const = 0;
  virtual Value value(const Value & v) = 0;
  virtual void bind(const std::string & name) = 0;
  virtual std::size_t mark() const = 0;
  virtual void restore(std::size_t m) = 0;

 private:
  void binders(const Template & t)
  {
    for (const Binder & b : t.fields) bind(b.name);
  }

  // Binders that scope over the continuation are left in place; the caller
  // restores after the continuation.
  Action action(const Action & a)
  {
    Action out;
    out.span = a.span;
    std::visit(
        [&](const auto & n) {
          using N = std::decay_t<decltype(n)>;
          N x = n;
          if constexpr (std::is_same_v<N, Action::Insert>) {
            x.loc = loc(n.loc);
            x.tuple = tuple(n.tuple);
          } else if constexpr (std::is_same_v<N, Action::Delete>) {
            x.loc = loc(n.loc);
            std::size_t m = mark();
            binders(n.tmpl);
            x.pred = pred(n.pred);
            restore(m);
          } else if constexpr (std::is_same_v<N, Action::Select>) {
            for (TableRef & r : x.tables) r = table_ref(r);
            std::size_t m = mark();
            binders(n.tmpl);
            x.pred = pred(n.pred);
            x.tuple = tuple(n.tuple);
            restore(m);
            bind(n.bind);
          } else if constexpr (std::is_same_v<N, Action::Update>) {
            x.loc = loc(n.loc);
            std::size_t m = mark();
            binders(n.tmpl);
            x.pred = pred(n.pred);
            x.tuple = tuple(n.tuple);
            restore(m);
          } else if constexpr (std::is_same_v<N, Action::Aggr>) {
            x.loc = loc(n.loc);
            std::size_t m = mark();
            binders(n.tmpl);
            x.pred = pred(n.pred);
            restore(m);
            binders(n.result);
          } else if constexpr (std::is_same_v<N, Action::Create> || std::is_same_v<N, Action::Drop>) {
            x.loc = loc(n.loc);
          } else {
            x.process = process(n.process);
            x.loc = loc(n.loc);
          }
          out.node = std::move(x);
        },
        a.node);
    return out;
  }
};

class Substituter : public Rewriter {
 public:
  explicit Substituter(const Subst & s) : s_(s) {}

 protected:
  bool blocked(const std::string & name) const
  {
    auto it = shadow_.find(name);
    return it != shadow_.end() && it->second > 0;
  }

  std::optional<ExprP> var(const Expr::Var & v, const Span & sp) override
  {
    if (blocked(v.name)) return std::nullopt;
    auto it = s_.values.find(v.name);
    if (it == s_.values.end()) return std::nullopt;
    return ExprP(Expr{Expr::Lit{it->second}, sp});
  }

  LocRef loc(const LocRef & l) override
  {
    if (!l.is_var || blocked(l.name)) return l;
    auto it = s_.values.find(l.name);
    if (it == s_.values.end()) return l;
    auto * lv = std::get_if<LocV>(&it->second);
    if (!lv) return l;
    return LocRef{lv->name, false, l.span};
  }

  std::optional<Shared<Table>> table_var(const std::string & name) override
  {
    if (blocked(name)) return std::nullopt;
    auto it = s_.tables.find(name);
    if (it == s_.tables.end()) return std::nullopt;
    return it->second;
  }

  bool touches_values() const override { return false; }
  Value value(const Value & v) override { return v; }

  void bind(const std::string & name) override
  {
    if (!s_.values.count(name) && !s_.tables.count(name)) return;
    ++shadow_[name];
    trail_.push_back(name);
  }
  std::size_t mark() const override { return trail_.size(); }
  void restore(std::size_t m) override
  {
    while (trail_.size() > m) {
      --shadow_[trail_.back()];
      trail_.pop_back();
    }
  }

 private:
  const Subst & s_;
  std::unordered_map<std::string, int> shadow_;
  std::vector<std::string> trail_;
};

class LocRenamer : public Rewriter {
 public:
  explicit LocRenamer(const LocRenaming & m) : m_(m) {}

  Value value(const Value & v) override
  {
    if (auto * l = std::get_if<LocV>(&v)) return LocV{name(l->name)};
    if (auto * s = std::get_if<SetV>(&v)) {
      if (set_elem_kind(*s) != BaseType::Loc) return v;
      SetV out;
      out.elem = s->elem;
      for (const auto & [e, n] : s->items) out.items.add(LocV{name(std::get<LocV>(e).name)}, n);
      return out;
    }
    return v;
  }

 protected:
  std::optional<ExprP> var(const Expr::Var &, const Span &) override { return std::nullopt; }
  LocRef loc(const LocRef & l) override
  {
    if (l.is_var) return l;
    return LocRef{name(l.name), false, l.span};
  }
  std::optional<Shared<Table>> table_var(const std::string &) override { return std::nullopt; }
  bool touches_values() const override { return true; }
  void bind(const std::string &) override {}
  std::size_t mark() const override { return 0; }
  void restore(std::size_t) override {}

 private:
  const std::string & name(const std::string & l) const
  {
    auto it = m_.find(l);
    return it == m_.end() ? l : it->second;
  }

  const LocRenaming & m_;
};

}  // namespace

ExprP apply_subst(const Subst & s, const ExprP & e) { return Substituter(s).expr(e); }
PredP apply_subst(const Subst & s, const PredP & p) { return Substituter(s).pred(p); }
Tuple apply_subst(const Subst & s, const Tuple & t) { return Substituter(s).tuple(t); }
TableRef apply_subst(const Subst & s, const TableRef & r) { return Substituter(s).table_ref(r); }

ProcP apply_subst(const Subst & s, const ProcP & p)
{
  if (s.empty()) return p;
  return Substituter(s).process(p);
}

ProcP rename_localities(const ProcP & p, const LocRenaming & m)
{
  if (m.empty()) return p;
  return LocRenamer(m).process(p);
}

Shared<Table> rename_localities(const Shared<Table> & t, const LocRenaming & m)
{
  if (m.empty()) return t;
  return LocRenamer(m).table(t);
}

ProcP rename_locality(const ProcP & p, const std::string & from, const std::string & to)
{
  return rename_localities(p, LocRenaming{{from, to}});
}

Table rename_locality(const Table & t, const std::string & from, const std::string & to)
{
  return *rename_localities(Shared<Table>(t), LocRenaming{{from, to}});
}

}  // namespace kdb

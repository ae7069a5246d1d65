#include "kdb/semantics/engine.hpp"

#include <optional>
#include <stdexcept>

#include "kdb/syntax/binding.hpp"
#include "kdb/syntax/render.hpp"
#include "kdb/values/eval.hpp"
#include "kdb/values/relational.hpp"
#include "kdb/values/sorts.hpp"
#include "kdb/values/subst.hpp"

namespace kdb {

const char * to_string(Rule r)
{
  switch (r) {
    case Rule::INS: return "INS";
    case Rule::DEL: return "DEL";
    case Rule::SEL: return "SEL";
    case Rule::UPD: return "UPD";
    case Rule::AGR: return "AGR";
    case Rule::CRT: return "CRT";
    case Rule::DRP: return "DRP";
    case Rule::EVL: return "EVL";
    case Rule::FOR_TT: return "FOR_TT";
    case Rule::FOR_FF: return "FOR_FF";
    case Rule::SEQ_TT: return "SEQ_TT";
    case Rule::SEQ_FF: return "SEQ_FF";
    case Rule::CALL: return "CALL";
  }
  return "?";
}

namespace {

// Effect of one transition on the net, relative to the acting item.
struct Outcome {
  Rule rule = Rule::INS;
  std::vector<Rule> via;
  std::string detail;
  bool err = false;
  ProcP actor_next;
  std::vector<std::pair<std::size_t, std::optional<Shared<Table>>>> table_edits;
  std::vector<Item> spawned;
};

Outcome error(Rule r, std::string why)
{
  Outcome o;
  o.rule = r;
  o.err = true;
  o.detail = std::move(why);
  return o;
}

std::string plural(std::uint64_t n, const char * what)
{
  return std::to_string(n) + " " + what + (n == 1 ? "" : "s");
}

std::string at(const std::string & tid, const std::string & loc) { return tid + "@$" + loc; }

// Per-row results of matching a template and evaluating a predicate.
struct RowEval {
  std::optional<Subst> sigma;
  Truth truth = Truth::err;
};

RowEval eval_row(const ValueTuple & row, const Template & tmpl, const PredP & pred)
{
  RowEval r;
  r.sigma = match(row, tmpl);
  if (!r.sigma) return r;
  r.truth = eval_pred(*apply_subst(*r.sigma, pred));
  return r;
}

class Stepper {
 public:
  Stepper(const CanonicalNet & cn, const System & sys) : cn_(cn), sys_(sys) {}

  std::vector<Outcome> process(const ProcP & p, const std::string & loc)
  {
    return std::visit(
        [&](const auto & n) -> std::vector<Outcome> {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Process::Nil>) return {};
          else if constexpr (std::is_same_v<N, Process::Prefix>) return action(n.action, n.cont);
          else if constexpr (std::is_same_v<N, Process::Call>) return call(n);
          else if constexpr (std::is_same_v<N, Process::Foreach>) return foreach(n);
          else return sequence(n, loc);
        },
        p->node);
  }

 private:
  std::vector<Outcome> sequence(const Process::Seq & s, const std::string & loc)
  {
    std::vector<Outcome> out = process(s.first, loc);
    for (Outcome & o : out) {
      if (o.err) {
        o.via.push_back(Rule::SEQ_TT);
      } else if (is_nil(*o.actor_next)) {
        o.actor_next = s.second;
        o.via.push_back(Rule::SEQ_FF);
      } else {
        o.actor_next = seq(o.actor_next, s.second);
        o.via.push_back(Rule::SEQ_TT);
      }
    }
    return out;
  }

  std::vector<Outcome> call(const Process::Call & c)
  {
    const Procedure * proc = sys_.find_procedure(c.name);
    if (!proc || proc->params.size() != c.args.size()) return {};
    Subst s;
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      auto v = eval_expr(*c.args[i]);
      if (!v) return {};
      s.values[proc->params[i].name] = tag_sorts(std::move(*v), proc->params[i].type);
    }
    Outcome o;
    o.rule = Rule::CALL;
    o.actor_next = apply_subst(s, proc->body);
    o.detail = "call " + c.name;
    return {o};
  }

  std::vector<Outcome> foreach(const Process::Foreach & f)
  {
    auto * lit = std::get_if<TableRef::Literal>(&f.table.node);
    if (!lit) return {};
    const Table & tb = *lit->table;
    Rows sat;
    std::map<ValueTuple, Subst> sigmas;
    bool any_err = false;
    for (const auto & [row, n] : tb.rows) {
      RowEval r = eval_row(row, f.tmpl, f.pred);
      if (!r.sigma || r.truth == Truth::err) any_err = true;
      if (r.truth == Truth::tt) {
        sat.add(row, n);
        sigmas.emplace(row, std::move(*r.sigma));
      }
    }
    if (sat.empty()) {
      if (any_err) return {error(Rule::FOR_FF, "foreach: a row fails to match or evaluate")};
      Outcome o;
      o.rule = Rule::FOR_FF;
      o.actor_next = nil_proc();
      o.detail = "foreach done";
      return {o};
    }
    std::vector<Outcome> out;
    for (const ValueTuple & t0 : minimal(sat, f.order)) {
      Table rest = tb;
      rest.rows.remove_one(t0);
      Process::Foreach loop = f;
      loop.table.node = TableRef::Literal{Shared<Table>(std::move(rest))};
      Outcome o;
      o.rule = Rule::FOR_TT;
      o.actor_next = seq(apply_subst(sigmas.at(t0), f.body), ProcP(Process{std::move(loop), {}}));
      o.detail = "foreach row " + render_tuple(t0);
      out.push_back(std::move(o));
    }
    return out;
  }

  std::vector<Outcome> action(const Action & a, const ProcP & cont)
  {
    return std::visit(
        [&](const auto & n) -> std::vector<Outcome> {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Action::Select>) {
            return select(n, cont);
          } else if constexpr (std::is_same_v<N, Action::Eval>) {
            return eval(n, cont);
          } else {
            if (n.loc.is_var) return {};
            if constexpr (std::is_same_v<N, Action::Insert>) return insert(n, cont);
            else if constexpr (std::is_same_v<N, Action::Delete>) return del(n, cont);
            else if constexpr (std::is_same_v<N, Action::Update>) return update(n, cont);
            else if constexpr (std::is_same_v<N, Action::Aggr>) return aggr(n, cont);
            else if constexpr (std::is_same_v<N, Action::Create>) return create(n, cont);
            else return drop(n, cont);
          }
        },
        a.node);
  }

  std::vector<Outcome> insert(const Action::Insert & a, const ProcP & cont)
  {
    std::vector<Outcome> out;
    for (std::size_t i : find_table_items(cn_, a.loc.name, a.tid)) {
      const Table & tb = cn_.items[i].table();
      auto row = eval_tuple(a.tuple);
      if (!row || !well_sorted(*row, tb.iface.schema)) {
        out.push_back(error(Rule::INS, "insert into " + at(a.tid, a.loc.name) + ": tuple does not fit schema " +
                                           to_string(tb.iface.schema)));
        continue;
      }
      Table next = tb;
      Outcome o;
      o.detail = "insert " + render_tuple(*row) + " into " + at(a.tid, a.loc.name);
      next.rows.add(tag_sorts(std::move(*row), tb.iface.schema));
      o.rule = Rule::INS;
      o.actor_next = cont;
      o.table_edits.emplace_back(i, Shared<Table>(std::move(next)));
      out.push_back(std::move(o));
    }
    return out;
  }

  std::vector<Outcome> del(const Action::Delete & a, const ProcP & cont)
  {
    std::vector<Outcome> out;
    for (std::size_t i : find_table_items(cn_, a.loc.name, a.tid)) {
      const Table & tb = cn_.items[i].table();
      if (!well_sorted(a.tmpl, tb.iface.schema)) {
        out.push_back(error(Rule::DEL, "delete from " + at(a.tid, a.loc.name) + ": template does not fit schema"));
        continue;
      }
      Table next;
      next.iface = tb.iface;
      bool bad = false;
      std::uint64_t removed = 0;
      for (const auto & [row, n] : tb.rows) {
        RowEval r = eval_row(row, a.tmpl, a.pred);
        if (!r.sigma || r.truth == Truth::err) {
          bad = true;
          break;
        }
        if (r.truth == Truth::tt) removed += n;
        else next.rows.add(row, n);
      }
      if (bad) {
        out.push_back(error(Rule::DEL, "delete from " + at(a.tid, a.loc.name) + ": a row fails to match or evaluate"));
        continue;
      }
      Outcome o;
      o.rule = Rule::DEL;
      o.actor_next = cont;
      o.table_edits.emplace_back(i, Shared<Table>(std::move(next)));
      o.detail = "delete from " + at(a.tid, a.loc.name) + ": " + plural(removed, "row");
      out.push_back(std::move(o));
    }
    return out;
  }

  std::vector<Outcome> select(const Action::Select & a, const ProcP & cont)
  {
    // Distinct (loc, tid) references, each resolved to one present table.
    std::vector<std::pair<std::string, std::string>> keys;
    for (const TableRef & r : a.tables) {
      if (std::holds_alternative<TableRef::ByVar>(r.node)) return {};
      if (auto * b = std::get_if<TableRef::ByName>(&r.node)) {
        if (b->loc.is_var) return {};
        std::pair<std::string, std::string> k{b->loc.name, b->tid};
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
      }
    }
    std::vector<std::vector<std::size_t>> choices;
    for (const auto & [l, tid] : keys) {
      choices.push_back(find_table_items(cn_, l, tid));
      if (choices.back().empty()) return {};
    }
    std::vector<Outcome> out;
    std::vector<std::size_t> pick(keys.size(), 0);
    for (;;) {
      std::vector<Located> located;
      for (std::size_t k = 0; k < keys.size(); ++k)
        located.push_back(Located{keys[k].first, &cn_.items[choices[k][pick[k]]].table()});
      if (auto o = select_once(a, cont, located)) out.push_back(std::move(*o));
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
    return out;
  }

  std::optional<Outcome> select_once(const Action::Select & a, const ProcP & cont, const std::vector<Located> & located)
  {
    auto sk = join_schemas(a.tables, located);
    auto rows = join_rows(a.tables, located);
    if (!sk || !rows) return std::nullopt;
    if (!well_sorted(a.tmpl, *sk)) return error(Rule::SEL, "select: template does not fit the joined schema");
    Rows result;
    for (const auto & [row, n] : *rows) {
      RowEval r = eval_row(row, a.tmpl, a.pred);
      if (!r.sigma || r.truth == Truth::err) return error(Rule::SEL, "select: a row fails to match or evaluate");
      auto t = eval_tuple(apply_subst(*r.sigma, a.tuple));
      if (!t) return error(Rule::SEL, "select: result tuple fails to evaluate");
      if (r.truth == Truth::tt) result.add(std::move(*t), n);
    }
    auto out_sk = project_schema(*sk, a.tmpl, a.tuple);
    if (!out_sk) return std::nullopt;
    Table tb;
    tb.iface = Interface{std::nullopt, *out_sk};
    for (const auto & [row, n] : result) tb.rows.add(tag_sorts(row, *out_sk), n);
    std::uint64_t count = tb.rows.size();
    Subst s;
    s.tables[a.bind] = Shared<Table>(std::move(tb));
    Outcome o;
    o.rule = Rule::SEL;
    o.actor_next = apply_subst(s, cont);
    o.detail = "select " + plural(count, "row") + " from " + plural(rows->size(), "candidate");
    return o;
  }

  std::vector<Outcome> update(const Action::Update & a, const ProcP & cont)
  {
    std::vector<Outcome> out;
    for (std::size_t i : find_table_items(cn_, a.loc.name, a.tid)) {
      const Table & tb = cn_.items[i].table();
      std::string where = "update " + at(a.tid, a.loc.name);
      if (!well_sorted(a.tmpl, tb.iface.schema)) {
        out.push_back(error(Rule::UPD, where + ": template does not fit schema"));
        continue;
      }
      Table next;
      next.iface = tb.iface;
      std::optional<std::string> bad;
      std::uint64_t changed = 0;
      for (const auto & [row, n] : tb.rows) {
        RowEval r = eval_row(row, a.tmpl, a.pred);
        if (!r.sigma || r.truth == Truth::err) {
          bad = ": a row fails to match or evaluate";
          break;
        }
        auto t = eval_tuple(apply_subst(*r.sigma, a.tuple));
        if (!t) {
          bad = ": replacement tuple fails to evaluate";
          break;
        }
        if (r.truth != Truth::tt) {
          next.rows.add(row, n);
          continue;
        }
        if (!well_sorted(*t, tb.iface.schema)) {
          bad = ": replacement tuple does not fit schema";
          break;
        }
        next.rows.add(tag_sorts(std::move(*t), tb.iface.schema), n);
        changed += n;
      }
      if (bad) {
        out.push_back(error(Rule::UPD, where + *bad));
        continue;
      }
      Outcome o;
      o.rule = Rule::UPD;
      o.actor_next = cont;
      o.table_edits.emplace_back(i, Shared<Table>(std::move(next)));
      o.detail = where + ": " + plural(changed, "row");
      out.push_back(std::move(o));
    }
    return out;
  }

  std::vector<Outcome> aggr(const Action::Aggr & a, const ProcP & cont)
  {
    std::vector<Outcome> out;
    for (std::size_t i : find_table_items(cn_, a.loc.name, a.tid)) {
      const Table & tb = cn_.items[i].table();
      std::string where = "aggr " + render(a.fn) + " over " + at(a.tid, a.loc.name);
      if (!well_sorted(a.tmpl, tb.iface.schema)) {
        out.push_back(error(Rule::AGR, where + ": template does not fit schema"));
        continue;
      }
      if (!well_sorted(a.result, aggr_result_schema(a.fn))) {
        out.push_back(error(Rule::AGR, where + ": result template does not fit the aggregator"));
        continue;
      }
      Rows sat;
      bool bad = false;
      for (const auto & [row, n] : tb.rows) {
        RowEval r = eval_row(row, a.tmpl, a.pred);
        if (!r.sigma || r.truth == Truth::err || !aggr_accepts(a.fn, row)) {
          bad = true;
          break;
        }
        if (r.truth == Truth::tt) sat.add(row, n);
      }
      if (bad) {
        out.push_back(error(Rule::AGR, where + ": a row fails to match, evaluate or fit the aggregator"));
        continue;
      }
      ValueTuple res = apply_aggr(a.fn, sat);
      auto sigma = match(res, a.result);
      if (!sigma) {
        out.push_back(error(Rule::AGR, where + ": result does not match"));
        continue;
      }
      Outcome o;
      o.rule = Rule::AGR;
      o.actor_next = apply_subst(*sigma, cont);
      o.detail = where + ": " + plural(sat.size(), "row") + " -> " + render_tuple(res);
      out.push_back(std::move(o));
    }
    return out;
  }

  std::vector<Outcome> create(const Action::Create & a, const ProcP & cont)
  {
    if (!cn_.sites.count(a.loc.name)) return {};
    Outcome o;
    o.rule = Rule::CRT;
    o.actor_next = cont;
    if (lid(cn_).contains({a.loc.name, a.tid})) {
      o.detail = "create " + at(a.tid, a.loc.name) + " skipped: table exists";
    } else {
      Table t;
      t.iface = Interface{a.tid, a.schema};
      o.spawned.push_back(Item{a.loc.name, Shared<Table>(std::move(t))});
      o.detail = "create " + at(a.tid, a.loc.name);
    }
    return {o};
  }

  std::vector<Outcome> drop(const Action::Drop & a, const ProcP & cont)
  {
    std::vector<Outcome> out;
    for (std::size_t i : find_table_items(cn_, a.loc.name, a.tid)) {
      Outcome o;
      o.rule = Rule::DRP;
      o.actor_next = cont;
      o.table_edits.emplace_back(i, std::nullopt);
      // The dropped contents stay visible in the trace.
      std::string rows;
      for (const auto & [row, n] : cn_.items[i].table().rows)
        for (std::uint64_t k = 0; k < n; ++k) rows += (rows.empty() ? "" : ", ") + render_tuple(row);
      o.detail = "drop " + at(a.tid, a.loc.name) + " = {" + rows + "}";
      out.push_back(std::move(o));
    }
    return out;
  }

  std::vector<Outcome> eval(const Action::Eval & a, const ProcP & cont)
  {
    if (a.loc.is_var || !cn_.sites.count(a.loc.name)) return {};
    if (!is_closed(*a.process)) return {};
    Outcome o;
    o.rule = Rule::EVL;
    o.actor_next = cont;
    o.spawned.push_back(Item{a.loc.name, a.process});
    o.detail = "eval at $" + a.loc.name;
    return {o};
  }

  const CanonicalNet & cn_;
  const System & sys_;
};

CanonicalNet apply(const CanonicalNet & cn, std::size_t actor, const Outcome & o)
{
  if (o.err) return err_state(cn);
  CanonicalNet next;
  next.restricted = cn.restricted;
  next.sites = cn.sites;
  next.items.reserve(cn.items.size() + o.spawned.size());
  for (std::size_t i = 0; i < cn.items.size(); ++i) {
    if (i == actor) {
      if (!is_nil(*o.actor_next)) next.items.push_back(Item{cn.items[i].loc, o.actor_next});
      continue;
    }
    auto edit = std::find_if(o.table_edits.begin(), o.table_edits.end(), [&](const auto & e) { return e.first == i; });
    if (edit == o.table_edits.end()) next.items.push_back(cn.items[i]);
    else if (edit->second) next.items.push_back(Item{cn.items[i].loc, *edit->second});
  }
  for (const Item & it : o.spawned)
    if (it.is_table() || !is_nil(*it.process())) next.items.push_back(it);
  return next;
}

}  // namespace

std::vector<Transition> enumerate_transitions(const CanonicalNet & cn, const System & sys)
{
  std::vector<Transition> out;
  if (cn.err) return out;
  Stepper stepper(cn, sys);
  for (std::size_t i = 0; i < cn.items.size(); ++i) {
    const Item & it = cn.items[i];
    if (it.is_table()) continue;
    for (Outcome & o : stepper.process(it.process(), it.loc)) {
      Transition t;
      t.label.rule = o.rule;
      t.label.via = o.via;
      t.label.actor = it.loc;
      t.label.detail = o.detail;
      t.label.to_err = o.err;
      t.next = apply(cn, i, o);
      out.push_back(std::move(t));
    }
  }
  return out;
}

Transition step_interactive(const CanonicalNet & cn, const System & sys, std::size_t index)
{
  auto all = enumerate_transitions(cn, sys);
  if (index >= all.size())
    throw std::out_of_range("transition " + std::to_string(index) + " does not exist; " +
                            std::to_string(all.size()) + " enabled");
  return std::move(all[index]);
}

}  // namespace kdb

#include "kdb/syntax/ast.hpp"

namespace kdb {

const Procedure * System::find_procedure(const std::string & name) const
{
  for (const Procedure & p : procedures)
    if (p.name == name) return &p;
  return nullptr;
}

ExprP lit(Value v, Span s) { return Expr{Expr::Lit{std::move(v)}, s}; }
ExprP var(std::string name, bool is_loc, Span s) { return Expr{Expr::Var{std::move(name), is_loc}, s}; }
ExprP concat(ExprP l, ExprP r) { return Expr{Expr::Concat{std::move(l), std::move(r)}, {}}; }
ExprP arith(ArithOp op, ExprP l, ExprP r) { return Expr{Expr::Arith{op, std::move(l), std::move(r)}, {}}; }
ExprP set_lit(std::vector<ExprP> elems) { return Expr{Expr::SetLit{std::move(elems)}, {}}; }

PredP pred_true() { return Pred{Pred::True{}, {}}; }
PredP cmp(CmpOp op, ExprP l, ExprP r) { return Pred{Pred::Cmp{op, std::move(l), std::move(r)}, {}}; }
PredP member(ExprP e, ExprP s) { return Pred{Pred::Member{std::move(e), std::move(s)}, {}}; }
PredP subset(ExprP l, ExprP r) { return Pred{Pred::Subset{std::move(l), std::move(r)}, {}}; }
PredP pred_not(PredP p) { return Pred{Pred::Not{std::move(p)}, {}}; }
PredP pred_and(PredP l, PredP r) { return Pred{Pred::And{std::move(l), std::move(r)}, {}}; }

ProcP nil_proc()
{
  static const ProcP nil = Process{Process::Nil{}, {}};
  return nil;
}
ProcP prefix(Action a, ProcP cont) { return Process{Process::Prefix{std::move(a), std::move(cont)}, {}}; }
ProcP seq(ProcP first, ProcP second) { return Process{Process::Seq{std::move(first), std::move(second)}, {}}; }

NetP nil_net() { return Net{Net::Nil{}, {}}; }
NetP err_net() { return Net{Net::Err{}, {}}; }
NetP par_net(NetP l, NetP r) { return Net{Net::Par{std::move(l), std::move(r)}, {}}; }
NetP node_net(std::string loc, CompP c) { return Net{Net::Node{std::move(loc), std::move(c)}, {}}; }
CompP proc_comp(ProcP p) { return Component{Component::Proc{std::move(p)}, {}}; }
CompP table_comp(Table t) { return Component{Component::Tab{Shared<Table>(std::move(t))}, {}}; }
CompP par_comp(CompP l, CompP r) { return Component{Component::Par{std::move(l), std::move(r)}, {}}; }

bool is_nil(const Process & p) { return std::holds_alternative<Process::Nil>(p.node); }

}  // namespace kdb

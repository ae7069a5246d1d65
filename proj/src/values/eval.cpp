#include "kdb/values/eval.hpp"

namespace kdb {

const char * to_string(Truth t)
{
  switch (t) {
    case Truth::tt: return "tt";
    case Truth::ff: return "ff";
    case Truth::err: return "err";
  }
  return "?";
}

EvalOutcome<Value> eval_expr(const Expr & e)
{
  if (auto * l = std::get_if<Expr::Lit>(&e.node)) return l->value;
  if (std::holds_alternative<Expr::Var>(e.node)) return std::nullopt;
  if (auto * c = std::get_if<Expr::Concat>(&e.node)) {
    auto a = eval_expr(*c->left);
    auto b = eval_expr(*c->right);
    if (!a || !b) return std::nullopt;
    auto * sa = std::get_if<Str>(&*a);
    auto * sb = std::get_if<Str>(&*b);
    if (!sa || !sb) return std::nullopt;
    return Str{sa->text + sb->text};
  }
  if (auto * ar = std::get_if<Expr::Arith>(&e.node)) {
    auto a = eval_expr(*ar->left);
    auto b = eval_expr(*ar->right);
    if (!a || !b) return std::nullopt;
    auto * x = std::get_if<Int>(&*a);
    auto * y = std::get_if<Int>(&*b);
    if (!x || !y) return std::nullopt;
    switch (ar->op) {
      case ArithOp::Add: return Int(*x + *y);
      case ArithOp::Sub: return Int(*x - *y);
      case ArithOp::Mul: return Int(*x * *y);
      case ArithOp::Div:
        if (y->is_zero()) return Int(0);
        return Int(*x / *y);  // truncates toward zero
    }
  }
  const auto & m = std::get<Expr::SetLit>(e.node);
  SetV out;
  for (const ExprP & el : m.elems) {
    auto v = eval_expr(*el);
    if (!v) return std::nullopt;
    auto s = to_scalar(*v);
    if (!s) return std::nullopt;
    if (!out.items.empty() && scalar_kind(*s) != scalar_kind(out.items.begin()->first)) return std::nullopt;
    out.items.add(*s);
  }
  return out;
}

namespace {

Truth of(bool b) { return b ? Truth::tt : Truth::ff; }

Truth compare(CmpOp op, const Value & a, const Value & b)
{
  auto ka = scalar_kind(a);
  auto kb = scalar_kind(b);
  if (!ka || !kb || *ka != *kb) return Truth::err;
  if (op == CmpOp::Eq) return of(a == b);
  if (op == CmpOp::Ne) return of(!(a == b));
  if (*ka != BaseType::Int && *ka != BaseType::String) return Truth::err;
  bool lt = a < b;
  bool eq = a == b;
  switch (op) {
    case CmpOp::Lt: return of(lt);
    case CmpOp::Le: return of(lt || eq);
    case CmpOp::Gt: return of(!lt && !eq);
    case CmpOp::Ge: return of(!lt);
    default: return Truth::err;
  }
}

// Element kinds agree, treating an untagged empty set as fitting anything.
bool set_fits(const SetV & s, BaseType k)
{
  auto ek = set_elem_kind(s);
  return !ek || *ek == k;
}

}  // namespace

Truth eval_pred(const Pred & p)
{
  return std::visit(
      [](const auto & n) -> Truth {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Pred::True>) {
          return Truth::tt;
        } else if constexpr (std::is_same_v<N, Pred::Cmp>) {
          auto a = eval_expr(*n.left);
          auto b = eval_expr(*n.right);
          if (!a || !b) return Truth::err;
          return compare(n.op, *a, *b);
        } else if constexpr (std::is_same_v<N, Pred::Member>) {
          auto a = eval_expr(*n.elem);
          auto b = eval_expr(*n.set);
          if (!a || !b) return Truth::err;
          auto s = to_scalar(*a);
          auto * set = std::get_if<SetV>(&*b);
          if (!s || !set || !set_fits(*set, scalar_kind(*s))) return Truth::err;
          return of(set->items.contains(*s));
        } else if constexpr (std::is_same_v<N, Pred::Subset>) {
          auto a = eval_expr(*n.left);
          auto b = eval_expr(*n.right);
          if (!a || !b) return Truth::err;
          auto * x = std::get_if<SetV>(&*a);
          auto * y = std::get_if<SetV>(&*b);
          if (!x || !y) return Truth::err;
          auto kx = set_elem_kind(*x);
          auto ky = set_elem_kind(*y);
          if (kx && ky && *kx != *ky) return Truth::err;
          for (const auto & [e, c] : x->items)
            if (y->items.count(e) < c) return Truth::ff;
          return of(!(x->items == y->items));
        } else if constexpr (std::is_same_v<N, Pred::Not>) {
          Truth t = eval_pred(*n.inner);
          if (t == Truth::err) return t;
          return t == Truth::tt ? Truth::ff : Truth::tt;
        } else {
          Truth a = eval_pred(*n.left);
          Truth b = eval_pred(*n.right);
          if (a == Truth::err || b == Truth::err) return Truth::err;
          return of(a == Truth::tt && b == Truth::tt);
        }
      },
      p.node);
}

EvalOutcome<ValueTuple> eval_tuple(const Tuple & t)
{
  ValueTuple out;
  out.reserve(t.items.size());
  for (const ExprP & e : t.items) {
    auto v = eval_expr(*e);
    if (!v) return std::nullopt;
    out.push_back(std::move(*v));
  }
  return out;
}

}  // namespace kdb

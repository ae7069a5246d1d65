#include "kdb/values/sorts.hpp"

#include <unordered_map>

namespace kdb {

bool well_sorted(const Value & v, const MType & m)
{
  if (auto * s = std::get_if<SetV>(&v)) {
    if (!m.is_set) return false;
    if (s->items.empty()) return true;
    BaseType k = scalar_kind(s->items.begin()->first);
    for (const auto & [e, n] : s->items)
      if (scalar_kind(e) != k) return false;
    return k == m.base;
  }
  return !m.is_set && scalar_kind(v) == m.base;
}

bool well_sorted(const ValueTuple & t, const Schema & sk)
{
  if (t.size() != sk.size()) return false;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!well_sorted(t[i], sk[i])) return false;
  return true;
}

bool well_sorted(const Template & t, const Schema & sk)
{
  return template_env(t, sk).has_value();
}

std::optional<std::vector<std::pair<std::string, MType>>> template_env(const Template & t, const Schema & sk)
{
  if (t.fields.size() != sk.size()) return std::nullopt;
  std::vector<std::pair<std::string, MType>> env;
  env.reserve(sk.size());
  for (std::size_t i = 0; i < sk.size(); ++i) {
    bool loc = !sk[i].is_set && sk[i].base == BaseType::Loc;
    if (t.fields[i].is_loc != loc) return std::nullopt;
    env.emplace_back(t.fields[i].name, sk[i]);
  }
  return env;
}

MType sort_of(const Value & v)
{
  if (auto * s = std::get_if<SetV>(&v)) return MType{set_elem_kind(*s).value_or(BaseType::Int), true};
  return MType{*scalar_kind(v), false};
}

bool fits(const ExprSort & s, const MType & m)
{
  if (s.any_set) return m.is_set;
  return s.type == m;
}

std::optional<ExprSort> infer_sort(const Expr & e, const SortLookup & lookup)
{
  if (auto * l = std::get_if<Expr::Lit>(&e.node)) {
    if (auto * s = std::get_if<SetV>(&l->value)) {
      if (!set_elem_kind(*s)) return ExprSort{MType{BaseType::Int, true}, true};
    }
    return ExprSort{sort_of(l->value)};
  }
  if (auto * v = std::get_if<Expr::Var>(&e.node)) {
    auto m = lookup(v->name);
    if (!m) return std::nullopt;
    bool loc = !m->is_set && m->base == BaseType::Loc;
    if (loc != v->is_loc) return std::nullopt;
    return ExprSort{*m};
  }
  auto scalar_of = [&](const ExprP & x, BaseType want) {
    auto s = infer_sort(*x, lookup);
    return s && !s->any_set && s->type == MType{want, false};
  };
  if (auto * c = std::get_if<Expr::Concat>(&e.node)) {
    if (!scalar_of(c->left, BaseType::String) || !scalar_of(c->right, BaseType::String)) return std::nullopt;
    return ExprSort{MType{BaseType::String, false}};
  }
  if (auto * a = std::get_if<Expr::Arith>(&e.node)) {
    if (!scalar_of(a->left, BaseType::Int) || !scalar_of(a->right, BaseType::Int)) return std::nullopt;
    return ExprSort{MType{BaseType::Int, false}};
  }
  const auto & m = std::get<Expr::SetLit>(e.node);
  std::optional<BaseType> k;
  for (const ExprP & x : m.elems) {
    auto s = infer_sort(*x, lookup);
    if (!s || s->any_set || s->type.is_set) return std::nullopt;
    if (k && *k != s->type.base) return std::nullopt;
    k = s->type.base;
  }
  if (!k) return ExprSort{MType{BaseType::Int, true}, true};
  return ExprSort{MType{*k, true}};
}

}  // namespace kdb

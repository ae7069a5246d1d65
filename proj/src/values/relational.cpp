#include "kdb/values/relational.hpp"

#include <unordered_map>

#include "kdb/values/sorts.hpp"

namespace kdb {

std::optional<Schema> project_schema(const Schema & sk, const Template & t, const Tuple & payload)
{
  auto env = template_env(t, sk);
  if (!env) return std::nullopt;
  std::unordered_map<std::string, MType> bound(env->begin(), env->end());
  SortLookup lookup = [&](const std::string & n) -> std::optional<MType> {
    auto it = bound.find(n);
    if (it == bound.end()) return std::nullopt;
    return it->second;
  };
  Schema out;
  out.reserve(payload.items.size());
  for (const ExprP & e : payload.items) {
    auto s = infer_sort(*e, lookup);
    if (!s) return std::nullopt;
    out.push_back(s->type);
  }
  return out;
}

namespace {

const Table * lookup_table(const TableRef & ref, const std::vector<Located> & located)
{
  if (auto * lit = std::get_if<TableRef::Literal>(&ref.node)) return lit->table.get();
  auto * b = std::get_if<TableRef::ByName>(&ref.node);
  if (!b || b->loc.is_var) return nullptr;
  for (const Located & l : located)
    if (l.loc == b->loc.name && l.table->iface.tid == b->tid) return l.table;
  return nullptr;
}

}  // namespace

std::optional<Schema> join_schemas(const std::vector<TableRef> & refs, const std::vector<Located> & located)
{
  Schema out;
  for (const TableRef & r : refs) {
    const Table * t = lookup_table(r, located);
    if (!t) return std::nullopt;
    out.insert(out.end(), t->iface.schema.begin(), t->iface.schema.end());
  }
  return out;
}

std::optional<Rows> join_rows(const std::vector<TableRef> & refs, const std::vector<Located> & located)
{
  std::vector<const Table *> tables;
  for (const TableRef & r : refs) {
    const Table * t = lookup_table(r, located);
    if (!t) return std::nullopt;
    tables.push_back(t);
  }
  Rows acc;
  acc.add(ValueTuple{});
  for (const Table * t : tables) {
    Rows next;
    for (const auto & [prefix, n] : acc) {
      for (const auto & [row, m] : t->rows) {
        ValueTuple joined = prefix;
        joined.insert(joined.end(), row.begin(), row.end());
        next.add(joined, n * m);
      }
    }
    acc = std::move(next);
  }
  if (tables.empty()) return Rows{};
  return acc;
}

bool precedes(const ValueTuple & a, const ValueTuple & b, const OrderSpec & order)
{
  switch (order.kind) {
    case OrderSpec::Kind::Unordered: return false;
    case OrderSpec::Kind::Lex: return a < b;
    case OrderSpec::Kind::Asc:
    case OrderSpec::Kind::Desc: {
      std::size_t i = order.col - 1;
      if (order.col == 0 || i >= a.size() || i >= b.size()) return false;
      if (a[i].index() != b[i].index()) return false;
      return order.kind == OrderSpec::Kind::Asc ? a[i] < b[i] : b[i] < a[i];
    }
  }
  return false;
}

std::vector<ValueTuple> minimal(const Rows & r, const OrderSpec & order)
{
  std::vector<ValueTuple> out;
  if (order.kind == OrderSpec::Kind::Unordered) {
    for (const auto & [row, n] : r) out.push_back(row);
    return out;
  }
  if (order.kind == OrderSpec::Kind::Lex) {
    if (!r.empty()) out.push_back(r.begin()->first);
    return out;
  }
  for (const auto & [row, n] : r) {
    bool dominated = false;
    for (const auto & [other, m] : r) {
      if (precedes(other, row, order)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(row);
  }
  return out;
}

namespace {

std::optional<Int> column_int(const ValueTuple & row, std::size_t col)
{
  if (col == 0 || col > row.size()) return std::nullopt;
  if (auto * i = std::get_if<Int>(&row[col - 1])) return *i;
  return std::nullopt;
}

Int floor_div(const Int & a, const Int & b)
{
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

ValueTuple apply_aggr(const AggrFn & f, const Rows & r)
{
  if (f.kind == AggrFn::Kind::Count) return {Int(r.size())};
  Int sum = 0;
  std::optional<Int> lo, hi;
  for (const auto & [row, n] : r) {
    Int v = column_int(row, f.col).value_or(0);
    sum += v * n;
    if (!lo || v < *lo) lo = v;
    if (!hi || v > *hi) hi = v;
  }
  switch (f.kind) {
    case AggrFn::Kind::Sum: return {sum};
    case AggrFn::Kind::Avg: return {r.empty() ? Int(0) : floor_div(sum, Int(r.size()))};
    case AggrFn::Kind::Min: return {lo.value_or(0)};
    case AggrFn::Kind::Max: return {hi.value_or(0)};
    default: return {Int(0)};
  }
}

bool aggr_accepts(const AggrFn & f, const ValueTuple & row)
{
  if (f.kind == AggrFn::Kind::Count) return true;
  return column_int(row, f.col).has_value();
}

Schema aggr_result_schema(const AggrFn &) { return {MType{BaseType::Int, false}}; }

}  // namespace kdb

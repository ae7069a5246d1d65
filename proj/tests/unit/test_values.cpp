#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "kdb/syntax/parser.hpp"
#include "kdb/values/eval.hpp"
#include "kdb/values/relational.hpp"
#include "kdb/values/sorts.hpp"
#include "kdb/values/subst.hpp"

using namespace kdb;

namespace {

Value ev(const std::string & src)
{
  auto v = eval_expr(*parse_expr(src));
  REQUIRE(v.has_value());
  return *v;
}

MType scalar(BaseType b) { return MType{b, false}; }
MType set_of(BaseType b) { return MType{b, true}; }

ValueTuple row(std::initializer_list<long long> xs)
{
  ValueTuple t;
  for (long long x : xs) t.push_back(int_value(x));
  return t;
}

}  // namespace

TEST_CASE("integer arithmetic agrees with 128-bit machine arithmetic")
{
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long long> d(-1'000'000'000'000LL, 1'000'000'000'000LL);
  const char ops[] = {'+', '-', '*', '/'};
  for (int i = 0; i < 2000; ++i) {
    long long a = d(rng), b = i % 50 == 0 ? 0 : d(rng);
    char op = ops[i % 4];
    __int128 want = 0;
    switch (op) {
      case '+': want = static_cast<__int128>(a) + b; break;
      case '-': want = static_cast<__int128>(a) - b; break;
      case '*': want = static_cast<__int128>(a) * b; break;
      default: want = b == 0 ? 0 : static_cast<__int128>(a) / b; break;
    }
    std::string src = "(" + std::to_string(a) + ") " + op + " (" + std::to_string(b) + ")";
    Int got = std::get<Int>(ev(src));
    Int expect = Int(static_cast<long long>(want >> 64)) * (Int(1) << 64) + Int(static_cast<unsigned long long>(want));
    CHECK_MESSAGE(got == expect, src);
  }
}

TEST_CASE("division truncates toward zero and division by zero yields zero")
{
  CHECK(ev("7 / 2") == int_value(3));
  CHECK(ev("-7 / 2") == int_value(-3));
  CHECK(ev("7 / -2") == int_value(-3));
  CHECK(ev("5 / 0") == int_value(0));
}

TEST_CASE("integers do not overflow")
{
  Int big = std::get<Int>(ev("9223372036854775807 * 9223372036854775807"));
  CHECK(big == Int("85070591730234615847396907784232501249"));
}

TEST_CASE("string concatenation and ill-sorted operands")
{
  CHECK(ev("\"ab\" ++ \"cd\"") == str_value("abcd"));
  CHECK_FALSE(eval_expr(*parse_expr("1 + \"a\"")).has_value());
  CHECK_FALSE(eval_expr(*parse_expr("1 ++ 2")).has_value());
  CHECK_FALSE(eval_expr(*parse_expr("{1, \"a\"}")).has_value());
  CHECK_FALSE(eval_expr(*parse_expr("x + 1")).has_value());
}

TEST_CASE("predicates")
{
  auto truth = [](const std::string & s) { return eval_pred(*parse_pred(s)); };
  CHECK(truth("1 < 2") == Truth::tt);
  CHECK(truth("\"b\" <= \"a\"") == Truth::ff);
  CHECK(truth("KLD in {KLD, SH}") == Truth::tt);
  CHECK(truth("not KLD in {SH}") == Truth::tt);
  CHECK(truth("{1} subset {1, 2}") == Truth::tt);
  CHECK(truth("{1, 2} subset {1, 2}") == Truth::ff);
  CHECK(truth("$l1 = $l1") == Truth::tt);
  // Orderings are defined on integers and strings only.
  CHECK(truth("KLD < SH") == Truth::err);
  CHECK(truth("$l1 < $l2") == Truth::err);
  CHECK(truth("1 = \"1\"") == Truth::err);
  // Conjunction is strict: an error on either side is an error.
  CHECK(truth("1 = 2 && 1 = \"1\"") == Truth::err);
}

TEST_CASE("multiset operations agree with counting vectors")
{
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(0, 4);
  for (int round = 0; round < 200; ++round) {
    std::vector<int> xs(d(rng) * 2), ys(d(rng) * 2);
    for (int & x : xs) x = d(rng);
    for (int & y : ys) y = d(rng);
    Multiset<int> a, b;
    std::map<int, int> ca, cb;
    for (int x : xs) a.add(x), ++ca[x];
    for (int y : ys) b.add(y), ++cb[y];
    for (int k = 0; k <= 4; ++k) {
      CHECK(ms_union(a, b).count(k) == static_cast<std::uint64_t>(ca[k] + cb[k]));
      CHECK(ms_intersect(a, b).count(k) == static_cast<std::uint64_t>(std::min(ca[k], cb[k])));
      CHECK(ms_subtract(a, b).count(k) == static_cast<std::uint64_t>(std::max(ca[k] - cb[k], 0)));
    }
    CHECK(ms_union(a, b).size() == xs.size() + ys.size());
  }
}

TEST_CASE("aggregates agree with direct computation")
{
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-20, 20), n(0, 6);
  for (int round = 0; round < 300; ++round) {
    Rows r;
    std::vector<long long> col;
    int k = n(rng);
    for (int i = 0; i < k; ++i) {
      long long v = d(rng);
      col.push_back(v);
      r.add(row({0, v}));
    }
    long long sum = 0;
    for (long long v : col) sum += v;
    long long avg = col.empty() ? 0 : static_cast<long long>(std::floor(static_cast<double>(sum) / static_cast<double>(col.size())));
    long long mn = col.empty() ? 0 : *std::min_element(col.begin(), col.end());
    long long mx = col.empty() ? 0 : *std::max_element(col.begin(), col.end());
    using K = AggrFn::Kind;
    CHECK(apply_aggr(AggrFn{K::Sum, 2}, r) == row({sum}));
    CHECK(apply_aggr(AggrFn{K::Avg, 2}, r) == row({avg}));
    CHECK(apply_aggr(AggrFn{K::Count, 0}, r) == row({static_cast<long long>(col.size())}));
    CHECK(apply_aggr(AggrFn{K::Min, 2}, r) == row({mn}));
    CHECK(apply_aggr(AggrFn{K::Max, 2}, r) == row({mx}));
  }
}

TEST_CASE("aggregation domain")
{
  AggrFn sum{AggrFn::Kind::Sum, 1};
  CHECK(aggr_accepts(sum, row({1})));
  CHECK_FALSE(aggr_accepts(sum, {str_value("a")}));
  CHECK_FALSE(aggr_accepts(AggrFn{AggrFn::Kind::Sum, 3}, row({1})));
  CHECK(aggr_accepts(AggrFn{AggrFn::Kind::Count, 0}, {str_value("a")}));
  CHECK(aggr_result_schema(sum) == Schema{scalar(BaseType::Int)});
}

TEST_CASE("well-sortedness of values, tuples and templates")
{
  CHECK(well_sorted(int_value(1), scalar(BaseType::Int)));
  CHECK_FALSE(well_sorted(int_value(1), scalar(BaseType::String)));
  CHECK(well_sorted(ev("{KLD, SH}"), set_of(BaseType::Id)));
  CHECK_FALSE(well_sorted(ev("{KLD, SH}"), set_of(BaseType::Int)));
  CHECK(well_sorted(loc_value("l1"), scalar(BaseType::Loc)));
  Schema sk{scalar(BaseType::String), scalar(BaseType::Loc)};
  CHECK(well_sorted(ValueTuple{str_value("a"), loc_value("l")}, sk));
  CHECK_FALSE(well_sorted(ValueTuple{str_value("a")}, sk));
  Template ok{{Binder{"x", false, {}}, Binder{"u", true, {}}}, {}};
  Template bad{{Binder{"x", false, {}}, Binder{"y", false, {}}}, {}};
  CHECK(well_sorted(ok, sk));
  CHECK_FALSE(well_sorted(bad, sk));
  CHECK(sort_of(ev("{}")) == set_of(BaseType::Int));
}

TEST_CASE("matching binds every field and rejects arity mismatches")
{
  Template t{{Binder{"x", false, {}}, Binder{"u", true, {}}}, {}};
  auto s = match({str_value("a"), loc_value("l2")}, t);
  REQUIRE(s);
  CHECK(s->values.at("x") == str_value("a"));
  CHECK(s->values.at("u") == loc_value("l2"));
  CHECK_FALSE(match({str_value("a")}, t));
}

TEST_CASE("substitution respects shadowing binders")
{
  Subst s;
  s.values["x"] = int_value(4);
  ProcP p = parse_process("delete(T@$l, (!x), x = 1).insert(T@$l, (x)).nil");
  ProcP q = apply_subst(s, p);
  const auto & outer = std::get<Process::Prefix>(q->node);
  const auto & del = std::get<Action::Delete>(outer.action.node);
  const auto & cmp = std::get<Pred::Cmp>(del.pred->node);
  CHECK(std::holds_alternative<Expr::Var>(cmp.left->node));
  const auto & ins = std::get<Action::Insert>(std::get<Process::Prefix>(outer.cont->node).action.node);
  CHECK(*ins.tuple.items.at(0) == *lit(int_value(4)));
}

TEST_CASE("minimal rows under each order")
{
  Rows r;
  r.add(row({2, 1}));
  r.add(row({1, 9}));
  r.add(row({1, 3}));
  using K = OrderSpec::Kind;
  CHECK(minimal(r, OrderSpec{K::Lex, 0}) == std::vector<ValueTuple>{row({1, 3})});
  // Ties on the ordering column are incomparable, so both are minimal.
  auto asc = minimal(r, OrderSpec{K::Asc, 1});
  CHECK(asc.size() == 2);
  CHECK(minimal(r, OrderSpec{K::Desc, 1}) == std::vector<ValueTuple>{row({2, 1})});
  CHECK(minimal(r, OrderSpec{K::Unordered, 0}).size() == 3);
  CHECK(minimal(Rows{}, OrderSpec{K::Lex, 0}).empty());
}

TEST_CASE("join is a flattened product")
{
  Table a{Interface{"A", {scalar(BaseType::Int)}}, {}};
  Table b{Interface{"B", {scalar(BaseType::String), scalar(BaseType::Int)}}, {}};
  a.rows.add(row({1}));
  a.rows.add(row({2}));
  a.rows.add(row({2}));
  b.rows.add({str_value("x"), int_value(7)});
  b.rows.add({str_value("y"), int_value(8)});
  std::vector<Located> located{{"l1", &a}, {"l2", &b}};
  std::vector<TableRef> refs{TableRef{TableRef::ByName{"A", LocRef{"l1", false, {}}}, {}},
                             TableRef{TableRef::ByName{"B", LocRef{"l2", false, {}}}, {}}};
  auto sk = join_schemas(refs, located);
  REQUIRE(sk);
  CHECK(sk->size() == 3);
  auto rows = join_rows(refs, located);
  REQUIRE(rows);
  CHECK(rows->size() == 6);
  CHECK(rows->count({int_value(2), str_value("y"), int_value(8)}) == 2);
  // A locality variable or an absent table leaves the join undefined.
  std::vector<TableRef> open{TableRef{TableRef::ByName{"A", LocRef{"u", true, {}}}, {}}};
  CHECK_FALSE(join_schemas(open, located));
  std::vector<TableRef> absent{TableRef{TableRef::ByName{"C", LocRef{"l1", false, {}}}, {}}};
  CHECK_FALSE(join_rows(absent, located));
}

TEST_CASE("schema projection")
{
  Schema sk{scalar(BaseType::String), scalar(BaseType::Int), set_of(BaseType::Id)};
  Template t{{Binder{"a", false, {}}, Binder{"n", false, {}}, Binder{"s", false, {}}}, {}};
  auto p = project_schema(sk, t, Tuple{{var("n"), var("a"), lit(str_value("k")), var("s")}, {}});
  REQUIRE(p);
  CHECK(*p == Schema{scalar(BaseType::Int), scalar(BaseType::String), scalar(BaseType::String), set_of(BaseType::Id)});
  auto q = project_schema(sk, t, Tuple{{arith(ArithOp::Add, var("n"), lit(int_value(1)))}, {}});
  REQUIRE(q);
  CHECK(*q == Schema{scalar(BaseType::Int)});
  CHECK_FALSE(project_schema(sk, t, Tuple{{var("zz")}, {}}));
  CHECK_FALSE(project_schema(sk, t, Tuple{{arith(ArithOp::Add, var("a"), lit(int_value(1)))}, {}}));
}

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "kdb/semantics/run.hpp"
#include "kdb/syntax/parser.hpp"
#include "kdb/typesys/types.hpp"
#include "support/generators.hpp"

using namespace kdb;

namespace {

std::string slurp(const std::string & name)
{
  std::ifstream in(std::string(KDB_EXAMPLES_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<TypeErrorKind> kinds(const std::string & src)
{
  std::vector<TypeErrorKind> out;
  for (const TypeError & e : check_system(parse_system(src))) out.push_back(e.kind);
  return out;
}

bool reports(const std::string & src, TypeErrorKind k)
{
  auto ks = kinds(src);
  return std::find(ks.begin(), ks.end(), k) != ks.end();
}

const char * k_t = "schema T : (Int, String)\n";

}  // namespace

TEST_CASE("the case study is well typed")
{
  CHECK(check_system(parse_system(slurp("dept_stores.kdb"))).empty());
}

TEST_CASE("the mis-insertion is reported once")
{
  TypeErrors errs = check_system(parse_system(slurp("bad_insert.kdb")));
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].kind == TypeErrorKind::TupleArity);
  CHECK(errs[0].span.line == 7);
  CHECK(errs[0].span.col == 24);
}

TEST_CASE("diagnostic kinds")
{
  using K = TypeErrorKind;
  std::string t = k_t;
  CHECK(kinds(t + "$l :: table T : (Int, String) = {(1, \"a\")} | insert(T@$l, (1, \"b\")).nil").empty());
  CHECK(reports(t + "$l :: insert(T@$l, (1, 2)).nil", K::TupleSort));
  CHECK(reports(t + "$l :: insert(T@$l, (1)).nil", K::TupleArity));
  CHECK(reports(t + "$l :: delete(T@$l, (!a), true).nil", K::TemplateArity));
  CHECK(reports(t + "$l :: delete(T@$l, (!@a, !b), true).nil", K::TemplateSort));
  CHECK(reports(t + "$l :: delete(T@$l, (!a, !b), a = b).nil", K::OperandMismatch));
  CHECK(reports(t + "$l :: delete(T@$l, (!a, !b), a = 1 && {1, \"x\"} subset {1}).nil", K::HeterogeneousSet));
  CHECK(reports(t + "$l :: delete(T@$l, (!a, !b), KLD < SH).nil", K::OrderingOnIdOrLoc));
  CHECK(reports(t + "$l :: delete(T@$l, (!a, !b), $l >= $l).nil", K::OrderingOnIdOrLoc));
  CHECK(reports("$l :: insert(U@$l, (1)).nil", K::UnknownTable));
  CHECK(reports(t + "$l :: table T : (Int, String) = {(1, 2)}", K::TableRow));
  CHECK(reports(t + "$l :: aggr(T@$l, (!a, !b), true, sum(2), (!r)).nil", K::AggrSignature));
  CHECK(reports(t + "$l :: create(T@$l, (Int)).nil", K::SchemaConflict));
  CHECK(reports(t + "$l :: foreach(T@$l, (!a, !b), true, asc(5)) : nil", K::OrderColumn));
  CHECK(reports("let p(n: Int) := nil in $l :: p(\"s\")", K::ArgumentType));
  CHECK(reports("$l :: nil || ERR", K::ErrNet));
  CHECK(reports(t + "$l :: insert(T@$l, (x, \"a\")).nil", K::UnboundVariable));
  CHECK(reports(t + "$l :: aggr(T@$l, (!a, !b), true, count, (!r)).insert(T@r, (1, \"a\")).nil", K::VariableKind));
  CHECK(reports("schema T : (Int)\nschema T : (String)\n$l :: nil", K::SchemaConflict));
}

TEST_CASE("procedures are checked under their parameters")
{
  std::string t = k_t;
  CHECK(kinds(t + "let p(n: Int, u: Loc) := insert(T@u, (n, \"a\")).nil in $l :: p(1, $l)").empty());
  CHECK(reports(t + "let p(n: String) := insert(T@$l, (n, \"a\")).nil in $l :: p(\"a\")", TypeErrorKind::TupleSort));
}

TEST_CASE("diagnostics as JSON")
{
  TypeErrors errs = check_system(parse_system(std::string(k_t) + "$l :: insert(T@$l, (1)).nil"));
  nlohmann::json j = errors_json(errs);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["kind"] == "tuple-arity");
  CHECK(j[0]["span"]["line"] == 2);
  CHECK(j[0].contains("message"));
}

TEST_CASE("the type environment restores shadowed bindings")
{
  TypeEnv g;
  g.bind("x", SType::of_data(MType{BaseType::Int, false}));
  auto m = g.mark();
  g.bind("x", SType::locality());
  CHECK(g.lookup("x")->kind == SType::Kind::Locality);
  g.restore(m);
  CHECK(g.lookup("x")->kind == SType::Kind::Data);
  CHECK(g.lookup("y") == nullptr);
}

TEST_CASE("generated ill-typed systems are rejected")
{
  gen::Rng rng(99);
  for (int i = 0; i < 300; ++i) CHECK_FALSE(check_system(gen::ill_typed(rng)).empty());
}

TEST_CASE("runtime states of well-typed systems stay typed")
{
  gen::Rng rng(123);
  for (int i = 0; i < 100; ++i) {
    System sys = gen::well_typed(rng);
    TypeErrors scratch;
    SchemaMap nabla = build_schema_map(sys, scratch);
    Trace tr = run(sys, static_cast<std::uint64_t>(i), 20);
    for (const TraceStep & s : tr.steps) CHECK(check_net(sys, nabla, *to_net(s.state)).empty());
  }
}

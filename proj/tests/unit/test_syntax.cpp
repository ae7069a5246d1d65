#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "kdb/syntax/binding.hpp"
#include "kdb/syntax/lexer.hpp"
#include "kdb/syntax/parser.hpp"
#include "kdb/syntax/render.hpp"
#include "kdb/values/eval.hpp"
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

// Position of the parse error, or {0, 0} when the source parses.
std::pair<std::uint32_t, std::uint32_t> error_at(const std::string & src)
{
  try {
    parse_system(src);
  } catch (const ParseError & e) {
    return {e.line(), e.col()};
  }
  return {0, 0};
}

void collect_binders(const Process & p, std::vector<std::string> & out);

void collect_binders(const Template & t, std::vector<std::string> & out)
{
  for (const Binder & b : t.fields) out.push_back(b.name);
}

void collect_binders(const Process & p, std::vector<std::string> & out)
{
  std::visit(
      [&](const auto & x) {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, Process::Prefix>) {
          std::visit(
              [&](const auto & a) {
                using A = std::decay_t<decltype(a)>;
                if constexpr (requires { a.tmpl; }) collect_binders(a.tmpl, out);
                if constexpr (std::is_same_v<A, Action::Aggr>) collect_binders(a.result, out);
                if constexpr (std::is_same_v<A, Action::Select>) out.push_back(a.bind);
              },
              x.action.node);
          collect_binders(*x.cont, out);
        } else if constexpr (std::is_same_v<X, Process::Foreach>) {
          collect_binders(x.tmpl, out);
          collect_binders(*x.body, out);
        } else if constexpr (std::is_same_v<X, Process::Seq>) {
          collect_binders(*x.first, out);
          collect_binders(*x.second, out);
        }
      },
      p.node);
}

}  // namespace

TEST_CASE("lexer")
{
  LexResult r = lex("insert(KLD@$l1, (\"a\\\"b\", 12)) || x ++ y != z // comment\n");
  std::vector<Tok> kinds;
  for (const Token & t : r.tokens) kinds.push_back(t.kind);
  std::vector<Tok> want{Tok::Ident, Tok::LParen, Tok::Tid,   Tok::At,       Tok::Loc,   Tok::Comma, Tok::LParen,
                        Tok::StrLit, Tok::Comma, Tok::IntLit, Tok::RParen,  Tok::RParen, Tok::BarBar, Tok::Ident,
                        Tok::PlusPlus, Tok::Ident, Tok::Ne,   Tok::Ident,   Tok::End};
  CHECK(kinds == want);
  CHECK(r.tokens[4].text == "l1");
  CHECK(r.tokens[7].text == "a\"b");
  CHECK(r.tokens[13].line == 1);
  CHECK(r.tokens[13].col == 34);
  CHECK(r.names.count("l1") == 1);
  CHECK_THROWS_AS(lex("\"open"), ParseError);
  CHECK_THROWS_AS(lex("$ x"), ParseError);
}

TEST_CASE("operator precedence")
{
  auto v = eval_expr(*parse_expr("1 + 2 * 3 - 8 / 4"));
  REQUIRE(v);
  CHECK(*v == int_value(5));
  CHECK(render(*parse_expr("(1 + 2) * 3")) == "(1 + 2) * 3");
  CHECK(render(*parse_pred("not 1 = 2 && 3 < 4")) == "not 1 = 2 && 3 < 4");
}

TEST_CASE("the case study parses and renders back to the same system")
{
  System sys = parse_system(slurp("dept_stores.kdb"));
  CHECK(sys.schemas.size() == 3);
  REQUIRE(sys.procedures.size() == 1);
  CHECK(sys.procedures[0].name == "stat");
  CHECK(parse_system(render(sys)) == sys);
}

TEST_CASE("parse errors carry positions")
{
  CHECK(error_at("$l1 :: insert(T@$l1, (1).nil") == std::pair<std::uint32_t, std::uint32_t>{1, 25});
  CHECK(error_at("$l1 :: nil\n|| $l2 :: foo(").first == 2);
  CHECK(error_at("$l1 :: undefined_proc()").first == 1);
  CHECK(error_at("let p(x: Int) := nil in $l1 :: p()").first == 1);
  CHECK(error_at("$l1 :: table _ : (Int) = {}").first == 1);
  CHECK(error_at("$l1 :: nil") == std::pair<std::uint32_t, std::uint32_t>{0, 0});
}

TEST_CASE("alpha renaming makes binders distinct")
{
  System sys = parse_system(
      "$l1 :: delete(T@$l1, (!x), x = 1).delete(T@$l1, (!x), x = 2).aggr(T@$l1, (!x), true, count, (!x)).insert(T@$l1, (x)).nil");
  const Net & n = *sys.net;
  const auto & node = std::get<Net::Node>(n.node);
  const auto & proc = *std::get<Component::Proc>(node.comp->node).process;
  std::vector<std::string> names;
  collect_binders(proc, names);
  REQUIRE(names.size() == 4);
  std::set<std::string> distinct(names.begin(), names.end());
  CHECK(distinct.size() == 4);
  CHECK(free_vars(proc).empty());
}

TEST_CASE("locality binders and variables")
{
  ProcP p = parse_process("aggr(T@$l, (!@u), true, count, (!n)).insert(S@$l, (n)).nil");
  CHECK(is_closed(*p));
  ProcP q = parse_process("delete(T@u, (!x), true).nil");
  CHECK(free_vars(*q) == std::set<std::string>{"u"});
}

TEST_CASE("sequences in prefix position need parentheses")
{
  ProcP p = parse_process("drop(T@$l).(nil ; nil)");
  CHECK(std::holds_alternative<Process::Prefix>(p->node));
  ProcP q = parse_process("drop(T@$l).nil ; nil");
  CHECK(std::holds_alternative<Process::Seq>(q->node));
  CHECK(parse_process(render(*p)) == p);
  CHECK(parse_process(render(*q)) == q);
}

TEST_CASE("round trip over generated systems")
{
  gen::Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    System s = gen::arbitrary(rng);
    std::string text = render(s);
    System back = parse_system(text);
    CHECK_MESSAGE(back == s, text);
    CHECK(render(back) == text);
  }
}

#include <doctest.h>

#include <algorithm>
#include <random>

#include "kdb/net/canonical.hpp"
#include "kdb/net/dump.hpp"
#include "kdb/syntax/parser.hpp"
#include "kdb/syntax/render.hpp"
#include "kdb/values/subst.hpp"
#include "support/generators.hpp"

using namespace kdb;

namespace {

std::string key(const std::string & net_src) { return state_key(canonicalize(*parse_system(net_src).net)); }

// Sorted item renderings after renaming localities by m.
std::vector<std::string> renamed_items(const CanonicalNet & cn, const LocRenaming & m)
{
  std::vector<std::string> out;
  for (const Item & it : cn.items) {
    Item r = it;
    if (auto f = m.find(it.loc); f != m.end()) r.loc = f->second;
    if (it.is_table())
      r.body = rename_localities(std::get<Shared<Table>>(it.body), m);
    else
      r.body = rename_localities(it.process(), m);
    out.push_back(render_item(r));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Equality up to a bijection between the restricted names.
bool alpha_equivalent(const CanonicalNet & a, const CanonicalNet & b)
{
  if (a.err || b.err) return a.err == b.err;
  if (a.restricted.size() != b.restricted.size()) return false;
  std::vector<std::string> want = renamed_items(a, {});
  std::vector<std::string> perm = a.restricted;
  std::sort(perm.begin(), perm.end());
  do {
    LocRenaming m;
    for (std::size_t i = 0; i < perm.size(); ++i) m[b.restricted[i]] = perm[i];
    if (renamed_items(b, m) == want) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

bool alpha_eq(const std::string & x, const std::string & y)
{
  return alpha_equivalent(canonicalize(*parse_system(x).net), canonicalize(*parse_system(y).net));
}

const char * k_a = "$l1 :: table T : (Int) = {(1), (2)}";
const char * k_b = "$l2 :: drop(T@$l1).nil";
const char * k_c = "$l1 :: insert(T@$l1, (3)).nil";

}  // namespace

TEST_CASE("parallel composition is commutative and associative with unit nil")
{
  std::string a = k_a, b = k_b, c = k_c;
  std::string base = key(a + " || " + b + " || " + c);
  CHECK(key(c + " || " + a + " || " + b) == base);
  CHECK(key(a + " || (" + b + " || " + c + ")") == base);
  CHECK(key(a + " || nil || " + b + " || " + c + " || nil") == base);
  CHECK(key(a + " || " + c) != base);
}

TEST_CASE("components at one locality split into nodes")
{
  CHECK(key("$l1 :: table T : (Int) = {(1), (2)} | insert(T@$l1, (3)).nil") == key(std::string(k_a) + " || " + k_c));
  CHECK(key("$l1 :: nil | table T : (Int) = {(1), (2)}") == key(k_a));
}

TEST_CASE("table rows are a multiset")
{
  CHECK(key("$l1 :: table T : (Int) = {(2), (1), (2)}") == key("$l1 :: table T : (Int) = {(2), (2), (1)}"));
  CHECK(key("$l1 :: table T : (Int) = {(2), (1), (2)}") != key("$l1 :: table T : (Int) = {(2), (1)}"));
}

TEST_CASE("restriction")
{
  // Restricted names are identified up to renaming.
  CHECK(alpha_eq("(new $a) $a :: table T : (Int) = {(1)}", "(new $b) $b :: table T : (Int) = {(1)}"));
  CHECK_FALSE(alpha_eq("(new $a) $a :: table T : (Int) = {(1)}", "$a :: table T : (Int) = {(1)}"));
  CHECK(alpha_eq("(new $a) (new $b) ($a :: drop(T@$b).nil || $b :: nil)", "(new $b) (new $a) ($b :: drop(T@$a).nil)"));
  CHECK_FALSE(alpha_eq("(new $a) (new $b) $a :: drop(T@$b).nil", "(new $a) (new $b) $a :: drop(T@$a).nil"));
  // Scope extrusion when the name is not free in the other side.
  CHECK(key("((new $a) $a :: table T : (Int) = {(1)}) || $l2 :: nil") ==
        key("(new $a) ($a :: table T : (Int) = {(1)} || $l2 :: nil)"));
  CHECK(alpha_eq("$a :: drop(T@$a).nil || (new $a) $a :: drop(T@$a).nil", "(new $z) ($a :: drop(T@$a).nil || $z :: drop(T@$z).nil)"));
  // Extrusion does not capture a free occurrence of the same name.
  CanonicalNet cn = canonicalize(*parse_system("((new $a) $a :: table T : (Int) = {}) || $a :: table T : (Int) = {}").net);
  REQUIRE(cn.restricted.size() == 1);
  CHECK(cn.restricted[0] != "a");
  CHECK(no_rep(lid(cn)));
  CHECK(cn.sites.count("a") == 1);
  CHECK(cn.sites.count(cn.restricted[0]) == 1);
}

TEST_CASE("ERR absorbs its context")
{
  CanonicalNet cn = canonicalize(*parse_system(std::string(k_a) + " || ERR").net);
  CHECK(cn.err);
  CHECK(state_key(cn) == "ERR");
  CHECK(key("ERR || ERR") == "ERR");
  CHECK_FALSE(ok(cn));
}

TEST_CASE("lid and no_rep")
{
  CanonicalNet one = canonicalize(*parse_system("$l1 :: table T : (Int) = {} || $l1 :: table S : (Int) = {} || $l2 :: table T : (Int) = {}").net);
  Lid l = lid(one);
  CHECK(l.size() == 3);
  CHECK(l.count({"l1", "T"}) == 1);
  CHECK(no_rep(l));
  CHECK(ok(one));
  CanonicalNet two = canonicalize(*parse_system("$l1 :: table T : (Int) = {} || $l1 :: table T : (Int) = {(1)}").net);
  CHECK(lid(two).count({"l1", "T"}) == 2);
  CHECK_FALSE(no_rep(lid(two)));
  CHECK(find_tables(two, "l1", "T").size() == 2);
  CHECK(find_table_items(two, "l2", "T").empty());
}

TEST_CASE("reordering the items of generated nets preserves the key")
{
  gen::Rng rng(8);
  std::mt19937 shuffle_rng(9);
  for (int i = 0; i < 200; ++i) {
    System sys = gen::arbitrary(rng);
    CanonicalNet cn = canonicalize(*sys.net);
    std::string k = state_key(cn);
    CanonicalNet shuffled = cn;
    std::shuffle(shuffled.items.begin(), shuffled.items.end(), shuffle_rng);
    CHECK(state_key(shuffled) == k);
    CHECK(state_key(canonicalize(*to_net(shuffled))) == k);
    CHECK(lid(canonicalize(*to_net(cn))) == lid(cn));
  }
}

TEST_CASE("table dump")
{
  CanonicalNet cn = canonicalize(*parse_system("$l2 :: table B : (Int, {Id}) = {(2, {X}), (1, {})}\n"
                                               "|| $l1 :: table A : (Loc, String) = {($l2, \"s\")}")
                                     .net);
  nlohmann::json j = dump_tables(cn);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["loc"] == "l1");
  CHECK(j[0]["tid"] == "A");
  CHECK(j[1]["rows"].size() == 2);
  CHECK(j[1]["rows"][0][0] == 1);
  CHECK(j[1]["rows"][1][0] == 2);
  CHECK(value_json(int_value(7)) == 7);
  CHECK(value_json(Int("123456789012345678901234567890")) == "123456789012345678901234567890");
}

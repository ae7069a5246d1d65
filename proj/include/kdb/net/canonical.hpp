#pragma once

#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kdb/syntax/ast.hpp"

namespace kdb {

// One located process or table of a flattened net.
struct Item {
  std::string loc;
  std::variant<ProcP, Shared<Table>> body;

  bool is_table() const { return body.index() == 1; }
  const ProcP & process() const { return std::get<ProcP>(body); }
  const Table & table() const { return *std::get<Shared<Table>>(body); }

  friend bool operator==(const Item &, const Item &) = default;
};

// A net up to structural congruence: restrictions extruded to the front with
// distinct names, parallel compositions flattened, inert processes dropped.
// Items keep the order in which they were produced. `sites` are the
// localities known to exist: those hosting a node in the source net and the
// restricted ones.
struct CanonicalNet {
  std::vector<std::string> restricted;
  std::vector<Item> items;
  bool err = false;
  std::set<std::string> sites;
};

CanonicalNet canonicalize(const Net & n);
NetP to_net(const CanonicalNet & cn);

// The net ERR, keeping only the site set.
CanonicalNet err_state(const CanonicalNet & from);

using LidPair = std::pair<std::string, std::string>;
using Lid = Multiset<LidPair>;

Lid lid(const Net & n);
Lid lid(const CanonicalNet & cn);
bool no_rep(const Lid & s);

std::vector<const Table *> find_tables(const CanonicalNet & cn, const std::string & loc, const std::string & tid);
std::vector<std::size_t> find_table_items(const CanonicalNet & cn, const std::string & loc, const std::string & tid);
bool ok(const CanonicalNet & cn);

std::string render_item(const Item & it);
// Identifies a canonical net up to reordering of parallel items.
std::string state_key(const CanonicalNet & cn);

}  // namespace kdb

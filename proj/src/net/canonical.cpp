#include "kdb/net/canonical.hpp"

#include <algorithm>

#include "kdb/syntax/binding.hpp"
#include "kdb/syntax/render.hpp"
#include "kdb/values/subst.hpp"

namespace kdb {

namespace {

class Flattener {
 public:
  explicit Flattener(const Net & root) : claimed_(free_locs(root)) {}

  CanonicalNet out;

  void net(const Net & n)
  {
    if (auto * par = std::get_if<Net::Par>(&n.node)) {
      net(*par->left);
      net(*par->right);
    } else if (auto * r = std::get_if<Net::Restrict>(&n.node)) {
      std::string name = r->loc;
      if (claimed_.count(name)) name = fresh(r->loc);
      claimed_.insert(name);
      out.restricted.push_back(name);
      out.sites.insert(name);
      auto prev = renaming_.find(r->loc);
      std::optional<std::string> saved;
      if (prev != renaming_.end()) saved = prev->second;
      renaming_[r->loc] = name;
      net(*r->inner);
      if (saved) renaming_[r->loc] = *saved;
      else renaming_.erase(r->loc);
    } else if (auto * nd = std::get_if<Net::Node>(&n.node)) {
      std::string loc = mapped(nd->loc);
      out.sites.insert(loc);
      component(loc, *nd->comp);
    } else if (std::holds_alternative<Net::Err>(n.node)) {
      out.err = true;
    }
  }

 private:
  void component(const std::string & loc, const Component & c)
  {
    if (auto * p = std::get_if<Component::Proc>(&c.node)) {
      if (is_nil(*p->process)) return;
      out.items.push_back(Item{loc, rename_localities(p->process, active())});
    } else if (auto * t = std::get_if<Component::Tab>(&c.node)) {
      out.items.push_back(Item{loc, rename_localities(t->table, active())});
    } else {
      const auto & par = std::get<Component::Par>(c.node);
      component(loc, *par.left);
      component(loc, *par.right);
    }
  }

  std::string mapped(const std::string & l) const
  {
    auto it = renaming_.find(l);
    return it == renaming_.end() ? l : it->second;
  }

  LocRenaming active() const
  {
    LocRenaming m;
    for (const auto & [from, to] : renaming_)
      if (from != to) m.emplace(from, to);
    return m;
  }

  std::string fresh(const std::string & base)
  {
    std::string stem = base.substr(0, base.find('#'));
    for (;;) {
      std::string c = stem + "#" + std::to_string(++counter_);
      if (!claimed_.count(c)) return c;
    }
  }

  std::set<std::string> claimed_;
  LocRenaming renaming_;
  std::size_t counter_ = 0;
};

}  // namespace

CanonicalNet canonicalize(const Net & n)
{
  Flattener f(n);
  f.net(n);
  return std::move(f.out);
}

NetP to_net(const CanonicalNet & cn)
{
  NetP acc;
  auto join = [&](NetP x) { acc = acc ? par_net(acc, x) : x; };
  for (const Item & it : cn.items) {
    if (it.is_table()) join(node_net(it.loc, CompP(Component{Component::Tab{std::get<Shared<Table>>(it.body)}, {}})));
    else join(node_net(it.loc, proc_comp(it.process())));
  }
  if (cn.err) join(err_net());
  if (!acc) acc = nil_net();
  for (auto r = cn.restricted.rbegin(); r != cn.restricted.rend(); ++r)
    acc = NetP(Net{Net::Restrict{*r, acc}, {}});
  return acc;
}

CanonicalNet err_state(const CanonicalNet & from)
{
  CanonicalNet out;
  out.err = true;
  out.sites = from.sites;
  return out;
}

Lid lid(const Net & n)
{
  Lid out;
  if (auto * par = std::get_if<Net::Par>(&n.node)) {
    out = ms_union(lid(*par->left), lid(*par->right));
  } else if (auto * r = std::get_if<Net::Restrict>(&n.node)) {
    out = lid(*r->inner);
  } else if (auto * nd = std::get_if<Net::Node>(&n.node)) {
    std::vector<const Component *> stack{nd->comp.get()};
    while (!stack.empty()) {
      const Component * c = stack.back();
      stack.pop_back();
      if (auto * t = std::get_if<Component::Tab>(&c->node)) {
        out.add({nd->loc, t->table->iface.tid.value_or("_")});
      } else if (auto * p = std::get_if<Component::Par>(&c->node)) {
        stack.push_back(p->left.get());
        stack.push_back(p->right.get());
      }
    }
  }
  return out;
}

Lid lid(const CanonicalNet & cn)
{
  Lid out;
  if (cn.err) return out;
  for (const Item & it : cn.items)
    if (it.is_table()) out.add({it.loc, it.table().iface.tid.value_or("_")});
  return out;
}

bool no_rep(const Lid & s)
{
  return std::all_of(s.begin(), s.end(), [](const auto & e) { return e.second == 1; });
}

std::vector<std::size_t> find_table_items(const CanonicalNet & cn, const std::string & loc, const std::string & tid)
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cn.items.size(); ++i) {
    const Item & it = cn.items[i];
    if (it.is_table() && it.loc == loc && it.table().iface.tid == tid) out.push_back(i);
  }
  return out;
}

std::vector<const Table *> find_tables(const CanonicalNet & cn, const std::string & loc, const std::string & tid)
{
  std::vector<const Table *> out;
  for (std::size_t i : find_table_items(cn, loc, tid)) out.push_back(&cn.items[i].table());
  return out;
}

bool ok(const CanonicalNet & cn) { return !cn.err; }

std::string render_item(const Item & it)
{
  if (it.is_table()) return "$" + it.loc + " :: " + render(it.table());
  return "$" + it.loc + " :: " + render(*it.process());
}

std::string state_key(const CanonicalNet & cn)
{
  if (cn.err) return "ERR";
  std::vector<std::string> parts;
  parts.reserve(cn.items.size());
  for (const Item & it : cn.items) parts.push_back(render_item(it));
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (const std::string & r : cn.restricted) key += "(new $" + r + ")";
  for (const std::string & p : parts) key += p + "\n||\n";
  return key;
}

}  // namespace kdb

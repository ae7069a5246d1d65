#include "kdb/net/dump.hpp"

#include <algorithm>

namespace kdb {

namespace {

nlohmann::json int_json(const Int & i)
{
  if (i >= std::numeric_limits<std::int64_t>::min() && i <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(i);
  return i.str();
}

}  // namespace

nlohmann::json value_json(const Value & v)
{
  return std::visit(
      [](const auto & x) -> nlohmann::json {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, Int>) {
          return int_json(x);
        } else if constexpr (std::is_same_v<X, Str>) {
          return x.text;
        } else if constexpr (std::is_same_v<X, TidV>) {
          return {{"tid", x.name}};
        } else if constexpr (std::is_same_v<X, LocV>) {
          return {{"loc", x.name}};
        } else {
          nlohmann::json arr = nlohmann::json::array();
          for (const auto & [e, n] : x.items)
            for (std::uint64_t k = 0; k < n; ++k) arr.push_back(value_json(to_value(e)));
          return arr;
        }
      },
      v);
}

nlohmann::json schema_json(const Schema & sk)
{
  nlohmann::json arr = nlohmann::json::array();
  for (const MType & m : sk) arr.push_back(to_string(m));
  return arr;
}

nlohmann::json dump_tables(const CanonicalNet & cn)
{
  std::vector<const Item *> tables;
  for (const Item & it : cn.items)
    if (it.is_table()) tables.push_back(&it);
  std::stable_sort(tables.begin(), tables.end(), [](const Item * a, const Item * b) {
    return std::tie(a->loc, a->table().iface.tid) < std::tie(b->loc, b->table().iface.tid);
  });
  nlohmann::json out = nlohmann::json::array();
  for (const Item * it : tables) {
    const Table & t = it->table();
    nlohmann::json rows = nlohmann::json::array();
    for (const auto & [row, n] : t.rows) {
      nlohmann::json r = nlohmann::json::array();
      for (const Value & v : row) r.push_back(value_json(v));
      for (std::uint64_t k = 0; k < n; ++k) rows.push_back(r);
    }
    out.push_back({{"loc", it->loc},
                   {"tid", t.iface.tid ? nlohmann::json(*t.iface.tid) : nlohmann::json(nullptr)},
                   {"schema", schema_json(t.iface.schema)},
                   {"rows", std::move(rows)}});
  }
  return out;
}

}  // namespace kdb

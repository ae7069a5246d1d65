#include "kdb/semantics/trace_json.hpp"

#include "kdb/net/dump.hpp"

namespace kdb {

nlohmann::json lid_json(const Lid & l)
{
  nlohmann::json arr = nlohmann::json::array();
  for (const auto & [p, n] : l)
    for (std::uint64_t k = 0; k < n; ++k) arr.push_back({p.first, p.second});
  return arr;
}

nlohmann::json step_json(std::size_t index, const TraceStep & s)
{
  nlohmann::json via = nlohmann::json::array();
  for (Rule r : s.label.via) via.push_back(to_string(r));
  return {{"index", index},
          {"rule", to_string(s.label.rule)},
          {"via", std::move(via)},
          {"actor", s.label.actor},
          {"detail", s.label.detail},
          {"lid", lid_json(lid(s.state))},
          {"ok", ok(s.state)}};
}

std::string trace_jsonl(const Trace & tr)
{
  std::string out;
  for (std::size_t i = 0; i < tr.steps.size(); ++i) out += step_json(i, tr.steps[i]).dump() + "\n";
  const CanonicalNet & last = tr.final_state();
  nlohmann::json fin = {{"terminal", to_string(tr.terminal)}, {"tables", dump_tables(last)}};
  out += fin.dump() + "\n";
  return out;
}

}  // namespace kdb

#pragma once

#include <string>

#include <json.hpp>

#include "kdb/semantics/run.hpp"

namespace kdb {

nlohmann::json lid_json(const Lid & l);
nlohmann::json step_json(std::size_t index, const TraceStep & s);

// One JSON object per line: each step as {index, rule, via, actor, detail,
// lid, ok}, then {terminal, tables}.
std::string trace_jsonl(const Trace & tr);

}  // namespace kdb

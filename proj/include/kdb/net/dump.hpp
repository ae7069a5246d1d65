#pragma once

#include <json.hpp>

#include "kdb/net/canonical.hpp"

namespace kdb {

// Integers become JSON numbers when they fit 64 bits and strings otherwise;
// table identifiers and localities are tagged objects; multisets are arrays.
nlohmann::json value_json(const Value & v);
nlohmann::json schema_json(const Schema & sk);

// [{loc, tid, schema, rows}] sorted by locality and identifier, rows in
// lexicographic order and repeated by multiplicity.
nlohmann::json dump_tables(const CanonicalNet & cn);

}  // namespace kdb

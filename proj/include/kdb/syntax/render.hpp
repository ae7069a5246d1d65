#pragma once

#include <string>

#include "kdb/syntax/ast.hpp"

namespace kdb {

// Concrete syntax accepted by the parser. Anonymous tables print as
// `table _ : ...`, which only appears in runtime snapshots.
std::string render(const Expr & e);
std::string render(const Pred & p);
std::string render(const Tuple & t);
std::string render(const Template & t);
std::string render(const LocRef & l);
std::string render(const TableRef & r);
std::string render(const Table & t);
std::string render(const AggrFn & f);
std::string render(const OrderSpec & o);
std::string render(const Action & a);
std::string render(const Process & p);
std::string render(const Component & c);
std::string render(const Net & n);
std::string render(const System & s);

}  // namespace kdb

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kdb/values/multiset.hpp"

namespace kdb {

// Integers are unbounded; source literals are restricted to 64 bits.
using Int = boost::multiprecision::cpp_int;

enum class BaseType : std::uint8_t { Int, String, Id, Loc };

struct MType {
  BaseType base = BaseType::Int;
  bool is_set = false;

  friend bool operator==(const MType &, const MType &) = default;
};

using Schema = std::vector<MType>;

std::string to_string(BaseType b);
std::string to_string(const MType & m);
std::string to_string(const Schema & sk);

struct Str {
  std::string text;
  friend auto operator<=>(const Str &, const Str &) = default;
};

struct TidV {
  std::string name;
  friend auto operator<=>(const TidV &, const TidV &) = default;
};

struct LocV {
  std::string name;
  friend auto operator<=>(const LocV &, const LocV &) = default;
};

using Scalar = std::variant<Int, Str, TidV, LocV>;

// A multiset of scalars of one kind. `elem` remembers the element sort when
// it is known from context (a schema column or parameter type); it matters
// only for empty sets and is ignored by comparisons.
struct SetV {
  Multiset<Scalar> items;
  std::optional<BaseType> elem;

  friend bool operator==(const SetV & a, const SetV & b) { return a.items == b.items; }
  friend bool operator<(const SetV & a, const SetV & b) { return a.items < b.items; }
};

using Value = std::variant<Int, Str, TidV, LocV, SetV>;
using ValueTuple = std::vector<Value>;

inline Value int_value(long long v) { return Int(v); }
inline Value str_value(std::string s) { return Str{std::move(s)}; }
inline Value tid_value(std::string s) { return TidV{std::move(s)}; }
inline Value loc_value(std::string s) { return LocV{std::move(s)}; }

// Scalar kind of a value, nullopt for sets.
std::optional<BaseType> scalar_kind(const Value & v);
BaseType scalar_kind(const Scalar & s);

// Element kind of a set value: from its elements, else from its tag.
std::optional<BaseType> set_elem_kind(const SetV & s);

Value to_value(const Scalar & s);
std::optional<Scalar> to_scalar(const Value & v);

// Attaches element tags to empty-or-not sets according to a sort.
Value tag_sorts(Value v, const MType & m);
ValueTuple tag_sorts(ValueTuple t, const Schema & sk);

// Source syntax of a value: 5, -3, "a\"b", KLD, $l1, {1, 1, 2}.
std::string render_value(const Value & v);
std::string render_value(const Scalar & s);
std::string render_tuple(const ValueTuple & t);
std::string quote_string(const std::string & s);

struct Interface {
  std::optional<std::string> tid;  // nullopt is the anonymous interface
  Schema schema;

  friend bool operator==(const Interface &, const Interface &) = default;
};

struct Table {
  Interface iface;
  Multiset<ValueTuple> rows;

  friend bool operator==(const Table & a, const Table & b)
  {
    return a.iface == b.iface && a.rows == b.rows;
  }
};

}  // namespace kdb

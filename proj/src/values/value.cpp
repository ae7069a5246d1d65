#include "kdb/values/value.hpp"

#include <sstream>

namespace kdb {

std::string to_string(BaseType b)
{
  switch (b) {
    case BaseType::Int: return "Int";
    case BaseType::String: return "String";
    case BaseType::Id: return "Id";
    case BaseType::Loc: return "Loc";
  }
  return "?";
}

std::string to_string(const MType & m)
{
  return m.is_set ? "{" + to_string(m.base) + "}" : to_string(m.base);
}

std::string to_string(const Schema & sk)
{
  std::string out = "(";
  for (std::size_t i = 0; i < sk.size(); ++i) {
    if (i) out += ", ";
    out += to_string(sk[i]);
  }
  return out + ")";
}

BaseType scalar_kind(const Scalar & s)
{
  switch (s.index()) {
    case 0: return BaseType::Int;
    case 1: return BaseType::String;
    case 2: return BaseType::Id;
    default: return BaseType::Loc;
  }
}

std::optional<BaseType> scalar_kind(const Value & v)
{
  switch (v.index()) {
    case 0: return BaseType::Int;
    case 1: return BaseType::String;
    case 2: return BaseType::Id;
    case 3: return BaseType::Loc;
    default: return std::nullopt;
  }
}

std::optional<BaseType> set_elem_kind(const SetV & s)
{
  if (!s.items.empty()) return scalar_kind(s.items.begin()->first);
  return s.elem;
}

Value to_value(const Scalar & s)
{
  return std::visit([](const auto & x) -> Value { return x; }, s);
}

std::optional<Scalar> to_scalar(const Value & v)
{
  switch (v.index()) {
    case 0: return Scalar(std::get<Int>(v));
    case 1: return Scalar(std::get<Str>(v));
    case 2: return Scalar(std::get<TidV>(v));
    case 3: return Scalar(std::get<LocV>(v));
    default: return std::nullopt;
  }
}

Value tag_sorts(Value v, const MType & m)
{
  if (m.is_set) {
    if (auto * s = std::get_if<SetV>(&v)) s->elem = m.base;
  }
  return v;
}

ValueTuple tag_sorts(ValueTuple t, const Schema & sk)
{
  for (std::size_t i = 0; i < t.size() && i < sk.size(); ++i)
    t[i] = tag_sorts(std::move(t[i]), sk[i]);
  return t;
}

std::string quote_string(const std::string & s)
{
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string render_value(const Scalar & s)
{
  return render_value(to_value(s));
}

std::string render_value(const Value & v)
{
  switch (v.index()) {
    case 0: return std::get<Int>(v).str();
    case 1: return quote_string(std::get<Str>(v).text);
    case 2: return std::get<TidV>(v).name;
    case 3: return "$" + std::get<LocV>(v).name;
    default: break;
  }
  const SetV & s = std::get<SetV>(v);
  std::string out = "{";
  bool first = true;
  for (const auto & [e, n] : s.items) {
    for (std::uint64_t k = 0; k < n; ++k) {
      if (!first) out += ", ";
      first = false;
      out += render_value(e);
    }
  }
  return out + "}";
}

std::string render_tuple(const ValueTuple & t)
{
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += render_value(t[i]);
  }
  return out + ")";
}

}  // namespace kdb

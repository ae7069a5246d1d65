#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>

namespace kdb {

// Finite multiset as a map element -> positive multiplicity.
template <class T>
class Multiset {
 public:
  using map_type = std::map<T, std::uint64_t>;
  using const_iterator = typename map_type::const_iterator;

  Multiset() = default;
  Multiset(std::initializer_list<T> elems)
  {
    for (const T & e : elems) add(e);
  }

  void add(const T & elem, std::uint64_t n = 1)
  {
    if (n == 0) return;
    counts_[elem] += n;
    total_ += n;
  }

  // Removes every copy of elem.
  void erase(const T & elem)
  {
    auto it = counts_.find(elem);
    if (it == counts_.end()) return;
    total_ -= it->second;
    counts_.erase(it);
  }

  // Removes one copy of elem; no-op if absent.
  void remove_one(const T & elem)
  {
    auto it = counts_.find(elem);
    if (it == counts_.end()) return;
    --total_;
    if (--it->second == 0) counts_.erase(it);
  }

  std::uint64_t count(const T & elem) const
  {
    auto it = counts_.find(elem);
    return it == counts_.end() ? 0 : it->second;
  }

  bool contains(const T & elem) const { return counts_.count(elem) != 0; }
  // Cardinality counting multiplicity.
  std::uint64_t size() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }
  bool empty() const { return total_ == 0; }

  const_iterator begin() const { return counts_.begin(); }
  const_iterator end() const { return counts_.end(); }

  friend bool operator==(const Multiset & a, const Multiset & b)
  {
    return a.counts_ == b.counts_;
  }
  friend bool operator<(const Multiset & a, const Multiset & b)
  {
    return a.counts_ < b.counts_;
  }

 private:
  map_type counts_;
  std::uint64_t total_ = 0;
};

template <class T>
Multiset<T> ms_union(const Multiset<T> & a, const Multiset<T> & b)
{
  Multiset<T> out = a;
  for (const auto & [e, n] : b) out.add(e, n);
  return out;
}

template <class T>
Multiset<T> ms_intersect(const Multiset<T> & a, const Multiset<T> & b)
{
  Multiset<T> out;
  for (const auto & [e, n] : a) out.add(e, std::min(n, b.count(e)));
  return out;
}

template <class T>
Multiset<T> ms_subtract(const Multiset<T> & a, const Multiset<T> & b)
{
  Multiset<T> out;
  for (const auto & [e, n] : a) {
    std::uint64_t m = b.count(e);
    if (n > m) out.add(e, n - m);
  }
  return out;
}

}  // namespace kdb

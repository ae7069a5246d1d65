#pragma once

#include <cstddef>
#include <functional>

namespace kdb {

// Default stack for tree walks over large sources. Long `||` chains nest to
// the left, so recursion depth grows with the number of parallel nodes.
inline constexpr std::size_t k_big_stack = std::size_t(512) << 20;

// Runs fn on a fresh thread with the given stack size and waits for it.
// Exceptions thrown by fn are rethrown in the caller.
void with_stack(std::size_t bytes, const std::function<void()> & fn);

}  // namespace kdb

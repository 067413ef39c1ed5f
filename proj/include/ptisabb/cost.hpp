#pragma once

#include <cstdint>
#include <limits>

namespace ptisabb {

using AgentId = std::int32_t;
using Value = std::int32_t;

/// Costs are nonnegative integers. kInfinity is reserved for the search phase
/// and never appears in an instance table.
using Cost = std::int64_t;
inline constexpr Cost kInfinity = std::numeric_limits<Cost>::max();

/// Non-concurrent logical operation counter.
using OpCount = std::uint64_t;

constexpr Cost add_cost(Cost a, Cost b) {
  if (a == kInfinity || b == kInfinity) return kInfinity;
  if (a > kInfinity - b) return kInfinity;
  return a + b;
}

/// a - b where a may be infinite; b must be finite.
constexpr Cost sub_cost(Cost a, Cost b) {
  if (a == kInfinity) return kInfinity;
  return a - b;
}

constexpr bool is_finite(Cost c) { return c != kInfinity; }

}  // namespace ptisabb

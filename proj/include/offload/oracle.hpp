#pragma once

#include <cstddef>

#include "offload/model.hpp"

namespace offload {

/// Minimum expected cost from (start, full sizes) at slot 1, by plain
/// recursion over every action sequence and every mobility outcome. Shares no
/// code with the solver: its own action enumeration (product space, filtered)
/// and its own cost bookkeeping, with penalties charged on entering slot
/// deadline + 1. Throws SizingError once more than `max_nodes` nodes are
/// expanded.
double brute_force_value(const Scenario& scenario, LocationId start,
                         std::size_t max_nodes = 1'000'000);

}  // namespace offload

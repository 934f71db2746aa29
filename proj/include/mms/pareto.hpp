#ifndef MMS_PARETO_HPP
#define MMS_PARETO_HPP

#include <vector>

#include "mms/objectives.hpp"

namespace mms {

// Stands in for an infinite crowding distance; larger than any reachable
// accumulated value (per-objective contributions are at most 1 each).
inline constexpr double kCrowdingSentinel = 1e9;

/// Maximization dominance: a >= b everywhere and a > b somewhere.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Fast non-dominated sort (dominance counts). Front 0 holds the maximal
/// elements; indices within a front stay in ascending order.
std::vector<std::vector<int>> non_dominated_sort(const std::vector<ObjectiveVector>& vectors);

/// NSGA-style crowding distance for one front: boundary members per objective
/// get the sentinel, interior members accumulate normalized neighbor gaps,
/// zero-range objectives contribute nothing.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front);

struct SelectionResult {
    std::vector<int> selected;    // exactly target_size indices into the pool
    std::vector<int> rank;        // front index per pool member
    std::vector<double> crowding; // crowding distance per pool member
};

/// Environmental selection over a combined parent+offspring pool: fill by
/// ascending front, truncate the cutoff front by descending crowding
/// distance, ties by lower member index.
SelectionResult environmental_selection(const std::vector<ObjectiveVector>& pool,
                                        int target_size);

} // namespace mms

#endif

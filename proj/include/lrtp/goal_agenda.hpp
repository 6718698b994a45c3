#pragma once

#include <utility>
#include <vector>

#include "lrtp/strips.hpp"

namespace lrtp {

// "Establish A before B" pairs over goal atoms; irreflexive.
struct OrderingRelation {
    std::vector<std::pair<PropId, PropId>> pairs; // sorted ascending

    bool contains(PropId before, PropId after) const;
};

// Interference orderings read off the relaxed planning graph built from s0:
// (A before B) is emitted when every achiever of A in the graph deletes B
// while B keeps at least one achiever that spares A. Establishing B first
// would only see it destroyed by A's establishment.
OrderingRelation compute_orderings(const std::vector<Action>& actions, const State& s0,
                                   const std::vector<PropId>& goal);

// Ordered goal atoms; always a permutation of the goal set.
struct GoalAgenda {
    std::vector<PropId> ordered_atoms;
};

// Topological sort of the goal under compute_orderings. Ties are resolved by
// ascending first-appearance level in the graph (easier atoms first), then by
// proposition id. A cycle is broken by dropping, inside the strongly
// connected component, the pair whose "after" atom has the lowest level.
GoalAgenda relaxed_plan_ordering(const std::vector<Action>& actions, const State& s0,
                                 const std::vector<PropId>& goal);

} // namespace lrtp

#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "lrtp/strips.hpp"

namespace lrtp {

// Heuristic value meaning "goal unreachable under delete relaxation".
inline constexpr int kInfinity = std::numeric_limits<int>::max();

// Leveled fixpoint graph built ignoring delete effects; no mutex reasoning.
// prop_level[p] is the first level p appears (-1 if never), act_level[a] the
// first level a is applicable (-1 if never). best_supporter[p] is the first
// achiever of p, tie-broken by lowest action id; -1 for level-0 props.
struct RelaxedPlanningGraph {
    std::vector<int> prop_level;
    std::vector<int> act_level;
    std::vector<ActionId> best_supporter;
    int max_level = 0;

    bool reaches(PropId p) const { return prop_level[static_cast<size_t>(p)] >= 0; }
    bool reaches_all(const std::vector<PropId>& props) const {
        for (PropId p : props)
            if (!reaches(p))
                return false;
        return true;
    }
};

RelaxedPlanningGraph build_rpg(const std::vector<Action>& actions, const State& s);

// Relaxed plan as per-level action sets; total_size is the sum of layer
// sizes and the FF heuristic value.
struct RelaxedPlan {
    std::vector<std::vector<ActionId>> layers;
    int total_size = 0;
};

// Backward pass from the goal atoms at their first levels; nullopt when some
// goal atom never appears in the graph.
std::optional<RelaxedPlan> extract_relaxed_plan(const RelaxedPlanningGraph& rpg,
                                                const std::vector<Action>& actions,
                                                const std::vector<PropId>& goal);

// Size of the extracted relaxed plan; kInfinity when unreachable; 0 iff the
// goal already holds in s.
int h_ff(const std::vector<Action>& actions, const State& s, const std::vector<PropId>& goal);

} // namespace lrtp

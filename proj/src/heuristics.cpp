#include "lrtp/heuristics.hpp"

#include <algorithm>
#include <cassert>

namespace lrtp {

RelaxedPlanningGraph build_rpg(const std::vector<Action>& actions, const State& s) {
    int num_props = s.num_props();
    RelaxedPlanningGraph rpg;
    rpg.prop_level.assign(static_cast<size_t>(num_props), -1);
    rpg.act_level.assign(actions.size(), -1);
    rpg.best_supporter.assign(static_cast<size_t>(num_props), -1);

    for (PropId p : s.members())
        rpg.prop_level[static_cast<size_t>(p)] = 0;

    // Counter-based relaxed exploration, one level at a time. An action fires
    // at the first level where all its preconditions are present; its adds
    // join the next level.
    std::vector<int> unsat(actions.size());
    std::vector<std::vector<ActionId>> waiting(static_cast<size_t>(num_props));
    std::vector<ActionId> fire_now;
    for (const Action& a : actions) {
        unsat[static_cast<size_t>(a.id)] = static_cast<int>(a.pre.size());
        for (PropId p : a.pre)
            if (rpg.prop_level[static_cast<size_t>(p)] == 0)
                --unsat[static_cast<size_t>(a.id)];
            else
                waiting[static_cast<size_t>(p)].push_back(a.id);
        if (unsat[static_cast<size_t>(a.id)] == 0)
            fire_now.push_back(a.id);
    }

    int level = 0;
    std::vector<PropId> new_props;
    while (!fire_now.empty()) {
        new_props.clear();
        // Ascending id order makes best_supporter ties deterministic.
        std::sort(fire_now.begin(), fire_now.end());
        for (ActionId aid : fire_now) {
            rpg.act_level[static_cast<size_t>(aid)] = level;
            for (PropId p : actions[static_cast<size_t>(aid)].add) {
                if (rpg.prop_level[static_cast<size_t>(p)] < 0) {
                    rpg.prop_level[static_cast<size_t>(p)] = level + 1;
                    rpg.best_supporter[static_cast<size_t>(p)] = aid;
                    new_props.push_back(p);
                }
            }
        }
        fire_now.clear();
        if (new_props.empty())
            break;
        ++level;
        for (PropId p : new_props)
            for (ActionId aid : waiting[static_cast<size_t>(p)])
                if (--unsat[static_cast<size_t>(aid)] == 0)
                    fire_now.push_back(aid);
    }
    rpg.max_level = level;
    return rpg;
}

std::optional<RelaxedPlan> extract_relaxed_plan(const RelaxedPlanningGraph& rpg,
                                                const std::vector<Action>& actions,
                                                const std::vector<PropId>& goal) {
    if (!rpg.reaches_all(goal))
        return std::nullopt;

    RelaxedPlan plan;
    if (rpg.max_level == 0) {
        // Goal holds in the source state.
        return plan;
    }
    plan.layers.assign(static_cast<size_t>(rpg.max_level), {});

    // Open subgoals bucketed by first level; atoms at level 0 are free.
    std::vector<std::vector<PropId>> open(static_cast<size_t>(rpg.max_level) + 1);
    std::vector<char> queued(rpg.prop_level.size(), 0);
    auto push_subgoal = [&](PropId p) {
        int lvl = rpg.prop_level[static_cast<size_t>(p)];
        if (lvl > 0 && !queued[static_cast<size_t>(p)]) {
            queued[static_cast<size_t>(p)] = 1;
            open[static_cast<size_t>(lvl)].push_back(p);
        }
    };
    for (PropId p : goal)
        push_subgoal(p);

    std::vector<char> in_layer_scratch;
    for (int lvl = rpg.max_level; lvl >= 1; --lvl) {
        auto& bucket = open[static_cast<size_t>(lvl)];
        std::sort(bucket.begin(), bucket.end());
        for (PropId p : bucket) {
            ActionId aid = rpg.best_supporter[static_cast<size_t>(p)];
            assert(aid >= 0);
            auto& layer = plan.layers[static_cast<size_t>(rpg.act_level[static_cast<size_t>(aid)])];
            if (std::find(layer.begin(), layer.end(), aid) == layer.end())
                layer.push_back(aid);
            for (PropId q : actions[static_cast<size_t>(aid)].pre)
                push_subgoal(q);
        }
    }

    for (auto& layer : plan.layers) {
        std::sort(layer.begin(), layer.end());
        plan.total_size += static_cast<int>(layer.size());
    }
    // Trailing layers can be empty when all goal atoms are supported early.
    while (!plan.layers.empty() && plan.layers.back().empty())
        plan.layers.pop_back();
    return plan;
}

int h_ff(const std::vector<Action>& actions, const State& s, const std::vector<PropId>& goal) {
    RelaxedPlanningGraph rpg = build_rpg(actions, s);
    auto plan = extract_relaxed_plan(rpg, actions, goal);
    return plan ? plan->total_size : kInfinity;
}

} // namespace lrtp

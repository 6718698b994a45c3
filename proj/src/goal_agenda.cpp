#include "lrtp/goal_agenda.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include "lrtp/heuristics.hpp"

namespace lrtp {

bool OrderingRelation::contains(PropId before, PropId after) const {
    return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(before, after));
}

namespace {

OrderingRelation orderings_from_rpg(const RelaxedPlanningGraph& rpg,
                                    const std::vector<Action>& actions,
                                    const std::vector<PropId>& goal) {
    // Achievers of each goal atom that actually fire in the graph.
    std::vector<std::vector<const Action*>> achievers(goal.size());
    for (const Action& a : actions) {
        if (rpg.act_level[static_cast<size_t>(a.id)] < 0)
            continue;
        for (size_t gi = 0; gi < goal.size(); ++gi)
            if (std::binary_search(a.add.begin(), a.add.end(), goal[gi]))
                achievers[gi].push_back(&a);
    }

    auto deletes = [](const Action* a, PropId p) {
        return std::binary_search(a->del.begin(), a->del.end(), p);
    };

    OrderingRelation rel;
    for (size_t ai = 0; ai < goal.size(); ++ai) {
        for (size_t bi = 0; bi < goal.size(); ++bi) {
            if (ai == bi)
                continue;
            PropId atom_a = goal[ai];
            PropId atom_b = goal[bi];
            if (achievers[ai].empty())
                continue;
            bool all_destroy_b = std::all_of(achievers[ai].begin(), achievers[ai].end(),
                                             [&](const Action* a) { return deletes(a, atom_b); });
            if (!all_destroy_b)
                continue;
            bool b_recoverable = std::any_of(achievers[bi].begin(), achievers[bi].end(),
                                             [&](const Action* b) { return !deletes(b, atom_a); });
            if (b_recoverable)
                rel.pairs.emplace_back(atom_a, atom_b);
        }
    }
    std::sort(rel.pairs.begin(), rel.pairs.end());
    return rel;
}

// Pairs whose endpoints share a strongly connected component of >= 2 atoms.
std::vector<std::pair<PropId, PropId>>
pairs_in_cycles(const std::vector<PropId>& atoms,
                const std::vector<std::pair<PropId, PropId>>& pairs) {
    size_t n = atoms.size();
    auto index_of = [&](PropId p) {
        return static_cast<size_t>(std::find(atoms.begin(), atoms.end(), p) - atoms.begin());
    };
    std::vector<std::vector<size_t>> succ(n);
    for (const auto& [a, b] : pairs) {
        size_t u = index_of(a), v = index_of(b);
        if (u < n && v < n)
            succ[u].push_back(v);
    }

    // Iterative Tarjan.
    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<size_t> stack;
    int next_index = 0, next_comp = 0;
    struct Frame {
        size_t v;
        size_t child = 0;
    };
    for (size_t root = 0; root < n; ++root) {
        if (idx[root] != -1)
            continue;
        std::vector<Frame> frames{{root}};
        idx[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& fr = frames.back();
            if (fr.child < succ[fr.v].size()) {
                size_t w = succ[fr.v][fr.child++];
                if (idx[w] == -1) {
                    idx[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w});
                } else if (on_stack[w]) {
                    low[fr.v] = std::min(low[fr.v], idx[w]);
                }
            } else {
                if (low[fr.v] == idx[fr.v]) {
                    size_t w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = next_comp;
                    } while (w != fr.v);
                    ++next_comp;
                }
                size_t done = fr.v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] = std::min(low[frames.back().v], low[done]);
            }
        }
    }

    std::vector<size_t> comp_size(static_cast<size_t>(next_comp), 0);
    for (size_t v = 0; v < n; ++v)
        ++comp_size[static_cast<size_t>(comp[v])];

    std::vector<std::pair<PropId, PropId>> cyclic;
    for (const auto& [a, b] : pairs) {
        size_t u = index_of(a), v = index_of(b);
        if (comp[u] == comp[v] && comp_size[static_cast<size_t>(comp[u])] >= 2)
            cyclic.push_back({a, b});
    }
    return cyclic;
}

} // namespace

OrderingRelation compute_orderings(const std::vector<Action>& actions, const State& s0,
                                   const std::vector<PropId>& goal) {
    RelaxedPlanningGraph rpg = build_rpg(actions, s0);
    return orderings_from_rpg(rpg, actions, goal);
}

GoalAgenda relaxed_plan_ordering(const std::vector<Action>& actions, const State& s0,
                                 const std::vector<PropId>& goal) {
    RelaxedPlanningGraph rpg = build_rpg(actions, s0);
    OrderingRelation rel = orderings_from_rpg(rpg, actions, goal);

    auto level_of = [&](PropId p) {
        int lvl = rpg.prop_level[static_cast<size_t>(p)];
        return lvl < 0 ? std::numeric_limits<int>::max() : lvl;
    };

    std::vector<PropId> remaining = goal;
    std::sort(remaining.begin(), remaining.end());
    remaining.erase(std::unique(remaining.begin(), remaining.end()), remaining.end());
    std::vector<std::pair<PropId, PropId>> pairs = rel.pairs;

    GoalAgenda agenda;
    agenda.ordered_atoms.reserve(remaining.size());
    while (!remaining.empty()) {
        // Kahn step: atoms with no active predecessor, easiest level first.
        PropId best = -1;
        for (PropId p : remaining) {
            bool blocked = std::any_of(pairs.begin(), pairs.end(),
                                       [&](const auto& pr) { return pr.second == p; });
            if (blocked)
                continue;
            if (best < 0 || std::make_pair(level_of(p), p) < std::make_pair(level_of(best), best))
                best = p;
        }
        if (best < 0) {
            // Every remaining atom sits under a cycle; drop the pair whose
            // "after" atom is easiest, then retry.
            auto cyclic = pairs_in_cycles(remaining, pairs);
            assert(!cyclic.empty());
            auto key = [&](const std::pair<PropId, PropId>& pr) {
                return std::make_tuple(level_of(pr.second), pr.second, level_of(pr.first),
                                       pr.first);
            };
            auto victim = *std::min_element(cyclic.begin(), cyclic.end(),
                                            [&](const auto& x, const auto& y) {
                                                return key(x) < key(y);
                                            });
            pairs.erase(std::remove(pairs.begin(), pairs.end(), victim), pairs.end());
            continue;
        }
        agenda.ordered_atoms.push_back(best);
        remaining.erase(std::remove(remaining.begin(), remaining.end(), best), remaining.end());
        pairs.erase(std::remove_if(pairs.begin(), pairs.end(),
                                   [&](const auto& pr) {
                                       return pr.first == best || pr.second == best;
                                   }),
                    pairs.end());
    }
    return agenda;
}

} // namespace lrtp

#include "lrtp/strips.hpp"

#include <bit>

namespace lrtp {

int State::count() const {
    int n = 0;
    for (uint64_t w : words_)
        n += std::popcount(w);
    return n;
}

std::vector<PropId> State::members() const {
    std::vector<PropId> out;
    out.reserve(static_cast<size_t>(count()));
    for (size_t wi = 0; wi < words_.size(); ++wi) {
        uint64_t w = words_[wi];
        while (w) {
            int bit = std::countr_zero(w);
            out.push_back(static_cast<PropId>(wi * 64 + static_cast<size_t>(bit)));
            w &= w - 1;
        }
    }
    return out;
}

PropId GroundProblem::intern_prop(const std::string& name) {
    auto it = prop_index.find(name);
    if (it != prop_index.end())
        return it->second;
    PropId id = static_cast<PropId>(prop_names.size());
    prop_names.push_back(name);
    prop_index.emplace(name, id);
    return id;
}

bool is_applicable(const State& s, const Action& a) {
    return s.contains_all(a.pre);
}

std::optional<State> apply_action(const State& s, const Action& a) {
    if (!is_applicable(s, a))
        return std::nullopt;
    State next = s;
    for (PropId p : a.del)
        next.clear(p);
    for (PropId p : a.add)
        next.set(p);
    return next;
}

std::optional<State> apply_plan(const State& s, const Plan& plan,
                                const std::vector<Action>& actions) {
    State cur = s;
    for (ActionId aid : plan) {
        auto next = apply_action(cur, actions[static_cast<size_t>(aid)]);
        if (!next)
            return std::nullopt;
        cur = std::move(*next);
    }
    return cur;
}

bool goal_satisfied(const State& s, const std::vector<PropId>& goal) {
    return s.contains_all(goal);
}

bool is_solution(const GroundProblem& prob, const Plan& plan) {
    auto end = apply_plan(prob.init, plan, prob.actions);
    return end && goal_satisfied(*end, prob.goal);
}

std::vector<ActionId> applicable_actions(const State& s, const std::vector<Action>& actions) {
    std::vector<ActionId> out;
    for (const Action& a : actions)
        if (is_applicable(s, a))
            out.push_back(a.id);
    return out;
}

} // namespace lrtp

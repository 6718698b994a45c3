#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lrtp {

using PropId = int;
using ActionId = int;

// A state is a set of proposition ids, stored as a fixed-width bit vector
// sized to the owning problem's proposition table. Value semantics,
// structural equality, cheap hash.
class State {
public:
    State() = default;
    explicit State(int num_props)
        : num_props_(num_props), words_((num_props + 63) / 64, 0) {}

    int num_props() const { return num_props_; }

    bool contains(PropId p) const {
        return (words_[static_cast<size_t>(p) >> 6] >> (p & 63)) & 1ull;
    }
    void set(PropId p) { words_[static_cast<size_t>(p) >> 6] |= 1ull << (p & 63); }
    void clear(PropId p) { words_[static_cast<size_t>(p) >> 6] &= ~(1ull << (p & 63)); }

    bool contains_all(const std::vector<PropId>& props) const {
        for (PropId p : props)
            if (!contains(p))
                return false;
        return true;
    }

    int count() const;
    std::vector<PropId> members() const; // ascending

    bool operator==(const State& other) const {
        return num_props_ == other.num_props_ && words_ == other.words_;
    }
    bool operator!=(const State& other) const { return !(*this == other); }

    const std::vector<uint64_t>& words() const { return words_; }

private:
    int num_props_ = 0;
    std::vector<uint64_t> words_;
};

struct StateHash {
    size_t operator()(const State& s) const {
        uint64_t h = 0x9e3779b97f4a7c15ull;
        for (uint64_t w : s.words())
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return static_cast<size_t>(h);
    }
};

// Ground action with unit cost. pre/add/del are sorted ascending and, after
// grounding-time normalization, add and del are disjoint.
struct Action {
    ActionId id = -1;
    std::string name;
    std::vector<PropId> pre;
    std::vector<PropId> add;
    std::vector<PropId> del;
};

// A plan is a sequence of action ids; applicability is checked by apply_plan.
using Plan = std::vector<ActionId>;

// The grounded tuple (A, s0, g) with an interned proposition table.
// Proposition ids are dense from 0; name <-> id is a bijection.
struct GroundProblem {
    std::vector<std::string> prop_names;
    std::unordered_map<std::string, PropId> prop_index;
    std::vector<Action> actions;
    State init;
    std::vector<PropId> goal; // sorted ascending
    std::vector<std::string> grounding_warnings;

    int num_props() const { return static_cast<int>(prop_names.size()); }

    // -1 when the name is not interned.
    PropId prop_id(std::string_view name) const {
        auto it = prop_index.find(std::string(name));
        return it == prop_index.end() ? -1 : it->second;
    }
    const std::string& prop_name(PropId p) const { return prop_names[static_cast<size_t>(p)]; }

    PropId intern_prop(const std::string& name);
};

bool is_applicable(const State& s, const Action& a);

// The transition function: (s - del) u add when pre(a) is satisfied,
// nullopt (undefined) otherwise. Inapplicability is a value, not a fault.
std::optional<State> apply_action(const State& s, const Action& a);

// Left fold of apply_action; the empty plan is the identity.
std::optional<State> apply_plan(const State& s, const Plan& plan,
                                const std::vector<Action>& actions);

bool is_solution(const GroundProblem& prob, const Plan& plan);

bool goal_satisfied(const State& s, const std::vector<PropId>& goal);

// Actions applicable in s, ascending by id.
std::vector<ActionId> applicable_actions(const State& s, const std::vector<Action>& actions);

} // namespace lrtp

#include "doctest.h"

#include <algorithm>

#include "lrtp/strips.hpp"
#include "support/toys.hpp"

using namespace lrtp;
using test::make_problem;
using test::ToyAction;
using test::ToySpec;

namespace {

// s={p}; a consumes p and produces q; b needs the absent q.
GroundProblem tiny() {
    ToySpec spec;
    spec.props = {"p", "q", "r"};
    spec.actions = {
        ToyAction{"a", {"p"}, {"q"}, {"p"}},
        ToyAction{"b", {"q"}, {"r"}, {}},
        ToyAction{"readd_p", {"p", "q"}, {"p"}, {"q"}},
    };
    spec.init = {"p"};
    spec.goal = {"q"};
    return make_problem(spec);
}

State state_of(const GroundProblem& prob, const std::vector<std::string>& names) {
    State s(prob.num_props());
    for (const auto& n : names)
        s.set(prob.prop_id(n));
    return s;
}

} // namespace

TEST_SUITE("strips") {

TEST_CASE("apply_action follows the transition function") {
    GroundProblem prob = tiny();
    auto next = apply_action(prob.init, prob.actions[0]);
    REQUIRE(next.has_value());
    CHECK(*next == state_of(prob, {"q"}));

    SUBCASE("unsatisfied precondition yields the undefined value") {
        CHECK_FALSE(apply_action(prob.init, prob.actions[1]).has_value());
    }
    SUBCASE("adding an already-true atom is idempotent") {
        // s={p,q}, a=(pre={p}, add={p}, del={q}) -> {p}
        State s = state_of(prob, {"p", "q"});
        auto result = apply_action(s, prob.actions[2]);
        REQUIRE(result.has_value());
        CHECK(*result == state_of(prob, {"p"}));
    }
}

TEST_CASE("apply_plan folds left and the empty plan is the identity") {
    ToySpec spec;
    spec.props = {"p", "q"};
    spec.actions = {
        ToyAction{"a1", {}, {"p"}, {}},
        ToyAction{"a2", {"p"}, {"q"}, {"p"}},
    };
    spec.init = {};
    spec.goal = {"q"};
    GroundProblem prob = make_problem(spec);

    CHECK(*apply_plan(prob.init, {}, prob.actions) == prob.init);
    CHECK(*apply_plan(prob.init, {0, 1}, prob.actions) == state_of(prob, {"q"}));
    CHECK_FALSE(apply_plan(prob.init, {1}, prob.actions).has_value());
}

TEST_CASE("is_solution checks goal containment after replay") {
    ToySpec spec;
    spec.props = {"p", "q"};
    spec.actions = {
        ToyAction{"a1", {}, {"p"}, {}},
        ToyAction{"a2", {"p"}, {"q"}, {"p"}},
    };
    spec.init = {};
    spec.goal = {"q"};
    GroundProblem prob = make_problem(spec);

    CHECK(is_solution(prob, {0, 1}));
    CHECK_FALSE(is_solution(prob, {0})); // reaches {p} only
    CHECK_FALSE(is_solution(prob, {1})); // inapplicable first step

    SUBCASE("goal already satisfied by the empty plan") {
        spec.init = {"q"};
        GroundProblem done = make_problem(spec);
        CHECK(is_solution(done, {}));
    }
}

TEST_CASE("applicable_actions is exact and ascending") {
    GroundProblem prob = tiny();
    CHECK(applicable_actions(prob.init, prob.actions) == std::vector<ActionId>{0});
    CHECK(applicable_actions(state_of(prob, {}), prob.actions) == std::vector<ActionId>{});
    CHECK(applicable_actions(state_of(prob, {"p", "q"}), prob.actions) ==
          std::vector<ActionId>{0, 1, 2});

    SUBCASE("empty precondition is always applicable") {
        ToySpec spec;
        spec.props = {"p"};
        spec.actions = {ToyAction{"free", {}, {"p"}, {}}};
        spec.init = {};
        spec.goal = {"p"};
        GroundProblem p2 = make_problem(spec);
        CHECK(applicable_actions(p2.init, p2.actions) == std::vector<ActionId>{0});
    }
}

TEST_CASE("gamma invariants hold on random instances") {
    // A light randomized pass; the acceptance suite runs the full-volume one.
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        GroundProblem prob = test::random_problem(seed);
        for (const Action& a : prob.actions) {
            auto next = apply_action(prob.init, a);
            if (!next)
                continue;
            // Frame: nothing outside del disappears, nothing outside add appears.
            for (PropId p : prob.init.members()) {
                bool deleted = std::binary_search(a.del.begin(), a.del.end(), p);
                CHECK(next->contains(p) == !deleted);
            }
            for (PropId p : next->members()) {
                bool added = std::binary_search(a.add.begin(), a.add.end(), p);
                CHECK((prob.init.contains(p) || added));
            }
        }
    }
}

TEST_CASE("states hash and compare structurally") {
    GroundProblem prob = tiny();
    State a = state_of(prob, {"p", "q"});
    State b = state_of(prob, {"q", "p"});
    State c = state_of(prob, {"p"});
    CHECK(a == b);
    CHECK(StateHash{}(a) == StateHash{}(b));
    CHECK(a != c);
    CHECK(a.count() == 2);
    CHECK(a.members() == std::vector<PropId>{prob.prop_id("p"), prob.prop_id("q")});
}

} // TEST_SUITE

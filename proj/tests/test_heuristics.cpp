#include "doctest.h"

#include "lrtp/heuristics.hpp"
#include "support/oracles.hpp"
#include "support/toys.hpp"

using namespace lrtp;
using test::make_problem;
using test::ToyAction;
using test::ToySpec;

namespace {

// a1 adds p from nothing; a2 turns p into q while deleting p.
GroundProblem chain2() {
    ToySpec spec;
    spec.props = {"p", "q"};
    spec.actions = {
        ToyAction{"a1", {}, {"p"}, {}},
        ToyAction{"a2", {"p"}, {"q"}, {"p"}},
    };
    spec.init = {};
    spec.goal = {"q"};
    return make_problem(spec);
}

} // namespace

TEST_SUITE("heuristics") {

TEST_CASE("rpg reaches an immediate fixpoint without actions") {
    ToySpec spec;
    spec.props = {"p"};
    spec.init = {"p"};
    spec.goal = {"p"};
    GroundProblem prob = make_problem(spec);

    auto rpg = build_rpg(prob.actions, prob.init);
    CHECK(rpg.max_level == 0);
    CHECK(rpg.prop_level[0] == 0);
}

TEST_CASE("rpg levels ignore delete effects") {
    GroundProblem prob = chain2();
    auto rpg = build_rpg(prob.actions, prob.init);
    CHECK(rpg.prop_level[prob.prop_id("p")] == 1);
    CHECK(rpg.prop_level[prob.prop_id("q")] == 2); // a2's delete of p is ignored
    CHECK(rpg.act_level[0] == 0);
    CHECK(rpg.act_level[1] == 1);
    CHECK(rpg.max_level == 2);
    CHECK(rpg.best_supporter[prob.prop_id("p")] == 0);
    CHECK(rpg.best_supporter[prob.prop_id("q")] == 1);
}

TEST_CASE("unreachable atoms stay out of the graph") {
    ToySpec spec;
    spec.props = {"p", "r"};
    spec.actions = {ToyAction{"a", {}, {"p"}, {}}};
    spec.init = {};
    spec.goal = {"r"};
    GroundProblem prob = make_problem(spec);

    auto rpg = build_rpg(prob.actions, prob.init);
    CHECK_FALSE(rpg.reaches(prob.prop_id("r")));
    CHECK(rpg.reaches(prob.prop_id("p")));
}

TEST_CASE("supporters appear strictly before the atoms they add") {
    for (uint64_t seed = 1; seed <= 80; ++seed) {
        GroundProblem prob = test::random_problem(seed);
        auto rpg = build_rpg(prob.actions, prob.init);
        for (PropId p = 0; p < prob.num_props(); ++p) {
            if (rpg.prop_level[p] <= 0)
                continue;
            ActionId s = rpg.best_supporter[p];
            REQUIRE(s >= 0);
            CHECK(rpg.act_level[s] == rpg.prop_level[p] - 1);
        }
    }
}

TEST_CASE("fixpoint is stable: regrowing from the fixpoint adds nothing") {
    for (uint64_t seed = 1; seed <= 40; ++seed) {
        GroundProblem prob = test::random_problem(seed);
        auto rpg = build_rpg(prob.actions, prob.init);
        State closure(prob.num_props());
        for (PropId p = 0; p < prob.num_props(); ++p)
            if (rpg.prop_level[p] >= 0)
                closure.set(p);
        auto again = build_rpg(prob.actions, closure);
        CHECK(again.max_level == 0);
        for (PropId p = 0; p < prob.num_props(); ++p)
            CHECK((again.prop_level[p] >= 0) == (rpg.prop_level[p] >= 0));
    }
}

TEST_CASE("relaxed plan extraction on the two-step chain") {
    GroundProblem prob = chain2();
    auto rpg = build_rpg(prob.actions, prob.init);
    auto plan = extract_relaxed_plan(rpg, prob.actions, prob.goal);
    REQUIRE(plan.has_value());
    CHECK(plan->total_size == 2);
    REQUIRE(plan->layers.size() == 2);
    CHECK(plan->layers[0] == std::vector<ActionId>{0});
    CHECK(plan->layers[1] == std::vector<ActionId>{1});
}

TEST_CASE("extraction is empty when the goal already holds") {
    ToySpec spec;
    spec.props = {"p"};
    spec.actions = {ToyAction{"noop", {"p"}, {"p"}, {}}};
    spec.init = {"p"};
    spec.goal = {"p"};
    GroundProblem prob = make_problem(spec);
    auto rpg = build_rpg(prob.actions, prob.init);
    auto plan = extract_relaxed_plan(rpg, prob.actions, prob.goal);
    REQUIRE(plan.has_value());
    CHECK(plan->total_size == 0);
    CHECK(plan->layers.empty());
}

TEST_CASE("extraction reports unreachable goals") {
    ToySpec spec;
    spec.props = {"p", "r"};
    spec.actions = {ToyAction{"a", {}, {"p"}, {}}};
    spec.init = {};
    spec.goal = {"r"};
    GroundProblem prob = make_problem(spec);
    auto rpg = build_rpg(prob.actions, prob.init);
    CHECK_FALSE(extract_relaxed_plan(rpg, prob.actions, prob.goal).has_value());
}

TEST_CASE("h_ff on the canonical cases") {
    GroundProblem prob = chain2();
    CHECK(h_ff(prob.actions, prob.init, prob.goal) == 2);

    State done(prob.num_props());
    done.set(prob.prop_id("q"));
    CHECK(h_ff(prob.actions, done, prob.goal) == 0);

    ToySpec spec;
    spec.props = {"r"};
    spec.init = {};
    spec.goal = {"r"};
    GroundProblem unreachable = make_problem(spec);
    CHECK(h_ff(unreachable.actions, unreachable.init, unreachable.goal) == kInfinity);
}

TEST_CASE("h_plus oracle agrees with hand results") {
    GroundProblem prob = chain2();
    CHECK(test::h_plus_oracle(prob.actions, prob.init, prob.goal) == 2);

    State done(prob.num_props());
    done.set(prob.prop_id("q"));
    CHECK(test::h_plus_oracle(prob.actions, done, prob.goal) == 0);

    ToySpec spec;
    spec.props = {"r"};
    spec.init = {};
    spec.goal = {"r"};
    GroundProblem unreachable = make_problem(spec);
    CHECK_FALSE(test::h_plus_oracle(unreachable.actions, unreachable.init, unreachable.goal)
                    .has_value());
}

TEST_CASE("h_ff dominates h_plus and matches its infinities") {
    for (uint64_t seed = 1; seed <= 60; ++seed) {
        GroundProblem prob = test::random_problem(seed);
        int ff = h_ff(prob.actions, prob.init, prob.goal);
        auto plus = test::h_plus_oracle(prob.actions, prob.init, prob.goal);
        if (plus) {
            REQUIRE(ff != kInfinity);
            CHECK(*plus <= ff);
        } else {
            CHECK(ff == kInfinity);
        }
        CHECK((ff == 0) == goal_satisfied(prob.init, prob.goal));
    }
}

} // TEST_SUITE

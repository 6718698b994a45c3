#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lrtp/strips.hpp"

namespace lrtp {

// Deterministic 64-bit generator (splitmix64). The search only ever draws
// through below(), so runs are reproducible across platforms.
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t bound) { return bound <= 1 ? 0 : next() % bound; }
};

enum class BudgetKind { Expansions, WallClockMillis };

// The decision-time abstraction: a per-decision quantum plus the credit
// accumulated while buffered actions execute. One search may consume at most
// amount + credit units.
struct DecisionBudget {
    BudgetKind kind = BudgetKind::Expansions;
    long long amount = 1;
    long long credit = 0;
};

// Tracks one search's allowance. Expansion budgets are exact; wall-clock
// budgets are checked between expansions, so they can overshoot by at most
// one expansion.
class BudgetMeter {
public:
    BudgetMeter(BudgetKind kind, long long capacity);

    bool exhausted() const;
    void charge_expansion() { ++expansions_; }
    long long expansions() const { return expansions_; }

private:
    BudgetKind kind_;
    long long capacity_;
    long long expansions_ = 0;
    std::chrono::steady_clock::time_point deadline_;
};

enum class HeuristicKind { Ff, Zero };

// Learned heuristic overrides; values only ever increase.
struct HTable {
    std::unordered_map<State, int, StateHash> overrides;

    int lookup(const State& s, int fallback) const {
        auto it = overrides.find(s);
        return it == overrides.end() ? fallback : it->second;
    }
};

struct SearchContext {
    const GroundProblem* prob = nullptr;
    HeuristicKind heuristic = HeuristicKind::Ff;
    HTable* learned = nullptr; // nullptr when learning is off
};

// Heuristic under the context: FF or zero, raised by any learned override.
int evaluate_h(const SearchContext& ctx, const State& s, const std::vector<PropId>& goal);

struct SearchNode {
    State state;
    int g_value = 0;
    int h_value = 0;
    int f_value = 0;
    int parent = -1;        // node index; -1 for the root
    ActionId via_action = -1;
    bool expanded = false;
};

// Node pool plus the closed map. A node is open iff it has been generated
// and not expanded; nodes with infinite h are never generated.
struct Frontier {
    std::vector<SearchNode> nodes;                      // nodes[0] is the root, when any
    std::unordered_map<State, int, StateHash> closed;   // state -> node with best g
    std::vector<int> expansion_order;                   // for learning backups
    std::vector<std::vector<int>> successors;           // per node, generated children

    bool open_empty() const;
    std::vector<int> open_nodes() const; // ascending node ids
};

// A* from s, guided by the context heuristic, stopping on budget exhaustion,
// goal expansion (the goal node stays open) or an exhausted space. Duplicate
// states are reopened when reached with a better g.
Frontier bounded_astar(const SearchContext& ctx, const State& s, const std::vector<PropId>& goal,
                       BudgetMeter& meter);

// argmin f, then argmin g, then a uniform random pick; nullopt on an empty
// frontier (a dead end for the caller).
std::optional<int> select_frontier_state(const Frontier& frontier, Rng& rng);

Plan plan_to_node(const Frontier& frontier, int node_id);

struct SelectionInfo {
    int f = -1;
    int g = -1;
};

// One bounded search plus frontier selection; the plan from s to the chosen
// node (empty when the root is chosen). nullopt signals a dead end.
std::optional<Plan> asa_star(const SearchContext& ctx, const State& s,
                             const std::vector<PropId>& goal, BudgetMeter& meter, Rng& rng,
                             SelectionInfo* info = nullptr);

// Agenda-driven incremental selection: solves the cumulative subgoals
// g1, g1+g2, ... with whatever budget remains, concatenating the pieces. A
// dead end propagates only from the very first subgoal search; otherwise the
// partial plan is returned.
std::optional<Plan> iasa_star(const SearchContext& ctx, const State& s0,
                              const std::vector<PropId>& goal, BudgetMeter& meter, Rng& rng,
                              SelectionInfo* info = nullptr);

enum class GlobalLimitKind { EpisodeCount, WallClockMillis };

struct RunConfig {
    bool improve_incremental = false; // I: goal-agenda-driven selection
    bool improve_jump = false;        // J: buffer whole action sequences
    DecisionBudget budget;
    GlobalLimitKind global_kind = GlobalLimitKind::EpisodeCount;
    long long global_amount = 1; // episodes, or milliseconds
    int max_actions_per_episode = 400;
    bool learning = false;
    HeuristicKind heuristic = HeuristicKind::Ff;
    uint64_t seed = 0;
};

enum class FailureReason { ActionCapReached, DeadEnd, GlobalTimeout };

const char* to_string(FailureReason reason);

struct EpisodeResult {
    bool success = false;
    Plan executed_plan;
    long long decisions = 0; // search decisions (buffered ticks excluded)
    long long expansions_total = 0;
    std::optional<FailureReason> failure_reason;
    long long credit_accrued = 0; // budget units granted by buffered ticks
};

using TraceSink = std::function<void(const std::string&)>;

// One episode of the decision loop: search (ASA* or IASA*), buffer the
// selected sequence (J) or its first action, execute one action per tick,
// accrue credit while the buffer drains.
EpisodeResult lrtp_episode(const GroundProblem& prob, const RunConfig& cfg, Rng& rng,
                           HTable* table = nullptr, const TraceSink& trace = nullptr,
                           const std::chrono::steady_clock::time_point* global_deadline = nullptr);

// Episodes from s0 until the global limit; the rng stream and any learned
// table persist across episodes.
std::vector<EpisodeResult> lrtp_run(const GroundProblem& prob, const RunConfig& cfg,
                                    const TraceSink& trace = nullptr);

// LRTA*-family raise rule over the expanded states of one search: each
// expanded state's value is lifted to the best one-step lookahead through
// its generated successors. Values never decrease.
void learn_update(HTable& table, const Frontier& frontier);

} // namespace lrtp

#include "lrtp/search.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <queue>
#include <sstream>

#include "lrtp/goal_agenda.hpp"
#include "lrtp/heuristics.hpp"

namespace lrtp {

BudgetMeter::BudgetMeter(BudgetKind kind, long long capacity)
    : kind_(kind), capacity_(capacity) {
    if (kind_ == BudgetKind::WallClockMillis)
        deadline_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(capacity);
}

bool BudgetMeter::exhausted() const {
    if (kind_ == BudgetKind::Expansions)
        return expansions_ >= capacity_;
    return std::chrono::steady_clock::now() >= deadline_;
}

int evaluate_h(const SearchContext& ctx, const State& s, const std::vector<PropId>& goal) {
    int base = 0;
    if (ctx.heuristic == HeuristicKind::Ff)
        base = h_ff(ctx.prob->actions, s, goal);
    if (ctx.learned)
        return ctx.learned->lookup(s, base);
    return base;
}

bool Frontier::open_empty() const {
    for (const SearchNode& n : nodes)
        if (!n.expanded)
            return false;
    return true;
}

std::vector<int> Frontier::open_nodes() const {
    std::vector<int> out;
    for (size_t i = 0; i < nodes.size(); ++i)
        if (!nodes[i].expanded)
            out.push_back(static_cast<int>(i));
    return out;
}

namespace {

struct HeapEntry {
    int f;
    int g;
    long long seq; // insertion order; older first among ties
    int node;
};

struct HeapCompare {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.f != b.f)
            return a.f > b.f;
        if (a.g != b.g)
            return a.g > b.g;
        return a.seq > b.seq;
    }
};

} // namespace

Frontier bounded_astar(const SearchContext& ctx, const State& s, const std::vector<PropId>& goal,
                       BudgetMeter& meter) {
    Frontier frontier;
    int root_h = evaluate_h(ctx, s, goal);
    if (root_h == kInfinity)
        return frontier;

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapCompare> heap;
    long long seq = 0;

    frontier.nodes.push_back(SearchNode{s, 0, root_h, root_h, -1, -1, false});
    frontier.successors.emplace_back();
    frontier.closed.emplace(s, 0);
    heap.push(HeapEntry{root_h, 0, seq++, 0});

    while (!meter.exhausted() && !heap.empty()) {
        HeapEntry top = heap.top();
        heap.pop();
        {
            const SearchNode& node = frontier.nodes[static_cast<size_t>(top.node)];
            if (node.expanded || node.g_value != top.g)
                continue; // stale entry
            if (goal_satisfied(node.state, goal))
                break; // early exit; the goal node stays open for selection
        }
        // Generating successors grows the node pool, so take copies rather
        // than references into it.
        frontier.nodes[static_cast<size_t>(top.node)].expanded = true;
        State parent_state = frontier.nodes[static_cast<size_t>(top.node)].state;
        meter.charge_expansion();
        frontier.expansion_order.push_back(top.node);

        for (ActionId aid : applicable_actions(parent_state, ctx.prob->actions)) {
            const Action& a = ctx.prob->actions[static_cast<size_t>(aid)];
            auto succ = apply_action(parent_state, a);
            int succ_g = top.g + 1;

            auto it = frontier.closed.find(*succ);
            if (it != frontier.closed.end()) {
                SearchNode& known = frontier.nodes[static_cast<size_t>(it->second)];
                frontier.successors[static_cast<size_t>(top.node)].push_back(it->second);
                if (succ_g < known.g_value) {
                    known.g_value = succ_g;
                    known.f_value = succ_g + known.h_value;
                    known.parent = top.node;
                    known.via_action = aid;
                    known.expanded = false; // reopen
                    heap.push(HeapEntry{known.f_value, known.g_value, seq++, it->second});
                }
                continue;
            }

            int succ_h = evaluate_h(ctx, *succ, goal);
            if (succ_h == kInfinity)
                continue; // never inserted into open
            int id = static_cast<int>(frontier.nodes.size());
            frontier.nodes.push_back(
                SearchNode{std::move(*succ), succ_g, succ_h, succ_g + succ_h, top.node, aid, false});
            frontier.successors.emplace_back();
            frontier.successors[static_cast<size_t>(top.node)].push_back(id);
            frontier.closed.emplace(frontier.nodes.back().state, id);
            heap.push(HeapEntry{succ_g + succ_h, succ_g, seq++, id});
        }
    }
    return frontier;
}

std::optional<int> select_frontier_state(const Frontier& frontier, Rng& rng) {
    std::vector<int> open = frontier.open_nodes();
    if (open.empty())
        return std::nullopt;

    int best_f = frontier.nodes[static_cast<size_t>(open[0])].f_value;
    for (int id : open)
        best_f = std::min(best_f, frontier.nodes[static_cast<size_t>(id)].f_value);
    int best_g = kInfinity;
    for (int id : open)
        if (frontier.nodes[static_cast<size_t>(id)].f_value == best_f)
            best_g = std::min(best_g, frontier.nodes[static_cast<size_t>(id)].g_value);

    std::vector<int> candidates;
    for (int id : open) {
        const SearchNode& n = frontier.nodes[static_cast<size_t>(id)];
        if (n.f_value == best_f && n.g_value == best_g)
            candidates.push_back(id);
    }
    return candidates[rng.below(candidates.size())];
}

Plan plan_to_node(const Frontier& frontier, int node_id) {
    Plan plan;
    for (int id = node_id; frontier.nodes[static_cast<size_t>(id)].parent >= 0;
         id = frontier.nodes[static_cast<size_t>(id)].parent)
        plan.push_back(frontier.nodes[static_cast<size_t>(id)].via_action);
    std::reverse(plan.begin(), plan.end());
    return plan;
}

std::optional<Plan> asa_star(const SearchContext& ctx, const State& s,
                             const std::vector<PropId>& goal, BudgetMeter& meter, Rng& rng,
                             SelectionInfo* info) {
    Frontier frontier = bounded_astar(ctx, s, goal, meter);
    if (ctx.learned)
        learn_update(*ctx.learned, frontier);
    auto selected = select_frontier_state(frontier, rng);
    if (!selected)
        return std::nullopt;
    if (info) {
        info->f = frontier.nodes[static_cast<size_t>(*selected)].f_value;
        info->g = frontier.nodes[static_cast<size_t>(*selected)].g_value;
    }
    return plan_to_node(frontier, *selected);
}

std::optional<Plan> iasa_star(const SearchContext& ctx, const State& s0,
                              const std::vector<PropId>& goal, BudgetMeter& meter, Rng& rng,
                              SelectionInfo* info) {
    GoalAgenda agenda = relaxed_plan_ordering(ctx.prob->actions, s0, goal);

    Plan accumulated;
    State current = s0;
    std::vector<PropId> cumulative_goal;
    for (size_t i = 0; i < agenda.ordered_atoms.size(); ++i) {
        if (meter.exhausted())
            break;
        cumulative_goal.insert(std::upper_bound(cumulative_goal.begin(), cumulative_goal.end(),
                                                agenda.ordered_atoms[i]),
                               agenda.ordered_atoms[i]);
        // Learned values are tied to the full goal; sub-searches over proper
        // subgoals must not write into the table.
        SearchContext sub_ctx = ctx;
        if (i + 1 < agenda.ordered_atoms.size())
            sub_ctx.learned = nullptr;
        auto piece = asa_star(sub_ctx, current, cumulative_goal, meter, rng, info);
        if (!piece) {
            if (i == 0)
                return std::nullopt;
            break;
        }
        auto advanced = apply_plan(current, *piece, ctx.prob->actions);
        assert(advanced);
        current = std::move(*advanced);
        accumulated.insert(accumulated.end(), piece->begin(), piece->end());
    }
    return accumulated;
}

const char* to_string(FailureReason reason) {
    switch (reason) {
    case FailureReason::ActionCapReached:
        return "action_cap";
    case FailureReason::DeadEnd:
        return "dead_end";
    case FailureReason::GlobalTimeout:
        return "global_timeout";
    }
    return "?";
}

EpisodeResult lrtp_episode(const GroundProblem& prob, const RunConfig& cfg, Rng& rng,
                           HTable* table, const TraceSink& trace,
                           const std::chrono::steady_clock::time_point* global_deadline) {
    SearchContext ctx{&prob, cfg.heuristic, cfg.learning ? table : nullptr};

    EpisodeResult result;
    State planning = prob.init; // s: where searches start
    State real = prob.init;     // s_r: where actions execute
    std::deque<ActionId> buffer;
    long long credit = cfg.budget.credit;
    long long decision_index = 0;

    if (goal_satisfied(real, prob.goal)) {
        result.success = true;
        return result;
    }

    for (;;) {
        if (global_deadline && std::chrono::steady_clock::now() >= *global_deadline) {
            result.failure_reason = FailureReason::GlobalTimeout;
            return result;
        }
        ++decision_index;

        bool searched = false;
        long long spent = 0;
        SelectionInfo info;
        int selected_len = 0;
        if (buffer.empty()) {
            // Search decision: spend the quantum plus all accumulated credit.
            BudgetMeter meter(cfg.budget.kind, cfg.budget.amount + credit);
            credit = 0;
            std::optional<Plan> selected;
            if (cfg.improve_incremental)
                selected = iasa_star(ctx, planning, prob.goal, meter, rng, &info);
            else
                selected = asa_star(ctx, planning, prob.goal, meter, rng, &info);
            searched = true;
            spent = meter.expansions();
            ++result.decisions;
            result.expansions_total += meter.expansions();

            if (!selected || selected->empty()) {
                result.failure_reason = FailureReason::DeadEnd;
                return result;
            }
            selected_len = static_cast<int>(selected->size());
            if (cfg.improve_jump) {
                buffer.assign(selected->begin(), selected->end());
                auto jumped = apply_plan(planning, *selected, prob.actions);
                assert(jumped);
                planning = std::move(*jumped);
            } else {
                buffer.push_back(selected->front());
                auto stepped = apply_action(planning, prob.actions[static_cast<size_t>(selected->front())]);
                assert(stepped);
                planning = std::move(*stepped);
            }
        } else {
            // Buffered tick: no search; one quantum of credit accrues.
            credit += cfg.budget.amount;
            result.credit_accrued += cfg.budget.amount;
        }

        ActionId head = buffer.front();
        buffer.pop_front();
        auto next_real = apply_action(real, prob.actions[static_cast<size_t>(head)]);
        assert(next_real); // the buffer replays states the search already visited
        real = std::move(*next_real);
        result.executed_plan.push_back(head);

        bool synced = buffer.empty();
        if (synced)
            assert(planning == real);
        if (trace) {
            std::ostringstream line;
            line << "decision=" << decision_index << " search=" << (searched ? 1 : 0)
                 << " spent=" << spent << " credit=" << credit << " plan=" << selected_len
                 << " f=" << info.f << " g=" << info.g
                 << " executed=" << prob.actions[static_cast<size_t>(head)].name
                 << " buffer=" << buffer.size() << " sync=" << (synced ? 1 : 0);
            trace(line.str());
        }

        if (goal_satisfied(real, prob.goal)) {
            result.success = true;
            return result;
        }
        if (static_cast<int>(result.executed_plan.size()) >= cfg.max_actions_per_episode) {
            result.failure_reason = FailureReason::ActionCapReached;
            return result;
        }
    }
}

std::vector<EpisodeResult> lrtp_run(const GroundProblem& prob, const RunConfig& cfg,
                                    const TraceSink& trace) {
    Rng rng(cfg.seed);
    HTable table;
    std::vector<EpisodeResult> results;

    if (cfg.global_kind == GlobalLimitKind::EpisodeCount) {
        for (long long e = 0; e < cfg.global_amount; ++e)
            results.push_back(lrtp_episode(prob, cfg, rng, &table, trace, nullptr));
        return results;
    }

    auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(cfg.global_amount);
    while (std::chrono::steady_clock::now() < deadline) {
        results.push_back(lrtp_episode(prob, cfg, rng, &table, trace, &deadline));
        if (results.back().failure_reason == FailureReason::GlobalTimeout)
            break;
    }
    return results;
}

void learn_update(HTable& table, const Frontier& frontier) {
    auto effective = [&](int id) {
        const SearchNode& n = frontier.nodes[static_cast<size_t>(id)];
        return table.lookup(n.state, n.h_value);
    };
    // Children before parents: reverse expansion order propagates new values
    // backwards through the lookahead in a single pass.
    for (auto it = frontier.expansion_order.rbegin(); it != frontier.expansion_order.rend();
         ++it) {
        int id = *it;
        int best = kInfinity;
        for (int child : frontier.successors[static_cast<size_t>(id)]) {
            int child_h = effective(child);
            if (child_h != kInfinity)
                best = std::min(best, child_h + 1);
        }
        int current = effective(id);
        if (best > current)
            table.overrides[frontier.nodes[static_cast<size_t>(id)].state] = best;
    }
}

} // namespace lrtp

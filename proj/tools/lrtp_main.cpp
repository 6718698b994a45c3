#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lrtp/bench.hpp"
#include "lrtp/goal_agenda.hpp"
#include "lrtp/heuristics.hpp"
#include "lrtp/pddl.hpp"
#include "lrtp/search.hpp"

namespace {

int run_bench(const std::string& manifest_path, lrtp::bench::ExperimentSpec overrides,
              bool have_domain) {
    lrtp::bench::ExperimentSpec spec;
    if (!manifest_path.empty()) {
        spec = lrtp::bench::parse_manifest_file(manifest_path);
        // CLI flags override manifest values.
        if (have_domain)
            spec.domain_path = overrides.domain_path;
        if (!overrides.problem_paths.empty())
            spec.problem_paths = overrides.problem_paths;
        if (!overrides.variants.empty())
            spec.variants = overrides.variants;
        if (!overrides.budgets.empty())
            spec.budgets = overrides.budgets;
        if (overrides.episodes > 0)
            spec.episodes = overrides.episodes;
        if (overrides.max_actions > 0)
            spec.max_actions = overrides.max_actions;
        if (overrides.base_seed != 0)
            spec.base_seed = overrides.base_seed;
        if (!overrides.out_path.empty())
            spec.out_path = overrides.out_path;
        if (overrides.trace)
            spec.trace = true;
        if (overrides.jobs > 0)
            spec.jobs = overrides.jobs;
    } else {
        spec = std::move(overrides);
        if (spec.domain_path.empty() || spec.problem_paths.empty() || spec.budgets.empty()) {
            std::cerr << "bench needs either --manifest or --domain/--problem/--budget\n";
            return 1;
        }
        if (spec.variants.empty())
            spec.variants = {"base", "I", "J", "IJ"};
        if (spec.episodes <= 0)
            spec.episodes = 10;
        if (spec.max_actions <= 0)
            spec.max_actions = 400;
        if (spec.base_seed == 0)
            spec.base_seed = 1;
        if (spec.jobs <= 0)
            spec.jobs = 1;
    }

    auto outcome = lrtp::bench::run_experiment(spec);
    std::cout << lrtp::bench::format_report(outcome);
    if (!spec.out_path.empty()) {
        lrtp::bench::emit_csv(outcome.cells, spec.out_path);
        std::cout << "wrote " << outcome.cells.size() << " rows to " << spec.out_path << "\n";
    }
    return 0;
}

int run_solve(const std::string& domain_path, const std::string& problem_path,
              const std::string& variant, const std::string& budget_text, int max_actions,
              uint64_t seed, bool trace, const std::string& plan_out) {
    auto domain = lrtp::pddl::parse_domain_file(domain_path);
    auto problem = lrtp::pddl::parse_problem_file(problem_path);
    auto ground = lrtp::pddl::ground(domain, problem);

    lrtp::RunConfig cfg = lrtp::bench::variant_config(variant);
    auto budget = lrtp::bench::parse_budget(budget_text);
    cfg.budget.kind = budget.kind;
    cfg.budget.amount = budget.amount;
    cfg.max_actions_per_episode = max_actions;
    cfg.seed = seed;

    lrtp::Rng rng(cfg.seed);
    lrtp::TraceSink sink;
    if (trace)
        sink = [](const std::string& line) { std::cerr << line << "\n"; };
    lrtp::EpisodeResult result = lrtp_episode(ground, cfg, rng, nullptr, sink);

    std::cout << (result.success ? "solved" : "failed") << " plan_length="
              << result.executed_plan.size() << " decisions=" << result.decisions
              << " expansions=" << result.expansions_total;
    if (result.failure_reason)
        std::cout << " reason=" << lrtp::to_string(*result.failure_reason);
    std::cout << "\n";

    std::ostream* plan_stream = &std::cout;
    std::ofstream plan_file;
    if (!plan_out.empty()) {
        plan_file.open(plan_out);
        if (!plan_file) {
            std::cerr << "cannot write " << plan_out << "\n";
            return 1;
        }
        plan_stream = &plan_file;
    }
    for (lrtp::ActionId aid : result.executed_plan)
        *plan_stream << "(" << ground.actions[static_cast<size_t>(aid)].name << ")\n";
    return result.success ? 0 : 2;
}

int run_agenda(const std::string& domain_path, const std::string& problem_path) {
    auto domain = lrtp::pddl::parse_domain_file(domain_path);
    auto problem = lrtp::pddl::parse_problem_file(problem_path);
    auto ground = lrtp::pddl::ground(domain, problem);

    auto rpg = lrtp::build_rpg(ground.actions, ground.init);
    auto rel = lrtp::compute_orderings(ground.actions, ground.init, ground.goal);
    auto agenda = lrtp::relaxed_plan_ordering(ground.actions, ground.init, ground.goal);

    std::cout << "goal atoms: " << ground.goal.size() << "\n";
    std::cout << "orderings:\n";
    if (rel.pairs.empty())
        std::cout << "  (none)\n";
    for (const auto& [before, after] : rel.pairs)
        std::cout << "  (" << ground.prop_name(before) << ") before (" << ground.prop_name(after)
                  << ")\n";
    std::cout << "agenda:\n";
    for (size_t i = 0; i < agenda.ordered_atoms.size(); ++i) {
        lrtp::PropId p = agenda.ordered_atoms[i];
        int level = rpg.prop_level[static_cast<size_t>(p)];
        std::cout << "  " << (i + 1) << ". (" << ground.prop_name(p) << ")  level=";
        if (level < 0)
            std::cout << "unreachable";
        else
            std::cout << level;
        std::cout << "\n";
    }
    return 0;
}

int run_validate(const std::string& domain_path, const std::string& problem_path,
                 const std::string& plan_path) {
    auto verdict = lrtp::bench::validate_plan_file(domain_path, problem_path, plan_path);
    std::cout << (verdict.accepted() ? "valid" : "invalid") << ": " << verdict.detail << "\n";
    return verdict.accepted() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lrtp: real-time STRIPS planning with goal agendas and jumps"};
    app.require_subcommand(1);

    // bench
    auto* bench = app.add_subcommand("bench", "run an experiment batch and emit CSV");
    std::string manifest;
    lrtp::bench::ExperimentSpec overrides;
    overrides.variants.clear();
    overrides.episodes = 0;
    overrides.max_actions = 0;
    overrides.base_seed = 0;
    overrides.jobs = 0;
    std::vector<std::string> budget_texts;
    bench->add_option("--manifest", manifest, "run manifest file");
    bench->add_option("--domain", overrides.domain_path, "domain PDDL file");
    bench->add_option("--problem", overrides.problem_paths, "problem PDDL file (repeatable)");
    bench->add_option("--variant", overrides.variants, "variant: base, I, J, IJ (repeatable)");
    bench->add_option("--budget", budget_texts, "decision budget, e.g. expansions:500 or ms:100");
    bench->add_option("--episodes", overrides.episodes, "episodes per cell");
    bench->add_option("--max-actions", overrides.max_actions, "episode action cap");
    bench->add_option("--seed", overrides.base_seed, "base seed");
    bench->add_option("--out", overrides.out_path, "CSV output path");
    bench->add_flag("--trace", overrides.trace, "per-decision trace to stderr");
    bench->add_option("--jobs", overrides.jobs, "worker threads");

    // solve
    auto* solve = app.add_subcommand("solve", "run one episode and print the executed plan");
    std::string s_domain, s_problem, s_variant = "IJ", s_budget = "expansions:1000";
    std::string s_plan_out;
    int s_max_actions = 500;
    uint64_t s_seed = 1;
    bool s_trace = false;
    solve->add_option("--domain", s_domain, "domain PDDL file")->required();
    solve->add_option("--problem", s_problem, "problem PDDL file")->required();
    solve->add_option("--variant", s_variant, "base, I, J or IJ");
    solve->add_option("--budget", s_budget, "decision budget");
    solve->add_option("--max-actions", s_max_actions, "episode action cap");
    solve->add_option("--seed", s_seed, "seed");
    solve->add_flag("--trace", s_trace, "per-decision trace to stderr");
    solve->add_option("--plan-out", s_plan_out, "write the plan to a file");

    // agenda
    auto* agenda = app.add_subcommand("agenda", "dump the goal agenda and ordering relation");
    std::string a_domain, a_problem;
    agenda->add_option("--domain", a_domain, "domain PDDL file")->required();
    agenda->add_option("--problem", a_problem, "problem PDDL file")->required();

    // validate
    auto* validate = app.add_subcommand("validate", "replay a plan file against a problem");
    std::string v_domain, v_problem, v_plan;
    validate->add_option("--domain", v_domain, "domain PDDL file")->required();
    validate->add_option("--problem", v_problem, "problem PDDL file")->required();
    validate->add_option("--plan", v_plan, "plan file, one (action args...) per line")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) {
            for (const auto& b : budget_texts)
                overrides.budgets.push_back(lrtp::bench::parse_budget(b));
            return run_bench(manifest, std::move(overrides), bench->count("--domain") > 0);
        }
        if (solve->parsed())
            return run_solve(s_domain, s_problem, s_variant, s_budget, s_max_actions, s_seed,
                             s_trace, s_plan_out);
        if (agenda->parsed())
            return run_agenda(a_domain, a_problem);
        if (validate->parsed())
            return run_validate(v_domain, v_problem, v_plan);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

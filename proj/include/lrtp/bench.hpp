#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrtp/search.hpp"
#include "lrtp/strips.hpp"

namespace lrtp::bench {

class ManifestError : public std::runtime_error {
public:
    explicit ManifestError(const std::string& message) : std::runtime_error(message) {}
};

struct BudgetSpec {
    BudgetKind kind = BudgetKind::Expansions;
    long long amount = 1;
    bool operator==(const BudgetSpec&) const = default;
};

std::string to_string(const BudgetSpec& budget);
BudgetSpec parse_budget(const std::string& text); // "expansions:500" or "ms:100"

// One experiment batch: each (problem x variant x budget) cell runs a fixed
// number of episodes with its own derived seed.
struct ExperimentSpec {
    std::string domain_path;
    std::vector<std::string> problem_paths;
    std::vector<std::string> variants = {"base", "I", "J", "IJ"};
    std::vector<BudgetSpec> budgets;
    int episodes = 10;
    int max_actions = 400;
    uint64_t base_seed = 1;
    std::string out_path;
    bool trace = false;
    int jobs = 1;
};

ExperimentSpec parse_manifest(const std::string& text, const std::string& base_dir = "");
ExperimentSpec parse_manifest_file(const std::string& path);

// I/J flags for a variant name ("base", "I", "J", "IJ").
RunConfig variant_config(const std::string& variant);

struct EpisodeRow {
    int episode = 0;
    bool success = false;
    int plan_length = 0;
    long long decisions = 0;
    long long expansions = 0;
};

struct ExperimentStats {
    std::string domain;
    std::string problem;
    std::string variant;
    BudgetSpec budget;
    int episodes = 0;
    int successes = 0;
    double success_pct = 0.0;
    // Mean over successful episodes; the max_actions sentinel when none
    // succeeded. first_plan_length follows the same sentinel rule.
    double avg_plan_length = 0.0;
    int first_plan_length = 0;
    double avg_decisions = 0.0;
    double avg_expansions = 0.0;
    std::vector<EpisodeRow> rows;
};

struct CellFailure {
    std::string problem_path;
    std::string error;
};

struct ExperimentOutcome {
    std::vector<ExperimentStats> cells;
    std::vector<CellFailure> failures;
};

// Stable per-cell seed: adding cells to a study never perturbs existing ones.
uint64_t cell_seed(uint64_t base_seed, const std::string& domain, const std::string& problem,
                   const std::string& variant, const BudgetSpec& budget);

ExperimentStats aggregate_stats(const std::string& domain, const std::string& problem,
                                const std::string& variant, const BudgetSpec& budget,
                                int max_actions, const std::vector<EpisodeResult>& episodes);

// A bad problem file is recorded as a failure and skipped; the batch
// continues. Cells are independent and may run on a worker pool.
ExperimentOutcome run_experiment(const ExperimentSpec& spec);

std::string stats_to_csv(const std::vector<ExperimentStats>& cells);
void emit_csv(const std::vector<ExperimentStats>& cells, const std::string& path);
std::vector<ExperimentStats> parse_csv(const std::string& text); // aggregate columns only

std::string format_report(const ExperimentOutcome& outcome);

enum class PlanVerdictKind { Valid, UnknownAction, InapplicableAction, GoalUnsatisfied };

struct PlanVerdict {
    PlanVerdictKind kind = PlanVerdictKind::Valid;
    int step = -1; // 1-based first failing step
    std::string detail;

    bool accepted() const { return kind == PlanVerdictKind::Valid; }
};

// Replays a plan of "(name arg...)" lines against the grounded problem.
PlanVerdict validate_plan(const GroundProblem& prob, const std::vector<std::string>& lines);
PlanVerdict validate_plan_file(const std::string& domain_path, const std::string& problem_path,
                               const std::string& plan_path);

} // namespace lrtp::bench

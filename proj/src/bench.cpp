#include "lrtp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "lrtp/pddl.hpp"

namespace lrtp::bench {

std::string to_string(const BudgetSpec& budget) {
    return (budget.kind == BudgetKind::Expansions ? "expansions:" : "ms:") +
           std::to_string(budget.amount);
}

BudgetSpec parse_budget(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ManifestError("budget must look like 'expansions:500' or 'ms:100', got '" + text +
                            "'");
    std::string kind = text.substr(0, colon);
    BudgetSpec spec;
    if (kind == "expansions")
        spec.kind = BudgetKind::Expansions;
    else if (kind == "ms")
        spec.kind = BudgetKind::WallClockMillis;
    else
        throw ManifestError("unknown budget kind '" + kind + "'");
    try {
        spec.amount = std::stoll(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw ManifestError("bad budget amount in '" + text + "'");
    }
    if (spec.amount < 1)
        throw ManifestError("budget amount must be >= 1");
    return spec;
}

RunConfig variant_config(const std::string& variant) {
    RunConfig cfg;
    if (variant == "base") {
    } else if (variant == "I") {
        cfg.improve_incremental = true;
    } else if (variant == "J") {
        cfg.improve_jump = true;
    } else if (variant == "IJ") {
        cfg.improve_incremental = true;
        cfg.improve_jump = true;
    } else {
        throw ManifestError("unknown variant '" + variant + "' (expected base, I, J or IJ)");
    }
    return cfg;
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    size_t e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

std::string join_path(const std::string& base_dir, const std::string& path) {
    if (base_dir.empty() || std::filesystem::path(path).is_absolute())
        return path;
    return (std::filesystem::path(base_dir) / path).string();
}

} // namespace

ExperimentSpec parse_manifest(const std::string& text, const std::string& base_dir) {
    ExperimentSpec spec;
    spec.variants.clear();
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ManifestError("manifest line " + std::to_string(line_no) +
                                ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "domain") {
                spec.domain_path = join_path(base_dir, value);
            } else if (key == "problem") {
                for (const auto& p : split_list(value))
                    spec.problem_paths.push_back(join_path(base_dir, p));
            } else if (key == "variants" || key == "variant") {
                for (const auto& v : split_list(value)) {
                    variant_config(v); // validates the name
                    spec.variants.push_back(v);
                }
            } else if (key == "budgets" || key == "budget") {
                for (const auto& b : split_list(value))
                    spec.budgets.push_back(parse_budget(b));
            } else if (key == "episodes") {
                spec.episodes = std::stoi(value);
            } else if (key == "max_actions") {
                spec.max_actions = std::stoi(value);
            } else if (key == "seed") {
                spec.base_seed = std::stoull(value);
            } else if (key == "out") {
                spec.out_path = join_path(base_dir, value);
            } else if (key == "trace") {
                spec.trace = (value == "true" || value == "1" || value == "yes");
            } else if (key == "jobs") {
                spec.jobs = std::stoi(value);
            } else {
                throw ManifestError("unknown manifest key '" + key + "'");
            }
        } catch (const ManifestError&) {
            throw;
        } catch (const std::exception& e) {
            throw ManifestError("manifest line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (spec.domain_path.empty())
        throw ManifestError("manifest is missing 'domain ='");
    if (spec.problem_paths.empty())
        throw ManifestError("manifest is missing 'problem ='");
    if (spec.variants.empty())
        spec.variants = {"base", "I", "J", "IJ"};
    if (spec.budgets.empty())
        throw ManifestError("manifest is missing 'budget ='");
    if (spec.episodes < 1)
        throw ManifestError("episodes must be >= 1");
    if (spec.max_actions < 1)
        throw ManifestError("max_actions must be >= 1");
    if (spec.jobs < 1)
        spec.jobs = 1;
    return spec;
}

ExperimentSpec parse_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ManifestError("cannot open manifest: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str(), std::filesystem::path(path).parent_path().string());
}

uint64_t cell_seed(uint64_t base_seed, const std::string& domain, const std::string& problem,
                   const std::string& variant, const BudgetSpec& budget) {
    uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
    auto mix_byte = [&](unsigned char b) {
        h ^= b;
        h *= 0x100000001b3ull;
    };
    auto mix_str = [&](const std::string& s) {
        for (unsigned char c : s)
            mix_byte(c);
        mix_byte(0xff); // separator
    };
    for (int i = 0; i < 8; ++i)
        mix_byte(static_cast<unsigned char>(base_seed >> (8 * i)));
    mix_str(domain);
    mix_str(problem);
    mix_str(variant);
    mix_str(to_string(budget));
    return h ? h : 1;
}

ExperimentStats aggregate_stats(const std::string& domain, const std::string& problem,
                                const std::string& variant, const BudgetSpec& budget,
                                int max_actions, const std::vector<EpisodeResult>& episodes) {
    ExperimentStats stats;
    stats.domain = domain;
    stats.problem = problem;
    stats.variant = variant;
    stats.budget = budget;
    stats.episodes = static_cast<int>(episodes.size());

    long long plan_sum = 0;
    long long decision_sum = 0;
    long long expansion_sum = 0;
    stats.first_plan_length = -1;
    for (size_t i = 0; i < episodes.size(); ++i) {
        const EpisodeResult& ep = episodes[i];
        int len = static_cast<int>(ep.executed_plan.size());
        if (ep.success) {
            ++stats.successes;
            plan_sum += len;
            if (stats.first_plan_length < 0)
                stats.first_plan_length = len;
        }
        decision_sum += ep.decisions;
        expansion_sum += ep.expansions_total;
        stats.rows.push_back(EpisodeRow{static_cast<int>(i + 1), ep.success, len, ep.decisions,
                                        ep.expansions_total});
    }
    if (stats.episodes > 0) {
        stats.success_pct = 100.0 * stats.successes / stats.episodes;
        stats.avg_decisions = static_cast<double>(decision_sum) / stats.episodes;
        stats.avg_expansions = static_cast<double>(expansion_sum) / stats.episodes;
    }
    // A cell that never reaches the goal reports the episode cap instead of
    // a plan length.
    if (stats.successes > 0)
        stats.avg_plan_length = static_cast<double>(plan_sum) / stats.successes;
    else
        stats.avg_plan_length = max_actions;
    if (stats.first_plan_length < 0)
        stats.first_plan_length = max_actions;
    return stats;
}

namespace {

struct Cell {
    size_t problem_index;
    std::string variant;
    BudgetSpec budget;
};

} // namespace

ExperimentOutcome run_experiment(const ExperimentSpec& spec) {
    ExperimentOutcome outcome;

    pddl::DomainAst domain = pddl::parse_domain_file(spec.domain_path);

    struct LoadedProblem {
        std::string name;
        GroundProblem ground;
        bool ok = false;
    };
    std::vector<LoadedProblem> problems(spec.problem_paths.size());
    for (size_t i = 0; i < spec.problem_paths.size(); ++i) {
        try {
            pddl::ProblemAst ast = pddl::parse_problem_file(spec.problem_paths[i]);
            problems[i].name = ast.name;
            problems[i].ground = pddl::ground(domain, ast);
            problems[i].ok = true;
        } catch (const std::exception& e) {
            outcome.failures.push_back(CellFailure{spec.problem_paths[i], e.what()});
        }
    }

    std::vector<Cell> cells;
    for (size_t pi = 0; pi < problems.size(); ++pi) {
        if (!problems[pi].ok)
            continue;
        for (const auto& variant : spec.variants)
            for (const auto& budget : spec.budgets)
                cells.push_back(Cell{pi, variant, budget});
    }

    std::vector<ExperimentStats> results(cells.size());
    std::mutex trace_mutex;
    std::atomic<size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= cells.size())
                break;
            const Cell& cell = cells[i];
            const LoadedProblem& lp = problems[cell.problem_index];

            RunConfig cfg = variant_config(cell.variant);
            cfg.budget.kind = cell.budget.kind;
            cfg.budget.amount = cell.budget.amount;
            cfg.global_kind = GlobalLimitKind::EpisodeCount;
            cfg.global_amount = spec.episodes;
            cfg.max_actions_per_episode = spec.max_actions;
            cfg.seed = cell_seed(spec.base_seed, domain.name, lp.name, cell.variant, cell.budget);

            TraceSink sink;
            if (spec.trace) {
                std::string prefix = "[" + domain.name + "/" + lp.name + "/" + cell.variant +
                                     "/" + to_string(cell.budget) + "] ";
                sink = [prefix, &trace_mutex](const std::string& line) {
                    std::lock_guard<std::mutex> lock(trace_mutex);
                    std::fprintf(stderr, "%s%s\n", prefix.c_str(), line.c_str());
                };
            }

            auto episodes = lrtp_run(lp.ground, cfg, sink);
            results[i] = aggregate_stats(domain.name, lp.name, cell.variant, cell.budget,
                                         spec.max_actions, episodes);
        }
    };

    int jobs = std::min<int>(spec.jobs, static_cast<int>(cells.size()) > 0
                                            ? static_cast<int>(cells.size())
                                            : 1);
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    outcome.cells = std::move(results);
    return outcome;
}

namespace {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

std::string stats_to_csv(const std::vector<ExperimentStats>& cells) {
    std::ostringstream os;
    os << "domain,problem,variant,budget_kind,budget,episodes,success_pct,avg_plan_len,"
          "first_plan_len,avg_decisions,avg_expansions\n";
    for (const auto& c : cells) {
        os << c.domain << ',' << c.problem << ',' << c.variant << ','
           << (c.budget.kind == BudgetKind::Expansions ? "expansions" : "ms") << ','
           << c.budget.amount << ',' << c.episodes << ',' << format_number(c.success_pct) << ','
           << format_number(c.avg_plan_length) << ',' << c.first_plan_length << ','
           << format_number(c.avg_decisions) << ',' << format_number(c.avg_expansions) << '\n';
    }
    return os.str();
}

void emit_csv(const std::vector<ExperimentStats>& cells, const std::string& path) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ManifestError("cannot write CSV file: " + path);
    out << stats_to_csv(cells);
    if (!out)
        throw ManifestError("error while writing CSV file: " + path);
}

std::vector<ExperimentStats> parse_csv(const std::string& text) {
    std::vector<ExperimentStats> cells;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ','))
            fields.push_back(field);
        if (fields.size() != 11)
            throw ManifestError("bad CSV row: " + line);
        ExperimentStats c;
        c.domain = fields[0];
        c.problem = fields[1];
        c.variant = fields[2];
        c.budget.kind =
            fields[3] == "expansions" ? BudgetKind::Expansions : BudgetKind::WallClockMillis;
        c.budget.amount = std::stoll(fields[4]);
        c.episodes = std::stoi(fields[5]);
        auto to_double = [](const std::string& s) {
            double v = 0;
            std::from_chars(s.data(), s.data() + s.size(), v);
            return v;
        };
        c.success_pct = to_double(fields[6]);
        c.avg_plan_length = to_double(fields[7]);
        c.first_plan_length = std::stoi(fields[8]);
        c.avg_decisions = to_double(fields[9]);
        c.avg_expansions = to_double(fields[10]);
        c.successes = static_cast<int>(c.success_pct * c.episodes / 100.0 + 0.5);
        cells.push_back(std::move(c));
    }
    return cells;
}

std::string format_report(const ExperimentOutcome& outcome) {
    std::ostringstream os;
    os << std::left << std::setw(14) << "domain" << std::setw(20) << "problem" << std::setw(8)
       << "variant" << std::setw(18) << "budget" << std::right << std::setw(9) << "episodes"
       << std::setw(10) << "success%" << std::setw(12) << "avg_len" << std::setw(11)
       << "first_len" << '\n';
    for (const auto& c : outcome.cells) {
        os << std::left << std::setw(14) << c.domain << std::setw(20) << c.problem << std::setw(8)
           << c.variant << std::setw(18) << to_string(c.budget) << std::right << std::setw(9)
           << c.episodes << std::setw(10) << format_number(c.success_pct) << std::setw(12)
           << format_number(c.avg_plan_length) << std::setw(11) << c.first_plan_length << '\n';
    }
    for (const auto& f : outcome.failures)
        os << "FAILED " << f.problem_path << ": " << f.error << '\n';
    return os.str();
}

// --- plan validation ---

namespace {

// "(name arg1 arg2)" -> "name arg1 arg2", lowercased; empty for blank lines.
std::string canonical_action_name(const std::string& line) {
    std::string body;
    for (char c : line) {
        if (c == ';')
            break;
        if (c == '(' || c == ')')
            continue;
        body.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    std::istringstream in(body);
    std::string word, name;
    while (in >> word) {
        if (!name.empty())
            name.push_back(' ');
        name += word;
    }
    return name;
}

} // namespace

PlanVerdict validate_plan(const GroundProblem& prob, const std::vector<std::string>& lines) {
    std::unordered_map<std::string, ActionId> by_name;
    for (const Action& a : prob.actions)
        by_name.emplace(a.name, a.id);

    State current = prob.init;
    int step = 0;
    for (const std::string& line : lines) {
        std::string name = canonical_action_name(line);
        if (name.empty())
            continue;
        ++step;
        auto it = by_name.find(name);
        if (it == by_name.end())
            return PlanVerdict{PlanVerdictKind::UnknownAction, step,
                               "step " + std::to_string(step) + ": unknown action (" + name + ")"};
        auto next = apply_action(current, prob.actions[static_cast<size_t>(it->second)]);
        if (!next)
            return PlanVerdict{PlanVerdictKind::InapplicableAction, step,
                               "step " + std::to_string(step) + ": action (" + name +
                                   ") is not applicable"};
        current = std::move(*next);
    }
    if (!goal_satisfied(current, prob.goal)) {
        for (PropId p : prob.goal)
            if (!current.contains(p))
                return PlanVerdict{PlanVerdictKind::GoalUnsatisfied, step,
                                   "plan ends without goal atom (" + prob.prop_name(p) + ")"};
    }
    return PlanVerdict{PlanVerdictKind::Valid, -1,
                       "valid plan, " + std::to_string(step) + " steps"};
}

PlanVerdict validate_plan_file(const std::string& domain_path, const std::string& problem_path,
                               const std::string& plan_path) {
    pddl::DomainAst domain = pddl::parse_domain_file(domain_path);
    pddl::ProblemAst problem = pddl::parse_problem_file(problem_path);
    // Validate against the full ground action set: pruning must not turn a
    // nominally-known action into UnknownAction.
    GroundProblem ground = pddl::ground(domain, problem, pddl::GroundOptions{false});

    std::ifstream in(plan_path);
    if (!in)
        throw ManifestError("cannot open plan file: " + plan_path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return validate_plan(ground, lines);
}

} // namespace lrtp::bench

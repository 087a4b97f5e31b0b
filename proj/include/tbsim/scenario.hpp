#pragma once

#include <tbsim/agents.hpp>
#include <tbsim/analytics.hpp>
#include <tbsim/errors.hpp>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tbsim {

enum class RunMode { Single, MonteCarlo, Prob };

/// One scenario file, parsed and validated.
struct ScenarioConfig {
    std::uint64_t seed = 0;
    RunMode mode = RunMode::Single;
    std::uint64_t trials = 1;
    unsigned threads = 0;          // 0: hardware concurrency
    bool selection_only = false;   // montecarlo: draw solvers without playing the task
    ScenarioSpec spec;
    std::optional<AttackProbQuery> prob;
};

/// Parses and validates a scenario document. Throws Error(ConfigInvalid).
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);

/// SIM_SEED, when set, replaces the configured seed.
void apply_seed_override(ScenarioConfig& config);

/// `{"code": [...], "input": [...]}` or `{"generate": {"seed", "max_steps"}}`.
Program parse_program(const nlohmann::json& doc);
nlohmann::json program_to_json(const Program& program);

struct TrialReport {
    std::uint64_t trial_id = 0;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> accepted_solution;
    bool restarted = false;
    bool abandoned = false;
    bool correct = false;
    bool selected_all_attacker = false;
    std::uint64_t honest_solution = 0;
    std::vector<TaskResult> tasks;
    std::vector<LedgerEvent> slashes;
    std::vector<LedgerEvent> rewards;
    std::vector<nlohmann::json> games;
    std::uint64_t games_played = 0;
    std::uint64_t rounds_elapsed = 0;
    Amount burned = 0;
    Amount rewards_total = 0;
};

nlohmann::json to_json(const TrialReport& report);

struct SingleRun {
    TrialReport report;
    std::string events_jsonl;
    std::string summary;
};

/// One full simulated trial. Deterministic in (config, trial_id).
SingleRun run_trial(const ScenarioConfig& config, std::uint64_t trial_id);

/// run_trial for trial 0, writing events.jsonl, report.json and summary.txt
/// into `out_dir` when given.
SingleRun run_single(const ScenarioConfig& config, const std::optional<std::filesystem::path>& out_dir);

inline constexpr const char* TRIALS_CSV_HEADER = "trial_id,selected_all_attacker,correct,games,burned,rewards_total";
inline constexpr const char* SUMMARY_CSV_HEADER = "closed_form,empirical,stderr";

struct TrialRow {
    std::uint64_t trial_id = 0;
    bool selected_all_attacker = false;
    std::optional<bool> correct;  // empty when the task was not played
    std::uint64_t games = 0;
    Amount burned = 0;
    Amount rewards_total = 0;
};

struct MonteCarloResult {
    std::vector<TrialRow> rows;  // ordered by trial_id
    AttackProbQuery query;
    AttackProbability closed_form;
    std::uint64_t hits = 0;
    double empirical = 0.0;
    double stderr_ = 0.0;
    bool within_tolerance = false;
    std::uint64_t wrong_accepted = 0;
};

/// Runs config.trials independent trials, possibly on several threads.
MonteCarloResult run_montecarlo(const ScenarioConfig& config);

void write_trials_csv(std::ostream& out, const MonteCarloResult& result);
void write_summary_csv(std::ostream& out, const MonteCarloResult& result);
void write_montecarlo(const std::filesystem::path& out_dir, const MonteCarloResult& result);

/// "numerator/denominator = decimal"
std::string run_prob(const AttackProbQuery& query);

/// CLI exit code for an error: 2 for configuration/query errors, 3 otherwise.
int exit_code_for(ErrorCode code) noexcept;

}  // namespace tbsim

#include <tbsim/errors.hpp>
#include <tbsim/scenario.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace tbsim;
using nlohmann::json;

namespace {

json base_config()
{
    return json::parse(R"({
        "seed": 3,
        "pool": {"deposit": 100, "balance": 1000, "counts": {"honest": 4}},
        "task": {"program": {"generate": {"seed": 7, "max_steps": 64}}, "k": 2, "reward": 10}
    })");
}

ErrorCode parse_error(const json& doc)
{
    try {
        parse_config(doc);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvariantViolation;
}

}  // namespace

TEST(Scenario, ParsesCountsIntoAccounts)
{
    auto doc = base_config();
    doc["pool"]["counts"] = {{"honest", 2}, {"randomness_leaker", 2}, {"lazy_copier", 1}, {"cartel_member", 2}};
    doc["pool"]["cartel"] = {{"defectors", 1}};
    auto c = parse_config(doc);
    const auto& acc = c.spec.population.accounts;
    EXPECT_EQ(acc.size(), 8u);
    EXPECT_EQ(c.spec.population.attacker_q(), 2u);
    auto find = [&](const std::string& id) {
        return *std::find_if(acc.begin(), acc.end(), [&](const auto& p) { return p.id == id; });
    };
    EXPECT_EQ(find("randomness_leaker-000").strategy.params.partner, "randomness_leaker-001");
    EXPECT_TRUE(find("randomness_leaker-000").strategy.params.executes);
    EXPECT_EQ(find("lazy_copier-000").strategy.params.partner, "honest-000");
    EXPECT_TRUE(find("cartel_member-000").strategy.params.defector);
    EXPECT_EQ(find("alias-000").strategy.kind, StrategyKind::OutsideWatchdog);
}

TEST(Scenario, RejectsBadConfigs)
{
    auto bad = [](auto mutate) {
        auto doc = base_config();
        mutate(doc);
        return parse_error(doc);
    };
    EXPECT_EQ(bad([](json& d) { d["task"]["k"] = 1; }), ErrorCode::ConfigInvalid);
    EXPECT_EQ(bad([](json& d) { d["task"]["k"] = 9; }), ErrorCode::ConfigInvalid);
    EXPECT_EQ(bad([](json& d) { d["pool"]["deposit"] = 0; }), ErrorCode::ConfigInvalid);
    EXPECT_EQ(bad([](json& d) { d["pool"]["counts"]["saint"] = 1; }), ErrorCode::ConfigInvalid);
    EXPECT_EQ(bad([](json& d) { d["pool"]["counts"]["randomness_leaker"] = 3; }), ErrorCode::ConfigInvalid);
    EXPECT_EQ(bad([](json& d) { d["trials"] = 0; }), ErrorCode::ConfigInvalid);
    EXPECT_EQ(bad([](json& d) { d["mode"] = "party"; }), ErrorCode::ConfigInvalid);
    EXPECT_EQ(bad([](json& d) { d["surprise"] = true; }), ErrorCode::ConfigInvalid);
    EXPECT_EQ(bad([](json& d) { d["timeouts"] = {{"reveal", 0}}; }), ErrorCode::ConfigInvalid);
    EXPECT_EQ(bad([](json& d) {
                  d["task"]["program"] = json::parse(R"({"code": [{"op": "addi", "a": 0, "imm": 1},
                                                                  {"op": "jnz", "a": 0, "imm": -1}]})");
              }),
              ErrorCode::ConfigInvalid);
    EXPECT_EQ(bad([](json& d) { d["task"]["program"] = json::parse(R"({"code": [{"op": "addi", "a": 9}]})"); }),
              ErrorCode::ConfigInvalid);
    EXPECT_EQ(bad([](json& d) { d["task"]["giver_balance"] = 5; }), ErrorCode::ConfigInvalid);
}

TEST(Scenario, ProbMode)
{
    auto c = parse_config(json::parse(R"({"mode": "prob", "prob": {"q": 10, "n": 60, "k": 2}})"));
    EXPECT_EQ(run_prob(*c.prob), "90/3540 = 0.025424");
    EXPECT_EQ(parse_error(json::parse(R"({"mode": "prob", "prob": {"q": 70, "n": 60, "k": 2}})")),
              ErrorCode::ConfigInvalid);
}

TEST(Scenario, HonestSingleRun)
{
    auto run = run_single(parse_config(base_config()), std::nullopt);
    EXPECT_TRUE(run.report.correct);
    EXPECT_EQ(run.report.games_played, 0u);
    EXPECT_TRUE(run.report.slashes.empty());
    EXPECT_EQ(run.report.accepted_solution, run.report.honest_solution);
    EXPECT_NE(run.summary.find("correct:           yes"), std::string::npos);
}

TEST(Scenario, CartelOnlyIsIncorrect)
{
    auto doc = base_config();
    doc["pool"]["counts"] = {{"cartel_member", 2}};
    auto run = run_single(parse_config(doc), std::nullopt);
    EXPECT_FALSE(run.report.correct);
    EXPECT_TRUE(run.report.selected_all_attacker);
}

TEST(Scenario, SameSeedSameLog)
{
    auto doc = base_config();
    doc["pool"]["counts"] = {{"cartel_member", 2}, {"outside_watchdog", 1}, {"honest", 2}};
    auto c = parse_config(doc);
    auto a = run_single(c, std::nullopt);
    auto b = run_single(c, std::nullopt);
    EXPECT_EQ(a.events_jsonl, b.events_jsonl);
    EXPECT_EQ(to_json(a.report).dump(), to_json(b.report).dump());
    c.seed += 1;
    EXPECT_NE(run_single(c, std::nullopt).events_jsonl, a.events_jsonl);
}

TEST(Scenario, EventLogSequenceIsMonotonic)
{
    auto run = run_single(parse_config(base_config()), std::nullopt);
    std::istringstream in(run.events_jsonl);
    std::string line;
    std::int64_t prev = -1;
    while (std::getline(in, line)) {
        auto rec = json::parse(line);
        EXPECT_EQ(rec["seq"].get<std::int64_t>(), prev + 1);
        prev = rec["seq"].get<std::int64_t>();
    }
    EXPECT_GT(prev, 0);
}

TEST(Scenario, WritesOutputFiles)
{
    auto dir = std::filesystem::temp_directory_path() / "tbsim_scenario_test";
    std::filesystem::remove_all(dir);
    auto run = run_single(parse_config(base_config()), dir);
    for (const auto* name : {"events.jsonl", "report.json", "summary.txt"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
    }
    std::ifstream in(dir / "report.json");
    auto report = json::parse(in);
    EXPECT_EQ(report["correct"], true);
    std::filesystem::remove_all(dir);
}

TEST(Scenario, MonteCarloOneTrialOneRow)
{
    auto c = parse_config(base_config());
    c.trials = 1;
    auto r = run_montecarlo(c);
    std::ostringstream csv;
    write_trials_csv(csv, r);
    std::istringstream lines(csv.str());
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    EXPECT_EQ(header, "trial_id,selected_all_attacker,correct,games,burned,rewards_total");
    EXPECT_EQ(row.rfind("0,", 0), 0u);
    EXPECT_FALSE(std::getline(lines, extra));
    std::ostringstream summary;
    write_summary_csv(summary, r);
    EXPECT_EQ(summary.str().substr(0, summary.str().find('\n')), "closed_form,empirical,stderr");
}

TEST(Scenario, MonteCarloRowsOrderedAndThreadIndependent)
{
    auto doc = base_config();
    doc["pool"]["counts"] = {{"cartel_member", 2}, {"honest", 3}, {"outside_watchdog", 1}};
    auto c = parse_config(doc);
    c.trials = 40;
    c.threads = 1;
    auto one = run_montecarlo(c);
    c.threads = 4;
    auto four = run_montecarlo(c);
    std::ostringstream a, b;
    write_trials_csv(a, one);
    write_trials_csv(b, four);
    EXPECT_EQ(a.str(), b.str());
    for (std::uint64_t i = 0; i < one.rows.size(); ++i) {
        EXPECT_EQ(one.rows[i].trial_id, i);
    }
    EXPECT_EQ(one.wrong_accepted, 0u);
}

TEST(Scenario, SelectionOnlyMatchesFullRunDraws)
{
    auto doc = base_config();
    doc["pool"]["counts"] = {{"cartel_member", 2}, {"honest", 3}};
    auto full = parse_config(doc);
    full.trials = 30;
    auto sel = full;
    sel.selection_only = true;
    auto a = run_montecarlo(full);
    auto b = run_montecarlo(sel);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].selected_all_attacker, b.rows[i].selected_all_attacker) << i;
        EXPECT_FALSE(b.rows[i].correct);
    }
}

TEST(Scenario, SeedOverride)
{
    auto c = parse_config(base_config());
    ::setenv("SIM_SEED", "12345", 1);
    apply_seed_override(c);
    EXPECT_EQ(c.seed, 12345u);
    ::setenv("SIM_SEED", "abc", 1);
    EXPECT_THROW(apply_seed_override(c), Error);
    ::unsetenv("SIM_SEED");
}

TEST(Scenario, ExitCodes)
{
    EXPECT_EQ(exit_code_for(ErrorCode::ConfigInvalid), 2);
    EXPECT_EQ(exit_code_for(ErrorCode::InvalidQuery), 2);
    EXPECT_EQ(exit_code_for(ErrorCode::InvariantViolation), 3);
}

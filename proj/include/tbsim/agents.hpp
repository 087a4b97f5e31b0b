#pragma once

#include <tbsim/protocol.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace tbsim {

enum class StrategyKind {
    Honest,
    LazyCopier,
    CartelMember,
    RandomnessLeaker,
    AvailabilityEngineer,
    DelayAttacker,
    OutsideWatchdog,
};

std::string to_string(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(std::string_view name);

struct StrategyParams {
    // cartel_member
    std::string cartel_id;
    FaultSpec fault;             // no fault_step: corrupt the midpoint step
    bool always_cheat = false;   // cheat even when honest solvers share the task
    bool defector = false;       // secretly computes honestly; `partner` is the unlinked alias
    // randomness_leaker / lazy_copier
    std::optional<AccountId> partner;
    bool executes = false;       // leaker: the side that actually runs the task
    // availability_engineer
    bool bogus_tasks = false;
    bool spurious_challenges = true;
    std::uint32_t bogus_k = 2;
};

struct Strategy {
    StrategyKind kind = StrategyKind::Honest;
    StrategyParams params;
};

struct Participant {
    AccountId id;
    Strategy strategy;
    Amount balance = 0;
};

struct ScenarioPopulation {
    std::vector<Participant> accounts;

    std::uint64_t attacker_q() const;       // cartel members
    std::uint64_t honest_watchdogs() const;
    std::uint64_t size() const noexcept { return accounts.size(); }
};

struct ScenarioSpec {
    ProtocolParams params;
    Program program;
    std::uint32_t k = 2;
    Amount reward = 10;
    std::uint64_t tasks = 1;
    Amount giver_balance = 1'000'000;
    ScenarioPopulation population;
    std::uint64_t max_rounds_per_task = 10'000;
};

// Messages an agent can send to the protocol.
struct CommitMsg {
    TaskId task;
    AccountId solver;
    Digest sealed;
    Digest root;
    MerkleProof proof;
    std::optional<Party> party;
};
struct GuessMsg {
    TaskId task;
    AccountId guesser;
    AccountId victim;
    Bytes address;
    Bytes randomness;
    std::optional<Digest> snapshot;
};
struct RevealMsg {
    TaskId task;
    AccountId solver;
    Bytes randomness;
    std::uint64_t solution;
};
struct ChallengeMsg {
    TaskId task;
    AccountId challenger;
    AccountId target;
    ChallengeTarget kind;
    Party party;
};
struct PostTaskMsg {
    TaskSpec spec;
};
using Message = std::variant<CommitMsg, GuessMsg, RevealMsg, ChallengeMsg, PostTaskMsg>;

/// Work a solver (or a colluding partner on its behalf) prepared for a task.
struct SolverWork {
    Bytes randomness;
    std::shared_ptr<const Trace> trace;  // null when nothing was executed
    std::uint64_t solution = 0;
    std::shared_ptr<const SnapshotTree> tree;
};

class Simulation;

/// (task, attempt, account)
using WorkKey = std::tuple<TaskId, std::uint64_t, AccountId>;

/// Read-only view handed to agents, plus the out-of-band channel colluding
/// accounts use to pass work between each other.
struct WorldView {
    const Protocol& engine;
    const Simulation& sim;
    std::map<WorkKey, SolverWork>& side_channel;
};

class Agent {
public:
    Agent(Participant participant, std::uint64_t seed);

    const AccountId& id() const noexcept { return id_; }
    const Strategy& strategy() const noexcept { return strategy_; }

    /// Messages this agent sends now; empty when it has nothing to do.
    std::vector<Message> act(WorldView& view);

    /// Bogus tasks to post just before a real task goes out.
    std::vector<Message> before_task(WorldView& view);

private:
    std::vector<Message> act_as_solver(WorldView& view, const TaskInstance& t);
    std::vector<Message> act_as_observer(WorldView& view, const TaskInstance& t);
    SolverWork prepare(const TaskInstance& t, const AccountId& solver,
                       std::shared_ptr<const Trace> trace);
    SolverWork fabricate(const TaskInstance& t, std::uint64_t solution);
    bool cartel_owns(const WorldView& view, const TaskInstance& t) const;

    AccountId id_;
    Strategy strategy_;
    Rng rng_;
    std::map<WorkKey, SolverWork> work_;
    std::set<WorkKey> challenged_;
    std::set<WorkKey> guessed_;
    std::set<WorkKey> committed_;
    std::set<WorkKey> revealed_;
    std::set<std::pair<TaskId, std::uint64_t>> spurious_;
};

struct TaskResult {
    TaskId id = 0;
    bool primary = true;
    std::optional<std::uint64_t> accepted_solution;
    bool abandoned = false;
    bool correct = false;
    bool selected_all_attacker = false;
    std::uint64_t restarts = 0;
    std::uint64_t games = 0;
};

struct SimulationResult {
    std::vector<TaskResult> tasks;
    std::uint64_t rounds = 0;
    std::uint64_t honest_solution = 0;
    Amount burned = 0;
    Amount rewards_total = 0;
    std::vector<LedgerEvent> slashes;
    std::vector<LedgerEvent> rewards;
    std::map<AccountId, Amount> payoff;  // end minus start of balance + deposit
};

/// Runs a scenario: posts `spec.tasks` tasks one after another, drives every
/// agent each round until nobody has anything to send, then ticks. Ledger
/// conservation is checked after every round.
class Simulation {
public:
    Simulation(ScenarioSpec spec, std::uint64_t seed);

    SimulationResult run();

    const Protocol& engine() const noexcept { return engine_; }
    Protocol& engine() noexcept { return engine_; }
    const ScenarioSpec& spec() const noexcept { return spec_; }
    const Strategy* strategy_of(const AccountId& id) const;
    const std::shared_ptr<const Trace>& honest_trace() const noexcept { return honest_; }
    /// The shared wrong trace a cheating cartel commits to.
    const std::shared_ptr<const Trace>& cartel_trace() const noexcept { return cartel_; }
    /// A trace that differs from the honest one only in the last step.
    const std::shared_ptr<const Trace>& bogus_trace() const noexcept { return bogus_; }
    bool is_attacker(const AccountId& id) const;

    static constexpr const char* GIVER = "task-giver";

private:
    void apply(const Message& msg);
    void quiesce();
    bool all_done() const;

    ScenarioSpec spec_;
    Protocol engine_;
    std::vector<Agent> agents_;
    std::map<AccountId, std::size_t> index_;
    std::map<WorkKey, SolverWork> side_channel_;
    std::shared_ptr<const Trace> honest_;
    std::shared_ptr<const Trace> cartel_;
    std::shared_ptr<const Trace> bogus_;
    std::set<TaskId> primary_;
};

struct PayoffRow {
    std::uint64_t accounts = 0;
    double mean_payoff = 0.0;  // per account, averaged over trials
};

/// Monte Carlo mean payoff per strategy kind.
std::map<StrategyKind, PayoffRow> payoff_table(const ScenarioSpec& spec, std::uint64_t seed,
                                               std::uint64_t trials);

/// Mean payoff of a set of accounts (e.g. a defector plus its alias).
double mean_payoff(const ScenarioSpec& spec, std::uint64_t seed, std::uint64_t trials,
                   const std::vector<AccountId>& accounts);

}  // namespace tbsim

#pragma once

#include <tbsim/events.hpp>
#include <tbsim/game.hpp>
#include <tbsim/ledger.hpp>
#include <tbsim/merkle.hpp>
#include <tbsim/rng.hpp>
#include <tbsim/stepvm.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace tbsim {

/// Round counts for each waiting period.
struct Timeouts {
    std::uint64_t commit = 10;
    std::uint64_t challenge1 = 10;
    std::uint64_t reveal_delay = 2;
    std::uint64_t reveal = 10;
    std::uint64_t inactivity = 20;
};

struct ProtocolParams {
    Amount deposit = 100;  // D
    std::optional<Amount> guess_stake;  // defaults to D
    Timeouts timeouts;
    std::uint64_t max_restarts = 8;
    std::uint64_t max_steps = DEFAULT_MAX_STEPS;

    Amount stake_for_guess() const noexcept { return guess_stake.value_or(deposit); }
};

struct TaskSpec {
    AccountId giver;
    Program program;
    std::uint64_t steps = 0;  // n; filled from the reference run when 0
    std::uint32_t k = 2;
    Amount reward = 10;  // X per non-slashed solver
};

enum class TaskPhase {
    Posted,       // solvers selected, waiting for commitments
    Committed,
    Challenge1,   // randomness-guess window
    RevealDelay,  // rollback protection before reveals
    Revealed,     // reveal window open
    Resolving,    // tournament + outside challenges
    Accepted,
    Restarted,
    Abandoned,    // restarts exhausted or pool too small
};

std::string to_string(TaskPhase phase);

/// What the contract keeps after verifying a commitment.
struct Commitment {
    AccountId solver;
    Digest sealed;
    Digest root;
    PersonalizedLeaf committed_leaf;
};

struct Reveal {
    Bytes randomness;
    std::uint64_t solution = 0;
};

struct SolverSlot {
    AccountId id;
    std::uint64_t commit_deadline = 0;
    std::optional<Commitment> commitment;
    std::optional<Reveal> reveal;
    std::optional<Party> party;
    bool slashed = false;
};

struct PendingGuess {
    AccountId guesser;
    AccountId victim;
    Digest key;  // hash(s, p) as submitted
    Amount stake = 0;
};

struct ChallengerRecord {
    bool slashed = false;
    std::uint64_t games = 0;
};

enum class ChallengeTarget { Solution, CommittedLeaf };

struct TaskInstance {
    TaskId id = 0;
    TaskSpec spec;
    TaskPhase phase = TaskPhase::Posted;
    std::uint64_t attempt = 0;
    std::uint64_t posted_round = 0;
    std::vector<AccountId> selected;            // every solver drawn this attempt, in draw order
    std::vector<AccountId> first_selection;     // the very first draw (for attack statistics)
    std::map<AccountId, SolverSlot> slots;
    std::map<AccountId, ChallengerRecord> challengers;
    std::vector<PendingGuess> pending_guesses;
    std::uint64_t phase_deadline = 0;
    std::uint64_t last_activity = 0;
    Amount game_slash_pool = 0;     // slashed game deposits awaiting distribution
    std::uint64_t slashed_in_games = 0;
    std::uint64_t games_played = 0;
    std::uint64_t restarts = 0;
    std::optional<std::uint64_t> accepted_solution;

    bool terminal() const noexcept
    {
        return phase == TaskPhase::Accepted || phase == TaskPhase::Abandoned;
    }
    std::vector<AccountId> active_solvers() const;
    bool is_selected(const AccountId& id) const { return slots.count(id) != 0; }
};

enum class SubmitResult { Accepted, Slashed };
enum class GuessResult { Correct, Incorrect, Pending };
enum class ResolveStatus { Undecided, SingleSolution, AllSlashed };

/// Uniform sample of k distinct ids from `available`, in draw order.
std::vector<AccountId> draw_solvers(std::span<const AccountId> available, std::size_t k, Rng& rng);

/// Discrete-round protocol state machine plus the ledger it settles against.
/// Message handlers validate the sender and phase, apply penalties, and move
/// the task forward; `tick` advances the clock and fires every deadline.
class Protocol {
public:
    Protocol(ProtocolParams params, std::uint64_t seed);

    Protocol(const Protocol&) = delete;
    Protocol& operator=(const Protocol&) = delete;

    const ProtocolParams& params() const noexcept { return params_; }
    Ledger& ledger() noexcept { return ledger_; }
    const Ledger& ledger() const noexcept { return ledger_; }
    EventLog& log() noexcept { return log_; }
    const EventLog& log() const noexcept { return log_; }
    std::uint64_t clock() const noexcept { return clock_; }

    /// Opens an account and, when `bond` is set, bonds a deposit D.
    Account& add_account(const AccountId& id, Amount balance, bool bond);

    const TaskInstance& task(TaskId id) const;
    std::vector<TaskId> task_ids() const;

    // posting and drawing solvers
    TaskId post_task(TaskSpec spec);
    std::vector<AccountId> select_solvers(TaskId task);
    std::vector<AccountId> available_solvers() const;

    // commit
    SubmitResult submit_commitment(TaskId task, const AccountId& solver, const Digest& sealed,
                                   const Digest& root, const MerkleProof& proof);

    // Randomness guess. `snapshot` (the victim's snapshot at its committed index) lets
    // the guess be checked against the stored leaf right away; without it the
    // guess is settled when the victim reveals.
    GuessResult guess_randomness(TaskId task, const AccountId& guesser, const AccountId& victim,
                                 ByteView solver_address, ByteView randomness,
                                 const std::optional<Digest>& snapshot = std::nullopt);

    // reveal
    SubmitResult reveal(TaskId task, const AccountId& solver, ByteView randomness,
                        std::uint64_t solution);

    /// The trace a solver will answer verification games from. Unregistered
    /// solvers time out of every game.
    void register_party(TaskId task, const AccountId& solver, Party party);

    // resolution
    /// Plays one tournament game between two distinct solution groups.
    ResolveStatus resolve_round(TaskId task);
    /// Plays tournament games until one solution (or none) remains.
    ResolveStatus resolve(TaskId task);
    GameOutcome accept_outside_challenge(TaskId task, const AccountId& challenger,
                                         const AccountId& target_solver, ChallengeTarget target,
                                         Party challenger_party);

    // Rewards and burns for the current attempt; run on acceptance or restart.
    std::vector<LedgerEvent> distribute_rewards(TaskId task);

    /// Advances the clock one round and fires deadlines in every open task.
    void tick();

    /// Distinct revealed solutions with at least one unslashed solver.
    std::map<std::uint64_t, std::vector<AccountId>> solution_groups(TaskId task) const;

private:
    TaskInstance& task_mut(TaskId id);
    void set_phase(TaskInstance& t, TaskPhase phase);
    void slash_solver(TaskInstance& t, const AccountId& id, SlashCause cause, const std::string& note);
    void draw_into(TaskInstance& t, std::size_t count);
    void after_commit_change(TaskInstance& t);
    void after_reveal_change(TaskInstance& t);
    void settle_guess(TaskInstance& t, const PendingGuess& g, bool correct);
    void settle_pending_guesses(TaskInstance& t, const AccountId& victim);
    bool check_all_slashed(TaskInstance& t);
    void restart(TaskInstance& t);
    void accept(TaskInstance& t, std::uint64_t solution);
    void release_solvers(TaskInstance& t);
    GameOutcome play(TaskInstance& t, Party claimant, Party challenger,
                     const std::optional<GameAnchor>& anchor, const std::string& kind);
    void process_deadlines(TaskInstance& t);

    ProtocolParams params_;
    Rng rng_;
    EventLog log_;
    Ledger ledger_;
    std::map<TaskId, TaskInstance> tasks_;
    TaskId next_task_ = 1;
    std::uint64_t clock_ = 0;
};

}  // namespace tbsim

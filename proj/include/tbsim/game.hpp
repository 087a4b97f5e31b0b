#pragma once

#include <tbsim/digest.hpp>
#include <tbsim/stepvm.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tbsim {

using AccountId = std::string;

/// One side of a verification game: the trace it answers from, the solution
/// it claims, and how many messages it will send before going silent.
class Party {
public:
    Party() = default;
    Party(AccountId id, std::shared_ptr<const Trace> trace, std::uint64_t solution)
        : id_(std::move(id)), trace_(std::move(trace)), solution_(solution)
    {
    }

    /// A party with no trace; every query times out.
    static Party silent(AccountId id, std::uint64_t solution) { return {std::move(id), nullptr, solution}; }

    const AccountId& id() const noexcept { return id_; }
    std::uint64_t solution() const noexcept { return solution_; }
    bool has_trace() const noexcept { return trace_ != nullptr; }
    const Trace* trace() const noexcept { return trace_.get(); }

    /// Same trace, different claimed solution (and a fresh response budget).
    Party with_solution(std::uint64_t solution) const { return {id_, trace_, solution}; }

    /// Stop answering after `messages` more replies.
    void set_response_budget(std::uint64_t messages) { budget_ = messages; }

    /// Snapshot digest after `step` (0 = initial state); nullopt on timeout.
    std::optional<Digest> snapshot_at(std::uint64_t step);

    /// Full state after `step`, revealed to the judge; nullopt on timeout.
    std::optional<MachineState> state_at(std::uint64_t step);

private:
    bool spend();

    AccountId id_;
    std::shared_ptr<const Trace> trace_;
    std::uint64_t solution_ = 0;
    std::optional<std::uint64_t> budget_;
};

enum class GamePhase { Bisecting, Judging, Done };
enum class Response { Agree, Disagree };

struct TranscriptEntry {
    std::uint64_t index;
    Digest claimant_digest;
    Response response;
};

struct GameOutcome {
    AccountId winner;
    AccountId loser;
    std::uint64_t faulty_step = 0;
    std::uint64_t rounds = 0;
    bool by_timeout = false;
    bool solution_dispute = false;
};

/// Invariant while bisecting: the parties agree on the snapshot at `lo` and
/// disagree on the one at `hi`; judging starts exactly when hi == lo + 1.
struct GameState {
    AccountId claimant;
    AccountId challenger;
    std::uint64_t steps = 0;
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::uint64_t pivot = 0;
    Digest agreed_lo;
    Digest claimant_hi;
    bool solution_dispute = false;
    std::uint64_t rounds = 0;
    std::vector<TranscriptEntry> transcript;
    GamePhase phase = GamePhase::Bisecting;
    std::optional<GameOutcome> outcome;
};

/// Restricts a game to [0, step]. The claimant's snapshot at `step` must pass
/// `binds` (e.g. reproduce a committed Merkle leaf) or the claimant loses.
struct GameAnchor {
    std::uint64_t step = 0;
    std::function<bool(const Digest&)> binds;
};

/// Starts a game over [0, steps], or [0, anchor.step] for a leaf challenge.
/// The claimant defends its snapshot at the upper end. Identical final
/// snapshots with different solutions go straight to judging as a solution
/// dispute. Throws NoDisagreement when nothing is in dispute.
GameState open_game(Party& claimant, Party& challenger, const Program& program,
                    std::uint64_t steps, const std::optional<GameAnchor>& anchor = std::nullopt);

/// One bisection query at floor((lo + hi) / 2). A party that fails to
/// answer loses immediately and the game moves to Done.
void bisect_round(GameState& game, Party& claimant, Party& challenger);

/// Re-executes the single disputed step from the agreed state and settles
/// the game. Throws MissingCommitment when no party can open the agreed
/// snapshot at `lo`.
GameOutcome judge(GameState& game, Party& claimant, Party& challenger, const Program& program);

GameOutcome run_game_to_completion(Party& claimant, Party& challenger, const Program& program,
                                   std::uint64_t steps,
                                   const std::optional<GameAnchor>& anchor = std::nullopt);

}  // namespace tbsim

#include <tbsim/errors.hpp>
#include <tbsim/game.hpp>

#include <algorithm>

namespace tbsim {

bool Party::spend()
{
    if (!trace_) {
        return false;
    }
    if (budget_) {
        if (*budget_ == 0) {
            return false;
        }
        --*budget_;
    }
    return true;
}

std::optional<Digest> Party::snapshot_at(std::uint64_t step)
{
    if (!spend()) {
        return std::nullopt;
    }
    if (step == 0) {
        return trace_->states.front().digest();
    }
    if (trace_->snapshots.empty()) {
        return std::nullopt;
    }
    // past the end of a halted trace the last state repeats
    return trace_->snapshots[std::min<std::uint64_t>(step, trace_->snapshots.size()) - 1];
}

std::optional<MachineState> Party::state_at(std::uint64_t step)
{
    if (!spend()) {
        return std::nullopt;
    }
    return trace_->states[std::min<std::uint64_t>(step, trace_->states.size() - 1)];
}

namespace {

void finish(GameState& game, const AccountId& winner, const AccountId& loser,
            bool by_timeout)
{
    game.phase = GamePhase::Done;
    game.outcome = GameOutcome{winner, loser, game.hi, game.rounds, by_timeout, game.solution_dispute};
}

void settle_after_open(GameState& game)
{
    if (game.phase == GamePhase::Bisecting && game.hi == game.lo + 1) {
        game.phase = GamePhase::Judging;
    }
}

}  // namespace

GameState open_game(Party& claimant, Party& challenger, const Program& program,
                    std::uint64_t steps, const std::optional<GameAnchor>& anchor)
{
    GameState game;
    game.claimant = claimant.id();
    game.challenger = challenger.id();
    game.steps = steps;
    game.lo = 0;
    game.hi = anchor ? anchor->step : steps;
    if (game.hi < 1 || game.hi > steps) {
        throw Error(ErrorCode::IndexOutOfRange, "game anchor " + std::to_string(game.hi));
    }
    // Both parties start from the public input, so step 0 is agreed.
    game.agreed_lo = initial_state(program).digest();

    auto claimed = claimant.snapshot_at(game.hi);
    if (!claimed) {
        finish(game, game.challenger, game.claimant, true);
        return game;
    }
    if (anchor && anchor->binds && !anchor->binds(*claimed)) {
        finish(game, game.challenger, game.claimant, false);
        return game;
    }
    auto own = challenger.snapshot_at(game.hi);
    if (!own) {
        finish(game, game.claimant, game.challenger, true);
        return game;
    }
    game.claimant_hi = *claimed;
    if (*claimed == *own) {
        bool full_range = game.hi == steps;
        if (full_range && claimant.solution() != challenger.solution()) {
            game.solution_dispute = true;
            game.lo = game.hi;
            game.phase = GamePhase::Judging;
            return game;
        }
        throw Error(ErrorCode::NoDisagreement,
                    "parties agree on snapshot " + std::to_string(game.hi));
    }
    settle_after_open(game);
    return game;
}

void bisect_round(GameState& game, Party& claimant, Party& challenger)
{
    if (game.phase != GamePhase::Bisecting) {
        throw Error(ErrorCode::WrongPhase, "bisect_round outside the bisecting phase");
    }
    game.pivot = game.lo + (game.hi - game.lo) / 2;
    game.rounds += 1;
    auto posted = claimant.snapshot_at(game.pivot);
    if (!posted) {
        finish(game, game.challenger, game.claimant, true);
        return;
    }
    auto own = challenger.snapshot_at(game.pivot);
    if (!own) {
        finish(game, game.claimant, game.challenger, true);
        return;
    }
    Response response = *posted == *own ? Response::Agree : Response::Disagree;
    game.transcript.push_back({game.pivot, *posted, response});
    if (response == Response::Agree) {
        game.lo = game.pivot;
        game.agreed_lo = *posted;
    } else {
        game.hi = game.pivot;
        game.claimant_hi = *posted;
    }
    if (game.hi == game.lo + 1) {
        game.phase = GamePhase::Judging;
    }
}

namespace {

// Opens the agreed snapshot: either party may supply a preimage.
std::optional<MachineState> open_agreed(const Digest& agreed, std::uint64_t step,
                                        Party& claimant, Party& challenger)
{
    for (Party* p : {&claimant, &challenger}) {
        if (auto s = p->state_at(step); s && s->digest() == agreed) {
            return s;
        }
    }
    return std::nullopt;
}

}  // namespace

GameOutcome judge(GameState& game, Party& claimant, Party& challenger, const Program& program)
{
    if (game.phase != GamePhase::Judging) {
        throw Error(ErrorCode::WrongPhase, "judge called before bisection converged");
    }
    bool claimant_wins = false;
    if (game.solution_dispute) {
        auto final_state = open_agreed(game.claimant_hi, game.hi, claimant, challenger);
        if (!final_state) {
            throw Error(ErrorCode::MissingCommitment, "no opening for the final snapshot");
        }
        claimant_wins = final_state->registers[0] == claimant.solution();
    } else {
        MachineState from;
        if (game.lo == 0) {
            from = initial_state(program);
        } else {
            auto opened = open_agreed(game.agreed_lo, game.lo, claimant, challenger);
            if (!opened) {
                throw Error(ErrorCode::MissingCommitment,
                            "no opening for agreed snapshot " + std::to_string(game.lo));
            }
            from = *opened;
        }
        claimant_wins = execute_step(from, program).digest() == game.claimant_hi;
    }
    if (claimant_wins) {
        finish(game, game.claimant, game.challenger, false);
    } else {
        finish(game, game.challenger, game.claimant, false);
    }
    return *game.outcome;
}

GameOutcome run_game_to_completion(Party& claimant, Party& challenger, const Program& program,
                                   std::uint64_t steps, const std::optional<GameAnchor>& anchor)
{
    auto game = open_game(claimant, challenger, program, steps, anchor);
    while (game.phase == GamePhase::Bisecting) {
        bisect_round(game, claimant, challenger);
    }
    if (game.phase == GamePhase::Judging) {
        judge(game, claimant, challenger, program);
    }
    return *game.outcome;
}

}  // namespace tbsim

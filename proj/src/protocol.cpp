#include <tbsim/errors.hpp>
#include <tbsim/hashing.hpp>
#include <tbsim/protocol.hpp>

#include <algorithm>

namespace tbsim {

std::string to_string(TaskPhase phase)
{
    switch (phase) {
    case TaskPhase::Posted: return "posted";
    case TaskPhase::Committed: return "committed";
    case TaskPhase::Challenge1: return "challenge1";
    case TaskPhase::RevealDelay: return "reveal_delay";
    case TaskPhase::Revealed: return "revealed";
    case TaskPhase::Resolving: return "resolving";
    case TaskPhase::Accepted: return "accepted";
    case TaskPhase::Restarted: return "restarted";
    case TaskPhase::Abandoned: return "abandoned";
    }
    return "?";
}

std::vector<AccountId> TaskInstance::active_solvers() const
{
    std::vector<AccountId> out;
    for (const auto& id : selected) {
        if (!slots.at(id).slashed) {
            out.push_back(id);
        }
    }
    return out;
}

namespace {

// The party a solver defends with: its registered trace and revealed solution.
Party defending_party(const SolverSlot& slot)
{
    auto y = slot.reveal->solution;
    return slot.party ? slot.party->with_solution(y) : Party::silent(slot.id, y);
}

}  // namespace

std::vector<AccountId> draw_solvers(std::span<const AccountId> available, std::size_t k, Rng& rng)
{
    if (available.size() < k) {
        throw Error(ErrorCode::InsufficientSolvers,
                    std::to_string(available.size()) + " available, " + std::to_string(k) + " needed");
    }
    return rng.sample(available, k);
}

Protocol::Protocol(ProtocolParams params, std::uint64_t seed)
    : params_(std::move(params)), rng_(seed), ledger_(&log_)
{
    if (params_.deposit <= 0) {
        throw Error(ErrorCode::ConfigInvalid, "deposit must be positive");
    }
}

Account& Protocol::add_account(const AccountId& id, Amount balance, bool bond)
{
    auto& acct = ledger_.open_account(id, balance);
    if (bond) {
        ledger_.bond(id, params_.deposit);
    }
    return acct;
}

const TaskInstance& Protocol::task(TaskId id) const
{
    auto it = tasks_.find(id);
    if (it == tasks_.end()) {
        throw Error(ErrorCode::UnknownTask, std::to_string(id));
    }
    return it->second;
}

TaskInstance& Protocol::task_mut(TaskId id)
{
    auto it = tasks_.find(id);
    if (it == tasks_.end()) {
        throw Error(ErrorCode::UnknownTask, std::to_string(id));
    }
    return it->second;
}

std::vector<TaskId> Protocol::task_ids() const
{
    std::vector<TaskId> ids;
    for (const auto& [id, t] : tasks_) {
        ids.push_back(id);
    }
    return ids;
}

void Protocol::set_phase(TaskInstance& t, TaskPhase phase)
{
    log_.append(clock_, "phase",
                {{"task", t.id}, {"from", to_string(t.phase)}, {"to", to_string(phase)}, {"attempt", t.attempt}});
    t.phase = phase;
}

TaskId Protocol::post_task(TaskSpec spec)
{
    if (spec.k < 2) {
        throw Error(ErrorCode::KTooSmall, "a task needs at least two solvers, got " + std::to_string(spec.k));
    }
    if (spec.reward < 0) {
        throw Error(ErrorCode::ConfigInvalid, "negative reward");
    }
    if (spec.steps == 0) {
        spec.steps = execute(spec.program, params_.max_steps).steps();
    }
    const Amount escrow = static_cast<Amount>(spec.k) * spec.reward;
    if (ledger_.account(spec.giver).balance < escrow) {
        throw Error(ErrorCode::InsufficientFunds,
                    spec.giver + " cannot escrow " + std::to_string(escrow));
    }
    TaskInstance t;
    t.id = next_task_++;
    t.spec = std::move(spec);
    t.posted_round = clock_;
    ledger_.escrow(t.spec.giver, escrow, t.id, "solver rewards");
    log_.append(clock_, "task_posted",
                {{"task", t.id}, {"giver", t.spec.giver}, {"k", t.spec.k}, {"reward", t.spec.reward},
                 {"steps", t.spec.steps}});
    auto id = t.id;
    tasks_.emplace(id, std::move(t));
    return id;
}

std::vector<AccountId> Protocol::available_solvers() const
{
    std::vector<AccountId> out;
    for (const auto& [id, acct] : ledger_.accounts()) {
        if (acct.status == AccountStatus::Available && acct.deposit >= params_.deposit) {
            out.push_back(id);
        }
    }
    return out;
}

void Protocol::draw_into(TaskInstance& t, std::size_t count)
{
    auto pool = available_solvers();
    auto drawn = draw_solvers(pool, count, rng_);
    for (const auto& id : drawn) {
        ledger_.account(id).status = AccountStatus::Solving;
        SolverSlot slot;
        slot.id = id;
        slot.commit_deadline = clock_ + params_.timeouts.commit;
        t.slots.emplace(id, std::move(slot));
        t.selected.push_back(id);
    }
    if (t.first_selection.empty()) {
        t.first_selection = drawn;
    }
    log_.append(clock_, "selected", {{"task", t.id}, {"solvers", drawn}, {"attempt", t.attempt}});
}

std::vector<AccountId> Protocol::select_solvers(TaskId id)
{
    auto& t = task_mut(id);
    if (t.phase != TaskPhase::Posted || !t.selected.empty()) {
        throw Error(ErrorCode::PhaseClosed, "solvers already selected for task " + std::to_string(id));
    }
    draw_into(t, t.spec.k);
    return t.selected;
}

void Protocol::slash_solver(TaskInstance& t, const AccountId& id, SlashCause cause,
                            const std::string& note)
{
    auto amount = ledger_.slash(id, cause, t.id, note);
    if (auto it = t.slots.find(id); it != t.slots.end()) {
        it->second.slashed = true;
    }
    if (auto it = t.challengers.find(id); it != t.challengers.end()) {
        it->second.slashed = true;
    }
    // a challenger can be solving elsewhere; without a deposit that seat is forfeit
    for (auto& [oid, other] : tasks_) {
        auto it = other.slots.find(id);
        if (oid == t.id || other.terminal() || it == other.slots.end() || it->second.slashed) {
            continue;
        }
        it->second.slashed = true;
        log_.append(clock_, "seat_forfeited", {{"task", oid}, {"solver", id}, {"slashed_in", t.id}});
        check_all_slashed(other);
    }
    switch (cause) {
    case SlashCause::LostGame:
        t.game_slash_pool += amount;
        t.slashed_in_games += 1;
        break;
    case SlashCause::InvalidProof:
    case SlashCause::Timeout:
        ledger_.burn(amount, t.id, to_string(cause));
        break;
    case SlashCause::GuessedRandomness:
        break;  // settled by the caller
    }
}

SubmitResult Protocol::submit_commitment(TaskId id, const AccountId& solver, const Digest& sealed,
                                         const Digest& root, const MerkleProof& proof)
{
    auto& t = task_mut(id);
    auto it = t.slots.find(solver);
    if (it == t.slots.end() || it->second.slashed) {
        throw Error(ErrorCode::NotSelected, solver + " is not an active solver of task " + std::to_string(id));
    }
    if (t.phase != TaskPhase::Posted) {
        throw Error(ErrorCode::PhaseClosed, "commitments are closed for task " + std::to_string(id));
    }
    auto& slot = it->second;
    if (slot.commitment) {
        throw Error(ErrorCode::DuplicateSubmission, solver + " already committed");
    }
    if (clock_ > slot.commit_deadline) {
        throw Error(ErrorCode::DeadlinePassed, solver + " missed the commitment deadline");
    }
    if (!verify(root, proof, t.spec.steps)) {
        log_.append(clock_, "commit_rejected",
                    {{"task", t.id}, {"solver", solver}, {"leaf_index", proof.leaf_index},
                     {"expected_index", challenge_index(root, t.spec.steps)}});
        slash_solver(t, solver, SlashCause::InvalidProof, "merkle proof rejected");
        after_commit_change(t);
        return SubmitResult::Slashed;
    }
    slot.commitment = Commitment{solver, sealed, root, PersonalizedLeaf{proof.leaf_index, proof.leaf}};
    log_.append(clock_, "commit",
                {{"task", t.id}, {"solver", solver}, {"sealed", sealed.hex()}, {"root", root.hex()},
                 {"leaf_index", proof.leaf_index}, {"leaf", proof.leaf.hex()}});
    after_commit_change(t);
    return SubmitResult::Accepted;
}

void Protocol::after_commit_change(TaskInstance& t)
{
    if (check_all_slashed(t) || t.phase != TaskPhase::Posted) {
        return;
    }
    for (const auto& id : t.active_solvers()) {
        if (!t.slots.at(id).commitment) {
            return;
        }
    }
    set_phase(t, TaskPhase::Committed);
    set_phase(t, TaskPhase::Challenge1);
    t.phase_deadline = clock_ + params_.timeouts.challenge1;
}

GuessResult Protocol::guess_randomness(TaskId id, const AccountId& guesser, const AccountId& victim,
                                       ByteView solver_address, ByteView randomness,
                                       const std::optional<Digest>& snapshot)
{
    auto& t = task_mut(id);
    if (t.phase != TaskPhase::Posted && t.phase != TaskPhase::Challenge1) {
        throw Error(ErrorCode::PhaseClosed, "randomness guesses are closed for task " + std::to_string(id));
    }
    auto it = t.slots.find(victim);
    if (it == t.slots.end() || it->second.slashed || !it->second.commitment) {
        throw Error(ErrorCode::NotSelected, victim + " has no live commitment in task " + std::to_string(id));
    }
    ledger_.account(guesser);
    auto key = personalization_key(solver_address, randomness);
    PendingGuess g{guesser, victim, key, params_.stake_for_guess()};
    ledger_.stake(guesser, g.stake, t.id, "randomness guess");
    log_.append(clock_, "guess", {{"task", t.id}, {"guesser", guesser}, {"victim", victim},
                                  {"key", key.hex()}, {"immediate", snapshot.has_value()}});
    if (!snapshot) {
        t.pending_guesses.push_back(std::move(g));
        return GuessResult::Pending;
    }
    bool correct = personalize_with_key(*snapshot, key) == it->second.commitment->committed_leaf.value;
    settle_guess(t, g, correct);
    check_all_slashed(t);
    return correct ? GuessResult::Correct : GuessResult::Incorrect;
}

void Protocol::settle_guess(TaskInstance& t, const PendingGuess& g, bool correct)
{
    auto& slot = t.slots.at(g.victim);
    if (correct && slot.slashed) {
        // someone else already exposed this solver
        ledger_.unstake(g.guesser, g.stake, t.id, "victim already slashed");
        return;
    }
    log_.append(clock_, "guess_settled",
                {{"task", t.id}, {"guesser", g.guesser}, {"victim", g.victim}, {"correct", correct}});
    if (!correct) {
        ledger_.burn(g.stake, t.id, "forfeited guess stake");
        return;
    }
    ledger_.unstake(g.guesser, g.stake, t.id, "guess confirmed");
    auto amount = ledger_.slash(g.victim, SlashCause::GuessedRandomness, t.id, "private randomness exposed");
    slot.slashed = true;
    Amount half = amount / 2;
    ledger_.pay(g.guesser, half, LedgerKind::GuessReward, t.id, "half of exposed deposit");
    ledger_.burn(amount - half, t.id, "remainder of exposed deposit");
}

void Protocol::settle_pending_guesses(TaskInstance& t, const AccountId& victim)
{
    const auto& slot = t.slots.at(victim);
    std::vector<PendingGuess> keep;
    for (const auto& g : t.pending_guesses) {
        if (g.victim != victim) {
            keep.push_back(g);
            continue;
        }
        if (slot.reveal) {
            auto actual = personalization_key(to_bytes(victim), slot.reveal->randomness);
            settle_guess(t, g, g.key == actual);
        } else {
            ledger_.unstake(g.guesser, g.stake, t.id, "guess could not be checked");
        }
    }
    t.pending_guesses = std::move(keep);
}

SubmitResult Protocol::reveal(TaskId id, const AccountId& solver, ByteView randomness,
                              std::uint64_t solution)
{
    auto& t = task_mut(id);
    auto it = t.slots.find(solver);
    if (it == t.slots.end() || it->second.slashed) {
        throw Error(ErrorCode::NotSelected, solver + " is not an active solver of task " + std::to_string(id));
    }
    auto& slot = it->second;
    if (t.phase != TaskPhase::Revealed) {
        bool early = t.phase == TaskPhase::Posted || t.phase == TaskPhase::Committed ||
                     t.phase == TaskPhase::Challenge1 || t.phase == TaskPhase::RevealDelay;
        throw Error(early ? ErrorCode::PhaseClosed : ErrorCode::DeadlinePassed,
                    "reveal window is not open for task " + std::to_string(id));
    }
    if (slot.reveal) {
        throw Error(ErrorCode::DuplicateSubmission, solver + " already revealed");
    }
    auto addr = to_bytes(solver);
    if (randomness.empty() || seal(addr, randomness, solution) != slot.commitment->sealed) {
        log_.append(clock_, "reveal_rejected", {{"task", t.id}, {"solver", solver}, {"solution", solution}});
        slash_solver(t, solver, SlashCause::Timeout, "reveal does not open the sealed commitment");
        settle_pending_guesses(t, solver);
        after_reveal_change(t);
        return SubmitResult::Slashed;
    }
    slot.reveal = Reveal{Bytes(randomness.begin(), randomness.end()), solution};
    log_.append(clock_, "reveal", {{"task", t.id}, {"solver", solver}, {"solution", solution},
                                   {"randomness", to_hex(randomness)}});
    settle_pending_guesses(t, solver);
    after_reveal_change(t);
    return SubmitResult::Accepted;
}

void Protocol::after_reveal_change(TaskInstance& t)
{
    if (check_all_slashed(t) || t.phase != TaskPhase::Revealed) {
        return;
    }
    for (const auto& id : t.active_solvers()) {
        if (!t.slots.at(id).reveal) {
            return;
        }
    }
    set_phase(t, TaskPhase::Resolving);
    t.last_activity = clock_;
}

void Protocol::register_party(TaskId id, const AccountId& solver, Party party)
{
    auto& t = task_mut(id);
    auto it = t.slots.find(solver);
    if (it == t.slots.end()) {
        throw Error(ErrorCode::NotSelected, solver + " is not a solver of task " + std::to_string(id));
    }
    it->second.party = std::move(party);
}

std::map<std::uint64_t, std::vector<AccountId>> Protocol::solution_groups(TaskId id) const
{
    const auto& t = task(id);
    std::map<std::uint64_t, std::vector<AccountId>> groups;
    for (const auto& sid : t.active_solvers()) {
        const auto& slot = t.slots.at(sid);
        if (slot.reveal) {
            groups[slot.reveal->solution].push_back(sid);
        }
    }
    return groups;
}

GameOutcome Protocol::play(TaskInstance& t, Party claimant, Party challenger,
                           const std::optional<GameAnchor>& anchor, const std::string& kind)
{
    GameOutcome outcome;
    std::string note;
    try {
        outcome = run_game_to_completion(claimant, challenger, t.spec.program, t.spec.steps, anchor);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoDisagreement) {
            // an unsuccessful challenge always costs the challenger
            outcome = GameOutcome{claimant.id(), challenger.id(), 0, 0, false, false};
            note = "no disagreement";
        } else if (e.code() == ErrorCode::MissingCommitment) {
            outcome = GameOutcome{challenger.id(), claimant.id(), 0, 0, false, false};
            note = "claimant could not open its commitment";
        } else {
            throw;
        }
    }
    t.games_played += 1;
    t.last_activity = clock_;
    log_.append(clock_, "game",
                {{"task", t.id}, {"kind", kind}, {"claimant", claimant.id()}, {"challenger", challenger.id()},
                 {"winner", outcome.winner}, {"loser", outcome.loser}, {"faulty_step", outcome.faulty_step},
                 {"rounds", outcome.rounds}, {"timeout", outcome.by_timeout},
                 {"solution_dispute", outcome.solution_dispute}, {"note", note}});
    slash_solver(t, outcome.loser, SlashCause::LostGame, kind);
    return outcome;
}

ResolveStatus Protocol::resolve_round(TaskId id)
{
    auto& t = task_mut(id);
    if (t.phase != TaskPhase::Resolving) {
        throw Error(ErrorCode::WrongPhase, "task " + std::to_string(id) + " is not resolving");
    }
    auto groups = solution_groups(id);
    if (groups.size() <= 1) {
        return groups.empty() ? ResolveStatus::AllSlashed : ResolveStatus::SingleSolution;
    }
    std::vector<const std::vector<AccountId>*> alive;
    for (const auto& [y, members] : groups) {
        alive.push_back(&members);
    }
    auto a = rng_.below(alive.size());
    auto b = rng_.below(alive.size() - 1);
    if (b >= a) {
        b += 1;
    }
    const auto& ga = *alive[a];
    const auto& gb = *alive[b];
    const auto& ca = ga[rng_.below(ga.size())];
    const auto& cb = gb[rng_.below(gb.size())];

    play(t, defending_party(t.slots.at(ca)), defending_party(t.slots.at(cb)), std::nullopt, "tournament");
    if (check_all_slashed(t)) {
        return ResolveStatus::AllSlashed;
    }
    auto left = solution_groups(id).size();
    if (left == 0) {
        return ResolveStatus::AllSlashed;
    }
    return left == 1 ? ResolveStatus::SingleSolution : ResolveStatus::Undecided;
}

ResolveStatus Protocol::resolve(TaskId id)
{
    for (;;) {
        if (task(id).phase != TaskPhase::Resolving) {
            return task(id).phase == TaskPhase::Accepted ? ResolveStatus::SingleSolution
                                                         : ResolveStatus::AllSlashed;
        }
        auto status = resolve_round(id);
        if (status != ResolveStatus::Undecided) {
            return status;
        }
    }
}

GameOutcome Protocol::accept_outside_challenge(TaskId id, const AccountId& challenger,
                                               const AccountId& target_solver, ChallengeTarget target,
                                               Party challenger_party)
{
    auto& t = task_mut(id);
    if (t.phase != TaskPhase::Resolving) {
        throw Error(ErrorCode::PhaseClosed, "outside challenges are closed for task " + std::to_string(id));
    }
    if (t.is_selected(challenger)) {
        throw Error(ErrorCode::NotEligible, challenger + " is a selected solver of this task");
    }
    // solving another task does not stop an account from challenging this one
    auto& acct = ledger_.account(challenger);
    const auto prior = acct.status;
    bool free = prior == AccountStatus::Available || prior == AccountStatus::Solving;
    if (!free || acct.deposit < params_.deposit) {
        throw Error(ErrorCode::InsufficientStake, challenger + " has no free deposit to stake");
    }
    auto it = t.slots.find(target_solver);
    if (it == t.slots.end() || it->second.slashed || !it->second.reveal) {
        throw Error(ErrorCode::NotSelected, target_solver + " has no live revealed solution");
    }
    const auto& slot = it->second;
    Party claimant = defending_party(slot);
    Party opponent = challenger_party.with_solution(challenger_party.solution());

    std::optional<GameAnchor> anchor;
    if (target == ChallengeTarget::CommittedLeaf) {
        auto key = personalization_key(to_bytes(target_solver), slot.reveal->randomness);
        auto leaf = slot.commitment->committed_leaf;
        anchor = GameAnchor{leaf.index, [key, leaf](const Digest& d) {
                                return personalize_with_key(d, key) == leaf.value;
                            }};
    }

    t.challengers[challenger].games += 1;
    acct.status = AccountStatus::Challenging;
    log_.append(clock_, "outside_challenge",
                {{"task", t.id}, {"challenger", challenger}, {"target", target_solver},
                 {"kind", target == ChallengeTarget::CommittedLeaf ? "leaf" : "solution"}});
    auto outcome = play(t, std::move(claimant), std::move(opponent), anchor,
                        target == ChallengeTarget::CommittedLeaf ? "leaf_challenge" : "solution_challenge");
    if (ledger_.account(challenger).status == AccountStatus::Challenging) {
        ledger_.account(challenger).status = prior;
    }
    check_all_slashed(t);
    return outcome;
}

bool Protocol::check_all_slashed(TaskInstance& t)
{
    if (t.terminal() || t.slots.empty() || !t.active_solvers().empty()) {
        return false;
    }
    restart(t);
    return true;
}

std::vector<LedgerEvent> Protocol::distribute_rewards(TaskId id)
{
    auto& t = task_mut(id);
    if (t.phase != TaskPhase::Accepted && t.phase != TaskPhase::Restarted && t.phase != TaskPhase::Abandoned) {
        throw Error(ErrorCode::WrongPhase, "rewards are paid only once a task attempt has ended");
    }
    const auto before = ledger_.events().size();
    const Amount x = t.spec.reward;

    Amount paid = 0;
    if (t.phase == TaskPhase::Accepted) {
        for (const auto& sid : t.selected) {
            const auto& slot = t.slots.at(sid);
            if (!slot.slashed) {
                ledger_.pay(sid, x, LedgerKind::Reward, t.id, "solver reward");
                paid += x;
            }
        }
    }
    ledger_.refund(t.spec.giver, static_cast<Amount>(t.spec.k) * x - paid, t.id, "unpaid solver rewards");

    std::uint64_t eligible = 0;
    for (const auto& [cid, rec] : t.challengers) {
        if (!rec.slashed) {
            ++eligible;
        }
    }
    Amount per_challenger = 0;
    if (eligible > 0 && eligible < 63) {
        // k_slashed * D / 2^n, rounded down
        per_challenger = (static_cast<Amount>(t.slashed_in_games) * params_.deposit) >> eligible;
    }
    Amount challenger_total = 0;
    for (const auto& [cid, rec] : t.challengers) {
        if (!rec.slashed && per_challenger > 0) {
            ledger_.pay(cid, per_challenger, LedgerKind::Reward, t.id, "outside challenger reward");
            challenger_total += per_challenger;
        }
    }
    ledger_.burn(t.game_slash_pool - challenger_total, t.id, "unclaimed slashed deposits");
    t.game_slash_pool = 0;
    t.slashed_in_games = 0;
    t.challengers.clear();

    for (const auto& g : t.pending_guesses) {
        ledger_.unstake(g.guesser, g.stake, t.id, "guess could not be checked");
    }
    t.pending_guesses.clear();

    return {ledger_.events().begin() + static_cast<std::ptrdiff_t>(before), ledger_.events().end()};
}

void Protocol::release_solvers(TaskInstance& t)
{
    for (const auto& [sid, slot] : t.slots) {
        auto& acct = ledger_.account(sid);
        if (!slot.slashed && acct.status == AccountStatus::Solving) {
            acct.status = AccountStatus::Available;
        }
    }
}

void Protocol::accept(TaskInstance& t, std::uint64_t solution)
{
    t.accepted_solution = solution;
    set_phase(t, TaskPhase::Accepted);
    distribute_rewards(t.id);
    release_solvers(t);
}

void Protocol::restart(TaskInstance& t)
{
    set_phase(t, TaskPhase::Restarted);
    distribute_rewards(t.id);
    release_solvers(t);
    t.restarts += 1;

    const Amount escrow = static_cast<Amount>(t.spec.k) * t.spec.reward;
    bool exhausted = t.restarts > params_.max_restarts;
    bool too_few = available_solvers().size() < t.spec.k;
    if (exhausted || too_few || ledger_.account(t.spec.giver).balance < escrow) {
        set_phase(t, TaskPhase::Abandoned);
        log_.append(clock_, "abandoned", {{"task", t.id}, {"restarts", t.restarts},
                                          {"reason", exhausted ? "restart limit" : "not enough solvers"}});
        return;
    }
    ledger_.escrow(t.spec.giver, escrow, t.id, "solver rewards (restart)");
    t.attempt += 1;
    t.slots.clear();
    t.selected.clear();
    t.phase_deadline = 0;
    set_phase(t, TaskPhase::Posted);
    draw_into(t, t.spec.k);
}

void Protocol::process_deadlines(TaskInstance& t)
{
    switch (t.phase) {
    case TaskPhase::Posted: {
        std::vector<AccountId> late;
        for (const auto& sid : t.active_solvers()) {
            const auto& slot = t.slots.at(sid);
            if (!slot.commitment && clock_ > slot.commit_deadline) {
                late.push_back(sid);
            }
        }
        if (late.empty()) {
            break;
        }
        for (const auto& sid : late) {
            slash_solver(t, sid, SlashCause::Timeout, "no commitment before deadline");
        }
        auto replacements = std::min(late.size(), available_solvers().size());
        if (replacements > 0) {
            draw_into(t, replacements);
        }
        after_commit_change(t);
        break;
    }
    case TaskPhase::Committed:
        break;
    case TaskPhase::Challenge1:
        if (clock_ >= t.phase_deadline) {
            set_phase(t, TaskPhase::RevealDelay);
            t.phase_deadline = clock_ + params_.timeouts.reveal_delay;
        }
        if (t.phase != TaskPhase::RevealDelay) {
            break;
        }
        [[fallthrough]];
    case TaskPhase::RevealDelay:
        if (clock_ >= t.phase_deadline) {
            set_phase(t, TaskPhase::Revealed);
            t.phase_deadline = clock_ + params_.timeouts.reveal;
        }
        break;
    case TaskPhase::Revealed:
        if (clock_ > t.phase_deadline) {
            for (const auto& sid : t.active_solvers()) {
                if (!t.slots.at(sid).reveal) {
                    slash_solver(t, sid, SlashCause::Timeout, "no reveal before deadline");
                    settle_pending_guesses(t, sid);
                }
            }
            if (check_all_slashed(t)) {
                break;
            }
            set_phase(t, TaskPhase::Resolving);
            t.last_activity = clock_;
        }
        break;
    case TaskPhase::Resolving: {
        auto groups = solution_groups(t.id);
        if (groups.size() > 1) {
            resolve_round(t.id);
        } else if (groups.empty()) {
            check_all_slashed(t);
        } else if (clock_ - t.last_activity >= params_.timeouts.inactivity) {
            accept(t, groups.begin()->first);
        }
        break;
    }
    case TaskPhase::Accepted:
    case TaskPhase::Restarted:
    case TaskPhase::Abandoned:
        break;
    }
}

void Protocol::tick()
{
    clock_ += 1;
    ledger_.set_round(clock_);
    for (auto id : task_ids()) {
        auto& t = task_mut(id);
        if (!t.terminal()) {
            process_deadlines(t);
        }
    }
}

}  // namespace tbsim

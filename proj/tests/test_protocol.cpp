#include "support.hpp"

#include <tbsim/errors.hpp>
#include <tbsim/protocol.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using namespace tbsim;
using tbsim::testing::sample_program;

namespace {

constexpr Amount D = 100;
constexpr Amount X = 10;

struct Work {
    Bytes p;
    std::shared_ptr<const Trace> trace;
    std::shared_ptr<const SnapshotTree> tree;
    std::uint64_t y = 0;
};

class Harness {
public:
    explicit Harness(std::vector<std::string> solvers, std::uint64_t seed = 1, ProtocolParams params = {})
        : engine(with_deposit(params), seed), honest(std::make_shared<const Trace>(execute(sample_program())))
    {
        engine.add_account("giver", 10'000, false);
        for (const auto& s : solvers) {
            engine.add_account(s, 1000 + D, true);  // 1000 free once bonded
        }
    }

    static ProtocolParams with_deposit(ProtocolParams p)
    {
        p.deposit = D;
        return p;
    }

    TaskId post(std::uint32_t k = 2)
    {
        return engine.post_task(TaskSpec{"giver", sample_program(), 0, k, X});
    }

    Work work_for(const AccountId& id, std::shared_ptr<const Trace> trace, std::uint64_t y)
    {
        Work w;
        w.p = to_bytes("secret-" + id + std::to_string(counter++));
        auto key = personalization_key(to_bytes(id), w.p);
        std::vector<Digest> leaves;
        for (std::uint64_t i = 1; i <= trace->steps(); ++i) {
            leaves.push_back(personalize_with_key(trace->snapshot(i), key));
        }
        w.tree = std::make_shared<const SnapshotTree>(leaves);
        w.trace = std::move(trace);
        w.y = y;
        return w;
    }

    SubmitResult commit(TaskId t, const AccountId& id, const Work& w, std::optional<std::uint64_t> index = {})
    {
        auto n = engine.task(t).spec.steps;
        auto c = index.value_or(challenge_index(w.tree->root(), n));
        engine.register_party(t, id, Party(id, w.trace, w.y));
        return engine.submit_commitment(t, id, seal(to_bytes(id), w.p, w.y), w.tree->root(), w.tree->prove(c));
    }

    void tick(std::uint64_t rounds = 1)
    {
        for (std::uint64_t i = 0; i < rounds; ++i) {
            engine.tick();
            engine.ledger().check_conservation();
        }
    }

    void until(TaskId t, TaskPhase phase, std::uint64_t limit = 200)
    {
        for (std::uint64_t i = 0; i < limit && engine.task(t).phase != phase; ++i) {
            tick();
        }
        ASSERT_EQ(engine.task(t).phase, phase);
    }

    Amount slashed(const AccountId& id, SlashCause cause) const
    {
        Amount total = 0;
        for (const auto& ev : engine.ledger().events()) {
            if (ev.kind == LedgerKind::Slash && ev.account == id && ev.cause == cause) {
                total += ev.amount;
            }
        }
        return total;
    }

    Protocol engine;
    std::shared_ptr<const Trace> honest;
    int counter = 0;
};

template <typename F>
ErrorCode code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvariantViolation;
}

}  // namespace

TEST(Protocol, PostTaskChecks)
{
    Harness h({"a", "b"});
    EXPECT_EQ(code_of([&] { h.post(1); }), ErrorCode::KTooSmall);
    h.engine.add_account("poor", 5, false);
    EXPECT_EQ(code_of([&] { h.engine.post_task(TaskSpec{"poor", sample_program(), 0, 2, X}); }),
              ErrorCode::InsufficientFunds);
    auto t = h.post();
    EXPECT_EQ(h.engine.task(t).spec.steps, 22u);
    EXPECT_EQ(h.engine.ledger().escrow_total(), 2 * X);
    EXPECT_EQ(h.engine.ledger().account("giver").balance, 10'000 - 2 * X);
}

TEST(Protocol, SelectionIsDistinctAndMarksSolving)
{
    Harness h({"a", "b", "c", "d", "e"});
    auto t = h.post(3);
    auto sel = h.engine.select_solvers(t);
    ASSERT_EQ(sel.size(), 3u);
    std::sort(sel.begin(), sel.end());
    EXPECT_EQ(std::unique(sel.begin(), sel.end()), sel.end());
    for (const auto& s : sel) {
        EXPECT_EQ(h.engine.ledger().account(s).status, AccountStatus::Solving);
    }
    EXPECT_EQ(h.engine.available_solvers().size(), 2u);
    EXPECT_EQ(code_of([&] { h.engine.select_solvers(t); }), ErrorCode::PhaseClosed);
    auto t2 = h.post(3);
    EXPECT_EQ(code_of([&] { h.engine.select_solvers(t2); }), ErrorCode::InsufficientSolvers);
}

TEST(Protocol, HonestRunIsAcceptedAndPaid)
{
    Harness h({"a", "b"});
    auto t = h.post();
    h.engine.select_solvers(t);
    std::map<AccountId, Work> w;
    for (const auto& s : {"a", "b"}) {
        w[s] = h.work_for(s, h.honest, h.honest->solution);
        EXPECT_EQ(h.commit(t, s, w[s]), SubmitResult::Accepted);
    }
    EXPECT_EQ(h.engine.task(t).phase, TaskPhase::Challenge1);
    EXPECT_EQ(code_of([&] { h.engine.reveal(t, "a", w["a"].p, w["a"].y); }), ErrorCode::PhaseClosed);
    h.until(t, TaskPhase::Revealed);
    for (const auto& s : {"a", "b"}) {
        EXPECT_EQ(h.engine.reveal(t, s, w[s].p, w[s].y), SubmitResult::Accepted);
    }
    EXPECT_EQ(h.engine.task(t).phase, TaskPhase::Resolving);
    h.until(t, TaskPhase::Accepted);
    EXPECT_EQ(h.engine.task(t).accepted_solution, h.honest->solution);
    EXPECT_EQ(h.engine.ledger().account("a").balance, 1000 + X);
    EXPECT_EQ(h.engine.ledger().account("b").balance, 1000 + X);
    EXPECT_EQ(h.engine.ledger().escrow_total(), 0);
    EXPECT_EQ(h.engine.ledger().account("a").status, AccountStatus::Available);
}

TEST(Protocol, WrongChallengeIndexIsInvalidProof)
{
    const auto n = execute(sample_program()).steps();
    for (std::uint64_t offset = 1; offset < n; ++offset) {
        Harness h({"a", "b"});
        auto t = h.post();
        h.engine.select_solvers(t);
        auto w = h.work_for("a", h.honest, h.honest->solution);
        auto c = challenge_index(w.tree->root(), n);
        auto wrong = 1 + (c - 1 + offset) % n;
        ASSERT_NE(wrong, c);
        EXPECT_EQ(h.commit(t, "a", w, wrong), SubmitResult::Slashed);
        EXPECT_EQ(h.slashed("a", SlashCause::InvalidProof), D);
        EXPECT_EQ(h.engine.ledger().burned(), D);
        h.engine.ledger().check_conservation();
    }
}

TEST(Protocol, CommitRules)
{
    Harness h({"a", "b", "c"});
    auto t = h.post();
    auto sel = h.engine.select_solvers(t);
    AccountId outsider;
    for (const auto& id : {"a", "b", "c"}) {
        if (std::find(sel.begin(), sel.end(), id) == sel.end()) {
            outsider = id;
        }
    }
    auto w = h.work_for(sel[0], h.honest, h.honest->solution);
    h.commit(t, sel[0], w);
    EXPECT_EQ(code_of([&] { h.commit(t, sel[0], w); }), ErrorCode::DuplicateSubmission);
    auto wo = h.work_for(outsider, h.honest, h.honest->solution);
    EXPECT_EQ(code_of([&] {
                  h.engine.submit_commitment(t, outsider, seal(to_bytes(outsider), wo.p, wo.y), wo.tree->root(),
                                             wo.tree->prove(1));
              }),
              ErrorCode::NotSelected);
}

TEST(Protocol, CommitTimeoutSlashesAndDrawsReplacement)
{
    Harness h({"a", "b", "c"});
    auto t = h.post();
    auto sel = h.engine.select_solvers(t);
    auto w = h.work_for(sel[0], h.honest, h.honest->solution);
    h.commit(t, sel[0], w);
    h.tick(h.engine.params().timeouts.commit + 1);
    EXPECT_EQ(h.slashed(sel[1], SlashCause::Timeout), D);
    const auto& task = h.engine.task(t);
    EXPECT_EQ(task.selected.size(), 3u);
    EXPECT_EQ(task.active_solvers().size(), 2u);
    EXPECT_EQ(task.phase, TaskPhase::Posted);
}

TEST(Protocol, ImmediateGuessSlashesVictim)
{
    Harness h({"a", "b", "g"});
    auto t = h.post();
    auto sel = h.engine.select_solvers(t);
    auto victim = sel[0];
    AccountId guesser = sel[1];
    auto w = h.work_for(victim, h.honest, h.honest->solution);
    h.commit(t, victim, w);
    const auto before = h.engine.ledger().account(guesser).balance;
    auto idx = h.engine.task(t).slots.at(victim).commitment->committed_leaf.index;
    auto r = h.engine.guess_randomness(t, guesser, victim, to_bytes(victim), w.p, h.honest->snapshot(idx));
    EXPECT_EQ(r, GuessResult::Correct);
    EXPECT_EQ(h.slashed(victim, SlashCause::GuessedRandomness), D);
    EXPECT_EQ(h.engine.ledger().account(guesser).balance, before + D / 2);
    EXPECT_EQ(h.engine.ledger().burned(), D - D / 2);
    h.engine.ledger().check_conservation();
}

TEST(Protocol, WrongGuessForfeitsStake)
{
    Harness h({"a", "b", "g"});
    auto t = h.post();
    auto sel = h.engine.select_solvers(t);
    auto w = h.work_for(sel[0], h.honest, h.honest->solution);
    h.commit(t, sel[0], w);
    auto idx = h.engine.task(t).slots.at(sel[0]).commitment->committed_leaf.index;
    auto r = h.engine.guess_randomness(t, sel[1], sel[0], to_bytes(sel[0]), to_bytes("nope"), h.honest->snapshot(idx));
    EXPECT_EQ(r, GuessResult::Incorrect);
    EXPECT_EQ(h.engine.ledger().account(sel[1]).balance, 1000 - D);
    EXPECT_EQ(h.engine.ledger().burned(), D);
    EXPECT_FALSE(h.engine.task(t).slots.at(sel[0]).slashed);
}

TEST(Protocol, DeferredGuessSettledAtReveal)
{
    Harness h({"a", "b", "g"});
    auto t = h.post();
    auto sel = h.engine.select_solvers(t);
    std::map<AccountId, Work> w;
    for (const auto& s : sel) {
        w[s] = h.work_for(s, h.honest, h.honest->solution);
        h.commit(t, s, w[s]);
    }
    AccountId outsider = "g";
    for (const auto& id : {"a", "b", "g"}) {
        if (std::find(sel.begin(), sel.end(), id) == sel.end()) {
            outsider = id;
        }
    }
    EXPECT_EQ(h.engine.guess_randomness(t, outsider, sel[0], to_bytes(sel[0]), w[sel[0]].p), GuessResult::Pending);
    h.until(t, TaskPhase::Revealed);
    h.engine.reveal(t, sel[0], w[sel[0]].p, w[sel[0]].y);
    EXPECT_EQ(h.slashed(sel[0], SlashCause::GuessedRandomness), D);
    EXPECT_EQ(h.engine.ledger().account(outsider).balance, 1000 + D / 2);
}

TEST(Protocol, BadRevealAndMissedRevealAreTimeouts)
{
    Harness h({"a", "b", "c"});
    auto t = h.post(3);
    auto sel = h.engine.select_solvers(t);
    std::map<AccountId, Work> w;
    for (const auto& s : sel) {
        w[s] = h.work_for(s, h.honest, h.honest->solution);
        h.commit(t, s, w[s]);
    }
    h.until(t, TaskPhase::Revealed);
    EXPECT_EQ(h.engine.reveal(t, sel[0], w[sel[0]].p, w[sel[0]].y + 1), SubmitResult::Slashed);
    EXPECT_EQ(h.slashed(sel[0], SlashCause::Timeout), D);
    h.engine.reveal(t, sel[1], w[sel[1]].p, w[sel[1]].y);
    h.until(t, TaskPhase::Resolving);
    EXPECT_EQ(h.slashed(sel[2], SlashCause::Timeout), D);
    h.until(t, TaskPhase::Accepted);
    EXPECT_EQ(h.engine.ledger().account(sel[1]).balance, 1000 + X);
    EXPECT_EQ(h.engine.ledger().account("giver").balance, 10'000 - X);
}

TEST(Protocol, TournamentSlashesWrongGroup)
{
    Harness h({"a", "b", "c"});
    auto t = h.post(3);
    auto sel = h.engine.select_solvers(t);
    auto faulty = std::make_shared<const Trace>(execute_faulty(sample_program(), FaultSpec{7, 3}));
    std::map<AccountId, Work> w;
    for (std::size_t i = 0; i < sel.size(); ++i) {
        auto tr = i == 0 ? faulty : h.honest;
        w[sel[i]] = h.work_for(sel[i], tr, tr->solution);
        h.commit(t, sel[i], w[sel[i]]);
    }
    h.until(t, TaskPhase::Revealed);
    for (const auto& s : sel) {
        h.engine.reveal(t, s, w[s].p, w[s].y);
    }
    EXPECT_EQ(h.engine.solution_groups(t).size(), 2u);
    EXPECT_EQ(h.engine.resolve(t), ResolveStatus::SingleSolution);
    EXPECT_EQ(h.slashed(sel[0], SlashCause::LostGame), D);
    h.until(t, TaskPhase::Accepted);
    EXPECT_EQ(h.engine.task(t).accepted_solution, h.honest->solution);
    // no outside challengers: the whole slashed deposit is burned
    EXPECT_EQ(h.engine.ledger().burned(), D);
}

TEST(Protocol, OutsideChallengerRewardArithmetic)
{
    // find a seed whose draw leaves the watchdog outside the selection
    std::uint64_t seed = 1;
    for (;; ++seed) {
        Harness probe({"c1", "c2", "w"}, seed);
        auto s = probe.engine.select_solvers(probe.post());
        if (std::find(s.begin(), s.end(), "w") == s.end()) {
            break;
        }
    }
    Harness h({"c1", "c2", "w"}, seed);
    auto t = h.post();
    auto sel = h.engine.select_solvers(t);
    auto faulty = std::make_shared<const Trace>(execute_faulty(sample_program(), FaultSpec{11, 1}));
    std::map<AccountId, Work> w;
    for (const auto& s : sel) {
        w[s] = h.work_for(s, faulty, faulty->solution);
        h.commit(t, s, w[s]);
    }
    h.until(t, TaskPhase::Revealed);
    for (const auto& s : sel) {
        h.engine.reveal(t, s, w[s].p, w[s].y);
    }
    ASSERT_EQ(h.engine.task(t).phase, TaskPhase::Resolving);
    EXPECT_EQ(code_of([&] {
                  h.engine.accept_outside_challenge(t, sel[0], sel[1], ChallengeTarget::Solution,
                                                    Party(sel[0], h.honest, h.honest->solution));
              }),
              ErrorCode::NotEligible);
    const auto before = h.engine.ledger().account("w").balance;
    for (const auto& s : sel) {
        auto out = h.engine.accept_outside_challenge(t, "w", s, ChallengeTarget::Solution,
                                                     Party("w", h.honest, h.honest->solution));
        EXPECT_EQ(out.winner, "w");
    }
    // both slashed: the attempt restarts and rewards are distributed
    EXPECT_EQ(h.engine.task(t).restarts, 1u);
    EXPECT_EQ(h.engine.ledger().account("w").balance, before + (2 * D) / 2);
    EXPECT_EQ(h.engine.ledger().burned(), 2 * D - D);
    h.engine.ledger().check_conservation();
}

TEST(Protocol, LosingOutsideChallengerIsSlashed)
{
    Harness h({"a", "b", "w"});
    auto t = h.post();
    auto sel = h.engine.select_solvers(t);
    AccountId outsider;
    for (const auto& id : {"a", "b", "w"}) {
        if (std::find(sel.begin(), sel.end(), id) == sel.end()) {
            outsider = id;
        }
    }
    std::map<AccountId, Work> w;
    for (const auto& s : sel) {
        w[s] = h.work_for(s, h.honest, h.honest->solution);
        h.commit(t, s, w[s]);
    }
    h.until(t, TaskPhase::Revealed);
    for (const auto& s : sel) {
        h.engine.reveal(t, s, w[s].p, w[s].y);
    }
    auto bogus = std::make_shared<const Trace>(execute_faulty(sample_program(), FaultSpec{22, 1}));
    auto out = h.engine.accept_outside_challenge(t, outsider, sel[0], ChallengeTarget::Solution,
                                                 Party(outsider, bogus, bogus->solution));
    EXPECT_EQ(out.loser, outsider);
    EXPECT_EQ(h.slashed(outsider, SlashCause::LostGame), D);
    // agreeing with the target is a lost challenge too
    h.engine.add_account("z", 1000, true);
    h.engine.accept_outside_challenge(t, "z", sel[0], ChallengeTarget::Solution, Party("z", h.honest, h.honest->solution));
    EXPECT_EQ(h.slashed("z", SlashCause::LostGame), D);
    h.until(t, TaskPhase::Accepted);
    EXPECT_EQ(h.engine.task(t).accepted_solution, h.honest->solution);
    EXPECT_EQ(h.engine.ledger().burned(), 2 * D);
}

TEST(Protocol, LeafChallengeCatchesFabricatedTree)
{
    Harness h({"a", "b", "w"});
    auto t = h.post();
    auto sel = h.engine.select_solvers(t);
    AccountId outsider;
    for (const auto& id : {"a", "b", "w"}) {
        if (std::find(sel.begin(), sel.end(), id) == sel.end()) {
            outsider = id;
        }
    }
    std::map<AccountId, Work> w;
    w[sel[0]] = h.work_for(sel[0], h.honest, h.honest->solution);
    h.commit(t, sel[0], w[sel[0]]);
    // a copier: right solution, but its leaves come from someone else's trace personalization
    auto other = h.work_for("someone", h.honest, h.honest->solution);
    Work copy = other;
    copy.p = to_bytes("copier-randomness");
    auto n = h.engine.task(t).spec.steps;
    h.engine.submit_commitment(t, sel[1], seal(to_bytes(sel[1]), copy.p, copy.y), copy.tree->root(),
                               copy.tree->prove(challenge_index(copy.tree->root(), n)));
    h.engine.register_party(t, sel[1], Party(sel[1], h.honest, h.honest->solution));
    h.until(t, TaskPhase::Revealed);
    h.engine.reveal(t, sel[0], w[sel[0]].p, w[sel[0]].y);
    h.engine.reveal(t, sel[1], copy.p, copy.y);
    auto out = h.engine.accept_outside_challenge(t, outsider, sel[1], ChallengeTarget::CommittedLeaf,
                                                 Party(outsider, h.honest, h.honest->solution));
    EXPECT_EQ(out.winner, outsider);
    EXPECT_EQ(h.slashed(sel[1], SlashCause::LostGame), D);
}

TEST(Protocol, RestartLimitAbandons)
{
    ProtocolParams params;
    params.max_restarts = 1;
    Harness h({"a", "b", "c", "d", "e", "f"}, 3, params);
    auto t = h.post();
    h.engine.select_solvers(t);
    // nobody ever commits
    h.until(t, TaskPhase::Abandoned, 500);
    EXPECT_EQ(h.engine.task(t).restarts, 1u);
    EXPECT_EQ(h.engine.ledger().escrow_total(), 0);
    EXPECT_EQ(h.engine.ledger().account("giver").balance, 10'000);
}

TEST(Protocol, ConservationUnderRandomDeadlines)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Harness h({"a", "b", "c", "d"}, seed);
        Rng rng(seed);
        auto t = h.post(2);
        h.engine.select_solvers(t);
        for (int round = 0; round < 200 && !h.engine.task(t).terminal(); ++round) {
            for (const auto& s : h.engine.task(t).active_solvers()) {
                const auto& slot = h.engine.task(t).slots.at(s);
                if (h.engine.task(t).phase == TaskPhase::Posted && !slot.commitment && rng.below(3) == 0) {
                    h.commit(t, s, h.work_for(s, h.honest, h.honest->solution));
                }
            }
            h.tick();
        }
        EXPECT_TRUE(h.engine.ledger().conserved());
    }
}

TEST(Protocol, SolverInAnotherTaskMayChallengeAndForfeitsSeatOnLoss)
{
    Harness h({"a", "b", "c", "d"});
    auto t1 = h.post();
    auto sel1 = h.engine.select_solvers(t1);
    auto t2 = h.post();
    auto sel2 = h.engine.select_solvers(t2);
    std::map<AccountId, Work> w;
    for (auto [t, sel] : {std::pair{t1, sel1}, std::pair{t2, sel2}}) {
        for (const auto& s : sel) {
            w[s] = h.work_for(s, h.honest, h.honest->solution);
            h.commit(t, s, w[s]);
        }
    }
    h.until(t1, TaskPhase::Revealed);
    for (const auto& s : sel1) {
        h.engine.reveal(t1, s, w[s].p, w[s].y);
    }
    ASSERT_EQ(h.engine.task(t1).phase, TaskPhase::Resolving);

    const auto& busy = sel2[0];
    ASSERT_EQ(h.engine.ledger().account(busy).status, AccountStatus::Solving);
    auto wrong = std::make_shared<const Trace>(execute_faulty(sample_program(), FaultSpec{3, 7}));
    auto out = h.engine.accept_outside_challenge(t1, busy, sel1[0], ChallengeTarget::Solution,
                                                 Party(busy, wrong, wrong->solution));
    EXPECT_EQ(out.loser, busy);
    EXPECT_EQ(h.slashed(busy, SlashCause::LostGame), D);
    EXPECT_TRUE(h.engine.task(t2).slots.at(busy).slashed);
    EXPECT_EQ(code_of([&] {
                  h.engine.accept_outside_challenge(t1, busy, sel1[1], ChallengeTarget::Solution,
                                                    Party(busy, h.honest, h.honest->solution));
              }),
              ErrorCode::InsufficientStake);
    h.engine.ledger().check_conservation();
}

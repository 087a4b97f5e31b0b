#include <tbsim/agents.hpp>

#include <tbsim/errors.hpp>
#include <tbsim/hashing.hpp>

#include <algorithm>
#include <array>
#include <type_traits>
#include <utility>

namespace tbsim {

namespace {

constexpr std::array<std::pair<StrategyKind, std::string_view>, 7> STRATEGY_NAMES{{
    {StrategyKind::Honest, "honest"},
    {StrategyKind::LazyCopier, "lazy_copier"},
    {StrategyKind::CartelMember, "cartel_member"},
    {StrategyKind::RandomnessLeaker, "randomness_leaker"},
    {StrategyKind::AvailabilityEngineer, "availability_engineer"},
    {StrategyKind::DelayAttacker, "delay_attacker"},
    {StrategyKind::OutsideWatchdog, "outside_watchdog"},
}};

constexpr std::size_t RANDOMNESS_BYTES = 32;
constexpr int MAX_PASSES = 64;

bool can_challenge(const Protocol& engine, const AccountId& id)
{
    const auto& acct = engine.ledger().account(id);
    bool free = acct.status == AccountStatus::Available || acct.status == AccountStatus::Solving;
    return free && acct.deposit >= engine.params().deposit;
}

}  // namespace

std::string to_string(StrategyKind kind)
{
    for (const auto& [k, name] : STRATEGY_NAMES) {
        if (k == kind) {
            return std::string(name);
        }
    }
    return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name)
{
    for (const auto& [k, n] : STRATEGY_NAMES) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::uint64_t ScenarioPopulation::attacker_q() const
{
    return static_cast<std::uint64_t>(std::count_if(accounts.begin(), accounts.end(), [](const auto& p) {
        return p.strategy.kind == StrategyKind::CartelMember;
    }));
}

std::uint64_t ScenarioPopulation::honest_watchdogs() const
{
    return static_cast<std::uint64_t>(std::count_if(accounts.begin(), accounts.end(), [](const auto& p) {
        return p.strategy.kind == StrategyKind::OutsideWatchdog;
    }));
}

Agent::Agent(Participant participant, std::uint64_t seed)
    : id_(std::move(participant.id)), strategy_(std::move(participant.strategy)), rng_(seed)
{
}

SolverWork Agent::prepare(const TaskInstance& t, const AccountId& solver, std::shared_ptr<const Trace> trace)
{
    SolverWork w;
    w.randomness = rng_.bytes(RANDOMNESS_BYTES);
    auto key = personalization_key(to_bytes(solver), w.randomness);
    std::vector<Digest> leaves;
    leaves.reserve(t.spec.steps);
    for (std::uint64_t i = 1; i <= t.spec.steps; ++i) {
        leaves.push_back(personalize_with_key(trace->snapshot(i), key));
    }
    w.tree = std::make_shared<const SnapshotTree>(std::move(leaves));
    w.solution = trace->solution;
    w.trace = std::move(trace);
    return w;
}

SolverWork Agent::fabricate(const TaskInstance& t, std::uint64_t solution)
{
    SolverWork w;
    w.randomness = rng_.bytes(RANDOMNESS_BYTES);
    std::vector<Digest> leaves;
    leaves.reserve(t.spec.steps);
    for (std::uint64_t i = 0; i < t.spec.steps; ++i) {
        auto b = rng_.bytes(32);
        Digest d;
        std::copy(b.begin(), b.end(), d.bytes.begin());
        leaves.push_back(d);
    }
    w.tree = std::make_shared<const SnapshotTree>(std::move(leaves));
    w.solution = solution;
    return w;
}

bool Agent::cartel_owns(const WorldView& view, const TaskInstance& t) const
{
    for (const auto& sid : t.active_solvers()) {
        const auto* s = view.sim.strategy_of(sid);
        if (!s || s->kind != StrategyKind::CartelMember || s->params.cartel_id != strategy_.params.cartel_id) {
            return false;
        }
    }
    return true;
}

namespace {

CommitMsg commit_for(const TaskInstance& t, const AccountId& solver, const SolverWork& w)
{
    CommitMsg m;
    m.task = t.id;
    m.solver = solver;
    m.sealed = seal(to_bytes(solver), w.randomness, w.solution);
    m.root = w.tree->root();
    m.proof = w.tree->prove(challenge_index(m.root, t.spec.steps));
    if (w.trace) {
        m.party = Party(solver, w.trace, w.solution);
    }
    return m;
}

}  // namespace

std::vector<Message> Agent::act_as_solver(WorldView& view, const TaskInstance& t)
{
    std::vector<Message> out;
    const auto& slot = t.slots.at(id_);
    const WorkKey mine{t.id, t.attempt, id_};
    const auto& p = strategy_.params;
    const bool partnered = p.partner && t.is_selected(*p.partner) && !t.slots.at(*p.partner).slashed;

    if (t.phase == TaskPhase::Posted && !slot.commitment) {
        if (committed_.count(mine)) {
            return out;
        }
        if (!work_.count(mine)) {
            std::optional<SolverWork> w;
            switch (strategy_.kind) {
            case StrategyKind::LazyCopier: {
                auto it = p.partner ? view.side_channel.find({t.id, t.attempt, *p.partner}) : view.side_channel.end();
                if (it != view.side_channel.end()) {
                    w = fabricate(t, it->second.solution);
                } else if (view.engine.clock() >= slot.commit_deadline) {
                    w = fabricate(t, rng_.next());
                }
                break;
            }
            case StrategyKind::CartelMember: {
                bool cheat = !p.defector && (p.always_cheat || cartel_owns(view, t));
                w = prepare(t, id_, cheat ? view.sim.cartel_trace() : view.sim.honest_trace());
                break;
            }
            case StrategyKind::RandomnessLeaker:
                if (partnered && !p.executes) {
                    // the partner generates our randomness and does the work
                    auto it = view.side_channel.find(mine);
                    if (it != view.side_channel.end()) {
                        w = it->second;
                    }
                    break;
                }
                if (partnered) {
                    WorkKey theirs{t.id, t.attempt, *p.partner};
                    if (!view.side_channel.count(theirs)) {
                        view.side_channel[theirs] = prepare(t, *p.partner, view.sim.honest_trace());
                    }
                }
                w = prepare(t, id_, view.sim.honest_trace());
                break;
            default:
                w = prepare(t, id_, view.sim.honest_trace());
                break;
            }
            if (!w) {
                return out;
            }
            work_[mine] = *w;
            if (p.partner) {
                view.side_channel[mine] = *w;
            }
        }
        committed_.insert(mine);
        out.emplace_back(commit_for(t, id_, work_.at(mine)));
        return out;
    }

    if ((t.phase == TaskPhase::Posted || t.phase == TaskPhase::Challenge1) &&
        strategy_.kind == StrategyKind::RandomnessLeaker && p.executes && partnered && !guessed_.count(mine)) {
        const auto& victim = t.slots.at(*p.partner);
        auto it = view.side_channel.find({t.id, t.attempt, *p.partner});
        if (victim.commitment && it != view.side_channel.end()) {
            guessed_.insert(mine);
            GuessMsg g;
            g.task = t.id;
            g.guesser = id_;
            g.victim = *p.partner;
            g.address = to_bytes(*p.partner);
            g.randomness = it->second.randomness;
            g.snapshot = it->second.trace->snapshot(victim.commitment->committed_leaf.index);
            out.emplace_back(std::move(g));
        }
        return out;
    }

    if (t.phase == TaskPhase::Revealed && slot.commitment && !slot.reveal && !revealed_.count(mine)) {
        auto it = work_.find(mine);
        if (it != work_.end()) {
            revealed_.insert(mine);
            out.emplace_back(RevealMsg{t.id, id_, it->second.randomness, it->second.solution});
        }
    }
    return out;
}

std::vector<Message> Agent::act_as_observer(WorldView& view, const TaskInstance& t)
{
    std::vector<Message> out;
    if (t.phase != TaskPhase::Resolving || !can_challenge(view.engine, id_)) {
        return out;
    }
    const auto& honest = view.sim.honest_trace();
    auto challenge = [&](const AccountId& target, ChallengeTarget kind, const std::shared_ptr<const Trace>& trace) {
        challenged_.insert({t.id, t.attempt, target});
        out.emplace_back(ChallengeMsg{t.id, id_, target, kind, Party(id_, trace, trace->solution)});
    };

    switch (strategy_.kind) {
    case StrategyKind::OutsideWatchdog:
        for (const auto& sid : t.active_solvers()) {
            const auto& slot = t.slots.at(sid);
            if (!slot.reveal || challenged_.count({t.id, t.attempt, sid})) {
                continue;
            }
            if (slot.reveal->solution != honest->solution) {
                challenge(sid, ChallengeTarget::Solution, honest);
                return out;
            }
            const auto& leaf = slot.commitment->committed_leaf;
            auto expected = personalize(honest->snapshot(leaf.index), to_bytes(sid), slot.reveal->randomness);
            if (expected != leaf.value) {
                challenge(sid, ChallengeTarget::CommittedLeaf, honest);
                return out;
            }
        }
        break;
    case StrategyKind::DelayAttacker: {
        auto groups = view.engine.solution_groups(t.id);
        const auto inactivity = view.engine.params().timeouts.inactivity;
        if (groups.size() == 1 && view.engine.clock() + 1 >= t.last_activity + inactivity) {
            challenge(groups.begin()->second.front(), ChallengeTarget::Solution, view.sim.bogus_trace());
        }
        break;
    }
    case StrategyKind::AvailabilityEngineer:
        if (strategy_.params.spurious_challenges && !spurious_.count({t.id, t.attempt})) {
            auto active = t.active_solvers();
            for (const auto& sid : active) {
                if (t.slots.at(sid).reveal) {
                    spurious_.insert({t.id, t.attempt});
                    challenge(sid, ChallengeTarget::Solution, view.sim.bogus_trace());
                    break;
                }
            }
        }
        break;
    default:
        break;
    }
    return out;
}

std::vector<Message> Agent::act(WorldView& view)
{
    std::vector<Message> out;
    const auto& acct = view.engine.ledger().account(id_);
    if (acct.status == AccountStatus::Slashed) {
        return out;
    }
    for (auto id : view.engine.task_ids()) {
        const auto& t = view.engine.task(id);
        if (t.terminal()) {
            continue;
        }
        auto msgs = t.is_selected(id_) ? (t.slots.at(id_).slashed ? std::vector<Message>{} : act_as_solver(view, t))
                                       : act_as_observer(view, t);
        for (auto& m : msgs) {
            out.push_back(std::move(m));
        }
        if (!out.empty()) {
            // one move at a time so later agents see its effect
            return out;
        }
    }
    return out;
}

std::vector<Message> Agent::before_task(WorldView& view)
{
    std::vector<Message> out;
    if (strategy_.kind != StrategyKind::AvailabilityEngineer || !strategy_.params.bogus_tasks) {
        return out;
    }
    const auto& spec = view.sim.spec();
    TaskSpec bogus{id_, spec.program, 0, strategy_.params.bogus_k, spec.reward};
    const auto& acct = view.engine.ledger().account(id_);
    if (acct.balance >= static_cast<Amount>(bogus.k) * bogus.reward) {
        out.emplace_back(PostTaskMsg{std::move(bogus)});
    }
    return out;
}

Simulation::Simulation(ScenarioSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), engine_(spec_.params, derive_seed(seed, 0))
{
    if (spec_.tasks == 0) {
        throw Error(ErrorCode::ConfigInvalid, "a scenario needs at least one task");
    }
    honest_ = std::make_shared<const Trace>(execute(spec_.program, spec_.params.max_steps));
    const auto n = honest_->steps();

    FaultSpec cartel_fault;
    for (const auto& p : spec_.population.accounts) {
        if (p.strategy.kind == StrategyKind::CartelMember) {
            cartel_fault = p.strategy.params.fault;
            break;
        }
    }
    if (!cartel_fault.fault_step) {
        cartel_fault.fault_step = std::max<std::uint64_t>(1, n / 2);
    }
    cartel_ = std::make_shared<const Trace>(execute_faulty(spec_.program, cartel_fault, spec_.params.max_steps));
    bogus_ = std::make_shared<const Trace>(execute_faulty(spec_.program, FaultSpec{n, 1}, spec_.params.max_steps));

    engine_.add_account(GIVER, spec_.giver_balance, false);
    auto accounts = spec_.population.accounts;
    std::sort(accounts.begin(), accounts.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < accounts.size(); ++i) {
        const auto& p = accounts[i];
        if (p.id == GIVER || index_.count(p.id)) {
            throw Error(ErrorCode::ConfigInvalid, "duplicate account id " + p.id);
        }
        engine_.add_account(p.id, p.balance + spec_.params.deposit, true);
        index_[p.id] = agents_.size();
        agents_.emplace_back(p, derive_seed(seed, 1 + i));
    }
    for (const auto& a : agents_) {
        if (a.strategy().params.partner && !index_.count(*a.strategy().params.partner)) {
            throw Error(ErrorCode::ConfigInvalid, a.id() + " names an unknown partner");
        }
    }
}

const Strategy* Simulation::strategy_of(const AccountId& id) const
{
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &agents_[it->second].strategy();
}

bool Simulation::is_attacker(const AccountId& id) const
{
    const auto* s = strategy_of(id);
    return s && s->kind == StrategyKind::CartelMember;
}

void Simulation::apply(const Message& msg)
{
    try {
        std::visit(
            [this](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, CommitMsg>) {
                    if (m.party) {
                        engine_.register_party(m.task, m.solver, *m.party);
                    }
                    engine_.submit_commitment(m.task, m.solver, m.sealed, m.root, m.proof);
                } else if constexpr (std::is_same_v<T, GuessMsg>) {
                    engine_.guess_randomness(m.task, m.guesser, m.victim, m.address, m.randomness, m.snapshot);
                } else if constexpr (std::is_same_v<T, RevealMsg>) {
                    engine_.reveal(m.task, m.solver, m.randomness, m.solution);
                } else if constexpr (std::is_same_v<T, ChallengeMsg>) {
                    engine_.accept_outside_challenge(m.task, m.challenger, m.target, m.kind, m.party);
                } else {
                    auto id = engine_.post_task(m.spec);
                    engine_.select_solvers(id);
                }
            },
            msg);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvariantViolation) {
            throw;
        }
        engine_.log().append(engine_.clock(), "message_rejected", {{"error", e.what()}});
    }
}

void Simulation::quiesce()
{
    WorldView view{engine_, *this, side_channel_};
    for (int pass = 0; pass < MAX_PASSES; ++pass) {
        bool any = false;
        for (auto& agent : agents_) {
            for (const auto& m : agent.act(view)) {
                apply(m);
                any = true;
            }
        }
        if (!any) {
            return;
        }
    }
}

bool Simulation::all_done() const
{
    for (auto id : engine_.task_ids()) {
        if (!engine_.task(id).terminal()) {
            return false;
        }
    }
    return true;
}

SimulationResult Simulation::run()
{
    SimulationResult result;
    result.honest_solution = honest_->solution;
    std::map<AccountId, Amount> start;
    for (const auto& [id, acct] : engine_.ledger().accounts()) {
        start[id] = acct.balance + acct.deposit;
    }
    auto round = [&] {
        quiesce();
        engine_.tick();
        engine_.ledger().check_conservation();
        ++result.rounds;
    };

    for (std::uint64_t n = 0; n < spec_.tasks; ++n) {
        WorldView view{engine_, *this, side_channel_};
        for (auto& agent : agents_) {
            for (const auto& m : agent.before_task(view)) {
                apply(m);
            }
        }
        std::uint64_t waited = 0;
        while (engine_.available_solvers().size() < spec_.k) {
            if (all_done() || ++waited > spec_.max_rounds_per_task) {
                throw Error(ErrorCode::InsufficientSolvers, "the pool cannot staff a task of " +
                                                                std::to_string(spec_.k) + " solvers");
            }
            round();
        }
        auto id = engine_.post_task(TaskSpec{GIVER, spec_.program, honest_->steps(), spec_.k, spec_.reward});
        engine_.select_solvers(id);
        primary_.insert(id);

        std::uint64_t spent = 0;
        while (!all_done()) {
            if (++spent > spec_.max_rounds_per_task) {
                throw Error(ErrorCode::InvariantViolation, "task " + std::to_string(id) + " did not terminate");
            }
            round();
        }
    }

    for (auto id : engine_.task_ids()) {
        const auto& t = engine_.task(id);
        TaskResult r;
        r.id = id;
        r.primary = primary_.count(id) != 0;
        r.accepted_solution = t.accepted_solution;
        r.abandoned = t.phase == TaskPhase::Abandoned;
        r.correct = t.accepted_solution == honest_->solution;
        r.selected_all_attacker = !t.first_selection.empty() &&
                                  std::all_of(t.first_selection.begin(), t.first_selection.end(),
                                              [this](const auto& a) { return is_attacker(a); });
        r.restarts = t.restarts;
        r.games = t.games_played;
        result.tasks.push_back(r);
    }
    const auto& ledger = engine_.ledger();
    result.burned = ledger.burned();
    for (const auto& ev : ledger.events()) {
        if (ev.kind == LedgerKind::Slash) {
            result.slashes.push_back(ev);
        } else if (ev.kind == LedgerKind::Reward || ev.kind == LedgerKind::GuessReward) {
            result.rewards.push_back(ev);
            result.rewards_total += ev.amount;
        }
    }
    for (const auto& [id, acct] : ledger.accounts()) {
        result.payoff[id] = acct.balance + acct.deposit - start[id];
    }
    return result;
}

std::map<StrategyKind, PayoffRow> payoff_table(const ScenarioSpec& spec, std::uint64_t seed, std::uint64_t trials)
{
    std::map<StrategyKind, PayoffRow> rows;
    std::map<StrategyKind, double> sums;
    for (const auto& p : spec.population.accounts) {
        rows[p.strategy.kind].accounts += 1;
    }
    for (std::uint64_t i = 0; i < trials; ++i) {
        Simulation sim(spec, derive_seed(seed, i));
        auto r = sim.run();
        for (const auto& p : spec.population.accounts) {
            sums[p.strategy.kind] += static_cast<double>(r.payoff.at(p.id));
        }
    }
    for (auto& [kind, row] : rows) {
        if (trials > 0) {
            row.mean_payoff = sums[kind] / static_cast<double>(row.accounts * trials);
        }
    }
    return rows;
}

double mean_payoff(const ScenarioSpec& spec, std::uint64_t seed, std::uint64_t trials,
                   const std::vector<AccountId>& accounts)
{
    double sum = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        Simulation sim(spec, derive_seed(seed, i));
        auto r = sim.run();
        for (const auto& id : accounts) {
            auto it = r.payoff.find(id);
            if (it == r.payoff.end()) {
                throw Error(ErrorCode::UnknownAccount, id);
            }
            sum += static_cast<double>(it->second);
        }
    }
    return trials == 0 ? 0.0 : sum / static_cast<double>(trials);
}

}  // namespace tbsim

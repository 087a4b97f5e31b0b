#include <tbsim/scenario.hpp>

#include <tbsim/errors.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace tbsim {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what)
{
    throw Error(ErrorCode::ConfigInvalid, what);
}

const std::set<std::string> TOP_KEYS{"seed", "mode", "trials", "threads", "selection_only", "pool",
                                     "task", "timeouts", "protocol", "prob"};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    if (!obj.is_object()) {
        invalid(where + " must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            invalid("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return fallback;
    }
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        invalid(std::string("bad value for '") + key + "'");
    }
}

std::uint64_t get_count(const json& obj, const char* key, std::uint64_t fallback)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
        invalid(std::string("'") + key + "' must be a non-negative integer");
    }
    return it->get<std::uint64_t>();
}

Amount get_amount(const json& obj, const char* key, Amount fallback)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
        invalid(std::string("'") + key + "' must be a non-negative integer");
    }
    return it->get<Amount>();
}

std::uint8_t get_register(const json& ins, const char* key)
{
    auto r = get_count(ins, key, 0);
    if (r >= REGISTER_COUNT) {
        invalid("register index out of range in program");
    }
    return static_cast<std::uint8_t>(r);
}

std::string padded(const std::string& prefix, std::uint64_t i)
{
    std::ostringstream s;
    s << prefix << '-' << std::setw(3) << std::setfill('0') << i;
    return s.str();
}

void parse_pool(const json& pool, ScenarioSpec& spec)
{
    check_keys(pool, {"deposit", "balance", "counts", "cartel", "availability_engineer", "accounts"}, "pool");
    spec.params.deposit = get_amount(pool, "deposit", 100);
    const Amount balance = get_amount(pool, "balance", 1000);
    auto& accounts = spec.population.accounts;

    StrategyParams cartel;
    std::uint64_t defectors = 0;
    if (pool.contains("cartel")) {
        const auto& c = pool["cartel"];
        check_keys(c, {"always_cheat", "fault_step", "corruption", "defectors"}, "pool.cartel");
        cartel.always_cheat = get_or<bool>(c, "always_cheat", false);
        if (c.contains("fault_step") && !c["fault_step"].is_null()) {
            cartel.fault.fault_step = get_count(c, "fault_step", 1);
        }
        cartel.fault.corruption = get_count(c, "corruption", 1);
        if (cartel.fault.corruption == 0) {
            invalid("cartel corruption must be non-zero");
        }
        defectors = get_count(c, "defectors", 0);
    }
    cartel.cartel_id = "cartel";

    StrategyParams engineer;
    if (pool.contains("availability_engineer")) {
        const auto& e = pool["availability_engineer"];
        check_keys(e, {"bogus_tasks", "spurious_challenges", "bogus_k"}, "pool.availability_engineer");
        engineer.bogus_tasks = get_or<bool>(e, "bogus_tasks", false);
        engineer.spurious_challenges = get_or<bool>(e, "spurious_challenges", true);
        engineer.bogus_k = static_cast<std::uint32_t>(get_count(e, "bogus_k", 2));
        if (engineer.bogus_k < 2) {
            invalid("bogus_k must be at least 2");
        }
    }

    std::map<StrategyKind, std::uint64_t> counts;
    if (pool.contains("counts")) {
        const auto& c = pool["counts"];
        if (!c.is_object()) {
            invalid("pool.counts must be an object");
        }
        for (const auto& [name, value] : c.items()) {
            auto kind = parse_strategy(name);
            if (!kind) {
                invalid("unknown strategy '" + name + "'");
            }
            if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
                invalid("count for '" + name + "' must be a non-negative integer");
            }
            counts[*kind] = value.get<std::uint64_t>();
        }
    }
    if (counts[StrategyKind::RandomnessLeaker] % 2 != 0) {
        invalid("randomness_leaker accounts come in pairs");
    }
    if (counts[StrategyKind::LazyCopier] > counts[StrategyKind::Honest]) {
        invalid("every lazy_copier needs an honest partner");
    }
    if (defectors > counts[StrategyKind::CartelMember]) {
        invalid("more defectors than cartel members");
    }

    for (const auto& [kind, n] : counts) {
        for (std::uint64_t i = 0; i < n; ++i) {
            Participant p{padded(to_string(kind), i), Strategy{kind, {}}, balance};
            switch (kind) {
            case StrategyKind::CartelMember:
                p.strategy.params = cartel;
                if (i < defectors) {
                    p.strategy.params.defector = true;
                    p.strategy.params.partner = padded("alias", i);
                }
                break;
            case StrategyKind::AvailabilityEngineer:
                p.strategy.params = engineer;
                break;
            case StrategyKind::RandomnessLeaker:
                p.strategy.params.executes = i % 2 == 0;
                p.strategy.params.partner = padded(to_string(kind), i % 2 == 0 ? i + 1 : i - 1);
                break;
            case StrategyKind::LazyCopier:
                p.strategy.params.partner = padded(to_string(StrategyKind::Honest), i);
                break;
            case StrategyKind::Honest:
                if (i < counts[StrategyKind::LazyCopier]) {
                    p.strategy.params.partner = padded(to_string(StrategyKind::LazyCopier), i);
                }
                break;
            default:
                break;
            }
            accounts.push_back(std::move(p));
        }
    }
    for (std::uint64_t i = 0; i < defectors; ++i) {
        accounts.push_back({padded("alias", i), Strategy{StrategyKind::OutsideWatchdog, {}}, balance});
    }

    if (pool.contains("accounts")) {
        if (!pool["accounts"].is_array()) {
            invalid("pool.accounts must be a list");
        }
        for (const auto& a : pool["accounts"]) {
            check_keys(a, {"id", "strategy", "balance", "partner", "executes", "always_cheat", "defector",
                           "cartel_id", "bogus_tasks", "spurious_challenges", "bogus_k"},
                       "pool.accounts[]");
            auto kind = parse_strategy(get_or<std::string>(a, "strategy", "honest"));
            if (!kind) {
                invalid("unknown strategy in pool.accounts");
            }
            Participant p{get_or<std::string>(a, "id", ""), Strategy{*kind, {}}, get_amount(a, "balance", balance)};
            if (p.id.empty()) {
                invalid("account ids must be non-empty");
            }
            auto& sp = p.strategy.params;
            if (*kind == StrategyKind::CartelMember) {
                sp = cartel;
                sp.cartel_id = get_or<std::string>(a, "cartel_id", "cartel");
                sp.always_cheat = get_or<bool>(a, "always_cheat", cartel.always_cheat);
            }
            if (*kind == StrategyKind::AvailabilityEngineer) {
                sp = engineer;
                sp.bogus_tasks = get_or<bool>(a, "bogus_tasks", engineer.bogus_tasks);
                sp.spurious_challenges = get_or<bool>(a, "spurious_challenges", engineer.spurious_challenges);
                sp.bogus_k = static_cast<std::uint32_t>(get_count(a, "bogus_k", engineer.bogus_k));
            }
            sp.defector = get_or<bool>(a, "defector", false);
            sp.executes = get_or<bool>(a, "executes", false);
            if (a.contains("partner")) {
                sp.partner = get_or<std::string>(a, "partner", "");
            }
            accounts.push_back(std::move(p));
        }
    }

    std::set<AccountId> ids;
    for (const auto& p : accounts) {
        if (p.id == Simulation::GIVER || !ids.insert(p.id).second) {
            invalid("duplicate account id '" + p.id + "'");
        }
    }
    for (const auto& p : accounts) {
        if (p.strategy.params.partner && !ids.count(*p.strategy.params.partner)) {
            invalid("'" + p.id + "' names unknown partner '" + *p.strategy.params.partner + "'");
        }
    }
}

void parse_timeouts(const json& t, Timeouts& out)
{
    check_keys(t, {"commit", "challenge1", "reveal_delay", "reveal", "inactivity"}, "timeouts");
    out.commit = get_count(t, "commit", out.commit);
    out.challenge1 = get_count(t, "challenge1", out.challenge1);
    out.reveal_delay = get_count(t, "reveal_delay", out.reveal_delay);
    out.reveal = get_count(t, "reveal", out.reveal);
    out.inactivity = get_count(t, "inactivity", out.inactivity);
    if (out.commit == 0 || out.challenge1 == 0 || out.reveal_delay == 0 || out.reveal == 0 ||
        out.inactivity == 0) {
        invalid("every timeout must be at least one round");
    }
}

json event_json(const LedgerEvent& ev)
{
    json j{{"kind", to_string(ev.kind)}, {"account", ev.account}, {"amount", ev.amount}, {"task", ev.task}};
    if (ev.cause) {
        j["cause"] = to_string(*ev.cause);
    }
    if (!ev.note.empty()) {
        j["note"] = ev.note;
    }
    return j;
}

std::string summarize(const TrialReport& r)
{
    std::ostringstream s;
    s << "trial " << r.trial_id << " (seed " << r.seed << ")\n";
    if (r.accepted_solution) {
        s << "accepted solution: " << *r.accepted_solution << "\n";
    } else {
        s << "accepted solution: none\n";
    }
    s << "honest solution:   " << r.honest_solution << "\n"
      << "correct:           " << (r.correct ? "yes" : "no") << "\n"
      << "restarted:         " << (r.restarted ? "yes" : "no") << "\n"
      << "games played:      " << r.games_played << "\n"
      << "rounds elapsed:    " << r.rounds_elapsed << "\n"
      << "slashes:           " << r.slashes.size() << "\n";
    for (const auto& ev : r.slashes) {
        s << "  " << ev.account << " " << ev.amount << " " << (ev.cause ? to_string(*ev.cause) : "") << "\n";
    }
    s << "rewards paid:      " << r.rewards_total << "\n"
      << "burned:            " << r.burned << "\n";
    return s.str();
}

TrialRow selection_trial(const ScenarioConfig& config, std::uint64_t trial_id, std::uint64_t steps)
{
    auto seed = derive_seed(config.seed, trial_id);
    Protocol engine(config.spec.params, derive_seed(seed, 0));
    engine.add_account(Simulation::GIVER, config.spec.giver_balance, false);
    std::set<AccountId> attackers;
    for (const auto& p : config.spec.population.accounts) {
        engine.add_account(p.id, p.balance + config.spec.params.deposit, true);
        if (p.strategy.kind == StrategyKind::CartelMember) {
            attackers.insert(p.id);
        }
    }
    auto id = engine.post_task(TaskSpec{Simulation::GIVER, config.spec.program, steps, config.spec.k,
                                        config.spec.reward});
    auto drawn = engine.select_solvers(id);
    engine.ledger().check_conservation();
    TrialRow row;
    row.trial_id = trial_id;
    row.selected_all_attacker =
        std::all_of(drawn.begin(), drawn.end(), [&](const auto& a) { return attackers.count(a) != 0; });
    return row;
}

}  // namespace

Program parse_program(const json& doc)
{
    check_keys(doc, {"code", "input", "generate"}, "task.program");
    if (doc.contains("generate")) {
        const auto& g = doc["generate"];
        check_keys(g, {"seed", "max_steps"}, "task.program.generate");
        Rng rng(get_count(g, "seed", 0));
        auto bound = get_count(g, "max_steps", 256);
        if (bound < 8) {
            invalid("generated programs need max_steps >= 8");
        }
        return generate_program(rng, bound);
    }
    if (!doc.contains("code") || !doc["code"].is_array() || doc["code"].empty()) {
        invalid("task.program needs a non-empty 'code' list or a 'generate' block");
    }
    Program p;
    for (const auto& ins : doc["code"]) {
        if (ins.is_string()) {
            if (ins.get<std::string>() != "halt") {
                invalid("only 'halt' may be written as a bare string");
            }
            p.code.push_back(Instruction::halt());
            continue;
        }
        check_keys(ins, {"op", "a", "b", "imm"}, "instruction");
        auto op = parse_opcode(get_or<std::string>(ins, "op", ""));
        if (!op) {
            invalid("unknown opcode in program");
        }
        Instruction i;
        i.op = *op;
        i.a = get_register(ins, "a");
        i.b = get_register(ins, "b");
        i.imm = get_or<std::int64_t>(ins, "imm", 0);
        p.code.push_back(i);
    }
    if (doc.contains("input")) {
        p.input = get_or<std::vector<std::uint64_t>>(doc, "input", {});
        if (p.input.size() > REGISTER_COUNT) {
            invalid("at most 4 input values");
        }
    }
    return p;
}

ScenarioConfig parse_config(const json& doc)
{
    check_keys(doc, TOP_KEYS, "scenario");
    ScenarioConfig c;
    c.seed = get_count(doc, "seed", 0);
    auto mode = get_or<std::string>(doc, "mode", "single");
    if (mode == "single") {
        c.mode = RunMode::Single;
    } else if (mode == "montecarlo") {
        c.mode = RunMode::MonteCarlo;
    } else if (mode == "prob") {
        c.mode = RunMode::Prob;
    } else {
        invalid("mode must be single, montecarlo or prob");
    }
    c.trials = get_count(doc, "trials", 1);
    if (c.trials == 0) {
        invalid("trials must be at least 1");
    }
    c.threads = static_cast<unsigned>(get_count(doc, "threads", 0));
    c.selection_only = get_or<bool>(doc, "selection_only", false);

    if (c.mode == RunMode::Prob) {
        if (!doc.contains("prob")) {
            invalid("prob mode needs a 'prob' block with q, n and k");
        }
        const auto& p = doc["prob"];
        check_keys(p, {"q", "n", "k"}, "prob");
        c.prob = AttackProbQuery{get_count(p, "q", 0), get_count(p, "n", 0), get_count(p, "k", 0)};
        try {
            validate(*c.prob);
        } catch (const Error& e) {
            invalid(e.what());
        }
        return c;
    }

    auto& spec = c.spec;
    if (doc.contains("protocol")) {
        const auto& p = doc["protocol"];
        check_keys(p, {"max_restarts", "max_steps", "guess_stake"}, "protocol");
        spec.params.max_restarts = get_count(p, "max_restarts", spec.params.max_restarts);
        spec.params.max_steps = get_count(p, "max_steps", spec.params.max_steps);
        if (p.contains("guess_stake")) {
            spec.params.guess_stake = get_amount(p, "guess_stake", 0);
        }
    }
    if (doc.contains("timeouts")) {
        parse_timeouts(doc["timeouts"], spec.params.timeouts);
    }
    if (!doc.contains("pool")) {
        invalid("missing 'pool'");
    }
    parse_pool(doc["pool"], spec);
    if (spec.params.deposit <= 0) {
        invalid("deposit must be positive");
    }

    if (!doc.contains("task")) {
        invalid("missing 'task'");
    }
    const auto& t = doc["task"];
    check_keys(t, {"program", "k", "reward", "tasks", "giver_balance", "max_rounds"}, "task");
    if (!t.contains("program")) {
        invalid("missing 'task.program'");
    }
    spec.program = parse_program(t["program"]);
    spec.k = static_cast<std::uint32_t>(get_count(t, "k", 2));
    spec.reward = get_amount(t, "reward", 10);
    spec.tasks = get_count(t, "tasks", 1);
    spec.giver_balance = get_amount(t, "giver_balance", 1'000'000);
    spec.max_rounds_per_task = get_count(t, "max_rounds", spec.max_rounds_per_task);

    if (spec.k < 2) {
        invalid("k must be at least 2");
    }
    if (spec.k > spec.population.size()) {
        invalid("k exceeds the pool size");
    }
    if (spec.tasks == 0) {
        invalid("task.tasks must be at least 1");
    }
    if (spec.giver_balance < static_cast<Amount>(spec.k) * spec.reward) {
        invalid("the task giver cannot escrow k*X");
    }
    try {
        execute(spec.program, spec.params.max_steps);
    } catch (const Error& e) {
        invalid(std::string("program: ") + e.what());
    }
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        invalid("cannot open " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        invalid(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

void apply_seed_override(ScenarioConfig& config)
{
    const char* env = std::getenv("SIM_SEED");
    if (!env || !*env) {
        return;
    }
    try {
        std::size_t used = 0;
        std::string s(env);
        auto value = std::stoull(s, &used, 0);
        if (used != s.size()) {
            invalid("SIM_SEED is not an integer");
        }
        config.seed = value;
    } catch (const std::logic_error&) {
        invalid("SIM_SEED is not an integer");
    }
}

json program_to_json(const Program& program)
{
    json code = json::array();
    for (const auto& i : program.code) {
        if (i.op == Opcode::Halt) {
            code.push_back("halt");
        } else {
            code.push_back({{"op", to_string(i.op)}, {"a", i.a}, {"b", i.b}, {"imm", i.imm}});
        }
    }
    return {{"code", code}, {"input", program.input}};
}

json to_json(const TrialReport& r)
{
    json tasks = json::array();
    for (const auto& t : r.tasks) {
        json j{{"task", t.id},
               {"primary", t.primary},
               {"abandoned", t.abandoned},
               {"correct", t.correct},
               {"selected_all_attacker", t.selected_all_attacker},
               {"restarts", t.restarts},
               {"games", t.games}};
        j["accepted_solution"] = t.accepted_solution ? json(*t.accepted_solution) : json(nullptr);
        tasks.push_back(std::move(j));
    }
    json slashes = json::array();
    for (const auto& ev : r.slashes) {
        slashes.push_back(event_json(ev));
    }
    json rewards = json::array();
    for (const auto& ev : r.rewards) {
        rewards.push_back(event_json(ev));
    }
    json out{{"trial_id", r.trial_id},
             {"seed", r.seed},
             {"restarted", r.restarted},
             {"abandoned", r.abandoned},
             {"correct", r.correct},
             {"selected_all_attacker", r.selected_all_attacker},
             {"honest_solution", r.honest_solution},
             {"tasks", tasks},
             {"slashes", slashes},
             {"rewards", rewards},
             {"games", r.games},
             {"games_played", r.games_played},
             {"rounds_elapsed", r.rounds_elapsed},
             {"burned", r.burned},
             {"rewards_total", r.rewards_total}};
    out["accepted_solution"] = r.accepted_solution ? json(*r.accepted_solution) : json(nullptr);
    return out;
}

SingleRun run_trial(const ScenarioConfig& config, std::uint64_t trial_id)
{
    const auto seed = derive_seed(config.seed, trial_id);
    Simulation sim(config.spec, seed);
    auto result = sim.run();

    SingleRun out;
    auto& r = out.report;
    r.trial_id = trial_id;
    r.seed = seed;
    r.honest_solution = result.honest_solution;
    r.correct = true;
    bool first = true;
    for (const auto& t : result.tasks) {
        if (!t.primary) {
            continue;
        }
        if (first) {
            r.selected_all_attacker = t.selected_all_attacker;
            first = false;
        }
        r.accepted_solution = t.accepted_solution;
        r.restarted = r.restarted || t.restarts > 0;
        r.abandoned = r.abandoned || t.abandoned;
        r.correct = r.correct && t.correct;
    }
    r.tasks = result.tasks;
    for (const auto& t : result.tasks) {
        r.games_played += t.games;
    }
    r.slashes = std::move(result.slashes);
    r.rewards = std::move(result.rewards);
    r.rounds_elapsed = result.rounds;
    r.burned = result.burned;
    r.rewards_total = result.rewards_total;
    for (const auto& rec : sim.engine().log().records()) {
        if (rec.at("type") == "game") {
            r.games.push_back(rec);
        }
    }
    out.events_jsonl = sim.engine().log().to_jsonl();
    out.summary = summarize(r);
    return out;
}

SingleRun run_single(const ScenarioConfig& config, const std::optional<std::filesystem::path>& out_dir)
{
    auto run = run_trial(config, 0);
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::ofstream(*out_dir / "events.jsonl", std::ios::binary) << run.events_jsonl;
        std::ofstream(*out_dir / "report.json", std::ios::binary) << to_json(run.report).dump(2) << "\n";
        std::ofstream(*out_dir / "summary.txt", std::ios::binary) << run.summary;
    }
    return run;
}

MonteCarloResult run_montecarlo(const ScenarioConfig& config)
{
    MonteCarloResult result;
    const auto& spec = config.spec;
    result.query = AttackProbQuery{spec.population.attacker_q(), spec.population.size(), spec.k};
    result.closed_form = attack_probability(result.query);
    result.rows.resize(config.trials);

    const auto steps = execute(spec.program, spec.params.max_steps).steps();
    std::vector<std::uint8_t> wrong(config.trials, 0);
    std::atomic<std::uint64_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            auto i = next.fetch_add(1);
            if (i >= config.trials) {
                return;
            }
            try {
                if (config.selection_only) {
                    result.rows[i] = selection_trial(config, i, steps);
                    continue;
                }
                auto run = run_trial(config, i);
                auto& row = result.rows[i];
                row.trial_id = i;
                row.selected_all_attacker = run.report.selected_all_attacker;
                row.correct = run.report.correct;
                row.games = run.report.games_played;
                row.burned = run.report.burned;
                row.rewards_total = run.report.rewards_total;
                wrong[i] = run.report.accepted_solution && !run.report.correct;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(config.trials);
                return;
            }
        }
    };
    unsigned threads = config.threads ? config.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, config.trials));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    for (std::uint64_t i = 0; i < config.trials; ++i) {
        result.hits += result.rows[i].selected_all_attacker;
        result.wrong_accepted += wrong[i];
    }
    double p = result.closed_form.to_double();
    auto n = static_cast<double>(config.trials);
    result.empirical = static_cast<double>(result.hits) / n;
    result.stderr_ = std::sqrt(p * (1.0 - p) / n);
    result.within_tolerance = std::abs(result.empirical - p) <= 4.0 * result.stderr_;
    return result;
}

void write_trials_csv(std::ostream& out, const MonteCarloResult& result)
{
    out << TRIALS_CSV_HEADER << "\n";
    for (const auto& r : result.rows) {
        out << r.trial_id << ',' << (r.selected_all_attacker ? 1 : 0) << ',';
        if (r.correct) {
            out << (*r.correct ? 1 : 0);
        }
        out << ',' << r.games << ',' << r.burned << ',' << r.rewards_total << "\n";
    }
}

void write_summary_csv(std::ostream& out, const MonteCarloResult& result)
{
    out << SUMMARY_CSV_HEADER << "\n";
    out << std::setprecision(10) << result.closed_form.to_double() << ',' << result.empirical << ','
        << result.stderr_ << "\n";
}

void write_montecarlo(const std::filesystem::path& out_dir, const MonteCarloResult& result)
{
    std::filesystem::create_directories(out_dir);
    std::ofstream trials(out_dir / "trials.csv", std::ios::binary);
    write_trials_csv(trials, result);
    std::ofstream summary(out_dir / "summary.csv", std::ios::binary);
    write_summary_csv(summary, result);
}

std::string run_prob(const AttackProbQuery& query)
{
    return format_probability(attack_probability(query));
}

int exit_code_for(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::InvalidQuery:
    case ErrorCode::KTooSmall:
    case ErrorCode::InsufficientFunds:
    case ErrorCode::InsufficientSolvers:
    case ErrorCode::NonTermination:
    case ErrorCode::InvalidOpcode:
        return 2;
    default:
        return 3;
    }
}

}  // namespace tbsim

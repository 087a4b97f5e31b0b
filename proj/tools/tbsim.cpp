#include <tbsim/scenario.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <optional>
#include <string>

namespace {

std::uint64_t parse_u64(const std::string& text, const char* what)
{
    std::uint64_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size()) {
        throw tbsim::Error(tbsim::ErrorCode::InvalidQuery, std::string(what) + " must be a non-negative integer");
    }
    return value;
}

void print_montecarlo(const tbsim::MonteCarloResult& r, std::uint64_t trials)
{
    std::cout << "trials:      " << trials << "\n"
              << "closed form: " << tbsim::format_probability(r.closed_form) << "\n"
              << "empirical:   " << r.hits << "/" << trials << " = " << r.empirical << "\n"
              << "stderr:      " << r.stderr_ << "\n"
              << "within 4se:  " << (r.within_tolerance ? "yes" : "no") << "\n";
}

int run_config(const std::string& path, const std::optional<std::string>& out, bool force_montecarlo)
{
    auto config = tbsim::load_config(path);
    tbsim::apply_seed_override(config);
    if (force_montecarlo) {
        config.mode = tbsim::RunMode::MonteCarlo;
    }
    switch (config.mode) {
    case tbsim::RunMode::Prob:
        std::cout << tbsim::run_prob(*config.prob) << "\n";
        return 0;
    case tbsim::RunMode::MonteCarlo: {
        if (!out) {
            throw tbsim::Error(tbsim::ErrorCode::ConfigInvalid, "montecarlo runs need --out");
        }
        auto result = tbsim::run_montecarlo(config);
        tbsim::write_montecarlo(*out, result);
        print_montecarlo(result, config.trials);
        return 0;
    }
    case tbsim::RunMode::Single: {
        std::optional<std::filesystem::path> dir;
        if (out) {
            dir = *out;
        }
        auto run = tbsim::run_single(config, dir);
        std::cout << run.summary;
        return 0;
    }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simulator for a verifiable off-chain computation protocol"};
    app.require_subcommand(1);

    std::string run_path;
    std::optional<std::string> run_out;
    auto* run = app.add_subcommand("run", "Run a scenario config (mode taken from the file)");
    run->add_option("config", run_path, "Scenario JSON file")->required();
    run->add_option("--out", run_out, "Directory for events.jsonl, report.json and summary.txt");

    std::string mc_path;
    std::optional<std::string> mc_out;
    auto* mc = app.add_subcommand("montecarlo", "Run config.trials independent trials");
    mc->add_option("config", mc_path, "Scenario JSON file")->required();
    mc->add_option("--out", mc_out, "Directory for trials.csv and summary.csv")->required();

    std::string q, n, k;
    auto* prob = app.add_subcommand("prob", "Exact probability that all k solvers are attackers");
    prob->add_option("q", q, "Attacker accounts")->required();
    prob->add_option("n", n, "Pool size")->required();
    prob->add_option("k", k, "Solvers per task")->required();
    prob->positionals_at_end();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            return run_config(run_path, run_out, false);
        }
        if (*mc) {
            return run_config(mc_path, mc_out, true);
        }
        tbsim::AttackProbQuery query{parse_u64(q, "q"), parse_u64(n, "n"), parse_u64(k, "k")};
        std::cout << tbsim::run_prob(query) << "\n";
        return 0;
    } catch (const tbsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return tbsim::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

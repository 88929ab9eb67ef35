#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include "CLI11.hpp"
#include "hexens/arena.hpp"
#include "hexens/csv.hpp"

namespace hexens::cli {

namespace {

struct CliConfig {
    int board_size = 9;
    std::uint64_t total_playouts = 8192;
    std::vector<std::uint32_t> sizes{1, 2, 4, 8, 16, 32, 64};
    std::uint32_t trees = 8;
    double cp_ensemble = 0.1;
    double cp_plain = 1.0;
    std::vector<double> cp_values{0.0, 0.1, 0.5, 1.0};
    std::uint64_t games = 200;
    std::uint64_t seed = 42;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::string combine = "aggregate-winrate";
    std::string ci = "normal";
    double fpu = 0.5;
    std::string position = "empty";
    int opening_plies = 10;
    std::string output;
};

void add_common(CLI::App& cmd, CliConfig& cfg) {
    cmd.add_option("--board-size", cfg.board_size, "Hex board side length")
        ->check(CLI::Range(1, 255))
        ->capture_default_str();
    cmd.add_option("--total-playouts", cfg.total_playouts, "Playouts per move decision for each side")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    cmd.add_option("--workers", cfg.workers, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--combine", cfg.combine, "Ensemble combination policy")
        ->check(CLI::IsMember({"aggregate-winrate", "aggregate-robust", "majority-vote"}))
        ->capture_default_str();
    cmd.add_option("--fpu", cfg.fpu, "Value of an unvisited move")->capture_default_str();
}

void add_match_options(CLI::App& cmd, CliConfig& cfg) {
    cmd.add_option("--cp-ensemble", cfg.cp_ensemble, "Cp of the ensemble")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd.add_option("--cp-plain", cfg.cp_plain, "Cp of plain UCT")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd.add_option("--games", cfg.games, "Games per data point (even)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--ci", cfg.ci, "Confidence interval method")
        ->check(CLI::IsMember({"normal", "wilson"}))
        ->capture_default_str();
}

/// Opens the output file before any work starts so a bad path fails fast.
std::unique_ptr<std::ofstream> open_output(const std::string& path) {
    auto file = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file) throw std::runtime_error("cannot open output file '" + path + "'");
    return file;
}

SweepConfig sweep_config(const CliConfig& cfg, std::vector<std::uint32_t> sizes) {
    SweepConfig s;
    s.total_playouts = cfg.total_playouts;
    s.sizes = std::move(sizes);
    s.cp_ensemble = cfg.cp_ensemble;
    s.cp_plain = cfg.cp_plain;
    s.games = cfg.games;
    s.board_size = cfg.board_size;
    s.seed = cfg.seed;
    s.combine = parse_combine_policy(cfg.combine);
    s.fpu = cfg.fpu;
    s.match.workers = cfg.workers;
    s.match.ci_method = cfg.ci == "wilson" ? CiMethod::Wilson : CiMethod::Normal;
    return s;
}

void print_row(std::ostream& out, const SweepRow& r) {
    out << "n=" << r.ensemble_size << " per_tree=" << r.per_tree_playouts << " cp_ens=" << format_real(r.cp_ensemble)
        << " cp_plain=" << format_real(r.cp_plain) << " wins=" << r.result.wins_a << "/" << r.result.games
        << " rate=" << format_real(r.result.win_rate) << " ci=[" << format_real(r.result.ci_low) << ", "
        << format_real(r.result.ci_high) << "]" << std::endl;
}

int run_sweep(const CliConfig& cfg, std::vector<std::uint32_t> sizes, std::ostream& out) {
    const auto file = open_output(cfg.output);
    write_sweep_header(*file);
    const auto rows = sweep_ensemble_sizes(sweep_config(cfg, std::move(sizes)), [&](const SweepRow& r) {
        write_sweep_row(*file, r);
        file->flush();
        print_row(out, r);
    });
    if (!*file) throw std::runtime_error("failed writing '" + cfg.output + "'");
    return kSuccess;
}

int run_visits(const CliConfig& cfg, std::ostream& out) {
    const auto file = open_output(cfg.output);
    const Board state = cfg.position == "opening" ? random_opening(cfg.board_size, cfg.opening_plies, cfg.seed)
                                                  : Board(cfg.board_size);
    EnsembleConfig ens;
    ens.n_trees = cfg.trees;
    ens.total_playouts = cfg.total_playouts;
    ens.params.fpu = cfg.fpu;
    ens.combine = parse_combine_policy(cfg.combine);
    ens.workers = cfg.workers;
    const auto series = dump_root_visits(state, cfg.total_playouts, ens, cfg.cp_values, cfg.seed);
    write_visits_csv(*file, series);
    for (const auto& s : series) {
        out << s.engine << " cp=" << format_real(s.cp) << " total=" << s.total() << " max=" << s.max_visits()
            << " visited_moves=" << s.visited_moves() << "/" << s.visits.size() << std::endl;
    }
    if (!*file) throw std::runtime_error("failed writing '" + cfg.output + "'");
    return kSuccess;
}

int run_selfplay(const CliConfig& cfg, std::ostream& out) {
    std::unique_ptr<std::ofstream> file;
    if (!cfg.output.empty()) file = open_output(cfg.output);
    AgentSpec ens = AgentSpec::ensemble(cfg.cp_ensemble, cfg.total_playouts, cfg.trees, parse_combine_policy(cfg.combine));
    AgentSpec plain = AgentSpec::plain(cfg.cp_plain, cfg.total_playouts);
    ens.fpu = plain.fpu = cfg.fpu;
    const auto game = play_game_record(ens, plain, cfg.board_size, cfg.seed, cfg.workers);
    if (file) *file << "move_number,player,row,col\n";
    Player p = Player::Black;
    for (std::size_t i = 0; i < game.moves.size(); ++i) {
        if (file) *file << i << ',' << to_string(p) << ',' << game.moves[i].row << ',' << game.moves[i].col << '\n';
        p = opponent(p);
    }
    out << "black: " << describe(ens) << "\nwhite: " << describe(plain) << "\nmoves: " << game.moves.size()
        << "\nwinner: " << to_string(game.winner) << std::endl;
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"Plain and Ensemble UCT experiments on Hex", "hexens"};
    app.require_subcommand(1);

    auto* sweep = app.add_subcommand("sweep", "Ensemble vs plain UCT over a list of ensemble sizes");
    add_common(*sweep, cfg);
    add_match_options(*sweep, cfg);
    sweep->add_option("--sizes", cfg.sizes, "Ensemble sizes, comma separated")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("-o,--output", cfg.output, "CSV output path")->default_str("sweep.csv");

    auto* match = app.add_subcommand("match", "Ensemble vs plain UCT at one ensemble size");
    add_common(*match, cfg);
    add_match_options(*match, cfg);
    match->add_option("--trees", cfg.trees, "Ensemble size")->check(CLI::PositiveNumber)->capture_default_str();
    match->add_option("-o,--output", cfg.output, "CSV output path")->default_str("match.csv");

    auto* visits = app.add_subcommand("visits", "Root-child visit counts of plain UCT and an ensemble");
    add_common(*visits, cfg);
    visits->add_option("--trees", cfg.trees, "Ensemble size")->check(CLI::PositiveNumber)->capture_default_str();
    visits->add_option("--cp-values", cfg.cp_values, "Cp values, comma separated")
        ->delimiter(',')
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    visits->add_option("--position", cfg.position, "Root position")
        ->check(CLI::IsMember({"empty", "opening"}))
        ->capture_default_str();
    visits->add_option("--opening-plies", cfg.opening_plies, "Random moves played for --position opening")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    visits->add_option("-o,--output", cfg.output, "CSV output path")->default_str("visits.csv");

    auto* selfplay = app.add_subcommand("selfplay", "One game: ensemble as Black against plain UCT");
    add_common(*selfplay, cfg);
    add_match_options(*selfplay, cfg);
    selfplay->add_option("--trees", cfg.trees, "Ensemble size")->check(CLI::PositiveNumber)->capture_default_str();
    selfplay->add_option("-o,--output", cfg.output, "Optional CSV of the moves");

    // CLI11 wants argv order reversed when parsing a vector.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    }

    const bool is_sweep = sweep->parsed();
    const bool is_match = match->parsed();
    const bool is_visits = visits->parsed();
    if (cfg.output.empty() && !selfplay->parsed()) {
        cfg.output = is_sweep ? "sweep.csv" : is_match ? "match.csv" : "visits.csv";
    }

    auto usage_error = [&](const std::string& msg, const CLI::App& cmd) {
        err << "error: " << msg << "\n\n" << cmd.help();
        return kUsageError;
    };
    if ((is_sweep || is_match) && cfg.games % 2 != 0) {
        return usage_error("--games must be even so both agents play each color equally", is_sweep ? *sweep : *match);
    }
    if (is_sweep) {
        for (const auto n : cfg.sizes) {
            if (n > cfg.total_playouts) return usage_error("ensemble sizes must not exceed --total-playouts", *sweep);
        }
    } else if (cfg.trees > cfg.total_playouts) {
        return usage_error("--trees must not exceed --total-playouts", is_match ? *match : is_visits ? *visits : *selfplay);
    }

    try {
        if (is_sweep) return run_sweep(cfg, cfg.sizes, out);
        if (is_match) return run_sweep(cfg, {cfg.trees}, out);
        if (is_visits) return run_visits(cfg, out);
        return run_selfplay(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << std::endl;
        return kRuntimeError;
    }
}

}  // namespace hexens::cli

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hexens/ensemble.hpp"
#include "hexens/hex.hpp"

namespace hexens {

enum class AgentKind {
    PlainUCT,
    EnsembleUCT,
    /// Uniformly random legal moves. Baseline for sanity checks.
    Random,
};

struct AgentSpec {
    AgentKind kind = AgentKind::PlainUCT;
    double cp = 1.0;
    std::uint64_t total_playouts = 1;
    std::uint32_t n_trees = 1;
    CombinePolicy combine = CombinePolicy::AggregateWinrate;
    double fpu = 0.5;
    double large_urgency = 1e6;

    static AgentSpec plain(double cp, std::uint64_t playouts);
    static AgentSpec ensemble(double cp, std::uint64_t playouts, std::uint32_t trees,
                              CombinePolicy combine = CombinePolicy::AggregateWinrate);
    static AgentSpec random();

    /// Throws std::invalid_argument for a plain agent with n_trees != 1 or an
    /// ensemble whose budget is smaller than its tree count.
    void validate() const;
};

std::string describe(const AgentSpec& agent);

/// The move `agent` picks in `board` when its search is seeded with `seed`.
/// `workers` threads may be used for ensemble trees.
Cell choose_move(const AgentSpec& agent, const Board& board, std::uint64_t seed,
                 unsigned workers = 1);

struct GameRecord {
    std::vector<Cell> moves;
    Player winner = Player::Black;
};

/// Plays one game from the empty board. Move k is searched with seed
/// derive_seed(seed, k), so the game is a pure function of its arguments.
GameRecord play_game_record(const AgentSpec& black, const AgentSpec& white, int size,
                            std::uint64_t seed, unsigned workers = 1);

Player play_game(const AgentSpec& black, const AgentSpec& white, int size, std::uint64_t seed);

enum class CiMethod { Normal, Wilson };

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Two-sided confidence interval for a binomial proportion, clamped to
/// [0, 1]. The normal method is p +- z sqrt(p(1-p)/games); Wilson is the
/// score interval. Throws std::invalid_argument when games is 0 or level is
/// outside (0, 1).
Interval confidence_interval(std::uint64_t wins, std::uint64_t games, double level,
                             CiMethod method = CiMethod::Normal);

/// Two-sided standard normal quantile for `level` (2.5758... for 0.99).
double z_for_level(double level);

struct MatchResult {
    std::uint64_t games = 0;
    std::uint64_t wins_a = 0;
    double win_rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double ci_level = 0.99;

    friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

struct MatchOptions {
    unsigned workers = 1;
    double ci_level = 0.99;
    CiMethod ci_method = CiMethod::Normal;
};

/// Plays `games` games between a and b; a is Black in the even-numbered
/// games and White in the others. Game g is seeded with derive_seed(seed, g),
/// so the result does not depend on the worker count. `games` must be even
/// and positive.
MatchResult run_match(const AgentSpec& a, const AgentSpec& b, std::uint64_t games, int size,
                      std::uint64_t seed, const MatchOptions& options = {});

struct SweepRow {
    std::uint32_t ensemble_size = 0;
    std::uint32_t per_tree_playouts = 0;
    double cp_ensemble = 0.0;
    double cp_plain = 0.0;
    MatchResult result;
};

struct SweepConfig {
    std::uint64_t total_playouts = 8192;
    std::vector<std::uint32_t> sizes{1, 2, 4, 8, 16, 32, 64};
    double cp_ensemble = 0.1;
    double cp_plain = 1.0;
    std::uint64_t games = 200;
    int board_size = 9;
    std::uint64_t seed = 42;
    CombinePolicy combine = CombinePolicy::AggregateWinrate;
    double fpu = 0.5;
    MatchOptions match;
};

/// Ensemble(cp_ensemble, n, t) against Plain(cp_plain, t) for every n in
/// config.sizes, in input order. Each row is seeded with
/// derive_seed(seed, n). `on_row` is called as rows finish.
std::vector<SweepRow> sweep_ensemble_sizes(const SweepConfig& config,
                                           const std::function<void(const SweepRow&)>& on_row = {});

/// Visits per board cell (row-major, occupied cells 0) for one engine at one cp.
struct VisitSeries {
    std::string engine;  ///< "plain" or "ensemble"
    double cp = 0.0;
    std::vector<std::uint64_t> visits;

    std::uint64_t max_visits() const;
    std::size_t visited_moves() const;
    std::uint64_t total() const;
};

/// For each cp: a plain tree with `plain_budget` playouts and the ensemble
/// described by `ensemble` (its cp replaced), both seeded with `seed`.
std::vector<VisitSeries> dump_root_visits(const Board& state, std::uint64_t plain_budget,
                                          const EnsembleConfig& ensemble,
                                          const std::vector<double>& cp_values, std::uint64_t seed);

}  // namespace hexens

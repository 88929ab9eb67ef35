#include "hexens/arena.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "hexens/parallel.hpp"

namespace hexens {

AgentSpec AgentSpec::plain(double cp, std::uint64_t playouts) {
    AgentSpec a;
    a.kind = AgentKind::PlainUCT;
    a.cp = cp;
    a.total_playouts = playouts;
    return a;
}

AgentSpec AgentSpec::ensemble(double cp, std::uint64_t playouts, std::uint32_t trees,
                              CombinePolicy combine) {
    AgentSpec a;
    a.kind = AgentKind::EnsembleUCT;
    a.cp = cp;
    a.total_playouts = playouts;
    a.n_trees = trees;
    a.combine = combine;
    return a;
}

AgentSpec AgentSpec::random() {
    AgentSpec a;
    a.kind = AgentKind::Random;
    return a;
}

void AgentSpec::validate() const {
    if (kind == AgentKind::Random) return;
    if (kind == AgentKind::PlainUCT && n_trees != 1) {
        throw std::invalid_argument("plain UCT agent must use exactly one tree");
    }
    if (!(cp >= 0.0)) throw std::invalid_argument("cp must be non-negative");
    if (n_trees < 1 || total_playouts < n_trees) {
        throw std::invalid_argument("agent needs at least one playout per tree");
    }
}

std::string describe(const AgentSpec& agent) {
    std::ostringstream out;
    switch (agent.kind) {
        case AgentKind::Random: return "random";
        case AgentKind::PlainUCT: out << "plain(cp=" << agent.cp << ", t=" << agent.total_playouts << ")"; break;
        case AgentKind::EnsembleUCT:
            out << "ensemble(cp=" << agent.cp << ", t=" << agent.total_playouts << ", n=" << agent.n_trees
                << ", " << to_string(agent.combine) << ")";
            break;
    }
    return out.str();
}

Cell choose_move(const AgentSpec& agent, const Board& board, std::uint64_t seed, unsigned workers) {
    if (agent.kind == AgentKind::Random) {
        const auto moves = board.legal_moves();
        if (moves.empty()) throw std::invalid_argument("no legal moves");
        Rng rng(derive_seed(seed, 0));
        return moves[rng.below(moves.size())];
    }
    // A plain agent is an ensemble of one tree; ensemble_search guarantees
    // that this is the same search as a single uct_search.
    EnsembleConfig config;
    config.n_trees = agent.kind == AgentKind::PlainUCT ? 1 : agent.n_trees;
    config.total_playouts = agent.total_playouts;
    config.params = SearchParams{agent.cp, seed, agent.fpu, agent.large_urgency};
    config.combine = agent.combine;
    config.workers = workers;
    return ensemble_search(board, config);
}

GameRecord play_game_record(const AgentSpec& black, const AgentSpec& white, int size,
                            std::uint64_t seed, unsigned workers) {
    black.validate();
    white.validate();
    Board board(size);
    GameRecord record;
    for (std::uint64_t move_number = 0; !board.is_terminal(); ++move_number) {
        const AgentSpec& agent = board.to_move() == Player::Black ? black : white;
        const Cell move = choose_move(agent, board, derive_seed(seed, move_number), workers);
        board.play(move);
        record.moves.push_back(move);
    }
    record.winner = *board.winner();
    return record;
}

Player play_game(const AgentSpec& black, const AgentSpec& white, int size, std::uint64_t seed) {
    return play_game_record(black, white, size, seed).winner;
}

double z_for_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must be in (0, 1)");
    const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, 0.5 + level / 2.0);
}

Interval confidence_interval(std::uint64_t wins, std::uint64_t games, double level, CiMethod method) {
    if (games == 0) throw std::invalid_argument("confidence interval needs at least one game");
    if (wins > games) throw std::invalid_argument("more wins than games");
    const double z = z_for_level(level);
    const double n = static_cast<double>(games);
    const double p = static_cast<double>(wins) / n;
    double low = 0.0;
    double high = 0.0;
    if (method == CiMethod::Normal) {
        const double half = z * std::sqrt(p * (1.0 - p) / n);
        low = p - half;
        high = p + half;
    } else {
        const double z2 = z * z;
        const double denom = 1.0 + z2 / n;
        const double centre = (p + z2 / (2.0 * n)) / denom;
        const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
        low = centre - half;
        high = centre + half;
    }
    // Rounding can push an endpoint past p by an ulp when the width is 0.
    return Interval{std::clamp(std::min(low, p), 0.0, 1.0), std::clamp(std::max(high, p), 0.0, 1.0)};
}

MatchResult run_match(const AgentSpec& a, const AgentSpec& b, std::uint64_t games, int size,
                      std::uint64_t seed, const MatchOptions& options) {
    if (games == 0 || games % 2 != 0) {
        throw std::invalid_argument("number of games must be even and positive so colors balance");
    }
    if (size < 1) throw std::invalid_argument("board size must be at least 1");
    a.validate();
    b.validate();

    std::vector<std::uint8_t> a_won(games, 0);
    parallel_for(games, options.workers, [&](std::size_t g) {
        const bool a_is_black = g % 2 == 0;
        const Player winner = a_is_black ? play_game(a, b, size, derive_seed(seed, g))
                                         : play_game(b, a, size, derive_seed(seed, g));
        a_won[g] = (winner == Player::Black) == a_is_black ? 1 : 0;
    });

    MatchResult result;
    result.games = games;
    for (const auto w : a_won) result.wins_a += w;
    result.win_rate = static_cast<double>(result.wins_a) / static_cast<double>(games);
    const Interval ci = confidence_interval(result.wins_a, games, options.ci_level, options.ci_method);
    result.ci_low = ci.low;
    result.ci_high = ci.high;
    result.ci_level = options.ci_level;
    return result;
}

std::vector<SweepRow> sweep_ensemble_sizes(const SweepConfig& config,
                                           const std::function<void(const SweepRow&)>& on_row) {
    if (config.sizes.empty()) throw std::invalid_argument("sweep needs at least one ensemble size");
    for (const auto n : config.sizes) {
        if (n < 1 || n > config.total_playouts) {
            throw std::invalid_argument("ensemble size " + std::to_string(n) +
                                        " must be between 1 and the total playouts");
        }
    }
    if (config.games == 0 || config.games % 2 != 0) {
        throw std::invalid_argument("number of games must be even and positive so colors balance");
    }

    AgentSpec plain = AgentSpec::plain(config.cp_plain, config.total_playouts);
    plain.fpu = config.fpu;

    std::vector<SweepRow> rows;
    rows.reserve(config.sizes.size());
    for (const auto n : config.sizes) {
        AgentSpec ens = AgentSpec::ensemble(config.cp_ensemble, config.total_playouts, n, config.combine);
        ens.fpu = config.fpu;
        SweepRow row;
        row.ensemble_size = n;
        row.per_tree_playouts = static_cast<std::uint32_t>(config.total_playouts / n);
        row.cp_ensemble = config.cp_ensemble;
        row.cp_plain = config.cp_plain;
        row.result = run_match(ens, plain, config.games, config.board_size, derive_seed(config.seed, n),
                               config.match);
        if (on_row) on_row(row);
        rows.push_back(row);
    }
    return rows;
}

std::uint64_t VisitSeries::max_visits() const {
    return visits.empty() ? 0 : *std::max_element(visits.begin(), visits.end());
}

std::size_t VisitSeries::visited_moves() const {
    return static_cast<std::size_t>(std::count_if(visits.begin(), visits.end(), [](auto v) { return v > 0; }));
}

std::uint64_t VisitSeries::total() const {
    std::uint64_t sum = 0;
    for (const auto v : visits) sum += v;
    return sum;
}

namespace {

VisitSeries to_series(const Board& state, std::string engine, double cp, std::span<const RootEntry> entries) {
    VisitSeries series{std::move(engine), cp, std::vector<std::uint64_t>(static_cast<std::size_t>(state.cell_count()), 0)};
    for (const RootEntry& e : entries) series.visits[static_cast<std::size_t>(state.index_of(e.move))] = e.visits;
    return series;
}

}  // namespace

std::vector<VisitSeries> dump_root_visits(const Board& state, std::uint64_t plain_budget,
                                          const EnsembleConfig& ensemble,
                                          const std::vector<double>& cp_values, std::uint64_t seed) {
    if (state.is_terminal()) throw std::invalid_argument("visit dump from a decided position");
    if (plain_budget == 0 || plain_budget > UINT32_MAX) throw std::invalid_argument("invalid plain playout budget");
    std::vector<VisitSeries> out;
    for (const double cp : cp_values) {
        SearchParams params = ensemble.params;
        params.cp = cp;
        params.seed = seed;
        const SearchTree plain = uct_search(state, static_cast<std::uint32_t>(plain_budget), params);
        out.push_back(to_series(state, "plain", cp, plain.root_statistics()));

        EnsembleConfig config = ensemble;
        config.params = params;
        const auto trees = build_ensemble(state, config);
        out.push_back(to_series(state, "ensemble", cp, aggregate_roots(trees).entries));
    }
    return out;
}

}  // namespace hexens

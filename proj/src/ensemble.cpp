#include "hexens/ensemble.hpp"

#include <map>
#include <optional>
#include <stdexcept>

#include "hexens/parallel.hpp"

namespace hexens {

std::string to_string(CombinePolicy policy) {
    switch (policy) {
        case CombinePolicy::AggregateWinrate: return "aggregate-winrate";
        case CombinePolicy::AggregateRobust: return "aggregate-robust";
        case CombinePolicy::MajorityVote: return "majority-vote";
    }
    return "unknown";
}

CombinePolicy parse_combine_policy(const std::string& text) {
    if (text == "aggregate-winrate") return CombinePolicy::AggregateWinrate;
    if (text == "aggregate-robust") return CombinePolicy::AggregateRobust;
    if (text == "majority-vote") return CombinePolicy::MajorityVote;
    throw std::invalid_argument("unknown combine policy '" + text + "'");
}

void EnsembleConfig::validate() const {
    if (n_trees < 1) throw std::invalid_argument("ensemble needs at least one tree");
    if (total_playouts < n_trees) {
        throw std::invalid_argument("total playouts must be at least the number of trees");
    }
    if (total_playouts / n_trees + 1 > UINT32_MAX) {
        throw std::invalid_argument("per-tree playout budget too large");
    }
}

std::vector<std::uint32_t> split_budget(std::uint64_t total_playouts, std::uint32_t n_trees) {
    if (n_trees == 0) throw std::invalid_argument("ensemble needs at least one tree");
    const std::uint64_t base = total_playouts / n_trees;
    const std::uint64_t extra = total_playouts % n_trees;
    std::vector<std::uint32_t> budgets(n_trees, static_cast<std::uint32_t>(base));
    for (std::uint64_t i = 0; i < extra; ++i) budgets[i] += 1;
    return budgets;
}

std::uint64_t AggregatedRoot::total_visits() const {
    std::uint64_t sum = 0;
    for (const auto& e : entries) sum += e.visits;
    return sum;
}

AggregatedRoot aggregate_roots(std::span<const SearchTree> trees) {
    if (trees.empty()) throw std::invalid_argument("aggregate_roots: no trees");
    const Board& root = trees.front().root_state();
    AggregatedRoot out;
    out.entries = trees.front().root_statistics();
    for (std::size_t t = 1; t < trees.size(); ++t) {
        if (!(trees[t].root_state() == root)) {
            throw std::invalid_argument("aggregate_roots: trees have different root positions");
        }
        const auto stats = trees[t].root_statistics();
        // Same position, so same legal moves in the same order.
        for (std::size_t i = 0; i < stats.size(); ++i) {
            out.entries[i].wins += stats[i].wins;
            out.entries[i].visits += stats[i].visits;
        }
    }
    return out;
}

Cell majority_vote(std::span<const SearchTree> trees) {
    const AggregatedRoot aggregated = aggregate_roots(trees);
    std::map<Cell, std::uint32_t> votes;
    for (const SearchTree& tree : trees) ++votes[best_move_winrate(tree)];

    std::optional<Cell> best;
    std::uint32_t best_votes = 0;
    std::uint64_t best_visits = 0;
    // Row-major scan so the lower index wins remaining ties.
    for (const RootEntry& e : aggregated.entries) {
        const auto it = votes.find(e.move);
        if (it == votes.end()) continue;
        if (!best || it->second > best_votes || (it->second == best_votes && e.visits > best_visits)) {
            best = e.move;
            best_votes = it->second;
            best_visits = e.visits;
        }
    }
    return *best;
}

std::vector<SearchTree> build_ensemble(const Board& state, const EnsembleConfig& config) {
    config.validate();
    if (state.is_terminal()) throw std::invalid_argument("ensemble search from a decided position");
    const auto budgets = split_budget(config.total_playouts, config.n_trees);

    std::vector<std::optional<SearchTree>> slots(config.n_trees);
    parallel_for(config.n_trees, config.workers, [&](std::size_t i) {
        slots[i] = uct_search(state, budgets[i], config.params, i);
    });
    std::vector<SearchTree> trees;
    trees.reserve(slots.size());
    for (auto& slot : slots) trees.push_back(std::move(*slot));
    return trees;
}

Cell combine_trees(std::span<const SearchTree> trees, CombinePolicy policy) {
    switch (policy) {
        case CombinePolicy::AggregateWinrate:
            return best_by_winrate(aggregate_roots(trees).entries);
        case CombinePolicy::AggregateRobust:
            return best_by_visits(aggregate_roots(trees).entries);
        case CombinePolicy::MajorityVote:
            return majority_vote(trees);
    }
    throw std::invalid_argument("unknown combine policy");
}

Cell ensemble_search(const Board& state, const EnsembleConfig& config) {
    const auto trees = build_ensemble(state, config);
    return combine_trees(trees, config.combine);
}

}  // namespace hexens

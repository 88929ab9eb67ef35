#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hexens/hex.hpp"
#include "hexens/uct.hpp"

namespace hexens {

enum class CombinePolicy {
    AggregateWinrate,  ///< argmax of summed wins / summed visits
    AggregateRobust,   ///< argmax of summed visits
    MajorityVote,      ///< plurality of each tree's win-rate choice
};

std::string to_string(CombinePolicy policy);
/// Accepts "aggregate-winrate", "aggregate-robust" and "majority-vote".
CombinePolicy parse_combine_policy(const std::string& text);

struct EnsembleConfig {
    std::uint32_t n_trees = 1;
    std::uint64_t total_playouts = 1;
    SearchParams params;
    CombinePolicy combine = CombinePolicy::AggregateWinrate;
    /// Threads used to build the trees. Has no effect on the result.
    unsigned workers = 1;

    /// Throws std::invalid_argument unless 1 <= n_trees <= total_playouts.
    void validate() const;
};

/// Per-tree playout budgets: floor(t / n) each, with the first t mod n trees
/// getting one extra playout.
std::vector<std::uint32_t> split_budget(std::uint64_t total_playouts, std::uint32_t n_trees);

/// Root statistics summed over trees, one entry per legal root move in
/// row-major order.
struct AggregatedRoot {
    std::vector<RootEntry> entries;

    std::uint64_t total_visits() const;
};

/// Throws std::invalid_argument if the trees do not share a root position
/// or the sequence is empty.
AggregatedRoot aggregate_roots(std::span<const SearchTree> trees);

/// Each tree votes for its best_move_winrate; the move with most votes wins,
/// ties going to higher aggregated visits, then to the lower row-major index.
Cell majority_vote(std::span<const SearchTree> trees);

/// Builds the config.n_trees independent trees. Tree i searches with its
/// share of the budget and random stream (config.params.seed, i).
std::vector<SearchTree> build_ensemble(const Board& state, const EnsembleConfig& config);

/// Combines finished trees according to `policy`.
Cell combine_trees(std::span<const SearchTree> trees, CombinePolicy policy);

/// Ensemble UCT move choice. With n_trees = 1 this is exactly
/// best_move_winrate(uct_search(state, t, params)) (for the win-rate policy).
Cell ensemble_search(const Board& state, const EnsembleConfig& config);

}  // namespace hexens

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hexens/hex.hpp"
#include "hexens/rng.hpp"

namespace hexens {

/// Raised when an operation is called outside its documented preconditions
/// (selecting from a node without moves, expanding a fully expanded node...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct SearchParams {
    /// Exploration constant. 0 disables the exploration term entirely.
    double cp = 1.0;
    /// Master seed. A tree draws from stream (seed, tree index).
    std::uint64_t seed = 0;
    /// Mean value assumed for a move that was never visited.
    double fpu = 0.5;
    /// Stands in for the infinite exploration bonus of an unvisited move.
    double large_urgency = 1e6;
};

/// Selection value of a child: wins/visits + cp * sqrt(ln(parent_visits) / visits).
/// A child with zero visits scores fpu + cp * large_urgency. Throws
/// ContractViolation when parent_visits is 0 for a visited child.
double uct_value(double wins, std::uint32_t visits, std::uint32_t parent_visits,
                 const SearchParams& params);

/// Value every untried move gets during selection.
inline double unvisited_value(const SearchParams& params) {
    return params.fpu + params.cp * params.large_urgency;
}

using NodeId = std::uint32_t;
inline constexpr int kNoMove = -1;

/// One node of a search tree. Nodes live in a flat arena owned by their
/// SearchTree and refer to their children by NodeId.
///
/// `wins` counts playouts won by `player_just_moved`, the player whose move
/// led here, so a parent picks the child that is best for the player on turn
/// at the parent.
struct SearchNode {
    int move = kNoMove;  ///< Cell index of the move leading here; kNoMove at the root.
    Player player_just_moved = Player::White;
    double wins = 0.0;
    std::uint32_t visits = 0;
    std::vector<std::uint16_t> untried;
    std::vector<NodeId> children;
};

/// Outcome of select_child: descend into an existing child, or expand one of
/// the untried moves.
struct Selection {
    bool expand = false;
    NodeId child = 0;
};

/// UCT selection at `node`. Children are scored with uct_value and every
/// untried move with unvisited_value; the maximum wins and exact ties are
/// broken uniformly at random (each untried move counting as one candidate).
Selection select_child(std::span<const SearchNode> nodes, NodeId node, const SearchParams& params,
                       Rng& rng);

/// Removes a uniformly random move from `nodes[parent].untried`, plays it on
/// `board` (which must be the parent's position) and appends the child. The
/// child's untried list holds the legal moves of the new position, or none
/// when the move ended the game.
NodeId expand(std::vector<SearchNode>& nodes, NodeId parent, Board& board, Rng& rng);

/// Adds one visit to every node on `path` and one win to those whose
/// player_just_moved is `winner`.
void backup(std::vector<SearchNode>& nodes, std::span<const NodeId> path, Player winner);

struct RootEntry {
    Cell move;
    double wins = 0.0;
    std::uint32_t visits = 0;

    friend bool operator==(const RootEntry&, const RootEntry&) = default;
};

/// A single UCT tree rooted at a fixed position.
class SearchTree {
public:
    /// Throws std::invalid_argument if `root_state` is already decided.
    SearchTree(Board root_state, SearchParams params, std::uint64_t stream = 0);

    /// Runs `iterations` rounds of select, expand, playout and backup.
    void run(std::uint32_t iterations);

    const Board& root_state() const noexcept { return root_state_; }
    const SearchParams& params() const noexcept { return params_; }
    const SearchNode& root() const noexcept { return nodes_.front(); }
    const SearchNode& node(NodeId id) const { return nodes_.at(id); }
    std::span<const SearchNode> nodes() const noexcept { return nodes_; }
    std::uint32_t playouts_done() const noexcept { return playouts_; }

    /// One entry per legal root move in row-major order; moves that were
    /// never expanded report zero wins and visits.
    std::vector<RootEntry> root_statistics() const;

private:
    Board root_state_;
    SearchParams params_;
    Rng rng_;
    std::vector<SearchNode> nodes_;
    std::uint32_t playouts_ = 0;
    // Reused across iterations.
    Board scratch_;
    std::vector<NodeId> path_;
};

/// Builds a tree from `state` with exactly `m` iterations. The tree draws
/// from random stream (params.seed, stream). Throws std::invalid_argument
/// when m is 0 or the state is decided.
SearchTree uct_search(const Board& state, std::uint32_t m, const SearchParams& params,
                      std::uint64_t stream = 0);

/// Root child with the highest wins/visits; ties go to more visits, then to
/// the lower row-major index. Throws ContractViolation if no child was visited.
Cell best_move_winrate(const SearchTree& tree);

/// Root child with the most visits; ties go to the higher win rate, then to
/// the lower row-major index.
Cell best_move_robust(const SearchTree& tree);

/// Selection over already collected root statistics (shared with the
/// ensemble, which sums statistics before choosing).
Cell best_by_winrate(std::span<const RootEntry> entries);
Cell best_by_visits(std::span<const RootEntry> entries);

}  // namespace hexens

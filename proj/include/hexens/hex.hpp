#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexens/rng.hpp"

namespace hexens {

enum class Player : std::uint8_t { Black, White };

constexpr Player opponent(Player p) noexcept {
    return p == Player::Black ? Player::White : Player::Black;
}

std::string to_string(Player p);

enum class Stone : std::uint8_t { Empty, Black, White };

constexpr Stone stone_of(Player p) noexcept {
    return p == Player::Black ? Stone::Black : Stone::White;
}

struct Cell {
    int row = 0;
    int col = 0;

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// A move on a board that is occupied.
class IllegalMoveError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A move made by the player who is not on turn.
class TurnOrderError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Union-find over a fixed universe {0, ..., n-1}: union by rank with path
/// compression. Element indices outside the universe throw
/// std::invalid_argument.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t count = 0);

    std::size_t size() const noexcept { return parent_.size(); }

    /// Representative of `a`, compressing the path to it.
    std::size_t find(std::size_t a);

    /// Representative of `a` without modifying the structure. Safe to call
    /// concurrently on a shared instance.
    std::size_t root(std::size_t a) const;

    /// Merges the sets of `a` and `b`. Returns false if they were already joined.
    bool unite(std::size_t a, std::size_t b);

    bool connected(std::size_t a, std::size_t b) const { return root(a) == root(b); }

    friend bool operator==(const DisjointSet&, const DisjointSet&) = default;

private:
    void check(std::size_t a) const {
        if (a >= parent_.size()) throw_out_of_universe(a);
    }
    [[noreturn]] void throw_out_of_universe(std::size_t a) const;

    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
};

/// Hex position on a size x size rhombus.
///
/// Black connects the top row to the bottom row, White the left column to
/// the right column. Black moves first and there is no swap rule. Cell
/// (r, c) touches (r-1, c), (r-1, c+1), (r, c-1), (r, c+1), (r+1, c-1) and
/// (r+1, c).
///
/// Stones are tracked in a DisjointSet over size^2 + 4 elements: one per
/// cell plus one virtual node per board edge, so the winner is known after
/// each move in O(alpha(n)) time.
/// Precomputed adjacency of one board size, shared by all boards of that size.
struct HexGeometry {
    int size = 0;
    /// neighbors[6 * i + k] for k < degree[i] are the cells touching cell i.
    std::vector<std::uint16_t> neighbors;
    std::vector<std::uint8_t> degree;

    /// Boards of up to 128 cells also get bit masks for a bit-parallel flood fill.
    using Bits = unsigned __int128;
    bool has_bits = false;
    Bits all = 0;
    Bits first_row = 0;
    Bits last_row = 0;
    Bits first_col = 0;
    Bits last_col = 0;

    static const HexGeometry& of(int size);
};

class Board {
public:
    explicit Board(int size);

    int size() const noexcept { return size_; }
    int cell_count() const noexcept { return size_ * size_; }
    Player to_move() const noexcept { return to_move_; }
    int moves_played() const noexcept { return moves_played_; }

    bool contains(Cell c) const noexcept {
        return c.row >= 0 && c.row < size_ && c.col >= 0 && c.col < size_;
    }
    int index_of(Cell c) const noexcept { return c.row * size_ + c.col; }
    Cell cell_at(int index) const noexcept { return {index / size_, index % size_}; }

    Stone at(Cell c) const;
    Stone at_index(int index) const { return cells_.at(static_cast<std::size_t>(index)); }

    /// Places a stone for `player` on `c`. Throws std::invalid_argument when
    /// `c` is off the board, IllegalMoveError when it is occupied and
    /// TurnOrderError when `player` is not on turn. Stones may still be added
    /// after the game is decided (to fill a board); the winner does not change.
    void play(Cell c, Player player);
    void play(Cell c) { play(c, to_move_); }
    void play_index(int index) { play(cell_at(index), to_move_); }

    /// Value-returning form of play().
    Board with_move(Cell c, Player player) const;

    /// Empty cells in row-major order, whether or not the game is decided.
    std::vector<Cell> legal_moves() const;
    /// Indices of the empty cells in row-major order.
    std::vector<std::uint16_t> empty_indices() const;

    std::optional<Player> winner() const noexcept { return winner_; }
    bool is_terminal() const noexcept { return winner_.has_value(); }

    /// Finishes the game with uniformly random moves by alternating players
    /// and returns the winner. The board itself is left untouched.
    ///
    /// The empty cells are filled in one random permutation, the first one
    /// going to the player on turn. A decided game stays decided and a full
    /// board always has exactly one winner, so the winner of the full board
    /// equals the winner at the first moment one side connected.
    Player random_playout(Rng& rng) const;

    const DisjointSet& connectivity() const noexcept { return dsu_; }

    std::size_t black_top() const noexcept { return static_cast<std::size_t>(cell_count()); }
    std::size_t black_bottom() const noexcept { return black_top() + 1; }
    std::size_t white_left() const noexcept { return black_top() + 2; }
    std::size_t white_right() const noexcept { return black_top() + 3; }

    /// Same stones and same player on turn.
    friend bool operator==(const Board& a, const Board& b) {
        return a.size_ == b.size_ && a.to_move_ == b.to_move_ && a.cells_ == b.cells_;
    }

private:
    const HexGeometry* geometry_;
    int size_;
    std::vector<Stone> cells_;
    DisjointSet dsu_;
    Player to_move_ = Player::Black;
    int moves_played_ = 0;
    std::optional<Player> winner_;
};

std::string to_string(const Board& board);

/// Plays `plies` uniformly random moves from the empty board, skipping any
/// move that would end the game. Used to produce reproducible mid-game
/// positions.
Board random_opening(int size, int plies, std::uint64_t seed);

}  // namespace hexens

#include "hexens/hex.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <mutex>
#include <sstream>

namespace hexens {

std::string to_string(Player p) { return p == Player::Black ? "black" : "white"; }

// ---------------------------------------------------------------------------
// DisjointSet

DisjointSet::DisjointSet(std::size_t count) : parent_(count), rank_(count, 0) {
    for (std::size_t i = 0; i < count; ++i) parent_[i] = static_cast<std::uint32_t>(i);
}

void DisjointSet::throw_out_of_universe(std::size_t a) const {
    throw std::invalid_argument("disjoint set element " + std::to_string(a) +
                                " outside universe of " + std::to_string(parent_.size()));
}

std::size_t DisjointSet::find(std::size_t a) {
    check(a);
    std::size_t top = a;
    while (parent_[top] != top) top = parent_[top];
    while (parent_[a] != top) {
        const std::size_t next = parent_[a];
        parent_[a] = static_cast<std::uint32_t>(top);
        a = next;
    }
    return top;
}

std::size_t DisjointSet::root(std::size_t a) const {
    check(a);
    while (parent_[a] != a) a = parent_[a];
    return a;
}

bool DisjointSet::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = static_cast<std::uint32_t>(a);
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
}

// ---------------------------------------------------------------------------
// Board

namespace {

constexpr int kNeighborOffsets[6][2] = {{-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}};
constexpr int kMaxSize = 255;

HexGeometry make_geometry(int size) {
    HexGeometry g;
    g.size = size;
    const auto cells = static_cast<std::size_t>(size) * size;
    g.neighbors.assign(6 * cells, 0);
    g.degree.assign(cells, 0);
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            const auto i = static_cast<std::size_t>(r * size + c);
            for (const auto& d : kNeighborOffsets) {
                const int nr = r + d[0];
                const int nc = c + d[1];
                if (nr >= 0 && nr < size && nc >= 0 && nc < size) {
                    g.neighbors[6 * i + g.degree[i]++] = static_cast<std::uint16_t>(nr * size + nc);
                }
            }
        }
    }
    g.has_bits = cells <= 128;
    if (g.has_bits) {
        using Bits = HexGeometry::Bits;
        for (int r = 0; r < size; ++r) {
            for (int c = 0; c < size; ++c) {
                const Bits bit = Bits{1} << (r * size + c);
                g.all |= bit;
                if (r == 0) g.first_row |= bit;
                if (r == size - 1) g.last_row |= bit;
                if (c == 0) g.first_col |= bit;
                if (c == size - 1) g.last_col |= bit;
            }
        }
    }
    return g;
}

bool black_connects(const HexGeometry& g, HexGeometry::Bits black) {
    const int n = g.size;
    HexGeometry::Bits reached = black & g.first_row;
    for (;;) {
        const HexGeometry::Bits left_ok = reached & ~g.first_col;
        const HexGeometry::Bits right_ok = reached & ~g.last_col;
        const HexGeometry::Bits grown =
            (reached | (reached >> n) | (right_ok >> (n - 1)) | (left_ok >> 1) | (right_ok << 1) |
             (left_ok << (n - 1)) | (reached << n)) &
            black;
        if (grown == reached) return (reached & g.last_row) != 0;
        reached = grown;
    }
}

}  // namespace

const HexGeometry& HexGeometry::of(int size) {
    if (size < 1 || size > kMaxSize) {
        throw std::invalid_argument("board size must be between 1 and " + std::to_string(kMaxSize));
    }
    static std::mutex mutex;
    static std::array<std::unique_ptr<const HexGeometry>, kMaxSize + 1> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[static_cast<std::size_t>(size)];
    if (!slot) slot = std::make_unique<const HexGeometry>(make_geometry(size));
    return *slot;
}

Board::Board(int size) : geometry_(&HexGeometry::of(size)), size_(size) {
    cells_.assign(static_cast<std::size_t>(size) * size, Stone::Empty);
    dsu_ = DisjointSet(cells_.size() + 4);
}

Stone Board::at(Cell c) const {
    if (!contains(c)) throw std::invalid_argument("cell outside the board");
    return cells_[static_cast<std::size_t>(index_of(c))];
}

void Board::play(Cell c, Player player) {
    if (!contains(c)) {
        throw std::invalid_argument("cell (" + std::to_string(c.row) + "," +
                                    std::to_string(c.col) + ") outside the board");
    }
    const int index = index_of(c);
    if (cells_[static_cast<std::size_t>(index)] != Stone::Empty) {
        throw IllegalMoveError("cell (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                               ") is occupied");
    }
    if (player != to_move_) throw TurnOrderError(to_string(player) + " is not on turn");

    const Stone stone = stone_of(player);
    cells_[static_cast<std::size_t>(index)] = stone;
    const auto u = static_cast<std::size_t>(index);
    const std::uint16_t* nb = &geometry_->neighbors[6 * u];
    for (std::uint8_t k = 0; k < geometry_->degree[u]; ++k) {
        if (cells_[nb[k]] == stone) dsu_.unite(u, nb[k]);
    }
    if (player == Player::Black) {
        if (c.row == 0) dsu_.unite(u, black_top());
        if (c.row == size_ - 1) dsu_.unite(u, black_bottom());
        if (!winner_ && dsu_.connected(black_top(), black_bottom())) winner_ = Player::Black;
    } else {
        if (c.col == 0) dsu_.unite(u, white_left());
        if (c.col == size_ - 1) dsu_.unite(u, white_right());
        if (!winner_ && dsu_.connected(white_left(), white_right())) winner_ = Player::White;
    }
    to_move_ = opponent(to_move_);
    ++moves_played_;
}

Board Board::with_move(Cell c, Player player) const {
    Board next = *this;
    next.play(c, player);
    return next;
}

std::vector<Cell> Board::legal_moves() const {
    std::vector<Cell> moves;
    moves.reserve(cells_.size() - static_cast<std::size_t>(moves_played_));
    for (int i = 0; i < cell_count(); ++i) {
        if (cells_[static_cast<std::size_t>(i)] == Stone::Empty) moves.push_back(cell_at(i));
    }
    return moves;
}

std::vector<std::uint16_t> Board::empty_indices() const {
    std::vector<std::uint16_t> out;
    out.reserve(cells_.size() - static_cast<std::size_t>(moves_played_));
    for (int i = 0; i < cell_count(); ++i) {
        if (cells_[static_cast<std::size_t>(i)] == Stone::Empty) out.push_back(static_cast<std::uint16_t>(i));
    }
    return out;
}

namespace {

struct PlayoutScratch {
    std::vector<std::uint16_t> order;
    std::vector<Stone> cells;
    std::vector<std::uint16_t> stack;
    std::vector<std::uint8_t> seen;
};

}  // namespace

Player Board::random_playout(Rng& rng) const {
    if (winner_) return *winner_;

    thread_local PlayoutScratch scratch;
    auto& order = scratch.order;
    order.clear();
    for (int i = 0; i < cell_count(); ++i) {
        if (cells_[static_cast<std::size_t>(i)] == Stone::Empty) order.push_back(static_cast<std::uint16_t>(i));
    }
    // The player on turn makes moves 0, 2, 4, ... of the random continuation,
    // i.e. ceil(n / 2) of them. Which cells those are is a uniformly random
    // subset, drawn with a partial Fisher-Yates shuffle.
    const std::size_t n = order.size();
    const std::size_t mine = (n + 1) / 2;
    for (std::size_t i = 0; i < mine; ++i) {
        std::swap(order[i], order[i + rng.below(n - i)]);
    }
    const Stone own = stone_of(to_move_);

    if (geometry_->has_bits) {
        // Full board has exactly one winner: Black iff its stones link top to bottom.
        using Bits = HexGeometry::Bits;
        Bits black = 0;
        for (int i = 0; i < cell_count(); ++i) {
            if (cells_[static_cast<std::size_t>(i)] == Stone::Black) black |= Bits{1} << i;
        }
        Bits mine_bits = 0;
        for (std::size_t k = 0; k < mine; ++k) mine_bits |= Bits{1} << order[k];
        if (own == Stone::Black) {
            black |= mine_bits;
        } else {
            for (std::size_t k = mine; k < n; ++k) black |= Bits{1} << order[k];
        }
        return black_connects(*geometry_, black) ? Player::Black : Player::White;
    }

    auto& cells = scratch.cells;
    cells = cells_;
    const Stone other = stone_of(opponent(to_move_));
    for (std::size_t k = 0; k < n; ++k) cells[order[k]] = k < mine ? own : other;

    auto& seen = scratch.seen;
    seen.assign(cells.size(), 0);
    auto& stack = scratch.stack;
    stack.clear();
    for (int c = 0; c < size_; ++c) {
        if (cells[static_cast<std::size_t>(c)] == Stone::Black) {
            seen[static_cast<std::size_t>(c)] = 1;
            stack.push_back(static_cast<std::uint16_t>(c));
        }
    }
    const int last_row_start = (size_ - 1) * size_;
    while (!stack.empty()) {
        const std::uint16_t u = stack.back();
        stack.pop_back();
        if (u >= last_row_start) return Player::Black;
        const std::uint16_t* nb = &geometry_->neighbors[6 * static_cast<std::size_t>(u)];
        for (std::uint8_t k = 0; k < geometry_->degree[u]; ++k) {
            const std::uint16_t v = nb[k];
            if (!seen[v] && cells[v] == Stone::Black) {
                seen[v] = 1;
                stack.push_back(v);
            }
        }
    }
    return Player::White;
}

std::string to_string(const Board& board) {
    std::ostringstream out;
    for (int r = 0; r < board.size(); ++r) {
        out << std::string(static_cast<std::size_t>(r), ' ');
        for (int c = 0; c < board.size(); ++c) {
            const Stone s = board.at({r, c});
            out << (s == Stone::Empty ? '.' : s == Stone::Black ? 'B' : 'W');
            if (c + 1 < board.size()) out << ' ';
        }
        out << '\n';
    }
    return out.str();
}

Board random_opening(int size, int plies, std::uint64_t seed) {
    Board board(size);
    Rng rng(seed);
    for (int ply = 0; ply < plies; ++ply) {
        auto moves = board.empty_indices();
        bool placed = false;
        while (!moves.empty() && !placed) {
            const auto pick = rng.below(moves.size());
            Board next = board;
            next.play_index(moves[pick]);
            if (!next.is_terminal()) {
                board = std::move(next);
                placed = true;
            } else {
                moves.erase(moves.begin() + static_cast<std::ptrdiff_t>(pick));
            }
        }
        if (!placed) break;
    }
    return board;
}

}  // namespace hexens

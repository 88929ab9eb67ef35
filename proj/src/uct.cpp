#include "hexens/uct.hpp"

#include <cmath>
#include <limits>

namespace hexens {

double uct_value(double wins, std::uint32_t visits, std::uint32_t parent_visits,
                 const SearchParams& params) {
    if (visits == 0) return unvisited_value(params);
    if (parent_visits == 0) throw ContractViolation("uct_value: parent has no visits");
    const double mean = wins / visits;
    return mean + params.cp * std::sqrt(std::log(static_cast<double>(parent_visits)) / visits);
}

Selection select_child(std::span<const SearchNode> nodes, NodeId node, const SearchParams& params,
                       Rng& rng) {
    const SearchNode& parent = nodes[node];
    if (parent.children.empty() && parent.untried.empty()) {
        throw ContractViolation("select_child: node has no moves");
    }
    Selection best;
    double best_value = -std::numeric_limits<double>::infinity();
    std::uint64_t tied = 0;  // candidates sharing best_value

    auto offer = [&](double value, std::uint64_t weight, Selection candidate) {
        if (value > best_value) {
            best_value = value;
            best = candidate;
            tied = weight;
        } else if (value == best_value) {
            tied += weight;
            if (rng.below(tied) < weight) best = candidate;
        }
    };

    if (!parent.untried.empty()) {
        offer(unvisited_value(params), parent.untried.size(), Selection{true, 0});
    }
    if (!parent.children.empty()) {
        if (parent.visits == 0) throw ContractViolation("select_child: parent has no visits");
        // Same arithmetic as uct_value with ln(n) hoisted out of the loop.
        const double log_parent = std::log(static_cast<double>(parent.visits));
        for (const NodeId id : parent.children) {
            const SearchNode& child = nodes[id];
            const double value = child.visits == 0
                                     ? unvisited_value(params)
                                     : child.wins / child.visits +
                                           params.cp * std::sqrt(log_parent / child.visits);
            offer(value, 1, Selection{false, id});
        }
    }
    return best;
}

NodeId expand(std::vector<SearchNode>& nodes, NodeId parent, Board& board, Rng& rng) {
    auto& untried = nodes[parent].untried;
    if (untried.empty()) throw ContractViolation("expand: node is fully expanded");
    if (board.is_terminal()) throw ContractViolation("expand: position is decided");

    const auto pick = rng.below(untried.size());
    const std::uint16_t move = untried[pick];
    untried[pick] = untried.back();
    untried.pop_back();

    SearchNode child;
    child.move = move;
    child.player_just_moved = board.to_move();
    board.play_index(move);
    if (!board.is_terminal()) child.untried = board.empty_indices();

    const auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back(std::move(child));
    nodes[parent].children.push_back(id);
    return id;
}

void backup(std::vector<SearchNode>& nodes, std::span<const NodeId> path, Player winner) {
    for (const NodeId id : path) {
        SearchNode& n = nodes[id];
        n.visits += 1;
        if (n.player_just_moved == winner) n.wins += 1.0;
    }
}

// ---------------------------------------------------------------------------
// SearchTree

SearchTree::SearchTree(Board root_state, SearchParams params, std::uint64_t stream)
    : root_state_(std::move(root_state)),
      params_(params),
      rng_(derive_seed(params.seed, stream)),
      scratch_(root_state_) {
    if (root_state_.is_terminal()) throw std::invalid_argument("search root is a decided position");
    if (!(params_.cp >= 0.0)) throw std::invalid_argument("cp must be non-negative");
    SearchNode root;
    root.player_just_moved = opponent(root_state_.to_move());
    root.untried = root_state_.empty_indices();
    nodes_.push_back(std::move(root));
}

void SearchTree::run(std::uint32_t iterations) {
    for (std::uint32_t i = 0; i < iterations; ++i) {
        scratch_ = root_state_;
        path_.clear();
        NodeId current = 0;
        path_.push_back(current);
        while (!scratch_.is_terminal()) {
            const Selection sel = select_child(nodes_, current, params_, rng_);
            if (sel.expand) {
                current = expand(nodes_, current, scratch_, rng_);
                path_.push_back(current);
                break;
            }
            current = sel.child;
            scratch_.play_index(nodes_[current].move);
            path_.push_back(current);
        }
        const Player winner = scratch_.random_playout(rng_);
        backup(nodes_, path_, winner);
        ++playouts_;
    }
}

std::vector<RootEntry> SearchTree::root_statistics() const {
    const int cells = root_state_.cell_count();
    std::vector<int> slot(static_cast<std::size_t>(cells), -1);
    std::vector<RootEntry> entries;
    for (int i = 0; i < cells; ++i) {
        if (root_state_.at_index(i) == Stone::Empty) {
            slot[static_cast<std::size_t>(i)] = static_cast<int>(entries.size());
            entries.push_back(RootEntry{root_state_.cell_at(i), 0.0, 0});
        }
    }
    for (const NodeId id : root().children) {
        const SearchNode& child = nodes_[id];
        RootEntry& e = entries[static_cast<std::size_t>(slot[static_cast<std::size_t>(child.move)])];
        e.wins = child.wins;
        e.visits = child.visits;
    }
    return entries;
}

SearchTree uct_search(const Board& state, std::uint32_t m, const SearchParams& params,
                      std::uint64_t stream) {
    if (m == 0) throw std::invalid_argument("uct_search needs at least one playout");
    SearchTree tree(state, params, stream);
    tree.run(m);
    return tree;
}

// ---------------------------------------------------------------------------
// Final move choice

Cell best_by_winrate(std::span<const RootEntry> entries) {
    const RootEntry* best = nullptr;
    double best_rate = 0.0;
    for (const RootEntry& e : entries) {
        if (e.visits == 0) continue;
        const double rate = e.wins / e.visits;
        // Entries arrive in row-major order, so strict comparisons keep the
        // lower index on a full tie.
        if (best == nullptr || rate > best_rate || (rate == best_rate && e.visits > best->visits)) {
            best = &e;
            best_rate = rate;
        }
    }
    if (best == nullptr) throw ContractViolation("no visited root move to choose from");
    return best->move;
}

Cell best_by_visits(std::span<const RootEntry> entries) {
    const RootEntry* best = nullptr;
    double best_rate = 0.0;
    for (const RootEntry& e : entries) {
        if (e.visits == 0) continue;
        const double rate = e.wins / e.visits;
        if (best == nullptr || e.visits > best->visits || (e.visits == best->visits && rate > best_rate)) {
            best = &e;
            best_rate = rate;
        }
    }
    if (best == nullptr) throw ContractViolation("no visited root move to choose from");
    return best->move;
}

Cell best_move_winrate(const SearchTree& tree) { return best_by_winrate(tree.root_statistics()); }

Cell best_move_robust(const SearchTree& tree) { return best_by_visits(tree.root_statistics()); }

}  // namespace hexens

#include "doctest.h"

#include <map>
#include <random>

#include "hexens/uct.hpp"
#include "oracles.hpp"

using namespace hexens;

namespace {

SearchNode make_node(double wins, std::uint32_t visits, int move = kNoMove) {
    SearchNode n;
    n.move = move;
    n.wins = wins;
    n.visits = visits;
    return n;
}

// Checks the structural invariants of every node reachable from the root.
void check_tree(const SearchTree& tree, std::uint32_t m) {
    REQUIRE(tree.root().visits == m);
    REQUIRE(tree.playouts_done() == m);
    const auto nodes = tree.nodes();
    std::vector<Board> positions(nodes.size(), tree.root_state());
    for (std::size_t id = 0; id < nodes.size(); ++id) {
        const SearchNode& n = nodes[id];
        REQUIRE(n.wins >= 0.0);
        REQUIRE(n.wins <= n.visits);
        std::uint64_t child_visits = 0;
        for (const NodeId c : n.children) {
            child_visits += nodes[c].visits;
            positions[c] = positions[id];
            positions[c].play_index(nodes[c].move);
            REQUIRE(nodes[c].player_just_moved == positions[id].to_move());
        }
        REQUIRE(n.visits >= child_visits);
        if (positions[id].is_terminal()) {
            REQUIRE(n.children.empty());
            REQUIRE(n.untried.empty());
        } else {
            REQUIRE(n.children.size() + n.untried.size() == positions[id].legal_moves().size());
            // One visit for the playout made when the node was created.
            REQUIRE(n.visits == child_visits + (id == 0 ? 0 : 1));
        }
    }
}

}  // namespace

TEST_CASE("uct_value") {
    const SearchParams p1{1.0, 0, 0.5, 1e6};
    CHECK(uct_value(10, 20, 100, p1) == doctest::Approx(0.9798525912188081).epsilon(1e-12));
    CHECK(uct_value(10, 20, 100, p1) == doctest::Approx(oracle::uct_formula(10, 20, 100, 1.0)).epsilon(1e-12));

    const SearchParams greedy{0.0, 0, 0.5, 1e6};
    CHECK(uct_value(3, 7, 50, greedy) == 3.0 / 7.0);
    CHECK(uct_value(0, 1, 1, greedy) == 0.0);

    CHECK(uct_value(0, 0, 100, p1) == 0.5 + 1e6);
    CHECK(uct_value(0, 0, 0, greedy) == 0.5);
    CHECK_THROWS_AS(uct_value(1, 1, 0, p1), ContractViolation);
}

TEST_CASE("uct_value matches the independent formula on a grid") {
    std::mt19937_64 gen(1);
    const SearchParams base;
    for (int i = 0; i < 2000; ++i) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(gen() % 100000);
        const std::uint32_t nj = 1 + static_cast<std::uint32_t>(gen() % n);
        const double w = static_cast<double>(gen() % (nj + 1));
        SearchParams p = base;
        p.cp = static_cast<double>(gen() % 3001) / 1000.0;
        REQUIRE(std::abs(uct_value(w, nj, n, p) - oracle::uct_formula(w, nj, n, p.cp)) <= 1e-12);
    }
}

TEST_CASE("select_child") {
    Rng rng(3);
    SUBCASE("greedy picks the best mean over fpu") {
        std::vector<SearchNode> nodes{make_node(0, 15), make_node(3, 4, 1), make_node(5, 10, 2)};
        nodes[0].children = {1, 2};
        nodes[0].untried = {7};
        const Selection s = select_child(nodes, 0, SearchParams{0.0}, rng);
        CHECK_FALSE(s.expand);
        CHECK(s.child == 1);
    }
    SUBCASE("untried move beats visited children when cp > 0") {
        std::vector<SearchNode> nodes{make_node(0, 15), make_node(14, 14, 1)};
        nodes[0].children = {1};
        nodes[0].untried = {2};
        CHECK(select_child(nodes, 0, SearchParams{1.0}, rng).expand);
    }
    SUBCASE("zero-visit child node counts as unvisited") {
        std::vector<SearchNode> nodes{make_node(0, 15), make_node(14, 14, 1), make_node(0, 0, 2)};
        nodes[0].children = {1, 2};
        const Selection s = select_child(nodes, 0, SearchParams{1.0}, rng);
        CHECK(s.child == 2);
    }
    SUBCASE("identical children are chosen uniformly") {
        std::vector<SearchNode> nodes{make_node(0, 40)};
        for (int i = 0; i < 4; ++i) {
            nodes.push_back(make_node(5, 10, i));
            nodes[0].children.push_back(static_cast<NodeId>(i + 1));
        }
        std::map<NodeId, int> counts;
        for (int i = 0; i < 8000; ++i) ++counts[select_child(nodes, 0, SearchParams{1.0}, rng).child];
        REQUIRE(counts.size() == 4);
        for (const auto& [id, c] : counts) CHECK(std::abs(c - 2000) < 200);
    }
    SUBCASE("ties between a child and untried moves weight each untried move") {
        // Greedy, child mean 0.5 == fpu: 1 child vs 3 untried -> child 1/4 of the time.
        std::vector<SearchNode> nodes{make_node(0, 4), make_node(2, 4, 0)};
        nodes[0].children = {1};
        nodes[0].untried = {1, 2, 3};
        int child = 0;
        for (int i = 0; i < 8000; ++i) child += !select_child(nodes, 0, SearchParams{0.0}, rng).expand;
        CHECK(std::abs(child - 2000) < 200);
    }
    SUBCASE("node without moves") {
        std::vector<SearchNode> nodes{make_node(0, 1)};
        CHECK_THROWS_AS(select_child(nodes, 0, SearchParams{}, rng), ContractViolation);
    }
}

TEST_CASE("expand") {
    Rng rng(9);
    Board board(3);
    std::vector<SearchNode> nodes(1);
    nodes[0].player_just_moved = Player::White;
    nodes[0].untried = board.empty_indices();
    const NodeId c = expand(nodes, 0, board, rng);
    CHECK(nodes[0].untried.size() == 8);
    CHECK(nodes[0].children.size() == 1);
    CHECK(nodes[c].visits == 0);
    CHECK(nodes[c].wins == 0.0);
    CHECK(nodes[c].player_just_moved == Player::Black);
    CHECK(board.moves_played() == 1);
    CHECK(board.at_index(nodes[c].move) == Stone::Black);
    CHECK(nodes[c].untried.size() == 8);

    SUBCASE("last untried move") {
        Board one(1);
        std::vector<SearchNode> ns(1);
        ns[0].untried = one.empty_indices();
        const NodeId leaf = expand(ns, 0, one, rng);
        CHECK(ns[0].untried.empty());
        CHECK(one.is_terminal());
        CHECK(ns[leaf].untried.empty());  // terminal children are never expanded
        CHECK_THROWS_AS(expand(ns, 0, one, rng), ContractViolation);
    }
}

TEST_CASE("backup") {
    std::vector<SearchNode> nodes(2);
    nodes[0].player_just_moved = Player::White;
    nodes[1].player_just_moved = Player::Black;
    const std::vector<NodeId> path{0, 1};
    backup(nodes, path, Player::Black);
    CHECK(nodes[1].wins == 1.0);
    CHECK(nodes[1].visits == 1);
    CHECK(nodes[0].visits == 1);
    CHECK(nodes[0].wins == 0.0);
    backup(nodes, path, Player::White);
    CHECK(nodes[1].wins == 1.0);
    CHECK(nodes[1].visits == 2);
    CHECK(nodes[0].wins == 1.0);
}

TEST_CASE("uct_search") {
    const Board empty(5);
    SUBCASE("one iteration") {
        const auto tree = uct_search(empty, 1, SearchParams{1.0, 4});
        CHECK(tree.root().visits == 1);
        REQUIRE(tree.root().children.size() == 1);
        CHECK(tree.node(tree.root().children[0]).visits == 1);
        check_tree(tree, 1);
    }
    SUBCASE("invariants over several budgets and constants") {
        for (const double cp : {0.0, 0.1, 1.0}) {
            for (const std::uint32_t m : {2u, 37u, 500u, 3000u}) {
                check_tree(uct_search(random_opening(5, 4, m), m, SearchParams{cp, m}), m);
            }
        }
    }
    SUBCASE("terminal positions inside the tree are scored directly") {
        // 2x2: deep enough that the tree reaches decided positions.
        const auto tree = uct_search(Board(2), 2000, SearchParams{1.0, 1});
        check_tree(tree, 2000);
    }
    SUBCASE("deterministic for a seed") {
        const auto a = uct_search(empty, 2000, SearchParams{0.5, 77});
        const auto b = uct_search(empty, 2000, SearchParams{0.5, 77});
        REQUIRE(a.nodes().size() == b.nodes().size());
        for (std::size_t i = 0; i < a.nodes().size(); ++i) {
            const auto& x = a.nodes()[i];
            const auto& y = b.nodes()[i];
            REQUIRE(x.move == y.move);
            REQUIRE(x.wins == y.wins);
            REQUIRE(x.visits == y.visits);
            REQUIRE(x.children == y.children);
            REQUIRE(x.untried == y.untried);
        }
        const auto c = uct_search(empty, 2000, SearchParams{0.5, 78});
        CHECK(a.root_statistics() != c.root_statistics());
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(uct_search(empty, 0, SearchParams{}), std::invalid_argument);
        Board done(1);
        done.play({0, 0});
        CHECK_THROWS_AS(uct_search(done, 10, SearchParams{}), std::invalid_argument);
        CHECK_THROWS_AS(uct_search(empty, 10, SearchParams{-1.0}), std::invalid_argument);
    }
}

TEST_CASE("final move policies") {
    const std::vector<RootEntry> a{{{0, 0}, 6, 10}, {{0, 1}, 5, 5}};
    CHECK(best_by_winrate(a) == Cell{0, 1});

    const std::vector<RootEntry> b{{{0, 0}, 3, 10}, {{0, 1}, 9, 30}};
    CHECK(best_by_winrate(b) == Cell{0, 1});

    const std::vector<RootEntry> c{{{0, 0}, 0, 0}, {{1, 2}, 1, 3}};
    CHECK(best_by_winrate(c) == Cell{1, 2});
    CHECK(best_by_visits(c) == Cell{1, 2});

    const std::vector<RootEntry> same{{{0, 0}, 2, 4}, {{0, 1}, 2, 4}};
    CHECK(best_by_winrate(same) == Cell{0, 0});
    CHECK(best_by_visits(same) == Cell{0, 0});

    const std::vector<RootEntry> d{{{0, 0}, 10, 100}, {{0, 1}, 70, 80}};
    CHECK(best_by_visits(d) == Cell{0, 0});
    const std::vector<RootEntry> e{{{0, 0}, 6, 10}, {{0, 1}, 4, 10}};
    CHECK(best_by_visits(e) == Cell{0, 0});

    const std::vector<RootEntry> none{{{0, 0}, 0, 0}};
    CHECK_THROWS_AS(best_by_winrate(none), ContractViolation);
    CHECK_THROWS_AS(best_by_visits(none), ContractViolation);

    const auto tree = uct_search(Board(4), 300, SearchParams{1.0, 2});
    CHECK(best_move_winrate(tree) == best_by_winrate(tree.root_statistics()));
    CHECK(best_move_robust(tree) == best_by_visits(tree.root_statistics()));
}

TEST_CASE("win-rate choice is invariant under scaling") {
    std::mt19937_64 gen(12);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<RootEntry> entries;
        const int k = 1 + static_cast<int>(gen() % 8);
        for (int i = 0; i < k; ++i) {
            const std::uint32_t n = 1 + static_cast<std::uint32_t>(gen() % 50);
            entries.push_back({{0, i}, static_cast<double>(gen() % (n + 1)), n});
        }
        // Exclude samples whose best rate is shared by two entries.
        double top = -1;
        int at_top = 0;
        for (const auto& e : entries) {
            const double r = e.wins / e.visits;
            if (r > top) { top = r; at_top = 1; } else if (r == top) ++at_top;
        }
        if (at_top > 1) continue;
        const int scale = 2 + static_cast<int>(gen() % 9);
        auto scaled = entries;
        for (auto& e : scaled) {
            e.wins *= scale;
            e.visits *= static_cast<std::uint32_t>(scale);
        }
        REQUIRE(best_by_winrate(entries) == best_by_winrate(scaled));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("root_statistics") {
    const auto fresh = uct_search(Board(4), 1, SearchParams{1.0, 5});
    const auto stats = fresh.root_statistics();
    CHECK(stats.size() == 16);
    CHECK(std::count_if(stats.begin(), stats.end(), [](const RootEntry& e) { return e.visits > 0; }) == 1);

    const auto tree = uct_search(random_opening(6, 5, 1), 700, SearchParams{0.3, 6});
    const auto s = tree.root_statistics();
    CHECK(s.size() == 31);
    std::uint64_t sum = 0;
    for (const auto& e : s) {
        sum += e.visits;
        CHECK(tree.root_state().at(e.move) == Stone::Empty);
    }
    CHECK(sum <= tree.root().visits);
    CHECK(std::is_sorted(s.begin(), s.end(), [](const RootEntry& x, const RootEntry& y) { return x.move < y.move; }));

    CHECK(uct_search(Board(11), 5, SearchParams{}).root_statistics().size() == 121);
}

TEST_CASE("small boards: search finds a game-theoretic winning move") {
    for (const int size : {2, 3}) {
        oracle::Grid g(static_cast<std::size_t>(size * size), 0);
        std::vector<int> winning;
        REQUIRE(oracle::to_move_wins(g, size, 1, &winning));
        for (const std::uint64_t seed : {1u, 2u, 3u}) {
            const Board b(size);
            const auto tree = uct_search(b, 20000, SearchParams{1.0, seed});
            const Cell best = best_move_winrate(tree);
            CAPTURE(size);
            CAPTURE(seed);
            CHECK(std::find(winning.begin(), winning.end(), b.index_of(best)) != winning.end());
        }
    }
}

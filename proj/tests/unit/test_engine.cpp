#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "antids/errors.hpp"
#include "antids/engine.hpp"

using namespace antids;

namespace {

Item make_item(std::uint32_t id, std::vector<double> f, ClassLabel c = ClassLabel::normal) {
    return Item{ItemId{id}, std::move(f), Role::test, c};
}

// Builds a state by hand: items at the given cells (nullopt means carried by
// the ant with the same index), ants at the given cells facing east.
SimState manual_state(GridDims dims, std::vector<Item> items, const std::vector<std::optional<GridCoord>>& item_cells,
                      const std::vector<GridCoord>& ant_cells, std::uint64_t seed = 1) {
    Grid g(dims.width, dims.height);
    std::vector<Ant> ants;
    for (std::size_t a = 0; a < ant_cells.size(); ++a) {
        ants.push_back(Ant{AntId{static_cast<std::uint32_t>(a)}, ant_cells[a], Heading::east, std::nullopt});
        g.place_agent(ant_cells[a], AntId{static_cast<std::uint32_t>(a)});
    }
    std::vector<ItemLocation> locations;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (item_cells[i]) {
            g.place_item(*item_cells[i], items[i].id);
            locations.emplace_back(*item_cells[i]);
        } else {
            ants[i].carrying = items[i].id;
            locations.emplace_back(Carried{AntId{static_cast<std::uint32_t>(i)}});
        }
    }
    SimState s{std::move(g), std::move(ants), std::move(items), std::move(locations), 0, Rng(seed), RunParams{}};
    check_invariants(s);
    return s;
}

std::vector<Item> random_items(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Item> out;
    for (std::uint32_t i = 0; i < n; ++i) {
        out.push_back(make_item(i, {rng.uniform01(), rng.uniform01()}, class_from_int(1 + static_cast<int>(i % 4))));
    }
    return out;
}

std::size_t conserved_count(const SimState& s) {
    std::size_t carried = 0;
    for (const auto& a : s.ants) carried += a.carrying ? 1 : 0;
    return s.grid.item_count() + carried;
}

}  // namespace

TEST(Headings, OffsetsAndTurns) {
    EXPECT_EQ(heading_offset(Heading::east), (GridCoord{1, 0}));
    EXPECT_EQ(heading_offset(Heading::north), (GridCoord{0, -1}));
    EXPECT_EQ(heading_offset(Heading::south_west), (GridCoord{-1, 1}));
    EXPECT_EQ(turn_degrees(Heading::east, Heading::east), 0);
    EXPECT_EQ(turn_degrees(Heading::east, Heading::north), 90);
    EXPECT_EQ(turn_degrees(Heading::east, Heading::south), -90);
    EXPECT_EQ(turn_degrees(Heading::east, Heading::west), 180);
    EXPECT_EQ(turn_degrees(Heading::north_west, Heading::south_west), 90);
}

TEST(Votes, MajorityRule) {
    EXPECT_TRUE(majority_reached(0, 0, VoteRule::strict, VoteKind::pick));
    EXPECT_FALSE(majority_reached(0, 0, VoteRule::strict, VoteKind::drop));
    EXPECT_TRUE(majority_reached(2, 2, VoteRule::strict, VoteKind::pick));
    EXPECT_TRUE(majority_reached(4, 4, VoteRule::strict, VoteKind::drop));
    EXPECT_FALSE(majority_reached(1, 2, VoteRule::strict, VoteKind::pick));
    EXPECT_TRUE(majority_reached(1, 2, VoteRule::lenient, VoteKind::pick));
    EXPECT_TRUE(majority_reached(2, 3, VoteRule::strict, VoteKind::drop));
}

TEST(Init, DefaultAntsAndPlacement) {
    EXPECT_EQ(default_ant_count(800), 80u);
    EXPECT_EQ(default_ant_count(4), 1u);
    EXPECT_EQ(default_ant_count(15), 2u);
    auto s = init_run(random_items(800, 2), Grid(57, 57), InitOptions{.seed = 4});
    EXPECT_EQ(s.ants.size(), 80u);
    EXPECT_EQ(s.grid.item_count(), 800u);
    EXPECT_EQ(s.t, 0u);
    for (double p : s.grid.pheromone_field()) EXPECT_EQ(p, 0.0);
    check_invariants(s);
}

TEST(Init, TinyGridAndDeterminism) {
    auto s = init_run(random_items(1, 1), Grid(2, 2), InitOptions{.n_ants = 1, .seed = 9});
    check_invariants(s);
    EXPECT_EQ(s.grid.item_count(), 1u);

    auto a = init_run(random_items(50, 3), Grid(20, 20), InitOptions{.seed = 77});
    auto b = init_run(random_items(50, 3), Grid(20, 20), InitOptions{.seed = 77});
    EXPECT_EQ(a.locations, b.locations);
    for (std::size_t i = 0; i < a.ants.size(); ++i) {
        EXPECT_EQ(a.ants[i].pos, b.ants[i].pos);
        EXPECT_EQ(a.ants[i].heading, b.ants[i].heading);
    }
    EXPECT_TRUE(a.rng == b.rng);
}

TEST(Init, RejectsOverfullGridAndBadItems) {
    EXPECT_THROW(init_run(random_items(4, 1), Grid(2, 2), InitOptions{.n_ants = 1}), ConfigError);
    auto items = random_items(3, 1);
    items[1].features.push_back(0.5);
    EXPECT_THROW(init_run(items, Grid(5, 5), {}), DataError);
    items = random_items(3, 1);
    items[2].features[0] = 1.5;
    EXPECT_THROW(init_run(items, Grid(5, 5), {}), DataError);
}

TEST(Votes, PickWithNoNeighborsAlwaysSucceeds) {
    auto s = manual_state({5, 5}, {make_item(0, {0.2, 0.2})}, {GridCoord{2, 2}}, {{2, 2}});
    EXPECT_TRUE(vote_pick(s, AntId{0}));
    EXPECT_EQ(s.ants[0].carrying, ItemId{0});
    EXPECT_FALSE(s.grid.has_item({2, 2}));
    check_invariants(s);
}

TEST(Votes, IdenticalNeighborsNeverPick) {
    std::vector<Item> items{make_item(0, {0.4, 0.4}), make_item(1, {0.4, 0.4}), make_item(2, {0.4, 0.4})};
    auto s = manual_state({6, 6}, items, {GridCoord{2, 2}, GridCoord{3, 2}, GridCoord{2, 3}}, {{2, 2}});
    for (int i = 0; i < 200; ++i) EXPECT_FALSE(vote_pick(s, AntId{0}));
}

TEST(Votes, DropNeedsNeighbors) {
    auto s = manual_state({5, 5}, {make_item(0, {0.2, 0.2})}, {std::nullopt}, {{2, 2}});
    for (int i = 0; i < 100; ++i) EXPECT_FALSE(vote_drop(s, AntId{0}));
}

TEST(Votes, SingleIdenticalNeighborDropRate) {
    // One vote with probability crowding(1) * 1 = 1/26.
    std::vector<Item> items{make_item(0, {0.5, 0.5}), make_item(1, {0.5, 0.5})};
    auto s = manual_state({7, 7}, items, {std::nullopt, GridCoord{3, 2}}, {{3, 3}}, 2024);
    const int trials = 200000;
    int drops = 0;
    for (int i = 0; i < trials; ++i) {
        if (vote_drop(s, AntId{0})) {
            ++drops;
            s.grid.remove_item({3, 3});
            s.ants[0].carrying = ItemId{0};
            s.locations[0] = Carried{AntId{0}};
        }
    }
    const double p = 1.0 / 26.0;
    const double rate = static_cast<double>(drops) / trials;
    EXPECT_NEAR(rate, p, 4.0 * std::sqrt(p * (1 - p) / trials));
}

TEST(Votes, Contracts) {
    auto s = manual_state({5, 5}, {make_item(0, {0.2, 0.2}), make_item(1, {0.3, 0.3})},
                          {std::nullopt, GridCoord{0, 0}}, {{2, 2}, {4, 4}});
    EXPECT_THROW(vote_pick(s, AntId{0}), ContractViolation);  // laden
    EXPECT_THROW(vote_pick(s, AntId{1}), ContractViolation);  // empty cell
    EXPECT_THROW(vote_drop(s, AntId{1}), ContractViolation);  // unladen
    s.grid.move_agent({2, 2}, {0, 0});
    s.ants[0].pos = {0, 0};
    EXPECT_THROW(vote_drop(s, AntId{0}), ContractViolation);  // occupied cell
}

TEST(Move, BlockedAntStays) {
    std::vector<GridCoord> cells{{2, 2}};
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (dx || dy) cells.push_back({2 + dx, 2 + dy});
    auto s = manual_state({5, 5}, {}, {}, cells);
    const Rng before = s.rng;
    EXPECT_EQ(move_agent(s, AntId{0}), (GridCoord{2, 2}));
    EXPECT_TRUE(s.rng == before);  // no draw consumed
    EXPECT_EQ(s.ants[0].heading, Heading::east);
}

TEST(Move, SingleFreeNeighbor) {
    std::vector<GridCoord> cells{{2, 2}};
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if ((dx || dy) && !(dx == 0 && dy == -1)) cells.push_back({2 + dx, 2 + dy});
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto s = manual_state({5, 5}, {}, {}, cells, seed);
        EXPECT_EQ(move_agent(s, AntId{0}), (GridCoord{2, 1}));
        EXPECT_EQ(s.ants[0].heading, Heading::north);
    }
}

TEST(Move, ItemCellsAreAllowed) {
    std::vector<Item> items;
    std::vector<std::optional<GridCoord>> at;
    std::uint32_t id = 0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (dx || dy) {
                items.push_back(make_item(id++, {0.1, 0.1}));
                at.push_back(GridCoord{2 + dx, 2 + dy});
            }
    auto s = manual_state({5, 5}, items, at, {{2, 2}});
    const auto to = move_agent(s, AntId{0});
    EXPECT_NE(to, (GridCoord{2, 2}));
    EXPECT_TRUE(s.grid.has_item(to));
}

TEST(Move, StraightAheadIsModal) {
    auto s = manual_state({9, 9}, {}, {}, {{4, 4}}, 5);
    std::array<int, 8> counts{};
    for (int i = 0; i < 40000; ++i) {
        s.grid.move_agent(s.ants[0].pos, {4, 4});
        s.ants[0].pos = {4, 4};
        s.ants[0].heading = Heading::east;
        move_agent(s, AntId{0});
        ++counts[static_cast<std::size_t>(s.ants[0].heading)];
    }
    const auto modal = std::max_element(counts.begin(), counts.end()) - counts.begin();
    EXPECT_EQ(modal, static_cast<long>(Heading::east));
}

TEST(Pheromone, DepositAndEvaporate) {
    std::vector<Item> items;
    std::vector<std::optional<GridCoord>> at;
    std::uint32_t id = 0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (dx || dy) {
                items.push_back(make_item(id++, {0.1, 0.1}));
                at.push_back(GridCoord{5 + dx, 5 + dy});
            }
    auto s = manual_state({10, 10}, items, at, {});
    deposit(s, {0, 0});
    EXPECT_DOUBLE_EQ(s.grid.pheromone({0, 0}), 0.07);
    deposit(s, {5, 5});
    EXPECT_DOUBLE_EQ(s.grid.pheromone({5, 5}), 0.09);
    deposit(s, {0, 0});
    EXPECT_DOUBLE_EQ(s.grid.pheromone({0, 0}), 0.14);
    evaporate(s);
    EXPECT_DOUBLE_EQ(s.grid.pheromone({5, 5}), 0.09 * 0.985);
    double prev = s.grid.pheromone({5, 5});
    for (int i = 0; i < 100; ++i) {
        evaporate(s);
        EXPECT_LT(s.grid.pheromone({5, 5}), prev);
        prev = s.grid.pheromone({5, 5});
    }
    EXPECT_EQ(s.grid.pheromone({9, 9}), 0.0);
}

TEST(Step, ZeroAntsOnlyEvaporates) {
    auto items = random_items(10, 1);
    auto s = init_run(items, Grid(10, 10), InitOptions{.n_ants = 0, .seed = 1, .params = {.t_max = 5}});
    const auto before = s.locations;
    s.grid.add_pheromone({1, 1}, 1.0);
    step(s);
    EXPECT_EQ(s.locations, before);
    EXPECT_DOUBLE_EQ(s.grid.pheromone({1, 1}), 0.985);
    EXPECT_EQ(s.t, 1u);
}

TEST(Step, RefusesPastTmax) {
    auto s = init_run(random_items(10, 1), Grid(10, 10), InitOptions{.seed = 1, .params = {.t_max = 2}});
    step(s);
    step(s);
    EXPECT_THROW(step(s), ContractViolation);
}

TEST(Step, ConservationAndInvariants) {
    auto s = init_run(random_items(120, 8), Grid(25, 25), InitOptions{.seed = 8, .params = {.t_max = 2000}});
    for (int i = 0; i < 2000; ++i) {
        step(s);
        ASSERT_EQ(conserved_count(s), 120u);
        if (i % 50 == 0) check_invariants(s);
    }
    check_invariants(s);
}

TEST(Run, TmaxZeroGivesInitialSnapshotOnly) {
    auto s = init_run(random_items(10, 1), Grid(10, 10), InitOptions{.seed = 1, .params = {.t_max = 0}});
    const auto sched = geometric_schedule(0);
    const auto snaps = run(s, sched);
    ASSERT_EQ(snaps.size(), 1u);
    EXPECT_EQ(snaps[0].t, 0u);
}

TEST(Run, Schedules) {
    EXPECT_EQ(geometric_schedule(1000), (std::vector<std::uint64_t>{0, 1, 10, 100, 1000}));
    EXPECT_EQ(geometric_schedule(250), (std::vector<std::uint64_t>{0, 1, 10, 100, 250}));
    const std::vector<std::uint64_t> steps{500, 5, 5, 9000};
    EXPECT_EQ(list_schedule(steps, 1000), (std::vector<std::uint64_t>{0, 5, 500, 1000}));
}

TEST(Run, SameSeedSameSnapshots) {
    auto make = [] {
        return init_run(random_items(60, 4), Grid(16, 16), InitOptions{.seed = 31, .params = {.t_max = 500}});
    };
    auto a = make();
    auto b = make();
    const auto sched = geometric_schedule(500);
    const auto sa = run(a, sched);
    const auto sb = run(b, sched);
    ASSERT_EQ(sa.size(), sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        EXPECT_EQ(sa[i].t, sb[i].t);
        EXPECT_EQ(sa[i].pheromone_field, sb[i].pheromone_field);
        EXPECT_EQ(sa[i].entropy, sb[i].entropy);
        ASSERT_EQ(sa[i].placements.size(), sb[i].placements.size());
        for (std::size_t j = 0; j < sa[i].placements.size(); ++j)
            EXPECT_EQ(sa[i].placements[j].where, sb[i].placements[j].where);
    }
}

TEST(Finalize, NoLadenAntsLeavesStateAlone) {
    auto s = manual_state({5, 5}, {make_item(0, {0.1, 0.1})}, {GridCoord{1, 1}}, {{3, 3}});
    finalize_positions(s);
    EXPECT_EQ(std::get<GridCoord>(s.locations[0]), (GridCoord{1, 1}));
}

TEST(Finalize, DropsOnOwnEmptyCell) {
    auto s = manual_state({5, 5}, {make_item(0, {0.1, 0.1})}, {std::nullopt}, {{3, 3}});
    finalize_positions(s);
    EXPECT_EQ(std::get<GridCoord>(s.locations[0]), (GridCoord{3, 3}));
    EXPECT_FALSE(s.ants[0].carrying);
}

TEST(Finalize, NearestFreeCellWithRowMajorTies) {
    // Ant carries item 0 and stands on item 1; west and north are free, so
    // the north cell wins the tie at distance 1.
    std::vector<Item> items{make_item(0, {0.1, 0.1}), make_item(1, {0.1, 0.1}), make_item(2, {0.1, 0.1}),
                            make_item(3, {0.1, 0.1})};
    auto s = manual_state({5, 5}, items, {std::nullopt, GridCoord{2, 2}, GridCoord{3, 2}, GridCoord{2, 3}}, {{2, 2}});
    finalize_positions(s);
    EXPECT_EQ(std::get<GridCoord>(s.locations[0]), (GridCoord{2, 1}));
    check_invariants(s);
}

TEST(Finalize, MatchesOffsetOracleOnCrowdedGrids) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto s = init_run(random_items(90, seed), Grid(11, 10), InitOptions{.seed = seed, .params = {.t_max = 300}});
        for (int i = 0; i < 300; ++i) step(s);
        // Oracle: offsets within the grid sorted by (dx^2+dy^2, dy, dx), first
        // item-free cell wins, ants processed in id order.
        std::vector<std::pair<ItemId, GridCoord>> expected;
        Grid shadow = s.grid;
        for (const auto& ant : s.ants) {
            if (!ant.carrying) continue;
            std::vector<std::array<int, 3>> offsets;
            for (int dy = -4; dy <= 5; ++dy)
                for (int dx = -5; dx <= 5; ++dx) offsets.push_back({dx * dx + dy * dy, dy, dx});
            std::sort(offsets.begin(), offsets.end());
            for (const auto& o : offsets) {
                const GridCoord c = shadow.offset(ant.pos, o[2], o[1]);
                if (!shadow.has_item(c)) {
                    shadow.place_item(c, *ant.carrying);
                    expected.emplace_back(*ant.carrying, c);
                    break;
                }
            }
        }
        finalize_positions(s);
        check_invariants(s);
        EXPECT_EQ(s.grid.item_count(), 90u);
        for (const auto& [item, where] : expected) EXPECT_EQ(std::get<GridCoord>(s.locations[to_index(item)]), where);
    }
}

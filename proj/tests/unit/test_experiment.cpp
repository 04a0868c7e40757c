#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "../kdd_fixture.hpp"
#include "antids/errors.hpp"
#include "antids/experiment.hpp"

using namespace antids;

namespace {

std::vector<Item> labeled_markers(int per_class, int classes, int tests) {
    std::vector<Item> items;
    std::uint32_t id = 0;
    for (int c = 1; c <= classes; ++c)
        for (int i = 0; i < per_class; ++i)
            items.push_back(Item{ItemId{id++}, {0.5}, Role::marker, class_from_int(c)});
    for (int i = 0; i < tests; ++i) items.push_back(Item{ItemId{id++}, {0.5}, Role::test, ClassLabel::normal});
    return items;
}

}  // namespace

TEST(Config, ParsersAndNames) {
    EXPECT_EQ(parse_mode("antids-b"), Mode::antids_b);
    EXPECT_EQ(parse_placement("ten-stripe"), MarkerPlacement::ten_stripe);
    EXPECT_EQ(parse_vote_rule("lenient"), VoteRule::lenient);
    EXPECT_EQ(parse_feature_set("full"), FeatureSet::full);
    EXPECT_EQ(parse_grid("30x40"), (GridDims{30, 40}));
    EXPECT_THROW(parse_grid("30by40"), ConfigError);
    EXPECT_THROW(parse_grid("0x4"), ConfigError);
    EXPECT_THROW(parse_mode("fast"), ConfigError);
    EXPECT_EQ(mode_name(Mode::antids_a), "antids-a");
    EXPECT_EQ(placement_name(MarkerPlacement::five_box), "five-box");
}

TEST(Config, Validation) {
    ExperimentConfig c;
    EXPECT_NO_THROW(c.validate());
    c.k = 4;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.synthetic.markers_per_class = 300;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.run.kernel.alpha = -1.0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, EntriesUseOptionNames) {
    ExperimentConfig c;
    std::set<std::string> keys;
    for (const auto& [k, v] : config_entries(c)) keys.insert(k);
    for (const char* k : {"seed", "steps", "k", "grid", "placement", "beta", "evap", "spread"}) EXPECT_TRUE(keys.count(k)) << k;
}

TEST(Zones, FiveBoxPutsMarkersInTheirBox) {
    const auto items = labeled_markers(20, 5, 30);
    Grid g(30, 30);
    const auto cells = place_markers_zoned(items, g, MarkerPlacement::five_box, 3);
    ASSERT_EQ(cells.size(), items.size());
    std::set<GridCoord> distinct(cells.begin(), cells.end());
    EXPECT_EQ(distinct.size(), items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].role != Role::marker) continue;
        const auto p = cells[i];
        switch (to_int(*items[i].true_class)) {
            case 1: EXPECT_TRUE(p.x < 10 && p.y >= 20); break;
            case 2: EXPECT_TRUE(p.x < 10 && p.y < 10); break;
            case 3: EXPECT_TRUE(p.x >= 20 && p.y < 10); break;
            case 4: EXPECT_TRUE(p.x >= 20 && p.y >= 20); break;
            case 5: EXPECT_TRUE(p.x >= 10 && p.x < 20 && p.y >= 10 && p.y < 20); break;
        }
    }
}

TEST(Zones, TenStripeAlternatesClasses) {
    const auto items = labeled_markers(10, 5, 0);
    Grid g(20, 10);
    const auto cells = place_markers_zoned(items, g, MarkerPlacement::ten_stripe, 3);
    for (std::size_t i = 0; i < items.size(); ++i) {
        const int stripe = cells[i].x / 2;
        EXPECT_EQ(stripe % 5 + 1, to_int(*items[i].true_class));
    }
    EXPECT_TRUE(place_markers_zoned(items, g, MarkerPlacement::random, 3).empty());
    EXPECT_THROW(place_markers_zoned(labeled_markers(30, 5, 0), Grid(9, 9), MarkerPlacement::five_box, 1), ConfigError);
}

TEST(Protocols, SyntheticRunIsDeterministicAndClassifies) {
    ExperimentConfig c;
    c.synthetic = SyntheticSpec{.classes = 2, .per_class = 40, .features = 2, .markers_per_class = 20};
    c.run.t_max = 3000;
    c.seed = 5;
    const auto a = run_synthetic(c);
    const auto b = run_synthetic(c);
    ASSERT_EQ(a.batches.size(), 1u);
    const auto& batch = a.batches[0];
    EXPECT_EQ(batch.dims, (GridDims{18, 18}));
    EXPECT_EQ(batch.n_ants, 8u);
    ASSERT_TRUE(a.aggregate);
    EXPECT_EQ(a.aggregate->n_test, 40u);
    for (const auto& p : batch.final_snapshot.placements) EXPECT_TRUE(p.where.has_value());
    ASSERT_EQ(batch.final_snapshot.placements.size(), b.batches[0].final_snapshot.placements.size());
    for (std::size_t i = 0; i < batch.final_snapshot.placements.size(); ++i)
        EXPECT_EQ(batch.final_snapshot.placements[i].where, b.batches[0].final_snapshot.placements[i].where);
    EXPECT_EQ(a.aggregate->confusion, b.aggregate->confusion);
}

TEST(Protocols, KddBatchesCoverAllTestItems) {
    std::istringstream in(fixture::kdd_text(fixture::default_mix(), 2));
    SplitCounts small{};
    small[0] = {30, 40};
    small[1] = {10, 10};
    small[2] = {30, 40};
    small[3] = {5, 5};
    small[4] = {5, 5};
    const auto data = prepare_kdd(in, FeatureSet::reduced, small, 9);
    EXPECT_EQ(data.markers.size(), 80u);
    EXPECT_EQ(data.tests.size(), 100u);
    EXPECT_EQ(data.feature_names.size(), 12u);
    for (const auto& it : data.tests)
        for (double v : it.features) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }

    ExperimentConfig c;
    c.mode = Mode::antids_b;
    c.batch_size = 30;
    c.run.t_max = 500;
    c.jobs = 2;
    const auto r = run_antids_b(c, data);
    ASSERT_EQ(r.batches.size(), 4u);
    EXPECT_EQ(r.batches[3].n_items, 80u + 10u);
    ASSERT_TRUE(r.aggregate);
    EXPECT_EQ(r.aggregate->n_test, 100u);

    c.jobs = 1;
    const auto serial = run_antids_b(c, data);
    EXPECT_EQ(serial.aggregate->confusion, r.aggregate->confusion);

    c.mode = Mode::antids_a;
    const auto all_at_once = run_antids_a(c, data);
    ASSERT_EQ(all_at_once.batches.size(), 1u);
    EXPECT_EQ(all_at_once.aggregate->n_test, 100u);
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "../oracles.hpp"
#include "antids/classifier.hpp"
#include "antids/errors.hpp"

using namespace antids;

namespace {

Marker marker(std::uint32_t id, GridCoord at, int label) { return Marker{ItemId{id}, at, class_from_int(label)}; }

Snapshot snapshot_of(GridDims dims, const std::vector<std::pair<GridCoord, int>>& items) {
    Snapshot s;
    s.dims = dims;
    std::uint32_t id = 0;
    for (const auto& [at, label] : items) {
        s.placements.push_back(Placement{ItemId{id++}, at, Role::marker, class_from_int(label)});
    }
    return s;
}

}  // namespace

TEST(Knn, RejectsBadK) {
    const std::vector<Marker> m{marker(0, {0, 0}, 1), marker(1, {1, 1}, 2)};
    const std::vector<GridCoord> q{{0, 0}};
    EXPECT_THROW(knn_classify(q, m, 2, {5, 5}), ConfigError);
    EXPECT_THROW(knn_classify(q, m, 0, {5, 5}), ConfigError);
    EXPECT_THROW(knn_classify(q, m, 3, {5, 5}), ConfigError);
    EXPECT_THROW(knn_classify(q, std::vector<Marker>{}, 1, {5, 5}), ConfigError);
}

TEST(Knn, CoLocatedMarkerWithK1) {
    const std::vector<Marker> m{marker(0, {3, 3}, 4), marker(1, {0, 0}, 2)};
    const std::vector<GridCoord> q{{3, 3}};
    EXPECT_EQ(knn_classify(q, m, 1, {9, 9})[0], ClassLabel::u2r);
}

TEST(Knn, MajorityAndWrap) {
    // Two class-2 markers reachable only across the seam.
    const std::vector<Marker> m{marker(0, {9, 0}, 2), marker(1, {0, 9}, 2), marker(2, {1, 1}, 5),
                                marker(3, {5, 5}, 5)};
    const std::vector<GridCoord> q{{0, 0}};
    EXPECT_EQ(knn_classify(q, m, 3, {10, 10})[0], ClassLabel::probe);
}

TEST(Knn, ThreeWayTieGoesToNearestMarker) {
    const std::vector<Marker> m{marker(0, {0, 3}, 1), marker(1, {2, 0}, 3), marker(2, {0, 1}, 5)};
    const std::vector<GridCoord> q{{0, 0}};
    EXPECT_EQ(knn_classify(q, m, 3, {20, 20})[0], ClassLabel::r2l);
}

TEST(Knn, DistanceTiesBrokenById) {
    // Four markers at distance 1; ids 0 and 1 are chosen by k=1 and k=3.
    const std::vector<Marker> m{marker(3, {1, 0}, 1), marker(1, {0, 1}, 4), marker(0, {4, 0}, 4),
                                marker(2, {0, 4}, 2)};
    const std::vector<GridCoord> q{{0, 0}};
    EXPECT_EQ(knn_classify(q, m, 1, {5, 5})[0], ClassLabel::u2r);
    EXPECT_EQ(knn_classify(q, m, 3, {5, 5})[0], ClassLabel::u2r);
}

TEST(Knn, MatchesNineWindowOracleAndIsPermutationInvariant) {
    Rng rng(42);
    for (int layout = 0; layout < 100; ++layout) {
        const int w = 3 + static_cast<int>(rng.below(40));
        const int h = 3 + static_cast<int>(rng.below(40));
        const std::size_t n_markers = 1 + rng.below(60);
        std::vector<Marker> markers;
        std::vector<oracle::LabeledPoint> ref;
        for (std::uint32_t i = 0; i < n_markers; ++i) {
            const GridCoord at{static_cast<int>(rng.below(w)), static_cast<int>(rng.below(h))};
            const int label = 1 + static_cast<int>(rng.below(5));
            markers.push_back(marker(i, at, label));
            ref.push_back({i, {at.x, at.y}, label});
        }
        std::vector<GridCoord> queries;
        std::vector<oracle::Point> qref;
        for (int i = 0; i < 40; ++i) {
            const GridCoord at{static_cast<int>(rng.below(w)), static_cast<int>(rng.below(h))};
            queries.push_back(at);
            qref.push_back({at.x, at.y});
        }
        int k = 1 + 2 * static_cast<int>(rng.below(4));
        if (k > static_cast<int>(n_markers)) k = 1;
        const auto got = knn_classify(queries, markers, k, {w, h});
        const auto want = oracle::nine_window_knn(qref, ref, k, w, h);
        for (std::size_t i = 0; i < got.size(); ++i) ASSERT_EQ(to_int(got[i]), want[i]);

        std::vector<Marker> shuffled = markers;
        for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
        EXPECT_EQ(knn_classify(queries, shuffled, k, {w, h}), got);
    }
}

TEST(Evaluate, PerfectAndAbsentClasses) {
    const std::vector<ClassLabel> t{ClassLabel::normal, ClassLabel::dos, ClassLabel::dos, ClassLabel::r2l};
    const auto r = evaluate(t, t);
    EXPECT_EQ(r.n_test, 4u);
    EXPECT_DOUBLE_EQ(*r.per_class_accuracy[0], 1.0);
    EXPECT_DOUBLE_EQ(*r.per_class_accuracy[2], 1.0);
    EXPECT_FALSE(r.per_class_accuracy[3].has_value());
    EXPECT_DOUBLE_EQ(*r.overall_accuracy, 1.0);
    EXPECT_THROW(evaluate(t, std::span(t).first(3)), ConfigError);
}

TEST(Evaluate, DosRowPercentage) {
    std::vector<ClassLabel> truth(4202, ClassLabel::dos);
    std::vector<ClassLabel> pred = truth;
    pred[17] = ClassLabel::normal;
    const auto r = evaluate(pred, truth);
    EXPECT_NEAR(*r.per_class_accuracy[2] * 100.0, 99.98, 0.005);
    EXPECT_EQ(r.confusion[2][0], 1u);
    EXPECT_EQ(r.confusion[2][2], 4201u);
}

TEST(Evaluate, ConfusionMassAndAggregate) {
    Rng rng(6);
    std::vector<EvaluationReport> parts;
    std::uint64_t total = 0;
    for (int b = 0; b < 4; ++b) {
        std::vector<ClassLabel> p, t;
        const std::size_t n = 10 + rng.below(100);
        for (std::size_t i = 0; i < n; ++i) {
            p.push_back(class_from_int(1 + static_cast<int>(rng.below(5))));
            t.push_back(class_from_int(1 + static_cast<int>(rng.below(5))));
        }
        parts.push_back(evaluate(p, t));
        std::uint64_t mass = 0;
        for (const auto& row : parts.back().confusion) mass = std::accumulate(row.begin(), row.end(), mass);
        EXPECT_EQ(mass, n);
        total += n;
    }
    const auto agg = aggregate(parts);
    EXPECT_EQ(agg.n_test, total);
    for (int c = 0; c < kClassCount; ++c) {
        std::uint64_t diag = 0, row = 0;
        for (const auto& part : parts) {
            diag += part.confusion[c][c];
            for (auto v : part.confusion[c]) row += v;
        }
        ASSERT_TRUE(agg.per_class_accuracy[c]);
        EXPECT_DOUBLE_EQ(*agg.per_class_accuracy[c], static_cast<double>(diag) / static_cast<double>(row));
    }
}

TEST(Entropy, SortedMixedAndWeighted) {
    // Two 2x2 patches on a 4x2 grid.
    auto sorted = snapshot_of({4, 2}, {{{0, 0}, 1}, {{1, 0}, 1}, {{2, 0}, 2}, {{3, 1}, 2}});
    EXPECT_DOUBLE_EQ(spatial_entropy(sorted, 2), 0.0);

    auto mixed = snapshot_of({4, 2}, {{{0, 0}, 1}, {{1, 0}, 2}, {{0, 1}, 3}, {{1, 1}, 4},
                                      {{2, 0}, 4}, {{3, 0}, 3}, {{2, 1}, 2}, {{3, 1}, 1}});
    EXPECT_DOUBLE_EQ(spatial_entropy(mixed, 2), 1.0);

    auto three_one = snapshot_of({2, 2}, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}, {{1, 1}, 2}});
    EXPECT_NEAR(spatial_entropy(three_one, 2), 0.8112781244591328, 1e-12);

    // Weighted: patch A (3,1) with 4 items, patch B pure with 2 items.
    auto weighted = snapshot_of({4, 2}, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}, {{1, 1}, 2}, {{2, 0}, 2}, {{3, 0}, 2}});
    EXPECT_NEAR(spatial_entropy(weighted, 2), 4.0 / 6.0 * 0.8112781244591328, 1e-12);

    EXPECT_EQ(spatial_entropy(snapshot_of({4, 4}, {}), 2), 0.0);
}

TEST(Entropy, PatchAlignedTranslationInvariance) {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const GridDims dims{32, 24};
        std::vector<std::pair<GridCoord, int>> items;
        std::vector<bool> used(32 * 24, false);
        while (items.size() < 150) {
            const int x = static_cast<int>(rng.below(32)), y = static_cast<int>(rng.below(24));
            if (used[y * 32 + x]) continue;
            used[y * 32 + x] = true;
            items.push_back({{x, y}, 1 + static_cast<int>(rng.below(4))});
        }
        auto shifted = items;
        const int sx = 8 * static_cast<int>(rng.below(4)), sy = 8 * static_cast<int>(rng.below(3));
        for (auto& [at, label] : shifted) at = {(at.x + sx) % 32, (at.y + sy) % 24};
        EXPECT_NEAR(spatial_entropy(snapshot_of(dims, items), 8), spatial_entropy(snapshot_of(dims, shifted), 8), 1e-12);
    }
}

TEST(Entropy, SortedBelowShuffled) {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::pair<GridCoord, int>> sorted, shuffled;
        std::vector<GridCoord> cells;
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x) cells.push_back({x, y});
        for (std::size_t i = cells.size(); i > 1; --i) std::swap(cells[i - 1], cells[rng.below(i)]);
        for (std::size_t i = 0; i < 200; ++i) {
            const int label = 1 + static_cast<int>(i / 50);
            const int qx = (label - 1) % 2, qy = (label - 1) / 2;
            sorted.push_back({{qx * 16 + static_cast<int>(i % 50) % 10, qy * 16 + static_cast<int>(i % 50) / 10}, label});
            shuffled.push_back({cells[i], label});
        }
        EXPECT_LT(spatial_entropy(snapshot_of({32, 32}, sorted)), spatial_entropy(snapshot_of({32, 32}, shuffled)));
    }
}
